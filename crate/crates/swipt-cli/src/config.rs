//! Run configuration: a flat `key = value` text format with `[section]`
//! headers, chosen so any language can parse it with string splitting. The
//! three sections are `[system]`, `[protocol]`, and `[modulation]`; every
//! key is optional and falls back to the built-in default operating point
//! (SNR 20 dB, TS with β = 0.5, binary DPSK).

use std::collections::HashMap;
use std::path::Path;

use swipt_core::model::{ModulationScheme, ProtocolScheme, SystemConfig};

use crate::error::{CliError, CliResult};

/// Everything needed to pin one operating point.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub proto: ProtocolScheme,
    pub modulation: ModulationScheme,
}

const SYSTEM_KEYS: &[&str] = &[
    "snr_db", "ps", "eta", "alpha", "d_sr", "d_rd", "n0_ra", "n0_rc", "n0_rd", "lambda_sr",
    "lambda_rd", "sigma2_sr", "rate",
];

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: SystemConfig::with_snr_db(20.0).expect("default config is valid"),
            proto: ProtocolScheme::Ts { beta: 0.5 },
            modulation: ModulationScheme::Dpsk { m: 2 },
        }
    }
}

/// Reads the configuration file when given, otherwise returns the defaults.
/// The result is fully validated, so later stages can assume a legal point.
pub fn load(path: Option<&Path>) -> CliResult<RunConfig> {
    let run = match path {
        None => RunConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => {
                    CliError::Usage(format!("config file not found: {}", p.display()))
                }
                _ => CliError::Io(format!("cannot read {}: {e}", p.display())),
            })?;
            parse(&text)?
        }
    };
    run.system.validate()?;
    run.proto.validate()?;
    run.modulation.validate()?;
    Ok(run)
}

/// SNR in dB implied by a system configuration (Ps over the destination
/// noise density). This and `apply_snr_db` are the only places where the
/// CLI converts between dB and linear scale.
pub fn snr_db_of(system: &SystemConfig) -> f64 {
    10.0 * (system.ps / system.n0_rd).log10()
}

/// Re-points the noise densities at a target SNR, keeping the relay noise
/// split evenly between antenna and conversion stages.
pub fn apply_snr_db(system: &mut SystemConfig, snr_db: f64) {
    let n0 = system.ps * 10f64.powf(-snr_db / 10.0);
    system.n0_ra = 0.5 * n0;
    system.n0_rc = 0.5 * n0;
    system.n0_rd = n0;
}

fn parse(text: &str) -> CliResult<RunConfig> {
    let mut entries: HashMap<(String, String), String> = HashMap::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| usage(lineno, raw, "unterminated section header"))?
                .trim();
            if !["system", "protocol", "modulation"].contains(&name) {
                return Err(usage(lineno, raw, "unknown section (expected system, protocol, or modulation)"));
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(lineno, raw, "expected key = value"))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if section.is_empty() {
            return Err(usage(lineno, raw, "key appears before any [section] header"));
        }
        if entries.insert((section.clone(), key.clone()), value).is_some() {
            return Err(usage(lineno, raw, "duplicate key"));
        }
    }

    let mut run = RunConfig::default();

    // [system] — reject an SNR shorthand mixed with explicit noise densities,
    // then apply the SNR first so explicit fields can refine it.
    for key in entries.keys().filter(|(s, _)| s == "system").map(|(_, k)| k) {
        if !SYSTEM_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown [system] key: {key}")));
        }
    }
    let has_snr = entries.contains_key(&("system".into(), "snr_db".into()));
    let has_noise = ["n0_ra", "n0_rc", "n0_rd"]
        .iter()
        .any(|k| entries.contains_key(&("system".into(), (*k).to_string())));
    if has_snr && has_noise {
        return Err(CliError::Usage(
            "[system] snr_db and explicit n0_* keys are mutually exclusive".into(),
        ));
    }
    if let Some(v) = entries.get(&("system".into(), "ps".into())) {
        run.system.ps = num(v, "ps")?;
    }
    if let Some(v) = entries.get(&("system".into(), "snr_db".into())) {
        let db = num(v, "snr_db")?;
        apply_snr_db(&mut run.system, db);
    }
    macro_rules! set_field {
        ($($key:literal => $field:ident),* $(,)?) => {
            $(
                if let Some(v) = entries.get(&("system".into(), $key.into())) {
                    run.system.$field = num(v, $key)?;
                }
            )*
        };
    }
    set_field! {
        "eta" => eta,
        "alpha" => alpha,
        "d_sr" => d_sr,
        "d_rd" => d_rd,
        "n0_ra" => n0_ra,
        "n0_rc" => n0_rc,
        "n0_rd" => n0_rd,
        "lambda_sr" => lambda_sr,
        "lambda_rd" => lambda_rd,
        "sigma2_sr" => sigma2_sr,
        "rate" => rate,
    }

    // [protocol]
    let ratio = entries
        .get(&("protocol".into(), "ratio".into()))
        .map(|v| num(v, "ratio"))
        .transpose()?
        .unwrap_or(0.5);
    match entries.get(&("protocol".into(), "scheme".into())).map(String::as_str) {
        None => run.proto = ProtocolScheme::Ts { beta: ratio },
        Some("ts") => run.proto = ProtocolScheme::Ts { beta: ratio },
        Some("ps") => run.proto = ProtocolScheme::Ps { theta: ratio },
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown [protocol] scheme: {other} (expected ts or ps)"
            )));
        }
    }
    for key in entries.keys().filter(|(s, _)| s == "protocol").map(|(_, k)| k) {
        if !["scheme", "ratio"].contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown [protocol] key: {key}")));
        }
    }

    // [modulation]
    let m_size = entries
        .get(&("modulation".into(), "m".into()))
        .map(|v| {
            v.parse::<u32>()
                .map_err(|_| CliError::Usage(format!("[modulation] m must be an integer, got {v}")))
        })
        .transpose()?
        .unwrap_or(2);
    match entries.get(&("modulation".into(), "scheme".into())).map(String::as_str) {
        None | Some("dpsk") => run.modulation = ModulationScheme::Dpsk { m: m_size },
        Some("fsk") => run.modulation = ModulationScheme::Fsk { m: m_size },
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown [modulation] scheme: {other} (expected dpsk or fsk)"
            )));
        }
    }
    for key in entries.keys().filter(|(s, _)| s == "modulation").map(|(_, k)| k) {
        if !["scheme", "m"].contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown [modulation] key: {key}")));
        }
    }

    Ok(run)
}

fn usage(lineno: usize, line: &str, why: &str) -> CliError {
    CliError::Usage(format!("config line {}: {why}: {line:?}", lineno + 1))
}

fn num(v: &str, key: &str) -> CliResult<f64> {
    v.parse::<f64>()
        .map_err(|_| CliError::Usage(format!("value of {key} must be a number, got {v:?}")))
}
