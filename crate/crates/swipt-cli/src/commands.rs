//! Subcommand bodies: single-point evaluation, parameter sweeps, Monte
//! Carlo validation, and the moment table. Figure recipes live in
//! `figures`.

use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use swipt_core::mcsim::{empirical_mgf, empirical_outage, semi_analytic_aser, SimPlan};
use swipt_core::metrics;
use swipt_core::model::{ModulationScheme, ProtocolScheme};
use swipt_core::moments::{moment_closed_form, moment_quadrature, MomentRequest};
use swipt_core::pipeline::{point_report, AnalysisOptions, LinkAnalysis, PointReport};

use crate::config::{apply_snr_db, snr_db_of, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output;
use crate::SweepVariable;

/// Everything a subcommand needs besides its own flags.
pub struct Ctx {
    pub run: RunConfig,
    pub opts: AnalysisOptions,
    pub seed: u64,
    pub trials: u64,
    pub out: Option<PathBuf>,
}

impl Ctx {
    fn analysis(&self, run: &RunConfig) -> CliResult<LinkAnalysis> {
        Ok(LinkAnalysis::new(&run.system, run.proto, run.modulation, &self.opts)?)
    }

    fn plan(&self, la: &LinkAnalysis, run: &RunConfig) -> SimPlan {
        SimPlan {
            params: *la.params(),
            lambda_sr: run.system.lambda_sr,
            lambda_rd: run.system.lambda_rd,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

fn scheme_names(run: &RunConfig) -> (&'static str, f64, &'static str) {
    let (proto, ratio) = match run.proto {
        ProtocolScheme::Ts { beta } => ("ts", beta),
        ProtocolScheme::Ps { theta } => ("ps", theta),
    };
    let modulation = match run.modulation {
        ModulationScheme::Dpsk { .. } => "dpsk",
        ModulationScheme::Fsk { .. } => "fsk",
    };
    (proto, ratio, modulation)
}

const POINT_HEADERS: &[&str] = &[
    "snr_db", "protocol", "ratio", "modulation", "m", "gamma_th", "asnr", "aof", "outage",
    "outage_bound", "throughput", "aser", "pade_order",
];

fn point_row(run: &RunConfig, rep: &PointReport) -> Vec<String> {
    let (proto, ratio, modulation) = scheme_names(run);
    vec![
        output::num(snr_db_of(&run.system)),
        proto.to_string(),
        output::num(ratio),
        modulation.to_string(),
        run.modulation.m().to_string(),
        output::num(run.system.gamma_th()),
        output::num(rep.asnr),
        output::num(rep.aof),
        output::num(rep.outage.value),
        output::num(rep.outage.error_estimate),
        output::num(rep.throughput),
        output::num(rep.aser),
        rep.pade_order.to_string(),
    ]
}

// ---------------------------------------------------------------------------
// point
// ---------------------------------------------------------------------------

pub fn run_point(ctx: &Ctx, with_mc: bool) -> CliResult<()> {
    let run = ctx.run.clone();
    let la = ctx.analysis(&run)?;
    let rep = la.report()?;
    let (proto, ratio, modulation) = scheme_names(&run);

    let mut rows: Vec<(&str, String)> = vec![
        ("snr_db", output::num(snr_db_of(&run.system))),
        ("protocol", format!("{proto} (ratio {ratio})")),
        ("modulation", format!("{modulation} (M = {})", run.modulation.m())),
        ("gamma_th", output::num(run.system.gamma_th())),
        ("pade_order", rep.pade_order.to_string()),
        ("asnr", output::num(rep.asnr)),
        ("aof", output::num(rep.aof)),
        ("outage", format!("{} (bound {:.3e})", output::num(rep.outage.value), rep.outage.error_estimate)),
        ("throughput", output::num(rep.throughput)),
        ("aser", output::num(rep.aser)),
    ];

    if with_mc {
        let plan = ctx.plan(&la, &run);
        let sim_out = empirical_outage(&plan, la.gamma_th())?;
        let sim_aser = semi_analytic_aser(&plan, run.modulation)?;
        let d_out = (rep.outage.value - sim_out.mean).abs() / sim_out.std_error;
        let d_aser = (rep.aser - sim_aser.mean).abs() / sim_aser.std_error;
        rows.push((
            "outage_mc",
            format!("{} ± {:.3e} ({d_out:.2} se, {} trials)", output::num(sim_out.mean), sim_out.std_error, plan.trials),
        ));
        rows.push((
            "aser_mc",
            format!("{} ± {:.3e} ({d_aser:.2} se, {} trials)", output::num(sim_aser.mean), sim_aser.std_error, plan.trials),
        ));
    }

    output::print_kv_table(&rows);
    if let Some(path) = &ctx.out {
        output::emit_csv(Some(path), POINT_HEADERS, &[point_row(&run, &rep)])?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

/// Parses `start:stop:step` with start < stop and step > 0.
pub fn parse_range(text: &str) -> CliResult<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("range must be start:stop:step, got {text:?}")));
    }
    let mut vals = [0.0; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("range component {p:?} is not a number")))?;
    }
    let [start, stop, step] = vals;
    if !(step > 0.0) {
        return Err(CliError::Usage(format!("range step must be positive, got {step}")));
    }
    if !(start < stop) {
        return Err(CliError::Usage(format!("empty range: start {start} must lie below stop {stop}")));
    }
    Ok((start, stop, step))
}

/// Snaps accumulated-step noise (`0.2 + 0.1 = 0.30000000000000004`) to the
/// decimal value the user meant; 12 significant digits is far below any
/// physically meaningful resolution yet removes every last-ulp artifact.
pub(crate) fn tidy(x: f64) -> f64 {
    format!("{x:.12e}").parse().unwrap()
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    let mut k = 0u64;
    loop {
        let x = tidy(start + k as f64 * step);
        if x > stop + 1e-9 * step {
            break;
        }
        xs.push(x);
        k += 1;
    }
    xs
}

/// Returns a copy of `run` with the swept variable set to `x`.
pub fn apply_variable(run: &RunConfig, var: SweepVariable, x: f64) -> CliResult<RunConfig> {
    let mut out = run.clone();
    match var {
        SweepVariable::Theta => out.proto = ProtocolScheme::Ps { theta: x },
        SweepVariable::Beta => out.proto = ProtocolScheme::Ts { beta: x },
        SweepVariable::Eta => out.system.eta = x,
        SweepVariable::SnrDb => apply_snr_db(&mut out.system, x),
        SweepVariable::M => {
            let m = x.round();
            if (x - m).abs() > 1e-9 || m < 2.0 {
                return Err(CliError::Usage(format!(
                    "M sweep values must be integers >= 2, got {x}"
                )));
            }
            out.modulation = match out.modulation {
                ModulationScheme::Dpsk { .. } => ModulationScheme::Dpsk { m: m as u32 },
                ModulationScheme::Fsk { .. } => ModulationScheme::Fsk { m: m as u32 },
            };
        }
        SweepVariable::GammaTh => {
            if !(x > 0.0) {
                return Err(CliError::Usage(format!("gamma_th must be positive, got {x}")));
            }
            out.system.rate = (1.0 + x).log2();
        }
    }
    Ok(out)
}

pub fn run_sweep(ctx: &Ctx, var: SweepVariable, range: &str) -> CliResult<()> {
    let (start, stop, step) = parse_range(range)?;
    let xs = grid(start, stop, step);
    let runs: Vec<RunConfig> =
        xs.iter().map(|&x| apply_variable(&ctx.run, var, x)).collect::<CliResult<_>>()?;

    let reports: Vec<PointReport> = runs
        .par_iter()
        .map(|r| point_report(&r.system, r.proto, r.modulation, &ctx.opts))
        .collect::<swipt_core::Result<_>>()?;

    let rows: Vec<Vec<String>> =
        runs.iter().zip(&reports).map(|(r, rep)| point_row(r, rep)).collect();
    output::emit_csv(ctx.out.as_deref(), POINT_HEADERS, &rows)?;

    // Extremum summary over the grid; printed to stderr when the CSV itself
    // went to stdout so the data stream stays parseable.
    let var_name = var.name();
    let pick = |better: &dyn Fn(f64, f64) -> bool, metric: &dyn Fn(&PointReport) -> f64| {
        let mut best = 0;
        for i in 1..reports.len() {
            if better(metric(&reports[i]), metric(&reports[best])) {
                best = i;
            }
        }
        (xs[best], metric(&reports[best]))
    };
    let (x_out, v_out) = pick(&|a, b| a < b, &|r| r.outage.value);
    let (x_tau, v_tau) = pick(&|a, b| a > b, &|r| r.throughput);
    let (x_aser, v_aser) = pick(&|a, b| a < b, &|r| r.aser);
    let summary = [
        format!("outage argmin:     {var_name} = {}, outage = {}", output::num(x_out), output::num(v_out)),
        format!("throughput argmax: {var_name} = {}, throughput = {}", output::num(x_tau), output::num(v_tau)),
        format!("aser argmin:       {var_name} = {}, aser = {}", output::num(x_aser), output::num(v_aser)),
    ];
    for line in &summary {
        if ctx.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

pub fn run_validate(ctx: &Ctx) -> CliResult<()> {
    let run = ctx.run.clone();
    let la = ctx.analysis(&run)?;
    let rep = la.report()?;
    let plan = ctx.plan(&la, &run);

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut push = |metric: String, analytic: f64, mc_mean: f64, mc_se: f64| {
        let delta = (analytic - mc_mean).abs() / mc_se;
        rows.push(vec![
            metric,
            output::num(analytic),
            output::num(mc_mean),
            format!("{mc_se:.3e}"),
            format!("{delta:.2}"),
            if delta <= 3.0 { "ok".to_string() } else { "off".to_string() },
        ]);
    };

    let sim = empirical_outage(&plan, la.gamma_th())?;
    push("outage".into(), rep.outage.value, sim.mean, sim.std_error);

    // MGF probes at s = k/ASNR, where the Laplace argument is order one.
    for k in [0.5, 1.0, 2.0] {
        let s = k / rep.asnr;
        let analytic = la.pade().eval(Complex64::new(s, 0.0))?.re;
        let sim = empirical_mgf(&plan, s)?;
        push(format!("mgf@{}", output::num(s)), analytic, sim.mean, sim.std_error);
    }

    let sim = semi_analytic_aser(&plan, run.modulation)?;
    push("aser".into(), rep.aser, sim.mean, sim.std_error);

    let headers = ["metric", "analytic", "monte_carlo", "std_error", "delta_se", "verdict"];
    println!("validation at {} trials, seed {}:", plan.trials, plan.seed);
    output::print_table(&headers, &rows);
    if let Some(path) = &ctx.out {
        output::emit_csv(Some(path), &headers, &rows)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

pub fn run_moments(ctx: &Ctx, max_order: u32, check: bool) -> CliResult<()> {
    let run = ctx.run.clone();
    let la = ctx.analysis(&run)?;
    let (lambda_sr, lambda_rd) = (run.system.lambda_sr, run.system.lambda_rd);

    let mut headers = vec!["n", "moment"];
    if check {
        headers.extend(["quadrature", "rel_deviation"]);
    }
    let mut rows = Vec::new();
    for n in 1..=max_order {
        let req = MomentRequest { params: *la.params(), lambda_sr, lambda_rd, n };
        let cf = moment_closed_form(&req)?;
        let mut row = vec![n.to_string(), output::num(cf)];
        if check {
            let quad = moment_quadrature(&req)?;
            row.push(output::num(quad));
            row.push(format!("{:.3e}", ((cf - quad) / quad).abs()));
        }
        rows.push(row);
    }
    output::print_table(&headers, &rows);
    println!();
    output::print_kv_table(&[
        ("asnr", output::num(la.asnr()?)),
        ("aof", output::num(la.aof()?)),
    ]);
    if let Some(path) = &ctx.out {
        output::emit_csv(Some(path), &headers, &rows)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// helpers shared with figures
// ---------------------------------------------------------------------------

/// Outage throughput scale: throughput is K·(1 − P_out) with K fixed by the
/// protocol and rate, so Monte Carlo outage converts linearly.
pub fn throughput_scale(proto: ProtocolScheme, rate: f64) -> CliResult<f64> {
    Ok(metrics::throughput(proto, 0.0, rate)?)
}
