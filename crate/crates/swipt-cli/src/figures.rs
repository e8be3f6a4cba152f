//! Figure-reproduction recipes: each emits one plot-ready CSV holding the
//! analytic curve, the Monte Carlo curve (mean and standard error), and —
//! where the recipe calls for them — asymptotic curves.

use std::path::PathBuf;

use rayon::prelude::*;
use swipt_core::asymptotics::{aser_asym, outage_asym, AsymptoticRegime};
use swipt_core::mcsim::{empirical_outage, semi_analytic_aser};
use swipt_core::model::{ModulationScheme, ProtocolScheme};

use crate::commands::{throughput_scale, tidy, Ctx};
use crate::config::{apply_snr_db, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{self, num};

pub const RECIPES: &[&str] = &[
    "fig3-outage-asymptotics",
    "fig4-aser-asymptotics",
    "fig5-outage-vs-ratio",
    "fig6-throughput-vs-ratio",
    "fig7-throughput-vs-snr",
    "fig9-throughput-vs-eta",
    "fig10-aser-binary",
    "fig13-aser-mary",
];

pub fn run_figure(ctx: &Ctx, recipe: &str) -> CliResult<()> {
    let (headers, rows) = match recipe {
        "fig3-outage-asymptotics" => fig_outage_asymptotics(ctx)?,
        "fig4-aser-asymptotics" => fig_aser_asymptotics(ctx)?,
        "fig5-outage-vs-ratio" => fig_outage_vs_ratio(ctx)?,
        "fig6-throughput-vs-ratio" => fig_throughput_vs_ratio(ctx)?,
        "fig7-throughput-vs-snr" => fig_throughput_vs_snr(ctx)?,
        "fig9-throughput-vs-eta" => fig_throughput_vs_eta(ctx)?,
        "fig10-aser-binary" => fig_aser_binary(ctx)?,
        "fig13-aser-mary" => fig_aser_mary(ctx)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown recipe {other:?}; available: {}",
                RECIPES.join(", ")
            )));
        }
    };
    let dir = ctx.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{recipe}.csv"));
    output::emit_csv(Some(&path), &headers, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

type Table = (Vec<&'static str>, Vec<Vec<String>>);

fn snr_grid(max_db: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    let mut db = 0.0;
    while db <= max_db + 1e-9 {
        xs.push(db);
        db += 2.0;
    }
    xs
}

fn at_snr(base: &RunConfig, db: f64) -> RunConfig {
    let mut run = base.clone();
    apply_snr_db(&mut run.system, db);
    run
}

/// Analytic value, Monte Carlo mean, and Monte Carlo standard error for the
/// outage probability at one operating point.
fn outage_cols(ctx: &Ctx, run: &RunConfig) -> CliResult<(f64, f64, f64)> {
    let la = swipt_core::pipeline::LinkAnalysis::new(&run.system, run.proto, run.modulation, &ctx.opts)?;
    let analytic = la.outage()?.value;
    let plan = swipt_core::mcsim::SimPlan {
        params: *la.params(),
        lambda_sr: run.system.lambda_sr,
        lambda_rd: run.system.lambda_rd,
        trials: ctx.trials,
        seed: ctx.seed,
    };
    let sim = empirical_outage(&plan, la.gamma_th())?;
    Ok((analytic, sim.mean, sim.std_error))
}

fn aser_cols(ctx: &Ctx, run: &RunConfig) -> CliResult<(f64, f64, f64)> {
    let la = swipt_core::pipeline::LinkAnalysis::new(&run.system, run.proto, run.modulation, &ctx.opts)?;
    let analytic = la.aser()?;
    let plan = swipt_core::mcsim::SimPlan {
        params: *la.params(),
        lambda_sr: run.system.lambda_sr,
        lambda_rd: run.system.lambda_rd,
        trials: ctx.trials,
        seed: ctx.seed,
    };
    let sim = semi_analytic_aser(&plan, run.modulation)?;
    Ok((analytic, sim.mean, sim.std_error))
}

fn throughput_cols(ctx: &Ctx, run: &RunConfig) -> CliResult<(f64, f64, f64)> {
    let (p, p_mc, p_se) = outage_cols(ctx, run)?;
    let scale = throughput_scale(run.proto, run.system.rate)?;
    Ok((scale * (1.0 - p), scale * (1.0 - p_mc), scale * p_se))
}

fn both_protocols(ratio: f64) -> [ProtocolScheme; 2] {
    [ProtocolScheme::Ts { beta: ratio }, ProtocolScheme::Ps { theta: ratio }]
}

fn fig_outage_asymptotics(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "snr_db", "ts_outage", "ts_outage_mc", "ts_outage_se", "ts_asym", "ts_asym_dominant",
        "ps_outage", "ps_outage_mc", "ps_outage_se", "ps_asym", "ps_asym_dominant",
    ];
    let rows = snr_grid(40.0)
        .par_iter()
        .map(|&db| -> CliResult<Vec<String>> {
            let mut row = vec![num(db)];
            for proto in both_protocols(0.5) {
                let mut run = at_snr(&ctx.run, db);
                run.proto = proto;
                run.modulation = ModulationScheme::Dpsk { m: 2 };
                let (analytic, mc, se) = outage_cols(ctx, &run)?;
                let params =
                    swipt_core::model::unified_params(&run.system, run.proto, run.modulation)?;
                let gamma_th = run.system.gamma_th();
                let (l_sr, l_rd) = (run.system.lambda_sr, run.system.lambda_rd);
                let first =
                    outage_asym(&params, l_sr, l_rd, gamma_th, AsymptoticRegime::FirstHopHigh)?;
                let dom =
                    outage_asym(&params, l_sr, l_rd, gamma_th, AsymptoticRegime::DominantTerm)?;
                row.extend([num(analytic), num(mc), num(se), num(first.value), num(dom.value)]);
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((headers, rows))
}

fn fig_aser_asymptotics(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "snr_db", "ts_aser", "ts_aser_mc", "ts_aser_se", "ts_aser_asym", "ps_aser", "ps_aser_mc",
        "ps_aser_se", "ps_aser_asym",
    ];
    let rows = snr_grid(40.0)
        .par_iter()
        .map(|&db| -> CliResult<Vec<String>> {
            let mut row = vec![num(db)];
            for proto in both_protocols(0.5) {
                let mut run = at_snr(&ctx.run, db);
                run.proto = proto;
                run.modulation = ModulationScheme::Dpsk { m: 2 };
                let (analytic, mc, se) = aser_cols(ctx, &run)?;
                let params =
                    swipt_core::model::unified_params(&run.system, run.proto, run.modulation)?;
                let asym = aser_asym(
                    &params,
                    run.system.lambda_sr,
                    run.system.lambda_rd,
                    run.modulation,
                    AsymptoticRegime::FirstHopHigh,
                )?;
                row.extend([num(analytic), num(mc), num(se), num(asym.value)]);
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((headers, rows))
}

fn ratio_grid() -> Vec<f64> {
    (1..=49).map(|i| tidy(0.02 * i as f64)).collect()
}

fn fig_outage_vs_ratio(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "ratio", "ts_outage", "ts_outage_mc", "ts_outage_se", "ps_outage", "ps_outage_mc",
        "ps_outage_se",
    ];
    let rows = ratio_grid()
        .par_iter()
        .map(|&r| -> CliResult<Vec<String>> {
            let mut row = vec![num(r)];
            for proto in both_protocols(r) {
                let mut run = ctx.run.clone();
                run.proto = proto;
                let (analytic, mc, se) = outage_cols(ctx, &run)?;
                row.extend([num(analytic), num(mc), num(se)]);
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((headers, rows))
}

fn fig_throughput_vs_ratio(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "ratio", "ts_throughput", "ts_throughput_mc", "ts_throughput_se", "ps_throughput",
        "ps_throughput_mc", "ps_throughput_se",
    ];
    let rows = ratio_grid()
        .par_iter()
        .map(|&r| -> CliResult<Vec<String>> {
            let mut row = vec![num(r)];
            for proto in both_protocols(r) {
                let mut run = ctx.run.clone();
                run.proto = proto;
                let (analytic, mc, se) = throughput_cols(ctx, &run)?;
                row.extend([num(analytic), num(mc), num(se)]);
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((headers, rows))
}

fn fig_throughput_vs_snr(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "snr_db", "ts_throughput", "ts_throughput_mc", "ts_throughput_se", "ps_throughput",
        "ps_throughput_mc", "ps_throughput_se",
    ];
    let rows = snr_grid(30.0)
        .par_iter()
        .map(|&db| -> CliResult<Vec<String>> {
            let mut row = vec![num(db)];
            for proto in both_protocols(0.5) {
                let mut run = at_snr(&ctx.run, db);
                run.proto = proto;
                let (analytic, mc, se) = throughput_cols(ctx, &run)?;
                row.extend([num(analytic), num(mc), num(se)]);
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((headers, rows))
}

fn fig_throughput_vs_eta(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "eta", "ts_throughput", "ts_throughput_mc", "ts_throughput_se", "ps_throughput",
        "ps_throughput_mc", "ps_throughput_se",
    ];
    let etas: Vec<f64> = (2..=20).map(|i| tidy(0.05 * i as f64)).collect();
    let rows = etas
        .par_iter()
        .map(|&eta| -> CliResult<Vec<String>> {
            let mut row = vec![num(eta)];
            for proto in both_protocols(0.5) {
                let mut run = ctx.run.clone();
                run.system.eta = eta;
                run.proto = proto;
                let (analytic, mc, se) = throughput_cols(ctx, &run)?;
                row.extend([num(analytic), num(mc), num(se)]);
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((headers, rows))
}

fn fig_aser_modulations(ctx: &Ctx, m_size: u32) -> CliResult<Vec<Vec<String>>> {
    snr_grid(30.0)
        .par_iter()
        .map(|&db| -> CliResult<Vec<String>> {
            let mut row = vec![num(db)];
            for proto in both_protocols(0.5) {
                for modulation in
                    [ModulationScheme::Dpsk { m: m_size }, ModulationScheme::Fsk { m: m_size }]
                {
                    let mut run = at_snr(&ctx.run, db);
                    run.proto = proto;
                    run.modulation = modulation;
                    let (analytic, mc, se) = aser_cols(ctx, &run)?;
                    row.extend([num(analytic), num(mc), num(se)]);
                }
            }
            Ok(row)
        })
        .collect()
}

fn fig_aser_binary(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "snr_db", "ts_bdpsk", "ts_bdpsk_mc", "ts_bdpsk_se", "ts_bfsk", "ts_bfsk_mc", "ts_bfsk_se",
        "ps_bdpsk", "ps_bdpsk_mc", "ps_bdpsk_se", "ps_bfsk", "ps_bfsk_mc", "ps_bfsk_se",
    ];
    Ok((headers, fig_aser_modulations(ctx, 2)?))
}

fn fig_aser_mary(ctx: &Ctx) -> CliResult<Table> {
    let headers = vec![
        "snr_db", "ts_dpsk8", "ts_dpsk8_mc", "ts_dpsk8_se", "ts_fsk8", "ts_fsk8_mc", "ts_fsk8_se",
        "ps_dpsk8", "ps_dpsk8_mc", "ps_dpsk8_se", "ps_fsk8", "ps_fsk8_mc", "ps_fsk8_se",
    ];
    Ok((headers, fig_aser_modulations(ctx, 8)?))
}
