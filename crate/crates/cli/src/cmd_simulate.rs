//! `clat simulate`: replicated studies over the four designs, with the two
//! preset experiments and an optional parameter grid.

use std::path::PathBuf;

use serde::Serialize;

use clat_core::sim::{
    self, CaseConfig, CaseKind, MethodSpec, Pi1Mode, ReplicationSummary, Sided,
};

use crate::fail::{CliResult, Failure};
use crate::output;
use crate::{validation, CaseArg, PresetArg, SimulateArgs};

// Wall-clock timings stay on the console: the output files must be
// byte-identical across runs with the same seed.
#[derive(Serialize)]
struct MethodRow {
    method: String,
    et: f64,
    ev: f64,
    mfdr: f64,
    fdr: f64,
    mfnr: f64,
    true_rejection_proportion: f64,
    n_errors: usize,
}

#[derive(Serialize)]
struct GridPointSummary {
    grid_value: f64,
    n_reps: usize,
    q: f64,
    methods: Vec<MethodRow>,
}

#[derive(Serialize)]
struct AverageRRow {
    beta: f64,
    sigma: f64,
    mu: f64,
    mean_r: f64,
    n_used: usize,
    n_excluded: usize,
}

fn parse_methods(s: &str, sided: Sided, pi1: Pi1Mode, kind: CaseKind) -> CliResult<Vec<MethodSpec>> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        out.push(match tok {
            "clat" => MethodSpec::Clat { sided, pi1 },
            "bh" => MethodSpec::Bh { sided },
            "lfdr-oracle" => MethodSpec::LfdrOracle,
            "lfdr-sc" => MethodSpec::LfdrSc,
            "lfdr-em" => MethodSpec::LfdrEm {
                components: sim::default_em_components(kind),
            },
            other => {
                return Err(validation(format!(
                    "unknown method '{other}' (expected clat, bh, lfdr-oracle, lfdr-sc, lfdr-em)"
                )))
            }
        });
    }
    if out.is_empty() {
        return Err(validation("no methods selected"));
    }
    Ok(out)
}

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err(validation(format!(
            "grid must be MIN:MAX or MIN:MAX:POINTS, got '{s}'"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| validation(format!("bad grid minimum '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| validation(format!("bad grid maximum '{}'", parts[1])))?;
    let k: usize = match parts.get(2) {
        Some(t) => t
            .parse()
            .map_err(|_| validation(format!("bad grid point count '{t}'")))?,
        None => 8,
    };
    if k < 2 || !(lo < hi) {
        return Err(validation("grid needs MIN < MAX and POINTS >= 2"));
    }
    Ok((0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect())
}

fn write_outputs(
    prefix: &str,
    rows: &[(f64, ReplicationSummary)],
) -> CliResult<(PathBuf, PathBuf)> {
    let prefix = PathBuf::from(prefix);
    let csv_path = prefix.with_extension("replicates.csv");
    let json_path = prefix.with_extension("summary.json");
    let mut csv = String::from("grid_value,replicate,method,v,t,r\n");
    for (gv, summary) in rows {
        for rec in &summary.records {
            csv.push_str(&format!(
                "{gv:.17e},{},{},{},{},{}\n",
                rec.replicate, rec.method, rec.v, rec.t, rec.r
            ));
        }
    }
    std::fs::write(&csv_path, csv)?;
    let summaries: Vec<GridPointSummary> = rows
        .iter()
        .map(|(gv, s)| GridPointSummary {
            grid_value: *gv,
            n_reps: s.n_reps,
            q: s.q,
            methods: s
                .methods
                .iter()
                .map(|m| MethodRow {
                    method: m.method.clone(),
                    et: m.et,
                    ev: m.ev,
                    mfdr: m.mfdr,
                    fdr: m.fdr,
                    mfnr: m.mfnr,
                    true_rejection_proportion: m.true_rejection_proportion,
                    n_errors: m.n_errors,
                })
                .collect(),
        })
        .collect();
    output::write_json(&json_path, &summaries)?;
    Ok((csv_path, json_path))
}

fn run_table2(args: &SimulateArgs) -> CliResult<()> {
    let rows_spec = [(0.6, 0.8, 1.5), (0.7, 0.8, 2.0), (0.7, 0.5, 2.5)];
    let reps = if args.reps == 500 { 100 } else { args.reps };
    let mut rows = Vec::new();
    for (beta, sigma, mu) in rows_spec {
        let r = sim::average_r(beta, sigma, mu, 100_000, reps, args.seed).map_err(Failure::from)?;
        rows.push(AverageRRow {
            beta,
            sigma,
            mu,
            mean_r: r.mean_r,
            n_used: r.n_used,
            n_excluded: r.n_excluded,
        });
    }
    let prefix = PathBuf::from(&args.out_prefix);
    let csv_path = prefix.with_extension("replicates.csv");
    let json_path = prefix.with_extension("summary.json");
    let mut csv = String::from("beta,sigma,mu,mean_r,n_used,n_excluded\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{:.17e},{},{}\n",
            r.beta, r.sigma, r.mu, r.mean_r, r.n_used, r.n_excluded
        ));
    }
    std::fs::write(&csv_path, csv)?;
    output::write_json(&json_path, &rows)?;
    for r in &rows {
        println!(
            "beta={} sigma={} mu={}: mean r = {:.2} over {} replicates",
            r.beta, r.sigma, r.mu, r.mean_r, r.n_used
        );
    }
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

pub fn run(mut args: SimulateArgs) -> CliResult<()> {
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| validation(format!("cannot size the worker pool: {e}")))?;
    }
    if args.preset == Some(PresetArg::Table2) {
        return run_table2(&args);
    }
    if args.preset == Some(PresetArg::Table1) {
        // spike-design comparison study at its published configuration
        args.case = Some(CaseArg::Iii);
        args.n = 5000;
        args.beta = 0.2;
        args.alpha = 0.5;
        args.l = 1.2;
        args.q = 0.1;
        args.sided = crate::SidedArg::Right;
        args.pi1_known = false;
        if args.reps == 500 {
            args.reps = 100;
        }
        if args.methods == "clat,bh,lfdr-sc" {
            // keep the default trio
        }
    }
    let Some(case) = args.case else {
        return Err(validation("choose --case I|II|III|IV or a --preset"));
    };
    if !(args.q >= 0.0 && args.q < 1.0) {
        return Err(validation(format!("q must lie in [0,1), got {}", args.q)));
    }

    let base = match case {
        CaseArg::I => CaseConfig::case_i(args.n, args.beta, args.p1, args.mu, args.sigma, args.seed),
        CaseArg::Ii => CaseConfig::case_ii(
            args.n, args.beta, args.p1, args.mu, args.sigma, args.d, args.seed,
        ),
        CaseArg::Iii => CaseConfig::case_iii(args.n, args.beta, args.alpha, args.l, args.seed),
        CaseArg::Iv => CaseConfig::case_iv(
            args.n, args.beta, args.p1, args.mu, args.sigma, args.sigma2, args.seed,
        ),
    };
    base.validate().map_err(Failure::from)?;
    let pi1_mode = if args.pi1_known {
        Pi1Mode::Known
    } else {
        Pi1Mode::Zero
    };
    let methods = parse_methods(&args.methods, args.sided.into(), pi1_mode, base.kind)?;

    let grid_values: Vec<Option<f64>> = match &args.grid {
        Some(g) => parse_grid(g)?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut rows = Vec::new();
    for gv in grid_values {
        let mut cfg = base.clone();
        let value = match (gv, base.kind) {
            (Some(v), CaseKind::III) => {
                cfg.alpha = v;
                v
            }
            (Some(v), _) => {
                cfg.mu = v;
                v
            }
            (None, CaseKind::III) => cfg.alpha,
            (None, _) => cfg.mu,
        };
        cfg.validate().map_err(Failure::from)?;
        let summary = sim::replicate(&cfg, &methods, args.q, args.reps).map_err(Failure::from)?;
        for m in &summary.methods {
            println!(
                "grid={value:.4} {:12} ET={:9.2} EV={:8.2} mFDR={:.4} FDR={:.4} TP%={:.4} ({:.1} ms/rep)",
                m.method, m.et, m.ev, m.mfdr, m.fdr, m.true_rejection_proportion, m.mean_runtime_ms
            );
        }
        rows.push((value, summary));
    }
    let (csv_path, json_path) = write_outputs(&args.out_prefix, &rows)?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}
