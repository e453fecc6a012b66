//! `clat bench`: time the interval search on synthetic uniform p-values.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use clat_core::clat::{clat_search, ClatConfig, PValueVector, Side};
use clat_core::dist::DistributionSpec;

use crate::fail::{CliResult, Failure};
use crate::output;
use crate::{validation, BenchArgs};

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    seconds: f64,
    n_rejected: usize,
}

pub fn run(args: BenchArgs) -> CliResult<()> {
    if !(args.q > 0.0 && args.q < 1.0) {
        return Err(validation(format!("q must lie in (0,1), got {}", args.q)));
    }
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| validation(format!("bad size '{t}'")))
        })
        .collect::<CliResult<_>>()?;
    let cfg = ClatConfig::new(args.q, DistributionSpec::StandardNormal).map_err(Failure::from)?;
    let mut rows = Vec::new();
    for n in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ n as u64);
        let mut values: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        values.sort_unstable_by(f64::total_cmp);
        let p = PValueVector::new(values, Side::Right).map_err(Failure::from)?;
        let start = Instant::now();
        let r = clat_search(&p, &cfg).map_err(Failure::from)?;
        rows.push(BenchRow {
            n,
            seconds: start.elapsed().as_secs_f64(),
            n_rejected: r.n_rejected,
        });
    }
    println!("{}", output::to_json_string(&rows)?);
    Ok(())
}
