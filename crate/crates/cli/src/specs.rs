//! Distribution spec strings: a colon shorthand for the scalar families and
//! raw JSON (the serde form of `DistributionSpec`) for anything nested.
//!
//! Shorthand grammar:
//!   normal | normal:MU:SIGMA | t:DF | t:DF:MU:SIGMA | uniform |
//!   gg:GAMMA:MU | spike:N:ALPHA:L | normal-pair:P1:MU:SIGMA

use clat_core::dist::DistributionSpec;

use crate::fail::{CliResult, Failure};
use crate::validation;

pub fn parse_spec(s: &str) -> CliResult<DistributionSpec> {
    let s = s.trim();
    if s.starts_with('{') {
        let spec: DistributionSpec = serde_json::from_str(s)
            .map_err(|e| validation(format!("bad distribution JSON: {e}")))?;
        spec.validate().map_err(Failure::from)?;
        return Ok(spec);
    }
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| -> CliResult<f64> {
        t.parse::<f64>()
            .map_err(|_| validation(format!("bad number '{t}' in spec '{s}'")))
    };
    let spec = match (parts[0], parts.len()) {
        ("normal", 1) => Ok(DistributionSpec::StandardNormal),
        ("normal", 3) => DistributionSpec::normal(num(parts[1])?, num(parts[2])?)
            .map_err(Failure::from),
        ("t", 2) => DistributionSpec::student_t(num(parts[1])?).map_err(Failure::from),
        ("t", 4) => {
            let df = num(parts[1])?;
            let mu = num(parts[2])?;
            let sigma = num(parts[3])?;
            DistributionSpec::student_t(df)
                .and_then(|b| DistributionSpec::location_scale(b, mu, sigma))
                .map_err(Failure::from)
        }
        ("uniform", 1) => Ok(DistributionSpec::Uniform01),
        ("gg", 3) => DistributionSpec::generalized_gaussian(num(parts[1])?, num(parts[2])?)
            .map_err(Failure::from),
        ("spike", 4) => {
            let n = parts[1]
                .parse::<u64>()
                .map_err(|_| validation(format!("bad count '{}' in spec '{s}'", parts[1])))?;
            DistributionSpec::spike_triangle(n, num(parts[2])?, num(parts[3])?)
                .map_err(Failure::from)
        }
        ("normal-pair", 4) => {
            let p1 = num(parts[1])?;
            let mu = num(parts[2])?;
            let sigma = num(parts[3])?;
            (|| {
                let up = DistributionSpec::normal(mu, sigma)?;
                let down = DistributionSpec::normal(-mu, sigma)?;
                DistributionSpec::finite_mixture(vec![p1, 1.0 - p1], vec![up, down])
            })()
            .map_err(Failure::from)
        }
        _ => Err(validation(format!(
            "unrecognized distribution spec '{s}' (try normal, normal:MU:SIGMA, t:DF, \
             t:DF:MU:SIGMA, uniform, gg:GAMMA:MU, spike:N:ALPHA:L, normal-pair:P1:MU:SIGMA, \
             or raw JSON)"
        ))),
    }?;
    Ok(spec)
}
