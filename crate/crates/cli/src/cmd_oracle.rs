//! `clat oracle`: population-level analysis of a known two-group model.

use clat_core::dist::TwoGroupModel;
use clat_core::oracle;

use crate::fail::{CliResult, Failure};
use crate::output;
use crate::specs::parse_spec;
use crate::{validation, OracleArgs};

pub fn run(args: OracleArgs) -> CliResult<()> {
    if !(args.q > 0.0 && args.q < 1.0) {
        return Err(validation(format!("q must lie in (0,1), got {}", args.q)));
    }
    let null = parse_spec(&args.null)?;
    let alt = parse_spec(&args.alt)?;
    let model = TwoGroupModel::new(args.pi1, null, alt).map_err(Failure::from)?;
    let report = oracle::oracle_report(&model, args.q, args.a_grid).map_err(Failure::from)?;
    match &args.out {
        Some(path) => {
            output::write_json(path, &report)?;
            println!("wrote {}", path.display());
        }
        None => println!("{}", output::to_json_string(&report)?),
    }
    Ok(())
}
