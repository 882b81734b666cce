pub mod chain;
pub mod grid;
pub mod heat;
pub mod martingale;

use std::str::FromStr;

use crate::error::CliError;

/// `HEATLAB_BUDGET_CELLS` if set, otherwise `default`.
pub fn budget(default: usize) -> Result<usize, CliError> {
    match std::env::var("HEATLAB_BUDGET_CELLS") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "HEATLAB_BUDGET_CELLS must be a cell count, got {v:?}"
            ))
        }),
        Err(_) => Ok(default),
    }
}

/// Parses `a,b,c` into values of `T`.
pub fn parse_list<T: FromStr>(flag: &str, s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{flag}: cannot parse {item:?}")))
        })
        .collect()
}

pub fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}
