//! Maximizers of the QIP objective over one-sense-per-word assignments.
//!
//! | solver | exact | applies to |
//! |---|---|---|
//! | [`solve_brute_force`] | yes | any model within the enumeration cap |
//! | [`solve_branch_and_bound`] | yes | any model |
//! | [`solve_chain_dp`] | yes | adjacent-pair models, O(|V|·M²) |
//! | [`solve_qip_r`] | yes | models without an interaction term |
//! | [`solve_local_search`] | no | any model |
//!
//! All exact solvers break ties toward the lexicographically smallest
//! assignment, so their outputs can be compared directly.

mod bnb;
mod brute;
mod chain_dp;
mod local_search;
mod qip_r;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use bnb::solve_branch_and_bound;
pub use brute::{solve_brute_force, solve_brute_force_capped, DEFAULT_BRUTE_FORCE_CAP};
pub use chain_dp::solve_chain_dp;
pub use local_search::{coordinate_ascent, solve_local_search, AscentTrace};
pub use qip_r::solve_qip_r;

use crate::error::{Error, Result};
use crate::instance::Assignment;
use crate::model::{QipModel, SolverConfig, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Brute,
    Bnb,
    Dp,
    #[serde(rename = "qipr")]
    QipR,
    Local,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Brute => "brute",
            Solver::Bnb => "bnb",
            Solver::Dp => "dp",
            Solver::QipR => "qipr",
            Solver::Local => "local",
        })
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Solver::Brute),
            "bnb" => Ok(Solver::Bnb),
            "dp" => Ok(Solver::Dp),
            "qipr" | "qip-r" | "qip_r" => Ok(Solver::QipR),
            "local" => Ok(Solver::Local),
            other => Err(Error::Config(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub seed: u64,
    pub restarts: usize,
    pub brute_force_cap: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            restarts: 8,
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes_explored: u64,
    pub restarts: usize,
    #[serde(with = "duration_ms", rename = "elapsed_ms")]
    pub elapsed: Duration,
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64() * 1e3)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = f64::deserialize(d)?;
        Ok(Duration::from_secs_f64(ms.max(0.0) / 1e3))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub assignment: Assignment,
    pub objective: f64,
    pub optimal: bool,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn new(model: &QipModel, choices: Vec<usize>, optimal: bool, stats: SolveStats) -> Self {
        let objective = model.score(&choices);
        SolveResult {
            assignment: Assignment::new(choices),
            objective,
            optimal,
            stats,
        }
    }
}

/// Rejects solver/variant combinations that cannot work, before any model
/// is built.
pub fn check_compatible(solver: Solver, cfg: &SolverConfig) -> Result<()> {
    match solver {
        Solver::Dp if cfg.variant != Variant::Adjacent => Err(Error::Incompatible {
            solver: solver.to_string(),
            reason: format!("chain DP needs the adjacent variant, not {}", cfg.variant),
        }),
        Solver::QipR if cfg.variant != Variant::QipR && cfg.beta != 0.0 => Err(Error::Incompatible {
            solver: solver.to_string(),
            reason: "the closed-form solver needs beta = 0 or the qipr variant".into(),
        }),
        _ => Ok(()),
    }
}

/// Runs `solver` and confirms the reported objective and the fixed
/// variables against the model.
pub fn solve(model: &QipModel, solver: Solver, opts: &SolveOptions) -> Result<SolveResult> {
    let result = match solver {
        Solver::Brute => solve_brute_force_capped(model, opts.brute_force_cap)?,
        Solver::Bnb => solve_branch_and_bound(model, opts.seed, opts.restarts)?,
        Solver::Dp => solve_chain_dp(model)?,
        Solver::QipR => solve_qip_r(model)?,
        Solver::Local => solve_local_search(model, opts.seed, opts.restarts),
    };
    let recomputed = crate::model::objective(model, &result.assignment)?;
    if recomputed != result.objective {
        return Err(Error::ObjectiveMismatch {
            reported: result.objective,
            recomputed,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests;
