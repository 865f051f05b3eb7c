use std::time::Instant;

use super::{SolveResult, SolveStats};
use crate::error::{Error, Result};
use crate::instance::AssignmentIter;
use crate::model::{better, QipModel};

pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 10_000_000;

/// Exhaustive enumeration of every feasible assignment.
pub fn solve_brute_force(model: &QipModel) -> Result<SolveResult> {
    solve_brute_force_capped(model, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn solve_brute_force_capped(model: &QipModel, cap: u128) -> Result<SolveResult> {
    let size = model.search_space();
    if size > cap {
        return Err(Error::SearchSpace { size, cap });
    }
    let start = Instant::now();
    let domains = (0..model.word_count()).map(|i| model.domain(i)).collect();

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut visited = 0u64;
    // lexicographic order: a later assignment replaces the incumbent only
    // when strictly better
    for a in AssignmentIter::over_domains(domains) {
        visited += 1;
        let value = model.score(a.choices());
        let replace = match &best {
            None => true,
            Some((bv, ba)) => better(value, a.choices(), *bv, ba),
        };
        if replace {
            best = Some((value, a.choices().to_vec()));
        }
    }
    let (_, choices) = best.expect("every word has at least one sense");
    Ok(SolveResult::new(
        model,
        choices,
        true,
        SolveStats {
            nodes_explored: visited,
            restarts: 0,
            elapsed: start.elapsed(),
        },
    ))
}
