use std::time::Instant;

use super::{SolveResult, SolveStats};
use crate::error::{Error, Result};
use crate::model::{tie_tolerance, Incidence, QipModel, Variant};

fn edge_weight(model: &QipModel, edge: Option<Incidence>, u: usize, v: usize) -> f64 {
    edge.map_or(0.0, |e| model.weight(&e, u, v))
}

/// Max-sum dynamic program over the word chain (Viterbi decoding).
///
/// Values are accumulated from the last word backwards so that the forward
/// reconstruction can pick the lowest sense index among optimal
/// continuations, which yields the lexicographically smallest optimum.
/// Runs in O(|V|·M²).
pub fn solve_chain_dp(model: &QipModel) -> Result<SolveResult> {
    if model.variant() != Variant::Adjacent {
        return Err(Error::Incompatible {
            solver: "dp".into(),
            reason: format!("chain DP needs the adjacent variant, not {}", model.variant()),
        });
    }
    let start = Instant::now();
    let n = model.word_count();
    let domains: Vec<Vec<usize>> = (0..n).map(|i| model.domain(i)).collect();
    // edge between word i and i + 1, seen from word i
    let edges: Vec<_> = (0..n.saturating_sub(1))
        .map(|i| {
            model.incident(i).iter().find(|e| e.other == i + 1).copied()
        })
        .collect();

    // value[i][s] = best total of words i.. given word i takes domains[i][s]
    let mut value: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut states = 0u64;
    for i in (0..n).rev() {
        value[i] = domains[i]
            .iter()
            .map(|&u| {
                states += 1;
                let tail = if i + 1 < n {
                    domains[i + 1]
                        .iter()
                        .zip(&value[i + 1])
                        .map(|(&v, &rest)| edge_weight(model, edges[i], u, v) + rest)
                        .fold(f64::NEG_INFINITY, f64::max)
                } else {
                    0.0
                };
                model.linear(i, u) + tail
            })
            .collect();
    }

    let first_near_max = |scores: &[f64]| {
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = tie_tolerance(best, best);
        scores
            .iter()
            .position(|&s| s >= best - tol)
            .expect("nonempty domain")
    };

    let mut choices = Vec::with_capacity(n);
    let mut pick = first_near_max(&value[0]);
    choices.push(domains[0][pick]);
    for i in 1..n {
        let u = choices[i - 1];
        let scores: Vec<f64> = domains[i]
            .iter()
            .zip(&value[i])
            .map(|(&v, &rest)| edge_weight(model, edges[i - 1], u, v) + rest)
            .collect();
        pick = first_near_max(&scores);
        choices.push(domains[i][pick]);
    }

    Ok(SolveResult::new(
        model,
        choices,
        true,
        SolveStats {
            nodes_explored: states,
            restarts: 0,
            elapsed: start.elapsed(),
        },
    ))
}
