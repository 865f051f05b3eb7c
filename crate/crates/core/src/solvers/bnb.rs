//! Depth-first branch and bound.
//!
//! Free words (those not fixed by margin pruning) are branched on in order
//! of descending sense count, then index. At a node the bound is the value
//! of the assigned words plus, for every unassigned word, the best over its
//! senses of `c` plus its interactions with assigned words plus the largest
//! possible interaction with each *later* unassigned word. Attributing every
//! unassigned-unassigned pair to the earlier word of the pair keeps the bound
//! valid without double counting.

use std::time::Instant;

use super::local_search::solve_local_search;
use super::{SolveResult, SolveStats};
use crate::error::Result;
use crate::model::{better, tie_tolerance, Incidence, QipModel};

struct Search<'a> {
    model: &'a QipModel,
    free: Vec<usize>,
    assigned: Vec<bool>,
    current: Vec<usize>,
    /// per free word, per sense, per forward edge: max weight over the
    /// other word's senses
    forward_max: Vec<Vec<Vec<f64>>>,
    best: Vec<usize>,
    best_value: f64,
    nodes: u64,
}

impl Search<'_> {
    fn assigned_gain(&self, w: usize, u: usize) -> f64 {
        self.model
            .incident(w)
            .iter()
            .filter(|e| self.assigned[e.other])
            .map(|e| self.model.weight(e, u, self.current[e.other]))
            .sum()
    }

    /// Optimistic value of each sense of the free word at `pos`.
    fn optimistic(&self, pos: usize) -> Vec<f64> {
        let w = self.free[pos];
        (0..self.model.linear_row(w).len())
            .map(|u| {
                self.model.linear(w, u)
                    + self.assigned_gain(w, u)
                    + self.forward_max[pos][u].iter().sum::<f64>()
            })
            .collect()
    }

    /// Whether some completion of the current partial assignment is
    /// lexicographically smaller than the incumbent.
    fn could_be_lex_smaller(&self) -> bool {
        for w in 0..self.current.len() {
            if self.assigned[w] {
                match self.current[w].cmp(&self.best[w]) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            } else if self.best[w] > 0 {
                return true;
            }
        }
        false
    }

    fn descend(&mut self, depth: usize, value: f64) {
        self.nodes += 1;
        if depth == self.free.len() {
            let leaf = self.model.score(&self.current);
            if better(leaf, &self.current, self.best_value, &self.best) {
                self.best_value = leaf;
                self.best.clone_from(&self.current);
            }
            return;
        }

        let here = self.optimistic(depth);
        let rest: f64 = (depth + 1..self.free.len())
            .map(|p| self.optimistic(p).into_iter().fold(f64::NEG_INFINITY, f64::max))
            .sum();
        let bound = value
            + here.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            + rest;
        let tol = tie_tolerance(bound, self.best_value);
        if bound < self.best_value - tol {
            return;
        }
        if bound <= self.best_value + tol && !self.could_be_lex_smaller() {
            return;
        }

        let w = self.free[depth];
        let mut senses: Vec<usize> = (0..here.len()).collect();
        senses.sort_by(|&a, &b| here[b].total_cmp(&here[a]).then(a.cmp(&b)));
        for u in senses {
            let delta = self.model.linear(w, u) + self.assigned_gain(w, u);
            self.current[w] = u;
            self.assigned[w] = true;
            self.descend(depth + 1, value + delta);
            self.assigned[w] = false;
        }
    }
}

/// Exact maximizer. The incumbent is seeded by coordinate-ascent local
/// search with the given seed and restart count.
pub fn solve_branch_and_bound(model: &QipModel, seed: u64, restarts: usize) -> Result<SolveResult> {
    let start = Instant::now();
    let n = model.word_count();
    let counts = model.sense_counts();
    let incumbent = solve_local_search(model, seed, restarts);

    let mut free: Vec<usize> = (0..n).filter(|&i| model.fixed().get(i).is_none()).collect();
    free.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let mut pos = vec![usize::MAX; n];
    for (p, &w) in free.iter().enumerate() {
        pos[w] = p;
    }

    let mut current = vec![0; n];
    let mut assigned = vec![false; n];
    let mut value = 0.0;
    for (i, k) in model.fixed().pairs() {
        current[i] = k;
        value += model.linear(i, k)
            + model
                .incident(i)
                .iter()
                .filter(|e| assigned[e.other])
                .map(|e| model.weight(e, k, current[e.other]))
                .sum::<f64>();
        assigned[i] = true;
    }

    let forward: Vec<Vec<Incidence>> = free
        .iter()
        .enumerate()
        .map(|(p, &w)| {
            model
                .incident(w)
                .iter()
                .filter(|e| pos[e.other] != usize::MAX && pos[e.other] > p)
                .copied()
                .collect()
        })
        .collect();
    let forward_max = free
        .iter()
        .zip(&forward)
        .map(|(&w, edges)| {
            (0..counts[w])
                .map(|u| {
                    edges
                        .iter()
                        .map(|e| {
                            (0..counts[e.other])
                                .map(|v| model.weight(e, u, v))
                                .fold(f64::NEG_INFINITY, f64::max)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut search = Search {
        model,
        free,
        assigned,
        current,
        forward_max,
        best_value: incumbent.objective,
        best: incumbent.assignment.choices().to_vec(),
        nodes: 0,
    };
    search.descend(0, value);

    Ok(SolveResult::new(
        model,
        search.best,
        true,
        SolveStats {
            nodes_explored: search.nodes,
            restarts: incumbent.stats.restarts,
            elapsed: start.elapsed(),
        },
    ))
}
