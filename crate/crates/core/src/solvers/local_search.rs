use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::qip_r::per_word_argmax;
use super::{SolveResult, SolveStats};
use crate::model::{better, tie_tolerance, QipModel};

/// Outcome of one coordinate-ascent run.
#[derive(Debug, Clone)]
pub struct AscentTrace {
    pub assignment: Vec<usize>,
    pub objective: f64,
    /// Objective at the start and after every accepted move.
    pub trajectory: Vec<f64>,
    pub sweeps: usize,
    pub moves: u64,
}

/// Local gain of giving word `w` sense `u` while every other word keeps
/// its sense in `a`.
fn word_gain(model: &QipModel, a: &[usize], w: usize, u: usize) -> f64 {
    model.linear(w, u)
        + model
            .incident(w)
            .iter()
            .map(|e| model.weight(e, u, a[e.other]))
            .sum::<f64>()
}

/// Sweeps the words in index order, moving each to its best sense given the
/// rest, until a full sweep makes no move. A move is taken only when it
/// improves the word's gain by more than the tie tolerance, so the
/// objective never decreases and the loop terminates.
pub fn coordinate_ascent(model: &QipModel, start: Vec<usize>) -> AscentTrace {
    let n = model.word_count();
    let domains: Vec<Vec<usize>> = (0..n).map(|i| model.domain(i)).collect();
    let mut a = start;
    let mut trajectory = vec![model.score(&a)];
    let mut sweeps = 0;
    let mut moves = 0;
    loop {
        sweeps += 1;
        let mut moved = false;
        for w in 0..n {
            if domains[w].len() < 2 {
                continue;
            }
            let current = word_gain(model, &a, w, a[w]);
            let (best_u, _) = domains[w]
                .iter()
                .map(|&u| (u, word_gain(model, &a, w, u)))
                .fold((a[w], current), |acc, (u, g)| {
                    if g > acc.1 + tie_tolerance(g, acc.1) {
                        (u, g)
                    } else {
                        acc
                    }
                });
            if best_u != a[w] {
                a[w] = best_u;
                moved = true;
                moves += 1;
                trajectory.push(model.score(&a));
            }
        }
        if !moved {
            break;
        }
    }
    AscentTrace {
        objective: model.score(&a),
        assignment: a,
        trajectory,
        sweeps,
        moves,
    }
}

/// Coordinate ascent with restarts. The first run starts from the per-word
/// argmax of `c`, later runs from seeded random assignments. Returns the
/// best result over all runs; never claims optimality.
pub fn solve_local_search(model: &QipModel, seed: u64, restarts: usize) -> SolveResult {
    let start = Instant::now();
    let runs = restarts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domains: Vec<Vec<usize>> = (0..model.word_count()).map(|i| model.domain(i)).collect();

    let mut best: Option<AscentTrace> = None;
    let mut moves = 0;
    for run in 0..runs {
        let initial = if run == 0 {
            per_word_argmax(model)
        } else {
            domains
                .iter()
                .map(|d| d[rng.random_range(0..d.len())])
                .collect()
        };
        let trace = coordinate_ascent(model, initial);
        moves += trace.moves + 1;
        let replace = match &best {
            None => true,
            Some(b) => better(trace.objective, &trace.assignment, b.objective, &b.assignment),
        };
        if replace {
            best = Some(trace);
        }
    }
    let best = best.expect("at least one run");
    SolveResult::new(
        model,
        best.assignment,
        false,
        SolveStats {
            nodes_explored: moves,
            restarts: runs,
            elapsed: start.elapsed(),
        },
    )
}
