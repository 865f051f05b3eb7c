//! Layered concept-network view of disambiguation.
//!
//! Words are threaded in some order from a virtual origin to a virtual
//! destination; a path picks one sense per layer. Its length is the sum of
//! the chosen `c` values plus `h` between consecutive chosen senses. The
//! same sense choice yields different lengths under different orders,
//! because the `h` edges that appear depend on which words are adjacent.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{validate_assignment, Assignment, Instance};
use crate::similarity::SimTables;

pub fn path_length(
    inst: &Instance,
    tables: &SimTables,
    order: &[usize],
    a: &Assignment,
) -> Result<f64> {
    let n = inst.len();
    if order.len() != n || !order.iter().all_unique() || order.iter().any(|&w| w >= n) {
        return Err(Error::NotPermutation(n));
    }
    if !validate_assignment(inst, a) {
        return Err(Error::InvalidAssignment(
            "assignment does not match the instance".into(),
        ));
    }
    let k = a.choices();
    let nodes: f64 = order.iter().map(|&w| tables.c(w, k[w])).sum();
    let edges: f64 = order
        .iter()
        .tuple_windows()
        .map(|(&p, &q)| tables.h(p, k[p], q, k[q]))
        .sum();
    Ok(nodes + edges)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderLength {
    pub order: Vec<usize>,
    pub length: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderReport {
    pub assignment: Assignment,
    pub entries: Vec<OrderLength>,
    /// Whether every permutation was enumerated (false when sampled).
    pub exhaustive: bool,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    /// Number of distinct lengths, values within 1e-12 counted as equal.
    pub distinct: usize,
}

/// Orders above this many words are sampled instead of enumerated.
pub const EXHAUSTIVE_WORD_LIMIT: usize = 8;

/// Path lengths of `a` under every word order (or `samples` seeded random
/// orders once the instance has more than [`EXHAUSTIVE_WORD_LIMIT`] words).
pub fn demonstrate_order_dependence(
    inst: &Instance,
    tables: &SimTables,
    a: &Assignment,
    samples: usize,
    seed: u64,
) -> Result<OrderReport> {
    let n = inst.len();
    let exhaustive = n <= EXHAUSTIVE_WORD_LIMIT;
    let orders: Vec<Vec<usize>> = if exhaustive {
        (0..n).permutations(n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples.max(1))
            .map(|_| {
                let mut o: Vec<usize> = (0..n).collect();
                o.shuffle(&mut rng);
                o
            })
            .collect()
    };
    let entries = orders
        .into_iter()
        .map(|order| {
            let length = path_length(inst, tables, &order, a)?;
            Ok(OrderLength { order, length })
        })
        .collect::<Result<Vec<_>>>()?;

    let min = entries.iter().map(|e| e.length).fold(f64::INFINITY, f64::min);
    let max = entries.iter().map(|e| e.length).fold(f64::NEG_INFINITY, f64::max);
    let mut sorted: Vec<f64> = entries.iter().map(|e| e.length).collect();
    sorted.sort_by(f64::total_cmp);
    let distinct = 1 + sorted.windows(2).filter(|w| w[1] - w[0] > 1e-12).count();
    Ok(OrderReport {
        assignment: a.clone(),
        entries,
        exhaustive,
        min,
        max,
        spread: max - min,
        distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::build_sim_tables;
    use crate::synth::SynthSpec;

    #[test]
    fn single_word_path_is_its_c() {
        let inst = SynthSpec::fixed(&[3], 4).generate(2);
        let t = build_sim_tables(&inst);
        let len = path_length(&inst, &t, &[0], &vec![2].into()).unwrap();
        assert_eq!(len, t.c(0, 2));
    }

    #[test]
    fn paths_follow_the_order() {
        // words w1..w4 with (4, 3, 4, 5) senses; senses s13, s22, s32, s42
        let inst = SynthSpec::fixed(&[4, 3, 4, 5], 8).generate(5);
        let t = build_sim_tables(&inst);
        let a: Assignment = vec![2, 1, 1, 1].into();

        let forward = path_length(&inst, &t, &[0, 1, 2, 3], &a).unwrap();
        let d1 = t.c(0, 2) + t.h(0, 2, 1, 1) + t.c(1, 1) + t.h(1, 1, 2, 1) + t.c(2, 1)
            + t.h(2, 1, 3, 1) + t.c(3, 1);
        assert!((forward - d1).abs() < 1e-12);

        let changed = path_length(&inst, &t, &[2, 1, 0, 3], &a).unwrap();
        let d2 = t.c(2, 1) + t.h(2, 1, 1, 1) + t.c(1, 1) + t.h(1, 1, 0, 2) + t.c(0, 2)
            + t.h(0, 2, 3, 1) + t.c(3, 1);
        assert!((changed - d2).abs() < 1e-12);
        assert!((forward - changed).abs() > 1e-9);
    }

    #[test]
    fn rejects_non_permutations() {
        let inst = SynthSpec::fixed(&[2, 2, 2], 4).generate(0);
        let t = build_sim_tables(&inst);
        let a: Assignment = vec![0, 0, 0].into();
        for bad in [&[0, 1][..], &[0, 1, 1], &[0, 1, 3]] {
            assert!(matches!(
                path_length(&inst, &t, bad, &a),
                Err(Error::NotPermutation(3))
            ));
        }
    }

    #[test]
    fn constant_h_gives_no_spread() {
        let inst = SynthSpec::fixed(&[2, 2, 2], 4).generate(0);
        let mut t = build_sim_tables(&inst);
        for i in 0..3 {
            for j in (i + 1)..3 {
                for m in 0..2 {
                    for n in 0..2 {
                        t.set_h(i, m, j, n, 0.25);
                    }
                }
            }
        }
        let r = demonstrate_order_dependence(&inst, &t, &vec![1, 0, 1].into(), 0, 0).unwrap();
        assert_eq!(r.entries.len(), 6);
        assert!(r.spread.abs() < 1e-12);
        assert_eq!(r.distinct, 1);
    }

    #[test]
    fn two_words_are_order_free() {
        let inst = SynthSpec::fixed(&[3, 2], 4).generate(9);
        let t = build_sim_tables(&inst);
        let r = demonstrate_order_dependence(&inst, &t, &vec![2, 1].into(), 0, 0).unwrap();
        assert_eq!(r.entries.len(), 2);
        assert_eq!(r.entries[0].length, r.entries[1].length);
    }

    #[test]
    fn large_instances_are_sampled() {
        let inst = SynthSpec::fixed(&[2; 10], 4).generate(1);
        let t = build_sim_tables(&inst);
        let r = demonstrate_order_dependence(&inst, &t, &vec![0; 10].into(), 50, 3).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.entries.len(), 50);
        assert!(r.distinct > 1);
    }
}
