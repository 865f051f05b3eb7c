use proptest::prelude::*;

use qipwsd::instance::{AssignmentIter, Instance};
use qipwsd::model::{apply_theta_pruning, build_model, objective, SolverConfig, Variant};
use qipwsd::similarity::{build_sim_tables, cosine, relatedness, RelatednessParams};
use qipwsd::solvers::{
    coordinate_ascent, solve, solve_branch_and_bound, solve_brute_force, solve_chain_dp,
    SolveOptions, Solver,
};
use qipwsd::synth::SynthSpec;
use qipwsd::Embedding;

fn instance(seed: u64) -> Instance {
    SynthSpec::new(1..=5, 1..=4, 6).generate(seed)
}

fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim).prop_filter("nonzero", |v| {
        v.iter().map(|x| x * x).sum::<f64>() > 1e-6
    })
}

/// Naive cosine, written independently of the library's.
fn naive_cosine(u: &[f64], v: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut uu = 0.0;
    let mut vv = 0.0;
    for k in 0..u.len() {
        dot += u[k] * v[k];
        uu += u[k] * u[k];
        vv += v[k] * v[k];
    }
    dot / (uu.sqrt() * vv.sqrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn format_round_trip(seed in any::<u64>(), gold in any::<bool>()) {
        let inst = instance(seed);
        let inst = if gold { inst } else { inst.without_gold() };
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn cosine_in_range_and_scale_invariant(u in vector(5), v in vector(5), s in 0.01f64..100.0) {
        let c = cosine(&Embedding::new(u.clone()), &Embedding::new(v.clone())).unwrap();
        prop_assert!((-1.0..=1.0).contains(&c));
        let scaled: Vec<f64> = u.iter().map(|x| x * s).collect();
        let cs = cosine(&Embedding::new(scaled), &Embedding::new(v.clone())).unwrap();
        prop_assert!((c - cs).abs() < 1e-12);
    }

    #[test]
    fn tables_match_naive_double_loop(seed in any::<u64>()) {
        let inst = instance(seed);
        let t = build_sim_tables(&inst);
        let n = inst.len();
        for i in 0..n {
            let wi = inst.word(i);
            for (m, s) in wi.senses.iter().enumerate() {
                let c = naive_cosine(wi.context_embedding.as_slice(), s.embedding.as_slice());
                prop_assert!((t.c(i, m) - c).abs() < 1e-12);
            }
            for j in 0..n {
                if i == j { continue; }
                let wj = inst.word(j);
                let e = naive_cosine(wi.context_embedding.as_slice(), wj.context_embedding.as_slice());
                prop_assert!((t.e(i, j) - e.abs()).abs() < 1e-12);
                for (nn, sj) in wj.senses.iter().enumerate() {
                    let b = naive_cosine(wi.context_embedding.as_slice(), sj.embedding.as_slice());
                    prop_assert!((t.b(i, j, nn) - b.abs()).abs() < 1e-12);
                    for (m, si) in wi.senses.iter().enumerate() {
                        let h = naive_cosine(si.embedding.as_slice(), sj.embedding.as_slice());
                        prop_assert!((t.h(i, m, j, nn) - h.abs()).abs() < 1e-12);
                        prop_assert_eq!(t.h(i, m, j, nn), t.h(j, nn, i, m));
                    }
                }
            }
        }
    }

    #[test]
    fn tables_scale_invariant(seed in any::<u64>(), s in 0.1f64..50.0) {
        let inst = instance(seed);
        let a = build_sim_tables(&inst);
        let b = build_sim_tables(&inst.scaled(s));
        for i in 0..inst.len() {
            for (x, y) in a.c_row(i).iter().zip(b.c_row(i)) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn relatedness_symmetric(seed in any::<u64>(), l1 in -2.0f64..2.0, l2 in -2.0f64..2.0, l3 in -2.0f64..2.0) {
        let inst = SynthSpec::new(2..=4, 1..=3, 6).generate(seed);
        let t = build_sim_tables(&inst);
        let p = RelatednessParams::new(l1, l2, l3);
        let counts = inst.sense_counts();
        for i in 0..counts.len() {
            for j in 0..counts.len() {
                if i == j { continue; }
                for m in 0..counts[i] {
                    for n in 0..counts[j] {
                        let r = relatedness(&t, &p, i, m, j, n).unwrap();
                        let s = relatedness(&t, &p, j, n, i, m).unwrap();
                        prop_assert!((r - s).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn exact_solvers_agree_with_enumeration(seed in any::<u64>(), beta in -1.0f64..3.0, theta in 0.0f64..=1.0) {
        let inst = instance(seed);
        let t = build_sim_tables(&inst);
        for variant in [Variant::Full, Variant::Adjacent] {
            let cfg = SolverConfig { beta, theta, variant, ..Default::default() };
            let m = build_model(&inst, &t, &cfg).unwrap();
            let bf = solve_brute_force(&m).unwrap();
            let bnb = solve_branch_and_bound(&m, seed, 1).unwrap();
            prop_assert_eq!(&bnb.assignment, &bf.assignment);
            if variant == Variant::Adjacent {
                prop_assert_eq!(&solve_chain_dp(&m).unwrap().assignment, &bf.assignment);
            }
            // the oracle result really is a maximum over the feasible set
            for a in AssignmentIter::new(&inst.sense_counts()) {
                if let Ok(z) = objective(&m, &a) {
                    prop_assert!(z <= bf.objective + 1e-12);
                }
            }
        }
    }

    #[test]
    fn ascent_is_monotone(seed in any::<u64>(), start_seed in any::<u64>()) {
        let inst = SynthSpec::new(3..=7, 2..=5, 6).generate(seed);
        let m = build_model(&inst, &build_sim_tables(&inst), &SolverConfig::default()).unwrap();
        let start: Vec<usize> = inst
            .sense_counts()
            .iter()
            .enumerate()
            .map(|(i, &c)| ((start_seed >> (i * 3)) as usize) % c)
            .collect();
        let trace = coordinate_ascent(&m, start);
        prop_assert!(trace.trajectory.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn fixing_is_monotone_and_never_helps(seed in any::<u64>(), lo in 0.0f64..=1.0, hi in 0.0f64..=1.0) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let inst = instance(seed);
        let t = build_sim_tables(&inst);
        prop_assert!(apply_theta_pruning(&t, lo).is_superset_of(&apply_theta_pruning(&t, hi)));

        let open = SolverConfig::default();
        let pruned = SolverConfig { theta: lo, ..open };
        let z_open = solve_brute_force(&build_model(&inst, &t, &open).unwrap()).unwrap().objective;
        let z_pruned = solve_brute_force(&build_model(&inst, &t, &pruned).unwrap()).unwrap().objective;
        prop_assert!(z_open >= z_pruned - 1e-12);
    }

    #[test]
    fn all_solvers_respect_fixing(seed in any::<u64>(), theta in 0.0f64..=1.0) {
        let inst = instance(seed);
        let cfg = SolverConfig { theta, variant: Variant::Adjacent, ..Default::default() };
        let m = build_model(&inst, &build_sim_tables(&inst), &cfg).unwrap();
        for solver in [Solver::Brute, Solver::Bnb, Solver::Dp, Solver::Local] {
            let r = solve(&m, solver, &SolveOptions::default()).unwrap();
            for (i, k) in m.fixed().pairs() {
                prop_assert_eq!(r.assignment.choices()[i], k);
            }
        }
    }
}

#[test]
fn two_word_objective_equals_path_length_in_both_orders() {
    for seed in 0..20 {
        let inst = SynthSpec::fixed(&[3, 4], 6).generate(seed);
        let t = build_sim_tables(&inst);
        let cfg = SolverConfig {
            beta: 1.0,
            params: RelatednessParams::new(0.0, 1.0, 0.0),
            ..Default::default()
        };
        let m = build_model(&inst, &t, &cfg).unwrap();
        for a in AssignmentIter::new(&inst.sense_counts()) {
            let z = objective(&m, &a).unwrap();
            for order in [[0, 1], [1, 0]] {
                let d = qipwsd::path_length(&inst, &t, &order, &a).unwrap();
                assert!((z - d).abs() < 1e-12);
            }
        }
    }
}
