//! Word sense disambiguation as a quadratic 0-1 semi-assignment program.
//!
//! Given contextual word embeddings and candidate sense embeddings, the
//! pipeline builds cosine similarity tables, combines them into sense-sense
//! relatedness coefficients, and selects exactly one sense per word to
//! maximize total word-sense similarity plus β times pairwise relatedness.
//!
//! ```no_run
//! use qipwsd::{build_model, build_sim_tables, load_instance, solvers, SolverConfig};
//!
//! let inst = load_instance("context.json")?;
//! let tables = build_sim_tables(&inst);
//! let model = build_model(&inst, &tables, &SolverConfig::default())?;
//! let result = solvers::solve_branch_and_bound(&model, 0, 8)?;
//! println!("{:?} {}", inst.sense_ids(&result.assignment), result.objective);
//! # Ok::<(), qipwsd::Error>(())
//! ```

pub mod concept_network;
pub mod error;
pub mod eval;
pub mod instance;
pub mod model;
pub mod similarity;
pub mod solvers;
pub mod synth;

pub use concept_network::{demonstrate_order_dependence, path_length, OrderReport};
pub use error::{Error, InstanceError, Result};
pub use eval::{compare_runs, run_pipeline, EvalReport, RunDiff};
pub use instance::{
    load_corpus, load_instance, validate_assignment, Assignment, Embedding, Instance,
    SenseCandidate, TargetWord,
};
pub use model::{
    apply_theta_pruning, build_model, objective, FixedSet, QipModel, SolverConfig, Variant,
};
pub use similarity::{build_sim_tables, cosine, relatedness, RelatednessParams, SimTables};
pub use solvers::{Solver, SolveOptions, SolveResult, SolveStats};
