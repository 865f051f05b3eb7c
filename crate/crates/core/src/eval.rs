//! End-to-end runs over a corpus: tables, model, solve, score against gold.

use std::fs;
use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{load_corpus, Instance};
use crate::model::{build_model, SolverConfig};
use crate::similarity::build_sim_tables;
use crate::solvers::{check_compatible, solve, SolveOptions, SolveStats, Solver};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub solver: Solver,
    pub config: SolverConfig,
    pub seed: u64,
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordChoice {
    pub word_id: String,
    pub sense_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub assignment: Vec<WordChoice>,
    pub objective: f64,
    pub optimal: bool,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub instances: usize,
    pub words: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correct: Option<usize>,
    /// Micro-accuracy over words; present only when every instance has gold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub run: RunSettings,
    pub records: Vec<InstanceRecord>,
    pub aggregate: Aggregate,
}

impl EvalReport {
    /// Copy with every elapsed-time field zeroed, for comparisons that must
    /// ignore timing.
    pub fn without_timing(&self) -> EvalReport {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.stats.elapsed = Duration::ZERO;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<EvalReport> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

/// Solves every instance of an in-memory corpus. Incompatible settings are
/// rejected before anything is solved.
pub fn evaluate_corpus(
    corpus: &[Instance],
    cfg: &SolverConfig,
    solver: Solver,
    opts: &SolveOptions,
) -> Result<EvalReport> {
    cfg.validate()?;
    check_compatible(solver, cfg)?;
    let models = corpus
        .par_iter()
        .map(|inst| build_model(inst, &build_sim_tables(inst), cfg))
        .collect::<Result<Vec<_>>>()?;
    if solver == Solver::Brute {
        if let Some(m) = models.iter().find(|m| m.search_space() > opts.brute_force_cap) {
            return Err(Error::SearchSpace {
                size: m.search_space(),
                cap: opts.brute_force_cap,
            });
        }
    }

    let results = models
        .par_iter()
        .map(|m| solve(m, solver, opts))
        .collect::<Result<Vec<_>>>()?;

    let mut words = 0;
    let mut correct = 0;
    let all_gold = corpus.iter().all(|inst| inst.gold().is_some());
    let records = corpus
        .iter()
        .zip(results)
        .enumerate()
        .map(|(index, (inst, res))| {
            let chosen = inst.sense_ids(&res.assignment);
            words += chosen.len();
            let gold = inst.gold();
            let assignment = inst
                .words()
                .iter()
                .zip(chosen)
                .enumerate()
                .map(|(i, (w, sense_id))| {
                    let g = gold.map(|g| g[i].clone());
                    if g.as_deref() == Some(sense_id.as_str()) {
                        correct += 1;
                    }
                    WordChoice {
                        word_id: w.word_id.clone(),
                        sense_id,
                        gold: g,
                    }
                })
                .collect();
            InstanceRecord {
                index,
                assignment,
                objective: res.objective,
                optimal: res.optimal,
                stats: res.stats,
            }
        })
        .collect();

    let (correct, accuracy) = if all_gold {
        let acc = if words > 0 {
            correct as f64 / words as f64
        } else {
            0.0
        };
        (Some(correct), Some(acc))
    } else {
        (None, None)
    };
    Ok(EvalReport {
        run: RunSettings {
            solver,
            config: *cfg,
            seed: opts.seed,
            restarts: opts.restarts,
        },
        records,
        aggregate: Aggregate {
            instances: corpus.len(),
            words,
            correct,
            accuracy,
        },
    })
}

/// Loads a corpus, solves it and writes the report to `out` when given.
pub fn run_pipeline(
    corpus_path: impl AsRef<Path>,
    cfg: &SolverConfig,
    solver: Solver,
    opts: &SolveOptions,
    out: Option<&Path>,
) -> Result<EvalReport> {
    // fail fast on settings before touching the corpus
    cfg.validate()?;
    check_compatible(solver, cfg)?;
    let corpus = load_corpus(corpus_path)?;
    let report = evaluate_corpus(&corpus, cfg, solver, opts)?;
    if let Some(path) = out {
        report.write(path)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub instance: usize,
    pub word_id: String,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDiff {
    pub words: usize,
    pub agreements: usize,
    pub agreement_rate: f64,
    /// `b.objective - a.objective` per instance.
    pub objective_deltas: Vec<f64>,
    pub disagreements: Vec<Disagreement>,
}

pub fn compare_runs(a: &EvalReport, b: &EvalReport) -> Result<RunDiff> {
    if a.records.len() != b.records.len() {
        return Err(Error::CorpusMismatch(format!(
            "{} vs {} instances",
            a.records.len(),
            b.records.len()
        )));
    }
    let mut words = 0;
    let mut disagreements = Vec::new();
    let mut objective_deltas = Vec::with_capacity(a.records.len());
    for (ra, rb) in a.records.iter().zip(&b.records) {
        if ra.assignment.len() != rb.assignment.len() {
            return Err(Error::CorpusMismatch(format!(
                "instance {}: {} vs {} words",
                ra.index,
                ra.assignment.len(),
                rb.assignment.len()
            )));
        }
        for (ca, cb) in ra.assignment.iter().zip(&rb.assignment) {
            if ca.word_id != cb.word_id {
                return Err(Error::CorpusMismatch(format!(
                    "instance {}: word `{}` vs `{}`",
                    ra.index, ca.word_id, cb.word_id
                )));
            }
            words += 1;
            if ca.sense_id != cb.sense_id {
                disagreements.push(Disagreement {
                    instance: ra.index,
                    word_id: ca.word_id.clone(),
                    a: ca.sense_id.clone(),
                    b: cb.sense_id.clone(),
                });
            }
        }
        objective_deltas.push(rb.objective - ra.objective);
    }
    let agreements = words - disagreements.len();
    Ok(RunDiff {
        words,
        agreements,
        agreement_rate: if words > 0 {
            agreements as f64 / words as f64
        } else {
            1.0
        },
        objective_deltas,
        disagreements,
    })
}
