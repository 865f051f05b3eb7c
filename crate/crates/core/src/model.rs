//! The quadratic 0-1 program over one-sense-per-word assignments.
//!
//! Maximize `Z = Σᵢ c(i, kᵢ) + β Σ_{(i,j)} r(i, kᵢ, j, kⱼ)` where the pair set
//! depends on the [`Variant`]: every unordered pair `i < j`, only adjacent
//! pairs `(i, i+1)`, or none. Each unordered pair is counted once.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{validate_assignment, Assignment, Instance};
use crate::similarity::{relatedness_unchecked, RelatednessParams, SimTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Interactions between every pair of words.
    Full,
    /// Interactions between consecutive words only.
    Adjacent,
    /// No interaction term: per-word argmax of `c`.
    #[serde(rename = "qipr")]
    QipR,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Adjacent => "adjacent",
            Variant::QipR => "qipr",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "adjacent" => Ok(Variant::Adjacent),
            "qipr" | "qip-r" | "qip_r" => Ok(Variant::QipR),
            other => Err(Error::Config(format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub beta: f64,
    pub theta: f64,
    pub params: RelatednessParams,
    pub variant: Variant,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            beta: 1.0,
            theta: 1.0,
            params: RelatednessParams::default(),
            variant: Variant::Full,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Config(format!(
                "theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        if !self.beta.is_finite() {
            return Err(Error::Config(format!("beta must be finite, got {}", self.beta)));
        }
        if !self.params.is_finite() {
            return Err(Error::Config("lambda weights must be finite".into()));
        }
        Ok(())
    }
}

/// Per-word sense forced to 1 by margin pruning, if any.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct FixedSet(Vec<Option<usize>>);

impl FixedSet {
    pub fn none(words: usize) -> Self {
        FixedSet(vec![None; words])
    }

    pub fn get(&self, word: usize) -> Option<usize> {
        self.0[word]
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.0
    }

    /// Fixed `(word, sense)` pairs in word order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, k)| k.map(|k| (i, k)))
    }

    pub fn count(&self) -> usize {
        self.0.iter().flatten().count()
    }

    pub fn is_superset_of(&self, other: &FixedSet) -> bool {
        other.pairs().all(|(i, k)| self.get(i) == Some(k))
    }
}

impl From<Vec<Option<usize>>> for FixedSet {
    fn from(choices: Vec<Option<usize>>) -> Self {
        FixedSet(choices)
    }
}

/// Lowest index of the largest value.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}

/// Fixes each word to its `c`-argmax when the relative margin of the best
/// over the runner-up reaches `theta`. Single-sense words are always fixed.
/// `theta = 1` disables fixing for multi-sense words; words whose best `c`
/// is not positive are never fixed.
pub fn apply_theta_pruning(tables: &SimTables, theta: f64) -> FixedSet {
    let fixed = (0..tables.word_count())
        .map(|i| {
            let row = tables.c_row(i);
            if row.len() == 1 {
                return Some(0);
            }
            if theta >= 1.0 {
                return None;
            }
            let best = argmax(row);
            let top = row[best];
            let second = row
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != best)
                .map(|(_, &v)| v)
                .fold(f64::NEG_INFINITY, f64::max);
            (top > 0.0 && (top - second) / top >= theta).then_some(best)
        })
        .collect();
    FixedSet(fixed)
}

/// Relatedness coefficients for one interacting word pair `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTerms {
    pub i: usize,
    pub j: usize,
    // row-major M_i x M_j
    r: Vec<f64>,
    cols: usize,
}

impl PairTerms {
    pub fn r(&self, u: usize, v: usize) -> f64 {
        self.r[u * self.cols + v]
    }
}

/// An edge from one word's point of view.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Incidence {
    pub other: usize,
    pub pair: usize,
    /// whether this word is the pair's `i` (row) side
    pub is_row: bool,
}

#[derive(Debug, Clone)]
pub struct QipModel {
    linear: Vec<Vec<f64>>,
    quadratic: Vec<PairTerms>,
    beta: f64,
    fixed: FixedSet,
    variant: Variant,
    word_ids: Vec<String>,
    incident: Vec<Vec<Incidence>>,
}

pub fn build_model(inst: &Instance, tables: &SimTables, cfg: &SolverConfig) -> Result<QipModel> {
    cfg.validate()?;
    let counts = tables.sense_counts();
    if counts != inst.sense_counts().as_slice() {
        return Err(Error::Config(
            "similarity tables were built from a different instance".into(),
        ));
    }
    let n = counts.len();
    let pairs: Vec<(usize, usize)> = match cfg.variant {
        Variant::Full => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        Variant::Adjacent => (1..n).map(|j| (j - 1, j)).collect(),
        Variant::QipR => Vec::new(),
    };
    let quadratic = pairs
        .into_iter()
        .map(|(i, j)| {
            let mut r = Vec::with_capacity(counts[i] * counts[j]);
            for u in 0..counts[i] {
                for v in 0..counts[j] {
                    r.push(relatedness_unchecked(tables, &cfg.params, i, u, j, v));
                }
            }
            PairTerms {
                i,
                j,
                r,
                cols: counts[j],
            }
        })
        .collect();
    let linear = (0..n).map(|i| tables.c_row(i).to_vec()).collect();
    let fixed = apply_theta_pruning(tables, cfg.theta);
    let word_ids = inst.words().iter().map(|w| w.word_id.clone()).collect();
    Ok(QipModel::from_parts(
        linear, quadratic, cfg.beta, fixed, cfg.variant, word_ids,
    ))
}

impl QipModel {
    fn from_parts(
        linear: Vec<Vec<f64>>,
        quadratic: Vec<PairTerms>,
        beta: f64,
        fixed: FixedSet,
        variant: Variant,
        word_ids: Vec<String>,
    ) -> Self {
        let mut incident = vec![Vec::new(); linear.len()];
        for (p, t) in quadratic.iter().enumerate() {
            incident[t.i].push(Incidence {
                other: t.j,
                pair: p,
                is_row: true,
            });
            incident[t.j].push(Incidence {
                other: t.i,
                pair: p,
                is_row: false,
            });
        }
        assert!(
            linear.iter().flatten().all(|x| x.is_finite())
                && quadratic.iter().flat_map(|t| &t.r).all(|x| x.is_finite()),
            "model coefficients must be finite"
        );
        QipModel {
            linear,
            quadratic,
            beta,
            fixed,
            variant,
            word_ids,
            incident,
        }
    }

    /// A model built directly from coefficients. `quadratic` holds
    /// `(i, j, rows)` with `i < j` and `rows[u][v] = r(i,u,j,v)`.
    pub fn from_coefficients(
        linear: Vec<Vec<f64>>,
        quadratic: Vec<(usize, usize, Vec<Vec<f64>>)>,
        beta: f64,
        variant: Variant,
    ) -> Result<Self> {
        let n = linear.len();
        let terms = quadratic
            .into_iter()
            .map(|(i, j, rows)| {
                let allowed = match variant {
                    Variant::Full => true,
                    Variant::Adjacent => j == i + 1,
                    Variant::QipR => false,
                };
                if i >= j || j >= n || !allowed {
                    return Err(Error::Config(format!("pair ({i}, {j}) not allowed in {variant} model")));
                }
                if rows.len() != linear[i].len() || rows.iter().any(|r| r.len() != linear[j].len()) {
                    return Err(Error::Config(format!("pair ({i}, {j}) has the wrong shape")));
                }
                Ok(PairTerms {
                    i,
                    j,
                    cols: linear[j].len(),
                    r: rows.into_iter().flatten().collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let word_ids = (0..n).map(|i| format!("w{i}")).collect();
        Ok(Self::from_parts(
            linear,
            terms,
            beta,
            FixedSet::none(n),
            variant,
            word_ids,
        ))
    }

    /// Replaces the fixed set. Each entry must be in range.
    pub fn with_fixed(mut self, fixed: FixedSet) -> Self {
        assert_eq!(fixed.as_slice().len(), self.linear.len());
        for (i, k) in fixed.pairs() {
            assert!(k < self.linear[i].len());
        }
        self.fixed = fixed;
        self
    }

    pub fn word_count(&self) -> usize {
        self.linear.len()
    }

    pub fn sense_counts(&self) -> Vec<usize> {
        self.linear.iter().map(Vec::len).collect()
    }

    pub fn linear(&self, i: usize, k: usize) -> f64 {
        self.linear[i][k]
    }

    pub fn linear_row(&self, i: usize) -> &[f64] {
        &self.linear[i]
    }

    pub fn quadratic(&self) -> &[PairTerms] {
        &self.quadratic
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn fixed(&self) -> &FixedSet {
        &self.fixed
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn word_ids(&self) -> &[String] {
        &self.word_ids
    }

    /// True when the interaction term contributes nothing.
    pub fn is_separable(&self) -> bool {
        self.quadratic.is_empty() || self.beta == 0.0
    }

    pub(crate) fn incident(&self, i: usize) -> &[Incidence] {
        &self.incident[i]
    }

    /// `β · r` between sense `u` of word `w` and sense `v` of the other
    /// endpoint of `edge`.
    #[inline]
    pub(crate) fn weight(&self, edge: &Incidence, u: usize, v: usize) -> f64 {
        let t = &self.quadratic[edge.pair];
        let r = if edge.is_row { t.r(u, v) } else { t.r(v, u) };
        self.beta * r
    }

    /// Senses a solver may pick for word `i`.
    pub fn domain(&self, i: usize) -> Vec<usize> {
        match self.fixed.get(i) {
            Some(k) => vec![k],
            None => (0..self.linear[i].len()).collect(),
        }
    }

    /// Size of the search space after fixing.
    pub fn search_space(&self) -> u128 {
        (0..self.word_count())
            .map(|i| match self.fixed.get(i) {
                Some(_) => 1,
                None => self.linear[i].len() as u128,
            })
            .product()
    }

    /// Objective value with no feasibility checks. Every solver scores
    /// complete assignments through this one function.
    pub fn score(&self, a: &[usize]) -> f64 {
        let linear: f64 = a.iter().enumerate().map(|(i, &k)| self.linear[i][k]).sum();
        let quad: f64 = self.quadratic.iter().map(|t| t.r(a[t.i], a[t.j])).sum();
        linear + self.beta * quad
    }

    /// Checks that `a` has one in-range sense per word and honours the
    /// fixed set.
    pub fn check(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.word_count() {
            return Err(Error::InvalidAssignment(format!(
                "{} choices for {} words",
                a.len(),
                self.word_count()
            )));
        }
        for (i, &k) in a.choices().iter().enumerate() {
            if k >= self.linear[i].len() {
                return Err(Error::InvalidAssignment(format!(
                    "word `{}` has {} senses, got index {k}",
                    self.word_ids[i],
                    self.linear[i].len()
                )));
            }
            if let Some(f) = self.fixed.get(i) {
                if f != k {
                    return Err(Error::FixedViolation {
                        word: self.word_ids[i].clone(),
                        fixed: f,
                        found: k,
                    });
                }
            }
        }
        Ok(())
    }
}

/// `Z(X)` for a feasible assignment.
pub fn objective(model: &QipModel, a: &Assignment) -> Result<f64> {
    model.check(a)?;
    Ok(model.score(a.choices()))
}

/// Same as [`objective`] but also confirms `a` against the instance.
pub fn objective_for(inst: &Instance, model: &QipModel, a: &Assignment) -> Result<f64> {
    if !validate_assignment(inst, a) {
        return Err(Error::InvalidAssignment(
            "assignment does not match the instance".into(),
        ));
    }
    objective(model, a)
}

/// Absolute tolerance used to decide that two objective values tie.
pub(crate) fn tie_tolerance(a: f64, b: f64) -> f64 {
    1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Whether `(value, a)` beats `(best, b)`: strictly larger objective, or a
/// tie broken toward the lexicographically smaller assignment.
pub(crate) fn better(value: f64, a: &[usize], best: f64, b: &[usize]) -> bool {
    let tol = tie_tolerance(value, best);
    if value > best + tol {
        true
    } else if value < best - tol {
        false
    } else {
        a < b
    }
}
