//! Cosine similarity tables and the sense-sense relatedness measure.
//!
//! Four dense tables are built per instance:
//!
//! * `c(i, m)`: word `i`'s context embedding against its own sense `m`.
//!   Sign is kept.
//! * `h(i, m, j, n)`: sense `m` of word `i` against sense `n` of word `j`.
//! * `b(i, j, n)`: word `i`'s context embedding against sense `n` of word `j`.
//! * `e(i, j)`: context embedding of word `i` against that of word `j`.
//!
//! `h`, `b` and `e` are stored as absolute values so that negative cosines
//! cannot cancel positive ones inside the relatedness sum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Embedding, Instance};

pub fn cosine(u: &Embedding, v: &Embedding) -> Result<f64> {
    cosine_slices(u.as_slice(), v.as_slice())
}

pub(crate) fn cosine_slices(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Weights of the three relatedness components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct RelatednessParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl Default for RelatednessParams {
    fn default() -> Self {
        RelatednessParams {
            lambda1: 1.0,
            lambda2: 1.0,
            lambda3: 1.0,
        }
    }
}

impl RelatednessParams {
    pub fn new(lambda1: f64, lambda2: f64, lambda3: f64) -> Self {
        RelatednessParams {
            lambda1,
            lambda2,
            lambda3,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lambda1.is_finite() && self.lambda2.is_finite() && self.lambda3.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTables {
    counts: Vec<usize>,
    c: Vec<Vec<f64>>,
    // indexed by i * n + j; row-major M_i x M_j, empty on the diagonal
    h: Vec<Vec<f64>>,
    // indexed by i * n + j; length M_j, empty on the diagonal
    b: Vec<Vec<f64>>,
    e: Vec<f64>,
}

impl SimTables {
    /// All-zero tables for the given sense counts. Mostly useful for building
    /// hand-specified tables with the `set_*` methods.
    pub fn zeros(sense_counts: &[usize]) -> Self {
        let n = sense_counts.len();
        let mut h = Vec::with_capacity(n * n);
        let mut b = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    h.push(Vec::new());
                    b.push(Vec::new());
                } else {
                    h.push(vec![0.0; sense_counts[i] * sense_counts[j]]);
                    b.push(vec![0.0; sense_counts[j]]);
                }
            }
        }
        SimTables {
            counts: sense_counts.to_vec(),
            c: sense_counts.iter().map(|&m| vec![0.0; m]).collect(),
            h,
            b,
            e: vec![0.0; n * n],
        }
    }

    pub fn word_count(&self) -> usize {
        self.counts.len()
    }

    pub fn sense_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn c(&self, i: usize, m: usize) -> f64 {
        self.c[i][m]
    }

    pub fn c_row(&self, i: usize) -> &[f64] {
        &self.c[i]
    }

    pub fn h(&self, i: usize, m: usize, j: usize, n: usize) -> f64 {
        assert_ne!(i, j, "h is defined only between different words");
        self.h[i * self.counts.len() + j][m * self.counts[j] + n]
    }

    pub fn b(&self, i: usize, j: usize, n: usize) -> f64 {
        assert_ne!(i, j, "b is defined only between different words");
        self.b[i * self.counts.len() + j][n]
    }

    pub fn e(&self, i: usize, j: usize) -> f64 {
        assert_ne!(i, j, "e is defined only between different words");
        self.e[i * self.counts.len() + j]
    }

    pub fn set_c(&mut self, i: usize, m: usize, value: f64) {
        self.c[i][m] = value;
    }

    /// Sets both `h(i,m,j,n)` and its mirror `h(j,n,i,m)`.
    pub fn set_h(&mut self, i: usize, m: usize, j: usize, n: usize, value: f64) {
        assert_ne!(i, j);
        let w = self.counts.len();
        let (mi, mj) = (self.counts[i], self.counts[j]);
        self.h[i * w + j][m * mj + n] = value;
        self.h[j * w + i][n * mi + m] = value;
    }

    pub fn set_b(&mut self, i: usize, j: usize, n: usize, value: f64) {
        assert_ne!(i, j);
        let w = self.counts.len();
        self.b[i * w + j][n] = value;
    }

    /// Sets both `e(i,j)` and `e(j,i)`.
    pub fn set_e(&mut self, i: usize, j: usize, value: f64) {
        assert_ne!(i, j);
        let w = self.counts.len();
        self.e[i * w + j] = value;
        self.e[j * w + i] = value;
    }

    /// Snapshot of the tables for debugging output.
    pub fn dump(&self) -> TablesDump {
        let n = self.counts.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                pairs.push(PairDump {
                    i,
                    j,
                    e: self.e(i, j),
                    b: self.b[i * n + j].clone(),
                    h: self.h[i * n + j]
                        .chunks(self.counts[j])
                        .map(<[f64]>::to_vec)
                        .collect(),
                });
            }
        }
        TablesDump {
            sense_counts: self.counts.clone(),
            c: self.c.clone(),
            pairs,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TablesDump {
    pub sense_counts: Vec<usize>,
    pub c: Vec<Vec<f64>>,
    pub pairs: Vec<PairDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDump {
    pub i: usize,
    pub j: usize,
    pub e: f64,
    /// `b(i, j, n)` for every sense `n` of word `j`.
    pub b: Vec<f64>,
    /// `h(i, m, j, n)` as rows over `m`.
    pub h: Vec<Vec<f64>>,
}

pub fn build_sim_tables(inst: &Instance) -> SimTables {
    let counts = inst.sense_counts();
    let n = counts.len();
    let mut tables = SimTables::zeros(&counts);
    let cos = |u: &Embedding, v: &Embedding| {
        cosine(u, v).expect("instance embeddings share one dimension")
    };

    for (i, word) in inst.words().iter().enumerate() {
        for (m, sense) in word.senses.iter().enumerate() {
            tables.c[i][m] = cos(&word.context_embedding, &sense.embedding);
        }
    }
    for i in 0..n {
        let wi = inst.word(i);
        for j in 0..n {
            if i == j {
                continue;
            }
            let wj = inst.word(j);
            for (nn, sense) in wj.senses.iter().enumerate() {
                tables.b[i * n + j][nn] = cos(&wi.context_embedding, &sense.embedding).abs();
            }
            if i < j {
                tables.set_e(i, j, cos(&wi.context_embedding, &wj.context_embedding).abs());
                for (m, si) in wi.senses.iter().enumerate() {
                    for (nn, sj) in wj.senses.iter().enumerate() {
                        tables.set_h(i, m, j, nn, cos(&si.embedding, &sj.embedding).abs());
                    }
                }
            }
        }
    }
    tables
}

/// `r(i,m,j,n) = λ₁(b(i,j,n) + b(j,i,m)) + λ₂ h(i,m,j,n) + λ₃(c(i,m) + e(i,j) + c(j,n))`
pub fn relatedness(
    tables: &SimTables,
    params: &RelatednessParams,
    i: usize,
    m: usize,
    j: usize,
    n: usize,
) -> Result<f64> {
    if i == j {
        return Err(Error::SelfPair(i));
    }
    let counts = tables.sense_counts();
    if i >= counts.len() || j >= counts.len() {
        return Err(Error::OutOfRange(format!(
            "word {} of {}",
            i.max(j),
            counts.len()
        )));
    }
    if m >= counts[i] || n >= counts[j] {
        return Err(Error::OutOfRange(format!(
            "sense ({m}, {n}) for words with {} and {} senses",
            counts[i], counts[j]
        )));
    }
    Ok(relatedness_unchecked(tables, params, i, m, j, n))
}

#[inline]
pub(crate) fn relatedness_unchecked(
    t: &SimTables,
    p: &RelatednessParams,
    i: usize,
    m: usize,
    j: usize,
    n: usize,
) -> f64 {
    p.lambda1 * (t.b(i, j, n) + t.b(j, i, m))
        + p.lambda2 * t.h(i, m, j, n)
        + p.lambda3 * (t.c(i, m) + t.e(i, j) + t.c(j, n))
}
