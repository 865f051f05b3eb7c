//! Disambiguation instances and their on-disk format.
//!
//! An instance is one context: an ordered list of target words, each with a
//! contextual embedding and an ordered list of candidate senses. Sense order
//! is significant: it defines the sense index used everywhere downstream and
//! the tie-break order of every solver.
//!
//! The file format is JSON. A single instance looks like
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "words": [
//!     {
//!       "word_id": "w0",
//!       "surface": "bank",
//!       "context_embedding": [0.9, 0.1],
//!       "senses": [
//!         { "sense_id": "bank%1", "gloss": "sloping land", "embedding": [1.0, 0.0] },
//!         { "sense_id": "bank%2", "embedding": [0.0, 1.0] }
//!       ]
//!     }
//!   ],
//!   "gold": ["bank%1"]
//! }
//! ```
//!
//! and a corpus file is a JSON array of such objects.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, InstanceError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding(Vec<f64>);

impl Embedding {
    pub fn new(values: Vec<f64>) -> Self {
        Embedding(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Embedding {
        Embedding(self.0.iter().map(|x| x * factor).collect())
    }
}

impl From<Vec<f64>> for Embedding {
    fn from(values: Vec<f64>) -> Self {
        Embedding(values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseCandidate {
    pub sense_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gloss: Option<String>,
    pub embedding: Embedding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetWord {
    pub word_id: String,
    #[serde(default)]
    pub surface: String,
    pub context_embedding: Embedding,
    pub senses: Vec<SenseCandidate>,
}

impl TargetWord {
    pub fn sense_count(&self) -> usize {
        self.senses.len()
    }

    pub fn sense_index(&self, sense_id: &str) -> Option<usize> {
        self.senses.iter().position(|s| s.sense_id == sense_id)
    }
}

/// Unvalidated mirror of [`Instance`], used only for deserialization.
#[derive(Deserialize)]
struct RawInstance {
    dimension: usize,
    words: Vec<TargetWord>,
    #[serde(default)]
    gold: Option<Vec<String>>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = InstanceError;

    fn try_from(raw: RawInstance) -> Result<Self, InstanceError> {
        Instance::new(raw.dimension, raw.words, raw.gold)
    }
}

/// A validated disambiguation context. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    dimension: usize,
    words: Vec<TargetWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gold: Option<Vec<String>>,
}

fn check_embedding(owner: impl Fn() -> String, e: &Embedding, dim: usize) -> Result<(), InstanceError> {
    if e.len() != dim {
        return Err(InstanceError::DimensionMismatch {
            owner: owner(),
            expected: dim,
            found: e.len(),
        });
    }
    if e.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(InstanceError::NonFinite { owner: owner() });
    }
    if e.as_slice().iter().all(|&x| x == 0.0) {
        return Err(InstanceError::ZeroEmbedding { owner: owner() });
    }
    Ok(())
}

impl Instance {
    pub fn new(
        dimension: usize,
        words: Vec<TargetWord>,
        gold: Option<Vec<String>>,
    ) -> Result<Self, InstanceError> {
        if dimension == 0 {
            return Err(InstanceError::ZeroDimension);
        }
        if words.is_empty() {
            return Err(InstanceError::NoWords);
        }
        let mut word_ids = HashSet::new();
        for word in &words {
            if !word_ids.insert(word.word_id.as_str()) {
                return Err(InstanceError::DuplicateWord {
                    word_id: word.word_id.clone(),
                });
            }
            if word.senses.is_empty() {
                return Err(InstanceError::NoSenses {
                    word_id: word.word_id.clone(),
                });
            }
            check_embedding(
                || format!("word `{}`", word.word_id),
                &word.context_embedding,
                dimension,
            )?;
            let mut sense_ids = HashSet::new();
            for sense in &word.senses {
                if !sense_ids.insert(sense.sense_id.as_str()) {
                    return Err(InstanceError::DuplicateSense {
                        word_id: word.word_id.clone(),
                        sense_id: sense.sense_id.clone(),
                    });
                }
                check_embedding(
                    || format!("sense `{}` of word `{}`", sense.sense_id, word.word_id),
                    &sense.embedding,
                    dimension,
                )?;
            }
        }
        if let Some(gold) = &gold {
            if gold.len() != words.len() {
                return Err(InstanceError::GoldLength {
                    expected: words.len(),
                    found: gold.len(),
                });
            }
            for (word, label) in words.iter().zip(gold) {
                if word.sense_index(label).is_none() {
                    return Err(InstanceError::GoldNotCandidate {
                        word_id: word.word_id.clone(),
                        sense_id: label.clone(),
                    });
                }
            }
        }
        Ok(Instance {
            dimension,
            words,
            gold,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text).map_err(json_error)?;
        Instance::try_from(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn words(&self) -> &[TargetWord] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &TargetWord {
        &self.words[i]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn sense_counts(&self) -> Vec<usize> {
        self.words.iter().map(TargetWord::sense_count).collect()
    }

    pub fn gold(&self) -> Option<&[String]> {
        self.gold.as_deref()
    }

    /// Gold labels as sense indices.
    pub fn gold_assignment(&self) -> Option<Assignment> {
        let gold = self.gold.as_ref()?;
        let choices = self
            .words
            .iter()
            .zip(gold)
            .map(|(w, g)| w.sense_index(g).expect("gold validated at construction"))
            .collect();
        Some(Assignment::new(choices))
    }

    /// Number of valid assignments, ∏ Mᵢ.
    pub fn assignment_count(&self) -> u128 {
        self.words.iter().map(|w| w.sense_count() as u128).product()
    }

    /// A copy with every embedding multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Instance {
        let words = self
            .words
            .iter()
            .map(|w| TargetWord {
                word_id: w.word_id.clone(),
                surface: w.surface.clone(),
                context_embedding: w.context_embedding.scaled(factor),
                senses: w
                    .senses
                    .iter()
                    .map(|s| SenseCandidate {
                        sense_id: s.sense_id.clone(),
                        gloss: s.gloss.clone(),
                        embedding: s.embedding.scaled(factor),
                    })
                    .collect(),
            })
            .collect();
        Instance::new(self.dimension, words, self.gold.clone())
            .expect("scaling by a nonzero finite factor preserves validity")
    }

    pub fn without_gold(&self) -> Instance {
        Instance {
            gold: None,
            ..self.clone()
        }
    }

    /// Sense ids chosen by `a`.
    pub fn sense_ids(&self, a: &Assignment) -> Vec<String> {
        self.words
            .iter()
            .zip(a.choices())
            .map(|(w, &k)| w.senses[k].sense_id.clone())
            .collect()
    }
}

fn json_error(e: serde_json::Error) -> InstanceError {
    InstanceError::Syntax(e.to_string())
}

/// One chosen sense index per word. The implied 0-1 vector has exactly one
/// 1 in each word block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(choices: Vec<usize>) -> Self {
        Assignment(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Expanded 0-1 decision vector, word blocks concatenated in word order.
    pub fn to_binary(&self, sense_counts: &[usize]) -> Vec<u8> {
        let mut x = Vec::with_capacity(sense_counts.iter().sum());
        for (&k, &m) in self.0.iter().zip(sense_counts) {
            x.extend((0..m).map(|s| u8::from(s == k)));
        }
        x
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(choices: Vec<usize>) -> Self {
        Assignment(choices)
    }
}

/// True iff `a` picks exactly one in-range sense for every word.
pub fn validate_assignment(inst: &Instance, a: &Assignment) -> bool {
    a.len() == inst.len()
        && a.choices()
            .iter()
            .zip(inst.words())
            .all(|(&k, w)| k < w.sense_count())
}

/// Lexicographic enumeration of every assignment over the given per-word
/// domains (last word varies fastest).
#[derive(Debug, Clone)]
pub struct AssignmentIter {
    domains: Vec<Vec<usize>>,
    cursor: Option<Vec<usize>>,
}

impl AssignmentIter {
    pub fn new(sense_counts: &[usize]) -> Self {
        Self::over_domains(sense_counts.iter().map(|&m| (0..m).collect()).collect())
    }

    /// Each domain must be sorted ascending for the output to be in
    /// lexicographic order.
    pub fn over_domains(domains: Vec<Vec<usize>>) -> Self {
        let cursor = if domains.iter().any(Vec::is_empty) {
            None
        } else {
            Some(vec![0; domains.len()])
        };
        AssignmentIter { domains, cursor }
    }
}

impl Iterator for AssignmentIter {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        let cursor = self.cursor.as_mut()?;
        let current = Assignment(
            cursor
                .iter()
                .zip(&self.domains)
                .map(|(&p, d)| d[p])
                .collect(),
        );
        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                self.cursor = None;
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < self.domains[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        Some(current)
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(Instance::from_json(&text)?)
}

/// Loads a corpus file: a JSON array of instances, or a single instance
/// object. Validation errors carry the offending instance index.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Instance>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text)
}

pub fn parse_corpus(text: &str) -> Result<Vec<Instance>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Instance(json_error(e)))?;
    let from_value = |item| {
        serde_json::from_value::<RawInstance>(item)
            .map_err(json_error)
            .and_then(Instance::try_from)
    };
    match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .enumerate()
            .map(|(index, item)| {
                from_value(item).map_err(|source| Error::CorpusEntry { index, source })
            })
            .collect(),
        single => Ok(vec![from_value(single)?]),
    }
}

pub fn write_corpus(path: impl AsRef<Path>, corpus: &[Instance]) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(corpus)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
