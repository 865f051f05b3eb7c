//! Seeded synthetic instances for tests, benchmarks and demo corpora.
//!
//! Every instance shares a hidden topic vector. The gold sense of each word
//! leans toward the topic and the word's context embedding is a noisy copy
//! of its gold sense, so interactions between words carry real signal.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::instance::{Instance, SenseCandidate, TargetWord};

#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub words: RangeInclusive<usize>,
    pub senses: RangeInclusive<usize>,
    /// Overrides `words` and `senses` when set.
    pub sense_counts: Option<Vec<usize>>,
    pub dimension: usize,
    pub topic_weight: f64,
    pub noise: f64,
    pub with_gold: bool,
}

impl SynthSpec {
    pub fn new(words: RangeInclusive<usize>, senses: RangeInclusive<usize>, dimension: usize) -> Self {
        SynthSpec {
            words,
            senses,
            sense_counts: None,
            dimension,
            topic_weight: 0.6,
            noise: 0.8,
            with_gold: true,
        }
    }

    pub fn fixed(sense_counts: &[usize], dimension: usize) -> Self {
        SynthSpec {
            sense_counts: Some(sense_counts.to_vec()),
            ..Self::new(1..=1, 1..=1, dimension)
        }
    }

    pub fn generate(&self, seed: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counts = match &self.sense_counts {
            Some(c) => c.clone(),
            None => {
                let n = rng.random_range(self.words.clone());
                (0..n).map(|_| rng.random_range(self.senses.clone())).collect()
            }
        };
        let dim = self.dimension;
        let topic = gaussian(&mut rng, dim);
        let mut words = Vec::with_capacity(counts.len());
        let mut gold = Vec::with_capacity(counts.len());
        for (i, &m) in counts.iter().enumerate() {
            let g = rng.random_range(0..m);
            let mut senses = Vec::with_capacity(m);
            for k in 0..m {
                let mut e = gaussian(&mut rng, dim);
                if k == g {
                    e.iter_mut()
                        .zip(&topic)
                        .for_each(|(x, t)| *x += self.topic_weight * t);
                }
                senses.push(SenseCandidate {
                    sense_id: format!("w{i}%{k}"),
                    gloss: None,
                    embedding: e.into(),
                });
            }
            let noise = gaussian(&mut rng, dim);
            let context: Vec<f64> = senses[g]
                .embedding
                .as_slice()
                .iter()
                .zip(&noise)
                .map(|(s, z)| s + self.noise * z)
                .collect();
            gold.push(senses[g].sense_id.clone());
            words.push(TargetWord {
                word_id: format!("w{i}"),
                surface: format!("word{i}"),
                context_embedding: context.into(),
                senses,
            });
        }
        Instance::new(dim, words, self.with_gold.then_some(gold))
            .expect("gaussian embeddings are nonzero with probability one")
    }

    /// `count` instances with seeds `seed, seed + 1, ...`.
    pub fn corpus(&self, seed: u64, count: usize) -> Vec<Instance> {
        (0..count as u64).map(|k| self.generate(seed + k)).collect()
    }
}

fn gaussian(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Instance with exactly `words` words and 1 to `max_senses` senses each.
pub fn random_instance(seed: u64, words: usize, max_senses: usize, dimension: usize) -> Instance {
    SynthSpec::new(words..=words, 1..=max_senses, dimension).generate(seed)
}
