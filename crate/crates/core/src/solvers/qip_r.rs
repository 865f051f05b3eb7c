use std::time::Instant;

use super::{SolveResult, SolveStats};
use crate::error::{Error, Result};
use crate::model::{argmax, QipModel};

/// Per-word argmax of the similarity term. Valid only when the model has no
/// effective interaction term.
pub fn solve_qip_r(model: &QipModel) -> Result<SolveResult> {
    if !model.is_separable() {
        return Err(Error::Incompatible {
            solver: "qipr".into(),
            reason: "model has a nonzero interaction term".into(),
        });
    }
    let start = Instant::now();
    let choices = per_word_argmax(model);
    Ok(SolveResult::new(
        model,
        choices,
        true,
        SolveStats {
            nodes_explored: model.sense_counts().iter().sum::<usize>() as u64,
            restarts: 0,
            elapsed: start.elapsed(),
        },
    ))
}

/// Best sense of each word by `c` alone, honouring fixed variables.
pub(crate) fn per_word_argmax(model: &QipModel) -> Vec<usize> {
    (0..model.word_count())
        .map(|i| {
            model
                .fixed()
                .get(i)
                .unwrap_or_else(|| argmax(model.linear_row(i)))
        })
        .collect()
}
