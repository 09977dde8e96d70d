use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sampler::{expand_counts, sample_cumulative};
use super::{LdaConfig, LdaModel, TopicVector};
use crate::corpus::SparseRow;
use crate::error::{Error, Result};

/// Fold-in inference with the iteration counts and seed of `config`; the
/// priors always come from the model.
pub fn infer_topics(model: &LdaModel, doc: &SparseRow, config: &LdaConfig) -> Result<TopicVector> {
    config.validate()?;
    fold_in(
        model,
        doc,
        config.infer_iterations,
        config.infer_burn_in,
        config.seed,
    )
}

/// Fold-in inference with the model's own sweep counts and an explicit seed.
pub fn infer_topics_seeded(model: &LdaModel, doc: &SparseRow, seed: u64) -> Result<TopicVector> {
    let c = model.config();
    fold_in(model, doc, c.infer_iterations, c.infer_burn_in, seed)
}

/// Resamples only the held-out document's assignments against the frozen
/// topic-word distributions and averages θ over post-burn-in sweeps.
fn fold_in(
    model: &LdaModel,
    doc: &SparseRow,
    iterations: usize,
    burn_in: usize,
    seed: u64,
) -> Result<TopicVector> {
    let tokens = expand_counts(doc)?;
    if tokens.is_empty() {
        return Err(Error::OutOfVocabulary);
    }
    if let Some(&bad) = tokens.iter().find(|&&w| w as usize >= model.vocab_size()) {
        return Err(Error::DimensionMismatch {
            expected: model.vocab_size(),
            actual: bad as usize + 1,
        });
    }
    let k = model.num_topics();
    let alpha = model.config().alpha;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nd = vec![0u32; k];
    let mut z: Vec<usize> = tokens
        .iter()
        .map(|_| {
            let t = rng.random_range(0..k);
            nd[t] += 1;
            t
        })
        .collect();
    let mut cumulative = vec![0.0; k];
    let mut theta_sum = vec![0.0; k];
    let denom = tokens.len() as f64 + k as f64 * alpha;

    for sweep in 0..iterations {
        for (zi, &w) in z.iter_mut().zip(&tokens) {
            nd[*zi] -= 1;
            let phi = model.phi_for_word(w as usize);
            let mut acc = 0.0;
            for t in 0..k {
                acc += (f64::from(nd[t]) + alpha) * phi[t];
                cumulative[t] = acc;
            }
            *zi = sample_cumulative(&cumulative, &mut rng);
            nd[*zi] += 1;
        }
        if sweep >= burn_in {
            for t in 0..k {
                theta_sum[t] += (f64::from(nd[t]) + alpha) / denom;
            }
        }
    }
    let n = (iterations - burn_in) as f64;
    Ok(TopicVector::new_unchecked(
        theta_sum.into_iter().map(|s| s / n).collect(),
    ))
}
