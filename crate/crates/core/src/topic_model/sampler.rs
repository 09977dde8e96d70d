use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LdaConfig, LdaModel, TopicVector};
use crate::corpus::{DocTermMatrix, SparseRow, Weighting};
use crate::error::{Error, Result};

/// Expands a count row into one term id per token, in term order.
pub(crate) fn expand_counts(row: &SparseRow) -> Result<Vec<u32>> {
    let mut tokens = Vec::new();
    for &(t, c) in row {
        if c < 0.0 || c.fract() != 0.0 {
            return Err(Error::WeightingMismatch(format!("non-integer weight {c}")));
        }
        tokens.extend(std::iter::repeat_n(t as u32, c as usize));
    }
    Ok(tokens)
}

/// Draws an index from unnormalized cumulative weights.
#[inline]
pub(crate) fn sample_cumulative(cumulative: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = cumulative[cumulative.len() - 1];
    let u = rng.random::<f64>() * total;
    // linear scan; K is at most a few hundred
    cumulative
        .iter()
        .position(|&c| u < c)
        .unwrap_or(cumulative.len() - 1)
}

/// Collapsed Gibbs sampler state over a training matrix.
pub struct GibbsSampler {
    config: LdaConfig,
    vocab_size: usize,
    vocab_hash: String,
    docs: Vec<Vec<u32>>,
    assignments: Vec<Vec<u32>>,
    /// D x K document-topic counts.
    ndt: Vec<u32>,
    /// V x K word-topic counts.
    nwt: Vec<u32>,
    nt: Vec<u64>,
    theta_sum: Vec<f64>,
    samples: usize,
    sweeps: usize,
    rng: ChaCha8Rng,
    scratch: Vec<f64>,
}

impl GibbsSampler {
    /// Validates the inputs and draws a uniformly random initial
    /// assignment for every token.
    pub fn new(matrix: &DocTermMatrix, config: &LdaConfig) -> Result<Self> {
        config.validate()?;
        if matrix.weighting != Weighting::Count {
            return Err(Error::WeightingMismatch(matrix.weighting.to_string()));
        }
        if matrix.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let (k, v) = (config.topics, matrix.vocab_size);
        if k > v {
            return Err(Error::TopicsExceedAttributes {
                topics: k,
                attributes: v,
            });
        }
        let mut docs = Vec::with_capacity(matrix.len());
        for (i, row) in matrix.rows.iter().enumerate() {
            let tokens = expand_counts(row)?;
            if tokens.is_empty() {
                return Err(Error::EmptyDocument(matrix.doc_ids[i].clone()));
            }
            if let Some(&bad) = tokens.iter().find(|&&w| w as usize >= v) {
                return Err(Error::DimensionMismatch {
                    expected: v,
                    actual: bad as usize + 1,
                });
            }
            docs.push(tokens);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut ndt = vec![0u32; docs.len() * k];
        let mut nwt = vec![0u32; v * k];
        let mut nt = vec![0u64; k];
        let assignments = docs
            .iter()
            .enumerate()
            .map(|(d, tokens)| {
                tokens
                    .iter()
                    .map(|&w| {
                        let z = rng.random_range(0..k);
                        ndt[d * k + z] += 1;
                        nwt[w as usize * k + z] += 1;
                        nt[z] += 1;
                        z as u32
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            config: *config,
            vocab_size: v,
            vocab_hash: matrix.vocab_hash.clone(),
            theta_sum: vec![0.0; docs.len() * k],
            docs,
            assignments,
            ndt,
            nwt,
            nt,
            samples: 0,
            sweeps: 0,
            rng,
            scratch: vec![0.0; k],
        })
    }

    /// Resamples every token's topic once. After burn-in the current θ
    /// estimate of every document is added to the running average.
    pub fn sweep(&mut self) {
        let k = self.config.topics;
        let alpha = self.config.alpha;
        let beta = self.config.beta;
        let vbeta = self.vocab_size as f64 * beta;
        let mut inv_denom: Vec<f64> = self.nt.iter().map(|&n| 1.0 / (n as f64 + vbeta)).collect();

        for (d, tokens) in self.docs.iter().enumerate() {
            let zs = &mut self.assignments[d];
            let nd = &mut self.ndt[d * k..(d + 1) * k];
            for (z, &w) in zs.iter_mut().zip(tokens) {
                let old = *z as usize;
                let nw = &mut self.nwt[w as usize * k..(w as usize + 1) * k];
                nd[old] -= 1;
                nw[old] -= 1;
                self.nt[old] -= 1;
                inv_denom[old] = 1.0 / (self.nt[old] as f64 + vbeta);

                let mut acc = 0.0;
                for t in 0..k {
                    acc += (f64::from(nd[t]) + alpha) * (f64::from(nw[t]) + beta) * inv_denom[t];
                    self.scratch[t] = acc;
                }
                let new = sample_cumulative(&self.scratch, &mut self.rng);

                nd[new] += 1;
                nw[new] += 1;
                self.nt[new] += 1;
                inv_denom[new] = 1.0 / (self.nt[new] as f64 + vbeta);
                *z = new as u32;
            }
        }
        self.sweeps += 1;
        if self.sweeps > self.config.burn_in {
            let ka = k as f64 * alpha;
            for (d, tokens) in self.docs.iter().enumerate() {
                let denom = tokens.len() as f64 + ka;
                for t in 0..k {
                    self.theta_sum[d * k + t] += (f64::from(self.ndt[d * k + t]) + alpha) / denom;
                }
            }
            self.samples += 1;
        }
    }

    pub fn sweeps_done(&self) -> usize {
        self.sweeps
    }

    pub fn num_tokens(&self) -> u64 {
        self.docs.iter().map(|d| d.len() as u64).sum()
    }

    /// Σ_d Σ_t n_{d,t}.
    pub fn doc_topic_total(&self) -> u64 {
        self.ndt.iter().map(|&c| u64::from(c)).sum()
    }

    /// Σ_t Σ_w n_{t,w}.
    pub fn topic_word_total(&self) -> u64 {
        self.nwt.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.nt
    }

    /// Current per-document θ estimate from the latest assignment.
    pub fn current_theta(&self, doc: usize) -> Vec<f64> {
        let k = self.config.topics;
        let denom = self.docs[doc].len() as f64 + k as f64 * self.config.alpha;
        self.ndt[doc * k..(doc + 1) * k]
            .iter()
            .map(|&c| (f64::from(c) + self.config.alpha) / denom)
            .collect()
    }

    /// Final model plus per-document θ averaged over post-burn-in sweeps.
    /// Runs any sweeps still outstanding.
    pub fn finish(mut self) -> (LdaModel, Vec<TopicVector>) {
        while self.sweeps < self.config.train_iterations {
            self.sweep();
        }
        let (k, v) = (self.config.topics, self.vocab_size);
        let mut by_topic = vec![0u32; k * v];
        for w in 0..v {
            for t in 0..k {
                by_topic[t * v + w] = self.nwt[w * k + t];
            }
        }
        let n = self.samples as f64;
        let thetas = self
            .theta_sum
            .chunks(k)
            .map(|row| TopicVector::new_unchecked(row.iter().map(|s| s / n).collect()))
            .collect();
        let model = LdaModel::from_counts(self.config, v, self.vocab_hash, by_topic);
        (model, thetas)
    }
}

/// Fits LDA to a count matrix. Returns the model and the training
/// documents' topic vectors in row order.
pub fn train_lda(
    matrix: &DocTermMatrix,
    config: &LdaConfig,
) -> Result<(LdaModel, Vec<TopicVector>)> {
    Ok(GibbsSampler::new(matrix, config)?.finish())
}

/// Like [`train_lda`], calling `observe` after every sweep.
pub fn train_lda_observed<F>(
    matrix: &DocTermMatrix,
    config: &LdaConfig,
    mut observe: F,
) -> Result<(LdaModel, Vec<TopicVector>)>
where
    F: FnMut(&GibbsSampler),
{
    let mut sampler = GibbsSampler::new(matrix, config)?;
    while sampler.sweeps_done() < config.train_iterations {
        sampler.sweep();
        observe(&sampler);
    }
    Ok(sampler.finish())
}
