use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdaConfig {
    pub topics: usize,
    /// Symmetric document-topic prior.
    pub alpha: f64,
    /// Symmetric topic-word prior.
    pub beta: f64,
    pub train_iterations: usize,
    /// Training sweeps discarded before θ samples are averaged.
    pub burn_in: usize,
    pub infer_iterations: usize,
    pub infer_burn_in: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// Defaults for `topics` topics: α = 50/K, β = 0.01, 1000 training
    /// sweeps with 200 burn-in, 100 fold-in sweeps with 50 burn-in.
    pub fn with_topics(topics: usize) -> Self {
        Self {
            topics,
            alpha: 50.0 / topics.max(1) as f64,
            beta: 0.01,
            train_iterations: 1000,
            burn_in: 200,
            infer_iterations: 100,
            infer_burn_in: 50,
            seed: 1,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidConfig(m));
        if self.topics < 2 {
            return err(format!(
                "topic count must be at least 2, got {}",
                self.topics
            ));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return err(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return err(format!("beta must be positive, got {}", self.beta));
        }
        if self.train_iterations <= self.burn_in {
            return err(format!(
                "train_iterations ({}) must exceed burn_in ({})",
                self.train_iterations, self.burn_in
            ));
        }
        if self.infer_iterations <= self.infer_burn_in {
            return err(format!(
                "infer_iterations ({}) must exceed infer_burn_in ({})",
                self.infer_iterations, self.infer_burn_in
            ));
        }
        Ok(())
    }
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self::with_topics(10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = LdaConfig::with_topics(25);
        assert_eq!(c.alpha, 2.0);
        assert_eq!(c.beta, 0.01);
        assert_eq!((c.train_iterations, c.burn_in), (1000, 200));
        assert_eq!((c.infer_iterations, c.infer_burn_in), (100, 50));
        c.validate().unwrap();
    }

    #[test]
    fn rejects_invalid() {
        assert!(LdaConfig::with_topics(1).validate().is_err());
        let mut c = LdaConfig::with_topics(5);
        c.burn_in = c.train_iterations;
        assert!(c.validate().is_err());
        let mut c = LdaConfig::with_topics(5);
        c.beta = 0.0;
        assert!(c.validate().is_err());
    }
}
