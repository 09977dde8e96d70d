//! Baseline learners: a linear soft-margin SVM trained by sequential
//! minimal optimization and an information-gain decision tree.

mod features;
mod svm;
mod tree;

pub use features::FeatureMatrix;
pub use svm::{predict_svm, train_svm, train_svm_observed, ClassWeight, LinearSvmModel, SvmConfig};
pub use tree::{predict_tree, train_tree, DecisionTreeModel, Node, TreeConfig};

use crate::error::{Error, Result};

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// Checks that `perm` is a permutation of `0..n`.
pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    check_dim(n, perm.len())?;
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidConfig("not a permutation".into()));
        }
    }
    Ok(())
}
