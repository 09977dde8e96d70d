use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{check_dim, check_permutation, FeatureMatrix};
use crate::corpus::Label;
use crate::error::Result;

/// Gains at or below this are treated as no improvement.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TreeConfig {
    /// Minimum number of samples in each child of a split.
    pub min_leaf: usize,
    pub max_depth: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            min_leaf: 2,
            max_depth: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        label: Label,
        samples: usize,
    },
    Split {
        feature: usize,
        /// Values `<= threshold` go left.
        threshold: f64,
        samples: usize,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub fn samples(&self) -> usize {
        match self {
            Node::Leaf { samples, .. } | Node::Split { samples, .. } => *samples,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    fn remap(&self, inverse: &[usize]) -> Node {
        match self {
            Node::Leaf { .. } => self.clone(),
            Node::Split {
                feature,
                threshold,
                samples,
                left,
                right,
            } => Node::Split {
                feature: inverse[*feature],
                threshold: *threshold,
                samples: *samples,
                left: Box::new(left.remap(inverse)),
                right: Box::new(right.remap(inverse)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    pub root: Node,
    pub n_features: usize,
    pub min_leaf: usize,
    pub max_depth: usize,
}

impl DecisionTreeModel {
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        check_dim(self.n_features, x.len())?;
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { label, .. } => return Ok(*label),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    node = if x[*feature] <= *threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }

    /// Model for inputs whose column `i` holds original feature `perm[i]`.
    pub fn permute_features(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n_features)?;
        let mut inverse = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        Ok(Self {
            root: self.root.remap(&inverse),
            ..self.clone()
        })
    }
}

pub fn predict_tree(model: &DecisionTreeModel, x: &[f64]) -> Result<Label> {
    model.predict(x)
}

fn entropy(pos: usize, n: usize) -> f64 {
    if pos == 0 || pos == n {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    let q = 1.0 - p;
    -(p * p.log2() + q * q.log2())
}

/// Majority label; ties go to the negative class.
fn majority(pos: usize, n: usize) -> Label {
    if 2 * pos > n {
        Label::Positive
    } else {
        Label::Negative
    }
}

struct Split {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct Builder<'a> {
    data: &'a FeatureMatrix,
    config: TreeConfig,
}

impl Builder<'_> {
    fn positives(&self, idx: &[usize]) -> usize {
        idx.iter()
            .filter(|&&i| self.data.labels()[i].is_positive())
            .count()
    }

    fn best_split(&self, idx: &[usize], pos: usize) -> Option<Split> {
        let n = idx.len();
        let parent = entropy(pos, n);
        let min_leaf = self.config.min_leaf.max(1);
        let mut best: Option<Split> = None;
        let mut column: Vec<(f64, bool)> = Vec::with_capacity(n);
        for f in 0..self.data.n_features() {
            column.clear();
            column.extend(
                idx.iter()
                    .map(|&i| (self.data.row(i)[f], self.data.labels()[i].is_positive())),
            );
            column.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
            let mut left_pos = 0;
            for cut in 1..n {
                left_pos += usize::from(column[cut - 1].1);
                let (lo, hi) = (column[cut - 1].0, column[cut].0);
                if lo == hi || cut < min_leaf || n - cut < min_leaf {
                    continue;
                }
                let right_pos = pos - left_pos;
                let gain = parent
                    - (cut as f64 / n as f64) * entropy(left_pos, cut)
                    - ((n - cut) as f64 / n as f64) * entropy(right_pos, n - cut);
                if gain > MIN_GAIN && best.as_ref().is_none_or(|b| gain > b.gain) {
                    let mid = lo + (hi - lo) / 2.0;
                    let threshold = if mid < hi { mid } else { lo };
                    best = Some(Split {
                        feature: f,
                        threshold,
                        gain,
                    });
                }
            }
        }
        best
    }

    fn build(&self, idx: Vec<usize>, depth: usize) -> Node {
        let n = idx.len();
        let pos = self.positives(&idx);
        let leaf = Node::Leaf {
            label: majority(pos, n),
            samples: n,
        };
        if pos == 0 || pos == n || depth >= self.config.max_depth {
            return leaf;
        }
        let Some(split) = self.best_split(&idx, pos) else {
            return leaf;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = idx
            .iter()
            .partition(|&&i| self.data.row(i)[split.feature] <= split.threshold);
        Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            samples: n,
            left: Box::new(self.build(left, depth + 1)),
            right: Box::new(self.build(right, depth + 1)),
        }
    }
}

/// Grows a tree by recursive information-gain splits. Candidate
/// thresholds are midpoints between consecutive distinct values; gain ties
/// keep the lowest feature index, then the lowest threshold.
pub fn train_tree(data: &FeatureMatrix, config: &TreeConfig) -> Result<DecisionTreeModel> {
    if data.is_empty() {
        return Err(crate::error::Error::EmptyCorpus);
    }
    let builder = Builder {
        data,
        config: *config,
    };
    Ok(DecisionTreeModel {
        root: builder.build((0..data.len()).collect(), 0),
        n_features: data.n_features(),
        min_leaf: config.min_leaf,
        max_depth: config.max_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Negative as N, Positive as P};

    fn fm(rows: &[&[f64]], labels: &[Label]) -> FeatureMatrix {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        FeatureMatrix::from_rows(&rows, labels).unwrap()
    }

    #[test]
    fn pure_data_gives_a_single_leaf() {
        let data = fm(&[&[0.1], &[0.7], &[0.3]], &[P, P, P]);
        let tree = train_tree(&data, &TreeConfig::default()).unwrap();
        assert_eq!(
            tree.root,
            Node::Leaf {
                label: P,
                samples: 3
            }
        );
        assert_eq!(tree.predict(&[100.0]).unwrap(), P);
    }

    #[test]
    fn hand_enumerated_gain_picks_the_middle_cut() {
        // cuts at 0.15, 0.5, 0.85 have gains 0.311, 1.0, 0.311
        let data = fm(&[&[0.1], &[0.2], &[0.8], &[0.9]], &[N, N, P, P]);
        let tree = train_tree(
            &data,
            &TreeConfig {
                min_leaf: 1,
                max_depth: 25,
            },
        )
        .unwrap();
        match &tree.root {
            Node::Split {
                feature, threshold, ..
            } => {
                assert_eq!(*feature, 0);
                assert!(*threshold > 0.2 && *threshold < 0.8);
                assert!((threshold - 0.5).abs() < 1e-12);
            }
            leaf => panic!("expected a split, got {leaf:?}"),
        }
        for (x, l) in data.rows().zip(data.labels()) {
            assert_eq!(tree.predict(x).unwrap(), *l);
        }
    }

    #[test]
    fn value_at_threshold_goes_left() {
        let tree = DecisionTreeModel {
            root: Node::Split {
                feature: 0,
                threshold: 0.5,
                samples: 2,
                left: Box::new(Node::Leaf {
                    label: N,
                    samples: 1,
                }),
                right: Box::new(Node::Leaf {
                    label: P,
                    samples: 1,
                }),
            },
            n_features: 1,
            min_leaf: 1,
            max_depth: 1,
        };
        assert_eq!(tree.predict(&[0.5]).unwrap(), N);
        assert_eq!(tree.predict(&[0.50001]).unwrap(), P);
        assert!(tree.predict(&[0.5, 1.0]).is_err());
    }

    #[test]
    fn majority_ties_are_negative() {
        // identical features cannot be split
        let data = fm(&[&[1.0], &[1.0]], &[P, N]);
        let tree = train_tree(&data, &TreeConfig::default()).unwrap();
        assert_eq!(
            tree.root,
            Node::Leaf {
                label: N,
                samples: 2
            }
        );
    }

    #[test]
    fn gain_ties_prefer_lowest_feature() {
        // both features separate perfectly
        let data = fm(
            &[&[0.0, 0.0], &[0.0, 0.0], &[1.0, 1.0], &[1.0, 1.0]],
            &[N, N, P, P],
        );
        let tree = train_tree(&data, &TreeConfig::default()).unwrap();
        assert!(matches!(tree.root, Node::Split { feature: 0, .. }));
    }

    #[test]
    fn depth_and_leaf_size_limits() {
        let rows: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64]).collect();
        let labels: Vec<Label> = (0..16).map(|i| if i % 2 == 0 { P } else { N }).collect();
        let data = FeatureMatrix::from_rows(&rows, &labels).unwrap();
        let shallow = train_tree(
            &data,
            &TreeConfig {
                min_leaf: 1,
                max_depth: 2,
            },
        )
        .unwrap();
        assert!(shallow.root.depth() <= 2);
        let coarse = train_tree(
            &data,
            &TreeConfig {
                min_leaf: 4,
                max_depth: 25,
            },
        )
        .unwrap();
        fn min_leaf(n: &Node) -> usize {
            match n {
                Node::Leaf { samples, .. } => *samples,
                Node::Split { left, right, .. } => min_leaf(left).min(min_leaf(right)),
            }
        }
        assert!(min_leaf(&coarse.root) >= 4);
    }

    #[test]
    fn json_shape() {
        let data = fm(&[&[0.1], &[0.9]], &[N, P]);
        let tree = train_tree(
            &data,
            &TreeConfig {
                min_leaf: 1,
                max_depth: 3,
            },
        )
        .unwrap();
        let json = serde_json::to_value(&tree).unwrap();
        assert_eq!(json["root"]["kind"], "split");
        assert_eq!(json["root"]["left"]["kind"], "leaf");
        assert_eq!(json["root"]["left"]["label"], "negative");
        let back: DecisionTreeModel = serde_json::from_value(json).unwrap();
        assert_eq!(back, tree);
    }
}
