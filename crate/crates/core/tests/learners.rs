use proptest::prelude::*;
use topicclass::corpus::Label;
use topicclass::learners::{
    predict_svm, train_svm, train_svm_observed, train_tree, ClassWeight, DecisionTreeModel,
    FeatureMatrix, Node, SvmConfig, TreeConfig,
};

fn data(rows: &[Vec<f64>], labels: &[Label]) -> FeatureMatrix {
    FeatureMatrix::from_rows(rows, labels).unwrap()
}

fn label(positive: bool) -> Label {
    if positive {
        Label::Positive
    } else {
        Label::Negative
    }
}

/// Plain recursive walk used as an independent routing oracle.
fn walk(node: &Node, x: &[f64]) -> Label {
    match node {
        Node::Leaf { label, .. } => *label,
        Node::Split {
            feature,
            threshold,
            left,
            right,
            ..
        } => {
            if x[*feature] <= *threshold {
                walk(left, x)
            } else {
                walk(right, x)
            }
        }
    }
}

fn check_structure(node: &Node) {
    if let Node::Split {
        samples,
        left,
        right,
        ..
    } = node
    {
        assert!(left.samples() < *samples && right.samples() < *samples);
        assert_eq!(left.samples() + right.samples(), *samples);
        check_structure(left);
        check_structure(right);
    }
}

#[test]
fn svm_hand_examples() {
    let pair = data(
        &[vec![0.0, 0.0], vec![2.0, 2.0]],
        &[Label::Negative, Label::Positive],
    );
    let m = train_svm(&pair, &SvmConfig::default()).unwrap();
    assert_eq!(m.predict(&[0.0, 0.0]).unwrap(), Label::Negative);
    assert_eq!(m.predict(&[2.0, 2.0]).unwrap(), Label::Positive);

    let xor = data(
        &[
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ],
        &[
            Label::Positive,
            Label::Positive,
            Label::Negative,
            Label::Negative,
        ],
    );
    let m = train_svm(&xor, &SvmConfig::default()).unwrap();
    let correct = xor
        .rows()
        .zip(xor.labels())
        .filter(|(r, l)| m.predict(r).unwrap() == **l)
        .count();
    assert!(correct <= 3);
}

#[test]
fn svm_training_is_seed_deterministic() {
    let rows: Vec<Vec<f64>> = (0..30)
        .map(|i| vec![(i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()])
        .collect();
    let labels: Vec<Label> = rows
        .iter()
        .map(|r| label(r[0] + 0.3 * r[1] > 0.1))
        .collect();
    let d = data(&rows, &labels);
    let a = train_svm(&d, &SvmConfig::default()).unwrap();
    let b = train_svm(&d, &SvmConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn svm_rejects_single_class_and_bad_dimensions() {
    let d = data(&[vec![1.0], vec![2.0]], &[Label::Positive, Label::Positive]);
    assert_eq!(
        train_svm(&d, &SvmConfig::default()).unwrap_err().kind(),
        "missing_class"
    );
    let d = data(&[vec![0.0], vec![1.0]], &[Label::Negative, Label::Positive]);
    let m = train_svm(&d, &SvmConfig::default()).unwrap();
    assert_eq!(
        predict_svm(&m, &[1.0, 2.0]).unwrap_err().kind(),
        "dimension_mismatch"
    );
}

#[test]
fn tree_hand_examples() {
    let d = data(
        &[vec![0.1], vec![0.2], vec![0.8], vec![0.9]],
        &[
            Label::Negative,
            Label::Negative,
            Label::Positive,
            Label::Positive,
        ],
    );
    let t = train_tree(
        &d,
        &TreeConfig {
            min_leaf: 1,
            ..TreeConfig::default()
        },
    )
    .unwrap();
    match &t.root {
        Node::Split {
            feature: 0,
            threshold,
            ..
        } => assert!(*threshold > 0.2 && *threshold < 0.8),
        other => panic!("expected a root split, got {other:?}"),
    }
    assert!(d
        .rows()
        .zip(d.labels())
        .all(|(r, l)| t.predict(r).unwrap() == *l));
    let th = match &t.root {
        Node::Split { threshold, .. } => *threshold,
        _ => unreachable!(),
    };
    assert_eq!(t.predict(&[th]).unwrap(), Label::Negative);

    let pure = data(&[vec![1.0], vec![5.0]], &[Label::Positive, Label::Positive]);
    let t = train_tree(&pure, &TreeConfig::default()).unwrap();
    assert_eq!(t.root.leaf_count(), 1);
    assert_eq!(t.predict(&[-100.0]).unwrap(), Label::Positive);
}

#[test]
fn tree_model_round_trips_through_json() {
    let d = data(
        &[
            vec![0.1, 3.0],
            vec![0.2, 1.0],
            vec![0.8, 2.0],
            vec![0.9, 0.0],
        ],
        &[
            Label::Negative,
            Label::Positive,
            Label::Positive,
            Label::Negative,
        ],
    );
    let t = train_tree(
        &d,
        &TreeConfig {
            min_leaf: 1,
            ..TreeConfig::default()
        },
    )
    .unwrap();
    let back: DecisionTreeModel =
        serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
}

fn arb_dataset(max_features: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Label>)> {
    (1..=max_features, 4usize..40).prop_flat_map(|(m, n)| {
        (
            proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, m), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(rows, bits)| {
                let mut labels: Vec<Label> = bits.into_iter().map(label).collect();
                labels[0] = Label::Positive;
                labels[1] = Label::Negative;
                (rows, labels)
            })
    })
}

fn arb_separable() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Label>)> {
    (
        0.0f64..std::f64::consts::TAU,
        -0.5f64..0.5,
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 4..40),
    )
        .prop_filter_map("needs both classes", |(angle, b, pts)| {
            let (wx, wy) = (angle.cos(), angle.sin());
            let kept: Vec<_> = pts
                .into_iter()
                .filter(|(x, y)| (wx * x + wy * y + b).abs() > 0.2)
                .collect();
            let labels: Vec<Label> = kept
                .iter()
                .map(|(x, y)| label(wx * x + wy * y + b > 0.0))
                .collect();
            (labels.contains(&Label::Positive) && labels.contains(&Label::Negative))
                .then(|| (kept.iter().map(|(x, y)| vec![*x, *y]).collect(), labels))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smo_separates_separable_sets_with_positive_margin((rows, labels) in arb_separable()) {
        let d = data(&rows, &labels);
        let cfg = SvmConfig { c: 1e3, ..SvmConfig::default() };
        let m = train_svm(&d, &cfg).unwrap();
        let margin = rows.iter().zip(&labels).map(|(r, l)| l.sign() * m.decision_value(r).unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert!(margin > 0.0, "min margin {}", margin);
    }

    #[test]
    fn smo_dual_stays_feasible((rows, labels) in arb_dataset(4), c in 0.01f64..10.0, balanced in any::<bool>()) {
        let d = data(&rows, &labels);
        let cfg = SvmConfig {
            c,
            class_weight: if balanced { ClassWeight::Balanced } else { ClassWeight::Uniform },
            ..SvmConfig::default()
        };
        let n = labels.len() as f64;
        let n_pos = labels.iter().filter(|l| l.is_positive()).count() as f64;
        let signs = d.signs();
        train_svm_observed(&d, &cfg, |alpha| {
            let s: f64 = alpha.iter().zip(&signs).map(|(a, y)| a * y).sum();
            assert!(s.abs() < 1e-9 * (1.0 + c * n));
            for (a, l) in alpha.iter().zip(&labels) {
                let bound = if balanced {
                    let class = if l.is_positive() { n_pos } else { n - n_pos };
                    c * n / (2.0 * class)
                } else {
                    c
                };
                assert!(*a >= 0.0 && *a <= bound * (1.0 + 1e-12), "alpha {a} bound {bound}");
            }
        })
        .unwrap();
    }

    #[test]
    fn svm_prediction_matches_dot_product_oracle((rows, labels) in arb_dataset(5), probes in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 5), 100)) {
        let d = data(&rows, &labels);
        let m = train_svm(&d, &SvmConfig::default()).unwrap();
        prop_assert!(m.weights.iter().all(|w| w.is_finite()));
        for p in &probes {
            let x = &p[..m.n_features()];
            let mut v = m.bias;
            for i in 0..x.len() {
                v += m.weights[i] * x[i];
            }
            prop_assert_eq!(m.predict(x).unwrap(), label(v > 0.0));
        }
    }

    #[test]
    fn tree_beats_majority_and_matches_path_walk((rows, labels) in arb_dataset(3), probes in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 3), 100)) {
        let d = data(&rows, &labels);
        let t = train_tree(&d, &TreeConfig::default()).unwrap();
        check_structure(&t.root);
        let acc = rows.iter().zip(&labels).filter(|(r, l)| t.predict(r).unwrap() == **l).count();
        let pos = labels.iter().filter(|l| l.is_positive()).count();
        prop_assert!(acc >= pos.max(labels.len() - pos));
        for p in &probes {
            let x = &p[..t.n_features];
            prop_assert_eq!(t.predict(x).unwrap(), walk(&t.root, x));
        }
        prop_assert_eq!(train_tree(&d, &TreeConfig::default()).unwrap(), t);
    }

    #[test]
    fn permuted_columns_with_permuted_models_agree((rows, labels) in arb_dataset(4), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let m = rows[0].len();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let permuted: Vec<Vec<f64>> = rows.iter().map(|r| perm.iter().map(|&p| r[p]).collect()).collect();
        let d = data(&rows, &labels);
        let svm = train_svm(&d, &SvmConfig::default()).unwrap().permute_features(&perm).unwrap();
        let tree = train_tree(&d, &TreeConfig::default()).unwrap().permute_features(&perm).unwrap();
        let svm0 = train_svm(&d, &SvmConfig::default()).unwrap();
        let tree0 = train_tree(&d, &TreeConfig::default()).unwrap();
        for (orig, p) in rows.iter().zip(&permuted) {
            prop_assert_eq!(svm.predict(p).unwrap(), svm0.predict(orig).unwrap());
            prop_assert_eq!(tree.predict(p).unwrap(), tree0.predict(orig).unwrap());
        }
    }
}
