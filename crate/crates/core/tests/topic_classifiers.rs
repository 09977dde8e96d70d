use proptest::prelude::*;
use topicclass::corpus::Label;
use topicclass::topic_classifiers::{
    class_centroids, cosine_similarity, predict_atc, predict_ctc, predict_stc,
    select_confident_topic, select_discriminative_topic, topic_confidence, train_atc, train_ctc,
    train_stc, train_tvc, AtcModel, ClassifierArtifact, ClassifierConfig, CtcModel, LearnerKind,
    ModelReference, Orientation, SupportMode, ThresholdMode, TrainedClassifier,
};

use Label::{Negative as N, Positive as P};

fn cfg() -> ClassifierConfig {
    ClassifierConfig::default()
}

#[test]
fn cosine_examples() {
    assert!((cosine_similarity(&[0.5, 0.5], &[0.8, 0.2]).unwrap() - 0.857).abs() < 1e-3);
    assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    assert!((cosine_similarity(&[0.2, 0.3, 0.5], &[0.2, 0.3, 0.5]).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(
        cosine_similarity(&[0.0, 0.0], &[0.5, 0.5])
            .unwrap_err()
            .kind(),
        "zero_norm"
    );
}

#[test]
fn centroid_examples() {
    let (p, n) = class_centroids(
        &[vec![0.2, 0.8], vec![0.4, 0.6], vec![0.9, 0.1]],
        &[P, P, N],
    )
    .unwrap();
    assert!((p.mean_theta[0] - 0.3).abs() < 1e-12 && (p.mean_theta[1] - 0.7).abs() < 1e-12);
    assert_eq!(n.mean_theta, vec![0.9, 0.1]);
    assert_eq!(
        class_centroids(&[vec![1.0]], &[P]).unwrap_err().kind(),
        "missing_class"
    );
}

#[test]
fn confidence_examples() {
    let v = [vec![0.8, 0.2], vec![0.2, 0.8]];
    assert!(
        (topic_confidence(&v, &[P, N], 0, P, SupportMode::Fractional).unwrap() - 0.8).abs() < 1e-12
    );
    assert_eq!(
        topic_confidence(&v, &[P, P], 1, P, SupportMode::Fractional).unwrap(),
        1.0
    );
    let zero = [vec![1.0, 0.0], vec![1.0, 0.0]];
    assert_eq!(
        topic_confidence(&zero, &[P, N], 1, P, SupportMode::Fractional)
            .unwrap_err()
            .kind(),
        "zero_topic_mass"
    );
}

#[test]
fn ctc_examples() {
    let m = train_ctc(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[P, N], &cfg()).unwrap();
    assert_eq!(m.topic, 1);
    assert_eq!(predict_ctc(&m, &[0.0, 1.0]).unwrap(), P);
    assert_eq!(predict_ctc(&m, &[1.0, 0.0]).unwrap(), N);

    let forced: Vec<Vec<f64>> = (0..8)
        .map(|i| {
            let mut v = vec![0.25; 4];
            if i < 3 {
                v = vec![0.1, 0.1, 0.1, 0.7];
            } else {
                v[3] = 0.0;
                v[0] = 0.5;
            }
            v
        })
        .collect();
    let labels: Vec<Label> = (0..8).map(|i| if i < 3 { P } else { N }).collect();
    assert_eq!(train_ctc(&forced, &labels, &cfg()).unwrap().topic, 3);

    let tied = [vec![0.5, 0.5], vec![0.5, 0.5]];
    assert_eq!(
        select_confident_topic(&tied, &[P, N], SupportMode::Fractional).unwrap(),
        0
    );

    let boundary = CtcModel {
        topic: 0,
        threshold: 0.4,
    };
    assert_eq!(boundary.predict(&[0.4, 0.6]).unwrap(), N);
    let zero = CtcModel {
        topic: 0,
        threshold: 0.0,
    };
    assert_eq!(zero.predict(&[0.01, 0.99]).unwrap(), P);
}

#[test]
fn stc_examples() {
    let m = train_stc(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[P, N]).unwrap();
    assert_eq!(predict_stc(&m, &[0.9, 0.1]).unwrap(), P);
    assert_eq!(predict_stc(&m, &[0.0, 1.0]).unwrap(), N);
    assert_eq!(predict_stc(&m, &[0.5, 0.5]).unwrap(), N);
    assert_eq!(m.positive.label, P);
    assert_eq!(m.negative.label, N);
}

#[test]
fn atc_examples() {
    assert_eq!(
        select_discriminative_topic(&[0.9, 0.1], &[0.1, 0.9]),
        (0, Orientation::PositiveHigh)
    );
    assert_eq!(select_discriminative_topic(&[0.5, 0.5], &[0.5, 0.5]).0, 0);
    let m = AtcModel {
        topic: 1,
        threshold: 0.3,
        orientation: Orientation::PositiveHigh,
    };
    assert_eq!(predict_atc(&m, &[0.7, 0.3]).unwrap(), N);
    let low = AtcModel {
        orientation: Orientation::PositiveLow,
        ..m
    };
    assert_eq!(predict_atc(&low, &[0.8, 0.2]).unwrap(), P);

    // Identical centroids still train, on topic 0.
    let m = train_atc(&[vec![0.5, 0.5], vec![0.5, 0.5]], &[P, N], 0.5, &cfg()).unwrap();
    assert_eq!(m.topic, 0);
    assert!(train_atc(&[vec![0.5, 0.5], vec![0.5, 0.5]], &[P, N], 1.0, &cfg()).is_err());
}

#[test]
fn prior_quantile_threshold_reproduces_training_ratio() {
    let values: Vec<Vec<f64>> = (0..40)
        .map(|i| vec![i as f64 / 40.0, 1.0 - i as f64 / 40.0])
        .collect();
    let labels: Vec<Label> = (0..40).map(|i| if i >= 35 { P } else { N }).collect();
    let m = train_atc(&values, &labels, 5.0 / 40.0, &cfg()).unwrap();
    let positives = values.iter().filter(|v| m.predict(v).unwrap() == P).count();
    assert!(positives.abs_diff(5) <= 1);
    assert!(values
        .iter()
        .zip(&labels)
        .all(|(v, l)| m.predict(v).unwrap() == *l));
}

#[test]
fn cv_threshold_comes_from_the_candidate_grid() {
    let values: Vec<Vec<f64>> = (0..50)
        .map(|i| vec![i as f64 / 50.0, 1.0 - i as f64 / 50.0])
        .collect();
    let labels: Vec<Label> = (0..50).map(|i| if i >= 40 { P } else { N }).collect();
    let config = ClassifierConfig {
        threshold_mode: ThresholdMode::Cv,
        ..cfg()
    };
    for m in [
        train_atc(&values, &labels, 0.2, &config).unwrap().threshold,
        train_ctc(&values, &labels, &config).unwrap().threshold,
    ] {
        assert!(((m * 20.0).round() - m * 20.0).abs() < 1e-9 && (0.0..=1.0).contains(&m));
    }
}

#[test]
fn tvc_examples() {
    let vectors: Vec<Vec<f64>> = (0..20)
        .map(|i| {
            if i % 4 == 0 {
                vec![0.8, 0.1, 0.1]
            } else {
                vec![0.1, 0.45, 0.45]
            }
        })
        .collect();
    let labels: Vec<Label> = (0..20).map(|i| if i % 4 == 0 { P } else { N }).collect();
    let m = train_tvc(&vectors, &labels, LearnerKind::Svm, &cfg()).unwrap();
    assert_eq!(m.0.n_features(), 3);
    assert!(vectors
        .iter()
        .zip(&labels)
        .all(|(v, l)| m.predict(v).unwrap() == *l));
    let pure = train_tvc(&vectors[..2], &[N, N], LearnerKind::Tree, &cfg());
    assert_eq!(pure.unwrap_err().kind(), "missing_class");
}

#[test]
fn artifacts_round_trip_and_guard_their_reference() {
    let model = TrainedClassifier::Ctc(CtcModel {
        topic: 2,
        threshold: 0.25,
    });
    let art = ClassifierArtifact::new(model.clone(), ModelReference::Lda("abc".into()));
    let back = ClassifierArtifact::from_json(&art.to_json().unwrap()).unwrap();
    assert_eq!(back, art);
    assert!(back
        .check_reference(&ModelReference::Lda("abc".into()))
        .is_ok());
    assert_eq!(
        back.check_reference(&ModelReference::Lda("xyz".into()))
            .unwrap_err()
            .kind(),
        "hash_mismatch"
    );
    let bumped = art
        .to_json()
        .unwrap()
        .replace("\"version\": 1", "\"version\": 99");
    assert_eq!(
        ClassifierArtifact::from_json(&bumped).unwrap_err().kind(),
        "unsupported_version"
    );
}

fn arb_simplex(k: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, k).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

fn arb_training() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Label>)> {
    (2usize..6, 4usize..30).prop_flat_map(|(k, n)| {
        (
            proptest::collection::vec(arb_simplex(k), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(v, bits)| {
                let mut labels: Vec<Label> =
                    bits.into_iter().map(|b| if b { P } else { N }).collect();
                labels[0] = P;
                labels[1] = N;
                (v, labels)
            })
    })
}

proptest! {
    #[test]
    fn centroids_stay_on_the_simplex((v, labels) in arb_training()) {
        let (p, n) = class_centroids(&v, &labels).unwrap();
        for c in [p, n] {
            prop_assert!((c.mean_theta.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            prop_assert!(c.mean_theta.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn confidence_partitions_topic_mass((v, labels) in arb_training(), binarized in any::<bool>()) {
        let mode = if binarized { SupportMode::Binarized } else { SupportMode::Fractional };
        for t in 0..v[0].len() {
            match (topic_confidence(&v, &labels, t, P, mode), topic_confidence(&v, &labels, t, N, mode)) {
                (Ok(a), Ok(b)) => {
                    prop_assert!((a + b - 1.0).abs() < 1e-12);
                    prop_assert!((0.0..=1.0).contains(&a));
                }
                (Err(_), Err(_)) => prop_assert!(binarized),
                _ => prop_assert!(false, "one class errored alone"),
            }
        }
    }

    #[test]
    fn ctc_and_atc_match_rule_transcription((v, labels) in arb_training(), probes in proptest::collection::vec(arb_simplex(5), 100)) {
        let k = v[0].len();
        let ctc = train_ctc(&v, &labels, &cfg()).unwrap();
        let atc = train_atc(&v, &labels, 0.3, &cfg()).unwrap();
        // Independent argmax of the fractional confidence.
        let mut best = (0, -1.0);
        for t in 0..k {
            let num: f64 = v.iter().zip(&labels).filter(|(_, l)| **l == P).map(|(x, _)| x[t]).sum();
            let den: f64 = v.iter().map(|x| x[t]).sum();
            if num / den > best.1 {
                best = (t, num / den);
            }
        }
        prop_assert_eq!(ctc.topic, best.0);
        for p in &probes {
            let theta = &p[..k];
            prop_assert_eq!(ctc.predict(theta).unwrap(), if theta[ctc.topic] > ctc.threshold { P } else { N });
            let x = theta[atc.topic];
            let expected = match atc.orientation {
                Orientation::PositiveHigh => x > atc.threshold,
                Orientation::PositiveLow => x < atc.threshold,
            };
            prop_assert_eq!(atc.predict(theta).unwrap(), if expected { P } else { N });
        }
    }

    #[test]
    fn positive_rate_is_monotone_in_threshold(probes in proptest::collection::vec(arb_simplex(3), 50), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let rate = |th: f64| {
            let atc = AtcModel { topic: 1, threshold: th, orientation: Orientation::PositiveHigh };
            let ctc = CtcModel { topic: 1, threshold: th };
            (
                probes.iter().filter(|p| atc.predict(p).unwrap() == P).count(),
                probes.iter().filter(|p| ctc.predict(p).unwrap() == P).count(),
            )
        };
        let (r_lo, r_hi) = (rate(lo), rate(hi));
        prop_assert!(r_hi.0 <= r_lo.0 && r_hi.1 <= r_lo.1);
    }

    #[test]
    fn stc_label_swap_swaps_predictions((v, labels) in arb_training(), probes in proptest::collection::vec(arb_simplex(5), 50)) {
        let k = v[0].len();
        let swapped: Vec<Label> = labels.iter().map(|l| l.flip()).collect();
        let a = train_stc(&v, &labels).unwrap();
        let b = train_stc(&v, &swapped).unwrap();
        for p in &probes {
            let theta = &p[..k];
            let (sp, sn) = (cosine_similarity(theta, &a.positive.mean_theta).unwrap(), cosine_similarity(theta, &a.negative.mean_theta).unwrap());
            prop_assume!(sp != sn);
            prop_assert_eq!(a.predict(theta).unwrap().flip(), b.predict(theta).unwrap());
        }
    }

    #[test]
    fn atc_topic_ignores_common_shift(p in arb_simplex(5), n in arb_simplex(5), shift in proptest::collection::vec(-1.0f64..1.0, 1)) {
        let shifted = |v: &[f64]| v.iter().map(|x| x + shift[0]).collect::<Vec<_>>();
        prop_assert_eq!(select_discriminative_topic(&p, &n).0, select_discriminative_topic(&shifted(&p), &shifted(&n)).0);
    }

    #[test]
    fn ctc_topic_ignores_per_topic_scaling((v, labels) in arb_training(), scales in proptest::collection::vec(0.1f64..10.0, 5)) {
        let k = v[0].len();
        let scaled: Vec<Vec<f64>> = v.iter().map(|x| x.iter().zip(&scales[..k]).map(|(a, s)| a * s).collect()).collect();
        prop_assert_eq!(
            select_confident_topic(&v, &labels, SupportMode::Fractional).unwrap(),
            select_confident_topic(&scaled, &labels, SupportMode::Fractional).unwrap()
        );
    }

    #[test]
    fn training_is_deterministic((v, labels) in arb_training()) {
        let c = ClassifierConfig { threshold_mode: ThresholdMode::Cv, ..cfg() };
        prop_assert_eq!(train_atc(&v, &labels, 0.4, &c).unwrap(), train_atc(&v, &labels, 0.4, &c).unwrap());
        prop_assert_eq!(train_ctc(&v, &labels, &c).unwrap(), train_ctc(&v, &labels, &c).unwrap());
        prop_assert_eq!(train_stc(&v, &labels).unwrap(), train_stc(&v, &labels).unwrap());
        for kind in [LearnerKind::Svm, LearnerKind::Tree] {
            prop_assert_eq!(train_tvc(&v, &labels, kind, &c).unwrap(), train_tvc(&v, &labels, kind, &c).unwrap());
        }
    }
}
