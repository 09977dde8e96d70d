use std::collections::HashSet;

use topicclass::corpus::{
    build_vocabulary, vectorize, DocTermMatrix, Vocabulary, VocabularyConfig, Weighting,
};
use topicclass::synth::{cluster_of_term, two_cluster_corpus};
use topicclass::topic_model::{
    infer_topics, infer_topics_seeded, top_words, train_lda, train_lda_observed, LdaConfig,
    LdaModel, TopicVector, SIMPLEX_TOLERANCE,
};
use topicclass::Error;

const V: usize = 200;

fn two_cluster(seed: u64) -> (Vocabulary, DocTermMatrix, Vec<usize>) {
    let (corpus, clusters) = two_cluster_corpus(400, V, 50, seed).unwrap();
    let vocab = build_vocabulary(&corpus, &VocabularyConfig::default()).unwrap();
    let matrix = vectorize(&corpus, &vocab, Weighting::Count).unwrap();
    (vocab, matrix, clusters)
}

fn quick_config(k: usize, seed: u64) -> LdaConfig {
    LdaConfig {
        train_iterations: 200,
        burn_in: 100,
        ..LdaConfig::with_topics(k)
    }
    .seed(seed)
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Fraction of documents whose dominant topic matches their cluster under
/// the better of the two topic labelings.
fn alignment(thetas: &[TopicVector], clusters: &[usize]) -> f64 {
    let agree = thetas
        .iter()
        .zip(clusters)
        .filter(|(t, &c)| t.dominant_topic() == c)
        .count();
    let n = thetas.len();
    agree.max(n - agree) as f64 / n as f64
}

fn on_simplex(p: &[f64]) -> bool {
    p.iter().all(|&x| x >= 0.0) && (p.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE
}

#[test]
fn two_cluster_fit_is_normalized_and_aligned() {
    let (_, matrix, clusters) = two_cluster(11);
    let total: u64 = matrix.rows.iter().flatten().map(|&(_, c)| c as u64).sum();
    let mut checked = 0;
    let (model, thetas) = train_lda_observed(&matrix, &quick_config(2, 5), |s| {
        assert_eq!(s.doc_topic_total(), total);
        assert_eq!(s.topic_word_total(), total);
        assert_eq!(s.topic_totals().iter().sum::<u64>(), total);
        checked += 1;
    })
    .unwrap();
    assert_eq!(checked, 200);
    assert_eq!(model.total_tokens(), total);
    for t in 0..2 {
        assert!(on_simplex(model.phi(t)));
    }
    assert!(thetas.iter().all(|t| on_simplex(t.as_slice())));
    assert!(alignment(&thetas, &clusters) >= 0.95);
}

#[test]
fn training_is_seed_deterministic() {
    let (_, matrix, _) = two_cluster(3);
    let cfg = LdaConfig {
        train_iterations: 20,
        burn_in: 5,
        ..LdaConfig::with_topics(3)
    };
    let (a, ta) = train_lda(&matrix, &cfg).unwrap();
    let (b, tb) = train_lda(&matrix, &cfg).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(ta, tb);
    let (c, _) = train_lda(&matrix, &cfg.seed(99)).unwrap();
    assert_ne!(a.to_json().unwrap(), c.to_json().unwrap());
}

#[test]
fn rejects_bad_inputs() {
    let (_, matrix, _) = two_cluster(3);
    let mut tf = matrix.clone();
    tf.weighting = Weighting::Tf;
    assert!(matches!(
        train_lda(&tf, &quick_config(2, 1)),
        Err(Error::WeightingMismatch(_))
    ));

    let mut with_empty = matrix.clone();
    with_empty.rows[7].clear();
    assert!(matches!(
        train_lda(&with_empty, &quick_config(2, 1)),
        Err(Error::EmptyDocument(id)) if id == matrix.doc_ids[7]
    ));

    assert!(matches!(
        train_lda(&matrix, &quick_config(matrix.vocab_size + 1, 1)),
        Err(Error::TopicsExceedAttributes { .. })
    ));
}

fn fitted() -> (
    Vocabulary,
    DocTermMatrix,
    Vec<usize>,
    LdaModel,
    Vec<TopicVector>,
) {
    let (vocab, matrix, clusters) = two_cluster(21);
    let (model, thetas) = train_lda(&matrix, &quick_config(2, 8)).unwrap();
    (vocab, matrix, clusters, model, thetas)
}

#[test]
fn fold_in_is_consistent_and_leaves_model_untouched() {
    let (vocab, matrix, clusters, model, thetas) = fitted();
    let before = model.content_hash().unwrap();
    let mut cfg = *model.config();
    for (i, row) in matrix.rows.iter().enumerate().take(60) {
        cfg.seed = i as u64;
        let inferred = infer_topics(&model, row, &cfg).unwrap();
        assert!(on_simplex(inferred.as_slice()));
        assert!(
            cosine(inferred.as_slice(), thetas[i].as_slice()) >= 0.9,
            "doc {i}"
        );
    }
    assert_eq!(model.content_hash().unwrap(), before);

    // a document made only of cluster-0 words loads on cluster 0's topic
    let cluster0_topic = thetas[clusters.iter().position(|&c| c == 0).unwrap()].dominant_topic();
    let doc: Vec<(usize, f64)> = vocab
        .terms()
        .iter()
        .enumerate()
        .filter(|(_, t)| cluster_of_term(t, V) == Some(0))
        .take(20)
        .map(|(i, _)| (i, 2.0))
        .collect();
    let theta = infer_topics_seeded(&model, &doc, 4).unwrap();
    assert!(theta.get(cluster0_topic) > 0.5);
}

#[test]
fn fold_in_errors() {
    let (_, _, _, model, _) = fitted();
    assert!(matches!(
        infer_topics_seeded(&model, &vec![], 1),
        Err(Error::OutOfVocabulary)
    ));
    assert!(matches!(
        infer_topics_seeded(&model, &vec![(model.vocab_size(), 1.0)], 1),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn fold_in_does_not_depend_on_document_order() {
    let (_, matrix, clusters, model, _) = fitted();
    let seeds: Vec<u64> = (0..40).map(|i| 1000 + i).collect();
    let forward: Vec<TopicVector> = (0..40)
        .map(|i| infer_topics_seeded(&model, &matrix.rows[i], seeds[i]).unwrap())
        .collect();
    let backward: Vec<TopicVector> = (0..40)
        .rev()
        .map(|i| infer_topics_seeded(&model, &matrix.rows[i], seeds[i]).unwrap())
        .collect();
    for (i, b) in (0..40).rev().zip(&backward) {
        assert_eq!(&forward[i], b);
    }
    assert!(alignment(&forward, &clusters[..40]) >= 0.95);
}

#[test]
fn top_words_come_from_one_half() {
    let (vocab, _, _, model, _) = fitted();
    for t in 0..2 {
        let halves: HashSet<usize> = top_words(&model, &vocab, t, 10)
            .unwrap()
            .iter()
            .map(|(w, _)| cluster_of_term(w, V).unwrap())
            .collect();
        assert_eq!(halves.len(), 1, "topic {t}");
    }
    assert_eq!(
        top_words(&model, &vocab, 0, 10_000).unwrap().len(),
        vocab.len()
    );
}

#[test]
fn model_file_round_trip() {
    let (_, matrix, _, model, _) = fitted();
    let back = LdaModel::from_json(&model.to_json().unwrap()).unwrap();
    assert_eq!(back, model);
    assert_eq!(back.vocab_hash(), matrix.vocab_hash);
}
