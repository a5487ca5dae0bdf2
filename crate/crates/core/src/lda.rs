//! Collapsed Gibbs sampling for the entity topic model.
//!
//! Documents are entities, words are object tokens and the number of topics
//! is the number of distinct predicates. The sampler resamples every token
//! instance in a fixed order from
//!
//! ```text
//! p(z = k | rest) ∝ (n_dk + α) · (n_kw + β) / (n_k + Vβ)
//! ```
//!
//! with instance `i` removed from the counts. Given TF-IDF weights, each
//! instance adds its weight to the counts instead of one.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{Corpus, TfIdf};
use crate::exec::Execution;

#[derive(Debug, Error, PartialEq)]
pub enum LdaError {
    #[error("degenerate corpus: {topics} topics, {words} words")]
    DegenerateCorpus { topics: usize, words: usize },
    #[error("invalid hyperparameters: {0}")]
    InvalidParams(String),
    #[error("model was trained on corpus {expected}, got {found}")]
    CorpusMismatch { expected: String, found: String },
    #[error("weights do not match the corpus layout")]
    WeightsMismatch,
    #[error("topic {topic} out of range ({topics} topics)")]
    TopicOutOfRange { topic: usize, topics: usize },
    #[error("document {doc} out of range ({docs} documents)")]
    DocumentOutOfRange { doc: usize, docs: usize },
    #[error("model file line {line}: {reason}")]
    BadModelFile { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
}

pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_BURN_IN: usize = 200;
pub const DEFAULT_SEED: u64 = 42;

impl HyperParams {
    pub fn validate(&self) -> Result<(), LdaError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(LdaError::InvalidParams(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(LdaError::InvalidParams(format!(
                "beta must be > 0, got {}",
                self.beta
            )));
        }
        if self.iterations == 0 {
            return Err(LdaError::InvalidParams(
                "iterations must be positive".into(),
            ));
        }
        if self.burn_in >= self.iterations {
            return Err(LdaError::InvalidParams(format!(
                "burn_in ({}) must be below iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaMode {
    /// β = 0.01, suited to richer corpora.
    #[default]
    Fixed001,
    /// β = 50 / R, suited to sparse corpora.
    FiftyOverR,
}

impl fmt::Display for BetaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetaMode::Fixed001 => "fixed_001",
            BetaMode::FiftyOverR => "fifty_over_R",
        })
    }
}

impl FromStr for BetaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed_001" => Ok(BetaMode::Fixed001),
            "fifty_over_R" | "fifty_over_r" => Ok(BetaMode::FiftyOverR),
            other => Err(format!(
                "unknown beta mode {other:?} (expected fixed_001|fifty_over_R)"
            )),
        }
    }
}

/// α = (E/20)/R; β from `beta_mode`; default iteration count, burn-in and seed.
pub fn default_hyperparams(corpus: &Corpus, beta_mode: BetaMode) -> HyperParams {
    hyperparams_for(corpus.entity_count(), corpus.predicate_count(), beta_mode)
}

pub fn hyperparams_for(entities: usize, predicates: usize, beta_mode: BetaMode) -> HyperParams {
    let r = predicates as f64;
    HyperParams {
        alpha: (entities as f64 / 20.0) / r,
        beta: match beta_mode {
            BetaMode::Fixed001 => 0.01,
            BetaMode::FiftyOverR => 50.0 / r,
        },
        iterations: DEFAULT_ITERATIONS,
        burn_in: DEFAULT_BURN_IN,
        seed: DEFAULT_SEED,
    }
}

/// Trained model: smoothed θ (E×K) and φ (K×V) from the final sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub(crate) params: HyperParams,
    pub(crate) weighted: bool,
    pub(crate) num_topics: usize,
    pub(crate) theta: Vec<f64>,
    pub(crate) phi: Vec<f64>,
    pub(crate) assignments: Vec<Vec<u32>>,
    pub(crate) corpus_hash: String,
    pub(crate) entities: Vec<String>,
    pub(crate) predicates: Vec<String>,
    pub(crate) words: Vec<String>,
    pub(crate) meta: Vec<(String, String)>,
}

impl LdaModel {
    pub fn params(&self) -> &HyperParams {
        &self.params
    }

    pub fn weighted(&self) -> bool {
        self.weighted
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn vocab_size(&self) -> usize {
        self.words.len()
    }

    pub fn num_documents(&self) -> usize {
        self.entities.len()
    }

    pub fn theta_row(&self, d: usize) -> &[f64] {
        &self.theta[d * self.num_topics..(d + 1) * self.num_topics]
    }

    pub fn phi_row(&self, k: usize) -> &[f64] {
        let v = self.words.len();
        &self.phi[k * v..(k + 1) * v]
    }

    /// Topic index of every token instance, per document.
    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.assignments
    }

    pub fn corpus_hash(&self) -> &str {
        &self.corpus_hash
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn predicates(&self) -> &[String] {
        &self.predicates
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Free-form key/value pairs carried through the model file.
    pub fn meta(&self) -> &[(String, String)] {
        &self.meta
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let key = key.into();
        let value = value.into();
        match self.meta.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.meta.push((key, value)),
        }
    }

    pub fn check_corpus(&self, corpus: &Corpus) -> Result<(), LdaError> {
        if self.corpus_hash != corpus.fingerprint() {
            return Err(LdaError::CorpusMismatch {
                expected: self.corpus_hash.clone(),
                found: corpus.fingerprint().to_string(),
            });
        }
        Ok(())
    }
}

/// Sampler state. Counts are reals so the weighted variant shares the code;
/// with unit weights they stay exact integers.
pub struct GibbsSampler<'c> {
    corpus: &'c Corpus,
    params: HyperParams,
    weighted: bool,
    k: usize,
    v: usize,
    words: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
    z: Vec<Vec<u32>>,
    n_dk: Vec<f64>,
    n_kw: Vec<f64>,
    n_k: Vec<f64>,
    n_d: Vec<f64>,
    rng: ChaCha8Rng,
    cumulative: Vec<f64>,
    sweeps: usize,
}

impl<'c> GibbsSampler<'c> {
    /// Expands the corpus into token instances and draws a uniform initial
    /// assignment.
    pub fn new(
        corpus: &'c Corpus,
        params: HyperParams,
        weights: Option<&TfIdf>,
    ) -> Result<Self, LdaError> {
        params.validate()?;
        let k = corpus.num_topics();
        let v = corpus.vocab_size();
        if k == 0 || v == 0 {
            return Err(LdaError::DegenerateCorpus {
                topics: k,
                words: v,
            });
        }
        let e = corpus.entity_count();
        let mut words = Vec::with_capacity(e);
        let mut inst_weights = Vec::with_capacity(e);
        for d in 0..e {
            let entries = corpus.doc_words(d);
            if let Some(tfidf) = weights {
                if tfidf.doc_len(d) != entries.len() {
                    return Err(LdaError::WeightsMismatch);
                }
            }
            let mut ws = Vec::new();
            let mut wt = Vec::new();
            for (i, &(w, count)) in entries.iter().enumerate() {
                let weight = weights.map_or(1.0, |t| t.entry(d, i));
                for _ in 0..count {
                    ws.push(w);
                    wt.push(weight);
                }
            }
            words.push(ws);
            inst_weights.push(wt);
        }
        if weights.is_some_and(|t| t.doc_count() != e) {
            return Err(LdaError::WeightsMismatch);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let z: Vec<Vec<u32>> = words
            .iter()
            .map(|ws| ws.iter().map(|_| rng.random_range(0..k as u32)).collect())
            .collect();
        let mut sampler = GibbsSampler {
            corpus,
            params,
            weighted: weights.is_some(),
            k,
            v,
            words,
            weights: inst_weights,
            z,
            n_dk: vec![0.0; e * k],
            n_kw: vec![0.0; k * v],
            n_k: vec![0.0; k],
            n_d: vec![0.0; e],
            rng,
            cumulative: vec![0.0; k],
            sweeps: 0,
        };
        sampler.recount();
        Ok(sampler)
    }

    fn recount(&mut self) {
        self.n_dk.iter_mut().for_each(|x| *x = 0.0);
        self.n_kw.iter_mut().for_each(|x| *x = 0.0);
        self.n_k.iter_mut().for_each(|x| *x = 0.0);
        self.n_d.iter_mut().for_each(|x| *x = 0.0);
        for (d, zs) in self.z.iter().enumerate() {
            for (i, &topic) in zs.iter().enumerate() {
                let t = topic as usize;
                let w = self.words[d][i];
                let wt = self.weights[d][i];
                self.n_dk[d * self.k + t] += wt;
                self.n_kw[t * self.v + w] += wt;
                self.n_k[t] += wt;
                self.n_d[d] += wt;
            }
        }
    }

    /// One pass over every token instance, documents and instances in order.
    pub fn sweep(&mut self) {
        let (k, v) = (self.k, self.v);
        let alpha = self.params.alpha;
        let beta = self.params.beta;
        let v_beta = v as f64 * beta;
        for d in 0..self.z.len() {
            for i in 0..self.z[d].len() {
                let w = self.words[d][i];
                let wt = self.weights[d][i];
                let old = self.z[d][i] as usize;
                self.n_dk[d * k + old] -= wt;
                self.n_kw[old * v + w] -= wt;
                self.n_k[old] -= wt;

                let mut total = 0.0;
                for t in 0..k {
                    let ndk = self.n_dk[d * k + t].max(0.0);
                    let nkw = self.n_kw[t * v + w].max(0.0);
                    let nk = self.n_k[t].max(0.0);
                    total += (ndk + alpha) * (nkw + beta) / (nk + v_beta);
                    self.cumulative[t] = total;
                }
                let u = self.rng.random::<f64>() * total;
                let new = self.cumulative.iter().position(|&c| u < c).unwrap_or(k - 1);

                self.z[d][i] = new as u32;
                self.n_dk[d * k + new] += wt;
                self.n_kw[new * v + w] += wt;
                self.n_k[new] += wt;
            }
        }
        if self.weighted {
            // Real-valued increments drift; rebuild from the assignments.
            self.recount();
        }
        self.sweeps += 1;
    }

    pub fn sweeps_done(&self) -> usize {
        self.sweeps
    }

    pub fn params(&self) -> &HyperParams {
        &self.params
    }

    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.z
    }

    /// Document-topic counts n_dk, row-major E×K.
    pub fn doc_topic_counts(&self) -> &[f64] {
        &self.n_dk
    }

    /// Topic-word counts n_kw, row-major K×V.
    pub fn topic_word_counts(&self) -> &[f64] {
        &self.n_kw
    }

    pub fn topic_totals(&self) -> &[f64] {
        &self.n_k
    }

    pub fn doc_totals(&self) -> &[f64] {
        &self.n_d
    }

    fn theta(&self) -> Vec<f64> {
        let k = self.k;
        let alpha = self.params.alpha;
        let mut theta = vec![0.0; self.n_d.len() * k];
        for (d, &nd) in self.n_d.iter().enumerate() {
            let denom = nd + k as f64 * alpha;
            for t in 0..k {
                theta[d * k + t] = (self.n_dk[d * k + t].max(0.0) + alpha) / denom;
            }
        }
        theta
    }

    fn phi(&self) -> Vec<f64> {
        let v = self.v;
        let beta = self.params.beta;
        let mut phi = vec![0.0; self.k * v];
        for t in 0..self.k {
            let denom = self.n_k[t] + v as f64 * beta;
            for w in 0..v {
                phi[t * v + w] = (self.n_kw[t * v + w].max(0.0) + beta) / denom;
            }
        }
        phi
    }

    /// Log-likelihood of the corpus under the current point estimates.
    pub fn log_likelihood(&self) -> f64 {
        corpus_log_likelihood(self.corpus, &self.theta(), &self.phi(), self.k, self.v)
    }

    pub fn into_model(self) -> LdaModel {
        let theta = self.theta();
        let phi = self.phi();
        LdaModel {
            params: self.params,
            weighted: self.weighted,
            num_topics: self.k,
            theta,
            phi,
            assignments: self.z,
            corpus_hash: self.corpus.fingerprint().to_string(),
            entities: self
                .corpus
                .documents()
                .iter()
                .map(|d| d.entity_iri.clone())
                .collect(),
            predicates: self.corpus.predicate_vocab().iter().cloned().collect(),
            words: self.corpus.object_vocab().iter().cloned().collect(),
            meta: Vec::new(),
        }
    }
}

fn corpus_log_likelihood(corpus: &Corpus, theta: &[f64], phi: &[f64], k: usize, v: usize) -> f64 {
    let mut ll = 0.0;
    for d in 0..corpus.entity_count() {
        for &(w, count) in corpus.doc_words(d) {
            let p: f64 = (0..k).map(|t| theta[d * k + t] * phi[t * v + w]).sum();
            ll += count as f64 * p.ln();
        }
    }
    ll
}

/// Runs `params.iterations` sweeps and returns the final-sample estimates.
/// Equal inputs give bit-identical models.
pub fn gibbs_train(
    corpus: &Corpus,
    params: HyperParams,
    weights: Option<&TfIdf>,
) -> Result<LdaModel, LdaError> {
    let mut sampler = GibbsSampler::new(corpus, params, weights)?;
    for _ in 0..params.iterations {
        sampler.sweep();
    }
    Ok(sampler.into_model())
}

/// Trains one independent chain per parameter set on a shared corpus.
pub fn train_many(
    corpus: &Corpus,
    configs: &[HyperParams],
    weights: Option<&TfIdf>,
    exec: Execution,
) -> Vec<Result<LdaModel, LdaError>> {
    exec.map(configs, |p| gibbs_train(corpus, *p, weights))
}

/// Σ over token instances of ln Σ_k θ_dk φ_kw.
pub fn log_likelihood(model: &LdaModel, corpus: &Corpus) -> Result<f64, LdaError> {
    model.check_corpus(corpus)?;
    Ok(corpus_log_likelihood(
        corpus,
        &model.theta,
        &model.phi,
        model.num_topics,
        model.words.len(),
    ))
}

/// argmax_k θ_dk, lowest index on ties.
pub fn select_topic(model: &LdaModel, doc_index: usize) -> Result<usize, LdaError> {
    if doc_index >= model.num_documents() {
        return Err(LdaError::DocumentOutOfRange {
            doc: doc_index,
            docs: model.num_documents(),
        });
    }
    Ok(argmax(model.theta_row(doc_index)))
}

fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in row.iter().enumerate().skip(1) {
        if x > row[best] {
            best = i;
        }
    }
    best
}

/// Word indices of topic `k` by descending φ_kw, ascending index on ties.
pub fn topic_word_order(model: &LdaModel, k: usize) -> Result<Vec<usize>, LdaError> {
    if k >= model.num_topics {
        return Err(LdaError::TopicOutOfRange {
            topic: k,
            topics: model.num_topics,
        });
    }
    let row = model.phi_row(k);
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    Ok(order)
}

/// The whole object vocabulary ranked for topic `k`.
pub fn rank_topic_words(model: &LdaModel, k: usize) -> Result<Vec<&str>, LdaError> {
    Ok(topic_word_order(model, k)?
        .into_iter()
        .map(|w| model.words[w].as_str())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_documents, freeze, tfidf_weight};
    use crate::rdf::{RdfTerm, Triple};

    fn corpus_from(rows: &[(&str, &str, &str)]) -> Corpus {
        let triples: Vec<Triple> = rows
            .iter()
            .enumerate()
            .map(|(i, (s, p, o))| Triple {
                subject: RdfTerm::iri(format!("http://x/{s}")),
                predicate: RdfTerm::iri(format!("http://x/{p}")),
                object: RdfTerm::iri(format!("http://x/{o}")),
                source_line: i + 1,
                doc_order: 0,
            })
            .collect();
        freeze(build_documents(triples).unwrap()).unwrap()
    }

    fn small_params(seed: u64) -> HyperParams {
        HyperParams {
            alpha: 0.5,
            beta: 0.1,
            iterations: 50,
            burn_in: 10,
            seed,
        }
    }

    fn manual_model(theta: Vec<f64>, phi: Vec<f64>, k: usize, words: usize) -> LdaModel {
        let docs = theta.len() / k;
        LdaModel {
            params: small_params(0),
            weighted: false,
            num_topics: k,
            theta,
            phi,
            assignments: vec![Vec::new(); docs],
            corpus_hash: String::new(),
            entities: (0..docs).map(|d| format!("e{d}")).collect(),
            predicates: (0..k).map(|t| format!("p{t}")).collect(),
            words: ["a", "b", "c", "d", "e"][..words]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            meta: Vec::new(),
        }
    }

    #[test]
    fn default_hyperparams_formula() {
        let p = hyperparams_for(100, 25, BetaMode::Fixed001);
        assert!((p.alpha - 0.2).abs() < 1e-15);
        assert_eq!(p.beta, 0.01);
        assert_eq!((p.iterations, p.burn_in, p.seed), (1000, 200, 42));
        assert_eq!(hyperparams_for(20, 1, BetaMode::Fixed001).alpha, 1.0);
        assert_eq!(hyperparams_for(100, 25, BetaMode::FiftyOverR).beta, 2.0);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = small_params(1);
        p.alpha = 0.0;
        assert!(p.validate().is_err());
        let mut p = small_params(1);
        p.burn_in = p.iterations;
        assert!(p.validate().is_err());
    }

    #[test]
    fn single_token_corpus() {
        let corpus = corpus_from(&[("e", "p", "o")]);
        let model = gibbs_train(&corpus, small_params(3), None).unwrap();
        assert_eq!(model.theta_row(0), &[1.0]);
        assert_eq!(model.phi_row(0), &[1.0]);
        assert_eq!(log_likelihood(&model, &corpus).unwrap(), 0.0);
    }

    #[test]
    fn same_seed_same_model() {
        let corpus = corpus_from(&[
            ("a", "p", "x"),
            ("a", "q", "y"),
            ("b", "p", "x"),
            ("b", "q", "z"),
            ("c", "p", "z"),
        ]);
        let m1 = gibbs_train(&corpus, small_params(9), None).unwrap();
        let m2 = gibbs_train(&corpus, small_params(9), None).unwrap();
        assert_eq!(m1.assignments(), m2.assignments());
        assert_eq!(m1, m2);
    }

    #[test]
    fn unit_weights_match_unweighted() {
        let corpus = corpus_from(&[
            ("a", "p", "x"),
            ("a", "q", "y"),
            ("b", "p", "x"),
            ("b", "q", "z"),
        ]);
        let ones = TfIdf::uniform(&corpus);
        let mut plain = GibbsSampler::new(&corpus, small_params(5), None).unwrap();
        let mut weighted = GibbsSampler::new(&corpus, small_params(5), Some(&ones)).unwrap();
        for _ in 0..20 {
            plain.sweep();
            weighted.sweep();
            assert_eq!(plain.doc_topic_counts(), weighted.doc_topic_counts());
            assert_eq!(plain.topic_word_counts(), weighted.topic_word_counts());
        }
    }

    #[test]
    fn tfidf_training_runs() {
        let corpus = corpus_from(&[
            ("a", "p", "x"),
            ("a", "q", "y"),
            ("b", "p", "x"),
            ("b", "q", "z"),
        ]);
        let w = tfidf_weight(&corpus);
        let model = gibbs_train(&corpus, small_params(5), Some(&w)).unwrap();
        assert!(model.weighted());
        for d in 0..2 {
            let s: f64 = model.theta_row(d).iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn topic_selection() {
        let m = manual_model(vec![0.1, 0.7, 0.2], vec![1.0 / 3.0; 3], 3, 1);
        assert_eq!(select_topic(&m, 0).unwrap(), 1);
        let m = manual_model(vec![0.5, 0.5], vec![1.0; 2], 2, 1);
        assert_eq!(select_topic(&m, 0).unwrap(), 0);
        let m = manual_model(vec![1.0], vec![1.0], 1, 1);
        assert_eq!(select_topic(&m, 0).unwrap(), 0);
        assert!(select_topic(&m, 1).is_err());
    }

    #[test]
    fn topic_word_ranking() {
        let m = manual_model(vec![1.0], vec![0.2, 0.5, 0.3], 1, 3);
        assert_eq!(rank_topic_words(&m, 0).unwrap(), vec!["b", "c", "a"]);
        let m = manual_model(vec![1.0], vec![0.25; 4], 1, 4);
        assert_eq!(rank_topic_words(&m, 0).unwrap(), vec!["a", "b", "c", "d"]);
        assert!(rank_topic_words(&m, 1).is_err());
    }

    #[test]
    fn mismatched_corpus_is_rejected() {
        let c1 = corpus_from(&[("e", "p", "o")]);
        let c2 = corpus_from(&[("e", "p", "other")]);
        let model = gibbs_train(&c1, small_params(1), None).unwrap();
        assert!(matches!(
            log_likelihood(&model, &c2),
            Err(LdaError::CorpusMismatch { .. })
        ));
    }
}
