//! Test-only oracles and generators, kept independent of the library's
//! implementation paths.

#![allow(dead_code)]

use std::collections::HashSet;

use mpsum::corpus::{build_documents, freeze, Corpus, EntityDocument, TokenBag};
use mpsum::rdf::{RdfTerm, Triple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A document built directly from (predicate token, object token) pairs.
pub fn doc_from_pairs(pairs: &[(String, String)]) -> EntityDocument {
    let triples: Vec<Triple> = pairs
        .iter()
        .enumerate()
        .map(|(i, (p, o))| Triple {
            subject: RdfTerm::iri("http://t/e"),
            predicate: RdfTerm::iri(format!("http://t/{p}")),
            object: RdfTerm::iri(format!("http://t/{o}")),
            source_line: i + 1,
            doc_order: i,
        })
        .collect();
    let mut tokens = TokenBag::new();
    for (_, o) in pairs {
        *tokens.entry(o.clone()).or_insert(0) += 1;
    }
    EntityDocument {
        entity_iri: "http://t/e".into(),
        triples,
        predicate_tokens: pairs.iter().map(|(p, _)| p.clone()).collect(),
        object_tokens: pairs.iter().map(|(_, o)| Some(o.clone())).collect(),
        tokens,
    }
}

/// Line-by-line transliteration of the MP ranking pseudocode over
/// (predicate, object) pairs. Returns (index into `pairs`, phase 1..=3).
pub fn mp_oracle(pairs: &[(String, String)], words: &[&str]) -> Vec<(usize, u8)> {
    let mut triples: Vec<usize> = (0..pairs.len()).collect();
    let mut predicates: Vec<&str> = Vec::new();
    let mut output = Vec::new();
    for tw in words {
        let tw_in_d = pairs.iter().any(|(_, o)| o == tw);
        if tw_in_d {
            let mut i = 0;
            while i < triples.len() {
                let rp = triples[i];
                let p = pairs[rp].0.as_str();
                if pairs[rp].1 == *tw && !predicates.contains(&p) {
                    predicates.push(p);
                    output.push((triples.remove(i), 1));
                } else {
                    i += 1;
                }
            }
        }
    }
    let mut i = 0;
    while i < triples.len() {
        let rp = triples[i];
        let p = pairs[rp].0.as_str();
        if !predicates.contains(&p) {
            predicates.push(p);
            output.push((triples.remove(i), 2));
        } else {
            i += 1;
        }
    }
    output.extend(triples.drain(..).map(|t| (t, 3)));
    output
}

/// All restricted-growth strings of length `n` with at most `max_blocks`
/// distinct labels; each is a canonical labeling up to renaming.
pub fn restricted_growth_strings(n: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    fn go(
        prefix: &mut Vec<usize>,
        n: usize,
        max_blocks: usize,
        used: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=used.min(max_blocks - 1) {
            prefix.push(label);
            go(prefix, n, max_blocks, used.max(label + 1), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, max_blocks, 0, &mut out);
    out
}

/// Every ordered arrangement of every subset of `items` (including the empty one).
pub fn arrangements<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], used: &mut Vec<bool>, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        out.push(cur.clone());
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i].clone());
                go(items, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(
        items,
        &mut vec![false; items.len()],
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Precision/recall/F from explicit counting over a relevance pattern.
/// `relevant[i]` says whether rank i+1 is in the gold set; `gold_size` ≥
/// number of relevant items.
pub fn f_oracle(relevant: &[bool], gold_size: usize) -> f64 {
    let mut hits = 0;
    for &r in relevant {
        if r {
            hits += 1;
        }
    }
    if relevant.is_empty() || gold_size == 0 || hits == 0 {
        return 0.0;
    }
    let p = hits as f64 / relevant.len() as f64;
    let r = hits as f64 / gold_size as f64;
    2.0 * p * r / (p + r)
}

/// Average precision by recounting the relevant items in every prefix.
pub fn ap_oracle(relevant: &[bool], gold_size: usize, k: usize) -> f64 {
    let norm = k.min(gold_size);
    if norm == 0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..relevant.len().min(k) {
        if relevant[i] {
            let in_prefix = relevant[..=i].iter().filter(|&&x| x).count();
            sum += in_prefix as f64 / (i + 1) as f64;
        }
    }
    sum / norm as f64
}

/// Synthetic corpus drawn from known topics.
pub struct Synthetic {
    pub corpus: Corpus,
    /// True topic-word distributions over generator word ids `w0..w{V-1}`.
    pub phi: Vec<Vec<f64>>,
}

/// Topics have disjoint word supports of equal size with random weights.
/// Every token of topic k is emitted under predicate `p{k}`, so R = K.
/// Each document mixes a dominant topic with a minor one.
pub fn synthetic_corpus(
    topics: usize,
    vocab: usize,
    docs: usize,
    doc_len: usize,
    seed: u64,
) -> Synthetic {
    assert!(vocab.is_multiple_of(topics));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0fd4_7a00);
    let block = vocab / topics;
    let mut phi = vec![vec![0.0; vocab]; topics];
    for (k, row) in phi.iter_mut().enumerate() {
        let weights: Vec<f64> = (0..block).map(|_| 0.5 + rng.random::<f64>()).collect();
        let total: f64 = weights.iter().sum();
        for (j, w) in weights.iter().enumerate() {
            row[k * block + j] = w / total;
        }
    }
    let draw = |rng: &mut ChaCha8Rng, probs: &[f64]| {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    };
    let mut triples = Vec::new();
    for d in 0..docs {
        let major = d % topics;
        let minor = rng.random_range(0..topics);
        for order in 0..doc_len {
            let k = if rng.random::<f64>() < 0.85 {
                major
            } else {
                minor
            };
            let w = draw(&mut rng, &phi[k]);
            triples.push(Triple {
                subject: RdfTerm::iri(format!("http://syn/e{d}")),
                predicate: RdfTerm::iri(format!("http://syn/p{k}")),
                object: RdfTerm::iri(format!("http://syn/w{w}")),
                source_line: triples.len() + 1,
                doc_order: order,
            });
        }
    }
    let corpus = freeze(build_documents(triples).unwrap()).unwrap();
    assert_eq!(corpus.num_topics(), topics);
    Synthetic { corpus, phi }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Repeatedly pairs the most similar unmatched (learned, true) rows and
/// returns the mean cosine of the pairs.
pub fn greedy_matched_cosine(learned: &[Vec<f64>], truth: &[Vec<f64>]) -> f64 {
    let mut pairs = Vec::new();
    for (i, l) in learned.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            pairs.push((cosine(l, t), i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut used_l = HashSet::new();
    let mut used_t = HashSet::new();
    let mut total = 0.0;
    let mut n = 0;
    for (c, i, j) in pairs {
        if used_l.contains(&i) || used_t.contains(&j) {
            continue;
        }
        used_l.insert(i);
        used_t.insert(j);
        total += c;
        n += 1;
    }
    total / n as f64
}

/// Learned φ rows re-indexed to generator word ids via the vocabulary.
pub fn phi_in_generator_order(model: &mpsum::LdaModel, vocab: usize) -> Vec<Vec<f64>> {
    (0..model.num_topics())
        .map(|k| {
            let row = model.phi_row(k);
            let mut out = vec![0.0; vocab];
            for (idx, word) in model.words().iter().enumerate() {
                let id: usize = word.trim_start_matches('w').parse().unwrap();
                out[id] = row[idx];
            }
            out
        })
        .collect()
}
