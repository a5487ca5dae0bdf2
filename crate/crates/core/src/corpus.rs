//! Per-entity documents, enrichment and the frozen corpus fed to the sampler.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use indexmap::{IndexMap, IndexSet};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::rdf::{term_token, CategoryMap, Triple};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("entity {0} appears in more than one document")]
    DuplicateEntity(String),
}

/// Object tokens with their multiplicities, in first-appearance order.
pub type TokenBag = IndexMap<String, u64>;

/// All triples sharing one subject.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityDocument {
    pub entity_iri: String,
    pub triples: Vec<Triple>,
    /// Normalized predicate of each triple, parallel to `triples`.
    pub predicate_tokens: Vec<String>,
    /// Object token of each triple; `None` for blank literals.
    pub object_tokens: Vec<Option<String>>,
    pub tokens: TokenBag,
}

impl EntityDocument {
    fn from_triples(entity_iri: String, triples: Vec<Triple>) -> Self {
        let predicate_tokens = triples
            .iter()
            .map(|t| term_token(&t.predicate).unwrap_or_default())
            .collect();
        let object_tokens: Vec<Option<String>> =
            triples.iter().map(|t| term_token(&t.object)).collect();
        let mut tokens = TokenBag::new();
        for tok in object_tokens.iter().flatten() {
            *tokens.entry(tok.clone()).or_insert(0) += 1;
        }
        EntityDocument {
            entity_iri,
            triples,
            predicate_tokens,
            object_tokens,
            tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn multiplicity(&self, token: &str) -> u64 {
        self.tokens.get(token).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.tokens.values().sum()
    }

    /// Whether some triple of this document has `token` as its object.
    pub fn has_object_token(&self, token: &str) -> bool {
        self.object_tokens.iter().flatten().any(|t| t == token)
    }

    /// Distinct object tokens of the triples, first-appearance order.
    pub fn distinct_object_tokens(&self) -> IndexSet<&str> {
        self.object_tokens
            .iter()
            .flatten()
            .map(String::as_str)
            .collect()
    }

    pub fn distinct_predicates(&self) -> usize {
        self.predicate_tokens.iter().collect::<IndexSet<_>>().len()
    }
}

/// Groups triples by subject, keeping first-appearance order of subjects and
/// input order within each document.
///
/// Subjects none of whose objects yield a token are dropped with a warning.
pub fn build_documents(triples: Vec<Triple>) -> Result<Vec<EntityDocument>, CorpusError> {
    if triples.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut groups: IndexMap<String, Vec<Triple>> = IndexMap::new();
    for t in triples {
        groups.entry(t.subject.lexical.clone()).or_default().push(t);
    }
    let docs: Vec<_> = groups
        .into_iter()
        .map(|(iri, ts)| EntityDocument::from_triples(iri, ts))
        .filter(|doc| {
            let keep = !doc.tokens.is_empty();
            if !keep {
                log::warn!("dropping {}: no object yields a token", doc.entity_iri);
            }
            keep
        })
        .collect();
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(docs)
}

/// Adds the categories of each object token as extra tokens.
///
/// A category gains one occurrence per occurrence of the object that
/// carries it. Categories that already occur in the document are left
/// alone so existing multiplicities never change.
pub fn enrich_categories(mut doc: EntityDocument, cats: &CategoryMap) -> EntityDocument {
    let before = doc.tokens.clone();
    for (token, &count) in &before {
        for cat in cats.categories(token) {
            if before.contains_key(cat) {
                continue;
            }
            *doc.tokens.entry(cat.to_string()).or_insert(0) += count;
        }
    }
    doc
}

/// Multiplies the multiplicity of every triple-object token by one plus its
/// number of categories.
pub fn expand_frequency(mut doc: EntityDocument, cats: &CategoryMap) -> EntityDocument {
    let objects: IndexSet<String> = doc.object_tokens.iter().flatten().cloned().collect();
    for token in &objects {
        let m = cats.category_count(token) as u64;
        if let Some(count) = doc.tokens.get_mut(token) {
            *count *= 1 + m;
        }
    }
    doc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnrichmentMode {
    None,
    Categories,
    Expand,
    #[default]
    Both,
}

impl EnrichmentMode {
    pub fn apply(self, doc: EntityDocument, cats: &CategoryMap) -> EntityDocument {
        match self {
            EnrichmentMode::None => doc,
            EnrichmentMode::Categories => enrich_categories(doc, cats),
            EnrichmentMode::Expand => expand_frequency(doc, cats),
            EnrichmentMode::Both => expand_frequency(enrich_categories(doc, cats), cats),
        }
    }
}

impl fmt::Display for EnrichmentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnrichmentMode::None => "none",
            EnrichmentMode::Categories => "categories",
            EnrichmentMode::Expand => "expand",
            EnrichmentMode::Both => "both",
        })
    }
}

impl FromStr for EnrichmentMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(EnrichmentMode::None),
            "categories" => Ok(EnrichmentMode::Categories),
            "expand" => Ok(EnrichmentMode::Expand),
            "both" => Ok(EnrichmentMode::Both),
            other => Err(format!(
                "unknown enrichment mode {other:?} (expected none|categories|expand|both)"
            )),
        }
    }
}

/// Immutable document collection with dense vocabularies.
///
/// Topics are identified with predicates only by count: the number of
/// topics is the number of distinct predicate tokens.
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<EntityDocument>,
    predicate_vocab: IndexSet<String>,
    object_vocab: IndexSet<String>,
    doc_words: Vec<Vec<(usize, u64)>>,
    entity_index: HashMap<String, usize>,
    fingerprint: String,
}

/// Builds vocabularies in first-appearance order and fingerprints the result.
pub fn freeze(documents: Vec<EntityDocument>) -> Result<Corpus, CorpusError> {
    let documents: Vec<_> = documents
        .into_iter()
        .filter(|d| {
            let keep = d.total_tokens() > 0;
            if !keep {
                log::warn!("dropping {}: document has no tokens", d.entity_iri);
            }
            keep
        })
        .collect();
    if documents.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }

    let mut predicate_vocab = IndexSet::new();
    let mut object_vocab = IndexSet::new();
    let mut entity_index = HashMap::new();
    let mut doc_words = Vec::with_capacity(documents.len());
    for (i, doc) in documents.iter().enumerate() {
        if entity_index.insert(doc.entity_iri.clone(), i).is_some() {
            return Err(CorpusError::DuplicateEntity(doc.entity_iri.clone()));
        }
        for p in &doc.predicate_tokens {
            if !predicate_vocab.contains(p.as_str()) {
                predicate_vocab.insert(p.clone());
            }
        }
        let words = doc
            .tokens
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(tok, &c)| (object_vocab.insert_full(tok.clone()).0, c))
            .collect();
        doc_words.push(words);
    }

    let mut hasher = Sha256::new();
    for doc in &documents {
        hasher.update(b"E");
        hasher.update(doc.entity_iri.as_bytes());
        hasher.update([0]);
    }
    for p in &predicate_vocab {
        hasher.update(b"P");
        hasher.update(p.as_bytes());
        hasher.update([0]);
    }
    for w in &object_vocab {
        hasher.update(b"W");
        hasher.update(w.as_bytes());
        hasher.update([0]);
    }
    for words in &doc_words {
        let words: &Vec<(usize, u64)> = words;
        hasher.update(b"D");
        for &(w, c) in words {
            hasher.update((w as u64).to_le_bytes());
            hasher.update(c.to_le_bytes());
        }
    }
    let fingerprint = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();

    Ok(Corpus {
        documents,
        predicate_vocab,
        object_vocab,
        doc_words,
        entity_index,
        fingerprint,
    })
}

impl Corpus {
    pub fn documents(&self) -> &[EntityDocument] {
        &self.documents
    }

    pub fn document(&self, index: usize) -> &EntityDocument {
        &self.documents[index]
    }

    pub fn entity_position(&self, entity_iri: &str) -> Option<usize> {
        self.entity_index.get(entity_iri).copied()
    }

    pub fn predicate_vocab(&self) -> &IndexSet<String> {
        &self.predicate_vocab
    }

    pub fn object_vocab(&self) -> &IndexSet<String> {
        &self.object_vocab
    }

    /// E.
    pub fn entity_count(&self) -> usize {
        self.documents.len()
    }

    /// R, the number of distinct predicate tokens.
    pub fn predicate_count(&self) -> usize {
        self.predicate_vocab.len()
    }

    /// K; always equal to R.
    pub fn num_topics(&self) -> usize {
        self.predicate_vocab.len()
    }

    /// V.
    pub fn vocab_size(&self) -> usize {
        self.object_vocab.len()
    }

    /// (word id, multiplicity) pairs of document `d`.
    pub fn doc_words(&self, d: usize) -> &[(usize, u64)] {
        &self.doc_words[d]
    }

    pub fn total_tokens(&self) -> u64 {
        self.doc_words.iter().flatten().map(|&(_, c)| c).sum()
    }

    /// Hex SHA-256 over entities, vocabularies and token counts.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// `entity<TAB>num_triples<TAB>num_tokens` per document.
    pub fn stats_tsv(&self) -> String {
        let mut out = String::from("entity\tnum_triples\tnum_tokens\n");
        for doc in &self.documents {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                doc.entity_iri,
                doc.len(),
                doc.total_tokens()
            ));
        }
        out
    }
}

/// TF-IDF weight of every (document, word) entry of a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdf {
    weights: Vec<Vec<f64>>,
    words: Vec<Vec<usize>>,
}

impl TfIdf {
    /// Weight of the `i`-th entry of `doc_words(d)`.
    pub fn entry(&self, d: usize, i: usize) -> f64 {
        self.weights[d][i]
    }

    pub fn weight(&self, corpus: &Corpus, d: usize, token: &str) -> f64 {
        let Some(w) = corpus.object_vocab().get_index_of(token) else {
            return 0.0;
        };
        self.words[d]
            .iter()
            .position(|&x| x == w)
            .map_or(0.0, |i| self.weights[d][i])
    }

    /// Every weight set to one; the weighted sampler then matches the
    /// unweighted one exactly.
    pub fn uniform(corpus: &Corpus) -> Self {
        let words: Vec<Vec<usize>> = (0..corpus.entity_count())
            .map(|d| corpus.doc_words(d).iter().map(|&(w, _)| w).collect())
            .collect();
        let weights = words.iter().map(|ws| vec![1.0; ws.len()]).collect();
        TfIdf { weights, words }
    }

    pub(crate) fn doc_count(&self) -> usize {
        self.weights.len()
    }

    pub(crate) fn doc_len(&self, d: usize) -> usize {
        self.weights.get(d).map_or(0, Vec::len)
    }
}

/// tf(d,t) · ln(E / df(t)), with tf normalized by document token count.
pub fn tfidf_weight(corpus: &Corpus) -> TfIdf {
    let e = corpus.entity_count() as f64;
    let mut df = vec![0usize; corpus.vocab_size()];
    for d in 0..corpus.entity_count() {
        for &(w, _) in corpus.doc_words(d) {
            df[w] += 1;
        }
    }
    let mut weights = Vec::with_capacity(corpus.entity_count());
    let mut words = Vec::with_capacity(corpus.entity_count());
    for d in 0..corpus.entity_count() {
        let entries = corpus.doc_words(d);
        let total: u64 = entries.iter().map(|&(_, c)| c).sum();
        weights.push(
            entries
                .iter()
                .map(|&(w, c)| (c as f64 / total as f64) * (e / df[w] as f64).ln())
                .collect(),
        );
        words.push(entries.iter().map(|&(w, _)| w).collect());
    }
    TfIdf { weights, words }
}
