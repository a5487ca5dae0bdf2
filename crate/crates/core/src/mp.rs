//! Triple ranking by matching ranked topic words to triples under predicate
//! uniqueness, and top-k summaries built on it.
//!
//! The ordering runs in three phases:
//!
//! 1. For each topic word in rank order that occurs as an object in the
//!    document, emit every remaining triple whose object token equals it and
//!    whose predicate has not been emitted yet.
//! 2. Emit the remaining triples whose predicate is still unseen, in
//!    document order.
//! 3. Emit everything left, in document order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, EntityDocument};
use crate::exec::Execution;
use crate::lda::{select_topic, topic_word_order, LdaError, LdaModel};
use crate::rdf::Triple;

#[derive(Debug, Error, PartialEq)]
pub enum MpError {
    #[error("document has no triples")]
    EmptyDocument,
    #[error("unknown entity {0}")]
    UnknownEntity(String),
    #[error("k must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Model(#[from] LdaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    TopicMatch,
    NewPredicate,
    Remainder,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::TopicMatch => "topic_match",
            Phase::NewPredicate => "new_predicate",
            Phase::Remainder => "remainder",
        })
    }
}

/// One ranked triple with its tokens and the phase that emitted it.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedTriple {
    pub triple: Triple,
    pub predicate_token: String,
    pub object_token: Option<String>,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedSummary {
    pub entity_iri: String,
    pub ranked: Vec<RankedTriple>,
}

impl RankedSummary {
    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.ranked.iter().map(|r| &r.triple)
    }

    pub fn phase_tags(&self) -> Vec<Phase> {
        self.ranked.iter().map(|r| r.phase).collect()
    }

    /// Keeps the first `k` entries.
    pub fn truncate(mut self, k: usize) -> Self {
        self.ranked.truncate(k);
        self
    }
}

/// Ranks `doc` given the full topic-word ranking.
pub fn mp_rank<S: AsRef<str>>(
    doc: &EntityDocument,
    topic_words: &[S],
) -> Result<RankedSummary, MpError> {
    let present = doc.distinct_object_tokens();
    let matched = topic_words
        .iter()
        .map(AsRef::as_ref)
        .filter(|tw| present.contains(tw));
    rank_with_matches(doc, matched)
}

/// Topic-word ranking prepared once and reused across documents.
#[derive(Debug, Clone)]
pub struct TopicRanking {
    position: HashMap<String, usize>,
}

impl TopicRanking {
    pub fn new<S: AsRef<str>>(words: &[S]) -> Self {
        let mut position = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            position.entry(w.as_ref().to_string()).or_insert(i);
        }
        TopicRanking { position }
    }

    pub fn position(&self, token: &str) -> Option<usize> {
        self.position.get(token).copied()
    }
}

/// Same ordering as [`mp_rank`], visiting only the document's own tokens.
pub fn mp_rank_with(
    doc: &EntityDocument,
    ranking: &TopicRanking,
) -> Result<RankedSummary, MpError> {
    let mut present: Vec<(usize, &str)> = doc
        .distinct_object_tokens()
        .into_iter()
        .filter_map(|t| ranking.position(t).map(|p| (p, t)))
        .collect();
    present.sort_unstable();
    rank_with_matches(doc, present.into_iter().map(|(_, t)| t))
}

fn rank_with_matches<'a>(
    doc: &EntityDocument,
    matched_words: impl Iterator<Item = &'a str>,
) -> Result<RankedSummary, MpError> {
    if doc.is_empty() {
        return Err(MpError::EmptyDocument);
    }
    let n = doc.len();
    let mut taken = vec![false; n];
    let mut seen: HashSet<&str> = HashSet::new();
    let mut order: Vec<(usize, Phase)> = Vec::with_capacity(n);

    for tw in matched_words {
        for (i, done) in taken.iter_mut().enumerate() {
            if *done || doc.object_tokens[i].as_deref() != Some(tw) {
                continue;
            }
            if seen.insert(doc.predicate_tokens[i].as_str()) {
                *done = true;
                order.push((i, Phase::TopicMatch));
            }
        }
    }
    for (i, done) in taken.iter_mut().enumerate() {
        if !*done && seen.insert(doc.predicate_tokens[i].as_str()) {
            *done = true;
            order.push((i, Phase::NewPredicate));
        }
    }
    for (i, done) in taken.iter().enumerate() {
        if !done {
            order.push((i, Phase::Remainder));
        }
    }

    let ranked = order
        .into_iter()
        .map(|(i, phase)| RankedTriple {
            triple: doc.triples[i].clone(),
            predicate_token: doc.predicate_tokens[i].clone(),
            object_token: doc.object_tokens[i].clone(),
            phase,
        })
        .collect();
    Ok(RankedSummary {
        entity_iri: doc.entity_iri.clone(),
        ranked,
    })
}

/// Summarizes entities of a corpus with a model trained on it. Topic
/// rankings are computed once per topic and cached.
pub struct Summarizer<'a> {
    model: &'a LdaModel,
    corpus: &'a Corpus,
    rankings: Vec<std::sync::OnceLock<TopicRanking>>,
}

impl<'a> Summarizer<'a> {
    pub fn new(model: &'a LdaModel, corpus: &'a Corpus) -> Result<Self, MpError> {
        model.check_corpus(corpus)?;
        Ok(Summarizer {
            model,
            corpus,
            rankings: (0..model.num_topics())
                .map(|_| std::sync::OnceLock::new())
                .collect(),
        })
    }

    fn ranking(&self, topic: usize) -> Result<&TopicRanking, MpError> {
        if let Some(r) = self.rankings[topic].get() {
            return Ok(r);
        }
        let words: Vec<&str> = topic_word_order(self.model, topic)?
            .into_iter()
            .map(|w| self.model.words()[w].as_str())
            .collect();
        Ok(self.rankings[topic].get_or_init(|| TopicRanking::new(&words)))
    }

    /// Full MP ordering for the document at `index`.
    pub fn rank_document(&self, index: usize) -> Result<RankedSummary, MpError> {
        let topic = select_topic(self.model, index)?;
        mp_rank_with(self.corpus.document(index), self.ranking(topic)?)
    }

    pub fn rank_entity(&self, entity_iri: &str) -> Result<RankedSummary, MpError> {
        let index = self
            .corpus
            .entity_position(entity_iri)
            .ok_or_else(|| MpError::UnknownEntity(entity_iri.to_string()))?;
        self.rank_document(index)
    }

    /// The first min(k, |doc|) ranked triples of an entity.
    pub fn summarize(&self, entity_iri: &str, k: usize) -> Result<RankedSummary, MpError> {
        if k == 0 {
            return Err(MpError::ZeroK);
        }
        Ok(self.rank_entity(entity_iri)?.truncate(k))
    }

    /// Summaries of every entity, in corpus order.
    pub fn summarize_all(&self, k: usize, exec: Execution) -> Result<Vec<RankedSummary>, MpError> {
        if k == 0 {
            return Err(MpError::ZeroK);
        }
        exec.map_range(self.corpus.entity_count(), |d| {
            self.rank_document(d).map(|s| s.truncate(k))
        })
        .into_iter()
        .collect()
    }
}

/// Top-k triples of one entity.
pub fn summarize(
    model: &LdaModel,
    corpus: &Corpus,
    entity_iri: &str,
    k: usize,
) -> Result<Vec<Triple>, MpError> {
    let summary = Summarizer::new(model, corpus)?.summarize(entity_iri, k)?;
    Ok(summary.ranked.into_iter().map(|r| r.triple).collect())
}
