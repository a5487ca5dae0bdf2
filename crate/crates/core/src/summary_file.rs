//! Summary output as JSON lines or TSV, and reading JSON lines back for
//! evaluation. Terms are written in N-Triples syntax (`<iri>`, `"literal"`).

use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::EntitySummary;
use crate::mp::{Phase, RankedSummary};
use crate::rdf::{term_token, RdfTerm};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SummaryFileError {
    #[error("summary line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("read error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryTriple {
    pub s: String,
    pub p: String,
    pub o: String,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub entity: String,
    pub k: usize,
    pub triples: Vec<SummaryTriple>,
}

impl SummaryRecord {
    pub fn from_ranked(summary: &RankedSummary, k: usize) -> Self {
        SummaryRecord {
            entity: summary.entity_iri.clone(),
            k,
            triples: summary
                .ranked
                .iter()
                .map(|r| SummaryTriple {
                    s: r.triple.subject.to_string(),
                    p: r.triple.predicate.to_string(),
                    o: r.triple.object.to_string(),
                    phase: r.phase,
                })
                .collect(),
        }
    }

    /// Feature pairs for scoring; unparseable or empty terms become empty
    /// tokens that never match gold data.
    pub fn to_entity_summary(&self) -> EntitySummary {
        let token = |text: &str| {
            RdfTerm::parse(text)
                .ok()
                .and_then(|t| term_token(&t))
                .unwrap_or_default()
        };
        EntitySummary {
            entity_iri: self.entity.clone(),
            features: self
                .triples
                .iter()
                .map(|t| (token(&t.p), token(&t.o)))
                .collect(),
        }
    }
}

pub fn write_jsonl(records: &[SummaryRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// `entity<TAB>rank<TAB>s<TAB>p<TAB>o`, rank starting at 1.
pub fn write_tsv(records: &[SummaryRecord]) -> String {
    let mut out = String::new();
    for r in records {
        for (i, t) in r.triples.iter().enumerate() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                r.entity,
                i + 1,
                t.s,
                t.p,
                t.o
            ));
        }
    }
    out
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<SummaryRecord>, SummaryFileError> {
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line.map_err(|e| SummaryFileError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| SummaryFileError::MalformedLine {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}
