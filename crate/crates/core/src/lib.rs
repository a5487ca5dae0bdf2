//! Entity summarization over RDF triples.
//!
//! Each entity's triples form a document whose words are normalized object
//! tokens. A topic model with one topic per distinct predicate is trained by
//! collapsed Gibbs sampling; each entity's triples are then reranked from
//! its most probable topic's word ranking while keeping predicates unique
//! for as long as possible. Summaries are scored with F-measure and MAP.

pub mod cli;
pub mod corpus;
pub mod eval;
pub mod exec;
pub mod lda;
pub mod model_file;
pub mod mp;
pub mod rdf;
pub mod summary_file;

pub use corpus::{
    build_documents, enrich_categories, expand_frequency, freeze, tfidf_weight, Corpus,
    CorpusError, EnrichmentMode, EntityDocument, TfIdf,
};
pub use eval::{
    average_precision, evaluate, f_measure, load_gold, DatasetGold, EntitySummary, EvalError,
    EvalReport, GoldAggregation, GoldStandard,
};
pub use exec::Execution;
pub use lda::{
    default_hyperparams, gibbs_train, log_likelihood, rank_topic_words, select_topic, BetaMode,
    GibbsSampler, HyperParams, LdaError, LdaModel,
};
pub use mp::{mp_rank, summarize, MpError, Phase, RankedSummary, Summarizer};
pub use rdf::{
    load_category_map, normalize_term, parse_ntriples, CategoryMap, RdfError, RdfTerm, Triple,
};
