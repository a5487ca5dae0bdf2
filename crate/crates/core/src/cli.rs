//! `mpsum` command line: `train`, `summarize`, `eval` and `pipeline`.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error. Every subcommand
//! computes all of its outputs in memory before writing any file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corpus::{build_documents, freeze, tfidf_weight, Corpus, EnrichmentMode};
use crate::eval::{evaluate, load_gold, strip_angle, DatasetGold, EvalReport, GoldAggregation};
use crate::exec::Execution;
use crate::lda::{default_hyperparams, BetaMode, GibbsSampler, HyperParams, LdaModel};
use crate::mp::{MpError, Summarizer};
use crate::rdf::{load_category_map, parse_ntriples, CategoryMap};
use crate::summary_file::{read_jsonl, write_jsonl, write_tsv, SummaryRecord};

pub const MODEL_FILE: &str = "model.txt";
pub const STATS_FILE: &str = "corpus_stats.tsv";
pub const TRAIN_LOG_FILE: &str = "train_log.tsv";
pub const SUMMARIES_FILE: &str = "summaries.jsonl";
pub const SUMMARIES_TSV_FILE: &str = "summaries.tsv";
pub const REPORT_TSV_FILE: &str = "report.tsv";
pub const REPORT_JSON_FILE: &str = "report.json";
pub const ENTITY_SCORES_FILE: &str = "entity_scores.tsv";

const LOG_EVERY: usize = 100;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }
}

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "mpsum",
    version,
    about = "Top-k entity summaries from RDF triples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a topic model over per-entity documents.
    Train(TrainArgs),
    /// Write top-k summaries with a trained model.
    Summarize(SummarizeArgs),
    /// Score summaries against gold standards.
    Eval(EvalArgs),
    /// Train, summarize and (given gold files) evaluate in one run.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct RunArgs {
    /// key=value file with RunConfig fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// N-Triples input.
    #[arg(long = "input-path", visible_alias = "input")]
    pub input_path: Option<PathBuf>,
    /// object<TAB>category TSV.
    #[arg(long = "category-map-path", visible_alias = "category-map")]
    pub category_map_path: Option<PathBuf>,
    /// none | categories | expand | both
    #[arg(long)]
    pub enrichment_mode: Option<String>,
    /// fixed_001 | fifty_over_R
    #[arg(long)]
    pub beta_mode: Option<String>,
    #[arg(long = "alpha-override", visible_alias = "alpha")]
    pub alpha_override: Option<f64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated summary sizes, e.g. 5,10.
    #[arg(long)]
    pub k_list: Option<String>,
    /// Weight token counts by TF-IDF during sampling.
    #[arg(long)]
    pub tfidf: bool,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummaryFormat {
    Jsonl,
    Tsv,
}

#[derive(Debug, Clone, Args)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// The N-Triples file the model was trained on.
    #[arg(long = "input-path", visible_alias = "input")]
    pub input_path: PathBuf,
    #[arg(long = "category-map-path", visible_alias = "category-map")]
    pub category_map_path: Option<PathBuf>,
    /// Entity IRI to summarize; repeatable.
    #[arg(long = "entity", conflicts_with = "all")]
    pub entities: Vec<String>,
    #[arg(long)]
    pub all: bool,
    #[arg(long, short)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: SummaryFormat,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// JSON-lines summaries.
    #[arg(long)]
    pub summaries: PathBuf,
    /// Gold file as [LABEL[@K]=]PATH; repeatable.
    #[arg(long = "gold", required = true)]
    pub golds: Vec<String>,
    #[arg(long, default_value = "5,10")]
    pub ks: String,
    /// Score against the union of annotators instead of each annotator.
    #[arg(long)]
    pub pooled: bool,
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Gold file as [LABEL[@K]=]PATH; repeatable. Evaluation is skipped
    /// when none is given.
    #[arg(long = "gold")]
    pub golds: Vec<String>,
    #[arg(long)]
    pub pooled: bool,
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub category_map_path: Option<PathBuf>,
    pub enrichment_mode: EnrichmentMode,
    pub beta_mode: BetaMode,
    pub alpha_override: Option<f64>,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub k_list: Vec<usize>,
    pub tfidf: bool,
    pub output_dir: PathBuf,
}

fn parse_k_list(text: &str) -> Result<Vec<usize>, CliError> {
    let ks: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad k list {text:?}")))?;
    if ks.is_empty() || ks.contains(&0) || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!(
            "k list must be non-empty, positive and strictly ascending: {text:?}"
        )));
    }
    Ok(ks)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().trim_matches('"').to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Merges flags over the optional config file over defaults.
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let mut file = match &args.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let mut from_file = |key: &str| file.remove(key);
        let usage = |e: String| CliError::Usage(e);

        let input_path = args
            .input_path
            .clone()
            .or_else(|| from_file("input_path").map(PathBuf::from))
            .ok_or_else(|| CliError::Usage("missing --input-path".into()))?;
        let category_map_path = args
            .category_map_path
            .clone()
            .or_else(|| from_file("category_map_path").map(PathBuf::from));
        let enrichment_mode = match args
            .enrichment_mode
            .clone()
            .or_else(|| from_file("enrichment_mode"))
        {
            Some(s) => s.parse().map_err(usage)?,
            None => EnrichmentMode::default(),
        };
        let beta_mode = match args.beta_mode.clone().or_else(|| from_file("beta_mode")) {
            Some(s) => s.parse().map_err(usage)?,
            None => BetaMode::default(),
        };
        let alpha_override = match args.alpha_override {
            Some(a) => Some(a),
            None => from_file("alpha_override")
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| usage(format!("bad alpha_override {s:?}")))
                })
                .transpose()?,
        };
        if let Some(a) = alpha_override {
            if !(a > 0.0 && a.is_finite()) {
                return Err(usage(format!("alpha_override must be positive, got {a}")));
            }
        }
        let parse_usize =
            |flag: Option<usize>, value: Option<String>, key: &str, default: usize| match (
                flag, value,
            ) {
                (Some(v), _) => Ok(v),
                (None, Some(s)) => s
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad {key} {s:?}"))),
                (None, None) => Ok(default),
            };
        let iterations = parse_usize(
            args.iterations,
            from_file("iterations"),
            "iterations",
            crate::lda::DEFAULT_ITERATIONS,
        )?;
        let burn_in = parse_usize(
            args.burn_in,
            from_file("burn_in"),
            "burn_in",
            crate::lda::DEFAULT_BURN_IN.min(iterations.saturating_sub(1)),
        )?;
        let seed = match (args.seed, from_file("seed")) {
            (Some(s), _) => s,
            (None, Some(s)) => s.parse().map_err(|_| usage(format!("bad seed {s:?}")))?,
            (None, None) => crate::lda::DEFAULT_SEED,
        };
        let k_list = parse_k_list(
            &args
                .k_list
                .clone()
                .or_else(|| from_file("k_list"))
                .unwrap_or_else(|| "5,10".into()),
        )?;
        let tfidf = args.tfidf
            || match from_file("tfidf") {
                Some(s) => s
                    .parse::<bool>()
                    .map_err(|_| usage(format!("bad tfidf {s:?}")))?,
                None => false,
            };
        let output_dir = args
            .output_dir
            .clone()
            .or_else(|| from_file("output_dir").map(PathBuf::from))
            .ok_or_else(|| CliError::Usage("missing --output-dir".into()))?;
        if let Some(key) = file.keys().next() {
            return Err(usage(format!("unknown config key {key:?}")));
        }
        if iterations == 0 || burn_in >= iterations {
            return Err(usage(format!(
                "iterations ({iterations}) must exceed burn_in ({burn_in})"
            )));
        }
        Ok(RunConfig {
            input_path,
            category_map_path,
            enrichment_mode,
            beta_mode,
            alpha_override,
            iterations,
            burn_in,
            seed,
            k_list,
            tfidf,
            output_dir,
        })
    }

    fn check_inputs(&self) -> Result<(), CliError> {
        require_file(&self.input_path)?;
        if let Some(p) = &self.category_map_path {
            require_file(p)?;
        }
        Ok(())
    }
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "input file {} not found",
            path.display()
        )))
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| data(format!("{}: {e}", path.display())))
}

/// Parses, groups, enriches and freezes the input.
pub fn load_corpus(
    input: &Path,
    categories: Option<&Path>,
    mode: EnrichmentMode,
) -> Result<Corpus, CliError> {
    let triples =
        parse_ntriples(open(input)?).map_err(|e| data(format!("{}: {e}", input.display())))?;
    let cats = match categories {
        Some(p) => {
            load_category_map(open(p)?).map_err(|e| data(format!("{}: {e}", p.display())))?
        }
        None => CategoryMap::new(),
    };
    let docs = build_documents(triples).map_err(data)?;
    let docs = docs.into_iter().map(|d| mode.apply(d, &cats)).collect();
    freeze(docs).map_err(data)
}

/// In-memory results of a training run.
pub struct TrainOutput {
    pub model: LdaModel,
    pub model_text: String,
    pub stats_tsv: String,
    pub log_tsv: String,
}

pub fn train(config: &RunConfig, corpus: &Corpus) -> Result<TrainOutput, CliError> {
    let mut params: HyperParams = default_hyperparams(corpus, config.beta_mode);
    if let Some(a) = config.alpha_override {
        params.alpha = a;
    }
    params.iterations = config.iterations;
    params.burn_in = config.burn_in;
    params.seed = config.seed;
    let weights = config.tfidf.then(|| tfidf_weight(corpus));

    let mut sampler = GibbsSampler::new(corpus, params, weights.as_ref()).map_err(data)?;
    let mut log_tsv = format!(
        "# E={} R={} K={} V={} N={}\n# alpha={:?} beta={:?} iterations={} burn_in={} seed={} tfidf={}\nsweep\tlog_likelihood\n",
        corpus.entity_count(),
        corpus.predicate_count(),
        corpus.num_topics(),
        corpus.vocab_size(),
        corpus.total_tokens(),
        params.alpha,
        params.beta,
        params.iterations,
        params.burn_in,
        params.seed,
        config.tfidf,
    );
    log_tsv.push_str(&format!("0\t{:?}\n", sampler.log_likelihood()));
    for sweep in 1..=params.iterations {
        sampler.sweep();
        if sweep % LOG_EVERY == 0 || sweep == params.iterations {
            log_tsv.push_str(&format!("{sweep}\t{:?}\n", sampler.log_likelihood()));
        }
    }
    let mut model = sampler.into_model();
    model.set_meta("enrichment_mode", config.enrichment_mode.to_string());
    model.set_meta("beta_mode", config.beta_mode.to_string());
    let model_text = model.to_text();
    Ok(TrainOutput {
        model,
        model_text,
        stats_tsv: corpus.stats_tsv(),
        log_tsv,
    })
}

fn write_files(dir: &Path, files: &[(&str, &str)]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| data(format!("{}: {e}", dir.display())))?;
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| data(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_dims(out: &mut impl Write, corpus: &Corpus) {
    let _ = writeln!(
        out,
        "E={} R={} K={} V={}",
        corpus.entity_count(),
        corpus.predicate_count(),
        corpus.num_topics(),
        corpus.vocab_size()
    );
}

fn run_train(args: &TrainArgs, out: &mut impl Write) -> Result<(), CliError> {
    let config = RunConfig::resolve(&args.run)?;
    config.check_inputs()?;
    let corpus = load_corpus(
        &config.input_path,
        config.category_map_path.as_deref(),
        config.enrichment_mode,
    )?;
    print_dims(out, &corpus);
    let result = train(&config, &corpus)?;
    write_files(
        &config.output_dir,
        &[
            (MODEL_FILE, &result.model_text),
            (STATS_FILE, &result.stats_tsv),
            (TRAIN_LOG_FILE, &result.log_tsv),
        ],
    )
}

/// Summaries for the requested entities (all when `entities` is empty).
pub fn summarize_records(
    model: &LdaModel,
    corpus: &Corpus,
    entities: &[String],
    k: usize,
) -> Result<Vec<SummaryRecord>, CliError> {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let summarizer = Summarizer::new(model, corpus).map_err(data)?;
    let exec = Execution::default();
    if entities.is_empty() {
        let all = summarizer.summarize_all(k, exec).map_err(data)?;
        return Ok(all
            .iter()
            .map(|s| SummaryRecord::from_ranked(s, k))
            .collect());
    }
    let results = exec.map(entities, |e| summarizer.summarize(strip_angle(e), k));
    let mut unknown = Vec::new();
    let mut records = Vec::new();
    for (entity, result) in entities.iter().zip(results) {
        match result {
            Ok(s) => records.push(SummaryRecord::from_ranked(&s, k)),
            Err(MpError::UnknownEntity(_)) => unknown.push(entity.clone()),
            Err(e) => return Err(data(e)),
        }
    }
    if !unknown.is_empty() {
        return Err(CliError::Data(format!(
            "unknown entities: {}",
            unknown.join(", ")
        )));
    }
    Ok(records)
}

fn load_model(path: &Path) -> Result<LdaModel, CliError> {
    require_file(path)?;
    let text = fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    LdaModel::from_text(&text).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn model_enrichment(model: &LdaModel) -> Result<EnrichmentMode, CliError> {
    match model.meta_value("enrichment_mode") {
        Some(s) => s.parse().map_err(|e: String| data(e)),
        None => Ok(EnrichmentMode::default()),
    }
}

fn run_summarize(args: &SummarizeArgs) -> Result<(), CliError> {
    if !args.all && args.entities.is_empty() {
        return Err(CliError::Usage(
            "give --all or at least one --entity".into(),
        ));
    }
    if args.k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    require_file(&args.input_path)?;
    if let Some(p) = &args.category_map_path {
        require_file(p)?;
    }
    let model = load_model(&args.model)?;
    let corpus = load_corpus(
        &args.input_path,
        args.category_map_path.as_deref(),
        model_enrichment(&model)?,
    )?;
    let records = summarize_records(&model, &corpus, &args.entities, args.k)?;
    let text = match args.format {
        SummaryFormat::Jsonl => write_jsonl(&records),
        SummaryFormat::Tsv => write_tsv(&records),
    };
    fs::write(&args.output, text).map_err(|e| data(format!("{}: {e}", args.output.display())))
}

/// `[LABEL[@K]=]PATH`.
fn parse_gold_spec(spec: &str) -> Result<(String, Option<usize>, PathBuf), CliError> {
    let (head, path) = match spec.split_once('=') {
        Some((h, p)) => (Some(h), PathBuf::from(p)),
        None => (None, PathBuf::from(spec)),
    };
    let default_label = || {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "gold".into())
    };
    let (label, k) = match head {
        None => (default_label(), None),
        Some(h) => match h.split_once('@') {
            Some((l, k)) => {
                let k = k
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad k in gold spec {spec:?}")))?;
                (l.to_string(), Some(k))
            }
            None => (h.to_string(), None),
        },
    };
    Ok((label, k, path))
}

pub fn load_datasets(specs: &[String]) -> Result<Vec<DatasetGold>, CliError> {
    let mut datasets: Vec<DatasetGold> = Vec::new();
    for spec in specs {
        let (label, k, path) = parse_gold_spec(spec)?;
        require_file(&path)?;
        let golds =
            load_gold(open(&path)?).map_err(|e| data(format!("{}: {e}", path.display())))?;
        let idx = match datasets.iter().position(|d| d.label == label) {
            Some(i) => i,
            None => {
                datasets.push(DatasetGold {
                    label: label.clone(),
                    ..Default::default()
                });
                datasets.len() - 1
            }
        };
        match k {
            Some(k) => {
                datasets[idx].by_k.insert(k, golds);
            }
            None => datasets[idx].default = golds,
        }
    }
    Ok(datasets)
}

/// Scores summary records, checking each is long enough for every k.
pub fn evaluate_records(
    records: &[SummaryRecord],
    datasets: &[DatasetGold],
    ks: &[usize],
    pooled: bool,
) -> Result<EvalReport, CliError> {
    let max_k = ks.iter().copied().max().unwrap_or(0);
    for r in records {
        if r.k < max_k && r.triples.len() >= r.k {
            return Err(data(format!(
                "summary for {} has k={} but evaluation needs k={max_k}",
                r.entity, r.k
            )));
        }
    }
    let summaries: Vec<_> = records
        .iter()
        .map(SummaryRecord::to_entity_summary)
        .collect();
    let agg = if pooled {
        GoldAggregation::PooledUnion
    } else {
        GoldAggregation::PerAnnotator
    };
    evaluate(&summaries, datasets, ks, agg, Execution::default()).map_err(data)
}

fn print_report(out: &mut impl Write, report: &EvalReport) {
    let _ = out.write_all(report.to_tsv().as_bytes());
    let pooled = report.pooled();
    for k in &report.ks {
        let s = &pooled.per_k[k];
        let _ = writeln!(
            out,
            "{} F@{k} = {:.6} MAP@{k} = {:.6}",
            pooled.dataset, s.f_measure, s.average_precision
        );
    }
}

fn report_files(report: &EvalReport) -> [(&'static str, String); 3] {
    [
        (REPORT_TSV_FILE, report.to_tsv()),
        (REPORT_JSON_FILE, report.to_json()),
        (ENTITY_SCORES_FILE, report.per_entity_tsv()),
    ]
}

fn run_eval(args: &EvalArgs, out: &mut impl Write) -> Result<(), CliError> {
    let ks = parse_k_list(&args.ks)?;
    require_file(&args.summaries)?;
    let datasets = load_datasets(&args.golds)?;
    let records = read_jsonl(open(&args.summaries)?).map_err(data)?;
    let report = evaluate_records(&records, &datasets, &ks, args.pooled)?;
    let files = report_files(&report);
    write_files(
        &args.output_dir,
        &files
            .iter()
            .map(|(n, c)| (*n, c.as_str()))
            .collect::<Vec<_>>(),
    )?;
    print_report(out, &report);
    Ok(())
}

fn run_pipeline(args: &PipelineArgs, out: &mut impl Write) -> Result<(), CliError> {
    let config = RunConfig::resolve(&args.run)?;
    config.check_inputs()?;
    let datasets = load_datasets(&args.golds)?;
    let corpus = load_corpus(
        &config.input_path,
        config.category_map_path.as_deref(),
        config.enrichment_mode,
    )?;
    print_dims(out, &corpus);
    let trained = train(&config, &corpus)?;
    let k = *config.k_list.last().expect("k list is non-empty");
    let records = summarize_records(&trained.model, &corpus, &[], k)?;
    let report = if datasets.is_empty() {
        None
    } else {
        Some(evaluate_records(
            &records,
            &datasets,
            &config.k_list,
            args.pooled,
        )?)
    };

    let jsonl = write_jsonl(&records);
    let tsv = write_tsv(&records);
    let mut files: Vec<(&str, String)> = vec![
        (MODEL_FILE, trained.model_text),
        (STATS_FILE, trained.stats_tsv),
        (TRAIN_LOG_FILE, trained.log_tsv),
        (SUMMARIES_FILE, jsonl),
        (SUMMARIES_TSV_FILE, tsv),
    ];
    if let Some(r) = &report {
        files.extend(report_files(r));
    }
    write_files(
        &config.output_dir,
        &files
            .iter()
            .map(|(n, c)| (*n, c.as_str()))
            .collect::<Vec<_>>(),
    )?;
    if let Some(r) = &report {
        print_report(out, r);
    }
    Ok(())
}

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Train(a) => run_train(a, out),
        Command::Summarize(a) => run_summarize(a),
        Command::Eval(a) => run_eval(a, out),
        Command::Pipeline(a) => run_pipeline(a, out),
    }
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `mpsum help` for usage");
            }
            e.exit_code()
        }
    }
}
