//! Command-line driver: load a graph, extract walks, train, export.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 input, parse,
//! connector or runtime error. Progress goes to stderr as `key=value` lines.

pub mod config;
pub mod grammar;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use clap::{CommandFactory, Parser};
use kgstroll::embedder::{write_word2vec_text, EmbedError};
use kgstroll::rdf_io::{is_valid_iri, parse_lenient, parse_ntriples, SparqlConnector};
use kgstroll::walker::WalkError;
use kgstroll::{fit_transform, FitResult, KnowledgeGraph, PipelineError, RemoteGraph, Term};
use thiserror::Error;

pub use config::{CliConfig, Flags, Input};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Pipeline(#[from] PipelineError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Input(_) => 2,
            CliError::Pipeline(e) => match e {
                PipelineError::Config(_) | PipelineError::Sampler { .. } => 1,
                PipelineError::Walk { source: WalkError::Graph(_), .. } => 2,
                PipelineError::Walk { .. } => 1,
                PipelineError::Embed { source: EmbedError::Config(_), .. } => 1,
                _ => 2,
            },
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Installs the stderr logger once; later calls are no-ops.
pub fn init_logging() {
    let _ = env_logger::Builder::new()
        .filter_level(log::LevelFilter::Info)
        .parse_env("KGSTROLL_LOG")
        .format(|buf, record| writeln!(buf, "{}", record.args()))
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let flags = match Flags::try_parse_from(argv) {
        Ok(f) => f,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&flags) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("\n{}", Flags::command().render_usage());
            }
            e.exit_code()
        }
    }
}

fn execute(flags: &Flags) -> Result<(), CliError> {
    let cfg = CliConfig::from_flags(flags)?;
    let pipeline = cfg.pipeline()?;
    if flags.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let started = Instant::now();
    let seeds = read_entities(cfg.entities.as_deref().expect("checked by pipeline()"))?;
    log::info!("entities total={}", seeds.len());
    let result = match cfg.input()? {
        Input::File(path) => {
            let g = load_graph(&path, &cfg)?;
            fit_transform(&g, &seeds, &pipeline)?
        }
        Input::Endpoint(url) => {
            let connector =
                SparqlConnector::new(url).with_bundle_size(cfg.bundle_size).with_cache_capacity(cfg.cache_capacity);
            let g = RemoteGraph::new(connector, cfg.skip_predicates.iter().cloned());
            let r = fit_transform(&g, &seeds, &pipeline)?;
            log::info!(
                "connector requests={} cache_hits={} cache_misses={}",
                g.connector().requests_issued(),
                g.connector().cache().hit_count(),
                g.connector().cache().miss_count()
            );
            r
        }
    };
    for m in &result.missing {
        log::warn!("missing entity={m}");
    }
    log::info!("entities done={} missing={}", seeds.len() - result.missing.len(), result.missing.len());
    write_outputs(&cfg, &result)?;
    log::info!(
        "done walks={} vocabulary={} seconds={:.3}",
        result.corpus_stats.walks_total,
        result.corpus_stats.distinct_tokens,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

/// One IRI per line; blank lines and `#` comments are ignored, angle
/// brackets are optional.
pub fn read_entities(path: &Path) -> Result<Vec<Term>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut seeds = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let iri = line.strip_prefix('<').and_then(|l| l.strip_suffix('>')).unwrap_or(line);
        if !is_valid_iri(iri) {
            return Err(CliError::Input(format!("{}: line {}: invalid IRI {iri:?}", path.display(), i + 1)));
        }
        seeds.push(Term::iri(iri));
    }
    Ok(seeds)
}

fn load_graph(path: &Path, cfg: &CliConfig) -> Result<KnowledgeGraph, CliError> {
    let reader = BufReader::new(File::open(path).map_err(|e| io_error(path, e))?);
    let triples = if cfg.lenient {
        let (triples, errors) = parse_lenient(reader);
        for e in &errors {
            log::warn!("skipped {}: {e}", path.display());
        }
        log::info!("parse skipped={}", errors.len());
        triples
    } else {
        parse_ntriples(reader).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    let n = triples.len();
    let g = KnowledgeGraph::build(triples, cfg.skip_predicates.iter().cloned());
    log::info!("graph triples={n} vertices={} edges={}", g.vertex_count(), g.edge_count());
    Ok(g)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn write_outputs(cfg: &CliConfig, result: &FitResult) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let mut w = create(path)?;
            write_word2vec_text(&result.model, &mut w).and_then(|_| w.flush()).map_err(|e| io_error(path, e))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_word2vec_text(&result.model, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))?;
        }
    }
    if let Some(path) = &cfg.literals_out {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &result.literals.to_json())
            .map_err(io::Error::from)
            .and_then(|_| writeln!(w))
            .and_then(|_| w.flush())
            .map_err(|e| io_error(path, e))?;
    }
    if let Some(path) = &cfg.walks_out {
        let mut w = create(path)?;
        write_walks(&mut w, cfg, result).and_then(|_| w.flush()).map_err(|e| io_error(path, e))?;
    }
    Ok(())
}

/// TSV rows: `<index>:<strategy>`, root token, space-separated walk tokens.
fn write_walks<W: Write>(w: &mut W, cfg: &CliConfig, result: &FitResult) -> io::Result<()> {
    let walkers = cfg.parsed_walkers().expect("validated");
    for (index, (walks, arg)) in result.corpora.iter().zip(&walkers).enumerate() {
        let name = grammar::strategy_name(&arg.walker);
        for walk in walks {
            writeln!(w, "{index}:{name}\t{}\t{}", walk.root.token(), walk.token_strs().join(" "))?;
        }
    }
    Ok(())
}
