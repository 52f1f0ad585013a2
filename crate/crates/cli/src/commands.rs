use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use dsrec_core::corpus::{
    apply_translations, build_topic_vocabulary, expand_topics, load_datasets, load_publications, write_jsonl,
    Rejection, TranslationSummary, TranslationTable,
};
use dsrec_core::eval::{build_pseudo_qrels, evaluate_run, format_comparison, load_candidates, MetricReport};
use dsrec_core::index::{FieldSchema, InvertedIndex};
use dsrec_core::lab::{
    aggregate, position_click_histogram, read_session_log, simulate_lab, write_session_log, Impressions,
};
use dsrec_core::query::precompute_all;
use dsrec_core::rerank::{rerank_pipeline, ClickLog, EmbeddingStore};
use dsrec_core::synth::{synth_corpus, SynthConfig};
use dsrec_core::trec::{read_run, write_qrels, write_run};
use serde::Serialize;

use crate::config::{require, PipelineConfig};
use crate::error::{CliError, CliResult};
use crate::{ExpandArgs, IndexArgs, IngestArgs, PretestArgs, RecommendArgs, ReportArgs, SimulateArgs, SynthArgs};

fn emit(out: &mut dyn Write, text: impl AsRef<str>) -> CliResult<()> {
    out.write_all(text.as_ref().as_bytes())
        .map_err(|e| CliError::Internal(format!("cannot write output: {e}")))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| dsrec_core::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| dsrec_core::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct FileReport {
    accepted: usize,
    rejections: Vec<Rejection>,
}

#[derive(Serialize)]
struct TranslationReport {
    rejected_lines: Vec<Rejection>,
    publications: TranslationSummary,
    datasets: TranslationSummary,
    /// Entries whose id matches no publication or dataset.
    unmatched: usize,
}

#[derive(Serialize)]
struct IngestReport {
    publications: FileReport,
    datasets: FileReport,
    translations: Option<TranslationReport>,
}

pub fn ingest(config: &PipelineConfig, args: &IngestArgs, out: &mut dyn Write) -> CliResult<()> {
    let pubs_path = require(&args.publications, &config.paths.publications, "publications")?;
    let data_path = require(&args.datasets, &config.paths.datasets, "datasets")?;
    let pubs = load_publications(&pubs_path)?;
    let datasets = load_datasets(&data_path)?;

    let (mut pub_records, mut data_records) = (pubs.records, datasets.records);
    let mut translations = None;
    if let Some(path) = args.translations.clone().or_else(|| config.paths.translations.clone()) {
        let (table, rejected_lines) = TranslationTable::load(&path)?;
        let (p, ps) = apply_translations(pub_records, &table);
        let (d, ds) = apply_translations(data_records, &table);
        let known: HashSet<&str> = p
            .iter()
            .map(|r| r.id.as_str())
            .chain(d.iter().map(|r| r.id.as_str()))
            .collect();
        let unmatched = table.entries.iter().filter(|e| !known.contains(e.id.as_str())).count();
        translations = Some(TranslationReport {
            rejected_lines,
            publications: ps,
            datasets: ds,
            unmatched,
        });
        pub_records = p;
        data_records = d;
    }

    create_dir(&args.out_dir)?;
    write_jsonl(&args.out_dir.join("publications.jsonl"), &pub_records)?;
    write_jsonl(&args.out_dir.join("datasets.jsonl"), &data_records)?;
    let report = IngestReport {
        publications: FileReport {
            accepted: pub_records.len(),
            rejections: pubs.rejections,
        },
        datasets: FileReport {
            accepted: data_records.len(),
            rejections: datasets.rejections,
        },
        translations,
    };
    write_file(&args.out_dir.join("ingest_report.json"), &to_json(&report)?)?;

    emit(
        out,
        format!(
            "publications: {} accepted, {} rejected\ndatasets: {} accepted, {} rejected\n",
            report.publications.accepted,
            report.publications.rejections.len(),
            report.datasets.accepted,
            report.datasets.rejections.len()
        ),
    )?;
    if let Some(t) = &report.translations {
        emit(
            out,
            format!(
                "translations: {} applied, {} already present, {} unmatched, {} rejected lines\n",
                t.publications.applied + t.datasets.applied,
                t.publications.already_present + t.datasets.already_present,
                t.unmatched,
                t.rejected_lines.len()
            ),
        )?;
    }
    Ok(())
}

pub fn expand(config: &PipelineConfig, args: &ExpandArgs, out: &mut dyn Write) -> CliResult<()> {
    let pubs = load_publications(&require(
        &args.publications,
        &config.paths.publications,
        "publications",
    )?)?;
    let datasets = load_datasets(&require(&args.datasets, &config.paths.datasets, "datasets")?)?;
    let vocab = build_topic_vocabulary(&pubs.records, &datasets.records);
    let (expanded, report) = expand_topics(datasets.records, &vocab);
    write_jsonl(&args.out, &expanded)?;
    let json = to_json(&report)?;
    match &args.report {
        Some(path) => {
            write_file(path, &json)?;
            let (de, en) = vocab.len();
            emit(
                out,
                format!(
                    "vocabulary: {de} de, {en} en\nassigned: {} de, {} en\n",
                    report.assigned.de, report.assigned.en
                ),
            )
        }
        None => emit(out, json),
    }
}

pub fn index(config: &PipelineConfig, args: &IndexArgs, out: &mut dyn Write) -> CliResult<()> {
    let datasets = load_datasets(&require(&args.datasets, &config.paths.datasets, "datasets")?)?;
    let target = require(&args.out, &config.paths.index, "index")?;
    let schema = FieldSchema::full(config.query.stemming);
    let index = InvertedIndex::build(&datasets.records, schema, config.bm25)?;
    index.save(&target)?;
    emit(
        out,
        format!(
            "indexed {} datasets ({} rejected lines) into {}\n",
            index.len(),
            datasets.rejections.len(),
            target.display()
        ),
    )
}

pub fn recommend(config: &PipelineConfig, args: &RecommendArgs, out: &mut dyn Write) -> CliResult<()> {
    let index = InvertedIndex::load(&require(&args.index, &config.paths.index, "index")?)?;
    let pubs = load_publications(&require(
        &args.publications,
        &config.paths.publications,
        "publications",
    )?)?;
    let top_k = args.top_k.unwrap_or(config.top_k);
    let (baseline, summary) = precompute_all(&index, &pubs.records, &config.query, top_k)?;
    let run = if args.no_rerank {
        baseline
    } else {
        let clicks = match args.clicks.clone().or_else(|| config.paths.clicks.clone()) {
            Some(p) => ClickLog::load(&p)?,
            None => ClickLog::default(),
        };
        let store = match args.embeddings.clone().or_else(|| config.paths.embeddings.clone()) {
            Some(p) => EmbeddingStore::load(&p)?,
            None => EmbeddingStore::empty(),
        };
        let (run, rs) = rerank_pipeline(&baseline, &clicks, &store, &config.rerank)?;
        emit(
            out,
            format!(
                "rerank: {} click boosts, {} embedding boosts, {} seeds without embedding\n",
                rs.click_boosted, rs.embedding_boosted, rs.missing_seeds
            ),
        )?;
        run
    };
    write_run(&args.out, &run)?;
    emit(
        out,
        format!(
            "{} publications, {} without query terms, {} with empty rankings\n",
            summary.queries, summary.empty_queries, summary.empty_rankings
        ),
    )
}

fn run_label(path: &Path, taken: &mut HashSet<String>) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    let mut label = stem.clone();
    let mut n = 2;
    while !taken.insert(label.clone()) {
        label = format!("{stem}-{n}");
        n += 1;
    }
    label
}

/// Evaluates each run; the labels are file stems made unique.
pub fn pretest_reports(candidates: &Path, runs: &[PathBuf]) -> CliResult<(Vec<(String, MetricReport)>, String)> {
    let lists = load_candidates(candidates)?;
    let (qrels, summary) = build_pseudo_qrels(&lists);
    let mut taken = HashSet::new();
    let mut reports = Vec::new();
    for path in runs {
        let run = read_run(path)?;
        reports.push((run_label(path, &mut taken), evaluate_run(&run, &qrels)?));
    }
    let note = format!(
        "pseudo qrels: {} queries, {} judgments, {} rejected entries, {} omitted queries\n",
        qrels.query_count(),
        qrels.len(),
        summary.rejected_entries,
        summary.omitted_queries
    );
    if reports.is_empty() {
        return Err(CliError::usage("at least one --run is required"));
    }
    Ok((reports, note))
}

pub fn pretest(config: &PipelineConfig, args: &PretestArgs, out: &mut dyn Write) -> CliResult<()> {
    let candidates = require(&args.candidates, &config.paths.candidates, "candidates")?;
    if let Some(path) = &args.qrels_out {
        let (qrels, _) = build_pseudo_qrels(&load_candidates(&candidates)?);
        write_qrels(path, &qrels)?;
    }
    let (reports, note) = pretest_reports(&candidates, &args.runs)?;
    if args.json {
        let map: std::collections::BTreeMap<&str, &MetricReport> =
            reports.iter().map(|(l, r)| (l.as_str(), r)).collect();
        return emit(out, to_json(&map)?);
    }
    emit(out, note)?;
    if let [(_, single)] = reports.as_slice() {
        emit(out, single.to_text())
    } else {
        let refs: Vec<(String, &MetricReport)> = reports.iter().map(|(l, r)| (l.clone(), r)).collect();
        emit(out, format_comparison(&refs))
    }
}

pub fn simulate(config: &PipelineConfig, args: &SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    let run_a = read_run(&args.run_a)?;
    let run_b = read_run(&args.run_b)?;
    let mut taken = HashSet::new();
    let name_a = args
        .name_a
        .clone()
        .unwrap_or_else(|| run_label(&args.run_a, &mut taken));
    let name_b = args
        .name_b
        .clone()
        .unwrap_or_else(|| run_label(&args.run_b, &mut taken));
    let mut lab = config.lab.clone();
    if let Some(n) = args.sessions {
        lab.sessions = n;
    }
    if let Some(n) = args.page_size {
        lab.page_size = n;
    }
    let outcomes = simulate_lab(&run_a, &run_b, (&name_a, &name_b), &lab)?;
    if let Some(path) = &args.log {
        write_session_log(path, &outcomes)?;
    }
    let report = aggregate(&outcomes, lab.impressions);
    if let Some(path) = &args.report {
        write_file(path, &(report.to_json() + "\n"))?;
    }
    let hist = position_click_histogram(&outcomes, lab.page_size)?;
    emit(out, report.to_text())?;
    emit(out, format!("clicks by position: {hist:?}\n"))
}

fn parse_impressions(s: &str) -> CliResult<Impressions> {
    if s == "rows" {
        return Ok(Impressions::RowsShown);
    }
    s.parse()
        .map(Impressions::PerSession)
        .map_err(|_| CliError::usage(format!("--impressions expects `rows` or a count, got `{s}`")))
}

pub fn report(config: &PipelineConfig, args: &ReportArgs, out: &mut dyn Write) -> CliResult<()> {
    let impressions = parse_impressions(&args.impressions)?;
    let outcomes = read_session_log(&args.log)?;
    let report = aggregate(&outcomes, impressions);
    if args.json {
        return emit(out, report.to_json() + "\n");
    }
    let page = outcomes
        .iter()
        .flat_map(|o| o.clicks.iter().map(|c| c.position))
        .max()
        .unwrap_or(0)
        .max(config.lab.page_size);
    let hist = position_click_histogram(&outcomes, page)?;
    emit(out, report.to_text())?;
    emit(out, format!("clicks by position: {hist:?}\n"))
}

pub fn synth(config: &PipelineConfig, args: &SynthArgs, out: &mut dyn Write) -> CliResult<()> {
    let corpus = synth_corpus(&SynthConfig {
        publications: args.publications,
        datasets: args.datasets,
        seed: config.lab.seed,
        ..Default::default()
    })?;
    create_dir(&args.out_dir)?;
    write_jsonl(&args.out_dir.join("publications.jsonl"), &corpus.publications)?;
    write_jsonl(&args.out_dir.join("datasets.jsonl"), &corpus.datasets)?;
    write_jsonl(&args.out_dir.join("candidates.jsonl"), &corpus.candidates)?;
    corpus.embeddings.save(&args.out_dir.join("embeddings.tsv"))?;
    emit(
        out,
        format!(
            "wrote {} publications, {} datasets to {}\n",
            corpus.publications.len(),
            corpus.datasets.len(),
            args.out_dir.display()
        ),
    )
}
