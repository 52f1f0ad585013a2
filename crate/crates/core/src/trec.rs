//! TREC run and qrels file formats.
//!
//! Runs: `qid Q0 docid rank score tag`, single-space separated, score with six
//! decimals. Qrels: `qid 0 docid gain`, gain in shortest round-trip decimal.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::eval::Qrels;
use crate::query::{RankedList, Run, ScoredDoc};
use crate::{Error, Result};

fn check_token(kind: &str, value: &str) -> Result<()> {
    if value.is_empty() || value.chars().any(char::is_whitespace) {
        return Err(Error::Format(format!(
            "{kind} `{value}` cannot be written to a TREC file (empty or contains whitespace)"
        )));
    }
    Ok(())
}

pub fn format_run(run: &Run) -> Result<String> {
    check_token("run tag", &run.tag)?;
    let mut out = String::new();
    for (qid, list) in &run.lists {
        check_token("query id", qid)?;
        for (i, d) in list.iter().enumerate() {
            check_token("document id", &d.id)?;
            writeln!(out, "{qid} Q0 {} {} {:.6} {}", d.id, i + 1, d.score, run.tag)
                .expect("writing to a String cannot fail");
        }
    }
    Ok(out)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Parses a run, ordering each query's entries by rank. Ranks must be
/// contiguous from 1 and scores non-increasing.
pub fn parse_run(text: &str, origin: &Path) -> Result<Run> {
    let mut tag: Option<String> = None;
    let mut raw: BTreeMap<String, Vec<(usize, usize, ScoredDoc)>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 6 {
            return Err(parse_err(
                origin,
                line_no,
                format!("expected 6 columns, got {}", cols.len()),
            ));
        }
        let rank: usize = cols[3]
            .parse()
            .map_err(|_| parse_err(origin, line_no, format!("bad rank `{}`", cols[3])))?;
        let score: f64 = cols[4]
            .parse()
            .map_err(|_| parse_err(origin, line_no, format!("bad score `{}`", cols[4])))?;
        if !score.is_finite() {
            return Err(parse_err(origin, line_no, "score must be finite"));
        }
        tag.get_or_insert_with(|| cols[5].to_string());
        raw.entry(cols[0].to_string())
            .or_default()
            .push((rank, line_no, ScoredDoc::new(cols[2], score)));
    }

    let mut run = Run::new(tag.unwrap_or_else(|| "run".to_string()));
    for (qid, mut entries) in raw {
        entries.sort_by_key(|e| e.0);
        for (expected, (rank, line_no, _)) in entries.iter().enumerate() {
            if *rank != expected + 1 {
                return Err(parse_err(
                    origin,
                    *line_no,
                    format!("query `{qid}`: ranks must be contiguous from 1"),
                ));
            }
        }
        let list: RankedList = entries.into_iter().map(|e| e.2).collect();
        list.check()
            .map_err(|e| Error::Format(format!("{}: query `{qid}`: {e}", origin.display())))?;
        run.lists.insert(qid, list);
    }
    Ok(run)
}

pub fn write_run(path: &Path, run: &Run) -> Result<()> {
    fs::write(path, format_run(run)?).map_err(|e| Error::io(path, e))
}

pub fn read_run(path: &Path) -> Result<Run> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run(&text, path)
}

pub fn format_qrels(qrels: &Qrels) -> Result<String> {
    let mut out = String::new();
    for (qid, judged) in qrels.queries() {
        check_token("query id", qid)?;
        for (doc, gain) in judged {
            check_token("document id", doc)?;
            writeln!(out, "{qid} 0 {doc} {gain}").expect("writing to a String cannot fail");
        }
    }
    Ok(out)
}

pub fn parse_qrels(text: &str, origin: &Path) -> Result<Qrels> {
    let mut qrels = Qrels::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(parse_err(
                origin,
                line_no,
                format!("expected 4 columns, got {}", cols.len()),
            ));
        }
        let gain: f64 = cols[3]
            .parse()
            .map_err(|_| parse_err(origin, line_no, format!("bad gain `{}`", cols[3])))?;
        qrels
            .insert(cols[0], cols[2], gain)
            .map_err(|e| parse_err(origin, line_no, e.to_string()))?;
    }
    Ok(qrels)
}

pub fn write_qrels(path: &Path, qrels: &Qrels) -> Result<()> {
    fs::write(path, format_qrels(qrels)?).map_err(|e| Error::io(path, e))
}

pub fn read_qrels(path: &Path) -> Result<Qrels> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_qrels(&text, path)
}
