//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runtime limits are checked alongside the numeric tolerances.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use dsrec_core::corpus::{build_topic_vocabulary, expand_topics};
use dsrec_core::eval::{average_precision, evaluate_run, ndcg, Qrels};
use dsrec_core::index::{Bm25Params, InvertedIndex, Language};
use dsrec_core::lab::{
    aggregate, credit_session, position_click_histogram, session_rng, simulate_session, team_draft_interleave, Click,
    ClickModel, Impressions, InterleavedRanking, SessionOutcome, Slot, SystemStats, Team, OBSERVED_POSITION_CLICKS,
};
use dsrec_core::query::{RankedList, Run, ScoredDoc};
use dsrec_core::rerank::{
    click_boost, knn_neighbors, rerank_pipeline, ClickEvent, ClickLog, EmbeddingStore, RerankConfig,
};
use dsrec_core::synth::{synth_corpus, SynthConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ------------------------------------------------------------ lab tallies

fn slots(teams: &[Team]) -> InterleavedRanking {
    InterleavedRanking {
        slots: teams
            .iter()
            .enumerate()
            .map(|(i, t)| Slot {
                id: format!("d{i}"),
                team: *t,
            })
            .collect(),
    }
}

/// A session showing `teams`, with clicks on the listed 1-based positions.
fn session(id: u64, a: &str, b: &str, teams: &[Team], clicked: &[usize]) -> SessionOutcome {
    let ranking = slots(teams);
    let clicks: Vec<Click> = clicked
        .iter()
        .map(|&p| Click {
            position: p,
            id: ranking.slots[p - 1].id.clone(),
            team: ranking.slots[p - 1].team,
        })
        .collect();
    let ids: Vec<&str> = clicks.iter().map(|c| c.id.as_str()).collect();
    let credit = credit_session(&ranking, &ids).expect("clicked ids are shown");
    SessionOutcome {
        session: id,
        qid: "p".into(),
        system_a: a.into(),
        system_b: b.into(),
        ranking,
        clicks,
        credit,
    }
}

struct Block {
    wins_single: usize,
    wins_double: usize,
    losses: usize,
    ties: usize,
    sessions: usize,
    rows: usize,
}

/// Builds a session log for one experimental system against the baseline.
/// Winning sessions click only experimental rows (two of them for
/// `wins_double`), losing sessions one baseline row, ties one of each.
fn block(a: &str, b: &str, shape: &Block, next_id: &mut u64) -> Vec<SessionOutcome> {
    use Team::{A, B};
    let mut out = Vec::new();
    let mut push = |teams: &[Team], clicks: &[usize], out: &mut Vec<SessionOutcome>| {
        out.push(session(*next_id, a, b, teams, clicks));
        *next_id += 1;
    };
    for _ in 0..shape.wins_single {
        push(&[A, B], &[1], &mut out);
    }
    for _ in 0..shape.wins_double {
        push(&[A, B, A], &[1, 3], &mut out);
    }
    for _ in 0..shape.losses {
        push(&[A, B], &[2], &mut out);
    }
    for _ in 0..shape.ties {
        push(&[A, B], &[1, 2], &mut out);
    }
    let rows_used: usize = out.iter().map(|s| s.ranking.len()).sum();
    let remaining_sessions = shape.sessions - out.len();
    let remaining_rows = shape.rows - rows_used;
    let two_row = remaining_rows - remaining_sessions;
    for i in 0..remaining_sessions {
        let teams: &[Team] = if i < two_row { &[A, B] } else { &[A] };
        push(teams, &[], &mut out);
    }
    out
}

fn lab_report_arithmetic() -> Check {
    let direct = [((51, 68, 2), 0.43), ((26, 25, 1), 0.51), ((42, 26, 1), 0.62)];
    for ((w, l, t), want) in direct {
        let s = SystemStats {
            wins: w,
            losses: l,
            ties: t,
            ..Default::default()
        };
        let got = s.outcome().ok_or("outcome undefined")?;
        ensure((got - want).abs() <= 0.005, || format!("outcome({w},{l},{t}) = {got}"))?;
    }
    for ((c, i), want) in [((53, 6034), 0.0088), ((27, 2937), 0.0092), ((45, 3097), 0.0145)] {
        let s = SystemStats {
            clicks: c,
            impressions: i,
            ..Default::default()
        };
        let got = s.ctr().ok_or("ctr undefined")?;
        ensure((got - want).abs() <= 0.0001, || format!("ctr({c},{i}) = {got}"))?;
    }

    // Replay through aggregate() with a session log built to hit the same totals.
    let mut id = 0;
    let mut log = block(
        "system_one",
        "baseline",
        &Block {
            wins_single: 40,
            wins_double: 2,
            losses: 26,
            ties: 1,
            sessions: 1759,
            rows: 3097,
        },
        &mut id,
    );
    log.extend(block(
        "system_two",
        "baseline",
        &Block {
            wins_single: 26,
            wins_double: 0,
            losses: 25,
            ties: 1,
            sessions: 1529,
            rows: 2937,
        },
        &mut id,
    ));
    let report = aggregate(&log, Impressions::RowsShown);
    let expect = [
        ("baseline", (51, 68, 2, 3288, 6034, 53), 0.43, 0.0088),
        ("system_two", (26, 25, 1, 1529, 2937, 27), 0.51, 0.0092),
        ("system_one", (42, 26, 1, 1759, 3097, 45), 0.62, 0.0145),
    ];
    for (name, (w, l, t, s, i, c), outcome, ctr) in expect {
        let got = report.get(name).ok_or_else(|| format!("{name} missing"))?;
        let tuple = (
            got.wins,
            got.losses,
            got.ties,
            got.sessions,
            got.impressions,
            got.clicks,
        );
        ensure(tuple == (w, l, t, s, i, c), || format!("{name}: {tuple:?}"))?;
        ensure((got.outcome().unwrap() - outcome).abs() <= 0.005, || {
            format!("{name} outcome")
        })?;
        ensure((got.ctr().unwrap() - ctr).abs() <= 0.0001, || format!("{name} ctr"))?;
    }
    let empty = aggregate(&[], Impressions::RowsShown);
    ensure(empty.sessions == 0 && empty.to_text().contains("sessions: 0"), || {
        "empty report".into()
    })?;
    Ok(format!("3 outcomes, 3 CTRs, replayed log of {} sessions", log.len()))
}

fn position_click_replay() -> Check {
    let mut log = Vec::new();
    for (p, &count) in OBSERVED_POSITION_CLICKS.iter().enumerate() {
        for _ in 0..count {
            log.push(session(log.len() as u64, "x", "y", &[Team::A; 6], &[p + 1]));
        }
    }
    let hist = position_click_histogram(&log, 6).map_err(|e| e.to_string())?;
    ensure(hist == OBSERVED_POSITION_CLICKS, || format!("histogram {hist:?}"))?;

    let model = ClickModel::default();
    let a: Vec<String> = (0..6).map(|i| format!("a{i}")).collect();
    let b: Vec<String> = (0..6).map(|i| format!("b{i}")).collect();
    let sessions = 100_000u64;
    let mut counts = [0u64; 6];
    for s in 0..sessions {
        let mut rng = session_rng(2024, s);
        let page = team_draft_interleave(&a, &b, 6, &mut rng);
        let (clicks, _) = simulate_session(&page, &model, &mut rng).map_err(|e| e.to_string())?;
        for c in clicks {
            counts[c.position - 1] += 1;
        }
    }
    let mut worst: f64 = 0.0;
    for (c, p) in counts.iter().zip(model.probabilities()) {
        worst = worst.max((*c as f64 / sessions as f64 - p).abs());
    }
    ensure(worst <= 0.01, || format!("max deviation {worst}"))?;
    let total: u64 = counts.iter().sum();
    let observed: u64 = OBSERVED_POSITION_CLICKS.iter().sum();
    let share_dev = counts
        .iter()
        .zip(OBSERVED_POSITION_CLICKS)
        .map(|(c, o)| (*c as f64 / total as f64 - o as f64 / observed as f64).abs())
        .fold(0.0, f64::max);
    Ok(format!(
        "histogram exact; max per-position deviation {worst:.5}; click-share deviation {share_dev:.4}"
    ))
}

fn bm25_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut compared = 0;
    for case in 0..200 {
        let docs = common::random_corpus(&mut rng, 20);
        let schema = common::random_schema(&mut rng, 8);
        let params = Bm25Params::new(rng.random_range(0.2..2.5), rng.random_range(0.0..=1.0)).unwrap();
        let index = InvertedIndex::build(&docs, schema.clone(), params).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let query = common::random_query(&mut rng, &schema);
            let got = index.search(&query, 25).map_err(|e| e.to_string())?;
            let want = common::brute_force_search(&docs, &schema, params, &query, 25);
            let got_ids: Vec<&str> = got.ids().collect();
            let want_ids: Vec<&str> = want.iter().map(|(d, _)| d.as_str()).collect();
            ensure(got_ids == want_ids, || format!("case {case}: ranking differs"))?;
            for (g, (_, w)) in got.iter().zip(&want) {
                ensure((g.score - w).abs() <= 1e-9, || {
                    format!("case {case}: {} vs {w}", g.score)
                })?;
            }
            compared += got.len();
        }
    }
    Ok(format!("200 corpora x 5 queries, {compared} scored documents"))
}

fn metric_oracle() -> Check {
    let mut q = Qrels::default();
    q.insert("q", "d1", 1.0).unwrap();
    q.insert("q", "d3", 1.0).unwrap();
    let r: RankedList = ["d1", "d2", "d3"]
        .iter()
        .enumerate()
        .map(|(i, d)| ScoredDoc::new(*d, 3.0 - i as f64))
        .collect();
    let ap = average_precision(&r, &q, "q").unwrap();
    ensure((ap - 5.0 / 6.0).abs() < 1e-9, || format!("AP {ap}"))?;
    let mut g = Qrels::default();
    g.insert("q", "d1", 3.0).unwrap();
    g.insert("q", "d2", 0.0).unwrap();
    g.insert("q", "d3", 1.0).unwrap();
    let n = ndcg(&r, &g, "q").unwrap();
    ensure((n - 3.5 / (3.0 + 1.0 / 3f64.log2())).abs() < 1e-9, || {
        format!("nDCG {n}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x3e7);
    let mut queries = 0;
    for case in 0..100 {
        let (run, qrels) = common::random_run_and_qrels(&mut rng, 10, 50);
        let expected: Vec<(String, common::OracleMetrics)> = run
            .lists
            .iter()
            .filter_map(|(q, l)| {
                let ids: Vec<String> = l.ids().map(str::to_string).collect();
                common::oracle_metrics(&ids, qrels.judged(q)?).map(|m| (q.clone(), m))
            })
            .collect();
        let Ok(report) = evaluate_run(&run, &qrels) else {
            ensure(expected.is_empty(), || {
                format!("case {case}: library found nothing to evaluate")
            })?;
            continue;
        };
        ensure(report.query_count == expected.len(), || {
            format!("case {case}: query count")
        })?;
        for (qid, want) in &expected {
            let got = &report.queries[qid];
            let pairs = [
                (got.map, want.map),
                (got.ndcg, want.ndcg),
                (got.p5, want.p5),
                (got.p10, want.p10),
                (got.r10, want.r10),
                (got.rel_ret, want.rel_ret),
            ];
            for (gv, wv) in pairs {
                ensure((gv - wv).abs() <= 1e-6, || format!("case {case} {qid}: {gv} vs {wv}"))?;
            }
            queries += 1;
        }
    }
    Ok(format!(
        "hand cases AP={ap:.4} nDCG={n:.4}; {queries} random queries agree"
    ))
}

fn interleaving() -> Check {
    let a: Vec<String> = (0..10).map(|i| format!("a{i}")).collect();
    let b: Vec<String> = (0..10).map(|i| format!("b{i}")).collect();
    let trials = 10_000u64;
    let mut first_a = 0;
    for t in 0..trials {
        let mut rng = session_rng(0x17e, t);
        let r = team_draft_interleave(&a, &b, 6, &mut rng);
        let ids: HashSet<&str> = r.ids().collect();
        ensure(ids.len() == r.len(), || format!("trial {t}: duplicate"))?;
        ensure(r.team_count(Team::A).abs_diff(r.team_count(Team::B)) <= 1, || {
            format!("trial {t}: team imbalance")
        })?;
        if r.slots.first().map(|s| s.team) == Some(Team::A) {
            first_a += 1;
        }
        let same = team_draft_interleave(&a, &a, 6, &mut rng);
        ensure(same.ids().eq(a.iter().take(6).map(String::as_str)), || {
            format!("trial {t}: identical inputs")
        })?;
    }
    let freq = first_a as f64 / trials as f64;
    ensure((freq - 0.5).abs() <= 0.02, || format!("first-pick frequency {freq}"))?;
    Ok(format!("10000 trials, first pick A {freq:.4}"))
}

fn rerank_contracts() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e);
    let mut run = Run::new("base");
    for q in 0..1000 {
        let n = rng.random_range(0..15);
        let mut list: RankedList = (0..n)
            .map(|i| {
                ScoredDoc::new(
                    format!("d{}", rng.random_range(0..100) * 20 + i),
                    rng.random_range(0..6) as f64,
                )
            })
            .collect();
        list.sort_canonical();
        run.lists.insert(format!("p{q:04}"), list);
    }
    let (same, _) = rerank_pipeline(
        &run,
        &ClickLog::default(),
        &EmbeddingStore::empty(),
        &RerankConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(same == run, || "identity violated".into())?;

    let mut events = Vec::new();
    for (q, list) in &run.lists {
        for d in list.iter().filter(|_| rng.random_bool(0.25)) {
            events.push(ClickEvent {
                session: "s".into(),
                qid: q.clone(),
                docid: d.id.clone(),
                position: 1,
                ts: String::new(),
            });
        }
    }
    let log = ClickLog::new(events).map_err(|e| e.to_string())?;
    let mut boosted = 0;
    for (q, list) in &run.lists {
        let out = click_boost(list, &log, q, &RerankConfig::default());
        let hits: HashSet<&str> = out.boosted.iter().map(String::as_str).collect();
        let flags: Vec<bool> = out.ranking.ids().map(|d| hits.contains(d)).collect();
        ensure(flags.windows(2).all(|w| w[0] || !w[1]), || {
            format!("{q}: clicked below non-boosted")
        })?;
        boosted += hits.len();
    }

    let mut store = EmbeddingStore::new(8).unwrap();
    let ids: Vec<String> = (0..50).map(|i| format!("v{i:02}")).collect();
    for id in &ids {
        store
            .insert(id.clone(), (0..8).map(|_| rng.random_range(-1.0..1.0)).collect())
            .unwrap();
    }
    for seed in &ids {
        let cands: Vec<&str> = ids.iter().map(String::as_str).filter(|c| c != seed).collect();
        for k in [1, 5, 49] {
            let got = knn_neighbors(&store, seed, k, &cands).map_err(|e| e.to_string())?;
            ensure(got == common::knn_oracle(&store, seed, k, &cands), || {
                format!("knn {seed} k={k}")
            })?;
        }
    }
    Ok(format!(
        "identity on 1000 queries; {boosted} clicked docs on top; knn 50x3 agree"
    ))
}

fn topic_expansion() -> Check {
    let corpus = synth_corpus(&SynthConfig {
        publications: 40,
        datasets: 10,
        seed: 3,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let vocab = build_topic_vocabulary(&corpus.publications, &corpus.datasets);
    let want = common::expansion_oracle(&corpus.datasets, &vocab);
    let (_, report) = expand_topics(corpus.datasets, &vocab);
    let mut got: Vec<(String, Language, String)> = report
        .assignments
        .iter()
        .map(|a| (a.dataset_id.clone(), a.lang, a.term.clone()))
        .collect();
    got.sort();
    ensure(got == want, || format!("{got:?} vs {want:?}"))?;
    let de = want.iter().filter(|a| a.1 == Language::De).count();
    let en = want.len() - de;
    ensure(report.assigned.de == de && report.assigned.en == en, || {
        "counts differ".into()
    })?;
    Ok(format!("{} assignments ({de} de, {en} en)", want.len()))
}

// ------------------------------------------------------------ CLI runs

fn dsrec(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_dsrec"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("dsrec {args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 temp path")
}

fn pipeline_once(root: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let raw = root.join("raw");
    let corpus = root.join("corpus");
    dsrec(&[
        "--seed",
        "11",
        "synth",
        "--out-dir",
        p(&raw),
        "--publications",
        "100",
        "--datasets",
        "200",
    ])?;
    dsrec(&[
        "ingest",
        "--publications",
        p(&raw.join("publications.jsonl")),
        "--datasets",
        p(&raw.join("datasets.jsonl")),
        "--out-dir",
        p(&corpus),
    ])?;
    let index = root.join("index.json");
    dsrec(&[
        "index",
        "--datasets",
        p(&corpus.join("datasets.jsonl")),
        "--out",
        p(&index),
    ])?;
    let pubs = corpus.join("publications.jsonl");
    let run = root.join("dsrec.run");
    let base = root.join("baseline.run");
    dsrec(&[
        "recommend",
        "--index",
        p(&index),
        "--publications",
        p(&pubs),
        "--embeddings",
        p(&raw.join("embeddings.tsv")),
        "--out",
        p(&run),
    ])?;
    dsrec(&[
        "recommend",
        "--index",
        p(&index),
        "--publications",
        p(&pubs),
        "--no-rerank",
        "--out",
        p(&base),
    ])?;
    let report = root.join("report.json");
    dsrec(&[
        "--seed",
        "11",
        "simulate",
        "--run-a",
        p(&run),
        "--run-b",
        p(&base),
        "--sessions",
        "20000",
        "--report",
        p(&report),
    ])?;
    let read = |f: &Path| fs::read(f).map_err(|e| e.to_string());
    Ok((read(&run)?, read(&report)?))
}

fn determinism() -> Check {
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = pipeline_once(first.path())?;
    let b = pipeline_once(second.path())?;
    ensure(!a.0.is_empty(), || "empty run".into())?;
    ensure(a.0 == b.0, || "run files differ".into())?;
    ensure(a.1 == b.1, || "report files differ".into())?;
    let lines = a.0.iter().filter(|c| **c == b'\n').count();
    Ok(format!("run ({lines} lines) and report byte-identical"))
}

fn pretest_workflow() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = dir.path();
    let raw = root.join("raw");
    dsrec(&[
        "--seed",
        "5",
        "synth",
        "--out-dir",
        p(&raw),
        "--publications",
        "100",
        "--datasets",
        "200",
    ])?;
    let mut runs = Vec::new();
    for topic in ["0.3", "0.7"] {
        let cfg = root.join(format!("topic-{topic}.toml"));
        let boosts = ["topic", "topic_en", "topic_de", "ext_topic_de", "ext_topic_en"]
            .map(|f| format!("{f} = {topic}"))
            .join("\n");
        fs::write(&cfg, format!("[query.boosts]\n{boosts}\n")).map_err(|e| e.to_string())?;
        let index = root.join("index.json");
        dsrec(&[
            "--config",
            p(&cfg),
            "index",
            "--datasets",
            p(&raw.join("datasets.jsonl")),
            "--out",
            p(&index),
        ])?;
        let run = root.join(format!("topic-{topic}.run"));
        dsrec(&[
            "--config",
            p(&cfg),
            "recommend",
            "--index",
            p(&index),
            "--publications",
            p(&raw.join("publications.jsonl")),
            "--no-rerank",
            "--out",
            p(&run),
        ])?;
        runs.push(run);
    }
    let candidates = raw.join("candidates.jsonl");
    let table = dsrec(&[
        "pretest",
        "--candidates",
        p(&candidates),
        "--run",
        p(&runs[0]),
        "--run",
        p(&runs[1]),
    ])?;
    let lines: Vec<&str> = table.lines().filter(|l| !l.starts_with("pseudo qrels")).collect();
    ensure(lines.len() == 3, || format!("expected header + 2 rows:\n{table}"))?;
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    ensure(
        header == ["run", "map", "nDCG", "P@5", "P@10", "R@10", "rel_ret", "rel_ret_frac"],
        || format!("header {header:?}"),
    )?;
    let mut vectors = Vec::new();
    for (row, label) in lines[1..].iter().zip(["topic-0.3", "topic-0.7"]) {
        let cells: Vec<&str> = row.split_whitespace().collect();
        ensure(cells.len() == 8 && cells[0] == label, || format!("row {row}"))?;
        let values: Vec<f64> = cells[1..]
            .iter()
            .map(|c| c.parse::<f64>().map_err(|e| format!("{c}: {e}")))
            .collect::<Result<_, _>>()?;
        vectors.push(values);
    }
    ensure(vectors[0] != vectors[1], || "metric vectors identical".into())?;
    Ok(format!("map {:.4} vs {:.4}", vectors[0][0], vectors[1][0]))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("lab-report-arithmetic", Duration::from_secs(1), lab_report_arithmetic),
        ("position-click-replay", Duration::from_secs(10), position_click_replay),
        ("bm25-oracle", Duration::from_secs(30), bm25_oracle),
        ("metric-oracle", Duration::from_secs(10), metric_oracle),
        ("interleaving-properties", Duration::from_secs(10), interleaving),
        ("reranker-contracts", Duration::from_secs(10), rerank_contracts),
        ("topic-expansion-oracle", Duration::from_secs(10), topic_expansion),
        ("determinism-end-to-end", Duration::from_secs(60), determinism),
        ("pretest-workflow", Duration::from_secs(60), pretest_workflow),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?} > {limit:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS {name} [{elapsed:.2?} / {limit:?}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} [{elapsed:.2?} / {limit:?}] {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
