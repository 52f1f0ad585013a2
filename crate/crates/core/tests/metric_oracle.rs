mod common;

use dsrec_core::eval::{average_precision, evaluate_run, ndcg, Qrels};
use dsrec_core::query::{RankedList, ScoredDoc};
use dsrec_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6
}

#[test]
fn evaluate_run_matches_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe7a1);
    let mut evaluated = 0;
    for case in 0..100 {
        let (run, qrels) = common::random_run_and_qrels(&mut rng, 10, 50);
        let expected: Vec<(String, common::OracleMetrics)> = run
            .lists
            .iter()
            .filter_map(|(q, list)| {
                let ids: Vec<String> = list.ids().map(str::to_string).collect();
                let judged = qrels.judged(q)?;
                common::oracle_metrics(&ids, judged).map(|m| (q.clone(), m))
            })
            .collect();
        let report = match evaluate_run(&run, &qrels) {
            Ok(r) => r,
            Err(Error::NoOverlappingQueries) => {
                assert!(expected.is_empty(), "case {case}");
                continue;
            }
            Err(e) => panic!("{e}"),
        };
        evaluated += 1;
        assert_eq!(report.query_count, expected.len());
        for (q, want) in &expected {
            let got = &report.queries[q];
            let pairs = [
                (got.map, want.map),
                (got.ndcg, want.ndcg),
                (got.p5, want.p5),
                (got.p10, want.p10),
                (got.r10, want.r10),
                (got.rel_ret, want.rel_ret),
            ];
            for (g, w) in pairs {
                assert!(close(g, w), "case {case} query {q}: {g} vs {w}");
            }
        }
        let n = expected.len() as f64;
        let mean_map = expected.iter().map(|(_, m)| m.map).sum::<f64>() / n;
        assert!(close(report.mean.map, mean_map));
    }
    assert!(evaluated > 50);
}

fn ranking(ids: &[&str]) -> RankedList {
    ids.iter()
        .enumerate()
        .map(|(i, d)| ScoredDoc::new(*d, (ids.len() - i) as f64))
        .collect()
}

#[test]
fn hand_cases() {
    let mut q = Qrels::default();
    q.insert("q", "d1", 1.0).unwrap();
    q.insert("q", "d3", 1.0).unwrap();
    let ap = average_precision(&ranking(&["d1", "d2", "d3"]), &q, "q").unwrap();
    assert!((ap - 5.0 / 6.0).abs() < 1e-9);
}

#[test]
fn ndcg_three_point_five_case() {
    // Gains (3, 0, 1) ranked as shown; ideal (3, 1).
    let mut q = Qrels::default();
    q.insert("q", "d1", 3.0).unwrap();
    q.insert("q", "d2", 0.0).unwrap();
    q.insert("q", "d3", 1.0).unwrap();
    let got = ndcg(&ranking(&["d1", "d2", "d3"]), &q, "q").unwrap();
    let dcg = 3.0 + 1.0 / 2.0;
    let idcg = 3.0 + 1.0 / 3f64.log2();
    assert!((dcg - 3.5f64).abs() < 1e-12);
    assert!((idcg - 3.6309).abs() < 1e-4);
    assert!((got - dcg / idcg).abs() < 1e-9);
    assert!((got - 0.9639).abs() < 1e-4);
}
