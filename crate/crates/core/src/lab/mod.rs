//! Offline stand-in for a living lab: interleave an experimental run with a
//! baseline, simulate position-biased clicks and tally per-system credit.

mod click;
mod interleave;
mod report;

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use click::{
    credit_session, simulate_session, Click, ClickModel, Credit, DEFAULT_TARGET_CTR, OBSERVED_POSITION_CLICKS,
};
pub use interleave::{team_draft_interleave, team_draft_interleave_with, InterleavedRanking, Slot, Team};
pub use report::{aggregate, position_click_histogram, Impressions, LabReport, SystemStats};

use crate::par::Exec;
use crate::query::Run;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionOutcome {
    pub session: u64,
    pub qid: String,
    pub system_a: String,
    pub system_b: String,
    pub ranking: InterleavedRanking,
    pub clicks: Vec<Click>,
    pub credit: Credit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabConfig {
    pub page_size: usize,
    pub sessions: u64,
    pub seed: u64,
    pub click_model: ClickModel,
    pub impressions: Impressions,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            page_size: 6,
            sessions: 1000,
            seed: 42,
            click_model: ClickModel::default(),
            impressions: Impressions::RowsShown,
        }
    }
}

impl LabConfig {
    pub fn validate(&self) -> Result<()> {
        if self.page_size == 0 {
            return Err(Error::Config("page size must be positive".into()));
        }
        if self.click_model.len() < self.page_size {
            return Err(Error::Config(format!(
                "click model covers {} positions, page size is {}",
                self.click_model.len(),
                self.page_size
            )));
        }
        Ok(())
    }
}

/// The random stream for one session: a fixed root seed, one stream per
/// session index, so sessions can be simulated in any order.
pub fn session_rng(seed: u64, session: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(session);
    rng
}

pub fn simulate_lab(run_a: &Run, run_b: &Run, names: (&str, &str), config: &LabConfig) -> Result<Vec<SessionOutcome>> {
    simulate_lab_with(run_a, run_b, names, config, Exec::default())
}

/// Simulates `config.sessions` sessions. Each picks a seed publication
/// uniformly from the queries both runs answer, interleaves the two rankings
/// and draws clicks.
pub fn simulate_lab_with(
    run_a: &Run,
    run_b: &Run,
    (name_a, name_b): (&str, &str),
    config: &LabConfig,
    exec: Exec,
) -> Result<Vec<SessionOutcome>> {
    config.validate()?;
    if name_a == name_b {
        return Err(Error::Config(format!("both systems are named `{name_a}`")));
    }
    let queries: Vec<&String> = run_a.lists.keys().filter(|q| run_b.lists.contains_key(*q)).collect();
    if queries.is_empty() {
        return Err(Error::NoOverlappingQueries);
    }
    let ids = |run: &Run, q: &str| -> Vec<String> { run.lists[q].ids().map(str::to_string).collect() };
    let pages: Vec<(Vec<String>, Vec<String>)> = exec.map(&queries, |q| (ids(run_a, q), ids(run_b, q)));

    let results = exec.map_range(config.sessions as usize, |i| {
        use rand::Rng;
        let session = i as u64;
        let mut rng = session_rng(config.seed, session);
        let qi = rng.random_range(0..queries.len());
        let (a, b) = &pages[qi];
        let ranking = team_draft_interleave(a, b, config.page_size, &mut rng);
        let (clicks, credit) = simulate_session(&ranking, &config.click_model, &mut rng)?;
        Ok(SessionOutcome {
            session,
            qid: queries[qi].clone(),
            system_a: name_a.to_string(),
            system_b: name_b.to_string(),
            ranking,
            clicks,
            credit,
        })
    });
    results.into_iter().collect()
}

pub fn write_session_log(path: &Path, outcomes: &[SessionOutcome]) -> Result<()> {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&serde_json::to_string(o)?);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_session_log(path: &Path) -> Result<Vec<SessionOutcome>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
