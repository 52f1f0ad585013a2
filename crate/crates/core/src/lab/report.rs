use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::click::Credit;
use super::interleave::Team;
use super::SessionOutcome;
use crate::{Error, Result};

/// How many impressions a session contributes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Impressions {
    /// One per result row displayed.
    #[default]
    RowsShown,
    PerSession(u64),
}

impl Impressions {
    fn for_session(self, shown: usize) -> u64 {
        match self {
            Impressions::RowsShown => shown as u64,
            Impressions::PerSession(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemStats {
    pub wins: u64,
    pub losses: u64,
    pub ties: u64,
    pub sessions: u64,
    pub impressions: u64,
    pub clicks: u64,
}

impl SystemStats {
    /// `wins / (wins + losses)`, undefined without decided sessions.
    pub fn outcome(&self) -> Option<f64> {
        let decided = self.wins + self.losses;
        (decided > 0).then(|| self.wins as f64 / decided as f64)
    }

    pub fn ctr(&self) -> Option<f64> {
        (self.impressions > 0).then(|| self.clicks as f64 / self.impressions as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabReport {
    pub sessions: u64,
    pub systems: BTreeMap<String, SystemStats>,
}

#[derive(Serialize, Deserialize)]
struct SystemRow {
    system: String,
    #[serde(flatten)]
    stats: SystemStats,
    outcome: Option<f64>,
    ctr: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    sessions: u64,
    systems: Vec<SystemRow>,
}

const UNDEFINED: &str = "n/a";

impl LabReport {
    pub fn get(&self, system: &str) -> Option<&SystemStats> {
        self.systems.get(system)
    }

    pub fn to_text(&self) -> String {
        let width = self.systems.keys().map(String::len).max().unwrap_or(0).max(6);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>5}  {:>5}  {:>4}  {:>7}  {:>8}  {:>10}  {:>6}  {:>6}",
            "system", "win", "loss", "tie", "outcome", "session", "impression", "clicks", "ctr"
        );
        for (name, s) in &self.systems {
            let outcome = s.outcome().map_or(UNDEFINED.to_string(), |v| format!("{v:.2}"));
            let ctr = s.ctr().map_or(UNDEFINED.to_string(), |v| format!("{v:.4}"));
            let _ = writeln!(
                out,
                "{name:<width$}  {:>5}  {:>5}  {:>4}  {outcome:>7}  {:>8}  {:>10}  {:>6}  {ctr:>6}",
                s.wins, s.losses, s.ties, s.sessions, s.impressions, s.clicks
            );
        }
        let _ = writeln!(out, "sessions: {}", self.sessions);
        out
    }

    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            sessions: self.sessions,
            systems: self
                .systems
                .iter()
                .map(|(name, s)| SystemRow {
                    system: name.clone(),
                    stats: *s,
                    outcome: s.outcome(),
                    ctr: s.ctr(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ReportJson = serde_json::from_str(text)?;
        let mut systems = BTreeMap::new();
        for row in doc.systems {
            if systems.insert(row.system.clone(), row.stats).is_some() {
                return Err(Error::Format(format!("system `{}` listed twice", row.system)));
            }
        }
        Ok(LabReport {
            sessions: doc.sessions,
            systems,
        })
    }
}

/// Tallies credit, sessions, impressions and clicks per system.
///
/// Sessions without clicks count towards sessions and impressions only.
pub fn aggregate(outcomes: &[SessionOutcome], impressions: Impressions) -> LabReport {
    let mut report = LabReport::default();
    for o in outcomes {
        report.sessions += 1;
        let shown = impressions.for_session(o.ranking.len());
        let (mut clicks_a, mut clicks_b) = (0, 0);
        for c in &o.clicks {
            match c.team {
                Team::A => clicks_a += 1,
                Team::B => clicks_b += 1,
            }
        }
        for (name, team_clicks, team) in [(&o.system_a, clicks_a, Team::A), (&o.system_b, clicks_b, Team::B)] {
            let s = report.systems.entry(name.clone()).or_default();
            s.sessions += 1;
            s.impressions += shown;
            s.clicks += team_clicks;
            match (o.credit, team) {
                (Credit::WinA, Team::A) | (Credit::WinB, Team::B) => s.wins += 1,
                (Credit::WinA, Team::B) | (Credit::WinB, Team::A) => s.losses += 1,
                (Credit::Tie, _) => s.ties += 1,
                (Credit::NoClicks, _) => {}
            }
        }
    }
    report
}

/// Clicks per interleaved position, `page_size` buckets.
pub fn position_click_histogram(outcomes: &[SessionOutcome], page_size: usize) -> Result<Vec<u64>> {
    let mut hist = vec![0u64; page_size];
    for o in outcomes {
        for c in &o.clicks {
            let slot = c.position.checked_sub(1).and_then(|i| hist.get_mut(i)).ok_or_else(|| {
                Error::Format(format!(
                    "click at position {} in session {} outside page of {page_size}",
                    c.position, o.session
                ))
            })?;
            *slot += 1;
        }
    }
    Ok(hist)
}
