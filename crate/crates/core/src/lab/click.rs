use rand::Rng;
use serde::{Deserialize, Serialize};

use super::interleave::{InterleavedRanking, Team};
use crate::{Error, Result};

/// Observed clicks per result position on the live system, top first.
pub const OBSERVED_POSITION_CLICKS: [u64; 6] = [21, 8, 6, 5, 2, 5];
/// Click-through rate the default model is scaled to.
pub const DEFAULT_TARGET_CTR: f64 = 0.0145;

/// Independent per-position click probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ClickModel {
    probs: Vec<f64>,
}

impl ClickModel {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Config("click model needs at least one position".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Config(format!("click probability {p} outside [0, 1]")));
        }
        Ok(ClickModel { probs })
    }

    /// Probabilities proportional to `counts`, scaled so that the expected
    /// clicks per displayed row equal `target_ctr` on a full page.
    pub fn fit(counts: &[u64], target_ctr: f64) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Config("click counts sum to zero".into()));
        }
        if !(target_ctr > 0.0 && target_ctr <= 1.0) {
            return Err(Error::Config(format!("target CTR {target_ctr} outside (0, 1]")));
        }
        let scale = target_ctr * counts.len() as f64 / total as f64;
        Self::new(counts.iter().map(|&c| c as f64 * scale).collect())
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Expected clicks per displayed row on a full page.
    pub fn expected_ctr(&self) -> f64 {
        self.probs.iter().sum::<f64>() / self.probs.len() as f64
    }
}

impl Default for ClickModel {
    fn default() -> Self {
        ClickModel::fit(&OBSERVED_POSITION_CLICKS, DEFAULT_TARGET_CTR).expect("constants are valid")
    }
}

impl TryFrom<Vec<f64>> for ClickModel {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ClickModel::new(v)
    }
}

impl From<ClickModel> for Vec<f64> {
    fn from(m: ClickModel) -> Self {
        m.probs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Credit {
    WinA,
    WinB,
    Tie,
    NoClicks,
}

impl Credit {
    pub fn swapped(self) -> Credit {
        match self {
            Credit::WinA => Credit::WinB,
            Credit::WinB => Credit::WinA,
            c => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Click {
    /// 1-based position in the interleaved page.
    pub position: usize,
    pub id: String,
    pub team: Team,
}

/// Compares the number of clicked documents each team contributed.
pub fn credit_session<S: AsRef<str>>(interleaved: &InterleavedRanking, clicked: &[S]) -> Result<Credit> {
    let (mut a, mut b) = (0usize, 0usize);
    for id in clicked {
        let id = id.as_ref();
        let pos = interleaved
            .position_of(id)
            .ok_or_else(|| Error::ClickOutsideRanking(id.to_string()))?;
        match interleaved.slots[pos].team {
            Team::A => a += 1,
            Team::B => b += 1,
        }
    }
    Ok(match (a, b) {
        (0, 0) => Credit::NoClicks,
        _ if a > b => Credit::WinA,
        _ if b > a => Credit::WinB,
        _ => Credit::Tie,
    })
}

/// Clicks each displayed position independently with its model probability.
pub fn simulate_session<R: Rng + ?Sized>(
    interleaved: &InterleavedRanking,
    model: &ClickModel,
    rng: &mut R,
) -> Result<(Vec<Click>, Credit)> {
    if model.len() < interleaved.len() {
        return Err(Error::Config(format!(
            "click model covers {} positions but the page shows {}",
            model.len(),
            interleaved.len()
        )));
    }
    let mut clicks = Vec::new();
    for (i, slot) in interleaved.slots.iter().enumerate() {
        // Always draw so the stream position does not depend on the model.
        let u: f64 = rng.random();
        if u < model.probs[i] {
            clicks.push(Click {
                position: i + 1,
                id: slot.id.clone(),
                team: slot.team,
            });
        }
    }
    let ids: Vec<&str> = clicks.iter().map(|c| c.id.as_str()).collect();
    let credit = credit_session(interleaved, &ids)?;
    Ok((clicks, credit))
}
