use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Team {
    A,
    B,
}

impl Team {
    pub fn other(self) -> Team {
        match self {
            Team::A => Team::B,
            Team::B => Team::A,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub id: String,
    pub team: Team,
}

/// A merged result page with the team that contributed each entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InterleavedRanking {
    pub slots: Vec<Slot>,
}

impl InterleavedRanking {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.slots.iter().map(|s| s.id.as_str())
    }

    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.id == id)
    }

    pub fn team_count(&self, team: Team) -> usize {
        self.slots.iter().filter(|s| s.team == team).count()
    }
}

struct Cursor<'a, S> {
    ranking: &'a [S],
    next: usize,
}

impl<S: AsRef<str>> Cursor<'_, S> {
    fn take(&mut self, taken: &HashSet<String>) -> Option<String> {
        while let Some(id) = self.ranking.get(self.next) {
            self.next += 1;
            if !taken.contains(id.as_ref()) {
                return Some(id.as_ref().to_string());
            }
        }
        None
    }
}

/// Team-draft interleaving with a fair coin per round.
pub fn team_draft_interleave<S: AsRef<str>, R: Rng + ?Sized>(
    rank_a: &[S],
    rank_b: &[S],
    page_size: usize,
    rng: &mut R,
) -> InterleavedRanking {
    team_draft_interleave_with(rank_a, rank_b, page_size, || {
        if rng.random::<bool>() {
            Team::A
        } else {
            Team::B
        }
    })
}

/// Like [`team_draft_interleave`] with the per-round first picker supplied by
/// `first_pick`. Picking stops once the page is full or the team whose turn
/// it is has nothing left to contribute, so team sizes never differ by more
/// than one.
pub fn team_draft_interleave_with<S: AsRef<str>>(
    rank_a: &[S],
    rank_b: &[S],
    page_size: usize,
    mut first_pick: impl FnMut() -> Team,
) -> InterleavedRanking {
    let mut a = Cursor {
        ranking: rank_a,
        next: 0,
    };
    let mut b = Cursor {
        ranking: rank_b,
        next: 0,
    };
    let mut slots: Vec<Slot> = Vec::with_capacity(page_size);
    let mut taken: HashSet<String> = HashSet::new();

    'rounds: while slots.len() < page_size {
        let first = first_pick();
        for team in [first, first.other()] {
            if slots.len() >= page_size {
                break 'rounds;
            }
            let pick = match team {
                Team::A => a.take(&taken),
                Team::B => b.take(&taken),
            };
            let Some(id) = pick else {
                break 'rounds;
            };
            taken.insert(id.clone());
            slots.push(Slot { id, team });
        }
    }
    InterleavedRanking { slots }
}
