use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite pointed set `{0, …, size - 1}` with its map to the previous level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSetLevel {
    pub size: usize,
    pub basepoint: usize,
    /// Images in the previous level; empty at level 0.
    #[serde(default)]
    pub map: Vec<usize>,
}

/// Tower of finite pointed sets; levels at or past `identity_tail_from`
/// repeat the last listed level with identity maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSetTower {
    pub levels: Vec<FinSetLevel>,
    pub identity_tail_from: usize,
}

impl FinSetTower {
    pub fn new(levels: Vec<FinSetLevel>, identity_tail_from: usize) -> Result<Self> {
        let t = FinSetTower {
            levels,
            identity_tail_from,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedTower(m));
        if self.levels.is_empty() {
            return bad("a set tower needs at least one level".into());
        }
        if self.identity_tail_from > self.levels.len() {
            return bad(format!(
                "identity tail starts at {} but only {} levels are listed",
                self.identity_tail_from,
                self.levels.len()
            ));
        }
        for (k, l) in self.levels.iter().enumerate() {
            if l.basepoint >= l.size {
                return bad(format!(
                    "level {k}: basepoint {} outside a set of size {}",
                    l.basepoint, l.size
                ));
            }
            if k == 0 {
                if !l.map.is_empty() {
                    return bad("level 0 has no map".into());
                }
                continue;
            }
            let prev = &self.levels[k - 1];
            if l.map.len() != l.size {
                return bad(format!(
                    "level {k}: map has {} entries for {} points",
                    l.map.len(),
                    l.size
                ));
            }
            if let Some(x) = l.map.iter().find(|&&x| x >= prev.size) {
                return bad(format!("level {k}: image {x} outside level {}", k - 1));
            }
            if l.map[l.basepoint] != prev.basepoint {
                return bad(format!("level {k}: map does not preserve the basepoint"));
            }
            if k >= self.identity_tail_from
                && (l.size != prev.size || l.map.iter().enumerate().any(|(i, &x)| i != x))
            {
                return bad(format!(
                    "level {k} lies in the identity tail but its map is not the identity"
                ));
            }
        }
        Ok(())
    }

    pub fn level(&self, k: usize) -> &FinSetLevel {
        &self.levels[k.min(self.levels.len() - 1)]
    }

    /// Image of `x ∈ level(k + 1)` in `level(k)`.
    pub fn bond(&self, k: usize, x: usize) -> usize {
        if k + 1 < self.levels.len() {
            self.levels[k + 1].map[x]
        } else {
            x
        }
    }

    /// Image of `x ∈ level(to)` in `level(from)`.
    pub fn push_down(&self, from: usize, to: usize, x: usize) -> usize {
        (from..to).rev().fold(x, |y, k| self.bond(k, y))
    }

    /// `im(level(depth) → level(level))` as a sorted list.
    pub fn image(&self, level: usize, depth: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.level(depth).size)
            .map(|x| self.push_down(level, depth, x))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Images at every level up to `horizon` are stable one step further.
    pub fn mittag_leffler_through(&self, horizon: usize) -> bool {
        let top = horizon.max(self.identity_tail_from);
        (0..=horizon).all(|i| self.image(i, top) == self.image(i, top + 1))
    }
}

/// Threads `(x_0, …, x_horizon)` of a set tower; since every map past the tail
/// start is the identity, these are all threads of the infinite tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinSetLim {
    pub horizon: usize,
    pub threads: Vec<Vec<usize>>,
    pub basepoint: usize,
}

impl FinSetLim {
    pub fn len(&self) -> usize {
        self.threads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.threads.is_empty()
    }
}

pub fn finset_lim(t: &FinSetTower, horizon: usize) -> Result<FinSetLim> {
    if horizon < t.identity_tail_from {
        return Err(Error::Horizon(format!(
            "horizon {horizon} is shorter than the identity tail start {}",
            t.identity_tail_from
        )));
    }
    let top = t.level(horizon);
    let threads: Vec<Vec<usize>> = (0..top.size)
        .map(|x| {
            let mut th = vec![0; horizon + 1];
            th[horizon] = x;
            for k in (0..horizon).rev() {
                th[k] = t.bond(k, th[k + 1]);
            }
            th
        })
        .collect();
    Ok(FinSetLim {
        horizon,
        threads,
        basepoint: top.basepoint,
    })
}
