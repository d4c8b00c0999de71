use serde::{Deserialize, Serialize};

use super::{classify, IndTrivialReport};
use crate::error::{Error, Result};

/// A prefix level `{0, …, size - 1}` with its pointed map into the next level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSetIndLevel {
    pub size: usize,
    pub basepoint: usize,
    pub map: Vec<usize>,
}

/// The set repeated forever with its pointed self-map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSetIndTail {
    pub size: usize,
    pub basepoint: usize,
    pub endo: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSetIndSequence {
    pub prefix: Vec<FinSetIndLevel>,
    pub tail: FinSetIndTail,
}

impl FinSetIndSequence {
    pub fn new(prefix: Vec<FinSetIndLevel>, tail: FinSetIndTail) -> Result<Self> {
        let s = FinSetIndSequence { prefix, tail };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedTower(m));
        let t = &self.tail;
        if t.basepoint >= t.size || t.endo.len() != t.size {
            return bad("tail set and self-map disagree".into());
        }
        if t.endo.iter().any(|&x| x >= t.size) || t.endo[t.basepoint] != t.basepoint {
            return bad("tail self-map is not a pointed map".into());
        }
        for (j, l) in self.prefix.iter().enumerate() {
            let (next_size, next_base) = self.size_and_base(j + 1);
            if l.basepoint >= l.size || l.map.len() != l.size {
                return bad(format!("level {j}: set and map disagree"));
            }
            if l.map.iter().any(|&x| x >= next_size) || l.map[l.basepoint] != next_base {
                return bad(format!(
                    "level {j}: map is not a pointed map into level {}",
                    j + 1
                ));
            }
        }
        Ok(())
    }

    fn size_and_base(&self, j: usize) -> (usize, usize) {
        match self.prefix.get(j) {
            Some(l) => (l.size, l.basepoint),
            None => (self.tail.size, self.tail.basepoint),
        }
    }

    pub fn size(&self, j: usize) -> usize {
        self.size_and_base(j).0
    }

    pub fn basepoint(&self, j: usize) -> usize {
        self.size_and_base(j).1
    }

    pub fn forward(&self, j: usize, x: usize) -> usize {
        match self.prefix.get(j) {
            Some(l) => l.map[x],
            None => self.tail.endo[x],
        }
    }

    /// Steps within which a tail point reaches the basepoint, if it ever does.
    fn tail_depth(&self) -> usize {
        self.tail.size
    }

    /// Smallest `k ≥ j` where `x ∈ level(j)` reaches the basepoint.
    pub fn element_dies_at(&self, j: usize, x: usize) -> Result<Option<usize>> {
        if x >= self.size(j) {
            return Err(Error::NotAMember(format!(
                "{x} is not a point of level {j}"
            )));
        }
        let last = j.max(self.prefix.len()) + self.tail_depth();
        let (mut y, mut k) = (x, j);
        loop {
            if y == self.basepoint(k) {
                return Ok(Some(k));
            }
            if k >= last {
                return Ok(None);
            }
            y = self.forward(k, y);
            k += 1;
        }
    }

    pub fn colim_trivial(&self) -> bool {
        let p = self.prefix.len();
        (0..self.tail.size).all(|x| self.element_dies_at(p, x).expect("in range").is_some())
    }

    /// Smallest `k > j` with `level(j) → level(k)` constant at the basepoint.
    pub fn first_trivializing(&self, j: usize) -> Option<usize> {
        let deaths: Option<Vec<usize>> = (0..self.size(j))
            .map(|x| self.element_dies_at(j, x).expect("in range"))
            .collect();
        deaths.map(|d| d.into_iter().max().unwrap_or(j).max(j + 1))
    }

    /// Same windowed search as the abelian case, over levels `0..=p`.
    pub fn ind_trivial(&self, horizon: usize) -> IndTrivialReport {
        let levels = (0..=self.prefix.len())
            .map(|j| classify(self.first_trivializing(j), j, horizon))
            .collect();
        IndTrivialReport { horizon, levels }
    }
}
