use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::towers::{finset_lim, FinSetLevel, FinSetTower};

/// Grid of finite pointed sets. `horizontal[j][i]: G_ij → G_{i,j+1}`, the
/// last listed row repeating upward; past the last column the horizontal
/// maps are identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSetGrid {
    pub columns: Vec<FinSetTower>,
    pub horizontal: Vec<Vec<Vec<usize>>>,
}

impl FinSetGrid {
    pub fn new(columns: Vec<FinSetTower>, horizontal: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let g = FinSetGrid {
            columns,
            horizontal,
        };
        g.validate()?;
        Ok(g)
    }

    /// Row past which every column and every horizontal map is constant.
    pub fn horizon(&self) -> usize {
        let cols = self
            .columns
            .iter()
            .map(|t| t.identity_tail_from.max(t.levels.len() - 1));
        let maps = self.horizontal.iter().map(|h| h.len().saturating_sub(1));
        cols.chain(maps).max().unwrap_or(0)
    }

    pub fn map(&self, j: usize, i: usize) -> &[usize] {
        let h = &self.horizontal[j];
        &h[i.min(h.len() - 1)]
    }

    pub fn validate(&self) -> Result<()> {
        if self.columns.is_empty() || self.horizontal.len() + 1 != self.columns.len() {
            return Err(Error::ShapeMismatch(
                "a grid of n columns needs n - 1 horizontal maps".into(),
            ));
        }
        for t in &self.columns {
            t.validate()?;
        }
        let h = self.horizon();
        for (j, rows) in self.horizontal.iter().enumerate() {
            if rows.is_empty() {
                return Err(Error::ShapeMismatch(format!(
                    "horizontal map {j} lists no rows"
                )));
            }
            let (a, c) = (&self.columns[j], &self.columns[j + 1]);
            for i in 0..=h + 1 {
                let (s, t, f) = (a.level(i), c.level(i), self.map(j, i));
                if f.len() != s.size
                    || f.iter().any(|&x| x >= t.size)
                    || f[s.basepoint] != t.basepoint
                {
                    return Err(Error::ShapeMismatch(format!(
                        "cell ({i}, {j}) map is not a pointed map"
                    )));
                }
                if i > 0
                    && (0..s.size)
                        .any(|x| self.map(j, i - 1)[a.bond(i - 1, x)] != c.bond(i - 1, f[x]))
                {
                    return Err(Error::NotCommuting(format!("square below cell ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

/// Exhaustive thread enumeration of every column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinSetGridAnalysis {
    pub horizon: usize,
    /// Threads of `Γ_j` through row `horizon`; index 0 is the basepoint thread.
    pub threads: Vec<Vec<Vec<usize>>>,
    /// `Γ_j → Γ_{j+1}` on thread indices.
    pub induced: Vec<Vec<usize>>,
    /// First column where each thread of `Γ_j` reaches the basepoint.
    pub dies_at: Vec<Vec<Option<usize>>>,
    pub colim_trivial: bool,
    /// Pairs `j < k` over the listed columns with `Γ_j → Γ_k` constant.
    pub trivial_maps: Vec<(usize, usize)>,
}

impl FinSetGridAnalysis {
    pub fn gamma_sizes(&self) -> Vec<usize> {
        self.threads.iter().map(Vec::len).collect()
    }
}

impl FinSetGrid {
    pub fn analyze(&self) -> Result<FinSetGridAnalysis> {
        self.validate()?;
        let h = self.horizon();
        let mut threads = Vec::new();
        for t in &self.columns {
            let l = finset_lim(t, h)?;
            let mut ts = l.threads;
            // basepoint thread first, the rest in their natural order
            let b = ts
                .iter()
                .position(|th| th[h] == l.basepoint)
                .expect("basepoint thread");
            let base = ts.remove(b);
            ts.insert(0, base);
            threads.push(ts);
        }
        let n = self.columns.len();
        let induced: Vec<Vec<usize>> = (0..n - 1)
            .map(|j| {
                let index: HashMap<&Vec<usize>, usize> = threads[j + 1]
                    .iter()
                    .enumerate()
                    .map(|(k, t)| (t, k))
                    .collect();
                threads[j]
                    .iter()
                    .map(|th| {
                        let image: Vec<usize> = th
                            .iter()
                            .enumerate()
                            .map(|(i, &x)| self.map(j, i)[x])
                            .collect();
                        index[&image]
                    })
                    .collect()
            })
            .collect();
        let dies_at: Vec<Vec<Option<usize>>> = (0..n)
            .map(|j| {
                (0..threads[j].len())
                    .map(|mut x| {
                        for k in j..n {
                            if x == 0 {
                                return Some(k);
                            }
                            if k + 1 < n {
                                x = induced[k][x];
                            }
                        }
                        None
                    })
                    .collect()
            })
            .collect();
        let colim_trivial = dies_at.iter().flatten().all(Option::is_some);
        let mut trivial_maps = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                if dies_at[j].iter().all(|d| d.is_some_and(|d| d <= k)) {
                    trivial_maps.push((j, k));
                }
            }
        }
        Ok(FinSetGridAnalysis {
            horizon: h,
            threads,
            induced,
            dies_at,
            colim_trivial,
            trivial_maps,
        })
    }
}

/// Cells `G_ij = {*} ∪ {e_m : j < m ≤ i}`, vertical maps killing `e_{i+1}`
/// and horizontal maps killing `e_{j+1}`. Rows and columns run through
/// `n + 1`, so `Γ_j = {*, ê_{j+1}, …, ê_{n+1}}` stays nontrivial for
/// every `j ≤ n` while the last column is a point.
pub fn finset_grid_fixture(n: usize) -> Result<FinSetGrid> {
    if n < 2 {
        return Err(Error::BudgetExceeded(format!(
            "the fixture needs n ≥ 2, got {n}"
        )));
    }
    let top = n + 1;
    // point 0 is *, point m - j is e_m
    let size = |i: usize, j: usize| 1 + i.saturating_sub(j);
    let columns = (0..=top)
        .map(|j| {
            let levels = (0..=top)
                .map(|i| {
                    let map = if i == 0 {
                        vec![]
                    } else {
                        (0..size(i, j))
                            .map(|x| if x + j == i { 0 } else { x })
                            .collect()
                    };
                    FinSetLevel {
                        size: size(i, j),
                        basepoint: 0,
                        map,
                    }
                })
                .collect();
            FinSetTower::new(levels, top + 1)
        })
        .collect::<Result<Vec<_>>>()?;
    let horizontal = (0..top)
        .map(|j| {
            (0..=top)
                .map(|i| (0..size(i, j)).map(|x| x.saturating_sub(1)).collect())
                .collect()
        })
        .collect();
    FinSetGrid::new(columns, horizontal)
}
