use crate::error::{Error, Result};
use crate::factorization::LevelMap;
use crate::fgab::{FgAbGroup, Homomorphism};
use crate::towers::PeriodicTower;

use super::Grid;

/// Towers `T_0, …, T_w` with inv-morphisms `f_j: T_j → T_{j+1}` listed
/// through row `depth`: `components[j][i]: G_{l_ij, j} → G_{i, j+1}` where
/// `l_ij = indices[j][i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInvMorphismSequence {
    pub towers: Vec<PeriodicTower>,
    pub indices: Vec<Vec<usize>>,
    pub components: Vec<Vec<Homomorphism>>,
}

impl RawInvMorphismSequence {
    pub fn new(
        towers: Vec<PeriodicTower>,
        indices: Vec<Vec<usize>>,
        components: Vec<Vec<Homomorphism>>,
    ) -> Result<Self> {
        let raw = RawInvMorphismSequence {
            towers,
            indices,
            components,
        };
        raw.validate()?;
        Ok(raw)
    }

    pub fn depth(&self) -> usize {
        self.indices
            .first()
            .map_or(0, |l| l.len().saturating_sub(1))
    }

    fn validate(&self) -> Result<()> {
        if self.towers.is_empty() {
            return Err(Error::ShapeMismatch(
                "at least one tower is required".into(),
            ));
        }
        let w = self.towers.len() - 1;
        if self.indices.len() != w || self.components.len() != w {
            return Err(Error::ShapeMismatch(format!(
                "{} towers need {w} inv-morphisms",
                w + 1
            )));
        }
        let rows = self.depth() + 1;
        for j in 0..w {
            let (t, u) = (&self.towers[j], &self.towers[j + 1]);
            let (l, f) = (&self.indices[j], &self.components[j]);
            if l.len() != rows || f.len() != rows {
                return Err(Error::ShapeMismatch(format!(
                    "inv-morphism {j} must list {rows} rows"
                )));
            }
            for i in 0..rows {
                if f[i].source() != t.level(l[i]) || f[i].target() != u.level(i) {
                    return Err(Error::ShapeMismatch(format!(
                        "component ({i}, {j}) has the wrong ends"
                    )));
                }
            }
            // p ∘ f_{i+1} and f_i agree after bonding down from the deeper index
            for i in 0..rows - 1 {
                let m = l[i].max(l[i + 1]);
                let left = u
                    .bond(i)
                    .compose(&f[i + 1])?
                    .compose(&t.composite(l[i + 1], m)?)?;
                let right = f[i].compose(&t.composite(l[i], m)?)?;
                if left != right {
                    return Err(Error::NotCommuting(format!("inv-morphism {j} at row {i}")));
                }
            }
        }
        Ok(())
    }

    /// Raises the indices to be strictly increasing, precomposing each
    /// component with the matching bonding map.
    pub fn normalize(&self) -> Result<RawInvMorphismSequence> {
        let mut out = self.clone();
        for j in 0..self.indices.len() {
            let t = &self.towers[j];
            if self.indices[j][0] != 0 {
                return Err(Error::NonNormalizable(format!(
                    "row 0 of inv-morphism {j} reads level {}; the recurrence needs level 0",
                    self.indices[j][0]
                )));
            }
            for i in 1..self.indices[j].len() {
                let old = self.indices[j][i];
                let new = old.max(out.indices[j][i - 1] + 1);
                out.indices[j][i] = new;
                out.components[j][i] = self.components[j][i].compose(&t.composite(old, new)?)?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct Straightened {
    pub grid: Grid,
    /// `reindex[j][k] = i_kj`, so `H_kj = G_{i_kj, j}`.
    pub reindex: Vec<Vec<usize>>,
    pub normalized: RawInvMorphismSequence,
}

impl Straightened {
    /// Composite along row `k` from column 0 to column `j` agrees with the
    /// composite of the original inv-morphisms at row `i_kj`.
    pub fn replay(&self) -> Result<()> {
        self.grid.check_commutation()?;
        let raw = &self.normalized;
        let depth = raw.depth();
        for j in 0..self.reindex.len() {
            for k in 0..=depth {
                let mut along = Homomorphism::identity(self.grid.column(0).level(k));
                for c in 0..j {
                    along = self.grid.horizontal_at(c).at(k).compose(&along)?;
                }
                let (from, f) = original_composite(raw, j, self.reindex[j][k])?;
                if from > k {
                    return Err(Error::CertificateReplay(format!(
                        "row {k}, column {j} reads below level {from}"
                    )));
                }
                let expected = f.compose(&raw.towers[0].composite(from, k)?)?;
                if along != expected {
                    return Err(Error::CertificateReplay(format!(
                        "composite at row {k}, column {j}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Composite of `f_{j-1} ∘ … ∘ f_0` at row `i`: the row of `T_0` it reads
/// and the map from there.
fn original_composite(
    raw: &RawInvMorphismSequence,
    j: usize,
    i: usize,
) -> Result<(usize, Homomorphism)> {
    if j == 0 {
        return Ok((i, Homomorphism::identity(raw.towers[0].level(i))));
    }
    let (from, h) = original_composite(raw, j - 1, raw.indices[j - 1][i])?;
    Ok((from, raw.components[j - 1][i].compose(&h)?))
}

fn truncated(groups: Vec<FgAbGroup>, bonds: Vec<Homomorphism>) -> Result<PeriodicTower> {
    let top = groups.last().expect("nonempty").clone();
    PeriodicTower::simple(
        groups,
        bonds,
        Homomorphism::identity(&top),
        Some(Homomorphism::identity(&top)),
    )
}

pub fn straighten(raw: &RawInvMorphismSequence) -> Result<Straightened> {
    let raw = raw.normalize()?;
    let depth = raw.depth();
    let w = raw.towers.len();
    let mut reindex = vec![(0..=depth).collect::<Vec<usize>>()];
    for j in 0..w - 1 {
        let l = &raw.indices[j];
        let next = reindex[j]
            .iter()
            .map(|&ik| (0..=depth).rev().find(|&i| l[i] <= ik).expect("l_0j = 0"))
            .collect();
        reindex.push(next);
    }
    let columns = (0..w)
        .map(|j| {
            let t = &raw.towers[j];
            let r = &reindex[j];
            let groups = r.iter().map(|&i| t.level(i).clone()).collect();
            let bonds = (0..depth)
                .map(|k| t.composite(r[k], r[k + 1]))
                .collect::<Result<Vec<_>>>()?;
            truncated(groups, bonds)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut horizontal = Vec::with_capacity(w.saturating_sub(1));
    for j in 0..w - 1 {
        let t = &raw.towers[j];
        let mut maps = (0..=depth)
            .map(|k| {
                let i = reindex[j + 1][k];
                raw.components[j][i].compose(&t.composite(raw.indices[j][i], reindex[j][k])?)
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(maps[depth].clone());
        horizontal.push(LevelMap::new(
            columns[j].clone(),
            columns[j + 1].clone(),
            maps,
        )?);
    }
    let grid = Grid::new(columns, horizontal, None)?;
    Ok(Straightened {
        grid,
        reindex,
        normalized: raw,
    })
}
