use crate::error::{Error, Result};
use crate::factorization::LevelMap;
use crate::fgab::Homomorphism;
use crate::steenrod::{
    homology, induced_between, unbounded_colim_complex, unbounded_colim_cover,
    unbounded_colim_inclusion, Homology, MAX_UNBOUNDED_INDEX,
};
use crate::towers::PeriodicTower;

use super::Grid;

/// `H_1(P_mn)` for `m ≤ m_max` (rows, joined by the three-fold covers) and
/// `n ≤ n_max` (columns, joined by the inclusions), each column cut at row
/// `m_max` with an identity tail and the identity past column `n_max`.
pub fn unbounded_colim_h1_grid(m_max: usize, n_max: usize) -> Result<Grid> {
    if m_max > MAX_UNBOUNDED_INDEX || n_max > MAX_UNBOUNDED_INDEX {
        return Err(Error::BudgetExceeded(format!(
            "indices ({m_max}, {n_max}) exceed the budget {MAX_UNBOUNDED_INDEX}"
        )));
    }
    let h: Vec<Vec<Homology>> = (0..=n_max)
        .map(|n| {
            (0..=m_max)
                .map(|m| homology(&unbounded_colim_complex(m, n)?, 1))
                .collect()
        })
        .collect::<Result<_>>()?;
    let columns = (0..=n_max)
        .map(|n| {
            let bonds = (0..m_max)
                .map(|m| induced_between(&unbounded_colim_cover(m, n)?, &h[n][m + 1], &h[n][m]))
                .collect::<Result<Vec<_>>>()?;
            let groups: Vec<_> = h[n].iter().map(|x| x.group().clone()).collect();
            let top = Homomorphism::identity(groups.last().expect("m_max + 1 rows"));
            PeriodicTower::simple(groups, bonds, top.clone(), Some(top))
        })
        .collect::<Result<Vec<_>>>()?;
    let horizontal = (0..n_max)
        .map(|n| {
            let mut maps = (0..=m_max)
                .map(|m| induced_between(&unbounded_colim_inclusion(m, n)?, &h[n][m], &h[n + 1][m]))
                .collect::<Result<Vec<_>>>()?;
            maps.push(maps[m_max].clone());
            LevelMap::new(columns[n].clone(), columns[n + 1].clone(), maps)
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(columns, horizontal, None)?;
    grid.check_commutation()?;
    Ok(grid)
}
