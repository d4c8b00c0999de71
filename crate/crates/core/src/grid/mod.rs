//! Direct sequences of towers joined by level maps.
//!
//! Column `j` contributes `Γ_j`, the lim of its tower, which is represented
//! by the lim core inside the loop group of the column. A level map sends
//! core into core, so the horizontal maps restrict to an ind-sequence of
//! cores, and the usual ind-sequence machinery answers the colimit question.

use crate::error::{Error, Result};
use crate::factorization::LevelMap;
use crate::fgab::{EmbeddedSubgroup, FgAbGroup, Homomorphism, Subgroup};
use crate::indcalc::{
    colim_trivial, ind_trivial, ColimVerdict, IndSequence, IndTrivialReport, LevelWitness,
};
use crate::towers::{lim, ml_decide, PeriodicTower};

mod finset;
mod h1;
mod straighten;
mod surjective;

pub use finset::{finset_grid_fixture, FinSetGrid, FinSetGridAnalysis};
pub use h1::unbounded_colim_h1_grid;
pub use straighten::{straighten, RawInvMorphismSequence, Straightened};
pub use surjective::{embed_in_surjective, summation_witness, SurjectiveEmbedding};

/// Columns `T_0, …, T_{n-1}` with level maps `T_j → T_{j+1}`; past the last
/// column the sequence continues with `tail` (identity when absent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    columns: Vec<PeriodicTower>,
    horizontal: Vec<LevelMap>,
    tail: Option<LevelMap>,
}

impl Grid {
    pub fn new(
        columns: Vec<PeriodicTower>,
        horizontal: Vec<LevelMap>,
        tail: Option<LevelMap>,
    ) -> Result<Grid> {
        if columns.is_empty() {
            return Err(Error::ShapeMismatch(
                "a grid needs at least one column".into(),
            ));
        }
        if horizontal.len() + 1 != columns.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} columns need {} horizontal maps, got {}",
                columns.len(),
                columns.len() - 1,
                horizontal.len()
            )));
        }
        for (j, h) in horizontal.iter().enumerate() {
            if h.source() != &columns[j] || h.target() != &columns[j + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "horizontal map {j} does not join columns {j} and {}",
                    j + 1
                )));
            }
        }
        if let Some(t) = &tail {
            let last = columns.last().expect("nonempty");
            if t.source() != last || t.target() != last {
                return Err(Error::ShapeMismatch(
                    "the tail must be an endomorphism of the last column".into(),
                ));
            }
        }
        Ok(Grid {
            columns,
            horizontal,
            tail,
        })
    }

    /// Constant grid: one column repeated forever along `endo`.
    pub fn periodic(endo: LevelMap) -> Result<Grid> {
        Grid::new(vec![endo.source().clone()], vec![], Some(endo))
    }

    pub fn columns(&self) -> &[PeriodicTower] {
        &self.columns
    }

    pub fn horizontal(&self) -> &[LevelMap] {
        &self.horizontal
    }

    pub fn tail(&self) -> Option<&LevelMap> {
        self.tail.as_ref()
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &PeriodicTower {
        &self.columns[j.min(self.columns.len() - 1)]
    }

    /// Level map `T_j → T_{j+1}` for any `j`.
    pub fn horizontal_at(&self, j: usize) -> LevelMap {
        match self.horizontal.get(j) {
            Some(h) => h.clone(),
            None => self
                .tail
                .clone()
                .unwrap_or_else(|| LevelMap::identity(self.columns.last().expect("nonempty"))),
        }
    }

    /// Recheck every square of the grid.
    pub fn check_commutation(&self) -> Result<()> {
        for (j, h) in self.horizontal.iter().chain(&self.tail).enumerate() {
            LevelMap::new(h.source().clone(), h.target().clone(), h.maps().to_vec())
                .map_err(|e| Error::NotCommuting(format!("horizontal map {j}: {e}")))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ColumnReport {
    /// Lim core inside the loop group of the column.
    pub core: Subgroup,
    /// The core as an abstract group with its inclusion.
    pub embedded: EmbeddedSubgroup,
    pub mittag_leffler: bool,
    pub limone_vanishes: bool,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub horizon: usize,
    pub columns: Vec<ColumnReport>,
    /// `Γ_j → Γ_{j+1}` on the cores; the last one is the tail map.
    pub core_maps: Vec<Homomorphism>,
    pub sequence: IndSequence,
    pub colim: ColimVerdict,
    pub witnesses: IndTrivialReport,
}

impl WitnessReport {
    pub fn limone_pattern(&self) -> Vec<bool> {
        self.columns.iter().map(|c| c.limone_vanishes).collect()
    }

    /// `k(j)` for every analyzed column, `None` for refusals.
    pub fn trivializing_indices(&self) -> Vec<Option<usize>> {
        self.witnesses
            .levels
            .iter()
            .map(LevelWitness::witness)
            .collect()
    }

    /// Every reported `k(j)` gives a zero composite on cores.
    pub fn verify(&self) -> Result<()> {
        for (j, w) in self.witnesses.levels.iter().enumerate() {
            if let Some(k) = w.witness() {
                if !self.sequence.composite(j, k)?.is_zero() {
                    return Err(Error::CertificateReplay(format!(
                        "Γ_{j} → Γ_{k} is not zero"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Core functoriality: the image of the source core under `h` lies in the
/// target core. Returns the induced map between the core groups.
pub fn core_map(
    h: &LevelMap,
    source: &EmbeddedSubgroup,
    target: &EmbeddedSubgroup,
) -> Result<Homomorphism> {
    h.on_loop().restrict(source, target).map_err(|e| match e {
        Error::NotAMember(m) => {
            Error::CoreVerificationFailed(format!("a level map leaves the lim core: {m}"))
        }
        other => other,
    })
}

pub fn analyze(g: &Grid, horizon: usize) -> Result<WitnessReport> {
    g.check_commutation()?;
    let columns = g
        .columns
        .iter()
        .map(|t| {
            let d = lim(t)?;
            let ml = ml_decide(t).is_ml();
            Ok(ColumnReport {
                embedded: d.embedded.clone(),
                core: d.core,
                mittag_leffler: ml,
                limone_vanishes: ml,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = columns.len();
    let mut core_maps = Vec::with_capacity(n);
    for j in 0..n {
        let next = &columns[(j + 1).min(n - 1)];
        core_maps.push(core_map(
            &g.horizontal_at(j),
            &columns[j].embedded,
            &next.embedded,
        )?);
    }
    let groups: Vec<FgAbGroup> = columns[..n - 1]
        .iter()
        .map(|c| c.embedded.group().clone())
        .collect();
    let tail = core_maps[n - 1].clone();
    let sequence = IndSequence::new(groups, core_maps[..n - 1].to_vec(), tail)?;
    let colim = colim_trivial(&sequence);
    let witnesses = ind_trivial(&sequence, horizon);
    let report = WitnessReport {
        horizon,
        columns,
        core_maps,
        sequence,
        colim,
        witnesses,
    };
    report.verify()?;
    Ok(report)
}
