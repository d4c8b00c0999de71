use serde::Serialize;

use crate::factorization::{FactorKind, FactorizationCertificate, PropertyFlag};
use crate::fgab::Subgroup;
use crate::grid::{FinSetGridAnalysis, WitnessReport};
use crate::indcalc::{ColimVerdict, IndTrivialReport};
use crate::steenrod::SteenrodReport;
use crate::towers::{
    lim, ml_decide, pro_trivial, MLCertificate, MlVerdict, PeriodicTower, ProTriviality,
};
use crate::Result;

use super::doc::{level_map_docs, matrix_doc, GridDoc, GroupDoc, Int, MatrixDoc, TowerDoc};

/// Generators as rows of coordinates in the ambient group.
fn generators(s: &Subgroup) -> Vec<Vec<Int>> {
    s.basis_elements()
        .iter()
        .map(|e| e.coords().iter().cloned().map(Int).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MlSummary {
    pub verdict: &'static str,
    pub stabilization_index: Option<usize>,
    pub constant_index: Int,
    pub regime_start: usize,
    /// `(rank, torsion order)` of the image filtration.
    pub profile: Vec<(usize, Int)>,
    pub stable_image: Vec<Vec<Int>>,
}

impl MlSummary {
    pub fn of(c: &MLCertificate) -> MlSummary {
        MlSummary {
            verdict: if c.verdict == MlVerdict::Ml {
                "ML"
            } else {
                "NotML"
            },
            stabilization_index: c.stabilization_index,
            constant_index: Int(c.constant_index.clone()),
            regime_start: c.regime_start,
            profile: c
                .profile
                .iter()
                .map(|(r, o)| (*r, Int(o.clone())))
                .collect(),
            stable_image: generators(&c.stable_image),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimSummary {
    pub group: GroupDoc,
    /// Lim core inside the loop group.
    pub core: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub prefix_len: usize,
    pub period: usize,
    pub loop_group: GroupDoc,
    pub mittag_leffler: MlSummary,
    pub lim: LimSummary,
    pub limone_vanishes: bool,
    pub pro_trivial: ProTriviality,
}

pub fn tower_report(t: &PeriodicTower) -> Result<TowerReport> {
    let ml = ml_decide(t);
    let d = lim(t)?;
    Ok(TowerReport {
        prefix_len: t.prefix_len(),
        period: t.period(),
        loop_group: GroupDoc::of(t.loop_group()),
        limone_vanishes: ml.is_ml(),
        mittag_leffler: MlSummary::of(&ml),
        lim: LimSummary {
            group: GroupDoc::of(d.group()),
            core: generators(&d.core),
        },
        pro_trivial: pro_trivial(t),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GridColumnReport {
    pub lim: LimSummary,
    pub mittag_leffler: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridReport {
    pub columns: Vec<GridColumnReport>,
    /// `Γ_j → Γ_{j+1}` in the bases of the lim groups; the last is the tail.
    pub core_maps: Vec<MatrixDoc>,
    pub colim: ColimVerdict,
    pub witnesses: IndTrivialReport,
    pub trivializing_indices: Vec<Option<usize>>,
}

pub fn grid_report(r: &WitnessReport) -> GridReport {
    GridReport {
        columns: r
            .columns
            .iter()
            .map(|c| GridColumnReport {
                lim: LimSummary {
                    group: GroupDoc::of(c.embedded.group()),
                    core: generators(&c.core),
                },
                mittag_leffler: c.mittag_leffler,
            })
            .collect(),
        core_maps: r.core_maps.iter().map(|m| matrix_doc(m.matrix())).collect(),
        colim: r.colim.clone(),
        witnesses: r.witnesses.clone(),
        trivializing_indices: r.trivializing_indices(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FinSetGridReport {
    pub gamma_sizes: Vec<usize>,
    pub colim_trivial: bool,
    /// Smallest `k > j` with `Γ_j → Γ_k` constant, searched below the last
    /// column, which only closes off the enumeration.
    pub trivializing_indices: Vec<Option<usize>>,
    pub analysis: FinSetGridAnalysis,
}

pub fn finset_grid_report(a: FinSetGridAnalysis) -> FinSetGridReport {
    let n = a.gamma_sizes().len();
    let trivializing_indices = (0..n.saturating_sub(1))
        .map(|j| {
            a.trivial_maps
                .iter()
                .filter(|&&(s, k)| s == j && k + 1 < n)
                .map(|&(_, k)| k)
                .min()
        })
        .collect();
    FinSetGridReport {
        gamma_sizes: a.gamma_sizes(),
        colim_trivial: a.colim_trivial,
        trivializing_indices,
        analysis: a,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub kind: FactorKind,
    pub intermediate: TowerDoc,
    pub first: Vec<MatrixDoc>,
    pub second: Vec<MatrixDoc>,
    pub l_subgroups: Vec<Vec<Vec<Int>>>,
    pub flags: Vec<PropertyFlag>,
    pub pro_trivial_witness: Option<usize>,
    pub stages: Vec<CertificateReport>,
}

impl CertificateReport {
    pub fn of(c: &FactorizationCertificate) -> CertificateReport {
        CertificateReport {
            kind: c.kind,
            intermediate: TowerDoc::of(&c.intermediate),
            first: level_map_docs(&c.first),
            second: level_map_docs(&c.second),
            l_subgroups: c.l_subgroups.iter().map(generators).collect(),
            flags: c.flags.clone(),
            pro_trivial_witness: c.pro_trivial_witness,
            stages: c.stages.iter().map(CertificateReport::of).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MainOutcome {
    Factored { certificate: CertificateReport },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub quotient: CertificateReport,
    pub subgroup: CertificateReport,
    pub main: MainOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct SteenrodSummary {
    pub degree: usize,
    pub lim_tower: TowerDoc,
    pub limone_tower: TowerDoc,
    pub lim_part: GroupDoc,
    pub limone_vanishes: bool,
    pub limone_certificate: MlSummary,
    pub homology: Option<GroupDoc>,
    pub note: String,
}

impl SteenrodSummary {
    pub fn of(r: &SteenrodReport) -> SteenrodSummary {
        SteenrodSummary {
            degree: r.degree,
            lim_tower: TowerDoc::of(&r.lim_tower),
            limone_tower: TowerDoc::of(&r.limone_tower),
            lim_part: GroupDoc::of(&r.lim_part),
            limone_vanishes: r.limone_vanishes,
            limone_certificate: MlSummary::of(&r.limone_certificate),
            homology: r.homology.as_ref().map(GroupDoc::of),
            note: r.note(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StraightenReport {
    /// `reindex[j][k] = i_kj`.
    pub reindex: Vec<Vec<usize>>,
    pub replay: bool,
    pub grid: GridDoc,
}

/// Machine-format envelope.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T> {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub verb: &'static str,
    pub horizon: usize,
    pub result: T,
}

/// `rank + Z/t1 + …` in invariant-factor form.
pub fn show_group(g: &GroupDoc) -> String {
    let mut parts: Vec<String> = Vec::new();
    match g.rank {
        0 => {}
        1 => parts.push("Z".into()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(g.torsion.iter().map(|t| format!("Z/{}", t.0)));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
