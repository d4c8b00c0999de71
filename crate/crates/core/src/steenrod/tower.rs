use crate::error::{Error, Result};
use crate::fgab::FgAbGroup;
use crate::towers::{lim, ml_decide, MLCertificate, PeriodicTower};

use super::complex::{SimplicialComplex, SimplicialMap};
use super::homology::{homology, induced_between, Homology};

/// Prefix complexes `P_0 ← P_1 ← … ← P_{p-1}`, then a loop complex `L`
/// repeated forever. The loop bond is `c ∘ r⁻¹` where `c, r: S → L` are
/// simplicial maps from a subdivision `S` and `r` is a homotopy equivalence;
/// without `r`, `S = L` and the bond is `c` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralTower {
    prefix: Vec<SimplicialComplex>,
    prefix_maps: Vec<SimplicialMap>,
    loop_complex: SimplicialComplex,
    loop_map: SimplicialMap,
    retraction: Option<SimplicialMap>,
    attach: Option<SimplicialMap>,
}

impl PolyhedralTower {
    pub fn new(
        prefix: Vec<SimplicialComplex>,
        prefix_maps: Vec<SimplicialMap>,
        loop_complex: SimplicialComplex,
        loop_map: SimplicialMap,
        retraction: Option<SimplicialMap>,
        attach: Option<SimplicialMap>,
    ) -> Result<Self> {
        let bad = |m: &str| Err(Error::MalformedTower(m.into()));
        if prefix_maps.len() + 1 != prefix.len().max(1) {
            return bad("prefix maps must join consecutive prefix complexes");
        }
        for (k, m) in prefix_maps.iter().enumerate() {
            if m.source() != &prefix[k + 1] || m.target() != &prefix[k] {
                return bad("a prefix map has the wrong ends");
            }
        }
        match (&attach, prefix.last()) {
            (Some(a), Some(last)) if a.source() == &loop_complex && a.target() == last => {}
            (None, None) => {}
            _ => {
                return bad(
                    "the attaching map must run from the loop complex to the last prefix complex",
                )
            }
        }
        if loop_map.target() != &loop_complex {
            return bad("the loop map must land in the loop complex");
        }
        match &retraction {
            Some(r) if r.source() != loop_map.source() || r.target() != &loop_complex => {
                return bad("the retraction must share the loop map's source and target");
            }
            None if loop_map.source() != &loop_complex => {
                return bad("without a retraction the loop map must be a self-map");
            }
            _ => {}
        }
        Ok(PolyhedralTower {
            prefix,
            prefix_maps,
            loop_complex,
            loop_map,
            retraction,
            attach,
        })
    }

    /// Constant tower on `k` with identity bonds.
    pub fn constant(k: &SimplicialComplex) -> Self {
        PolyhedralTower {
            prefix: vec![],
            prefix_maps: vec![],
            loop_complex: k.clone(),
            loop_map: SimplicialMap::identity(k),
            retraction: None,
            attach: None,
        }
    }

    pub fn prefix(&self) -> &[SimplicialComplex] {
        &self.prefix
    }

    pub fn prefix_maps(&self) -> &[SimplicialMap] {
        &self.prefix_maps
    }

    pub fn loop_complex(&self) -> &SimplicialComplex {
        &self.loop_complex
    }

    pub fn loop_map(&self) -> &SimplicialMap {
        &self.loop_map
    }

    pub fn retraction(&self) -> Option<&SimplicialMap> {
        self.retraction.as_ref()
    }

    pub fn attach(&self) -> Option<&SimplicialMap> {
        self.attach.as_ref()
    }
}

/// `H_n` applied levelwise.
pub fn homology_tower(t: &PolyhedralTower, n: usize) -> Result<PeriodicTower> {
    let hs: Vec<Homology> = t
        .prefix
        .iter()
        .map(|k| homology(k, n))
        .collect::<Result<_>>()?;
    let bonds = t
        .prefix_maps
        .iter()
        .enumerate()
        .map(|(k, m)| induced_between(m, &hs[k + 1], &hs[k]))
        .collect::<Result<Vec<_>>>()?;
    let hl = homology(&t.loop_complex, n)?;
    let endo = match &t.retraction {
        None => induced_between(&t.loop_map, &hl, &hl)?,
        Some(r) => {
            let hsub = homology(r.source(), n)?;
            let r_star = induced_between(r, &hsub, &hl)?;
            if !r_star.is_isomorphism() {
                return Err(Error::InvalidSimplicial(format!(
                    "the retraction is not an isomorphism on H_{n}"
                )));
            }
            induced_between(&t.loop_map, &hsub, &hl)?.compose(&r_star.inverse()?)?
        }
    };
    let attach = match (&t.attach, hs.last()) {
        (Some(a), Some(last)) => Some(induced_between(a, &hl, last)?),
        _ => None,
    };
    let groups = hs.iter().map(|h| h.group().clone()).collect();
    PeriodicTower::simple(groups, bonds, endo, attach)
}

/// Milnor sequence `0 → lim¹ H_{n+1} → H_n(X) → lim H_n → 0` for the limit
/// space `X` of the tower.
#[derive(Clone, Debug)]
pub struct SteenrodReport {
    pub degree: usize,
    pub lim_tower: PeriodicTower,
    pub limone_tower: PeriodicTower,
    pub lim_part: FgAbGroup,
    pub limone_vanishes: bool,
    pub limone_certificate: MLCertificate,
    /// `H_n(X)` when the lim¹ term vanishes; otherwise the extension is not
    /// materialized.
    pub homology: Option<FgAbGroup>,
}

impl SteenrodReport {
    pub fn note(&self) -> String {
        if self.limone_vanishes {
            format!("H_{} is isomorphic to the lim part", self.degree)
        } else {
            format!(
                "H_{} is an extension of the lim part by a nonvanishing lim¹ of H_{}",
                self.degree,
                self.degree + 1
            )
        }
    }
}

pub fn steenrod_report(t: &PolyhedralTower, n: usize) -> Result<SteenrodReport> {
    let lim_tower = homology_tower(t, n)?;
    let limone_tower = homology_tower(t, n + 1)?;
    let lim_part = lim(&lim_tower)?.group().clone();
    let limone_certificate = ml_decide(&limone_tower);
    let limone_vanishes = limone_certificate.is_ml();
    let homology = limone_vanishes.then(|| lim_part.clone());
    Ok(SteenrodReport {
        degree: n,
        lim_tower,
        limone_tower,
        lim_part,
        limone_vanishes,
        limone_certificate,
        homology,
    })
}
