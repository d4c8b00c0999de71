//! Factorizations of level maps `f: A → C` between periodic towers through
//! intermediate towers, with certificates that replay every claimed property
//! from the output data alone.

mod finset;

pub use finset::{finite_set_factor, FinSetFactorCertificate, FinSetLevelMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{quotient, FgAbGroup, Homomorphism, Quotient, Subgroup};
use crate::towers::{lim, ml_decide, pro_trivial, PeriodicTower};

/// Levelwise homomorphisms between towers of the same shape, indexed by the
/// distinct levels `0..p + q` of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMap {
    source: PeriodicTower,
    target: PeriodicTower,
    maps: Vec<Homomorphism>,
}

impl LevelMap {
    pub fn new(
        source: PeriodicTower,
        target: PeriodicTower,
        maps: Vec<Homomorphism>,
    ) -> Result<Self> {
        if source.prefix_len() != target.prefix_len() || source.period() != target.period() {
            return Err(Error::ShapeMismatch(format!(
                "towers of shape ({}, {}) and ({}, {})",
                source.prefix_len(),
                source.period(),
                target.prefix_len(),
                target.period()
            )));
        }
        let n = source.distinct_levels();
        if maps.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{n} level maps expected, got {}",
                maps.len()
            )));
        }
        for (l, m) in maps.iter().enumerate() {
            if m.source() != source.level(l) || m.target() != target.level(l) {
                return Err(Error::ShapeMismatch(format!(
                    "level map {l} has the wrong ends"
                )));
            }
        }
        for l in 0..n {
            let s = source.bond_source(l);
            let left = maps[l].compose(source.bond(l))?;
            let right = target.bond(l).compose(&maps[s])?;
            if left != right {
                return Err(Error::NotCommuting(format!("square at level {l}")));
            }
        }
        Ok(LevelMap {
            source,
            target,
            maps,
        })
    }

    pub fn identity(t: &PeriodicTower) -> Self {
        let maps = (0..t.distinct_levels())
            .map(|l| Homomorphism::identity(t.level(l)))
            .collect();
        LevelMap {
            source: t.clone(),
            target: t.clone(),
            maps,
        }
    }

    pub fn source(&self) -> &PeriodicTower {
        &self.source
    }

    pub fn target(&self) -> &PeriodicTower {
        &self.target
    }

    pub fn maps(&self) -> &[Homomorphism] {
        &self.maps
    }

    /// Map at any level `k`.
    pub fn at(&self, k: usize) -> &Homomorphism {
        let p = self.source.prefix_len();
        let n = self.source.distinct_levels();
        let l = if k < n {
            k
        } else {
            p + (k - p) % self.source.period()
        };
        &self.maps[l]
    }

    /// Map on the loop start `B_0`.
    pub fn on_loop(&self) -> &Homomorphism {
        &self.maps[self.source.prefix_len()]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LevelMap) -> Result<LevelMap> {
        if inner.target != self.source {
            return Err(Error::ShapeMismatch("level maps are not composable".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&inner.maps)
            .map(|(a, b)| a.compose(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(LevelMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            maps,
        })
    }

    /// Image of the lim core of the source inside the target loop group.
    pub fn image_of_lim(&self) -> Result<Subgroup> {
        let d = lim(&self.source)?.core;
        self.on_loop().image_of(&d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Quotient,
    Subgroup,
    Main,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyFlag {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

fn flag(name: &str, holds: bool, detail: impl Into<String>) -> PropertyFlag {
    PropertyFlag {
        name: name.to_string(),
        holds,
        detail: detail.into(),
    }
}

/// `original = second ∘ first` through `intermediate`, with property flags.
#[derive(Clone, Debug)]
pub struct FactorizationCertificate {
    pub kind: FactorKind,
    pub original: LevelMap,
    pub intermediate: PeriodicTower,
    pub first: LevelMap,
    pub second: LevelMap,
    /// Per distinct level: the subgroup `L_l` (of `A_l` for the quotient
    /// construction, of `C_l` as the preimage `B_l` for the subgroup one).
    pub l_subgroups: Vec<Subgroup>,
    pub flags: Vec<PropertyFlag>,
    pub stages: Vec<FactorizationCertificate>,
    /// Pro-triviality witness of the intermediate tower (main construction).
    pub pro_trivial_witness: Option<usize>,
}

impl FactorizationCertificate {
    pub fn all_hold(&self) -> bool {
        self.flags.iter().all(|f| f.holds) && self.stages.iter().all(|s| s.all_hold())
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.flags.iter().find(|f| f.name == name).map(|f| f.holds)
    }

    /// Recomputes every flag from the stored towers and maps.
    pub fn replay(&self) -> Result<()> {
        let fresh = match self.kind {
            FactorKind::Quotient => {
                quotient_flags(&self.original, &self.first, &self.second, &self.l_subgroups)?
            }
            FactorKind::Subgroup => {
                subgroup_flags(&self.original, &self.first, &self.second, &self.l_subgroups)?
            }
            FactorKind::Main => main_flags(&self.original, &self.first, &self.second)?.0,
        };
        for f in &fresh {
            if !f.holds {
                return Err(Error::CertificateReplay(format!(
                    "{} fails: {}",
                    f.name, f.detail
                )));
            }
        }
        if fresh != self.flags {
            return Err(Error::CertificateReplay(
                "recorded flags differ from the replay".into(),
            ));
        }
        for s in &self.stages {
            s.replay()?;
        }
        Ok(())
    }
}

fn composition_flag(
    original: &LevelMap,
    first: &LevelMap,
    second: &LevelMap,
) -> Result<PropertyFlag> {
    let holds = second.compose(first)?.maps == original.maps;
    Ok(flag(
        "composition",
        holds,
        "second ∘ first equals the input at every level",
    ))
}

/// Map `A/L → C` induced by `f` when `L ⊆ ker f`.
fn descend(f: &Homomorphism, q: &Quotient) -> Result<Homomorphism> {
    let images = q
        .group()
        .generators()
        .iter()
        .map(|g| f.apply(&q.lift(g)))
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::from_images(q.group(), f.target(), &images)
}

/// Images of `d ⊆ B_0` in every distinct level of `t`.
fn images_of_core(t: &PeriodicTower, d: &Subgroup) -> Result<Vec<Subgroup>> {
    (0..t.distinct_levels())
        .map(|l| t.from_loop_start(l).image_of(d))
        .collect()
}

/// Bond images `bond(l)(S_{src}) = S_l` at every level.
fn bonds_surjective_on(t: &PeriodicTower, s: &[Subgroup]) -> Result<bool> {
    for l in 0..t.distinct_levels() {
        if t.bond(l).image_of(&s[t.bond_source(l)])? != s[l] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tower of quotients `t_l / s_l` with induced bonds.
fn quotient_tower(t: &PeriodicTower, s: &[Subgroup]) -> Result<(PeriodicTower, Vec<Quotient>)> {
    let qs = (0..t.distinct_levels())
        .map(|l| quotient(t.level(l), &s[l]))
        .collect::<Result<Vec<_>>>()?;
    let bonds = (0..t.distinct_levels())
        .map(|l| {
            t.bond(l)
                .induced_on_quotients(&qs[t.bond_source(l)], &qs[l])
        })
        .collect::<Result<Vec<_>>>()?;
    let groups = qs.iter().map(|q| q.group().clone()).collect();
    Ok((t.with_shape(groups, bonds)?, qs))
}

pub fn factor_quotient(f: &LevelMap) -> Result<FactorizationCertificate> {
    let a = &f.source;
    let n = a.distinct_levels();
    let p = a.prefix_len();
    let kernels: Vec<Subgroup> = f.maps.iter().map(|m| m.kernel()).collect();
    let emb: Vec<_> = kernels.iter().map(|k| k.as_group()).collect();
    let k_bonds = (0..n)
        .map(|l| a.bond(l).restrict(&emb[a.bond_source(l)], &emb[l]))
        .collect::<Result<Vec<_>>>()?;
    let k_tower = a.with_shape(emb.iter().map(|e| e.group().clone()).collect(), k_bonds)?;
    let d_k = lim(&k_tower)?.core;
    let d = emb[p].inclusion().image_of(&d_k)?;
    let ls = images_of_core(a, &d)?;
    let (b, qs) = quotient_tower(a, &ls)?;
    let first_maps = qs.iter().map(|q| q.projection().clone()).collect();
    let second_maps = (0..n)
        .map(|l| descend(&f.maps[l], &qs[l]))
        .collect::<Result<Vec<_>>>()?;
    let first = LevelMap::new(a.clone(), b.clone(), first_maps)?;
    let second = LevelMap::new(b.clone(), f.target.clone(), second_maps)?;
    let flags = quotient_flags(f, &first, &second, &ls)?;
    let cert = FactorizationCertificate {
        kind: FactorKind::Quotient,
        original: f.clone(),
        intermediate: b,
        first,
        second,
        l_subgroups: ls,
        flags,
        stages: vec![],
        pro_trivial_witness: None,
    };
    cert.replay()?;
    Ok(cert)
}

/// Quotient factorization of a level map out of a Mittag-Leffler tower; in
/// the abelian case the normal closure of `L_i` is `L_i` itself, and the
/// intermediate tower is Mittag-Leffler as well.
pub fn factor_quotient_ml(f: &LevelMap) -> Result<FactorizationCertificate> {
    if !ml_decide(&f.source).is_ml() {
        return Err(Error::HypothesisViolated(
            "the source tower is not Mittag-Leffler".into(),
        ));
    }
    let cert = factor_quotient(f)?;
    if !ml_decide(&cert.intermediate).is_ml() {
        return Err(Error::CertificateReplay(
            "quotient of a Mittag-Leffler tower is not Mittag-Leffler".into(),
        ));
    }
    Ok(cert)
}

fn quotient_flags(
    original: &LevelMap,
    first: &LevelMap,
    second: &LevelMap,
    ls: &[Subgroup],
) -> Result<Vec<PropertyFlag>> {
    let a = &original.source;
    let b = &first.target;
    let n = a.distinct_levels();
    let mut kernels_match = true;
    for l in 0..n {
        let k = original.maps[l].kernel();
        kernels_match &= first.maps[l].kernel() == ls[l];
        kernels_match &= second.maps[l].kernel() == first.maps[l].image_of(&k)?;
    }
    let d_a = lim(a)?.core;
    let d_b = lim(b)?.core;
    let onto = first.on_loop().image_of(&d_a)? == d_b;
    let into = second.on_loop().kernel().intersect(&d_b)?.is_trivial();
    Ok(vec![
        composition_flag(original, first, second)?,
        flag(
            "kernels",
            kernels_match,
            "ker(A→B) = L and ker(B→C) = image of ker f at every level",
        ),
        flag(
            "l_bonds_surjective",
            bonds_surjective_on(a, ls)?,
            "bond(L_{i+1}) = L_i",
        ),
        flag(
            "lim_first_surjective",
            onto,
            "A→B maps the lim core of A onto that of B",
        ),
        flag(
            "lim_second_injective",
            into,
            "B→C is injective on the lim core of B",
        ),
    ])
}

pub fn factor_subgroup(f: &LevelMap) -> Result<FactorizationCertificate> {
    let c = &f.target;
    let n = c.distinct_levels();
    let images: Vec<Subgroup> = f.maps.iter().map(|m| m.image()).collect();
    let (k_tower, qs) = quotient_tower(c, &images)?;
    let d_k = lim(&k_tower)?.core;
    let ls = images_of_core(&k_tower, &d_k)?;
    let bs = (0..n)
        .map(|l| qs[l].projection().preimage(&ls[l]))
        .collect::<Result<Vec<_>>>()?;
    let emb: Vec<_> = bs.iter().map(|s| s.as_group()).collect();
    let b_bonds = (0..n)
        .map(|l| c.bond(l).restrict(&emb[c.bond_source(l)], &emb[l]))
        .collect::<Result<Vec<_>>>()?;
    let b = c.with_shape(emb.iter().map(|e| e.group().clone()).collect(), b_bonds)?;
    let first_maps = (0..n)
        .map(|l| {
            let src = f.maps[l].source();
            let imgs = src
                .generators()
                .iter()
                .map(|g| emb[l].coords_of(&f.maps[l].apply(g)?))
                .collect::<Result<Vec<_>>>()?;
            Homomorphism::from_images(src, emb[l].group(), &imgs)
        })
        .collect::<Result<Vec<_>>>()?;
    let second_maps = emb.iter().map(|e| e.inclusion().clone()).collect();
    let first = LevelMap::new(f.source.clone(), b.clone(), first_maps)?;
    let second = LevelMap::new(b.clone(), c.clone(), second_maps)?;
    let flags = subgroup_flags(f, &first, &second, &bs)?;
    let cert = FactorizationCertificate {
        kind: FactorKind::Subgroup,
        original: f.clone(),
        intermediate: b,
        first,
        second,
        l_subgroups: bs,
        flags,
        stages: vec![],
        pro_trivial_witness: None,
    };
    cert.replay()?;
    Ok(cert)
}

fn subgroup_flags(
    original: &LevelMap,
    first: &LevelMap,
    second: &LevelMap,
    bs: &[Subgroup],
) -> Result<Vec<PropertyFlag>> {
    let c = &original.target;
    let b = &first.target;
    let n = c.distinct_levels();
    let mut embeds = true;
    for l in 0..n {
        embeds &= second.maps[l].is_injective() && second.maps[l].image() == bs[l];
    }
    // L_l = B_l / G_l inside C_l / G_l; bond surjectivity of L is bond(B) + G = B
    let mut l_onto = true;
    for l in 0..n {
        let g = original.maps[l].image();
        let pushed = c.bond(l).image_of(&bs[c.bond_source(l)])?.sum(&g)?;
        l_onto &= pushed == bs[l];
    }
    let (q_tower, _) = quotient_tower(c, bs)?;
    let q_lim_trivial = lim(&q_tower)?.is_trivial();
    let d_b = lim(b)?.core;
    let d_c = lim(c)?.core;
    let iso = second.on_loop().image_of(&d_b)? == d_c && second.on_loop().is_injective();
    Ok(vec![
        composition_flag(original, first, second)?,
        flag("subgroups", embeds, "B→C is the inclusion of B_l ⊆ C_l"),
        flag("l_bonds_surjective", l_onto, "bond(L_{i+1}) = L_i in C/G"),
        flag(
            "quotient_lim_trivial",
            q_lim_trivial,
            "C/B has trivial lim core",
        ),
        flag(
            "lim_second_isomorphism",
            iso,
            "B→C maps the lim core of B isomorphically onto that of C",
        ),
    ])
}

/// Structural evidence that `lim¹ A → lim¹ B` is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// `B` is Mittag-Leffler, so `lim¹ B = 0`.
    IntermediateMl,
    /// `A` is Mittag-Leffler, so `lim¹ A = 0`.
    SourceMl,
}

/// Factors `f = h ∘ g` through a tower with vanishing `lim` and `lim¹`, given
/// a factorization through `B` with `lim¹ A → lim¹ B` and `lim B → lim C` trivial.
pub fn factor_main(
    f: &LevelMap,
    g: &LevelMap,
    h: &LevelMap,
    evidence: Evidence,
) -> Result<FactorizationCertificate> {
    if h.compose(g).map(|m| m.maps != f.maps).unwrap_or(true) {
        return Err(Error::HypothesisViolated(
            "f does not factor as h ∘ g".into(),
        ));
    }
    let witness = match evidence {
        Evidence::IntermediateMl => ml_decide(&g.target),
        Evidence::SourceMl => ml_decide(&g.source),
    };
    if !witness.is_ml() {
        return Err(Error::HypothesisViolated(format!(
            "{evidence:?}: the tower is not Mittag-Leffler (index {})",
            witness.constant_index
        )));
    }
    if !h.image_of_lim()?.is_trivial() {
        return Err(Error::HypothesisViolated(
            "lim B → lim C is not the zero map".into(),
        ));
    }
    let stage_a = factor_quotient(h)?;
    let to_h = stage_a.first.compose(g)?;
    let stage_b = factor_subgroup(&to_h)?;
    let first = stage_b.first.clone();
    let second = stage_a.second.compose(&stage_b.second)?;
    let (flags, witness) = main_flags(f, &first, &second)?;
    let cert = FactorizationCertificate {
        kind: FactorKind::Main,
        original: f.clone(),
        intermediate: first.target.clone(),
        first,
        second,
        l_subgroups: vec![],
        flags,
        stages: vec![stage_a, stage_b],
        pro_trivial_witness: witness,
    };
    cert.replay()?;
    Ok(cert)
}

fn main_flags(
    original: &LevelMap,
    first: &LevelMap,
    second: &LevelMap,
) -> Result<(Vec<PropertyFlag>, Option<usize>)> {
    let g = &first.target;
    let lim_zero = lim(g)?.is_trivial();
    let ml = ml_decide(g).is_ml();
    let pro = pro_trivial(g);
    Ok((
        vec![
            composition_flag(original, first, second)?,
            flag(
                "lim_trivial",
                lim_zero,
                "the intermediate tower has trivial lim core",
            ),
            flag(
                "mittag_leffler",
                ml,
                "the intermediate tower is Mittag-Leffler, so lim¹ vanishes",
            ),
            flag(
                "pro_trivial",
                pro.trivial,
                format!("loop power {:?} is zero", pro.witness),
            ),
        ],
        pro.witness,
    ))
}

/// The zero tower of the given shape.
pub fn zero_tower_like(t: &PeriodicTower) -> PeriodicTower {
    let n = t.distinct_levels();
    let z = FgAbGroup::trivial();
    t.with_shape(vec![z.clone(); n], vec![Homomorphism::identity(&z); n])
        .expect("shape")
}

#[cfg(test)]
mod tests;
