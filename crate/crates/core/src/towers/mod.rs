//! Eventually periodic inverse sequences of finitely generated abelian groups.
//!
//! A tower is a finite prefix `G_0 ← G_1 ← … ← G_{p-1}` followed by a cycle
//! `B_0 ← B_1 ← … ← B_{q-1} ← B_0 ← …` attached to the last prefix group.
//! Every decision reduces to the loop endomorphism `F = m_0 ∘ … ∘ m_{q-1}`
//! of `B_0`.
//!
//! # Mittag-Leffler bound
//!
//! Put `S_0 = B_0` and `S_{n+1} = F(S_n)`. The chain descends, so rank and
//! torsion order are non-increasing and can strictly drop at most
//! `rank(B_0) + Ω(|tor B_0|)` times. At the first step where neither drops,
//! `F: S_n → S_{n+1}` is a surjection with trivial kernel (a kernel would be
//! finite and shrink the torsion), so `F` is injective on every later `S_m`
//! and `[S_m : S_{m+1}] = [S_n : S_{n+1}] = d` for all `m ≥ n`. The tower is
//! Mittag-Leffler exactly when `d = 1`.
//!
//! # Inverse limit
//!
//! Evaluating threads at `B_0` identifies the limit with the largest subgroup
//! `D` on which `F` is bijective. Its image in `B_0 / tor` is an `F`-stable
//! lattice with unimodular restriction, so it lies in `ker u(F)` where `u` is
//! the product of the irreducible factors of the characteristic polynomial
//! with constant term ±1. Hence `D` is the stable image of `F` on the
//! preimage `P` of that kernel, reached after at most `Ω(|tor B_0|) + 1`
//! iterations.

mod finset;

pub use finset::{finset_lim, FinSetLevel, FinSetLim, FinSetTower};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fgab::lattice::right_kernel;
use crate::fgab::poly::{big_omega, characteristic_polynomial, unit_part};
use crate::fgab::{
    sum_map, DirectSum, EmbeddedSubgroup, FgAbGroup, Homomorphism, Lattice, Subgroup,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicTower {
    prefix: Vec<FgAbGroup>,
    /// `prefix_bonds[i]: prefix[i + 1] → prefix[i]`.
    prefix_bonds: Vec<Homomorphism>,
    cycle: Vec<FgAbGroup>,
    /// `cycle_maps[s]: cycle[(s + 1) % q] → cycle[s]`.
    cycle_maps: Vec<Homomorphism>,
    /// `cycle[0] → prefix[p - 1]`; absent when the prefix is empty.
    attach: Option<Homomorphism>,
}

impl PeriodicTower {
    pub fn new(
        prefix: Vec<FgAbGroup>,
        prefix_bonds: Vec<Homomorphism>,
        cycle: Vec<FgAbGroup>,
        cycle_maps: Vec<Homomorphism>,
        attach: Option<Homomorphism>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedTower(m));
        if cycle.is_empty() {
            return bad("the loop needs at least one group".into());
        }
        if prefix_bonds.len() != prefix.len().saturating_sub(1) {
            return bad(format!(
                "{} prefix groups need {} bonding maps, got {}",
                prefix.len(),
                prefix.len().saturating_sub(1),
                prefix_bonds.len()
            ));
        }
        for (i, b) in prefix_bonds.iter().enumerate() {
            if b.source() != &prefix[i + 1] || b.target() != &prefix[i] {
                return bad(format!("bonding map into level {i} has the wrong ends"));
            }
        }
        let q = cycle.len();
        if cycle_maps.len() != q {
            return bad(format!("a cycle of {q} groups needs {q} maps"));
        }
        for (s, m) in cycle_maps.iter().enumerate() {
            if m.source() != &cycle[(s + 1) % q] || m.target() != &cycle[s] {
                return bad(format!("loop map {s} has the wrong ends"));
            }
        }
        match (&attach, prefix.last()) {
            (None, None) => {}
            (Some(a), Some(last)) if a.source() == &cycle[0] && a.target() == last => {}
            (Some(_), Some(_)) => return bad("attachment map has the wrong ends".into()),
            (None, Some(_)) => return bad("a nonempty prefix needs an attachment map".into()),
            (Some(_), None) => return bad("attachment map without a prefix".into()),
        }
        Ok(PeriodicTower {
            prefix,
            prefix_bonds,
            cycle,
            cycle_maps,
            attach,
        })
    }

    /// Tower with period one: `… → B → B → prefix`.
    pub fn simple(
        prefix: Vec<FgAbGroup>,
        prefix_bonds: Vec<Homomorphism>,
        loop_endo: Homomorphism,
        attach: Option<Homomorphism>,
    ) -> Result<Self> {
        let b = loop_endo.source().clone();
        Self::new(prefix, prefix_bonds, vec![b], vec![loop_endo], attach)
    }

    /// The constant tower `… → B → B` given by one endomorphism.
    pub fn from_endo(endo: Homomorphism) -> Result<Self> {
        Self::simple(vec![], vec![], endo, None)
    }

    pub fn prefix(&self) -> &[FgAbGroup] {
        &self.prefix
    }

    pub fn prefix_bonds(&self) -> &[Homomorphism] {
        &self.prefix_bonds
    }

    pub fn cycle(&self) -> &[FgAbGroup] {
        &self.cycle
    }

    pub fn cycle_maps(&self) -> &[Homomorphism] {
        &self.cycle_maps
    }

    pub fn attach(&self) -> Option<&Homomorphism> {
        self.attach.as_ref()
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn loop_group(&self) -> &FgAbGroup {
        &self.cycle[0]
    }

    pub fn level(&self, k: usize) -> &FgAbGroup {
        let p = self.prefix.len();
        if k < p {
            &self.prefix[k]
        } else {
            &self.cycle[(k - p) % self.period()]
        }
    }

    /// Bonding map `level(k + 1) → level(k)`.
    pub fn bond(&self, k: usize) -> &Homomorphism {
        let p = self.prefix.len();
        if k + 1 < p {
            &self.prefix_bonds[k]
        } else if k + 1 == p {
            self.attach.as_ref().expect("validated")
        } else {
            &self.cycle_maps[(k - p) % self.period()]
        }
    }

    /// Number of distinct levels `p + q`; level `p + q` is `level(p)` again.
    pub fn distinct_levels(&self) -> usize {
        self.prefix.len() + self.period()
    }

    /// Index among the distinct levels of the source of `bond(l)`.
    pub fn bond_source(&self, l: usize) -> usize {
        if l + 1 < self.distinct_levels() {
            l + 1
        } else {
            self.prefix.len()
        }
    }

    /// Tower of the same shape from per-level groups and bonds, where
    /// `bonds[l]: groups[bond_source(l)] → groups[l]`.
    pub fn with_shape(
        &self,
        groups: Vec<FgAbGroup>,
        bonds: Vec<Homomorphism>,
    ) -> Result<PeriodicTower> {
        let p = self.prefix.len();
        if groups.len() != self.distinct_levels() || bonds.len() != groups.len() {
            return Err(Error::MalformedTower(
                "level data does not match the tower shape".into(),
            ));
        }
        let mut bonds = bonds;
        let cycle_maps = bonds.split_off(p);
        let attach = if p > 0 { bonds.pop() } else { None };
        let mut groups = groups;
        let cycle = groups.split_off(p);
        PeriodicTower::new(groups, bonds, cycle, cycle_maps, attach)
    }

    /// Composite `level(to) → level(from)` for `from ≤ to`.
    pub fn composite(&self, from: usize, to: usize) -> Result<Homomorphism> {
        if to < from {
            return Err(Error::IndexOrder(format!(
                "depth {to} is below level {from}"
            )));
        }
        let mut acc = Homomorphism::identity(self.level(to));
        for k in (from..to).rev() {
            acc = self.bond(k).compose(&acc)?;
        }
        Ok(acc)
    }

    /// The endomorphism `m_0 ∘ … ∘ m_{q-1}` of `B_0`.
    pub fn loop_endo(&self) -> Homomorphism {
        let p = self.prefix.len();
        self.composite(p, p + self.period()).expect("ordered")
    }

    /// Map `B_0 → level(k)` for `k < p`, or the map `B_0 → B_s` passing once
    /// around the loop for cycle levels.
    pub fn from_loop_start(&self, k: usize) -> Homomorphism {
        let p = self.prefix.len();
        if k < p {
            self.composite(k, p).expect("ordered")
        } else {
            let s = (k - p) % self.period();
            self.composite(p + s, p + self.period()).expect("ordered")
        }
    }

    /// The first `depth + 1` levels followed by an identity tail.
    pub fn truncate(&self, depth: usize) -> PeriodicTower {
        let prefix: Vec<FgAbGroup> = (0..=depth).map(|k| self.level(k).clone()).collect();
        let bonds = (0..depth).map(|k| self.bond(k).clone()).collect();
        let top = self.level(depth).clone();
        PeriodicTower::simple(
            prefix,
            bonds,
            Homomorphism::identity(&top),
            Some(Homomorphism::identity(&top)),
        )
        .expect("truncation is well formed")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlVerdict {
    Ml,
    NotMl,
}

#[derive(Clone, Debug)]
pub struct MLCertificate {
    pub verdict: MlVerdict,
    /// First `n` with `S_n = S_{n+1}` (ML case).
    pub stabilization_index: Option<usize>,
    /// `S_n` at the stabilization point of rank and torsion order.
    pub stable_image: Subgroup,
    /// `[S_n : S_{n+1}]` past stabilization (always 1 in the ML case).
    pub constant_index: BigInt,
    /// First `n` where rank and torsion order of `S_n` agree with `S_{n+1}`.
    pub regime_start: usize,
    /// `(rank, torsion order)` of `S_0, S_1, …` as computed.
    pub profile: Vec<(usize, BigInt)>,
    pub budget: usize,
}

impl MLCertificate {
    pub fn is_ml(&self) -> bool {
        self.verdict == MlVerdict::Ml
    }
}

/// Iteration budget `rank + Ω(|tor|) + 1` for the loop group.
pub fn ml_budget(g: &FgAbGroup) -> usize {
    g.rank() + big_omega(&g.torsion_order()) as usize + 1
}

pub fn ml_decide(t: &PeriodicTower) -> MLCertificate {
    let f = t.loop_endo();
    let b = t.loop_group();
    let budget = ml_budget(b);
    let mut images = vec![Subgroup::whole(b)];
    for _ in 0..=budget {
        let next = f
            .image_of(images.last().expect("nonempty"))
            .expect("same ambient");
        images.push(next);
    }
    let profile: Vec<(usize, BigInt)> = images
        .iter()
        .map(|s| (s.rank(), s.torsion_order()))
        .collect();
    for w in profile.windows(2) {
        assert!(w[1].0 <= w[0].0, "rank increased along the image chain");
    }
    let n = (0..budget)
        .find(|&n| profile[n] == profile[n + 1])
        .expect("rank and torsion order stabilize within the budget");
    let d = images[n]
        .index_of(&images[n + 1])
        .expect("equal rank nested subgroups");
    let d_next = images[n + 1]
        .index_of(&images[n + 2])
        .expect("equal rank nested subgroups");
    assert_eq!(d, d_next, "index past stabilization must be constant");
    if d.is_one() {
        MLCertificate {
            verdict: MlVerdict::Ml,
            stabilization_index: Some(n),
            stable_image: images[n].clone(),
            constant_index: d,
            regime_start: n,
            profile,
            budget,
        }
    } else {
        MLCertificate {
            verdict: MlVerdict::NotMl,
            stabilization_index: None,
            stable_image: images[n].clone(),
            constant_index: d,
            regime_start: n,
            profile,
            budget,
        }
    }
}

/// Vanishing of `lim¹`, by Gray's criterion for towers of countable groups.
pub fn limone_vanishes(t: &PeriodicTower) -> bool {
    ml_decide(t).is_ml()
}

#[derive(Clone, Debug)]
pub struct LimDescriptor {
    /// `D ⊆ B_0` with `F(D) = D` and `F` injective on `D`.
    pub core: Subgroup,
    /// `D` as an abstract group with its inclusion into `B_0`.
    pub embedded: EmbeddedSubgroup,
    /// `F` restricted to `D`; an automorphism.
    pub automorphism: Homomorphism,
    /// Thread projections `D → G_k` for the prefix levels.
    pub projections: Vec<Homomorphism>,
}

impl LimDescriptor {
    pub fn group(&self) -> &FgAbGroup {
        self.embedded.group()
    }

    pub fn is_trivial(&self) -> bool {
        self.core.is_trivial()
    }

    /// Thread projection `lim → level(k)` for any `k`.
    pub fn projection(&self, t: &PeriodicTower, k: usize) -> Homomorphism {
        let p = t.prefix_len();
        let incl = self.embedded.inclusion();
        if k < p {
            return self.projections[k].clone();
        }
        let q = t.period();
        let laps = (k - p) / q + 1;
        let back = self
            .automorphism
            .inverse()
            .expect("automorphism")
            .pow(laps as u32)
            .expect("endo");
        t.from_loop_start(k)
            .compose(incl)
            .and_then(|m| m.compose(&back))
            .expect("composable")
    }
}

/// Stable image of `f` starting from `start`, iterating at most `limit` times.
fn stable_image(f: &Homomorphism, start: &Subgroup, limit: usize) -> Option<(Subgroup, usize)> {
    let mut s = start.clone();
    for n in 0..=limit {
        let next = f.image_of(&s).expect("same ambient");
        if next == s {
            return Some((s, n));
        }
        s = next;
    }
    None
}

/// The `F`-core of the loop group.
pub fn lim_core(f: &Homomorphism) -> Result<Subgroup> {
    let b = f.source();
    let t = b.torsion_len();
    let r = b.rank();
    let free_idx: Vec<usize> = (t..t + r).collect();
    let f_ff = f.matrix().select_rows(&free_idx).select_cols(&free_idx);
    let (u, _) = unit_part(&characteristic_polynomial(&f_ff));
    // rows of the kernel basis of u(F_ff), padded with zero torsion coordinates
    let uf = u.eval_matrix(&f_ff);
    let ker = right_kernel(&uf);
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for k in ker.to_rows() {
        let mut v = vec![BigInt::from(0); t];
        v.extend(k);
        rows.push(v);
    }
    for i in 0..t {
        let mut v = vec![BigInt::from(0); t + r];
        v[i] = BigInt::one();
        rows.push(v);
    }
    let p = Subgroup::from_lattice(b, Lattice::from_rows(t + r, &rows));
    let limit = big_omega(&b.torsion_order()) as usize + 1;
    let (d, _) = stable_image(f, &p, limit).ok_or_else(|| {
        Error::CoreVerificationFailed("image iteration on the unit part did not stabilize".into())
    })?;
    if f.image_of(&d)? != d {
        return Err(Error::CoreVerificationFailed("F(D) differs from D".into()));
    }
    let e = d.as_group();
    let restricted = f.restrict(&e, &e)?;
    if !restricted.is_injective() {
        return Err(Error::CoreVerificationFailed(
            "F is not injective on D".into(),
        ));
    }
    Ok(d)
}

pub fn lim(t: &PeriodicTower) -> Result<LimDescriptor> {
    let f = t.loop_endo();
    let core = lim_core(&f)?;
    let cert = ml_decide(t);
    if cert.is_ml() {
        let (stable, _) = stable_image(&f, &cert.stable_image, 0)
            .ok_or_else(|| Error::CoreVerificationFailed("ML stable image is not fixed".into()))?;
        if stable != core {
            return Err(Error::CoreVerificationFailed(
                "core differs from the Mittag-Leffler stable image".into(),
            ));
        }
    } else if !cert.stable_image.contains_subgroup(&core)? {
        return Err(Error::CoreVerificationFailed(
            "core is not inside the image chain".into(),
        ));
    }
    let embedded = core.as_group();
    let automorphism = f.restrict(&embedded, &embedded)?;
    let projections = (0..t.prefix_len())
        .map(|k| t.from_loop_start(k).compose(embedded.inclusion()))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimDescriptor {
        core,
        embedded,
        automorphism,
        projections,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ProTriviality {
    pub trivial: bool,
    /// Smallest `n` with `F^n = 0` when trivial.
    pub witness: Option<usize>,
    /// Largest exponent examined.
    pub examined: usize,
}

pub fn pro_trivial(t: &PeriodicTower) -> ProTriviality {
    let f = t.loop_endo();
    let mut power = Homomorphism::identity(t.loop_group());
    let mut kernel = power.kernel();
    let mut n = 0;
    loop {
        if power.is_zero() {
            return ProTriviality {
                trivial: true,
                witness: Some(n),
                examined: n,
            };
        }
        let next = f.compose(&power).expect("endomorphism");
        let next_kernel = next.kernel();
        n += 1;
        if next_kernel == kernel {
            if next.is_zero() {
                return ProTriviality {
                    trivial: true,
                    witness: Some(n),
                    examined: n,
                };
            }
            return ProTriviality {
                trivial: false,
                witness: None,
                examined: n,
            };
        }
        power = next;
        kernel = next_kernel;
    }
}

/// `im(level(depth) → level(level))`.
pub fn image_filtration(t: &PeriodicTower, level: usize, depth: usize) -> Result<Subgroup> {
    Ok(t.composite(level, depth)?.image())
}

/// Levelwise direct sum of towers of one shape, with the sums used at each
/// distinct level.
pub fn direct_sum(towers: &[PeriodicTower]) -> Result<(PeriodicTower, Vec<DirectSum>)> {
    let first = towers
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty direct sum".into()))?;
    if towers
        .iter()
        .any(|t| t.prefix_len() != first.prefix_len() || t.period() != first.period())
    {
        return Err(Error::ShapeMismatch(
            "summands have different shapes".into(),
        ));
    }
    let n = first.distinct_levels();
    let sums: Vec<DirectSum> = (0..n)
        .map(|l| {
            DirectSum::new(
                &towers
                    .iter()
                    .map(|t| t.level(l).clone())
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let bonds = (0..n)
        .map(|l| {
            let s = first.bond_source(l);
            let blocks: Vec<Vec<Homomorphism>> = towers
                .iter()
                .enumerate()
                .map(|(a, ta)| {
                    towers
                        .iter()
                        .enumerate()
                        .map(|(b, tb)| {
                            if a == b {
                                ta.bond(l).clone()
                            } else {
                                Homomorphism::zero(tb.level(s), ta.level(l))
                            }
                        })
                        .collect()
                })
                .collect();
            sum_map(&sums[s], &sums[l], &blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    let groups = sums.iter().map(|d| d.group.clone()).collect();
    Ok((first.with_shape(groups, bonds)?, sums))
}

#[cfg(test)]
mod tests;
