//! Direct sequences `A_0 → A_1 → …` with a finite prefix and a tail that
//! repeats one endomorphism forever.
//!
//! Every question about the tail reduces to the kernel chain
//! `ker g ⊆ ker g² ⊆ …`, which stabilizes; an element dies eventually exactly
//! when it lies in the stable kernel.

mod finset;

pub use finset::{FinSetIndLevel, FinSetIndSequence, FinSetIndTail};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{Element, FgAbGroup, Homomorphism, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndSequence {
    prefix: Vec<FgAbGroup>,
    /// `prefix_maps[j]: level j → level j + 1`; the last one lands in the tail group.
    prefix_maps: Vec<Homomorphism>,
    tail: Homomorphism,
}

impl IndSequence {
    pub fn new(
        prefix: Vec<FgAbGroup>,
        prefix_maps: Vec<Homomorphism>,
        tail: Homomorphism,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedTower(m));
        if tail.source() != tail.target() {
            return bad("tail map must be an endomorphism".into());
        }
        if prefix_maps.len() != prefix.len() {
            return bad(format!(
                "{} prefix groups need {} forward maps",
                prefix.len(),
                prefix.len()
            ));
        }
        for (j, m) in prefix_maps.iter().enumerate() {
            let next = prefix.get(j + 1).unwrap_or(tail.source());
            if m.source() != &prefix[j] || m.target() != next {
                return bad(format!("forward map out of level {j} has the wrong ends"));
            }
        }
        Ok(IndSequence {
            prefix,
            prefix_maps,
            tail,
        })
    }

    pub fn periodic(tail: Homomorphism) -> Result<Self> {
        Self::new(vec![], vec![], tail)
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[FgAbGroup] {
        &self.prefix
    }

    pub fn prefix_maps(&self) -> &[Homomorphism] {
        &self.prefix_maps
    }

    pub fn tail(&self) -> &Homomorphism {
        &self.tail
    }

    pub fn level(&self, j: usize) -> &FgAbGroup {
        self.prefix.get(j).unwrap_or(self.tail.source())
    }

    /// Forward map `level(j) → level(j + 1)`.
    pub fn forward(&self, j: usize) -> &Homomorphism {
        self.prefix_maps.get(j).unwrap_or(&self.tail)
    }

    /// Composite `level(j) → level(k)` for `j ≤ k`.
    pub fn composite(&self, j: usize, k: usize) -> Result<Homomorphism> {
        if k < j {
            return Err(Error::IndexOrder(format!("level {k} precedes level {j}")));
        }
        let mut acc = Homomorphism::identity(self.level(j));
        for l in j..k {
            acc = self.forward(l).compose(&acc)?;
        }
        Ok(acc)
    }

    /// Stable kernel of the tail map and the exponent where it is reached.
    pub fn stable_tail_kernel(&self) -> (Subgroup, usize) {
        stable_kernel(&self.tail)
    }
}

/// `(ker g^N, N)` for the first `N` with `ker g^N = ker g^{N+1}`.
pub fn stable_kernel(g: &Homomorphism) -> (Subgroup, usize) {
    let mut power = Homomorphism::identity(g.source());
    let mut kernel = power.kernel();
    let mut n = 0;
    loop {
        let next = g.compose(&power).expect("endomorphism");
        let next_kernel = next.kernel();
        if next_kernel == kernel {
            return (kernel, n);
        }
        power = next;
        kernel = next_kernel;
        n += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColimVerdict {
    pub trivial: bool,
    /// Smallest `n` with `g^n = 0` when trivial.
    pub nilpotency_index: Option<usize>,
}

/// The colimit only depends on the tail, where it vanishes iff `g` is nilpotent.
pub fn colim_trivial(s: &IndSequence) -> ColimVerdict {
    let (k, n) = s.stable_tail_kernel();
    if k.is_whole() {
        ColimVerdict {
            trivial: true,
            nilpotency_index: Some(n),
        }
    } else {
        ColimVerdict {
            trivial: false,
            nilpotency_index: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LevelWitness {
    Trivializes {
        k: usize,
    },
    NoWitnessWithinHorizon {
        horizon: usize,
        /// No `k` at all exists, not just none within the horizon.
        exact_never: bool,
        /// Smallest witness past the horizon, when one is known to exist.
        first_witness: Option<usize>,
    },
}

impl LevelWitness {
    pub fn witness(&self) -> Option<usize> {
        match self {
            LevelWitness::Trivializes { k } => Some(*k),
            LevelWitness::NoWitnessWithinHorizon { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndTrivialReport {
    /// Width of the search window past each level.
    pub horizon: usize,
    pub levels: Vec<LevelWitness>,
}

impl IndTrivialReport {
    pub fn all_witnessed(&self) -> bool {
        self.levels.iter().all(|l| l.witness().is_some())
    }
}

/// Smallest `k > j` with `level(j) → level(k)` zero, if any exists.
pub fn first_trivializing(s: &IndSequence, j: usize) -> Option<usize> {
    let p = s.prefix_len();
    let (stable, n) = s.stable_tail_kernel();
    let mut acc = s.forward(j).clone();
    let mut k = j + 1;
    while k < p {
        if acc.is_zero() {
            return Some(k);
        }
        acc = s.forward(k).compose(&acc).expect("composable");
        k += 1;
    }
    // acc: level j → tail at level k ≥ p
    if !stable
        .contains_subgroup(&acc.image())
        .expect("tail ambient")
    {
        return None;
    }
    for _ in 0..=n {
        if acc.is_zero() {
            return Some(k);
        }
        acc = s.tail().compose(&acc).expect("composable");
        k += 1;
    }
    unreachable!("image inside the stable kernel dies within its exponent")
}

/// Searches `k ∈ (j, j + horizon]` for every level `j ≤ p`; levels past the
/// prefix length `p` behave exactly like level `p`.
pub fn ind_trivial(s: &IndSequence, horizon: usize) -> IndTrivialReport {
    let levels = (0..=s.prefix_len())
        .map(|j| classify(first_trivializing(s, j), j, horizon))
        .collect();
    IndTrivialReport { horizon, levels }
}

pub(crate) fn classify(first: Option<usize>, j: usize, horizon: usize) -> LevelWitness {
    match first {
        Some(k) if k <= j + horizon => LevelWitness::Trivializes { k },
        other => LevelWitness::NoWitnessWithinHorizon {
            horizon,
            exact_never: other.is_none(),
            first_witness: other,
        },
    }
}

/// Smallest `k ≥ j` where the image of `x ∈ level(j)` is zero.
pub fn element_dies_at(s: &IndSequence, j: usize, x: &Element) -> Result<Option<usize>> {
    if x.group() != s.level(j) {
        return Err(Error::NotAMember(format!("{x:?} is not in level {j}")));
    }
    let p = s.prefix_len();
    let (_, n) = s.stable_tail_kernel();
    let mut y = x.clone();
    let mut k = j;
    // inside the tail, survival past n further steps means survival forever
    let last = j.max(p) + n;
    loop {
        if y.is_zero() {
            return Ok(Some(k));
        }
        if k >= last {
            return Ok(None);
        }
        y = s.forward(k).apply(&y)?;
        k += 1;
    }
}

/// Maps between ind-sequences given levelwise with a constant reindexing shift:
/// `level j → level j + shift`, the last prefix map repeating forever.
#[derive(Clone, Debug)]
pub struct IndLevelMaps {
    pub maps: Vec<Homomorphism>,
    pub shift: usize,
}

impl IndLevelMaps {
    pub fn at(&self, j: usize) -> &Homomorphism {
        &self.maps[j.min(self.maps.len() - 1)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndIsoCheck {
    pub holds: bool,
    pub checked_through: usize,
    pub failure: Option<String>,
}

/// Checks that `φ` is an inverse of `f` up to the bonding maps:
/// `φ_j ∘ f_j = (A_j → A_{j+s})` and `f_{j+s} ∘ φ_j = (C_j → C_{j+s})`, and that
/// both families commute with the bondings. Past every prefix all data is
/// constant in `j`, so checking one level beyond the prefixes covers the tail.
pub fn verify_ind_isomorphism(
    a: &IndSequence,
    c: &IndSequence,
    f: &IndLevelMaps,
    phi: &IndLevelMaps,
) -> Result<IndIsoCheck> {
    if f.maps.is_empty() || phi.maps.is_empty() {
        return Err(Error::ShapeMismatch(
            "level map families must be nonempty".into(),
        ));
    }
    if f.shift != 0 {
        return Err(Error::ShapeMismatch(
            "the forward family must preserve levels".into(),
        ));
    }
    let s = phi.shift;
    let through = [a.prefix_len(), c.prefix_len(), f.maps.len(), phi.maps.len()]
        .into_iter()
        .max()
        .unwrap_or(0);
    for j in 0..=through {
        for (name, m, src, tgt) in [
            ("f", f.at(j), a.level(j), c.level(j)),
            ("phi", phi.at(j), c.level(j), a.level(j + s)),
        ] {
            if m.source() != src || m.target() != tgt {
                return Err(Error::ShapeMismatch(format!(
                    "{name} at level {j} has the wrong ends"
                )));
            }
        }
        let fail = |msg: String| {
            Ok(IndIsoCheck {
                holds: false,
                checked_through: j,
                failure: Some(msg),
            })
        };
        if c.forward(j).compose(f.at(j))? != f.at(j + 1).compose(a.forward(j))? {
            return fail(format!("f does not commute with the bondings at level {j}"));
        }
        if a.forward(j + s).compose(phi.at(j))? != phi.at(j + 1).compose(c.forward(j))? {
            return fail(format!(
                "phi does not commute with the bondings at level {j}"
            ));
        }
        if phi.at(j).compose(f.at(j))? != a.composite(j, j + s)? {
            return fail(format!(
                "phi ∘ f differs from the bonding composite at level {j}"
            ));
        }
        if f.at(j + s).compose(phi.at(j))? != c.composite(j, j + s)? {
            return fail(format!(
                "f ∘ phi differs from the bonding composite at level {j}"
            ));
        }
    }
    Ok(IndIsoCheck {
        holds: true,
        checked_through: through,
        failure: None,
    })
}
