use crate::error::{Error, Result};
use crate::fgab::{
    quotient, Element, EmbeddedSubgroup, FgAbGroup, Homomorphism, Quotient, Subgroup,
};

use super::complex::{SimplicialComplex, SimplicialMap};

/// Largest degree in which homology is computed.
pub const MAX_DEGREE: usize = 3;

/// `H_n = Z_n / B_n` with the cycle lattice kept for functoriality.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: usize,
    cycles: EmbeddedSubgroup,
    classes: Quotient,
}

impl Homology {
    pub fn group(&self) -> &FgAbGroup {
        self.classes.group()
    }

    /// A cycle in `C_n` for each generator of `H_n`.
    pub fn representatives(&self) -> Vec<Element> {
        self.group()
            .generators()
            .iter()
            .map(|g| {
                self.cycles
                    .inclusion()
                    .apply(&self.classes.lift(g))
                    .expect("cycle group")
            })
            .collect()
    }

    /// Class of a cycle given as an element of `C_n`.
    pub fn class_of(&self, z: &Element) -> Result<Element> {
        let c = self.cycles.coords_of(z)?;
        self.classes.projection().apply(&c)
    }
}

pub fn homology(k: &SimplicialComplex, n: usize) -> Result<Homology> {
    if n > MAX_DEGREE {
        return Err(Error::BudgetExceeded(format!(
            "degree {n} exceeds {MAX_DEGREE}"
        )));
    }
    let cycles = k.boundary(n).kernel().as_group();
    let bd = k.boundary(n + 1);
    let images = bd
        .source()
        .generators()
        .iter()
        .map(|g| cycles.coords_of(&bd.apply(g)?))
        .collect::<Result<Vec<_>>>()?;
    let boundaries = Subgroup::from_generators(cycles.group(), images)?;
    let classes = quotient(cycles.group(), &boundaries)?;
    Ok(Homology {
        degree: n,
        cycles,
        classes,
    })
}

/// `f_*: H_n(source) → H_n(target)` in the given homology bases.
pub fn induced_between(f: &SimplicialMap, hs: &Homology, ht: &Homology) -> Result<Homomorphism> {
    if hs.degree != ht.degree {
        return Err(Error::ShapeMismatch("homology in different degrees".into()));
    }
    let c = f.chain_map(hs.degree);
    let images = hs
        .representatives()
        .iter()
        .map(|z| ht.class_of(&c.apply(z)?))
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::from_images(hs.group(), ht.group(), &images)
}

pub fn induced(f: &SimplicialMap, n: usize) -> Result<Homomorphism> {
    induced_between(f, &homology(f.source(), n)?, &homology(f.target(), n)?)
}

/// `Σ (-1)^d rank H_d` over all degrees up to the dimension.
pub fn euler_from_homology(k: &SimplicialComplex) -> Result<i64> {
    let top = k.dimension();
    if top > MAX_DEGREE as isize {
        return Err(Error::BudgetExceeded(format!(
            "dimension {top} exceeds {MAX_DEGREE}"
        )));
    }
    (0..=top.max(0) as usize)
        .filter(|_| top >= 0)
        .map(|d| Ok(if d % 2 == 0 { 1 } else { -1 } * homology(k, d)?.group().rank() as i64))
        .sum()
}
