use num_bigint::BigInt;

use super::group::{Element, FgAbGroup, Presentation};
use super::hom::Homomorphism;
use super::lattice::Lattice;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// A subgroup of a canonical group, stored through the lattice of all integer
/// lifts of its elements (which always contains the relation lattice).
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FgAbGroup,
    generators: Vec<Element>,
    lattice: Lattice,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.lattice == other.lattice
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn from_generators(ambient: &FgAbGroup, generators: Vec<Element>) -> Result<Subgroup> {
        if generators.iter().any(|g| g.group() != ambient) {
            return Err(Error::AmbientMismatch);
        }
        let n = ambient.ngens();
        let mut rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.coords().to_vec()).collect();
        rows.extend(ambient.relation_rows().to_rows());
        let lattice = Lattice::from_rows(n, &rows);
        Ok(Subgroup {
            ambient: ambient.clone(),
            generators,
            lattice,
        })
    }

    /// Subgroup whose lift lattice is `lattice + R`.
    pub fn from_lattice(ambient: &FgAbGroup, lattice: Lattice) -> Subgroup {
        let lattice = lattice.sum(&ambient.relation_lattice());
        let generators = lattice
            .basis()
            .to_rows()
            .into_iter()
            .map(|r| ambient.element(r).expect("lattice dimension matches"))
            .filter(|e| !e.is_zero())
            .collect();
        Subgroup {
            ambient: ambient.clone(),
            generators,
            lattice,
        }
    }

    pub fn whole(g: &FgAbGroup) -> Subgroup {
        Self::from_lattice(g, Lattice::full(g.ngens()))
    }

    pub fn trivial(g: &FgAbGroup) -> Subgroup {
        Self::from_lattice(g, Lattice::zero(g.ngens()))
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Hermite-reduced basis of the saturated lift.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Nonzero reduced basis elements generating the subgroup.
    pub fn basis_elements(&self) -> Vec<Element> {
        self.lattice
            .basis()
            .to_rows()
            .into_iter()
            .map(|r| self.ambient.element(r).expect("dimension"))
            .filter(|e| !e.is_zero())
            .collect()
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        if x.group() != &self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.lattice.contains(x.coords()))
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> Result<bool> {
        if other.ambient != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.lattice.contains_lattice(&other.lattice))
    }

    /// Equality by mutual membership.
    pub fn same_as(&self, other: &Subgroup) -> Result<bool> {
        Ok(self.contains_subgroup(other)? && other.contains_subgroup(self)?)
    }

    pub fn is_trivial(&self) -> bool {
        self.ambient
            .relation_lattice()
            .contains_lattice(&self.lattice)
    }

    pub fn is_whole(&self) -> bool {
        self.lattice
            .contains_lattice(&Lattice::full(self.ambient.ngens()))
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        if other.ambient != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(Subgroup::from_lattice(
            &self.ambient,
            self.lattice.intersect(&other.lattice),
        ))
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        if other.ambient != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(Subgroup::from_lattice(
            &self.ambient,
            self.lattice.sum(&other.lattice),
        ))
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank() - self.ambient.torsion_len()
    }

    /// Order of the torsion subgroup of this subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.as_group().group().torsion_order()
    }

    /// Index `[self : sub]` when both have the same rank.
    pub fn index_of(&self, sub: &Subgroup) -> Option<BigInt> {
        if sub.ambient != self.ambient {
            return None;
        }
        self.lattice.index_of(&sub.lattice)
    }

    /// This subgroup as an abstract canonical group with its inclusion.
    pub fn as_group(&self) -> EmbeddedSubgroup {
        let basis = self.lattice.basis().clone();
        let k = basis.rows();
        let rel: Vec<Vec<BigInt>> = self
            .ambient
            .relation_rows()
            .to_rows()
            .iter()
            .map(|r| {
                self.lattice
                    .solve(r)
                    .expect("relations lie in every lift lattice")
            })
            .collect();
        let pres = Presentation::new(&IntMatrix::from_rows(rel.len(), k, rel));
        let lifted = &pres.section.transpose() * &basis;
        let inclusion =
            Homomorphism::new(pres.group.clone(), self.ambient.clone(), lifted.transpose())
                .expect("inclusion is well defined");
        EmbeddedSubgroup {
            subgroup: self.clone(),
            presentation: pres,
            inclusion,
        }
    }
}

/// A subgroup presented as a canonical group together with its inclusion map.
#[derive(Clone, Debug)]
pub struct EmbeddedSubgroup {
    subgroup: Subgroup,
    presentation: Presentation,
    inclusion: Homomorphism,
}

impl EmbeddedSubgroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.presentation.group
    }

    pub fn ambient(&self) -> &FgAbGroup {
        self.subgroup.ambient()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn inclusion(&self) -> &Homomorphism {
        &self.inclusion
    }

    /// Coordinates of an ambient element in the subgroup's canonical form.
    pub fn coords_of(&self, x: &Element) -> Result<Element> {
        if x.group() != self.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let a = self
            .subgroup
            .lattice
            .solve(x.coords())
            .ok_or_else(|| Error::NotAMember(format!("{x:?} is not in the subgroup")))?;
        Ok(self.presentation.to_canonical(&a))
    }
}

/// `g / s` in canonical form with its projection and a set-theoretic section.
#[derive(Clone, Debug)]
pub struct Quotient {
    kernel: Subgroup,
    presentation: Presentation,
    projection: Homomorphism,
}

impl Quotient {
    pub fn group(&self) -> &FgAbGroup {
        &self.presentation.group
    }

    pub fn ambient(&self) -> &FgAbGroup {
        self.kernel.ambient()
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn projection(&self) -> &Homomorphism {
        &self.projection
    }

    /// Some preimage of `q` under the projection.
    pub fn lift(&self, q: &Element) -> Element {
        self.ambient()
            .element(self.presentation.lift(q))
            .expect("section has ambient dimension")
    }
}

pub fn quotient(g: &FgAbGroup, s: &Subgroup) -> Result<Quotient> {
    if s.ambient() != g {
        return Err(Error::AmbientMismatch);
    }
    let presentation = Presentation::new(s.lattice().basis());
    let projection = Homomorphism::new(
        g.clone(),
        presentation.group.clone(),
        presentation.coord.clone(),
    )
    .expect("projection is well defined");
    Ok(Quotient {
        kernel: s.clone(),
        presentation,
        projection,
    })
}
