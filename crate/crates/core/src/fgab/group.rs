use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_t ⊕ Z^rank` in
/// invariant-factor form.
///
/// Canonical coordinates list the torsion generators first (in divisibility
/// order) followed by the free generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    torsion: Vec<BigInt>,
    rank: usize,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for d in &torsion {
            if d <= &BigInt::one() {
                return Err(Error::InvalidGroup(format!(
                    "invariant factor {d} must be at least 2"
                )));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::InvalidGroup(format!(
                    "invariant factors {} and {} break the divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgAbGroup { torsion, rank })
    }

    pub fn trivial() -> Self {
        FgAbGroup {
            torsion: vec![],
            rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            torsion: vec![],
            rank,
        }
    }

    /// `Z/n`; `n = 0` gives `Z`, `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => FgAbGroup {
                torsion: vec![BigInt::from(n)],
                rank: 0,
            },
        }
    }

    /// Convenience constructor from small integers; panics on invalid factors.
    pub fn from_invariants(rank: usize, torsion: &[u64]) -> Self {
        Self::new(rank, torsion.iter().map(|&d| BigInt::from(d)).collect())
            .expect("valid invariant factors")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn torsion_len(&self) -> usize {
        self.torsion.len()
    }

    /// Number of canonical coordinates.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Order of canonical generator `i`: its invariant factor, or 0 if free.
    pub fn modulus(&self, i: usize) -> BigInt {
        self.torsion.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn moduli(&self) -> Vec<BigInt> {
        (0..self.ngens()).map(|i| self.modulus(i)).collect()
    }

    /// Relation lattice `R` with `G = Z^n / R`.
    pub fn relation_lattice(&self) -> Lattice {
        let n = self.ngens();
        let rows: Vec<Vec<BigInt>> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = d.clone();
                r
            })
            .collect();
        Lattice::from_rows(n, &rows)
    }

    pub fn relation_rows(&self) -> IntMatrix {
        self.relation_lattice().basis().clone()
    }

    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| match self.torsion.get(i) {
                Some(d) => c.mod_floor(d),
                None => c.clone(),
            })
            .collect()
    }

    pub fn zero(&self) -> Element {
        Element {
            group: self.clone(),
            coords: vec![BigInt::zero(); self.ngens()],
        }
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut c = vec![BigInt::zero(); self.ngens()];
        c[i] = BigInt::one();
        self.element(c).expect("generator has the right length")
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.ngens()).map(|i| self.generator(i)).collect()
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<Element> {
        if coords.len() != self.ngens() {
            return Err(Error::ShapeMismatch(format!(
                "element has {} coordinates, group has {}",
                coords.len(),
                self.ngens()
            )));
        }
        Ok(Element {
            group: self.clone(),
            coords: self.reduce(&coords),
        })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Element {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
            .expect("coordinate count")
    }

    /// Direct sum with canonical form recomputed; also returns the coordinate
    /// change from the concatenated coordinates of `self ⊕ other`.
    pub fn direct_sum(&self, other: &FgAbGroup) -> Presentation {
        let n = self.ngens() + other.ngens();
        let mut rows = self
            .relation_rows()
            .block_diag(&other.relation_rows())
            .to_rows();
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        Presentation::new(&IntMatrix::from_rows(rows.len(), n, rows))
    }

    /// Enumerates every element; only for finite groups.
    pub fn enumerate(&self) -> Vec<Element> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![vec![]];
        for d in &self.torsion {
            let d = d.to_string().parse::<u64>().expect("small torsion");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for x in 0..d {
                    let mut v = prefix.clone();
                    v.push(BigInt::from(x));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|c| Element {
                group: self.clone(),
                coords: c,
            })
            .collect()
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of a group in canonical coordinates (torsion coordinates reduced).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    group: FgAbGroup,
    coords: Vec<BigInt>,
}

impl Element {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.group != other.group {
            return Err(Error::AmbientMismatch);
        }
        let c = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        self.group.element(c)
    }

    pub fn neg(&self) -> Element {
        let c = self.coords.iter().map(|a| -a).collect();
        self.group.element(c).expect("same length")
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Element {
        let c = self.coords.iter().map(|a| a * k).collect();
        self.group.element(c).expect("same length")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ") in {}", self.group)
    }
}

/// Cokernel `Z^k / rowspan(relations)` in canonical form with explicit
/// coordinate change data.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FgAbGroup,
    /// `ngens × k`: generator coordinates to canonical coordinates (not reduced).
    pub coord: IntMatrix,
    /// `k × ngens`: column `i` lifts canonical generator `i` to generator coordinates.
    pub section: IntMatrix,
}

impl Presentation {
    pub fn new(relations: &IntMatrix) -> Presentation {
        let k = relations.cols();
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let inv = |i: usize| diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let kept: Vec<usize> = (0..k).filter(|&i| !inv(i).is_one()).collect();
        let torsion: Vec<BigInt> = kept
            .iter()
            .map(|&i| inv(i))
            .filter(|d| !d.is_zero())
            .collect();
        let rank = kept.len() - torsion.len();
        let group = FgAbGroup::new(rank, torsion).expect("Smith diagonal is a divisibility chain");
        // y = V^T x, keep the non-unit coordinates
        let coord = snf.v.transpose().select_rows(&kept);
        let section = snf.v_inv.select_rows(&kept).transpose();
        debug_assert!(diag.iter().all(|d| !d.is_negative()));
        Presentation {
            group,
            coord,
            section,
        }
    }

    /// Canonical element represented by generator coordinates `x`.
    pub fn to_canonical(&self, x: &[BigInt]) -> Element {
        self.group
            .element(self.coord.mul_vec(x))
            .expect("coordinate map has the right shape")
    }

    pub fn lift(&self, e: &Element) -> Vec<BigInt> {
        self.section.mul_vec(e.coords())
    }
}

pub fn group_from_presentation(relations: &IntMatrix) -> Presentation {
    Presentation::new(relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::big;

    #[test]
    fn presentation_examples() {
        let p = group_from_presentation(&IntMatrix::from_i64(&[&[2, 0]]));
        assert_eq!(p.group, FgAbGroup::from_invariants(1, &[2]));
        let p = group_from_presentation(&IntMatrix::zeros(0, 2));
        assert_eq!(p.group, FgAbGroup::free(2));
        let p = group_from_presentation(&IntMatrix::from_i64(&[&[1]]));
        assert!(p.group.is_trivial());
    }

    #[test]
    fn presentation_coordinates_respect_relations() {
        let rel = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let p = group_from_presentation(&rel);
        assert_eq!(p.group, FgAbGroup::from_invariants(0, &[2, 4]));
        for i in 0..rel.rows() {
            assert!(p.to_canonical(rel.row(i)).is_zero());
        }
        // section followed by coordinates is the identity on canonical generators
        for g in p.group.generators() {
            assert_eq!(p.to_canonical(&p.lift(&g)), g);
        }
    }

    #[test]
    fn invalid_invariants_rejected() {
        assert!(FgAbGroup::new(0, vec![big(1)]).is_err());
        assert!(FgAbGroup::new(0, vec![big(2), big(3)]).is_err());
        assert!(FgAbGroup::new(0, vec![big(0)]).is_err());
    }

    #[test]
    fn elements_reduce() {
        let g = FgAbGroup::from_invariants(1, &[4]);
        let x = g.element_i64(&[7, -3]);
        assert_eq!(x.coords(), &[big(3), big(-3)]);
        assert_eq!(g.enumerate_len(), 4);
    }

    impl FgAbGroup {
        fn enumerate_len(&self) -> usize {
            FgAbGroup::new(0, self.torsion.clone())
                .unwrap()
                .enumerate()
                .len()
        }
    }
}
