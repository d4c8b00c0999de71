//! Integer lattices in `Z^n` held in row Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row echelon reduction of `m` by unimodular row operations.
///
/// Returns `(h, t, rank)` with `h = t * m`, `t` unimodular, the first `rank`
/// rows of `h` in Hermite normal form (positive pivots, entries above each
/// pivot reduced into `[0, pivot)`) and the remaining rows zero. The rows of
/// `t` past `rank` form a basis of the left kernel of `m`.
pub fn hermite_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut t = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // row with smallest nonzero |entry| in column c at or below r
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..rows {
                let x = h[(i, c)].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |(_, b)| &x < b) {
                    best = Some((i, x));
                }
            }
            let Some((bi, _)) = best else { break };
            h.swap_rows(r, bi);
            t.swap_rows(r, bi);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                t.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&p);
            h.add_row_multiple(i, r, &q);
            t.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, t, r)
}

/// Basis of the left kernel `{a : a * m = 0}` as rows, in Hermite form.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let (_, t, rank) = hermite_with_transform(m);
    let idx: Vec<usize> = (rank..m.rows()).collect();
    let k = t.select_rows(&idx);
    Lattice::from_generators(&k).basis
}

/// Basis of the right kernel `{x : m * x = 0}` as rows.
pub fn right_kernel(m: &IntMatrix) -> IntMatrix {
    left_kernel(&m.transpose())
}

/// Coefficients `c` with `c * m = v`, if any.
pub fn solve_rows(m: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let (h, t, rank) = hermite_with_transform(m);
    let basis = h.select_rows(&(0..rank).collect::<Vec<_>>());
    let pivots = (0..rank)
        .map(|i| {
            (0..m.cols())
                .find(|&j| !basis[(i, j)].is_zero())
                .expect("nonzero Hermite row")
        })
        .collect();
    let lat = Lattice {
        dim: m.cols(),
        basis,
        pivots,
    };
    let a = lat.solve(v)?;
    let t_top = t.select_rows(&(0..rank).collect::<Vec<_>>());
    Some(t_top.transpose().mul_vec(&a))
}

/// A sublattice of `Z^dim`, stored as a Hermite basis (rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::zeros(0, dim),
            pivots: vec![],
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::identity(dim),
            pivots: (0..dim).collect(),
        }
    }

    /// Lattice spanned by the rows of `gens`.
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let dim = gens.cols();
        let (h, _, rank) = hermite_with_transform(gens);
        let basis = h.select_rows(&(0..rank).collect::<Vec<_>>());
        let pivots = (0..rank)
            .map(|i| {
                (0..dim)
                    .find(|&j| !basis[(i, j)].is_zero())
                    .expect("nonzero Hermite row")
            })
            .collect();
        Lattice { dim, basis, pivots }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<BigInt>]) -> Self {
        let m = IntMatrix::from_rows(rows.len(), dim, rows.to_vec());
        Self::from_generators(&m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coefficients `a` with `a * basis = v`, or `None` if `v` is not in the lattice.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim);
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (k, &c) in self.pivots.iter().enumerate() {
            // columns left of the pivot are already cleared
            let p = &self.basis[(k, c)];
            let (q, r) = rest[c].div_rem(p);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for j in c..self.dim {
                    let s = &q * &self.basis[(k, j)];
                    rest[j] -= s;
                }
            }
            coeffs.push(q);
        }
        if rest.iter().all(Zero::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.rank()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(&self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if self.rank() == 0 || other.rank() == 0 {
            return Lattice::zero(self.dim);
        }
        let stacked = self.basis.vstack(&other.basis);
        let k = left_kernel(&stacked);
        let a_part = k.select_cols(&(0..self.rank()).collect::<Vec<_>>());
        Lattice::from_generators(&(&a_part * &self.basis))
    }

    /// Index `[self : sub]` for a sublattice of equal rank; `None` if the ranks differ
    /// or `sub` is not contained in `self`.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if sub.rank() != self.rank() {
            return None;
        }
        let mut rows = Vec::with_capacity(sub.rank());
        for i in 0..sub.rank() {
            rows.push(self.solve(sub.basis.row(i))?);
        }
        let c = IntMatrix::from_rows(sub.rank(), self.rank(), rows);
        Some(c.determinant().abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::big;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_generators(&IntMatrix::from_i64(rows))
    }

    #[test]
    fn hermite_transform_is_consistent() {
        let m = IntMatrix::from_i64(&[&[2, 4, 6], &[3, 5, 7], &[5, 9, 13]]);
        let (h, t, rank) = hermite_with_transform(&m);
        assert_eq!(&t * &m, h);
        assert_eq!(t.determinant().abs(), big(1));
        assert_eq!(rank, 2);
        let k = left_kernel(&m);
        assert_eq!(k.rows(), 1);
        assert!((&k * &m).is_zero());
    }

    #[test]
    fn intersection_of_cyclic_lattices() {
        // 2Z ∩ 3Z = 6Z, checked against brute force over [-100, 100]
        let i = lat(&[&[2]]).intersect(&lat(&[&[3]]));
        for x in -100i64..=100 {
            let both = x % 2 == 0 && x % 3 == 0;
            assert_eq!(i.contains(&[big(x)]), both, "x = {x}");
        }
        assert_eq!(i, lat(&[&[6]]));
    }

    #[test]
    fn membership_and_redundant_generators() {
        assert_eq!(lat(&[&[2]]), lat(&[&[-2], &[4]]));
        let l = lat(&[&[1, 1], &[0, 3]]);
        assert!(l.contains(&[big(2), big(5)]));
        assert!(!l.contains(&[big(1), big(2)]));
        assert_eq!(l.index_of(&lat(&[&[2, 2], &[0, 3]])), Some(big(2)));
    }
}
