use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{Element, FgAbGroup, Presentation};
use super::lattice::{left_kernel, solve_rows, Lattice};
use super::matrix::IntMatrix;
use super::subgroup::{EmbeddedSubgroup, Quotient, Subgroup};
use crate::error::{Error, Result};

/// A homomorphism between groups in canonical coordinates. Column `j` of the
/// matrix is the image of source generator `j`; torsion rows are kept reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl Homomorphism {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let rel = target.relation_lattice();
        for (j, d) in source.torsion().iter().enumerate() {
            let col: Vec<BigInt> = matrix.col(j).iter().map(|a| a * d).collect();
            if !rel.contains(&col) {
                return Err(Error::IllDefinedHomomorphism(format!(
                    "{d} times the image of generator {j} is nonzero in {target}"
                )));
            }
        }
        let mut matrix = matrix;
        for (i, e) in target.torsion().iter().enumerate() {
            matrix.reduce_row_mod(i, e);
        }
        Ok(Homomorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn from_i64(source: &FgAbGroup, target: &FgAbGroup, rows: &[&[i64]]) -> Result<Self> {
        let m = if rows.is_empty() {
            IntMatrix::zeros(0, source.ngens())
        } else {
            IntMatrix::from_i64(rows)
        };
        Self::new(source.clone(), target.clone(), m)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Homomorphism {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Homomorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FgAbGroup, k: i64) -> Self {
        Self::new(
            g.clone(),
            g.clone(),
            IntMatrix::scalar(g.ngens(), &BigInt::from(k)),
        )
        .expect("scalar maps are well defined")
    }

    /// Homomorphism determined by the images of the canonical generators.
    pub fn from_images(source: &FgAbGroup, target: &FgAbGroup, images: &[Element]) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::ShapeMismatch(
                "one image per generator required".into(),
            ));
        }
        if images.iter().any(|x| x.group() != target) {
            return Err(Error::AmbientMismatch);
        }
        let cols: Vec<Vec<BigInt>> = images.iter().map(|x| x.coords().to_vec()).collect();
        Self::new(
            source.clone(),
            target.clone(),
            IntMatrix::from_columns(target.ngens(), &cols),
        )
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.group() != &self.source {
            return Err(Error::NotAMember(format!(
                "{x:?} is not in {}",
                self.source
            )));
        }
        self.target.element(self.matrix.mul_vec(x.coords()))
    }

    /// Applies the matrix to raw source coordinates.
    pub fn apply_coords(&self, x: &[BigInt]) -> Element {
        self.target
            .element(self.matrix.mul_vec(x))
            .expect("matrix shape checked at construction")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism> {
        if inner.target != self.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, inner.source, inner.target
            )));
        }
        Homomorphism::new(
            inner.source.clone(),
            self.target.clone(),
            &self.matrix * &inner.matrix,
        )
    }

    pub fn add(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch(
                "sum of homomorphisms with different ends".into(),
            ));
        }
        Homomorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn sub(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch(
                "difference of homomorphisms with different ends".into(),
            ));
        }
        Homomorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&other.matrix),
        )
    }

    pub fn pow(&self, e: u32) -> Result<Homomorphism> {
        if self.source != self.target {
            return Err(Error::ShapeMismatch("power of a non-endomorphism".into()));
        }
        let mut acc = Homomorphism::identity(&self.source);
        for _ in 0..e {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn image(&self) -> Subgroup {
        let gens = (0..self.source.ngens())
            .map(|j| self.apply_coords(&self.source.generator(j).coords().to_vec()))
            .collect();
        Subgroup::from_generators(&self.target, gens).expect("images lie in the target")
    }

    /// Kernel, computed from the integer system `A x ∈ R_target`.
    pub fn kernel(&self) -> Subgroup {
        let n = self.source.ngens();
        let rel = self.target.relation_rows();
        let system = self.matrix.transpose().vstack(&rel);
        let k = left_kernel(&system);
        let x_part = k.select_cols(&(0..n).collect::<Vec<_>>());
        Subgroup::from_lattice(&self.source, Lattice::from_generators(&x_part))
    }

    /// Preimage of a subgroup of the target.
    pub fn preimage(&self, s: &Subgroup) -> Result<Subgroup> {
        if s.ambient() != &self.target {
            return Err(Error::AmbientMismatch);
        }
        let n = self.source.ngens();
        let system = self.matrix.transpose().vstack(s.lattice().basis());
        let k = left_kernel(&system);
        let x_part = k.select_cols(&(0..n).collect::<Vec<_>>());
        Ok(Subgroup::from_lattice(
            &self.source,
            Lattice::from_generators(&x_part),
        ))
    }

    pub fn image_of(&self, s: &Subgroup) -> Result<Subgroup> {
        if s.ambient() != &self.source {
            return Err(Error::AmbientMismatch);
        }
        let gens = s
            .lattice()
            .basis()
            .to_rows()
            .iter()
            .map(|r| self.apply_coords(r))
            .collect();
        Subgroup::from_generators(&self.target, gens)
    }

    /// Some `x` with `self(x) = y`, if `y` is in the image.
    pub fn lift(&self, y: &Element) -> Result<Option<Element>> {
        if y.group() != &self.target {
            return Err(Error::NotAMember(format!(
                "{y:?} is not in {}",
                self.target
            )));
        }
        let n = self.source.ngens();
        let system = self.matrix.transpose().vstack(&self.target.relation_rows());
        Ok(solve_rows(&system, y.coords()).map(|c| {
            self.source
                .element(c[..n].to_vec())
                .expect("source dimension")
        }))
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<Homomorphism> {
        if !self.is_injective() {
            return Err(Error::IllDefinedHomomorphism("map is not injective".into()));
        }
        let images = self
            .target
            .generators()
            .iter()
            .map(|g| {
                self.lift(g)?
                    .ok_or_else(|| Error::IllDefinedHomomorphism("map is not surjective".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Homomorphism::from_images(&self.target, &self.source, &images)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Restriction to embedded subgroups: `sub_src → sub_tgt`, defined when the
    /// image of `sub_src` lies in `sub_tgt`.
    pub fn restrict(&self, src: &EmbeddedSubgroup, tgt: &EmbeddedSubgroup) -> Result<Homomorphism> {
        if src.ambient() != &self.source || tgt.ambient() != &self.target {
            return Err(Error::AmbientMismatch);
        }
        let images = src
            .group()
            .generators()
            .iter()
            .map(|g| {
                let x = src.inclusion().apply(g)?;
                let y = self.apply(&x)?;
                tgt.coords_of(&y)
            })
            .collect::<Result<Vec<_>>>()?;
        Homomorphism::from_images(src.group(), tgt.group(), &images)
    }

    /// Map induced on quotients `source/S → target/T`; requires `self(S) ⊆ T`.
    pub fn induced_on_quotients(&self, src: &Quotient, tgt: &Quotient) -> Result<Homomorphism> {
        if src.ambient() != &self.source || tgt.ambient() != &self.target {
            return Err(Error::AmbientMismatch);
        }
        if !tgt
            .kernel()
            .contains_subgroup(&self.image_of(src.kernel())?)?
        {
            return Err(Error::IllDefinedHomomorphism(
                "subgroup is not mapped into the target subgroup".into(),
            ));
        }
        let images = src
            .group()
            .generators()
            .iter()
            .map(|g| tgt.projection().apply(&self.apply(&src.lift(g))?))
            .collect::<Result<Vec<_>>>()?;
        Homomorphism::from_images(src.group(), tgt.group(), &images)
    }

    /// Transport along isomorphisms given as coordinate changes.
    pub fn with_ends(&self, source: FgAbGroup, target: FgAbGroup) -> Result<Homomorphism> {
        Homomorphism::new(source, target, self.matrix.clone())
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} via {:?}",
            self.source, self.target, self.matrix
        )
    }
}

/// Canonical direct sum of finitely many groups with injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgAbGroup,
    pub injections: Vec<Homomorphism>,
    pub projections: Vec<Homomorphism>,
}

impl DirectSum {
    pub fn new(summands: &[FgAbGroup]) -> DirectSum {
        let total: usize = summands.iter().map(|g| g.ngens()).sum();
        let mut rows = Vec::new();
        let mut offset = 0;
        for g in summands {
            for (i, d) in g.torsion().iter().enumerate() {
                let mut r = vec![BigInt::zero(); total];
                r[offset + i] = d.clone();
                rows.push(r);
            }
            offset += g.ngens();
        }
        let rel = IntMatrix::from_rows(rows.len(), total, rows);
        let pres = Presentation::new(&rel);
        let group = pres.group.clone();
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        let mut offset = 0;
        for g in summands {
            let n = g.ngens();
            let cols: Vec<usize> = (offset..offset + n).collect();
            let inj = Homomorphism::new(g.clone(), group.clone(), pres.coord.select_cols(&cols))
                .expect("injection is well defined");
            let rows: Vec<usize> = cols.clone();
            let proj = Homomorphism::new(group.clone(), g.clone(), pres.section.select_rows(&rows))
                .expect("projection is well defined");
            injections.push(inj);
            projections.push(proj);
            offset += n;
        }
        DirectSum {
            group,
            injections,
            projections,
        }
    }

    /// Homomorphism into the sum from components `maps[k]: source -> summand k`.
    pub fn pair_into(&self, source: &FgAbGroup, maps: &[Homomorphism]) -> Result<Homomorphism> {
        let mut acc = Homomorphism::zero(source, &self.group);
        for (inj, m) in self.injections.iter().zip(maps) {
            acc = acc.add(&inj.compose(m)?)?;
        }
        Ok(acc)
    }

    /// Homomorphism out of the sum from components `maps[k]: summand k -> target`.
    pub fn copair_from(&self, target: &FgAbGroup, maps: &[Homomorphism]) -> Result<Homomorphism> {
        let mut acc = Homomorphism::zero(&self.group, target);
        for (proj, m) in self.projections.iter().zip(maps) {
            acc = acc.add(&m.compose(proj)?)?;
        }
        Ok(acc)
    }
}

/// Block matrix of homomorphisms between two direct sums.
pub fn sum_map(
    src: &DirectSum,
    tgt: &DirectSum,
    blocks: &[Vec<Homomorphism>],
) -> Result<Homomorphism> {
    let mut acc = Homomorphism::zero(&src.group, &tgt.group);
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let piece = tgt.injections[i].compose(&b.compose(&src.projections[j])?)?;
            acc = acc.add(&piece)?;
        }
    }
    Ok(acc)
}
