use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, Homomorphism, IntMatrix};

/// Finite simplicial complex on vertices `0..vertices`; `simplices[d]` holds
/// the `d`-simplices as increasing vertex lists, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertices: usize,
    simplices: Vec<Vec<Vec<usize>>>,
}

/// Wire form `{"vertices": n, "simplices": [[v, …], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Checks closure under faces; every vertex must appear as a 0-simplex.
    pub fn new(vertices: usize, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in simplices {
            let mut v = s.clone();
            v.sort_unstable();
            v.dedup();
            if v.is_empty() || v.len() != s.len() {
                return Err(Error::InvalidSimplicial(format!(
                    "{s:?} is not a set of distinct vertices"
                )));
            }
            if let Some(&x) = v.iter().find(|&&x| x >= vertices) {
                return Err(Error::InvalidSimplicial(format!("vertex {x} out of range")));
            }
            if !all.insert(v) {
                return Err(Error::InvalidSimplicial(format!("{s:?} is listed twice")));
            }
        }
        for s in &all {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    if !all.contains(&f) {
                        return Err(Error::InvalidSimplicial(format!(
                            "face {f:?} of {s:?} is missing"
                        )));
                    }
                }
            }
        }
        for v in 0..vertices {
            if !all.contains(&vec![v]) {
                return Err(Error::InvalidSimplicial(format!(
                    "vertex {v} is not a 0-simplex"
                )));
            }
        }
        Ok(Self::from_set(vertices, all))
    }

    /// Closure of the given facets; isolated vertices are added.
    pub fn from_facets(vertices: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = (0..vertices).map(|v| vec![v]).collect();
        for f in facets {
            let mut v = f.clone();
            v.sort_unstable();
            v.dedup();
            if v.len() != f.len() || v.iter().any(|&x| x >= vertices) {
                return Err(Error::InvalidSimplicial(format!("bad facet {f:?}")));
            }
            if v.len() > 16 {
                return Err(Error::BudgetExceeded(format!(
                    "facet of dimension {}",
                    v.len() - 1
                )));
            }
            for mask in 1u32..(1 << v.len()) {
                all.insert(
                    v.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &x)| x)
                        .collect(),
                );
            }
        }
        Ok(Self::from_set(vertices, all))
    }

    fn from_set(vertices: usize, all: BTreeSet<Vec<usize>>) -> Self {
        let dim = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut simplices = vec![Vec::new(); dim];
        for s in all {
            simplices[s.len() - 1].push(s);
        }
        SimplicialComplex {
            vertices,
            simplices,
        }
    }

    pub fn from_doc(doc: &ComplexDoc) -> Result<Self> {
        Self::new(doc.vertices, doc.simplices.clone())
    }

    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc {
            vertices: self.vertices,
            simplices: self.simplices.iter().flatten().cloned().collect(),
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    /// `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.simplices.len() as isize - 1
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.simplices(s.len().checked_sub(1)?)
            .binary_search_by(|x| x.as_slice().cmp(s))
            .ok()
    }

    /// Free chain group `C_d`.
    pub fn chains(&self, d: usize) -> FgAbGroup {
        FgAbGroup::free(self.count(d))
    }

    /// `∂_d: C_d → C_{d-1}`; `∂_0` lands in the zero group.
    pub fn boundary(&self, d: usize) -> Homomorphism {
        let src = self.chains(d);
        if d == 0 {
            return Homomorphism::zero(&src, &FgAbGroup::trivial());
        }
        let tgt = self.chains(d - 1);
        let mut m = IntMatrix::zeros(tgt.ngens(), src.ngens());
        for (j, s) in self.simplices(d).iter().enumerate() {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                let r = self.index_of(&f).expect("closed under faces");
                m[(r, j)] = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
            }
        }
        Homomorphism::new(src, tgt, m).expect("free groups")
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.simplices.len())
            .map(|d| if d % 2 == 0 { 1 } else { -1 } * self.count(d) as i64)
            .sum()
    }

    /// Cone with apex `vertices`.
    pub fn cone(&self) -> SimplicialComplex {
        let apex = self.vertices;
        let mut all: BTreeSet<Vec<usize>> = self.simplices.iter().flatten().cloned().collect();
        all.insert(vec![apex]);
        for s in self.simplices.iter().flatten() {
            let mut c = s.clone();
            c.push(apex);
            all.insert(c);
        }
        Self::from_set(apex + 1, all)
    }
}

/// Simplicial map given on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != source.vertices() {
            return Err(Error::InvalidSimplicial(format!(
                "{} vertex images for {} vertices",
                vertex_map.len(),
                source.vertices()
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.vertices()) {
            return Err(Error::InvalidSimplicial(format!(
                "image vertex {v} out of range"
            )));
        }
        for s in source.simplices.iter().flatten() {
            let mut img: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            img.sort_unstable();
            img.dedup();
            if target.index_of(&img).is_none() {
                return Err(Error::InvalidSimplicial(format!(
                    "image of {s:?} is not a simplex"
                )));
            }
        }
        Ok(SimplicialMap {
            source,
            target,
            vertex_map,
        })
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        SimplicialMap {
            source: k.clone(),
            target: k.clone(),
            vertex_map: (0..k.vertices()).collect(),
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SimplicialMap) -> Result<SimplicialMap> {
        if inner.target != self.source {
            return Err(Error::InvalidSimplicial("maps are not composable".into()));
        }
        let vm = inner
            .vertex_map
            .iter()
            .map(|&v| self.vertex_map[v])
            .collect();
        Ok(SimplicialMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            vertex_map: vm,
        })
    }

    /// Chain map `C_d(source) → C_d(target)`: a simplex goes to its image with
    /// the sign of the sorting permutation, or to 0 when it collapses.
    pub fn chain_map(&self, d: usize) -> Homomorphism {
        let (src, tgt) = (self.source.chains(d), self.target.chains(d));
        let mut m = IntMatrix::zeros(tgt.ngens(), src.ngens());
        let mut cache: HashMap<Vec<usize>, usize> = HashMap::new();
        for (j, s) in self.source.simplices(d).iter().enumerate() {
            let img: Vec<usize> = s.iter().map(|&v| self.vertex_map[v]).collect();
            let mut sorted = img.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() < img.len() {
                continue;
            }
            let inversions = (0..img.len())
                .flat_map(|a| (a + 1..img.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| img[a] > img[b])
                .count();
            let r = *cache
                .entry(sorted.clone())
                .or_insert_with(|| self.target.index_of(&sorted).expect("validated"));
            m[(r, j)] = BigInt::from(if inversions % 2 == 0 { 1 } else { -1 });
        }
        Homomorphism::new(src, tgt, m).expect("free groups")
    }
}
