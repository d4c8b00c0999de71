use crate::error::{Error, Result};

use super::complex::{SimplicialComplex, SimplicialMap};
use super::homology::{homology, MAX_DEGREE};
use super::tower::PolyhedralTower;

/// Largest subdivided circle the solenoid model builds.
pub const MAX_SOLENOID_VERTICES: usize = 729;
pub const MAX_TELESCOPE_LENGTH: usize = 8;
pub const MAX_UNBOUNDED_INDEX: usize = 3;

/// Hollow `n`-gon on vertices `0..n`.
pub fn cycle(n: usize) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(Error::InvalidSimplicial(format!(
            "a {n}-gon is not a simplicial circle"
        )));
    }
    SimplicialComplex::from_facets(n, &(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>())
}

/// `i ↦ i mod |target|` between cycles whose sizes divide.
pub fn cycle_cover(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
) -> Result<SimplicialMap> {
    let m = target.vertices();
    SimplicialMap::new(
        source.clone(),
        target.clone(),
        (0..source.vertices()).map(|i| i % m).collect(),
    )
}

/// Circles `C_{3p^k}` for `k = 0..=depth` joined by the `p`-fold covers; the
/// top circle is the loop complex, and its loop bond is the `p`-fold cover
/// from the next circle composed with the inverse of `i ↦ ⌊i/p⌋`.
pub fn solenoid_tower(p: usize, depth: usize) -> Result<PolyhedralTower> {
    if !(1..=5).contains(&p) {
        return Err(Error::BudgetExceeded(format!(
            "covering degree {p} outside 1..=5"
        )));
    }
    let top = (0..=depth + 1).try_fold(3usize, |acc, k| {
        if k == 0 {
            Some(acc)
        } else {
            acc.checked_mul(p)
        }
    });
    match top {
        Some(v) if v <= MAX_SOLENOID_VERTICES => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "solenoid of degree {p} and depth {depth} is too large"
            )))
        }
    }
    let circles: Vec<SimplicialComplex> = (0..=depth + 1)
        .map(|k| cycle(3 * p.pow(k as u32)))
        .collect::<Result<_>>()?;
    let maps = (0..depth.saturating_sub(1))
        .map(|k| cycle_cover(&circles[k + 1], &circles[k]))
        .collect::<Result<Vec<_>>>()?;
    let l = circles[depth].clone();
    let s = circles[depth + 1].clone();
    let attach = if depth > 0 {
        Some(cycle_cover(&l, &circles[depth - 1])?)
    } else {
        None
    };
    let cover = cycle_cover(&s, &l)?;
    let retraction = SimplicialMap::new(
        s.clone(),
        l.clone(),
        (0..s.vertices()).map(|i| i / p).collect(),
    )?;
    PolyhedralTower::new(
        circles[..depth].to_vec(),
        maps,
        l,
        cover,
        Some(retraction),
        attach,
    )
}

/// Finite mapping telescope of `K_0 → K_1 → … → K_m`: the union of the
/// mapping cylinders, each triangulated by the staircase subdivision of
/// `σ × I` with the top face pushed forward along the map. Returns the complex
/// and the vertex offset of each `K_i`.
pub fn telescope(
    complexes: &[SimplicialComplex],
    maps: &[SimplicialMap],
) -> Result<(SimplicialComplex, Vec<usize>)> {
    if complexes.is_empty() || complexes.len() > MAX_TELESCOPE_LENGTH + 1 {
        return Err(Error::BudgetExceeded(format!(
            "telescope of {} complexes; the limit is {MAX_TELESCOPE_LENGTH} maps",
            complexes.len()
        )));
    }
    if maps.len() + 1 != complexes.len() {
        return Err(Error::ShapeMismatch(
            "a telescope needs one map between consecutive complexes".into(),
        ));
    }
    for (i, f) in maps.iter().enumerate() {
        if f.source() != &complexes[i] || f.target() != &complexes[i + 1] {
            return Err(Error::ShapeMismatch(format!("map {i} has the wrong ends")));
        }
    }
    let offsets: Vec<usize> = complexes
        .iter()
        .scan(0, |acc, k| {
            let o = *acc;
            *acc += k.vertices();
            Some(o)
        })
        .collect();
    let total = offsets.last().unwrap() + complexes.last().unwrap().vertices();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for (i, k) in complexes.iter().enumerate() {
        for d in 0..=k.dimension().max(0) as usize {
            facets.extend(
                k.simplices(d)
                    .iter()
                    .map(|s| s.iter().map(|v| v + offsets[i]).collect()),
            );
        }
    }
    for (i, f) in maps.iter().enumerate() {
        let k = &complexes[i];
        for d in 0..=k.dimension().max(0) as usize {
            for s in k.simplices(d) {
                for r in 0..s.len() {
                    let mut cell: Vec<usize> = s[..=r].iter().map(|v| v + offsets[i]).collect();
                    cell.extend(s[r..].iter().map(|&v| f.vertex_map()[v] + offsets[i + 1]));
                    cell.sort_unstable();
                    cell.dedup();
                    facets.push(cell);
                }
            }
        }
    }
    let t = SimplicialComplex::from_facets(total, &facets)?;
    // the telescope deformation retracts onto its last complex
    let last = complexes.last().unwrap();
    for n in 0..=(last.dimension().max(0) as usize + 1).min(MAX_DEGREE) {
        if homology(&t, n)?.group() != homology(last, n)?.group() {
            return Err(Error::CertificateReplay(format!(
                "telescope homology differs from its end in degree {n}"
            )));
        }
    }
    Ok((t, offsets))
}

/// `c_n`, the least nonnegative member of `1 + 3 + … + 3^{n-1} + 3^n Z`.
fn coset_start(n: usize) -> usize {
    (3usize.pow(n as u32) - 1) / 2
}

/// Whether the circle over `t ∈ Z/3^m` carries a disk in `P_mn`.
pub fn disk_at(m: usize, n: usize, t: usize) -> bool {
    // for m < n every circle is filled; otherwise exactly E_n = Z ∖ C_n
    m < n || t % 3usize.pow(n as u32) != coset_start(n)
}

/// Model of `P_mn`: a base circle on `3·3^m` vertices (three per unit
/// length), a triangle attached at each integer point `t` through base vertex
/// `3t`, filled when [`disk_at`] holds. Circle `t` uses vertices
/// `3·3^m + 2t` and `3·3^m + 2t + 1`.
pub fn unbounded_colim_complex(m: usize, n: usize) -> Result<SimplicialComplex> {
    if m > MAX_UNBOUNDED_INDEX || n > MAX_UNBOUNDED_INDEX {
        return Err(Error::BudgetExceeded(format!(
            "P_{m}{n} exceeds the index budget {MAX_UNBOUNDED_INDEX}"
        )));
    }
    let points = 3usize.pow(m as u32);
    let base = 3 * points;
    let mut facets: Vec<Vec<usize>> = (0..base).map(|i| vec![i, (i + 1) % base]).collect();
    for t in 0..points {
        let (b, a, a2) = (3 * t, base + 2 * t, base + 2 * t + 1);
        if disk_at(m, n, t) {
            facets.push(vec![b, a, a2]);
        } else {
            facets.extend([vec![b, a], vec![a, a2], vec![b, a2]]);
        }
    }
    SimplicialComplex::from_facets(base + 2 * points, &facets)
}

/// Three-fold covering `P_{m+1,n} → P_mn`.
pub fn unbounded_colim_cover(m: usize, n: usize) -> Result<SimplicialMap> {
    let (src, tgt) = (
        unbounded_colim_complex(m + 1, n)?,
        unbounded_colim_complex(m, n)?,
    );
    let (big, small) = (3usize.pow(m as u32 + 1), 3usize.pow(m as u32));
    let vm = (0..src.vertices())
        .map(|v| {
            if v < 3 * big {
                v % (3 * small)
            } else {
                let (t, side) = ((v - 3 * big) / 2, (v - 3 * big) % 2);
                3 * small + 2 * (t % small) + side
            }
        })
        .collect();
    SimplicialMap::new(src, tgt, vm)
}

/// Inclusion `P_mn → P_{m,n+1}`; only disks are added.
pub fn unbounded_colim_inclusion(m: usize, n: usize) -> Result<SimplicialMap> {
    let (src, tgt) = (
        unbounded_colim_complex(m, n)?,
        unbounded_colim_complex(m, n + 1)?,
    );
    let vm = (0..src.vertices()).collect();
    SimplicialMap::new(src, tgt, vm)
}
