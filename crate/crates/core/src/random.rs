//! Seeded generators for groups, homomorphisms, towers and level maps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::factorization::LevelMap;
use crate::fgab::lattice::right_kernel;
use crate::fgab::{sum_map, FgAbGroup, Homomorphism, IntMatrix};
use crate::grid::{Grid, RawInvMorphismSequence};
use crate::towers::{direct_sum, lim, PeriodicTower};

/// Invariant-factor chains with torsion order at most 8.
const TORSION_CHAINS: &[&[u64]] = &[
    &[],
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[2, 2],
    &[2, 4],
];

pub fn random_group<R: Rng>(rng: &mut R, max_rank: usize, max_torsion: u64) -> FgAbGroup {
    let chains: Vec<&[u64]> = TORSION_CHAINS
        .iter()
        .copied()
        .filter(|c| c.iter().product::<u64>() <= max_torsion)
        .collect();
    let chain = chains
        .choose(rng)
        .expect("the empty chain always qualifies");
    FgAbGroup::from_invariants(rng.gen_range(0..=max_rank), chain)
}

/// Random homomorphism with entries of size at most `bound` before reduction.
pub fn random_hom<R: Rng>(
    rng: &mut R,
    source: &FgAbGroup,
    target: &FgAbGroup,
    bound: i64,
) -> Homomorphism {
    let (m, n) = (target.ngens(), source.ngens());
    let mut a = IntMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let (e, d) = (target.modulus(i), source.modulus(j));
            let step = match (e.is_zero(), d.is_zero()) {
                // torsion cannot map onto a free coordinate
                (true, false) => continue,
                (false, false) => &e / e.gcd(&d),
                _ => BigInt::from(1),
            };
            a[(i, j)] = step * rng.gen_range(-bound..=bound);
        }
    }
    Homomorphism::new(source.clone(), target.clone(), a).expect("entries respect the orders")
}

pub fn random_tower<R: Rng>(
    rng: &mut R,
    prefix_len: usize,
    period: usize,
    max_rank: usize,
    max_torsion: u64,
) -> PeriodicTower {
    let prefix: Vec<FgAbGroup> = (0..prefix_len)
        .map(|_| random_group(rng, max_rank, max_torsion))
        .collect();
    let cycle: Vec<FgAbGroup> = (0..period)
        .map(|_| random_group(rng, max_rank, max_torsion))
        .collect();
    let bonds = (1..prefix_len)
        .map(|i| random_hom(rng, &prefix[i], &prefix[i - 1], 2))
        .collect();
    let cycle_maps = (0..period)
        .map(|s| random_hom(rng, &cycle[(s + 1) % period], &cycle[s], 2))
        .collect();
    let attach = prefix
        .last()
        .map(|last| random_hom(rng, &cycle[0], last, 2));
    PeriodicTower::new(prefix, bonds, cycle, cycle_maps, attach)
        .expect("random data is well formed")
}

/// Integer basis of all level maps `a → c` (as flattened matrices per level),
/// from the linear system of well-definedness and commutation conditions.
pub fn level_map_basis(a: &PeriodicTower, c: &PeriodicTower) -> Vec<Vec<IntMatrix>> {
    let n = a.distinct_levels();
    let shapes: Vec<(usize, usize)> = (0..n)
        .map(|l| (c.level(l).ngens(), a.level(l).ngens()))
        .collect();
    let offsets: Vec<usize> = shapes
        .iter()
        .scan(0, |acc, &(r, k)| {
            let o = *acc;
            *acc += r * k;
            Some(o)
        })
        .collect();
    let nvars: usize = shapes.iter().map(|&(r, k)| r * k).sum();
    let var = |l: usize, i: usize, j: usize| offsets[l] + i * shapes[l].1 + j;
    // each constraint: linear form over the variables and the row modulus
    let mut forms: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    for l in 0..n {
        let (al, cl) = (a.level(l), c.level(l));
        for j in 0..al.ngens() {
            let d = al.modulus(j);
            if d.is_zero() {
                continue;
            }
            for i in 0..cl.ngens() {
                let mut f = vec![BigInt::zero(); nvars];
                f[var(l, i, j)] = d.clone();
                forms.push((f, cl.modulus(i)));
            }
        }
        let s = a.bond_source(l);
        let (ab, cb) = (a.bond(l).matrix(), c.bond(l).matrix());
        for i in 0..cl.ngens() {
            for j in 0..a.level(s).ngens() {
                let mut f = vec![BigInt::zero(); nvars];
                // (M_l · A_bond)[i][j]
                for t in 0..al.ngens() {
                    f[var(l, i, t)] += &ab[(t, j)];
                }
                // − (C_bond · M_s)[i][j]
                for t in 0..c.level(s).ngens() {
                    f[var(s, t, j)] -= &cb[(i, t)];
                }
                forms.push((f, cl.modulus(i)));
            }
        }
    }
    let slacks: Vec<usize> = (0..forms.len())
        .filter(|&r| !forms[r].1.is_zero())
        .collect();
    let mut e = IntMatrix::zeros(forms.len(), nvars + slacks.len());
    for (r, (f, _)) in forms.iter().enumerate() {
        for (v, x) in f.iter().enumerate() {
            e[(r, v)] = x.clone();
        }
    }
    for (k, &r) in slacks.iter().enumerate() {
        e[(r, nvars + k)] = -forms[r].1.clone();
    }
    let ker = if forms.is_empty() {
        IntMatrix::identity(nvars)
    } else {
        right_kernel(&e).select_cols(&(0..nvars).collect::<Vec<_>>())
    };
    (0..ker.rows())
        .map(|r| {
            (0..n)
                .map(|l| {
                    let (rows, cols) = shapes[l];
                    let data = (0..rows * cols)
                        .map(|t| ker[(r, offsets[l] + t)].clone())
                        .collect();
                    IntMatrix::from_flat(rows, cols, data)
                })
                .collect()
        })
        .collect()
}

/// A random integer combination of the level-map basis (possibly zero).
pub fn random_level_map<R: Rng>(rng: &mut R, a: &PeriodicTower, c: &PeriodicTower) -> LevelMap {
    let basis = level_map_basis(a, c);
    let n = a.distinct_levels();
    let mut mats: Vec<IntMatrix> = (0..n)
        .map(|l| IntMatrix::zeros(c.level(l).ngens(), a.level(l).ngens()))
        .collect();
    for b in &basis {
        let k = BigInt::from(rng.gen_range(-2i64..=2));
        for l in 0..n {
            mats[l] = mats[l].add(&b[l].scale(&k));
        }
    }
    let maps = mats
        .into_iter()
        .enumerate()
        .map(|(l, m)| {
            Homomorphism::new(a.level(l).clone(), c.level(l).clone(), m)
                .expect("solution is well defined")
        })
        .collect();
    LevelMap::new(a.clone(), c.clone(), maps).expect("solution commutes")
}

/// A grid whose colimit is forced to vanish: the last column is `T^copies`
/// with a shift along a random endomorphism of `T`, so every element dies
/// within `(width - 1) + copies` horizontal steps. Returns that bound.
pub fn random_nilpotent_grid<R: Rng>(rng: &mut R, width: usize, copies: usize) -> (Grid, usize) {
    let (p, q) = (rng.gen_range(0..=1), rng.gen_range(1..=2));
    let base = random_tower(rng, p, q, 2, 8);
    let mut columns: Vec<PeriodicTower> = (0..width - 1)
        .map(|_| {
            if rng.gen_bool(0.5) {
                base.clone()
            } else {
                random_tower(rng, p, q, 2, 8)
            }
        })
        .collect();
    let (last, sums) = direct_sum(&vec![base.clone(); copies]).expect("one shape");
    let phi = random_level_map(rng, &base, &base);
    let n = base.distinct_levels();
    let shift = (0..n)
        .map(|l| {
            let blocks: Vec<Vec<Homomorphism>> = (0..copies)
                .map(|a| {
                    (0..copies)
                        .map(|b| {
                            if a == b + 1 {
                                phi.at(l).clone()
                            } else {
                                Homomorphism::zero(base.level(l), base.level(l))
                            }
                        })
                        .collect()
                })
                .collect();
            sum_map(&sums[l], &sums[l], &blocks).expect("block sizes match")
        })
        .collect();
    let tail = LevelMap::new(last.clone(), last.clone(), shift).expect("shift commutes");
    let mut horizontal: Vec<LevelMap> = (0..width.saturating_sub(2))
        .map(|j| random_level_map(rng, &columns[j], &columns[j + 1]))
        .collect();
    if width > 1 {
        // into T, then into the first summand
        let into_base = random_level_map(rng, &columns[width - 2], &base);
        let inject = (0..n)
            .map(|l| {
                sums[l].injections[0]
                    .compose(into_base.at(l))
                    .expect("composable")
            })
            .collect();
        horizontal.push(
            LevelMap::new(columns[width - 2].clone(), last.clone(), inject).expect("commutes"),
        );
    }
    columns.push(last);
    let grid = Grid::new(columns, horizontal, Some(tail)).expect("consistent grid");
    (grid, width - 1 + copies)
}

/// A single column with a nonzero lim and the identity as tail.
pub fn random_identity_grid<R: Rng>(rng: &mut R) -> Grid {
    loop {
        let (p, q) = (rng.gen_range(0..=1), rng.gen_range(1..=2));
        let t = random_tower(rng, p, q, 2, 8);
        if !lim(&t).expect("lim of a random tower").is_trivial() {
            return Grid::new(vec![t.clone()], vec![], Some(LevelMap::identity(&t)))
                .expect("identity tail");
        }
    }
}

/// Inv-morphisms `f_ij = φ_ij ∘ (bonding from row l_ij to row i)` from random
/// level maps `φ_j`; the indices are nondecreasing with `l_ij ≥ i`, so some
/// inputs need normalization.
pub fn random_raw_sequence<R: Rng>(
    rng: &mut R,
    width: usize,
    depth: usize,
) -> RawInvMorphismSequence {
    let (p, q) = (rng.gen_range(0..=1), rng.gen_range(1..=2));
    let towers: Vec<PeriodicTower> = (0..width).map(|_| random_tower(rng, p, q, 2, 8)).collect();
    let mut indices = Vec::new();
    let mut components = Vec::new();
    for j in 0..width - 1 {
        let phi = random_level_map(rng, &towers[j], &towers[j + 1]);
        let mut l = vec![0usize];
        for i in 1..=depth {
            let next = (l[i - 1] + rng.gen_range(0..=2)).max(i);
            l.push(next);
        }
        let f = (0..=depth)
            .map(|i| {
                phi.at(i)
                    .compose(&towers[j].composite(i, l[i]).expect("l_ij ≥ i"))
                    .expect("composable")
            })
            .collect();
        indices.push(l);
        components.push(f);
    }
    RawInvMorphismSequence::new(towers, indices, components).expect("compatible components")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn identity_lies_in_the_level_map_lattice() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let t = random_tower(&mut rng, 1, 1, 2, 8);
            let basis = level_map_basis(&t, &t);
            assert!(!basis.is_empty());
            let f = random_level_map(&mut rng, &t, &t);
            assert_eq!(f.maps().len(), t.distinct_levels());
        }
    }

    #[test]
    fn no_level_maps_from_doubling_to_identity() {
        let z = FgAbGroup::free(1);
        let a = PeriodicTower::from_endo(Homomorphism::scalar(&z, 2)).unwrap();
        let c = PeriodicTower::from_endo(Homomorphism::identity(&z)).unwrap();
        // 2m = m forces m = 0
        assert!(level_map_basis(&a, &c).is_empty());
    }
}

#[cfg(test)]
mod factor_smoke {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::factorization::{factor_quotient, factor_subgroup};

    #[test]
    fn random_maps_factor_with_all_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let (p, q) = (rng.gen_range(0..=1), rng.gen_range(1..=2));
            let a = random_tower(&mut rng, p, q, 2, 8);
            let c = if rng.gen_bool(0.5) {
                a.clone()
            } else {
                random_tower(&mut rng, p, q, 2, 8)
            };
            let f = random_level_map(&mut rng, &a, &c);
            assert!(factor_quotient(&f).unwrap().all_hold());
            assert!(factor_subgroup(&f).unwrap().all_hold());
        }
    }
}
