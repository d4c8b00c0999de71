use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::towers::{finset_lim, FinSetLevel, FinSetTower};

/// Pointed maps `A_i → C_i`; the last listed map repeats on the identity tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinSetLevelMap {
    pub source: FinSetTower,
    pub target: FinSetTower,
    pub maps: Vec<Vec<usize>>,
}

impl FinSetLevelMap {
    pub fn new(source: FinSetTower, target: FinSetTower, maps: Vec<Vec<usize>>) -> Result<Self> {
        source.validate()?;
        target.validate()?;
        if maps.is_empty() {
            return Err(Error::ShapeMismatch(
                "at least one level map is required".into(),
            ));
        }
        let m = FinSetLevelMap {
            source,
            target,
            maps,
        };
        for k in 0..=m.horizon() + 1 {
            let (a, c) = (m.source.level(k), m.target.level(k));
            let f = m.at(k);
            if f.len() != a.size || f.iter().any(|&x| x >= c.size) || f[a.basepoint] != c.basepoint
            {
                return Err(Error::ShapeMismatch(format!(
                    "level {k} map is not a pointed map"
                )));
            }
            if k > 0 {
                for x in 0..a.size {
                    let down = m.source.bond(k - 1, x);
                    if m.at(k - 1)[down] != m.target.bond(k - 1, f[x]) {
                        return Err(Error::NotCommuting(format!("square at level {}", k - 1)));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn at(&self, k: usize) -> &[usize] {
        &self.maps[k.min(self.maps.len() - 1)]
    }

    /// Depth past which all three towers and the maps are constant.
    pub fn horizon(&self) -> usize {
        self.source
            .identity_tail_from
            .max(self.target.identity_tail_from)
            .max(self.maps.len() - 1)
            .max(self.source.levels.len() - 1)
            .max(self.target.levels.len() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinSetFactorCertificate {
    /// `B_i = f_i(A_i)`, relabelled in increasing order of the target points.
    pub image_tower: FinSetTower,
    /// `embeddings[i][b]` is the target point labelled `b` in `B_i`.
    pub embeddings: Vec<Vec<usize>>,
    pub horizon: usize,
    pub threads_a: usize,
    pub threads_b: usize,
    pub threads_c: usize,
    pub lim_first_surjective: bool,
    pub lim_second_injective: bool,
}

pub fn finite_set_factor(f: &FinSetLevelMap) -> Result<FinSetFactorCertificate> {
    // one level past the horizon, where every map is already the identity
    let h = f.horizon() + 1;
    let mut embeddings = Vec::with_capacity(h + 1);
    let mut levels = Vec::with_capacity(h + 1);
    for k in 0..=h {
        let img: Vec<usize> = f
            .at(k)
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos = |c: usize| img.binary_search(&c).expect("image point");
        let base = pos(f.target.level(k).basepoint);
        let map = if k == 0 {
            vec![]
        } else {
            img.iter()
                .map(|&c| {
                    let prev: &Vec<usize> = &embeddings[k - 1];
                    prev.binary_search(&f.target.bond(k - 1, c))
                        .expect("commuting squares keep images nested")
                })
                .collect()
        };
        levels.push(FinSetLevel {
            size: img.len(),
            basepoint: base,
            map,
        });
        embeddings.push(img);
    }
    let image_tower = FinSetTower::new(levels, h)?;
    let la = finset_lim(&f.source, h)?;
    let lb = finset_lim(&image_tower, h)?;
    let lc = finset_lim(&f.target, h)?;
    let push_a: BTreeSet<Vec<usize>> = la
        .threads
        .iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .map(|(k, &x)| embeddings[k].binary_search(&f.at(k)[x]).expect("image"))
                .collect()
        })
        .collect();
    let lim_first_surjective = lb.threads.iter().all(|t| push_a.contains(t));
    let push_b: BTreeSet<Vec<usize>> = lb
        .threads
        .iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .map(|(k, &b)| embeddings[k][b])
                .collect()
        })
        .collect();
    let lim_second_injective =
        push_b.len() == lb.threads.len() && push_b.iter().all(|t| lc.threads.contains(t));
    Ok(FinSetFactorCertificate {
        image_tower,
        embeddings,
        horizon: h,
        threads_a: la.len(),
        threads_b: lb.len(),
        threads_c: lc.len(),
        lim_first_surjective,
        lim_second_injective,
    })
}
