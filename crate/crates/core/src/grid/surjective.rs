use crate::error::{Error, Result};
use crate::factorization::LevelMap;
use crate::fgab::{quotient, sum_map, DirectSum, Element, FgAbGroup, Homomorphism, Quotient};
use crate::towers::PeriodicTower;

use super::Grid;

/// Largest number of rows `embed_in_surjective` builds.
pub const SURJECTIVE_DEPTH_BUDGET: usize = 24;

/// `G → P → Q` levelwise short exact, with `P_i = G_i ⊕ G_{i-1} ⊕ … ⊕ G_0`
/// and vertical maps of `P` forgetting the first summand.
#[derive(Clone, Debug)]
pub struct SurjectiveEmbedding {
    pub depth: usize,
    /// The input grid cut to `depth` rows.
    pub g: Grid,
    pub p: Grid,
    pub q: Grid,
    /// `g ↦ (g, p(g), …, p^i(g))` per column.
    pub embed: Vec<LevelMap>,
    pub project: Vec<LevelMap>,
}

impl SurjectiveEmbedding {
    pub fn verify(&self) -> Result<()> {
        let fail = |m: String| Err(Error::CertificateReplay(m));
        for j in 0..self.g.width() {
            let (e, pr) = (&self.embed[j], &self.project[j]);
            for l in 0..self.depth {
                if l > 0 && !self.p.column(j).bond(l - 1).is_surjective() {
                    return fail(format!(
                        "vertical map into row {} of column {j} is not onto",
                        l - 1
                    ));
                }
                if !e.at(l).is_injective() {
                    return fail(format!("embedding at ({l}, {j}) is not injective"));
                }
                if !pr.at(l).is_surjective() || !pr.at(l).kernel().same_as(&e.at(l).image())? {
                    return fail(format!("row {l} of column {j} is not exact"));
                }
            }
            if j + 1 < self.g.width() {
                let (gh, ph, qh) = (
                    &self.g.horizontal()[j],
                    &self.p.horizontal()[j],
                    &self.q.horizontal()[j],
                );
                if ph.compose(e)? != self.embed[j + 1].compose(gh)?
                    || qh.compose(pr)? != self.project[j + 1].compose(ph)?
                {
                    return fail(format!(
                        "faces between columns {j} and {} do not commute",
                        j + 1
                    ));
                }
            }
        }
        Ok(())
    }
}

fn truncated(groups: Vec<FgAbGroup>, bonds: Vec<Homomorphism>) -> Result<PeriodicTower> {
    let top = groups.last().expect("nonempty").clone();
    PeriodicTower::simple(
        groups,
        bonds,
        Homomorphism::identity(&top),
        Some(Homomorphism::identity(&top)),
    )
}

/// Level maps `0..depth` plus the repeated top map on the identity tail.
fn level_map(
    source: &PeriodicTower,
    target: &PeriodicTower,
    mut maps: Vec<Homomorphism>,
) -> Result<LevelMap> {
    maps.push(maps.last().expect("nonempty").clone());
    LevelMap::new(source.clone(), target.clone(), maps)
}

struct Column {
    g: PeriodicTower,
    sums: Vec<DirectSum>,
    p: PeriodicTower,
    quotients: Vec<Quotient>,
    q: PeriodicTower,
    embed: LevelMap,
    project: LevelMap,
}

fn column(t: &PeriodicTower, depth: usize) -> Result<Column> {
    let g = t.truncate(depth - 1);
    // summand m of P_i is G_{i-m}
    let sums: Vec<DirectSum> = (0..depth)
        .map(|i| {
            DirectSum::new(
                &(0..=i)
                    .rev()
                    .map(|r| g.level(r).clone())
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let forget = (0..depth - 1)
        .map(|i| {
            let parts: Vec<Homomorphism> = sums[i + 1].projections[1..].to_vec();
            sums[i].pair_into(&sums[i + 1].group, &parts)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = truncated(sums.iter().map(|s| s.group.clone()).collect(), forget)?;
    let embeds = (0..depth)
        .map(|i| {
            let parts = (0..=i)
                .rev()
                .map(|r| g.composite(r, i))
                .collect::<Result<Vec<_>>>()?;
            sums[i].pair_into(g.level(i), &parts)
        })
        .collect::<Result<Vec<_>>>()?;
    let quotients = (0..depth)
        .map(|i| quotient(&sums[i].group, &embeds[i].image()))
        .collect::<Result<Vec<_>>>()?;
    let qbonds = (0..depth - 1)
        .map(|i| {
            p.bond(i)
                .induced_on_quotients(&quotients[i + 1], &quotients[i])
        })
        .collect::<Result<Vec<_>>>()?;
    let q = truncated(
        quotients.iter().map(|x| x.group().clone()).collect(),
        qbonds,
    )?;
    let embed = level_map(&g, &p, embeds)?;
    let project = level_map(
        &p,
        &q,
        quotients.iter().map(|x| x.projection().clone()).collect(),
    )?;
    Ok(Column {
        g,
        sums,
        p,
        quotients,
        q,
        embed,
        project,
    })
}

pub fn embed_in_surjective(grid: &Grid, depth: usize) -> Result<SurjectiveEmbedding> {
    if depth == 0 || depth > SURJECTIVE_DEPTH_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "depth {depth} is outside 1..={SURJECTIVE_DEPTH_BUDGET}"
        )));
    }
    let cols = grid
        .columns()
        .iter()
        .map(|t| column(t, depth))
        .collect::<Result<Vec<_>>>()?;
    let (mut gh, mut ph, mut qh) = (Vec::new(), Vec::new(), Vec::new());
    for j in 0..cols.len().saturating_sub(1) {
        let (a, b) = (&cols[j], &cols[j + 1]);
        let h = &grid.horizontal()[j];
        let gmaps: Vec<Homomorphism> = (0..depth).map(|i| h.at(i).clone()).collect();
        let pmaps = (0..depth)
            .map(|i| {
                let blocks: Vec<Vec<Homomorphism>> = (0..=i)
                    .map(|m| {
                        (0..=i)
                            .map(|n| {
                                if m == n {
                                    h.at(i - m).clone()
                                } else {
                                    Homomorphism::zero(a.g.level(i - n), b.g.level(i - m))
                                }
                            })
                            .collect()
                    })
                    .collect();
                sum_map(&a.sums[i], &b.sums[i], &blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        let qmaps = (0..depth)
            .map(|i| pmaps[i].induced_on_quotients(&a.quotients[i], &b.quotients[i]))
            .collect::<Result<Vec<_>>>()?;
        gh.push(level_map(&a.g, &b.g, gmaps)?);
        ph.push(level_map(&a.p, &b.p, pmaps)?);
        qh.push(level_map(&a.q, &b.q, qmaps)?);
    }
    let out = SurjectiveEmbedding {
        depth,
        g: Grid::new(cols.iter().map(|c| c.g.clone()).collect(), gh, None)?,
        p: Grid::new(cols.iter().map(|c| c.p.clone()).collect(), ph, None)?,
        q: Grid::new(cols.iter().map(|c| c.q.clone()).collect(), qh, None)?,
        embed: cols.iter().map(|c| c.embed.clone()).collect(),
        project: cols.iter().map(|c| c.project.clone()).collect(),
    };
    out.verify()?;
    Ok(out)
}

/// `γ_i = Σ_{k ≤ i} g^k_i` for threads `g^1, g^2, …` of column 0 with
/// `g^k_i = 0` whenever `k > i`; `elements[k - 1]` is `g^k`.
pub fn summation_witness(grid: &Grid, elements: &[Vec<Element>]) -> Result<Vec<Element>> {
    let t = grid.column(0);
    let depth = elements.first().map_or(0, Vec::len);
    for (n, thread) in elements.iter().enumerate() {
        let k = n + 1;
        if thread.len() != depth {
            return Err(Error::ShapeMismatch(format!(
                "thread {k} has {} entries, expected {depth}",
                thread.len()
            )));
        }
        for (i, x) in thread.iter().enumerate() {
            if x.group() != t.level(i) {
                return Err(Error::NotAMember(format!("entry {i} of thread {k}")));
            }
            if i + 1 < depth && t.bond(i).apply(&thread[i + 1])? != *x {
                return Err(Error::NotAMember(format!(
                    "element {k} is not a thread at level {i}"
                )));
            }
            if k > i && !x.is_zero() {
                return Err(Error::VanishingPattern(format!(
                    "element {k} is nonzero at level {i}"
                )));
            }
        }
    }
    let gamma: Vec<Element> = (0..depth)
        .map(|i| {
            elements[..i.min(elements.len())]
                .iter()
                .try_fold(t.level(i).zero(), |acc, th| acc.add(&th[i]))
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 0..depth.saturating_sub(1) {
        if t.bond(i).apply(&gamma[i + 1])? != gamma[i] {
            return Err(Error::CertificateReplay(format!(
                "partial sums fail the thread condition at level {i}"
            )));
        }
    }
    Ok(gamma)
}
