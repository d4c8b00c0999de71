use super::*;
use crate::towers::{FinSetLevel, FinSetTower};

fn z(n: usize) -> FgAbGroup {
    FgAbGroup::free(n)
}

fn tower(g: &FgAbGroup, rows: &[&[i64]]) -> PeriodicTower {
    PeriodicTower::from_endo(Homomorphism::from_i64(g, g, rows).unwrap()).unwrap()
}

fn single(a: &PeriodicTower, c: &PeriodicTower, rows: &[&[i64]]) -> LevelMap {
    let m = Homomorphism::from_i64(a.level(0), c.level(0), rows).unwrap();
    LevelMap::new(a.clone(), c.clone(), vec![m]).unwrap()
}

#[test]
fn level_map_validation() {
    let a = tower(&z(1), &[&[2]]);
    let c = tower(&z(1), &[&[1]]);
    // 2x = x fails unless the map is zero
    let m = Homomorphism::scalar(&z(1), 1);
    assert!(matches!(
        LevelMap::new(a.clone(), c.clone(), vec![m]),
        Err(Error::NotCommuting(_))
    ));
    assert!(LevelMap::new(a.clone(), c, vec![Homomorphism::scalar(&z(1), 0)]).is_ok());
    assert!(matches!(
        LevelMap::new(a.clone(), a, vec![]),
        Err(Error::ShapeMismatch(_))
    ));
}

#[test]
fn quotient_injective_is_identity() {
    let a = tower(&z(2), &[&[2, 1], &[0, 1]]);
    let f = LevelMap::identity(&a);
    let c = factor_quotient(&f).unwrap();
    assert!(c.all_hold());
    assert!(c.l_subgroups.iter().all(|l| l.is_trivial()));
    assert_eq!(c.intermediate.level(0), a.level(0));
    assert!(c.first.maps().iter().all(|m| m.is_isomorphism()));
}

#[test]
fn quotient_projection_example() {
    let a = tower(&z(2), &[&[2, 0], &[0, 1]]);
    let c = tower(&z(1), &[&[1]]);
    let f = single(&a, &c, &[&[0, 1]]);
    let cert = factor_quotient(&f).unwrap();
    assert!(cert.all_hold());
    assert!(cert.l_subgroups[0].is_trivial());
    assert_eq!(cert.intermediate.level(0), &z(2));
    assert_eq!(lim(&a).unwrap().group(), &z(1));
    assert!(f
        .on_loop()
        .restrict(
            &lim(&a).unwrap().embedded,
            &Subgroup::whole(&z(1)).as_group()
        )
        .unwrap()
        .is_injective());
}

#[test]
fn quotient_of_zero_map() {
    let a = tower(&z(1), &[&[1]]);
    let f = single(&a, &a, &[&[0]]);
    let cert = factor_quotient(&f).unwrap();
    assert!(cert.l_subgroups[0].is_whole());
    assert!(cert.intermediate.level(0).is_trivial());
    assert!(cert.all_hold());
}

#[test]
fn subgroup_examples() {
    let a = tower(&z(1), &[&[1]]);
    let surj = factor_subgroup(&LevelMap::identity(&a)).unwrap();
    assert!(surj.l_subgroups[0].is_whole());

    let f = single(&a, &a, &[&[2]]);
    let cert = factor_subgroup(&f).unwrap();
    assert!(cert.all_hold());
    // K = Z/2 constant, its lim is all of it, so B = C
    assert!(cert.l_subgroups[0].is_whole());
    assert_eq!(cert.intermediate.level(0), &z(1));

    let zero = single(&a, &a, &[&[0]]);
    let cert = factor_subgroup(&zero).unwrap();
    assert!(cert.l_subgroups[0].is_whole());
}

#[test]
fn main_examples() {
    let zt = zero_tower_like(&tower(&z(1), &[&[1]]));
    let a = tower(&z(1), &[&[1]]);
    let to_zero = single(&a, &zt, &[]);
    let from_zero = single(&zt, &a, &[&[]]);
    let f = from_zero.compose(&to_zero).unwrap();
    let cert = factor_main(&f, &to_zero, &from_zero, Evidence::IntermediateMl).unwrap();
    assert!(cert.intermediate.level(0).is_trivial());
    assert_eq!(cert.pro_trivial_witness, Some(0));

    // Z --mod 2--> Z/2 --0--> Z with identity bondings
    let b = tower(&FgAbGroup::cyclic(2), &[&[1]]);
    let g = single(&a, &b, &[&[1]]);
    let h = single(&b, &a, &[&[0]]);
    let f = h.compose(&g).unwrap();
    let cert = factor_main(&f, &g, &h, Evidence::IntermediateMl).unwrap();
    assert_eq!(cert.flag("lim_trivial"), Some(true));
    assert_eq!(cert.flag("mittag_leffler"), Some(true));
    assert!(cert.pro_trivial_witness.is_some());
    cert.replay().unwrap();
}

#[test]
fn main_rejects_violated_hypotheses() {
    let a = tower(&z(1), &[&[1]]);
    let id = LevelMap::identity(&a);
    assert!(matches!(
        factor_main(&id, &id, &id, Evidence::IntermediateMl),
        Err(Error::HypothesisViolated(_))
    ));
    // lim B = 0 here, but lim¹ A → lim¹ B is the identity of a nonzero group
    let two = tower(&z(1), &[&[2]]);
    let id2 = LevelMap::identity(&two);
    for ev in [Evidence::IntermediateMl, Evidence::SourceMl] {
        assert!(matches!(
            factor_main(&id2, &id2, &id2, ev),
            Err(Error::HypothesisViolated(_))
        ));
    }
    let other = single(&a, &a, &[&[2]]);
    assert!(matches!(
        factor_main(&other, &id, &id, Evidence::SourceMl),
        Err(Error::HypothesisViolated(_))
    ));
}

fn set_tower(sizes: &[usize]) -> FinSetTower {
    let levels = sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| FinSetLevel {
            size: n,
            basepoint: 0,
            map: if k == 0 {
                vec![]
            } else {
                (0..n).map(|x| x.min(sizes[k - 1] - 1)).collect()
            },
        })
        .collect();
    FinSetTower::new(levels, sizes.len() - 1).unwrap()
}

#[test]
fn finite_set_examples() {
    let a = set_tower(&[2, 3, 3]);
    let id: Vec<Vec<usize>> = (0..3).map(|k| (0..a.level(k).size).collect()).collect();
    let f = FinSetLevelMap::new(a.clone(), a.clone(), id).unwrap();
    let c = finite_set_factor(&f).unwrap();
    assert!(c.lim_first_surjective && c.lim_second_injective);
    assert_eq!(c.threads_a, c.threads_b);

    let collapse: Vec<Vec<usize>> = (0..3).map(|k| vec![0; a.level(k).size]).collect();
    let f = FinSetLevelMap::new(a.clone(), a, collapse).unwrap();
    let c = finite_set_factor(&f).unwrap();
    assert_eq!(c.threads_b, 1);
    assert!(c.image_tower.levels.iter().all(|l| l.size == 1));
    assert!(c.lim_first_surjective && c.lim_second_injective);
}

#[test]
fn quotient_of_ml_source() {
    let a = tower(&FgAbGroup::from_invariants(1, &[4]), &[&[2, 0], &[0, 1]]);
    let c = tower(&z(1), &[&[1]]);
    let f = single(&a, &c, &[&[0, 1]]);
    let cert = factor_quotient_ml(&f).unwrap();
    assert!(ml_decide(&cert.intermediate).is_ml());
    let not_ml = tower(&z(1), &[&[2]]);
    let g = single(&not_ml, &c, &[&[0]]);
    assert!(matches!(
        factor_quotient_ml(&g),
        Err(Error::HypothesisViolated(_))
    ));
}
