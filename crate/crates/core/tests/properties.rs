//! Property tests for the algebraic invariants: group axioms, canonical
//! forms, profile conservation, inverse symmetry, span canonicity, and the
//! two routes deciding quadratic-map equality.

use std::sync::OnceLock;

use proptest::prelude::*;

use matchings_core::group::{GroupCarrier, GroupElement};
use matchings_core::linear::{
    pointwise_quad_equal, quad_map_equal, GfTower, LinearMap, Subspace,
};
use matchings_core::search::{enumerate_matchings, find_matching, is_acyclic, Bounded, Budget};

fn carriers() -> Vec<GroupCarrier> {
    vec![
        GroupCarrier::finite(vec![4]).unwrap(),
        GroupCarrier::finite(vec![7]).unwrap(),
        GroupCarrier::finite(vec![2, 2]).unwrap(),
        GroupCarrier::finite(vec![2, 6]).unwrap(),
        GroupCarrier::integer(),
        GroupCarrier::dyadic(),
        GroupCarrier::rational(),
    ]
}

fn tower_5_4() -> &'static GfTower {
    static TOWER: OnceLock<GfTower> = OnceLock::new();
    TOWER.get_or_init(|| GfTower::new(5, 4, None).unwrap())
}

fn tower_5_7() -> &'static GfTower {
    static TOWER: OnceLock<GfTower> = OnceLock::new();
    TOWER.get_or_init(|| GfTower::new(5, 7, None).unwrap())
}

fn element_for(carrier: &GroupCarrier, raw: i64, denom_exp: u32) -> GroupElement {
    match carrier.kind() {
        matchings_core::CarrierKind::Finite => {
            let values: Vec<i64> = carrier
                .invariant_factors()
                .iter()
                .enumerate()
                .map(|(i, _)| raw.wrapping_add(i as i64))
                .collect();
            carrier.element_from_residues(&values).unwrap()
        }
        matchings_core::CarrierKind::Integer => carrier.element_from_i64(raw).unwrap(),
        matchings_core::CarrierKind::Dyadic => carrier
            .parse_element(&format!("{raw}/2^{}", denom_exp % 6))
            .unwrap(),
        matchings_core::CarrierKind::Rational => carrier
            .parse_element(&format!("{raw}/{}", (denom_exp % 6) + 1))
            .unwrap(),
    }
}

proptest! {
    #[test]
    fn abelian_axioms(idx in 0usize..7, a in -60i64..60, b in -60i64..60, c in -60i64..60,
                      ea in 0u32..6, eb in 0u32..6, ec in 0u32..6) {
        let carrier = carriers()[idx].clone();
        let x = element_for(&carrier, a, ea);
        let y = element_for(&carrier, b, eb);
        let z = element_for(&carrier, c, ec);
        // associativity and commutativity, exact
        let xy_z = carrier.add(&carrier.add(&x, &y).unwrap(), &z).unwrap();
        let x_yz = carrier.add(&x, &carrier.add(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(&xy_z, &x_yz);
        prop_assert_eq!(
            carrier.add(&x, &y).unwrap(),
            carrier.add(&y, &x).unwrap()
        );
        // inverses and identity
        let neg = carrier.neg(&x).unwrap();
        prop_assert_eq!(carrier.add(&x, &neg).unwrap(), carrier.zero());
        prop_assert_eq!(carrier.add(&x, &carrier.zero()).unwrap(), x);
    }

    #[test]
    fn canonical_form_is_idempotent(idx in 0usize..7, a in -60i64..60, e in 0u32..6) {
        let carrier = carriers()[idx].clone();
        let x = element_for(&carrier, a, e);
        let reparsed = carrier.parse_element(&x.to_string()).unwrap();
        prop_assert_eq!(&reparsed, &x);
        prop_assert_eq!(reparsed.to_string(), x.to_string());
    }

    #[test]
    fn profile_conservation_and_inverse_symmetry(
        n in 5u64..13,
        picks in proptest::collection::btree_set(0u64..13, 2..5),
    ) {
        let carrier = GroupCarrier::finite(vec![n]).unwrap();
        let a: Vec<GroupElement> = picks
            .iter()
            .map(|&v| carrier.element_from_i64((v % n) as i64).unwrap())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if let Some(f) = find_matching(&carrier, &a, &a).unwrap() {
            let profile = f.profile();
            prop_assert_eq!(profile.total(), f.len());
            let domain = f.domain_set();
            prop_assert!(profile.fibers().keys().all(|x| !domain.contains(x)));
            // the inverse is a matching with the same profile
            let g = f.invert().unwrap();
            prop_assert!(g.profile().counts_equal(&profile));
            prop_assert_eq!(g.invert().unwrap(), f);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn acyclicity_matches_profile_class_size(
        n in 5u64..12,
        picks in proptest::collection::btree_set(0u64..12, 2..5),
    ) {
        let carrier = GroupCarrier::finite(vec![n]).unwrap();
        let a: Vec<GroupElement> = picks
            .iter()
            .map(|&v| carrier.element_from_i64((v % n) as i64).unwrap())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let all = enumerate_matchings(&carrier, &a, &a, Budget::UNLIMITED)
            .unwrap()
            .into_option()
            .unwrap();
        for f in &all {
            let class = all
                .iter()
                .filter(|g| g.profile().counts_equal(&f.profile()))
                .count();
            let acyclic = matches!(
                is_acyclic(f, Budget::UNLIMITED).unwrap(),
                Bounded::Done(true)
            );
            prop_assert_eq!(acyclic, class == 1);
        }
    }

    #[test]
    fn span_is_canonical_under_resampling(
        seed_rows in proptest::collection::vec(
            proptest::collection::vec(0u64..5, 4),
            1..4
        ),
        mixers in proptest::collection::vec((any::<u64>(), 0u64..5, 0u64..5), 0..4),
        reverse in any::<bool>(),
    ) {
        let tower = tower_5_4();
        let space = Subspace::span_finite(tower, &seed_rows);
        let rows = space.finite_rows().unwrap().clone();
        if !rows.is_empty() {
            // appending random combinations of the rows, and reordering,
            // must not change the canonical representation
            let mut resampled = rows.clone();
            for &(pick, c1, c2) in &mixers {
                let r1 = &rows[(pick as usize) % rows.len()];
                let r2 = &rows[(pick >> 32) as usize % rows.len()];
                let combo: Vec<u64> = r1
                    .iter()
                    .zip(r2)
                    .map(|(&x, &y)| (c1 * x + c2 * y) % 5)
                    .collect();
                resampled.push(combo);
            }
            if reverse {
                resampled.reverse();
            }
            let respanned = Subspace::span_finite(tower, &resampled);
            prop_assert_eq!(respanned, space);
        }
    }

    #[test]
    fn quad_equality_routes_agree(
        f_scalar in 1u64..5,
        phi_scalar in 1u64..5,
        h_scalar in 1u64..5,
        use_two_dims in any::<bool>(),
    ) {
        let tower = tower_5_7();
        let alpha = tower.generator();
        let vectors = if use_two_dims {
            vec![alpha.clone(), tower.pow(&alpha, 3)]
        } else {
            vec![alpha.clone()]
        };
        let space = Subspace::span_finite(tower, &vectors);
        let f = LinearMap::scalar_finite(&space, f_scalar);
        let phi = LinearMap::scalar_finite(&space, phi_scalar);
        let h = LinearMap::scalar_finite(&space, h_scalar);
        let by_coeff = quad_map_equal(&f, &phi, &h).unwrap();
        let by_points = pointwise_quad_equal(&f, &phi, &h).unwrap();
        prop_assert_eq!(by_coeff, by_points);
    }
}

#[test]
fn quad_equality_routes_agree_on_mixed_matrices() {
    // a non-scalar sweep over 2×2 maps on A_2 in GF(5^7)
    let tower = tower_5_7();
    let alpha = tower.generator();
    let space = Subspace::span_finite(tower, &[alpha.clone(), tower.pow(&alpha, 3)]);
    let mats = [
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, 1], vec![0, 3]],
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![1, 2], vec![3, 4]],
    ];
    for f_m in &mats {
        for phi_m in &mats {
            for h_m in &mats {
                let f = LinearMap::from_finite_matrix(&space, &space, f_m.clone()).unwrap();
                let phi = LinearMap::from_finite_matrix(&space, &space, phi_m.clone()).unwrap();
                let h = LinearMap::from_finite_matrix(&space, &space, h_m.clone()).unwrap();
                let by_coeff = quad_map_equal(&f, &phi, &h).unwrap();
                let by_points = pointwise_quad_equal(&f, &phi, &h).unwrap();
                assert_eq!(by_coeff, by_points, "f={f_m:?} phi={phi_m:?} h={h_m:?}");
            }
        }
    }
}
