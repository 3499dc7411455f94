use hdx_core::chains::{
    boundary, coboundary, cohomology_nonzero_mod, orient, pairing, reduced_homology_ranks, Chain, Cochain,
    CoefficientGroup,
};
use hdx_core::cones::solve_cone_linear;
use hdx_core::cones::transport_coefficients;
use hdx_core::cones::graph_bfs_cone;
use hdx_core::expansion::expansion_degree;
use hdx_core::expansion::walk_matrix;
use hdx_core::fqlinalg::{Field, Subspace};
use hdx_core::io::{chain_from_json, chain_to_json, complex_from_json, complex_to_json, cone_from_json, cone_to_json};
use hdx_core::simplicial::{Complex, Rational};
use hdx_core::HdxError;
use proptest::prelude::*;

const CAP: usize = 1 << 22;

fn from_masks(n: usize, masks: &[u32]) -> Option<Complex> {
    let mut sets: Vec<u32> = masks.iter().map(|m| m & ((1 << n) - 1)).filter(|&m| m != 0).collect();
    sets.sort_unstable();
    sets.dedup();
    let maximal: Vec<u32> = sets.iter().copied().filter(|&a| !sets.iter().any(|&b| b != a && a & b == a)).collect();
    if maximal.is_empty() {
        return None;
    }
    let faces = maximal.iter().map(|&m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
    Complex::from_maximal_faces((0..n).map(|i| format!("v{i}")).collect(), faces).ok()
}

fn complex() -> impl Strategy<Value = Complex> {
    (2usize..=7, prop::collection::vec(any::<u32>(), 1..10))
        .prop_filter_map("empty", |(n, masks)| from_masks(n, &masks))
}

/// Pure complexes: every facet has `d + 1` vertices.
fn pure_complex() -> impl Strategy<Value = Complex> {
    (3usize..=7, 1usize..=3, prop::collection::vec(any::<u32>(), 1..10)).prop_filter_map(
        "empty",
        |(n, d, masks)| {
            let masks: Vec<u32> =
                masks.into_iter().map(|m| m & ((1 << n) - 1)).filter(|m| m.count_ones() as usize == d + 1).collect();
            from_masks(n, &masks)
        },
    )
}

fn random_chain(x: &Complex, k: i32, coeffs: &[i64]) -> Chain {
    let mut c = Chain::zero(k);
    for (s, &v) in x.faces(k).iter().zip(coeffs.iter().cycle()) {
        c.add_term(s.clone(), v);
    }
    c
}

fn random_cochain(x: &Complex, k: i32, modulus: u64, values: &[i64]) -> Cochain {
    let mut phi = Cochain::zero(k, modulus);
    for (s, &v) in x.faces(k).iter().zip(values.iter().cycle()) {
        phi.set(s.clone(), v);
    }
    phi
}

fn acyclic_through(x: &Complex, k: i32) -> bool {
    let hom = reduced_homology_ranks(x, CAP).unwrap();
    hom.iter().filter(|h| h.degree <= k).all(|h| h.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn boundary_squares_to_zero(x in complex(), coeffs in prop::collection::vec(-5i64..=5, 1..8)) {
        for k in 1..=x.dim() {
            let a = random_chain(&x, k, &coeffs);
            let da = boundary(&a, Some(&x)).unwrap();
            prop_assert!(boundary(&da, Some(&x)).unwrap().is_zero());
        }
    }

    #[test]
    fn coboundary_squares_to_zero(x in complex(), m in prop_oneof![Just(0u64), 2u64..7], vals in prop::collection::vec(-4i64..=4, 1..8)) {
        for k in -1..=x.dim() - 2 {
            let phi = random_cochain(&x, k, m, &vals);
            let dd = coboundary(&coboundary(&phi, &x).unwrap(), &x).unwrap();
            prop_assert!(dd.values.is_empty());
        }
    }

    #[test]
    fn coboundary_is_dual_to_boundary(
        x in complex(),
        vals in prop::collection::vec(-4i64..=4, 1..8),
        coeffs in prop::collection::vec(-4i64..=4, 1..8),
    ) {
        for k in -1..x.dim() {
            let phi = random_cochain(&x, k, 0, &vals);
            let a = random_chain(&x, k + 1, &coeffs);
            let lhs = pairing(&coboundary(&phi, &x).unwrap(), &a);
            let rhs = pairing(&phi, &boundary(&a, None).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn orient_is_idempotent(v in prop::collection::vec(0u32..20, 0..6)) {
        match orient(&v) {
            Some((s, sign)) => {
                prop_assert!(sign == 1 || sign == -1);
                prop_assert_eq!(orient(&s), Some((s.clone(), 1)));
                let mut sorted = v.clone();
                sorted.sort_unstable();
                prop_assert_eq!(s, sorted);
            }
            None => {
                let mut sorted = v.clone();
                sorted.sort_unstable();
                prop_assert!(sorted.windows(2).any(|w| w[0] == w[1]));
            }
        }
    }

    #[test]
    fn weights_sum_to_one(x in pure_complex()) {
        for k in -1..=x.dim() {
            let total: Rational = x.weights(k).unwrap().into_iter().sum();
            prop_assert_eq!(total, Rational::from_integer(1));
        }
    }

    #[test]
    fn walk_rows_are_stochastic(x in pure_complex()) {
        prop_assert!(walk_matrix(&x).unwrap().is_stochastic());
    }

    #[test]
    fn solver_cones_exist_exactly_when_acyclic(x in complex(), k in 0i32..=2) {
        let apex = x.vertices()[0];
        match solve_cone_linear(&x, k, apex, CAP) {
            Ok(c) => {
                prop_assert!(c.verify(&x).is_ok(), "{:?}", c.verify(&x));
                prop_assert!(acyclic_through(&x, k.min(x.dim())));
            }
            Err(HdxError::NoCone(_)) => prop_assert!(!acyclic_through(&x, k.min(x.dim()))),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn bfs_cones_verify_on_connected_complexes(x in complex()) {
        let apex = *x.vertices().last().unwrap();
        match graph_bfs_cone(&x, apex) {
            Ok(c) => {
                prop_assert!(x.is_connected().unwrap());
                prop_assert!(c.verify(&x).is_ok());
            }
            Err(HdxError::NoCone(_)) => prop_assert!(!x.is_connected().unwrap()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn transported_cones_keep_support(x in complex(), desc in prop_oneof![Just("Z"), Just("Z/2"), Just("Z/3+Z"), Just("Z/4+Z/6")]) {
        let k = x.dim().min(1);
        if let Ok(c) = solve_cone_linear(&x, k, x.vertices()[0], CAP) {
            let g = transport_coefficients(&c, &CoefficientGroup::parse(desc).unwrap());
            prop_assert!(g.support_contained());
            prop_assert!(g.verify(&x).is_ok());
            prop_assert_eq!(g.radius_profile(), c.radius_profile());
        }
    }

    #[test]
    fn cosystolic_dominates_coboundary(x in pure_complex(), m in 2u64..=3) {
        let hom = reduced_homology_ranks(&x, CAP).unwrap();
        for k in -1..x.dim() {
            let Ok(d) = expansion_degree(&x, k, m, 1 << 16) else { continue };
            if let (Some(cb), Some(cs)) = (&d.coboundary, &d.cosystolic) {
                prop_assert!(cs.value >= cb.value);
            }
            let zero = d.coboundary.as_ref().is_some_and(|v| v.value == Rational::from_integer(0));
            prop_assert_eq!(zero, cohomology_nonzero_mod(&hom, k, m));
            prop_assert_eq!(d.cohomology_nonzero(), zero);
            prop_assert_eq!(d.systole.is_some(), zero);
        }
    }

    #[test]
    fn subspace_dimension_identity(
        a in prop::collection::vec(prop::collection::vec(0u32..2, 4), 0..4),
        b in prop::collection::vec(prop::collection::vec(0u32..2, 4), 0..4),
    ) {
        let f = Field::new(2, 1).unwrap();
        let u = Subspace::span(&f, 4, &a).unwrap();
        let w = Subspace::span(&f, 4, &b).unwrap();
        let sum = u.sum(&f, &w).unwrap();
        let cap = u.intersect(&f, &w).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), u.dim() + w.dim());
        prop_assert!(cap.is_subspace_of(&f, &u) && cap.is_subspace_of(&f, &w));
        prop_assert!(u.is_subspace_of(&f, &sum) && w.is_subspace_of(&f, &sum));
    }

    #[test]
    fn json_round_trips(x in complex(), coeffs in prop::collection::vec(-9i64..=9, 1..8)) {
        let y = complex_from_json(&complex_to_json(&x, None)).unwrap();
        prop_assert_eq!(y.facets(), x.facets());
        prop_assert_eq!(y.labels(), x.labels());
        let text = serde_json::to_string(&complex_to_json(&x, None)).unwrap();
        prop_assert_eq!(serde_json::to_string(&complex_to_json(&y, None)).unwrap(), text);

        let k = x.dim();
        let a = random_chain(&x, k, &coeffs);
        prop_assert_eq!(chain_from_json(&chain_to_json(&a)).unwrap(), a);

        if let Ok(c) = solve_cone_linear(&x, x.dim().min(1), x.vertices()[0], CAP) {
            let g = CoefficientGroup::parse("Z/5+Z").unwrap();
            let (back, group) = cone_from_json(&cone_to_json(&c, &g)).unwrap();
            prop_assert_eq!(back.table(), c.table());
            prop_assert_eq!(group, g);
        }
    }
}
