use std::collections::BTreeSet;

use hdx_core::buildings::opposition_an;
use hdx_core::buildings::cn_building;
use hdx_core::caps::Caps;
use hdx_core::chains::reduced_homology_ranks;
use hdx_core::cosets::{enumerate_group, unipotent_opposition, Mat};
use hdx_core::expansion::second_eigenvalue;
use hdx_core::fqlinalg::{enumerate_subspaces, gaussian_binomial, Field, Form, Subspace};
use hdx_core::standard;

fn vectors(q: u32, m: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out.into_iter().flat_map(|v| (0..q).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

fn span_mod_p(p: u32, gens: &[&Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let mut set = BTreeSet::new();
    let m = gens[0].len();
    for coeffs in vectors(p, gens.len()) {
        let mut v = vec![0u32; m];
        for (c, g) in coeffs.iter().zip(gens) {
            for i in 0..m {
                v[i] = (v[i] + c * g[i]) % p;
            }
        }
        set.insert(v);
    }
    set
}

#[test]
fn subspace_counts_match_direct_enumeration() {
    for (p, m) in [(2u32, 4usize), (3, 3)] {
        let all = vectors(p, m);
        let nonzero: Vec<&Vec<u32>> = all.iter().filter(|v| v.iter().any(|&a| a != 0)).collect();
        let f = Field::new(p, 1).unwrap();
        for d in 1..m {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<Vec<&Vec<u32>>> = vec![Vec::new()];
            while let Some(gens) = stack.pop() {
                if gens.len() == d {
                    let s = span_mod_p(p, &gens);
                    if s.len() == (p as usize).pow(d as u32) {
                        seen.insert(s);
                    }
                    continue;
                }
                for v in &nonzero {
                    let mut g = gens.clone();
                    g.push(v);
                    stack.push(g);
                }
            }
            let ours = enumerate_subspaces(&f, m, d, 1 << 20).unwrap();
            assert_eq!(ours.len(), seen.len(), "GF({p})^{m}, dim {d}");
            assert_eq!(gaussian_binomial(m, d, p as u64), Some(seen.len() as u128));
        }
    }
}

#[test]
fn plane_opposition_has_q_squared_vertices_per_type() {
    for q in [2u32, 3, 4, 5] {
        let f = Field::from_order(q).unwrap();
        let e = [Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[0, 1])];
        let g = opposition_an(f, 3, &e, &Caps::default()).unwrap();
        let lines_off_plane = vectors(q, 3).iter().filter(|v| v[2] != 0).count() / (q as usize - 1);
        assert_eq!(g.ids_of_dim(1).len(), lines_off_plane);
        assert_eq!(g.ids_of_dim(2).len(), lines_off_plane);
        assert_eq!(lines_off_plane, (q * q) as usize);
        assert_eq!(g.complex().num_faces(1), (q * q * q) as usize);
    }
}

#[test]
fn polar_space_counts() {
    for q in [3u32, 5] {
        let f = Field::new(q, 1).unwrap();
        let quadrangle = cn_building(&Form::hyperbolic(f.clone(), 2, &[]).unwrap(), &Caps::default()).unwrap();
        assert_eq!(quadrangle.ids_of_dim(1).len(), ((q + 1) * (q + 1)) as usize);
        assert_eq!(quadrangle.ids_of_dim(2).len(), (2 * (q + 1)) as usize);
        let parabolic = cn_building(&Form::hyperbolic(f, 2, &[1]).unwrap(), &Caps::default()).unwrap();
        let points = (q.pow(4) - 1) / (q - 1);
        assert_eq!(parabolic.ids_of_dim(1).len(), points as usize);
        assert_eq!(parabolic.ids_of_dim(2).len(), ((q + 1) * (q * q + 1)) as usize);
        assert_eq!(parabolic.complex().num_faces(1), ((q + 1) * points) as usize);
    }
}

#[test]
fn cycle_and_complete_graph_spectra() {
    for n in 3..=12 {
        let ev = second_eigenvalue(&standard::cycle(n).unwrap()).unwrap();
        let expected = (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!((ev.value - expected).abs() < 1e-9, "C{n}: {} vs {expected}", ev.value);
    }
    for m in 2..=7 {
        let ev = second_eigenvalue(&standard::simplex(m).unwrap()).unwrap();
        assert!((ev.value + 1.0 / (m - 1) as f64).abs() < 1e-9, "simplex on {m} vertices: {}", ev.value);
    }
}

#[test]
fn sphere_homology() {
    for m in 2..=7 {
        let hom = reduced_homology_ranks(&standard::simplex_boundary(m).unwrap(), 1 << 22).unwrap();
        for h in &hom {
            let rank = if h.degree == m as i32 - 2 { 1 } else { 0 };
            assert_eq!((h.rank, h.torsion.is_empty()), (rank, true), "simplex boundary on {m} vertices, degree {}", h.degree);
        }
    }
    let hom = reduced_homology_ranks(&standard::octahedron(), 1 << 22).unwrap();
    assert_eq!(hom.iter().map(|h| h.rank).collect::<Vec<_>>(), vec![0, 0, 0, 1]);
}

#[test]
fn group_orders() {
    for q in [2u32, 3, 5, 7] {
        let f = Field::new(q, 1).unwrap();
        let gens = vec![Mat::elementary(2, 0, 1, 1), Mat::elementary(2, 1, 0, 1)];
        let sl2 = enumerate_group(f, 2, gens, 1 << 20).unwrap();
        assert_eq!(sl2.order(), (q * (q * q - 1)) as usize);
        assert!(sl2.is_closed());
    }
    for q in [2u32, 3] {
        let cc = unipotent_opposition(2, q, &Caps::default()).unwrap();
        assert_eq!(cc.group.order(), q.pow(3) as usize);
    }
}
