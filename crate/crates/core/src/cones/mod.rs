//! Cone functions: tables, verification, radii and the basic constructors.

mod filtration;
mod solve;
mod subdivision;
mod transport;

pub use filtration::{run_filtration, BoundCheck, ConeProvider, FiltrationLedger, FiltrationPlan, Stage, StageRecord};
pub use solve::solve_cone_linear;
pub use subdivision::{subdivision_transport, SubdividedEdge};
pub use transport::{transport_coefficients, GroupCone};

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::chains::{boundary, bracket_chains, bracket_vertex, Chain};
use crate::error::{HdxError, Result};
use crate::simplicial::{Complex, Simplex};

/// An integral cone function given by its values on canonical generators.
/// Generators without an entry map to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFunction {
    apex: u32,
    k: i32,
    table: BTreeMap<Simplex, Chain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violation { simplex: Simplex, detail: String },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl ConeFunction {
    /// A table holding only `Cone(1_∅) = 1_[apex]`.
    pub fn new(apex: u32, k: i32) -> ConeFunction {
        let mut table = BTreeMap::new();
        table.insert(Vec::new(), Chain::basis(&[apex]).unwrap());
        ConeFunction { apex, k, table }
    }

    pub fn from_table(apex: u32, k: i32, table: BTreeMap<Simplex, Chain>) -> Result<ConeFunction> {
        let mut c = ConeFunction::new(apex, k);
        for (s, ch) in table {
            c.set(s, ch)?;
        }
        Ok(c)
    }

    pub fn apex(&self) -> u32 {
        self.apex
    }
    pub fn degree(&self) -> i32 {
        self.k
    }
    pub fn table(&self) -> &BTreeMap<Simplex, Chain> {
        &self.table
    }

    pub fn set(&mut self, s: Simplex, c: Chain) -> Result<()> {
        let d = s.len() as i32 - 1;
        if !c.is_zero() && c.degree() != d + 1 {
            return Err(HdxError::Domain(format!("cone entry for {s:?} has degree {}", c.degree())));
        }
        if s.is_empty() && c != Chain::basis(&[self.apex]).unwrap() {
            return Err(HdxError::Domain("Cone(1_∅) must equal the apex".into()));
        }
        if c.is_zero() {
            self.table.remove(&s);
        } else {
            self.table.insert(s, c);
        }
        Ok(())
    }

    pub fn generator(&self, s: &[u32]) -> Chain {
        self.table.get(s).cloned().unwrap_or_else(|| Chain::zero(s.len() as i32))
    }

    /// Linear extension to an arbitrary chain of degree ≤ k.
    pub fn eval(&self, a: &Chain) -> Result<Chain> {
        if a.degree() > self.k {
            return Err(HdxError::Domain(format!("cone of degree {} applied to a {}-chain", self.k, a.degree())));
        }
        let mut out = Chain::zero(a.degree() + 1);
        for (s, &c) in a.iter() {
            if let Some(t) = self.table.get(s) {
                out.add_scaled(t, c)?;
            }
        }
        Ok(out)
    }

    /// A copy restricted to generators of degree ≤ `k`.
    pub fn truncated(&self, k: i32) -> ConeFunction {
        let table = self.table.iter().filter(|(s, _)| s.len() as i32 - 1 <= k).map(|(s, c)| (s.clone(), c.clone())).collect();
        ConeFunction { apex: self.apex, k: k.min(self.k), table }
    }

    /// Checks `Cone(1_∅) = 1_[v]` and `∂Cone(1_σ) + Cone(∂1_σ) = 1_σ` for every
    /// canonical σ ∈ X(j), 0 ≤ j ≤ k.
    pub fn verify(&self, x: &Complex) -> Verdict {
        if let v @ Verdict::Violation { .. } = self.verify_structure(x) {
            return v;
        }
        for j in 0..=self.k.min(x.dim()) {
            for s in x.faces(j) {
                let one = Chain::basis(s).unwrap();
                let lhs = (|| -> Result<Chain> {
                    let mut l = boundary(&self.generator(s), None)?.with_degree(j);
                    l.add_scaled(&self.eval(&boundary(&one, None)?)?, 1)?;
                    Ok(l)
                })();
                match lhs {
                    Ok(l) if l == one => {}
                    Ok(l) => {
                        return Verdict::Violation {
                            simplex: s.clone(),
                            detail: format!("∂Cone + Cone∂ = {l:?}"),
                        }
                    }
                    Err(e) => return Verdict::Violation { simplex: s.clone(), detail: e.to_string() },
                }
            }
        }
        Verdict::Ok
    }

    /// Apex, `Cone(1_∅)`, and that every table simplex is a face of `x`.
    pub fn verify_structure(&self, x: &Complex) -> Verdict {
        if !x.contains(&[self.apex]) {
            return Verdict::Violation { simplex: vec![], detail: format!("apex {} is not a vertex", self.apex) };
        }
        if self.table.get(&Vec::new()) != Some(&Chain::basis(&[self.apex]).unwrap()) {
            return Verdict::Violation { simplex: vec![], detail: "Cone(1_∅) is not the apex".into() };
        }
        for (s, c) in &self.table {
            if !x.contains(s) {
                return Verdict::Violation { simplex: s.clone(), detail: "generator is not a face".into() };
            }
            if let Some((t, _)) = c.iter().find(|(t, _)| !x.contains(t)) {
                return Verdict::Violation { simplex: s.clone(), detail: format!("value uses {t:?}, not a face") };
            }
        }
        Verdict::Ok
    }

    /// `Rad_j` for j = −1..=k, indexed by j + 1.
    pub fn radius_profile(&self) -> Vec<usize> {
        let mut r = vec![0usize; (self.k + 2).max(0) as usize];
        for (s, c) in &self.table {
            let j = s.len();
            if j < r.len() {
                r[j] = r[j].max(c.support_size());
            }
        }
        r
    }

    /// The same cone with vertex ids renamed through `map`.
    pub fn relabel(&self, map: &HashMap<u32, u32>) -> Result<ConeFunction> {
        let rename = |v: &u32| map.get(v).copied().ok_or_else(|| HdxError::Domain(format!("vertex {v} has no new name")));
        let mut out = ConeFunction::new(rename(&self.apex)?, self.k);
        for (s, c) in &self.table {
            if s.is_empty() {
                continue;
            }
            let img: Vec<u32> = s.iter().map(rename).collect::<Result<_>>()?;
            let Some((key, sign)) = crate::chains::orient(&img) else {
                return Err(HdxError::Domain("relabelling is not injective".into()));
            };
            let mut value = Chain::zero(c.degree());
            for (t, &a) in c.iter() {
                let timg: Vec<u32> = t.iter().map(rename).collect::<Result<_>>()?;
                value.add_oriented(&timg, a * sign)?;
            }
            out.set(key, value)?;
        }
        Ok(out)
    }

    pub fn max_radius(&self) -> usize {
        self.radius_profile().into_iter().max().unwrap_or(0)
    }
}

/// Radius of a profile at degree `j` (−1 ≤ j), treating missing degrees as 0.
pub fn rad_at(profile: &[usize], j: i32) -> usize {
    if j < -1 {
        return 0;
    }
    profile.get((j + 1) as usize).copied().unwrap_or(0)
}

/// The cone on `{v} * Y`: `[v, 1_σ]` off the apex, zero through it.
pub fn apex_star_cone(x: &Complex, v: u32, k: i32) -> Result<ConeFunction> {
    if !x.contains(&[v]) {
        return Err(HdxError::Domain(format!("apex {v} is not a vertex")));
    }
    if let Some(f) = x.facets().iter().find(|f| f.binary_search(&v).is_err()) {
        return Err(HdxError::Domain(format!("facet {f:?} misses the apex {v}, so the complex is not a cone")));
    }
    let mut c = ConeFunction::new(v, k);
    for j in 0..=k.min(x.dim()) {
        for s in x.faces(j) {
            if s.binary_search(&v).is_err() {
                c.set(s.clone(), bracket_vertex(v, &Chain::basis(s)?, None)?)?;
            }
        }
    }
    Ok(c)
}

/// The 0-cone sending each vertex to a shortest path from the apex.
/// Ties go to the smallest-id neighbour.
pub fn graph_bfs_cone(x: &Complex, apex: u32) -> Result<ConeFunction> {
    let n = x.num_vertices();
    let root = x.vertex_index(apex).ok_or_else(|| HdxError::Domain(format!("apex {apex} is not a vertex")))?;
    let adj = x.adjacency();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let mut nb = adj[u].clone();
        nb.sort_unstable();
        for w in nb {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(HdxError::NoCone("graph is disconnected, so no 0-cone exists".into()));
    }
    let ids = x.vertices();
    let mut c = ConeFunction::new(apex, 0);
    for (i, &w) in ids.iter().enumerate() {
        let mut path = Chain::zero(1);
        let mut cur = i;
        while cur != root {
            let p = parent[cur];
            path.add_oriented(&[ids[p], ids[cur]], 1)?;
            cur = p;
        }
        c.set(vec![w], path)?;
    }
    Ok(c)
}

/// Cone on a join `Y1 * Y2` from an (n1−1)-cone on Y1 and an (n2−1)-cone on Y2;
/// the result has degree n1 + n2 and apex of the first factor.
pub fn join_cone(left: &Complex, c1: &ConeFunction, right: &Complex, c2: &ConeFunction, k: i32) -> Result<ConeFunction> {
    let n1 = left.dim();
    let n2 = right.dim();
    if n1 < 0 || n2 < 0 {
        return Err(HdxError::Domain("join factors must be nonempty".into()));
    }
    if c1.degree() < n1 - 1 || c2.degree() < n2 - 1 {
        return Err(HdxError::Domain(format!(
            "join needs factor cones of degrees {} and {}, got {} and {}",
            n1 - 1,
            n2 - 1,
            c1.degree(),
            c2.degree()
        )));
    }
    if k > n1 + n2 {
        return Err(HdxError::Domain(format!("join cone degree is at most {}", n1 + n2)));
    }
    if left.vertices().iter().any(|v| right.vertex_index(*v).is_some()) {
        return Err(HdxError::Domain("join factors share a vertex".into()));
    }
    let mut out = ConeFunction::new(c1.apex(), k);
    let sign_of = |s1: &[u32], s2: &[u32]| -> i64 {
        let inv: usize = s1.iter().map(|a| s2.partition_point(|b| b < a)).sum();
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    };
    for d1 in -1..=n1 {
        for s1 in left.faces(d1) {
            let one1 = Chain::basis(s1)?;
            // For a top face of Y1, 1_σ1 − Cone1(∂1_σ1) is a cycle reused below.
            let top_cycle = if d1 == n1 {
                let mut z = one1.clone();
                z.add_scaled(&c1.eval(&boundary(&one1, None)?)?, -1)?;
                Some(z)
            } else {
                None
            };
            for d2 in -1..=n2 {
                let j = d1 + d2 + 1;
                if j < 0 || j > k {
                    continue;
                }
                for s2 in right.faces(d2) {
                    let one2 = Chain::basis(s2)?;
                    let value = match &top_cycle {
                        None => bracket_chains(&c1.generator(s1).with_degree(d1 + 1), &one2, None)?,
                        Some(z) => {
                            let sgn = if (n1 + 1) % 2 == 0 { 1 } else { -1 };
                            bracket_chains(z, &c2.generator(s2).with_degree(d2 + 1), None)?.scaled(sgn)
                        }
                    };
                    let mut s: Simplex = s1.iter().chain(s2.iter()).copied().collect();
                    s.sort_unstable();
                    out.set(s, value.scaled(sign_of(s1, s2)))?;
                }
            }
        }
    }
    Ok(out)
}

/// The radius bound for a join cone at degree `j`.
pub fn join_bound(r1: &[usize], n1: i32, r2: &[usize], j: i32) -> u128 {
    let max1 = |upto: i32| (-1..=upto).map(|i| rad_at(r1, i) as u128).max().unwrap_or(0);
    if j < n1 {
        max1(j)
    } else {
        let second = ((n1 as u128 + 1) * rad_at(r1, n1 - 1) as u128 + 1) * rad_at(r2, j - n1 - 1) as u128;
        max1(n1 - 1).max(second)
    }
}

/// Extends a cone on the full subcomplex X' to the full subcomplex on
/// X'(0) ∪ W, given for each w ∈ W a cone on lk(w) ∩ X'.
pub fn extend_by_vertex_set(
    x: &Complex,
    base_vertices: &[u32],
    base_cone: &ConeFunction,
    w_set: &[u32],
    link_cones: &HashMap<u32, ConeFunction>,
) -> Result<ConeFunction> {
    let base: HashSet<u32> = base_vertices.iter().copied().collect();
    for &w in w_set {
        if base.contains(&w) {
            return Err(HdxError::Domain(format!("vertex {w} already lies in the base subcomplex")));
        }
        if x.vertex_index(w).is_none() {
            return Err(HdxError::Domain(format!("vertex {w} is not in the complex")));
        }
    }
    let wset: HashSet<u32> = w_set.iter().copied().collect();
    if wset.len() != w_set.len() {
        return Err(HdxError::Domain("repeated vertex in the added set".into()));
    }
    for e in x.faces(1) {
        if wset.contains(&e[0]) && wset.contains(&e[1]) {
            return Err(HdxError::Domain(format!("added vertices {} and {} are adjacent", e[0], e[1])));
        }
    }
    let mut k = base_cone.degree();
    for &w in w_set {
        let lc = link_cones.get(&w).ok_or_else(|| HdxError::Domain(format!("no link cone for vertex {w}")))?;
        let rel = relative_link(x, w, &base)?;
        if rel.num_vertices() == 0 {
            return Err(HdxError::Domain(format!("vertex {w} has empty link in the base subcomplex")));
        }
        if let Verdict::Violation { simplex, detail } = lc.verify(&rel) {
            return Err(HdxError::Domain(format!("link cone of {w} fails at {simplex:?}: {detail}")));
        }
        k = k.min(lc.degree() + 1);
    }
    let mut all: Vec<u32> = base_vertices.to_vec();
    all.extend_from_slice(w_set);
    let target = x.full_subcomplex(&all)?;
    let mut out = ConeFunction::new(base_cone.apex(), k);
    for j in 0..=k.min(target.dim()) {
        for s in target.faces(j) {
            match s.iter().position(|v| wset.contains(v)) {
                None => out.set(s.clone(), base_cone.generator(s))?,
                Some(p) => {
                    let w = s[p];
                    let tau: Simplex = s.iter().copied().filter(|&v| v != w).collect();
                    let lc = &link_cones[&w];
                    let c_tau = lc.generator(&tau).with_degree(j);
                    let mut v = base_cone.eval(&c_tau)?.with_degree(j + 1);
                    v.add_scaled(&bracket_vertex(w, &c_tau, None)?, -1)?;
                    let sgn = if p % 2 == 0 { 1 } else { -1 };
                    out.set(s.clone(), v.scaled(sgn))?;
                }
            }
        }
    }
    Ok(out)
}

/// lk(w) restricted to vertices in `base`, i.e. the link of w in the full
/// subcomplex on base ∪ {w}.
pub fn relative_link(x: &Complex, w: u32, base: &HashSet<u32>) -> Result<Complex> {
    let lk = x.link(&[w])?;
    let keep: Vec<u32> = lk.vertices().iter().copied().filter(|v| base.contains(v)).collect();
    lk.full_subcomplex(&keep)
}

/// Per-degree bound `max(R'_j, R''_{j−1}(R'_j + 1))` for a vertex-set extension.
pub fn extension_bound(base: &[usize], links: &[Vec<usize>], j: i32) -> u128 {
    let rb = rad_at(base, j) as u128;
    let rl = links.iter().map(|l| rad_at(l, j - 1) as u128).max().unwrap_or(0);
    rb.max(rl * (rb + 1))
}

/// Smallest radius bound for an (n−1)-cone on an n-dimensional join of an
/// a-dimensional and a b-dimensional factor, a + b + 1 = n.
pub fn recursion_s(n: usize, r: &dyn Fn(usize) -> u128) -> u128 {
    (0..n)
        .map(|a| {
            let b = n - 1 - a;
            ((a as u128 + 1) * r(a) + 1) * r(b)
        })
        .max()
        .unwrap_or(1)
}

/// The staged targets `R^(0) = f, R^(i) = S(R^(i−1) + 1)` for `stages` stages.
pub fn staged_targets(f: u128, s: u128, stages: usize) -> Vec<u128> {
    let mut out = vec![f];
    for _ in 0..stages {
        let last = *out.last().unwrap();
        out.push(s.saturating_mul(last.saturating_add(1)));
    }
    out
}

/// `R(n)` for a class with base radius `f(n)` and `ℓ(n)` stages; R(0) = 1.
pub fn recursion_r(n: usize, f: &dyn Fn(usize) -> u128, ell: &dyn Fn(usize) -> usize) -> u128 {
    let mut memo = vec![1u128];
    for m in 1..=n {
        let s = recursion_s(m, &|i| memo[i]);
        memo.push(*staged_targets(f(m), s, ell(m)).last().unwrap());
    }
    memo[n]
}

/// Radius recursion for the A-type class: f(n) = n + 2, ℓ(n) = n + 1.
pub fn recursion_r_a(n: usize) -> u128 {
    recursion_r(n, &|m| m as u128 + 2, &|m| m + 1)
}

/// Radius recursion for the C-type class: f(n) = 2n + 3, ℓ(n) = 2n + 2.
pub fn recursion_r_c(n: usize) -> u128 {
    recursion_r(n, &|m| 2 * m as u128 + 3, &|m| 2 * m + 2)
}

/// Support containment `supp(a) ⊆ supp(b)`.
pub fn support_within(a: &Chain, b: &Chain) -> bool {
    a.iter().all(|(s, _)| b.coeff(s) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::Complex;
    use crate::standard;

    fn cycle(n: usize) -> Complex {
        standard::cycle(n).unwrap()
    }

    #[test]
    fn octahedron_extension() {
        let o = standard::octahedron();
        let id = |l: &str| o.vertex_by_label(l).unwrap();
        let base: Vec<u32> = ["n", "a", "b", "c", "d"].iter().map(|l| id(l)).collect();
        let star = o.full_subcomplex(&base).unwrap();
        let c0 = apex_star_cone(&star, id("n"), 1).unwrap();
        let rel = relative_link(&o, id("s"), &base.iter().copied().collect()).unwrap();
        let lc = graph_bfs_cone(&rel, id("a")).unwrap();
        assert_eq!(lc.radius_profile(), vec![1, 2]);
        let links = HashMap::from([(id("s"), lc.clone())]);
        let c = extend_by_vertex_set(&o, &base, &c0, &[id("s")], &links).unwrap();
        assert!(c.verify(&o).is_ok(), "{:?}", c.verify(&o));
        let r = c.radius_profile();
        assert!(r[1] <= 2 && r[2] <= 4, "{r:?}");
        for j in -1..=1 {
            assert!(rad_at(&r, j) as u128 <= extension_bound(&c0.radius_profile(), &[lc.radius_profile()], j));
        }
        let same = extend_by_vertex_set(&o, &base, &c0, &[], &HashMap::new()).unwrap();
        assert_eq!(same, c0);
    }

    #[test]
    fn recursion_values() {
        assert_eq!(recursion_r_a(0), 1);
        assert_eq!(recursion_r_a(1), 18);
        assert_eq!(recursion_s(2, &|i| [1u128, 18][i]), 37);
        assert_eq!(recursion_r_a(2), 254_671);
        assert_eq!(recursion_r_c(1), 110);
    }

    #[test]
    fn bfs_on_cycle() {
        let c = graph_bfs_cone(&cycle(6), 0).unwrap();
        assert!(c.verify(&cycle(6)).is_ok());
        assert_eq!(c.radius_profile(), vec![1, 3]);
    }

    #[test]
    fn star_on_triangle() {
        let t = Complex::from_labelled_faces(&[vec!["a", "b", "c"]]).unwrap();
        let c = apex_star_cone(&t, 0, 1).unwrap();
        assert!(c.verify(&t).is_ok());
        assert!(c.radius_profile().iter().all(|&r| r <= 1));
        let mut broken = c.clone();
        broken.set(vec![1], Chain::zero(1)).unwrap();
        assert!(!broken.verify(&t).is_ok());
    }

    #[test]
    fn join_of_point_pairs() {
        let a = Complex::from_generators(vec![0, 1], vec!["a".into(), "b".into()], vec![vec![0], vec![1]]);
        let b = Complex::from_generators(vec![2, 3], vec!["c".into(), "d".into()], vec![vec![2], vec![3]]);
        let j = a.join(&b);
        let c = join_cone(&a, &ConeFunction::new(0, -1), &b, &ConeFunction::new(2, -1), 0).unwrap();
        assert!(c.verify(&j).is_ok(), "{:?}", c.verify(&j));
        assert_eq!(c.radius_profile(), vec![1, 2]);
    }
}
