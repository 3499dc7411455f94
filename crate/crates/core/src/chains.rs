//! Chains, cochains, boundary and coboundary maps, and integral homology.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HdxError, Result};
use crate::simplicial::{Complex, Rational, Simplex};
use crate::snf::{self, IntMatrix};

/// Sorts `vertices` and returns the canonical simplex with the permutation sign.
/// Returns `None` if a vertex repeats.
pub fn orient(vertices: &[u32]) -> Option<(Simplex, i64)> {
    let mut v = vertices.to_vec();
    let mut sign = 1i64;
    // insertion sort counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// An integral chain stored on canonical (ascending) orientations.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Chain {
    degree: i32,
    terms: BTreeMap<Simplex, i64>,
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}{{", self.degree)?;
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}{s:?}")?;
        }
        write!(f, "}}")
    }
}

impl Chain {
    pub fn zero(degree: i32) -> Chain {
        Chain { degree, terms: BTreeMap::new() }
    }

    /// The chain 1_σ for an oriented simplex σ given in any vertex order.
    pub fn basis(vertices: &[u32]) -> Result<Chain> {
        let mut c = Chain::zero(vertices.len() as i32 - 1);
        c.add_oriented(vertices, 1)?;
        Ok(c)
    }

    pub fn empty_simplex() -> Chain {
        let mut c = Chain::zero(-1);
        c.terms.insert(Vec::new(), 1);
        c
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn support_size(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> &BTreeMap<Simplex, i64> {
        &self.terms
    }
    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &i64)> {
        self.terms.iter()
    }
    pub fn coeff(&self, s: &[u32]) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    /// Adds `c · 1_σ` for a canonical simplex σ.
    pub fn add_term(&mut self, s: Simplex, c: i64) {
        if c == 0 {
            return;
        }
        debug_assert_eq!(s.len() as i32 - 1, self.degree);
        let e = self.terms.entry(s).or_insert(0);
        *e += c;
        if *e == 0 {
            let key: Simplex = self.terms.iter().find(|(_, v)| **v == 0).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    /// Adds `c · 1_σ` for σ in arbitrary vertex order.
    pub fn add_oriented(&mut self, vertices: &[u32], c: i64) -> Result<()> {
        if vertices.len() as i32 - 1 != self.degree {
            return Err(HdxError::Domain(format!(
                "simplex {vertices:?} has wrong degree for a {}-chain",
                self.degree
            )));
        }
        let (s, sign) = orient(vertices).ok_or_else(|| HdxError::Domain(format!("degenerate simplex {vertices:?}")))?;
        self.add_term(s, sign * c);
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Chain, k: i64) -> Result<()> {
        if other.degree != self.degree && !other.is_zero() {
            return Err(HdxError::Domain(format!(
                "cannot add a {}-chain to a {}-chain",
                other.degree, self.degree
            )));
        }
        for (s, &c) in &other.terms {
            let e = self.terms.entry(s.clone()).or_insert(0);
            *e += k * c;
            if *e == 0 {
                self.terms.remove(s);
            }
        }
        Ok(())
    }

    pub fn scaled(&self, k: i64) -> Chain {
        if k == 0 {
            return Chain::zero(self.degree);
        }
        Chain { degree: self.degree, terms: self.terms.iter().map(|(s, &c)| (s.clone(), c * k)).collect() }
    }

    pub fn with_degree(mut self, degree: i32) -> Chain {
        if self.is_zero() {
            self.degree = degree;
        }
        self
    }

    pub fn simplices_in(&self, x: &Complex) -> Result<()> {
        for s in self.terms.keys() {
            if !x.contains(s) {
                return Err(HdxError::Domain(format!("simplex {s:?} is not in the complex")));
            }
        }
        Ok(())
    }
}

/// ∂ of a chain; checks membership in `x` when given.
pub fn boundary(a: &Chain, x: Option<&Complex>) -> Result<Chain> {
    if a.degree < 0 {
        return Err(HdxError::Domain("boundary of a (-1)-chain".into()));
    }
    if let Some(x) = x {
        a.simplices_in(x)?;
    }
    let mut out = Chain::zero(a.degree - 1);
    let mut buf = Vec::new();
    for (s, &c) in &a.terms {
        for i in 0..s.len() {
            buf.clear();
            buf.extend(s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v));
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.add_term(buf.clone(), sign * c);
        }
    }
    Ok(out)
}

/// `[v, A]`: prepends `v` to every simplex of `A`.
pub fn bracket_vertex(v: u32, a: &Chain, x: Option<&Complex>) -> Result<Chain> {
    let mut out = Chain::zero(a.degree + 1);
    for (s, &c) in &a.terms {
        if s.binary_search(&v).is_ok() {
            return Err(HdxError::Domain(format!("vertex {v} already lies in {s:?}")));
        }
        let pos = s.partition_point(|&u| u < v);
        let mut t = s.clone();
        t.insert(pos, v);
        if let Some(x) = x {
            if !x.contains(&t) {
                return Err(HdxError::Domain(format!("{s:?} is not in the link of {v}")));
            }
        }
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        out.add_term(t, sign * c);
    }
    Ok(out)
}

/// `[A1, A2]`: concatenation of simplices from disjoint vertex sets.
pub fn bracket_chains(a1: &Chain, a2: &Chain, x: Option<&Complex>) -> Result<Chain> {
    let mut out = Chain::zero(a1.degree + a2.degree + 1);
    for (s1, &c1) in &a1.terms {
        for (s2, &c2) in &a2.terms {
            let mut inversions = 0usize;
            for a in s1 {
                if s2.binary_search(a).is_ok() {
                    return Err(HdxError::Domain(format!("{s1:?} and {s2:?} share a vertex")));
                }
                inversions += s2.partition_point(|b| b < a);
            }
            let mut t: Simplex = s1.iter().chain(s2.iter()).copied().collect();
            t.sort_unstable();
            if let Some(x) = x {
                if !x.contains(&t) {
                    return Err(HdxError::Domain(format!("{t:?} is not a face of the join")));
                }
            }
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            out.add_term(t, sign * c1 * c2);
        }
    }
    Ok(out)
}

/// Finite direct sum of cyclic groups; a modulus of 0 denotes ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientGroup {
    pub moduli: Vec<u64>,
}

impl CoefficientGroup {
    pub fn integers() -> CoefficientGroup {
        CoefficientGroup { moduli: vec![0] }
    }
    pub fn cyclic(m: u64) -> CoefficientGroup {
        CoefficientGroup { moduli: vec![m] }
    }

    /// Parses `Z`, `Z/3`, or sums like `Z/2+Z`.
    pub fn parse(s: &str) -> Result<CoefficientGroup> {
        let mut moduli = Vec::new();
        for part in s.split(['+', ',']).map(str::trim) {
            if part == "Z" {
                moduli.push(0);
            } else if let Some(m) = part.strip_prefix("Z/") {
                let m: u64 = m.trim().parse().map_err(|_| HdxError::Malformed(format!("bad coefficient group `{s}`")))?;
                if m < 2 {
                    return Err(HdxError::Malformed(format!("modulus must be at least 2 in `{s}`")));
                }
                moduli.push(m);
            } else {
                return Err(HdxError::Malformed(format!("bad coefficient group `{s}`")));
            }
        }
        if moduli.is_empty() {
            return Err(HdxError::Malformed("empty coefficient group".into()));
        }
        Ok(CoefficientGroup { moduli })
    }

    pub fn descriptor(&self) -> String {
        self.moduli
            .iter()
            .map(|&m| if m == 0 { "Z".to_string() } else { format!("Z/{m}") })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn reduce(&self, a: &mut [i64]) {
        for (x, &m) in a.iter_mut().zip(&self.moduli) {
            if m != 0 {
                *x = x.rem_euclid(m as i64);
            }
        }
    }

    pub fn embed_int(&self, c: i64) -> Vec<i64> {
        let mut v = vec![c; self.rank()];
        self.reduce(&mut v);
        v
    }

    pub fn is_zero(a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Componentwise product with an integer vector, reduced.
    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut v: Vec<i64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        self.reduce(&mut v);
        v
    }

    pub fn basis_element(&self, j: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[j] = 1;
        v
    }
}

/// A chain with coefficients in a [`CoefficientGroup`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupChain {
    pub degree: i32,
    pub group: CoefficientGroup,
    pub terms: BTreeMap<Simplex, Vec<i64>>,
}

impl GroupChain {
    pub fn zero(degree: i32, group: &CoefficientGroup) -> GroupChain {
        GroupChain { degree, group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, s: Simplex, a: &[i64], sign: i64) {
        let rank = self.group.rank();
        let e = self.terms.entry(s.clone()).or_insert_with(|| vec![0; rank]);
        for (x, y) in e.iter_mut().zip(a) {
            *x += sign * y;
        }
        self.group.reduce(e);
        if CoefficientGroup::is_zero(e) {
            self.terms.remove(&s);
        }
    }

    pub fn add(&mut self, other: &GroupChain) {
        for (s, a) in &other.terms {
            self.add_term(s.clone(), a, 1);
        }
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn from_integral(c: &Chain, a: &[i64], group: &CoefficientGroup) -> GroupChain {
        let mut out = GroupChain::zero(c.degree(), group);
        for (s, &k) in c.iter() {
            let v: Vec<i64> = a.iter().map(|x| x * k).collect();
            out.add_term(s.clone(), &v, 1);
        }
        out
    }

    pub fn boundary(&self) -> GroupChain {
        let mut out = GroupChain::zero(self.degree - 1, &self.group);
        for (s, a) in &self.terms {
            for i in 0..s.len() {
                let t: Simplex = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
                out.add_term(t, a, if i % 2 == 0 { 1 } else { -1 });
            }
        }
        out
    }
}

/// A cochain with values in ℤ (modulus 0) or ℤ/m, stored on canonical simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: i32,
    pub modulus: u64,
    pub values: BTreeMap<Simplex, i64>,
}

impl Cochain {
    pub fn zero(degree: i32, modulus: u64) -> Cochain {
        Cochain { degree, modulus, values: BTreeMap::new() }
    }

    fn reduce(&self, v: i64) -> i64 {
        if self.modulus == 0 {
            v
        } else {
            v.rem_euclid(self.modulus as i64)
        }
    }

    pub fn set(&mut self, s: Simplex, v: i64) {
        let v = self.reduce(v);
        if v == 0 {
            self.values.remove(&s);
        } else {
            self.values.insert(s, v);
        }
    }

    /// Value on an oriented simplex in arbitrary order (anti-symmetric).
    pub fn eval(&self, vertices: &[u32]) -> i64 {
        match orient(vertices) {
            Some((s, sign)) => self.reduce(sign * self.values.get(&s).copied().unwrap_or(0)),
            None => 0,
        }
    }

    pub fn support(&self) -> impl Iterator<Item = &Simplex> {
        self.values.keys()
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        for (s, &v) in &other.values {
            let cur = out.values.get(s).copied().unwrap_or(0);
            out.set(s.clone(), cur - v);
        }
        out
    }

    /// ‖φ‖ = Σ_{σ ∈ supp φ} w(σ).
    pub fn norm(&self, x: &Complex) -> Result<Rational> {
        let mut total = Rational::from_integer(0);
        for s in self.values.keys() {
            total += x.weight(s)?;
        }
        Ok(total)
    }
}

pub fn coboundary(phi: &Cochain, x: &Complex) -> Result<Cochain> {
    if phi.degree < -1 || phi.degree >= x.dim() {
        return Err(HdxError::Domain(format!(
            "coboundary of a {}-cochain on a {}-dimensional complex",
            phi.degree,
            x.dim()
        )));
    }
    let mut out = Cochain::zero(phi.degree + 1, phi.modulus);
    let mut buf = Vec::new();
    for s in x.faces(phi.degree + 1) {
        let mut acc = 0i64;
        for i in 0..s.len() {
            buf.clear();
            buf.extend(s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v));
            let v = phi.values.get(&buf).copied().unwrap_or(0);
            acc += if i % 2 == 0 { v } else { -v };
        }
        out.set(s.clone(), acc);
    }
    Ok(out)
}

/// ⟨φ, A⟩ = Σ φ(σ) A(σ) over canonical simplices.
pub fn pairing(phi: &Cochain, a: &Chain) -> i64 {
    let v: i64 = a.iter().map(|(s, &c)| c * phi.values.get(s).copied().unwrap_or(0)).sum();
    if phi.modulus == 0 {
        v
    } else {
        v.rem_euclid(phi.modulus as i64)
    }
}

/// Matrix of ∂_k : C_k → C_{k-1} with rows `faces(k-1)` and columns `faces(k)`.
/// For k = 0 this is the augmentation.
pub fn boundary_matrix(x: &Complex, k: i32) -> IntMatrix {
    let rows = x.faces(k - 1);
    let cols = x.faces(k);
    let index: HashMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    let mut buf = Vec::new();
    for (c, s) in cols.iter().enumerate() {
        for i in 0..s.len() {
            buf.clear();
            buf.extend(s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v));
            let r = index[&buf];
            m.set(r, c, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: i32,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Reduced integral homology H̃_k for k = −1..=dim, via Smith normal forms.
pub fn reduced_homology_ranks(x: &Complex, entry_cap: usize) -> Result<Vec<HomologyGroup>> {
    let n = x.dim();
    let mut ranks: Vec<usize> = Vec::new();
    let mut torsions: Vec<Vec<u64>> = Vec::new();
    for k in 0..=n + 1 {
        let rows = x.num_faces(k - 1);
        let cols = x.num_faces(k);
        if rows * cols > entry_cap {
            return Err(HdxError::Resource(format!(
                "boundary matrix {rows}x{cols} exceeds entry cap {entry_cap}"
            )));
        }
        let d = if cols == 0 { Vec::new() } else { snf::invariant_factors(boundary_matrix(x, k))? };
        ranks.push(d.len());
        torsions.push(d.iter().filter(|&&v| v > 1).map(|&v| v as u64).collect());
    }
    // ranks[i] is the rank of ∂_i for i = 0..=n+1
    let rank_of = |k: i32| -> usize {
        if k < 0 || k > n + 1 {
            0
        } else {
            ranks[k as usize]
        }
    };
    let mut out = Vec::new();
    for k in -1..=n {
        let ck = x.num_faces(k);
        let rank = ck - rank_of(k) - rank_of(k + 1);
        let torsion = if k + 1 <= n + 1 && k + 1 >= 0 { torsions[(k + 1) as usize].clone() } else { Vec::new() };
        out.push(HomologyGroup { degree: k, rank, torsion });
    }
    Ok(out)
}

/// Whether reduced cohomology H̃^k(X; ℤ/m) is nonzero, by universal coefficients.
pub fn cohomology_nonzero_mod(hom: &[HomologyGroup], k: i32, m: u64) -> bool {
    let find = |d: i32| hom.iter().find(|h| h.degree == d);
    let divisible = |t: &u64| num_integer::Integer::gcd(t, &m) > 1;
    if let Some(h) = find(k) {
        if h.rank > 0 || h.torsion.iter().any(divisible) {
            return true;
        }
    }
    if let Some(h) = find(k - 1) {
        if h.torsion.iter().any(divisible) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Complex {
        Complex::from_labelled_faces(&[vec!["1", "2", "3"]]).unwrap()
    }

    #[test]
    fn boundary_of_edge() {
        let d = boundary(&Chain::basis(&[1, 2]).unwrap(), None).unwrap();
        let mut expect = Chain::zero(0);
        expect.add_term(vec![2], 1);
        expect.add_term(vec![1], -1);
        assert_eq!(d, expect);
        let dd = boundary(&boundary(&Chain::basis(&[1, 2, 3]).unwrap(), None).unwrap(), None).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient(&[2, 1]), Some((vec![1, 2], -1)));
        assert_eq!(orient(&[3, 1, 2]), Some((vec![1, 2, 3], 1)));
        assert_eq!(orient(&[1, 1]), None);
    }

    #[test]
    fn coboundary_triangle_mod2() {
        let x = tri();
        let mut phi = Cochain::zero(0, 2);
        phi.set(vec![0], 1);
        let d = coboundary(&phi, &x).unwrap();
        assert_eq!(d.eval(&[0, 1]), 1);
        assert_eq!(d.eval(&[1, 2]), 0);
        assert_eq!(d.norm(&x).unwrap(), Rational::new(2, 3));
    }

    #[test]
    fn homology_examples() {
        let h = reduced_homology_ranks(&tri(), 1 << 20).unwrap();
        assert!(h.iter().all(|g| g.is_zero()));
        let hollow = tri().skeleton(1).unwrap();
        let h = reduced_homology_ranks(&hollow, 1 << 20).unwrap();
        assert_eq!(h.iter().find(|g| g.degree == 1).unwrap().rank, 1);
    }

    #[test]
    fn brackets() {
        let v = bracket_vertex(5, &Chain::empty_simplex(), None).unwrap();
        assert_eq!(v, Chain::basis(&[5]).unwrap());
        let uv = bracket_chains(&Chain::basis(&[3]).unwrap(), &Chain::basis(&[1]).unwrap(), None).unwrap();
        assert_eq!(uv, Chain::basis(&[3, 1]).unwrap());
        assert_eq!(uv.coeff(&[1, 3]), -1);
    }

    #[test]
    fn group_parse() {
        assert_eq!(CoefficientGroup::parse("Z/2+Z").unwrap().moduli, vec![2, 0]);
        assert!(CoefficientGroup::parse("Z/1").is_err());
        assert!(CoefficientGroup::parse("Q").is_err());
    }
}
