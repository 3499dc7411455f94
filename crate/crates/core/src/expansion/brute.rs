use serde::Serialize;

use crate::chains::Cochain;
use crate::error::{HdxError, Result};
use crate::io::Entry;
use crate::simplicial::{Complex, Rational, Simplex};

/// All cochains of one degree with values in ℤ/m, indexed in base m.
struct Space<'a> {
    x: &'a Complex,
    k: i32,
    m: u64,
    faces: &'a [Simplex],
    /// Integer weights over the common denominator of degree k.
    weights: Vec<i64>,
    size: usize,
}

impl<'a> Space<'a> {
    fn new(x: &'a Complex, k: i32, m: u64, cap: u64) -> Result<Space<'a>> {
        let faces = x.faces(k);
        let mut size: u64 = 1;
        for _ in 0..faces.len() {
            size = size.saturating_mul(m);
            if size > cap {
                return Err(HdxError::Resource(format!(
                    "{m}^{} cochains in degree {k} exceed the brute-force cap {cap}; use bound mode",
                    faces.len()
                )));
            }
        }
        let weights = x.facet_counts(k).into_iter().map(|c| c as i64).collect();
        Ok(Space { x, k, m, faces, weights, size: size as usize })
    }

    fn decode(&self, mut i: usize, out: &mut [u64]) {
        for d in out.iter_mut() {
            *d = (i as u64) % self.m;
            i /= self.m as usize;
        }
    }

    fn encode(&self, digits: &[u64]) -> usize {
        digits.iter().rev().fold(0usize, |acc, &d| acc * self.m as usize + d as usize)
    }

    fn norm(&self, digits: &[u64]) -> i64 {
        digits.iter().zip(&self.weights).filter(|(d, _)| **d != 0).map(|(_, w)| *w).sum()
    }

    fn denominator(&self) -> i64 {
        self.x.weight_denominator(self.k) as i64
    }

    fn cochain(&self, digits: &[u64]) -> Cochain {
        let mut c = Cochain::zero(self.k, self.m);
        for (s, &d) in self.faces.iter().zip(digits) {
            c.set(s.clone(), d as i64);
        }
        c
    }
}

/// Sparse signed incidence of d_k: for each k-face, the (k+1)-faces it bounds.
fn coboundary_columns(x: &Complex, k: i32) -> Vec<Vec<(usize, i64)>> {
    let up = x.faces(k + 1);
    let index: std::collections::HashMap<&Simplex, usize> = x.faces(k).iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut cols = vec![Vec::new(); x.num_faces(k)];
    let mut buf = Vec::new();
    for (r, s) in up.iter().enumerate() {
        for i in 0..s.len() {
            buf.clear();
            buf.extend(s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v));
            cols[index[&buf]].push((r, if i % 2 == 0 { 1 } else { -1 }));
        }
    }
    cols
}

fn apply(cols: &[Vec<(usize, i64)>], rows: usize, m: u64, digits: &[u64]) -> Vec<u64> {
    let mut out = vec![0i64; rows];
    for (c, &d) in cols.iter().zip(digits) {
        if d != 0 {
            for &(r, s) in c {
                out[r] += s * d as i64;
            }
        }
    }
    out.into_iter().map(|v| v.rem_euclid(m as i64) as u64).collect()
}

/// A subgroup of C^k, closed under the generators' span.
fn span(space: &Space, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let len = space.faces.len();
    let mut seen = vec![false; space.size];
    let zero = vec![0u64; len];
    seen[0] = true;
    let mut out = vec![zero];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let s: Vec<u64> = out[i].iter().zip(g).map(|(a, b)| (a + b) % space.m).collect();
            let e = space.encode(&s);
            if !seen[e] {
                seen[e] = true;
                out.push(s);
            }
        }
        i += 1;
    }
    out
}

/// A minimum of ‖dφ‖ / ‖φ − K‖ together with the cochain attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionValue {
    #[serde(serialize_with = "crate::expansion::ser_rational")]
    pub value: Rational,
    pub witness: Vec<Entry<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Systole {
    #[serde(serialize_with = "crate::expansion::ser_rational")]
    pub norm: Rational,
    pub witness: Vec<Entry<i64>>,
}

/// Exact expansion data of one degree over ℤ/m.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeExpansion {
    pub k: i32,
    pub modulus: u64,
    pub cochains: usize,
    pub coboundaries: usize,
    pub cocycles: usize,
    /// None when B^k is all of C^k.
    pub coboundary: Option<ExpansionValue>,
    /// None when Z^k is all of C^k.
    pub cosystolic: Option<ExpansionValue>,
    /// Minimum norm over Z^k ∖ B^k, if nonempty.
    pub systole: Option<Systole>,
}

impl DegreeExpansion {
    pub fn cohomology_nonzero(&self) -> bool {
        self.cocycles > self.coboundaries
    }
}

fn witness(c: &Cochain) -> Vec<Entry<i64>> {
    c.values.iter().map(|(s, v)| Entry { simplex: s.clone(), coeff: *v }).collect()
}

/// Minimum over the cosets of `sub` (other than `sub` itself) of
/// ‖dφ‖/min-norm(φ + sub); ‖dφ‖ is constant on cosets since sub ⊆ Z^k.
fn coset_minimum(
    space: &Space,
    sub: &[Vec<u64>],
    dnorm: &dyn Fn(&[u64]) -> i64,
    dden: i64,
) -> Option<ExpansionValue> {
    let len = space.faces.len();
    let mut seen = vec![false; space.size];
    for s in sub {
        seen[space.encode(s)] = true;
    }
    let mut digits = vec![0u64; len];
    let mut best: Option<(Rational, Vec<u64>)> = None;
    for i in 0..space.size {
        if seen[i] {
            continue;
        }
        space.decode(i, &mut digits);
        let mut min_norm = i64::MAX;
        let mut rep = digits.clone();
        for s in sub {
            let c: Vec<u64> = digits.iter().zip(s).map(|(a, b)| (a + b) % space.m).collect();
            seen[space.encode(&c)] = true;
            let nm = space.norm(&c);
            if nm < min_norm {
                min_norm = nm;
                rep = c;
            }
        }
        let num = dnorm(&digits);
        let ratio = Rational::new(num * space.denominator(), min_norm * dden);
        if best.as_ref().map_or(true, |(b, _)| ratio < *b) {
            best = Some((ratio, rep));
        }
    }
    best.map(|(value, rep)| ExpansionValue { value, witness: witness(&space.cochain(&rep)) })
}

/// Brute-force h^k_cb, h^k_cs and the systole of X over ℤ/m, with the
/// augmented cochain complex (C^{−1} = ℤ/m). Requires m^{|X(k)|} ≤ cap.
pub fn expansion_degree(x: &Complex, k: i32, m: u64, cap: u64) -> Result<DegreeExpansion> {
    if m < 2 {
        return Err(HdxError::Domain(format!("modulus {m} must be at least 2")));
    }
    if !x.is_pure() {
        return Err(HdxError::Unsupported("norms need a pure complex".into()));
    }
    let n = x.dim();
    if k < 0 || k > n {
        return Err(HdxError::Domain(format!("degree {k} outside 0..={n}")));
    }
    let space = Space::new(x, k, m, cap)?;
    let len = space.faces.len();
    let down = coboundary_columns(x, k - 1);
    let gens: Vec<Vec<u64>> = down
        .iter()
        .map(|col| {
            let mut g = vec![0u64; len];
            for &(r, s) in col {
                g[r] = (s.rem_euclid(m as i64)) as u64;
            }
            g
        })
        .collect();
    let b = span(&space, &gens);
    let up_rows = x.num_faces(k + 1);
    let up = if k < n { coboundary_columns(x, k) } else { vec![Vec::new(); len] };
    let up_weights: Vec<i64> = x.facet_counts(k + 1).into_iter().map(|c| c as i64).collect();
    let dden = if k < n { x.weight_denominator(k + 1) as i64 } else { 1 };
    let dnorm = |d: &[u64]| -> i64 {
        apply(&up, up_rows, m, d).iter().zip(&up_weights).filter(|(v, _)| **v != 0).map(|(_, w)| *w).sum()
    };
    let mut digits = vec![0u64; len];
    let mut z = Vec::new();
    for i in 0..space.size {
        space.decode(i, &mut digits);
        if dnorm(&digits) == 0 {
            z.push(digits.clone());
        }
    }
    let coboundary = coset_minimum(&space, &b, &dnorm, dden);
    let cosystolic = coset_minimum(&space, &z, &dnorm, dden);
    let systole = if z.len() > b.len() {
        let mut in_b = vec![false; space.size];
        for s in &b {
            in_b[space.encode(s)] = true;
        }
        z.iter()
            .filter(|c| !in_b[space.encode(c)])
            .min_by_key(|c| space.norm(c))
            .map(|c| Systole {
                norm: Rational::new(space.norm(c), space.denominator()),
                witness: witness(&space.cochain(c)),
            })
    } else {
        None
    };
    Ok(DegreeExpansion {
        k,
        modulus: m,
        cochains: space.size,
        coboundaries: b.len(),
        cocycles: z.len(),
        coboundary,
        cosystolic,
        systole,
    })
}

/// h^k_cb(X; ℤ/m); zero when H^k ≠ 0, None when B^k = C^k.
pub fn coboundary_constant(x: &Complex, k: i32, m: u64, cap: u64) -> Result<Option<ExpansionValue>> {
    Ok(expansion_degree(x, k, m, cap)?.coboundary)
}

pub fn cosystolic_constant(x: &Complex, k: i32, m: u64, cap: u64) -> Result<Option<ExpansionValue>> {
    Ok(expansion_degree(x, k, m, cap)?.cosystolic)
}

pub fn systole(x: &Complex, k: i32, m: u64, cap: u64) -> Result<Option<Systole>> {
    Ok(expansion_degree(x, k, m, cap)?.systole)
}

/// Per-degree expansion data for k = 0..n−1.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub modulus: u64,
    pub degrees: Vec<DegreeExpansion>,
}

pub fn expansion_report(x: &Complex, m: u64, cap: u64) -> Result<ExpansionReport> {
    let degrees = (0..x.dim()).map(|k| expansion_degree(x, k, m, cap)).collect::<Result<_>>()?;
    Ok(ExpansionReport { modulus: m, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn filled_triangle() {
        let x = standard::simplex(3).unwrap();
        let d0 = expansion_degree(&x, 0, 2, 1 << 24).unwrap();
        assert_eq!(d0.coboundary.as_ref().unwrap().value, r(2, 1));
        assert_eq!(d0.cosystolic.unwrap().value, r(2, 1));
        assert!(d0.systole.is_none());
        let d1 = expansion_degree(&x, 1, 2, 1 << 24).unwrap();
        assert_eq!(d1.coboundary.unwrap().value, r(3, 1));
    }

    #[test]
    fn hollow_triangle() {
        let x = standard::cycle(3).unwrap();
        let d0 = expansion_degree(&x, 0, 2, 1 << 24).unwrap();
        assert_eq!(d0.coboundary.unwrap().value, r(2, 1));
        let d1 = expansion_degree(&x, 1, 2, 1 << 24).unwrap();
        assert!(d1.cohomology_nonzero());
        assert_eq!(d1.coboundary.unwrap().value, r(0, 1));
        let s = d1.systole.unwrap();
        assert_eq!(s.norm, r(1, 3));
        assert_eq!(s.witness.len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let x = standard::octahedron();
        assert!(matches!(expansion_degree(&x, 1, 3, 1 << 10), Err(HdxError::Resource(_))));
    }
}
