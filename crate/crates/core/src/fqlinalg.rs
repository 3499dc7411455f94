//! Exact linear algebra over GF(p^s).
//!
//! Field elements are encoded as integers `c_0 + c_1 p + ... + c_{s-1} p^{s-1}`,
//! where `c_i` is the coefficient of `x^i` modulo the defining polynomial.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{HdxError, Result};

pub type Elem = u32;

/// Polynomials over GF(p) as coefficient vectors, lowest degree first.
pub mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo the nonzero polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let dm = degree(m).expect("modulus must be nonzero");
        let lead_inv = inv_mod(m[dm], p) as u64;
        while let Some(da) = degree(&a) {
            if da < dm {
                break;
            }
            let factor = a[da] as u64 * lead_inv % p as u64;
            let shift = da - dm;
            for (i, &c) in m.iter().enumerate().take(dm + 1) {
                let sub = factor * c as u64 % p as u64;
                a[shift + i] = ((a[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            a = trim(a);
        }
        a
    }

    /// All monic polynomials of the given degree, in lexicographic order of
    /// their coefficient lists read from the highest non-leading term down.
    pub fn monic_of_degree(d: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
        let count = (p as u64).pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut c = vec![0u32; d + 1];
            c[d] = 1;
            for slot in c.iter_mut().take(d) {
                *slot = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            c
        })
    }

    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.iter().map(|&c| c % p).collect());
        let d = match degree(&f) {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        for dd in 1..=d / 2 {
            for g in monic_of_degree(dd, p) {
                if rem(&f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// The monic irreducible polynomial of degree `s` that comes first when
    /// polynomials are compared by their coefficient lists from `x^{s-1}` down
    /// to the constant term.
    pub fn least_irreducible(s: usize, p: u32) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for g in monic_of_degree(s, p) {
            if is_irreducible(&g, p) {
                let better = match &best {
                    None => true,
                    Some(b) => g.iter().rev().cmp(b.iter().rev()) == std::cmp::Ordering::Less,
                };
                if better {
                    best = Some(g);
                }
            }
        }
        best.expect("irreducible polynomials exist in every degree")
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite field GF(p^s) with precomputed operation tables.
pub struct Field {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.s)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(p: u32, s: u32) -> Result<Arc<Field>> {
        if s == 0 {
            return Err(HdxError::Domain("field degree must be at least 1".into()));
        }
        if !is_prime(p) {
            return Err(HdxError::Domain(format!("{p} is not prime")));
        }
        let modulus = if s == 1 {
            vec![0, 1]
        } else {
            poly::least_irreducible(s as usize, p)
        };
        Self::build(p, modulus)
    }

    /// Builds GF(p^s) from a user-specified monic irreducible polynomial.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Arc<Field>> {
        if !is_prime(p) {
            return Err(HdxError::Domain(format!("{p} is not prime")));
        }
        let m = poly::trim(modulus.iter().map(|&c| c % p).collect());
        if !poly::is_irreducible(&m, p) {
            return Err(HdxError::Domain(format!("polynomial {modulus:?} is not irreducible over GF({p})")));
        }
        let d = m.len() - 1;
        let lead_inv = (1..p).find(|&x| (x as u64 * m[d] as u64) % p as u64 == 1).unwrap();
        let monic: Vec<u32> = m.iter().map(|&c| ((c as u64 * lead_inv as u64) % p as u64) as u32).collect();
        Self::build(p, monic)
    }

    /// Parses `GF(p^s)`, `GF(q)` or a bare prime power.
    pub fn parse(desc: &str) -> Result<Arc<Field>> {
        let t = desc.trim();
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        if let Some((p, s)) = inner.split_once('^') {
            let p: u32 = p.trim().parse().map_err(|_| HdxError::Malformed(format!("bad field `{desc}`")))?;
            let s: u32 = s.trim().parse().map_err(|_| HdxError::Malformed(format!("bad field `{desc}`")))?;
            Field::new(p, s)
        } else {
            let q: u32 = inner.parse().map_err(|_| HdxError::Malformed(format!("bad field `{desc}`")))?;
            Field::from_order(q)
        }
    }

    pub fn from_order(q: u32) -> Result<Arc<Field>> {
        if q < 2 {
            return Err(HdxError::Domain(format!("no field of order {q}")));
        }
        let mut p = 2;
        while q % p != 0 {
            p += 1;
        }
        let mut s = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            s += 1;
        }
        if r != 1 {
            return Err(HdxError::Domain(format!("{q} is not a prime power")));
        }
        Field::new(p, s)
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Arc<Field>> {
        let s = (modulus.len() - 1) as u32;
        let q64 = (p as u64).pow(s);
        if q64 > 4096 {
            return Err(HdxError::Resource(format!("field of order {q64} exceeds table limit 4096")));
        }
        let q = q64 as u32;
        let to_poly = |mut e: u32| {
            let mut c = vec![0u32; s as usize];
            for slot in c.iter_mut() {
                *slot = e % p;
                e /= p;
            }
            c
        };
        let from_poly = |c: &[u32]| {
            let mut e = 0u32;
            for &x in c.iter().rev() {
                e = e * p + x;
            }
            e
        };
        let polys: Vec<Vec<u32>> = (0..q).map(to_poly).collect();
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let sum: Vec<u32> = polys[a].iter().zip(&polys[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = from_poly(&sum);
                let prod = poly::rem(&poly::mul(&polys[a], &polys[b], p), &modulus, p);
                let mut padded = prod;
                padded.resize(s as usize, 0);
                mul[a * n + b] = from_poly(&padded);
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            neg[a] = (0..q).find(|&b| add[a * n + b as usize] == 0).unwrap();
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * n + b as usize] == 1).ok_or_else(|| {
                    HdxError::Domain("defining polynomial is not irreducible".into())
                })?;
            }
        }
        Ok(Arc::new(Field { p, s, q, modulus, add, mul, neg, inv }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn descriptor(&self) -> String {
        format!("GF({}^{})", self.p, self.s)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            None
        } else {
            Some(self.inv[a as usize])
        }
    }
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }
    /// The image of an integer under the prime-field embedding.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
    /// The element `x` (the class of the indeterminate); equals 0 when s = 1
    /// is not meaningful, so callers should use it only for s >= 2.
    pub fn generator_x(&self) -> Elem {
        if self.s >= 2 {
            self.p
        } else {
            0
        }
    }
    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.elements().any(|x| self.mul(x, x) == a)
    }
}

/// Reduces the rows in place to reduced row echelon form; returns pivot columns.
pub fn rref(f: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the null space {x : M x = 0} where `rows` are the rows of M.
pub fn nullspace(f: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(f, &mut m) };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// A subspace of GF(q)^m stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    m: usize,
    basis: Vec<Vec<Elem>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for x in row {
                write!(f, "{x}")?;
            }
        }
        write!(f, ">")
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.basis.len(), &self.basis).cmp(&(other.m, other.basis.len(), &other.basis))
    }
}

impl Subspace {
    pub fn zero(m: usize) -> Subspace {
        Subspace { m, basis: Vec::new() }
    }

    pub fn full(m: usize) -> Subspace {
        let basis = (0..m)
            .map(|i| {
                let mut v = vec![0; m];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { m, basis }
    }

    pub fn span(f: &Field, m: usize, vectors: &[Vec<Elem>]) -> Result<Subspace> {
        if vectors.iter().any(|v| v.len() != m) {
            return Err(HdxError::Domain(format!("vector length differs from ambient dimension {m}")));
        }
        let mut rows: Vec<Vec<Elem>> = vectors.iter().map(|v| v.iter().map(|&x| x % f.order()).collect()).collect();
        if !rows.is_empty() {
            rref(f, &mut rows);
        }
        Ok(Subspace { m, basis: rows })
    }

    /// Coordinate subspace spanned by the given standard basis vectors (0-based).
    pub fn coordinate(m: usize, axes: &[usize]) -> Subspace {
        let mut axes = axes.to_vec();
        axes.sort_unstable();
        axes.dedup();
        let basis = axes
            .iter()
            .map(|&i| {
                let mut v = vec![0; m];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { m, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.m
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.m != other.m {
            return Err(HdxError::Domain(format!(
                "ambient dimensions differ: {} vs {}",
                self.m, other.m
            )));
        }
        Ok(())
    }

    pub fn contains_vector(&self, f: &Field, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|&x| x != 0).unwrap();
            if w[pc] != 0 {
                let factor = w[pc];
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// `self <= other`.
    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> bool {
        self.m == other.m && self.dim() <= other.dim() && self.basis.iter().all(|v| other.contains_vector(f, v))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(f, self.m, &rows)
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self, f: &Field) -> Subspace {
        let ns = nullspace(f, &self.basis, self.m);
        Subspace::span(f, self.m, &ns).unwrap()
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let a = self.annihilator(f).sum(f, &other.annihilator(f))?;
        Ok(a.annihilator(f))
    }

    /// Coordinates of `v + self` in the quotient space, using the non-pivot
    /// columns of the echelon basis as coordinates.
    pub fn quotient_coords(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        let mut pivots = Vec::new();
        for row in &self.basis {
            let pc = row.iter().position(|&x| x != 0).unwrap();
            pivots.push(pc);
            if w[pc] != 0 {
                let factor = w[pc];
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        w.into_iter()
            .enumerate()
            .filter(|(i, _)| !pivots.contains(i))
            .map(|(_, x)| x)
            .collect()
    }

    /// Image of `w` in the quotient `V / self`.
    pub fn quotient_image(&self, f: &Field, w: &Subspace) -> Result<Subspace> {
        self.check(w)?;
        let rows: Vec<Vec<Elem>> = w.basis.iter().map(|v| self.quotient_coords(f, v)).collect();
        Subspace::span(f, self.m - self.dim(), &rows)
    }

    /// All vectors of the subspace, in a fixed order.
    pub fn vectors(&self, f: &Field) -> Vec<Vec<Elem>> {
        let q = f.order() as u64;
        let d = self.dim();
        let total = q.pow(d as u32);
        (0..total)
            .map(|mut idx| {
                let mut v = vec![0; self.m];
                for row in &self.basis {
                    let c = (idx % q) as Elem;
                    idx /= q;
                    if c != 0 {
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = f.add(*x, f.mul(c, y));
                        }
                    }
                }
                v
            })
            .collect()
    }
}

pub fn gaussian_binomial(m: usize, d: usize, q: u64) -> Option<u128> {
    if d > m {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num = num.checked_mul((q as u128).checked_pow((m - i) as u32)?.checked_sub(1)?)?;
        den = den.checked_mul((q as u128).checked_pow((i + 1) as u32)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

/// Every d-dimensional subspace of GF(q)^m, each exactly once in echelon form.
pub fn enumerate_subspaces(f: &Field, m: usize, d: usize, cap: usize) -> Result<Vec<Subspace>> {
    let count = gaussian_binomial(m, d, f.order() as u64)
        .ok_or_else(|| HdxError::Resource("subspace count overflows".into()))?;
    if count > cap as u128 {
        return Err(HdxError::Resource(format!(
            "{count} subspaces of dimension {d} in GF({})^{m} exceed cap {cap}",
            f.order()
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let q = f.order() as u64;
    for pivots in combinations(m, d) {
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..m {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let total = q.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut basis = vec![vec![0; m]; d];
            for (r, &pc) in pivots.iter().enumerate() {
                basis[r][pc] = 1;
            }
            for &(r, c) in &free {
                basis[r][c] = (idx % q) as Elem;
                idx /= q;
            }
            out.push(Subspace { m, basis });
        }
    }
    out.sort();
    Ok(out)
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `U ⋔ W` inside V: they meet trivially or span V.
pub fn is_transversal(f: &Field, u: &Subspace, w: &Subspace) -> Result<bool> {
    u.check(w)?;
    Ok(u.intersect(f, w)?.is_zero() || u.sum(f, w)?.is_full())
}

/// Transversality inside the interval `[bottom, top]`.
pub fn is_transversal_in(f: &Field, u: &Subspace, w: &Subspace, bottom: &Subspace, top: &Subspace) -> Result<bool> {
    Ok(u.intersect(f, w)? == *bottom || u.sum(f, w)? == *top)
}

/// A symmetric bilinear form with its quadratic form Q(x) = f(x,x)/2 (odd characteristic).
#[derive(Clone, Debug)]
pub struct Form {
    field: Arc<Field>,
    gram: Vec<Vec<Elem>>,
    half: Elem,
}

impl Form {
    pub fn new(field: Arc<Field>, gram: Vec<Vec<Elem>>) -> Result<Form> {
        if field.p() == 2 {
            return Err(HdxError::Unsupported("quadratic forms in characteristic 2".into()));
        }
        let m = gram.len();
        if gram.iter().any(|r| r.len() != m) {
            return Err(HdxError::Malformed("form matrix must be square".into()));
        }
        for i in 0..m {
            for j in 0..m {
                if gram[i][j] != gram[j][i] {
                    return Err(HdxError::Domain("form matrix must be symmetric".into()));
                }
                if gram[i][j] >= field.order() {
                    return Err(HdxError::Malformed("form entry outside field".into()));
                }
            }
        }
        let half = field.inv(field.from_int(2)).unwrap();
        Ok(Form { field, gram, half })
    }

    /// Gram matrix of Q = x_1 x_{h+1} + ... + x_h x_{2h} + extra diagonal squares.
    pub fn hyperbolic(field: Arc<Field>, h: usize, diagonal: &[Elem]) -> Result<Form> {
        let m = 2 * h + diagonal.len();
        let mut g = vec![vec![0; m]; m];
        for i in 0..h {
            g[i][i + h] = 1;
            g[i + h][i] = 1;
        }
        for (k, &a) in diagonal.iter().enumerate() {
            g[2 * h + k][2 * h + k] = field.add(a, a);
        }
        Form::new(field, g)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.gram.len()
    }
    pub fn gram(&self) -> &[Vec<Elem>] {
        &self.gram
    }

    pub fn bilinear(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let row = dot(f, &self.gram[i], y);
            acc = f.add(acc, f.mul(xi, row));
        }
        acc
    }

    pub fn quadratic(&self, x: &[Elem]) -> Elem {
        self.field.mul(self.bilinear(x, x), self.half)
    }

    pub fn perp(&self, u: &Subspace) -> Subspace {
        let f = &self.field;
        let rows: Vec<Vec<Elem>> = u
            .basis()
            .iter()
            .map(|v| (0..self.dim()).map(|j| dot(f, v, &self.gram.iter().map(|r| r[j]).collect::<Vec<_>>())).collect())
            .collect();
        let ns = nullspace(f, &rows, self.dim());
        Subspace::span(f, self.dim(), &ns).unwrap()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.perp(&Subspace::full(self.dim())).is_zero()
    }

    pub fn is_totally_isotropic(&self, u: &Subspace) -> bool {
        let b = u.basis();
        for i in 0..b.len() {
            if self.quadratic(&b[i]) != 0 {
                return false;
            }
            for j in i + 1..b.len() {
                if self.bilinear(&b[i], &b[j]) != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Largest dimension of a totally isotropic subspace, found by greedy
    /// extension (all maximal ones share a dimension for nondegenerate forms).
    pub fn witt_index(&self) -> usize {
        let f = &self.field;
        let mut u = Subspace::zero(self.dim());
        loop {
            let p = self.perp(&u);
            let next = p
                .vectors(f)
                .into_iter()
                .find(|v| self.quadratic(v) == 0 && !u.contains_vector(f, v));
            match next {
                Some(v) => {
                    let mut rows = u.basis().to_vec();
                    rows.push(v);
                    u = Subspace::span(f, self.dim(), &rows).unwrap();
                }
                None => return u.dim(),
            }
        }
    }

    /// All nonzero proper totally isotropic subspaces, grouped by dimension.
    pub fn isotropic_subspaces(&self, cap: usize) -> Result<Vec<Vec<Subspace>>> {
        let f = &self.field;
        let m = self.dim();
        let mut levels: Vec<Vec<Subspace>> = Vec::new();
        let points: Vec<Subspace> = enumerate_subspaces(f, m, 1, cap)?
            .into_iter()
            .filter(|s| self.is_totally_isotropic(s))
            .collect();
        let mut total = points.len();
        levels.push(points.clone());
        loop {
            let prev = levels.last().unwrap();
            let mut next = std::collections::BTreeSet::new();
            for u in prev {
                let up = self.perp(u);
                for pt in &points {
                    if !pt.is_subspace_of(f, u) && pt.is_subspace_of(f, &up) {
                        let w = u.sum(f, pt)?;
                        if w.dim() < m {
                            next.insert(w);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            total += next.len();
            if total > cap {
                return Err(HdxError::Resource(format!("isotropic subspace count exceeds cap {cap}")));
            }
            levels.push(next.into_iter().collect());
        }
        Ok(levels)
    }
}

/// `U ~⋔ W`: transversal, or both maximal totally isotropic meeting in a line.
pub fn is_tilde_transversal(form: &Form, u: &Subspace, w: &Subspace) -> Result<bool> {
    let f = form.field();
    if is_transversal(f, u, w)? {
        return Ok(true);
    }
    let witt = form.witt_index();
    let in_tilde = |x: &Subspace| {
        !x.is_zero() && !x.is_full() && form.is_totally_isotropic(x) && x.dim() + 1 != witt
    };
    Ok(in_tilde(u)
        && in_tilde(w)
        && form.perp(u) == *u
        && form.perp(w) == *w
        && u.intersect(f, w)?.dim() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tables_gf4() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = f.generator_x();
        assert_eq!(f.mul(x, x), f.add(x, 1));
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn least_irreducible_gf9() {
        // x^2 + 1 is irreducible over GF(3) and precedes x^2 + x + 2.
        assert_eq!(poly::least_irreducible(2, 3), vec![1, 0, 1]);
        assert!(!poly::is_irreducible(&[2, 0, 1], 3));
    }

    #[test]
    fn subspace_counts() {
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(enumerate_subspaces(&f3, 3, 1, 1000).unwrap().len(), 13);
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 4, 2, 1000).unwrap().len(), 35);
        assert_eq!(enumerate_subspaces(&f2, 4, 0, 1000).unwrap(), vec![Subspace::zero(4)]);
        assert!(enumerate_subspaces(&f2, 4, 2, 10).is_err());
    }

    #[test]
    fn meet_and_join() {
        let f = Field::new(3, 1).unwrap();
        let a = Subspace::coordinate(3, &[0, 1]);
        let b = Subspace::coordinate(3, &[1, 2]);
        assert_eq!(a.intersect(&f, &b).unwrap(), Subspace::coordinate(3, &[1]));
        let e1 = Subspace::coordinate(3, &[0]);
        let e2 = Subspace::coordinate(3, &[1]);
        assert_eq!(e1.sum(&f, &e2).unwrap().dim(), 2);
        assert!(e1.sum(&f, &Subspace::coordinate(4, &[0])).is_err());
    }

    #[test]
    fn transversality_examples() {
        let f = Field::new(3, 1).unwrap();
        let e1 = Subspace::coordinate(3, &[0]);
        let e2 = Subspace::coordinate(3, &[1]);
        let e12 = Subspace::coordinate(3, &[0, 1]);
        let e23 = Subspace::coordinate(3, &[1, 2]);
        assert!(is_transversal(&f, &e1, &e2).unwrap());
        assert!(!is_transversal(&f, &e1, &e12).unwrap());
        assert!(is_transversal(&f, &e12, &e23).unwrap());
    }

    #[test]
    fn hyperbolic_form_isotropy() {
        let f = Field::new(3, 1).unwrap();
        let form = Form::hyperbolic(f.clone(), 2, &[]).unwrap();
        assert!(form.is_totally_isotropic(&Subspace::coordinate(4, &[0])));
        assert!(form.is_totally_isotropic(&Subspace::coordinate(4, &[0, 1])));
        assert!(!form.is_totally_isotropic(&Subspace::coordinate(4, &[0, 2])));
        assert_eq!(form.witt_index(), 2);
        let u = Subspace::coordinate(4, &[0]);
        assert_eq!(u.dim() + form.perp(&u).dim(), 4);
    }

    #[test]
    fn witt_indices() {
        let f = Field::new(3, 1).unwrap();
        // x1 x3 + x2^2
        let g = vec![vec![0, 0, 1], vec![0, 2, 0], vec![1, 0, 0]];
        assert_eq!(Form::new(f.clone(), g).unwrap().witt_index(), 1);
        // x1^2 + x2^2 is anisotropic over GF(3)
        let g = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(Form::new(f, g).unwrap().witt_index(), 0);
    }

    #[test]
    fn tilde_transversal_planes() {
        let f = Field::new(3, 1).unwrap();
        let form = Form::hyperbolic(f.clone(), 2, &[]).unwrap();
        let levels = form.isotropic_subspaces(10_000).unwrap();
        assert_eq!(levels[0].len(), 16);
        assert_eq!(levels[1].len(), 8);
        let w = &levels[1][0];
        let meeting: Vec<_> = levels[1]
            .iter()
            .filter(|x| x.intersect(&f, w).unwrap().dim() == 1)
            .collect();
        assert_eq!(meeting.len(), 4);
        for x in meeting {
            assert!(!is_transversal(&f, x, w).unwrap());
            assert!(is_tilde_transversal(&form, x, w).unwrap());
        }
        let pt = Subspace::span(&f, 4, &[w.basis()[0].clone()]).unwrap();
        assert!(!is_tilde_transversal(&form, &pt, w).unwrap());
    }
}
