//! Matrix groups over finite fields and their coset complexes.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::buildings::complexes_isomorphic;
use crate::caps::Caps;
use crate::error::{HdxError, Result};
use crate::fqlinalg::{poly, Elem, Field};
use crate::simplicial::{Complex, Simplex};

/// A square matrix over GF(q), row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    n: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn identity(n: usize) -> Mat {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Mat { n, data }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Mat> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(HdxError::Malformed("matrix must be square".into()));
        }
        Ok(Mat { n, data: rows.concat() })
    }

    /// `I + a·E_{ij}` with 0-based indices.
    pub fn elementary(n: usize, i: usize, j: usize, a: Elem) -> Mat {
        let mut m = Mat::identity(n);
        m.data[i * n + j] = a;
        m
    }

    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.n + j]
    }
    /// Canonical byte encoding, little-endian per entry.
    pub fn key(&self) -> Vec<u8> {
        self.data.iter().flat_map(|x| x.to_le_bytes()).collect()
    }

    pub fn mul(&self, f: &Field, o: &Mat) -> Mat {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = o.data[k * n + j];
                    if b != 0 {
                        data[i * n + j] = f.add(data[i * n + j], f.mul(a, b));
                    }
                }
            }
        }
        Mat { n, data }
    }

    pub fn inverse(&self, f: &Field) -> Option<Mat> {
        let n = self.n;
        let mut a: Vec<Vec<Elem>> = (0..n).map(|i| self.data[i * n..(i + 1) * n].to_vec()).collect();
        let mut b: Vec<Vec<Elem>> = (0..n).map(|i| Mat::identity(n).data[i * n..(i + 1) * n].to_vec()).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| a[r][c] != 0)?;
            a.swap(c, p);
            b.swap(c, p);
            let inv = f.inv(a[c][c])?;
            for j in 0..n {
                a[c][j] = f.mul(a[c][j], inv);
                b[c][j] = f.mul(b[c][j], inv);
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let factor = a[r][c];
                    for j in 0..n {
                        a[r][j] = f.sub(a[r][j], f.mul(factor, a[c][j]));
                        b[r][j] = f.sub(b[r][j], f.mul(factor, b[c][j]));
                    }
                }
            }
        }
        Some(Mat { n, data: b.concat() })
    }
}

/// A finite group of matrices with all elements listed in sorted order.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: Arc<Field>,
    degree: usize,
    gens: Vec<Mat>,
    elements: Vec<Mat>,
    index: HashMap<Mat, usize>,
}

impl MatrixGroup {
    fn from_set(field: Arc<Field>, degree: usize, gens: Vec<Mat>, set: HashSet<Mat>) -> MatrixGroup {
        let mut elements: Vec<Mat> = set.into_iter().collect();
        elements.sort();
        let index = elements.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MatrixGroup { field, degree, gens, elements, index }
    }

    /// Wraps a set already known to be a group (e.g. an intersection of subgroups).
    pub fn from_elements(field: Arc<Field>, degree: usize, elements: Vec<Mat>) -> Result<MatrixGroup> {
        let set: HashSet<Mat> = elements.into_iter().collect();
        if !set.contains(&Mat::identity(degree)) {
            return Err(HdxError::Domain("element set lacks the identity".into()));
        }
        let gens = set.iter().cloned().collect();
        let g = MatrixGroup::from_set(field, degree, gens, set);
        if !g.is_closed() {
            return Err(HdxError::Domain("element set is not closed under products".into()));
        }
        Ok(g)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn generators(&self) -> &[Mat] {
        &self.gens
    }
    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).copied()
    }
    pub fn contains(&self, m: &Mat) -> bool {
        self.index.contains_key(m)
    }

    /// Exhaustive check that products and inverses stay inside.
    pub fn is_closed(&self) -> bool {
        let f = &*self.field;
        self.elements.iter().all(|a| {
            a.inverse(f).is_some_and(|i| self.contains(&i))
                && self.elements.iter().all(|b| self.contains(&a.mul(f, b)))
        })
    }
}

/// Closure of the generators under multiplication, by breadth-first search.
pub fn enumerate_group(field: Arc<Field>, degree: usize, gens: Vec<Mat>, cap: usize) -> Result<MatrixGroup> {
    let f = &*field;
    let mut steps = Vec::new();
    for g in &gens {
        if g.n != degree {
            return Err(HdxError::Malformed(format!("generator of size {} in degree {degree}", g.n)));
        }
        let inv = g.inverse(f).ok_or_else(|| HdxError::Domain("generator is singular".into()))?;
        steps.push(g.clone());
        steps.push(inv);
    }
    let id = Mat::identity(degree);
    let mut seen: HashSet<Mat> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in &steps {
            let y = x.mul(f, s);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(HdxError::Resource(format!(
                        "group order exceeds cap {cap} ({} elements found so far)",
                        seen.len()
                    )));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(MatrixGroup::from_set(field, degree, gens, seen))
}

/// The coset complex CC(G; H_0, ..., H_n) with vertex types.
#[derive(Clone, Debug)]
pub struct CosetComplex {
    pub group: MatrixGroup,
    pub subgroups: Vec<MatrixGroup>,
    pub complex: Complex,
    /// Vertex id to subgroup index.
    pub types: HashMap<u32, u32>,
    /// `coset_of[i][g]`: the vertex g·H_i for the element with index g.
    coset_of: Vec<Vec<u32>>,
    members: Vec<Vec<usize>>,
}

pub fn coset_complex(group: MatrixGroup, subgroups: Vec<MatrixGroup>) -> Result<CosetComplex> {
    let f = group.field.clone();
    let order = group.order();
    let mut coset_of = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut types = HashMap::new();
    let mut labels = Vec::new();
    for (t, h) in subgroups.iter().enumerate() {
        for x in h.elements() {
            if !group.contains(x) {
                return Err(HdxError::Domain(format!("subgroup {t} is not contained in the group")));
            }
        }
        let mut assign = vec![u32::MAX; order];
        let mut k = 0;
        for g in 0..order {
            if assign[g] != u32::MAX {
                continue;
            }
            let id = members.len() as u32;
            let mut coset: Vec<usize> =
                h.elements().iter().map(|x| group.index_of(&group.elements[g].mul(&f, x)).unwrap()).collect();
            coset.sort_unstable();
            for &c in &coset {
                assign[c] = id;
            }
            members.push(coset);
            types.insert(id, t as u32);
            labels.push(format!("{t}:{k}"));
            k += 1;
        }
        if k * h.order() != order {
            return Err(HdxError::Domain(format!("coset count {k} times |H_{t}| differs from |G|")));
        }
        coset_of.push(assign);
    }
    let mut gens: BTreeSet<Simplex> = BTreeSet::new();
    for g in 0..order {
        let mut s: Simplex = coset_of.iter().map(|a| a[g]).collect();
        s.sort_unstable();
        gens.insert(s);
    }
    let ids: Vec<u32> = (0..members.len() as u32).collect();
    let complex = Complex::from_generators(ids, labels, gens.into_iter().collect());
    Ok(CosetComplex { group, subgroups, complex, types, coset_of, members })
}

impl CosetComplex {
    pub fn members(&self, v: u32) -> &[usize] {
        &self.members[v as usize]
    }

    /// Every face meets each type at most once.
    pub fn is_partite(&self) -> bool {
        self.complex.facets().iter().all(|f| {
            let ts: HashSet<u32> = f.iter().map(|v| self.types[v]).collect();
            ts.len() == f.len()
        })
    }

    /// Checks that the link of `sigma` is the coset complex of H_T with the
    /// subgroups H_T ∩ H_i, i outside the type set T of `sigma`.
    pub fn link_identification(&self, sigma: &[u32], caps: &Caps) -> Result<bool> {
        if sigma.is_empty() {
            return Err(HdxError::Domain("the link of the empty face is the whole complex".into()));
        }
        if !self.complex.contains(sigma) {
            return Err(HdxError::Domain(format!("{sigma:?} is not a face")));
        }
        let link = self.complex.link(sigma)?;
        let tset: BTreeSet<u32> = sigma.iter().map(|v| self.types[v]).collect();
        let rest: Vec<u32> = (0..self.subgroups.len() as u32).filter(|t| !tset.contains(t)).collect();
        if rest.is_empty() {
            return Ok(link.num_vertices() == 0);
        }
        let f = self.group.field.clone();
        let mut h_t: HashSet<Mat> = self.subgroups[*tset.iter().next().unwrap() as usize].elements().iter().cloned().collect();
        for &t in &tset {
            let h: HashSet<&Mat> = self.subgroups[t as usize].elements().iter().collect();
            h_t.retain(|m| h.contains(m));
        }
        let h_t = MatrixGroup::from_elements(f.clone(), self.group.degree, h_t.into_iter().collect())?;
        let mut subs = Vec::new();
        for &i in &rest {
            let h: HashSet<&Mat> = self.subgroups[i as usize].elements().iter().collect();
            let inter: Vec<Mat> = h_t.elements().iter().filter(|m| h.contains(m)).cloned().collect();
            subs.push(MatrixGroup::from_elements(f.clone(), self.group.degree, inter)?);
        }
        let small = coset_complex(h_t, subs)?;
        let small_types: HashMap<u32, u32> = small.types.iter().map(|(&v, &k)| (v, rest[k as usize])).collect();
        let link_types: HashMap<u32, u32> = link.vertices().iter().map(|v| (*v, self.types[v])).collect();
        let iso = complexes_isomorphic(&link, &small.complex, Some((&link_types, &small_types)), caps.isomorphism_nodes)?;
        Ok(iso.is_some())
    }

    /// Whether left translation by G acts simplicially and transitively on the facets.
    pub fn facet_transitivity(&self) -> Result<bool> {
        let f = &*self.group.field;
        let gens: Vec<&Mat> = self.group.gens.iter().collect();
        if gens.is_empty() {
            return Ok(self.complex.facets().len() <= 1);
        }
        let mut maps: Vec<Vec<u32>> = Vec::new();
        for s in &gens {
            let mut img = vec![0u32; self.members.len()];
            for (v, mem) in self.members.iter().enumerate() {
                let t = self.types[&(v as u32)] as usize;
                let targets: HashSet<u32> = mem
                    .iter()
                    .map(|&g| self.coset_of[t][self.group.index_of(&s.mul(f, &self.group.elements[g])).unwrap()])
                    .collect();
                if targets.len() != 1 {
                    return Ok(false);
                }
                img[v] = *targets.iter().next().unwrap();
            }
            maps.push(img);
        }
        let facets: HashSet<&Simplex> = self.complex.facets().iter().collect();
        let apply = |m: &[u32], s: &Simplex| -> Simplex {
            let mut t: Simplex = s.iter().map(|&v| m[v as usize]).collect();
            t.sort_unstable();
            t
        };
        for m in &maps {
            if !self.complex.facets().iter().all(|s| facets.contains(&apply(m, s))) {
                return Ok(false);
            }
        }
        let start = self.complex.facets()[0].clone();
        let mut seen: HashSet<Simplex> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for m in &maps {
                let t = apply(m, &s);
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        Ok(seen.len() == facets.len())
    }
}

/// Square matrix over GF(p)[t], entries as coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PolyMat {
    n: usize,
    data: Vec<Vec<u32>>,
}

impl PolyMat {
    fn elementary(n: usize, i: usize, j: usize, a: Vec<u32>) -> PolyMat {
        let mut data = vec![Vec::new(); n * n];
        for k in 0..n {
            data[k * n + k] = vec![1];
        }
        data[i * n + j] = a;
        PolyMat { n, data }
    }

    fn mul(&self, o: &PolyMat, p: u32) -> PolyMat {
        let n = self.n;
        let mut data = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: Vec<u32> = Vec::new();
                for k in 0..n {
                    let prod = poly::mul(&self.data[i * n + k], &o.data[k * n + j], p);
                    if acc.len() < prod.len() {
                        acc.resize(prod.len(), 0);
                    }
                    for (x, y) in acc.iter_mut().zip(&prod) {
                        *x = (*x + y) % p;
                    }
                }
                data[i * n + j] = poly::trim(acc);
            }
        }
        PolyMat { n, data }
    }

    /// Reduction modulo f, read in GF(p)[t]/(f) with `t` the field generator.
    fn reduce(&self, field: &Field) -> Mat {
        let p = field.p();
        let data = self
            .data
            .iter()
            .map(|c| {
                let r = poly::rem(c, field.modulus(), p);
                r.iter().rev().fold(0u32, |e, &x| e * p + x)
            })
            .collect();
        Mat { n: self.n, data }
    }
}

fn poly_closure(gens: &[(PolyMat, PolyMat)], n: usize, p: u32, cap: usize) -> Result<HashSet<PolyMat>> {
    let id = PolyMat::elementary(n, 0, 0, vec![1]);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for (g, gi) in gens {
            for s in [g, gi] {
                let y = x.mul(s, p);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(HdxError::Resource(format!("local group exceeds cap {cap}")));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(seen)
}

#[derive(Clone, Debug, Serialize)]
pub struct KmsChecks {
    pub group_order: usize,
    pub subgroup_orders: Vec<usize>,
    /// φ_f is injective on each local group H_i.
    pub injective: Vec<bool>,
    /// φ(H_i ∩ H_j) = φ(H_i) ∩ φ(H_j) for each pair i < j.
    pub intersections: Vec<(usize, usize, bool)>,
}

#[derive(Clone, Debug)]
pub struct KmsExample {
    pub coset: CosetComplex,
    pub checks: KmsChecks,
}

/// The SL_{n+1} construction over GF(q)[t]/(f): generators e_{i,i+1}(1) and
/// e_{n+1,1}(t), with H_i generated by all but the i-th (H_0 omits e_{n+1,1}(t)).
pub fn kms_sl_example(n: usize, q: u32, f: &[u32], caps: &Caps) -> Result<KmsExample> {
    if n < 1 {
        return Err(HdxError::Domain("rank must be at least 1".into()));
    }
    let base = Field::from_order(q)?;
    if base.s() != 1 {
        return Err(HdxError::Unsupported(format!("base field of order {q} is not prime")));
    }
    let fpoly = poly::trim(f.iter().map(|&c| c % q).collect());
    if poly::degree(&fpoly).unwrap_or(0) < 2 {
        return Err(HdxError::Domain("polynomial degree must exceed 1".into()));
    }
    let field = Field::with_modulus(q, &fpoly)?;
    if field.order() > caps.field_size {
        return Err(HdxError::Resource(format!("field of order {} exceeds cap", field.order())));
    }
    let d = n + 1;
    let neg1 = vec![q - 1];
    let mut abstract_gens: Vec<(PolyMat, PolyMat)> = vec![(
        PolyMat::elementary(d, n, 0, vec![0, 1]),
        PolyMat::elementary(d, n, 0, vec![0, q - 1]),
    )];
    for i in 0..n {
        abstract_gens.push((PolyMat::elementary(d, i, i + 1, vec![1]), PolyMat::elementary(d, i, i + 1, neg1.clone())));
    }
    let images: Vec<Mat> = abstract_gens.iter().map(|(g, _)| g.reduce(&field)).collect();
    let group = enumerate_group(field.clone(), d, images.clone(), caps.group_order)?;
    let mut subgroups = Vec::new();
    let mut locals = Vec::new();
    let mut injective = Vec::new();
    for i in 0..=n {
        let gens: Vec<Mat> = images.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m.clone()).collect();
        let h = enumerate_group(field.clone(), d, gens, caps.group_order)?;
        let ag: Vec<(PolyMat, PolyMat)> =
            abstract_gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let local = poly_closure(&ag, d, q, caps.group_order)?;
        let img: HashSet<Mat> = local.iter().map(|m| m.reduce(&field)).collect();
        injective.push(img.len() == local.len() && img.len() == h.order());
        locals.push(local);
        subgroups.push(h);
    }
    let mut intersections = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            let abs: HashSet<Mat> = locals[i].intersection(&locals[j]).map(|m| m.reduce(&field)).collect();
            let hj: HashSet<&Mat> = subgroups[j].elements().iter().collect();
            let img: HashSet<Mat> = subgroups[i].elements().iter().filter(|m| hj.contains(m)).cloned().collect();
            intersections.push((i, j, abs == img));
        }
    }
    let checks = KmsChecks {
        group_order: group.order(),
        subgroup_orders: subgroups.iter().map(|h| h.order()).collect(),
        injective,
        intersections,
    };
    let coset = coset_complex(group, subgroups)?;
    Ok(KmsExample { coset, checks })
}

/// CC(U⁺; U_{I∖{i}}) for the upper unitriangular group of SL_{n+1}(q), with
/// U_{I∖{i}} generated by the simple root groups other than the i-th.
pub fn unipotent_opposition(n: usize, q: u32, caps: &Caps) -> Result<CosetComplex> {
    if n < 1 {
        return Err(HdxError::Domain("rank must be at least 1".into()));
    }
    let field = Field::from_order(q)?;
    let d = n + 1;
    let root = |i: usize| -> Vec<Mat> { (1..q).map(|a| Mat::elementary(d, i, i + 1, a)).collect() };
    let all: Vec<Mat> = (0..n).flat_map(root).collect();
    let u = enumerate_group(field.clone(), d, all, caps.group_order)?;
    let mut subs = Vec::new();
    for i in 0..n {
        let gens: Vec<Mat> = (0..n).filter(|&j| j != i).flat_map(root).collect();
        subs.push(enumerate_group(field.clone(), d, gens, caps.group_order)?);
    }
    coset_complex(u, subs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let f2 = Field::new(2, 1).unwrap();
        let g = enumerate_group(f2.clone(), 3, vec![Mat::elementary(3, 0, 1, 1), Mat::elementary(3, 1, 2, 1)], 100).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_closed());
        let f3 = Field::new(3, 1).unwrap();
        let sl = enumerate_group(f3, 2, vec![Mat::elementary(2, 0, 1, 1), Mat::elementary(2, 1, 0, 1)], 100).unwrap();
        assert_eq!(sl.order(), 24);
        assert_eq!(enumerate_group(f2, 3, vec![], 10).unwrap().order(), 1);
    }

    #[test]
    fn unipotent_a2() {
        let c = unipotent_opposition(2, 3, &Caps::default()).unwrap();
        assert_eq!(c.complex.face_counts(), vec![1, 18, 27]);
        assert!(c.is_partite());
        assert!(c.facet_transitivity().unwrap());
        let v = c.complex.vertices()[0];
        assert!(c.link_identification(&[v], &Caps::default()).unwrap());
    }
}
