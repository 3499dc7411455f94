//! Finite simplicial complexes with stable integer vertex ids.
//!
//! Vertex ids survive `link`, `skeleton` and `full_subcomplex`, so chains on a
//! subcomplex can be read directly as chains on the ambient complex.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_rational::Ratio;

use crate::error::{HdxError, Result};

pub type Simplex = Vec<u32>;
pub type Rational = Ratio<i64>;

#[derive(Clone, Debug)]
pub struct Complex {
    vertices: Vec<u32>,
    labels: Vec<String>,
    faces: Vec<Vec<Simplex>>,
    face_set: HashSet<Simplex>,
    facets: Vec<Simplex>,
    vertex_facets: HashMap<u32, Vec<usize>>,
    dim: i32,
    pure: bool,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.faces == other.faces
    }
}

impl Eq for Complex {}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn subsets(face: &[u32], out: &mut HashSet<Simplex>) {
    let n = face.len();
    for mask in 0u32..(1u32 << n) {
        let s: Simplex = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| face[i]).collect();
        out.insert(s);
    }
}

impl Complex {
    /// The complex {∅} with no vertices.
    pub fn empty() -> Complex {
        Complex::from_generators(Vec::new(), Vec::new(), Vec::new())
    }

    /// Builds a complex from vertex labels and maximal faces given as indices
    /// into `labels`. Vertex ids are the indices.
    pub fn from_maximal_faces(labels: Vec<String>, faces: Vec<Vec<usize>>) -> Result<Complex> {
        if faces.is_empty() {
            return Err(HdxError::Malformed("at least one maximal face is required".into()));
        }
        let mut gens = Vec::with_capacity(faces.len());
        for face in &faces {
            let mut s: Simplex = Vec::with_capacity(face.len());
            for &i in face {
                if i >= labels.len() {
                    return Err(HdxError::Malformed(format!("vertex index {i} out of range")));
                }
                s.push(i as u32);
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(HdxError::Malformed(format!("face {face:?} repeats a vertex")));
            }
            gens.push(s);
        }
        let set: HashSet<&Simplex> = gens.iter().collect();
        if set.len() != gens.len() {
            return Err(HdxError::Malformed("duplicate maximal face".into()));
        }
        for a in &gens {
            for b in &gens {
                if a.len() < b.len() && a.iter().all(|v| b.binary_search(v).is_ok()) {
                    return Err(HdxError::Malformed(format!("face {a:?} is contained in {b:?}")));
                }
            }
        }
        let ids: Vec<u32> = (0..labels.len() as u32).collect();
        let used: BTreeSet<u32> = gens.iter().flatten().copied().collect();
        if used.len() != labels.len() {
            return Err(HdxError::Malformed("some labelled vertex lies in no face".into()));
        }
        Ok(Complex::from_generators(ids, labels, gens))
    }

    /// Same as `from_maximal_faces` with label strings for each face.
    pub fn from_labelled_faces(faces: &[Vec<&str>]) -> Result<Complex> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut out = Vec::new();
        for face in faces {
            let mut f = Vec::new();
            for &l in face {
                let next = labels.len();
                let i = *index.entry(l.to_string()).or_insert_with(|| {
                    labels.push(l.to_string());
                    next
                });
                f.push(i);
            }
            out.push(f);
        }
        Complex::from_maximal_faces(labels, out)
    }

    /// Downward closure of arbitrary generating faces over the given vertices.
    /// `ids` and `labels` are parallel; ids need not be sorted.
    pub fn from_generators(ids: Vec<u32>, labels: Vec<String>, generators: Vec<Simplex>) -> Complex {
        let mut pairs: Vec<(u32, String)> = ids.into_iter().zip(labels).collect();
        pairs.sort_by_key(|p| p.0);
        pairs.dedup_by_key(|p| p.0);
        let mut face_set: HashSet<Simplex> = HashSet::new();
        face_set.insert(Vec::new());
        for g in &generators {
            let mut g = g.clone();
            g.sort_unstable();
            g.dedup();
            subsets(&g, &mut face_set);
        }
        for (v, _) in &pairs {
            face_set.insert(vec![*v]);
        }
        Complex::from_face_set(pairs, face_set)
    }

    fn from_face_set(pairs: Vec<(u32, String)>, face_set: HashSet<Simplex>) -> Complex {
        let dim = face_set.iter().map(|f| f.len() as i32 - 1).max().unwrap_or(-1);
        let mut faces: Vec<Vec<Simplex>> = vec![Vec::new(); (dim + 2) as usize];
        for f in &face_set {
            faces[f.len()].push(f.clone());
        }
        for layer in faces.iter_mut() {
            layer.sort_unstable();
        }
        let mut non_max: HashSet<&Simplex> = HashSet::new();
        let mut tmp = Vec::new();
        for layer in faces.iter().skip(1) {
            for f in layer {
                for i in 0..f.len() {
                    tmp.clear();
                    tmp.extend(f.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v));
                    if let Some(x) = face_set.get(&tmp) {
                        non_max.insert(x);
                    }
                }
            }
        }
        let mut facets: Vec<Simplex> = Vec::new();
        for layer in faces.iter() {
            for f in layer {
                if !non_max.contains(f) {
                    facets.push(f.clone());
                }
            }
        }
        facets.sort_unstable();
        let mut vertex_facets: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                vertex_facets.entry(v).or_default().push(i);
            }
        }
        let pure = facets.iter().all(|f| f.len() as i32 - 1 == dim);
        let (vertices, labels): (Vec<u32>, Vec<String>) = pairs.into_iter().unzip();
        Complex { vertices, labels, faces, face_set, facets, vertex_facets, dim, pure }
    }

    pub fn dim(&self) -> i32 {
        self.dim
    }
    pub fn is_pure(&self) -> bool {
        self.pure
    }
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, v: u32) -> Option<&str> {
        self.vertex_index(v).map(|i| self.labels[i].as_str())
    }
    pub fn vertex_by_label(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| self.vertices[i])
    }
    pub fn vertex_index(&self, v: u32) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }
    /// Faces of dimension `k` (k = −1 gives {∅}); empty if out of range.
    pub fn faces(&self, k: i32) -> &[Simplex] {
        if k < -1 || k > self.dim {
            &[]
        } else {
            &self.faces[(k + 1) as usize]
        }
    }
    pub fn num_faces(&self, k: i32) -> usize {
        self.faces(k).len()
    }
    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(|l| l.len()).collect()
    }
    pub fn contains(&self, s: &[u32]) -> bool {
        self.face_set.contains(s)
    }
    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    /// Facets that contain `tau`.
    pub fn facets_containing<'a>(&'a self, tau: &'a [u32]) -> Box<dyn Iterator<Item = &'a Simplex> + 'a> {
        match tau.first() {
            None => Box::new(self.facets.iter()),
            Some(v) => {
                let idx = self.vertex_facets.get(v).map(|x| x.as_slice()).unwrap_or(&[]);
                Box::new(
                    idx.iter()
                        .map(move |&i| &self.facets[i])
                        .filter(move |f| tau.iter().all(|t| f.binary_search(t).is_ok())),
                )
            }
        }
    }

    fn sub_labels(&self, keep: &BTreeSet<u32>) -> (Vec<u32>, Vec<String>) {
        keep.iter()
            .filter_map(|v| self.vertex_index(*v).map(|i| (*v, self.labels[i].clone())))
            .unzip()
    }

    pub fn link(&self, tau: &[u32]) -> Result<Complex> {
        let mut t = tau.to_vec();
        t.sort_unstable();
        if !self.contains(&t) {
            return Err(HdxError::Domain(format!("{t:?} is not a face")));
        }
        if t.is_empty() {
            return Ok(self.clone());
        }
        let gens: Vec<Simplex> = self
            .facets_containing(&t)
            .map(|f| f.iter().copied().filter(|v| t.binary_search(v).is_err()).collect())
            .collect();
        let keep: BTreeSet<u32> = gens.iter().flatten().copied().collect();
        let (ids, labels) = self.sub_labels(&keep);
        Ok(Complex::from_generators(ids, labels, gens))
    }

    pub fn skeleton(&self, k: i32) -> Result<Complex> {
        if k < -1 || k > self.dim {
            return Err(HdxError::Domain(format!("skeleton degree {k} outside -1..={}", self.dim)));
        }
        let face_set: HashSet<Simplex> = self.faces.iter().take((k + 2) as usize).flatten().cloned().collect();
        let keep: BTreeSet<u32> = if k >= 0 { self.vertices.iter().copied().collect() } else { BTreeSet::new() };
        let (ids, labels) = self.sub_labels(&keep);
        Ok(Complex::from_face_set(ids.into_iter().zip(labels).collect(), face_set))
    }

    pub fn full_subcomplex(&self, s: &[u32]) -> Result<Complex> {
        let keep: BTreeSet<u32> = s.iter().copied().collect();
        for v in &keep {
            if self.vertex_index(*v).is_none() {
                return Err(HdxError::Domain(format!("vertex {v} is not in the complex")));
            }
        }
        let gens: Vec<Simplex> = self
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|v| keep.contains(v)).collect::<Simplex>())
            .filter(|f| !f.is_empty())
            .collect();
        let (ids, labels) = self.sub_labels(&keep);
        Ok(Complex::from_generators(ids, labels, gens))
    }

    /// Join with vertex ids of `other` shifted past `self` when the id sets
    /// overlap; labels are tagged `0:`/`1:` when the label sets overlap.
    pub fn join(&self, other: &Complex) -> Complex {
        let overlap_ids = other.vertices.iter().any(|v| self.vertex_index(*v).is_some());
        let offset = if overlap_ids { self.vertices.last().map_or(0, |m| m + 1) } else { 0 };
        let remap = |v: u32| -> u32 {
            if overlap_ids {
                offset + other.vertex_index(v).unwrap() as u32
            } else {
                v
            }
        };
        let label_set: HashSet<&String> = self.labels.iter().collect();
        let overlap_labels = other.labels.iter().any(|l| label_set.contains(l));
        let mut ids = self.vertices.clone();
        let mut labels: Vec<String> = if overlap_labels {
            self.labels.iter().map(|l| format!("0:{l}")).collect()
        } else {
            self.labels.clone()
        };
        for (v, l) in other.vertices.iter().zip(&other.labels) {
            ids.push(remap(*v));
            labels.push(if overlap_labels { format!("1:{l}") } else { l.clone() });
        }
        let mut gens = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                let mut s = a.clone();
                s.extend(b.iter().map(|&v| remap(v)));
                gens.push(s);
            }
        }
        Complex::from_generators(ids, labels, gens)
    }

    /// Cone {v} * self with a fresh vertex id.
    pub fn cone_over(&self, label: &str) -> (Complex, u32) {
        let apex = self.vertices.last().map_or(0, |m| m + 1);
        let point = Complex::from_generators(vec![apex], vec![label.to_string()], vec![vec![apex]]);
        (point.join(self), apex)
    }

    /// Number of top-dimensional faces containing each `k`-face, aligned with `faces(k)`.
    pub fn facet_counts(&self, k: i32) -> Vec<u64> {
        let layer = self.faces(k);
        if k == -1 {
            return vec![self.num_faces(self.dim) as u64];
        }
        let index: HashMap<&Simplex, usize> = layer.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut counts = vec![0u64; layer.len()];
        let mut buf = Vec::new();
        for top in self.faces(self.dim) {
            let n = top.len();
            for mask in 0u32..(1u32 << n) {
                if mask.count_ones() as i32 != k + 1 {
                    continue;
                }
                buf.clear();
                buf.extend((0..n).filter(|i| mask & (1 << i) != 0).map(|i| top[i]));
                if let Some(&i) = index.get(&buf) {
                    counts[i] += 1;
                }
            }
        }
        counts
    }

    /// Common denominator C(n+1, k+1) * |X(n)| of all weights in degree `k`.
    pub fn weight_denominator(&self, k: i32) -> u64 {
        binomial((self.dim + 1) as u64, (k + 1) as u64) * self.num_faces(self.dim) as u64
    }

    pub fn weight(&self, tau: &[u32]) -> Result<Rational> {
        if !self.pure {
            return Err(HdxError::Unsupported("weights need a pure complex".into()));
        }
        let mut t = tau.to_vec();
        t.sort_unstable();
        if !self.contains(&t) {
            return Err(HdxError::Domain(format!("{t:?} is not a face")));
        }
        let k = t.len() as i32 - 1;
        let count = self.facets_containing(&t).count() as i64;
        Ok(Rational::new(count, self.weight_denominator(k) as i64))
    }

    /// All weights in degree `k`, aligned with `faces(k)`.
    pub fn weights(&self, k: i32) -> Result<Vec<Rational>> {
        if !self.pure {
            return Err(HdxError::Unsupported("weights need a pure complex".into()));
        }
        let den = self.weight_denominator(k) as i64;
        Ok(self.facet_counts(k).into_iter().map(|c| Rational::new(c as i64, den)).collect())
    }

    /// Neighbour lists on the 1-skeleton, indexed by vertex position.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in self.faces(1) {
            let a = self.vertex_index(e[0]).unwrap();
            let b = self.vertex_index(e[1]).unwrap();
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> Result<bool> {
        if self.vertices.is_empty() {
            return Err(HdxError::Domain("connectivity of a complex without vertices".into()));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(count == adj.len())
    }

    /// Relabels vertex ids to `0..n` in sorted order, keeping labels.
    pub fn normalized(&self) -> Complex {
        let ids: Vec<u32> = (0..self.vertices.len() as u32).collect();
        let gens = self
            .facets
            .iter()
            .map(|f| f.iter().map(|v| self.vertex_index(*v).unwrap() as u32).collect())
            .collect();
        Complex::from_generators(ids, self.labels.clone(), gens)
    }
}

/// Flag (clique) complex of a graph on `ids`, with `adjacent(a, b)` on ids.
pub fn flag_complex<F>(ids: Vec<u32>, labels: Vec<String>, adjacent: F) -> Complex
where
    F: Fn(u32, u32) -> bool,
{
    let n = ids.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| ids[i]);
    let sorted: Vec<u32> = order.iter().map(|&i| ids[i]).collect();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(sorted[i], sorted[j]) {
                nbrs[i].push(j);
            }
        }
    }
    let mut gens: Vec<Simplex> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn extend(cur: &mut Vec<usize>, cands: &[usize], nbrs: &[Vec<usize>], sorted: &[u32], out: &mut Vec<Simplex>) {
        let mut extended = false;
        for (pos, &c) in cands.iter().enumerate() {
            extended = true;
            cur.push(c);
            let next: Vec<usize> = cands[pos + 1..].iter().copied().filter(|x| nbrs[c].binary_search(x).is_ok()).collect();
            extend(cur, &next, nbrs, sorted, out);
            cur.pop();
        }
        if !extended && !cur.is_empty() {
            out.push(cur.iter().map(|&i| sorted[i]).collect());
        }
    }
    let all: Vec<usize> = (0..n).collect();
    extend(&mut cur, &all, &nbrs, &sorted, &mut gens);
    Complex::from_generators(ids, labels, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Complex {
        Complex::from_labelled_faces(&[vec!["1", "2", "3"]]).unwrap()
    }

    pub(crate) fn octahedron() -> Complex {
        let mut faces = Vec::new();
        for pole in ["n", "s"] {
            for (a, b) in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] {
                faces.push(vec![pole, a, b]);
            }
        }
        Complex::from_labelled_faces(&faces).unwrap()
    }

    #[test]
    fn triangle_counts() {
        let t = triangle();
        assert_eq!(t.face_counts(), vec![1, 3, 3, 1]);
        assert!(t.is_pure());
    }

    #[test]
    fn path_counts() {
        let p = Complex::from_labelled_faces(&[vec!["1", "2"], vec!["2", "3"]]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.face_counts(), vec![1, 3, 2]);
    }

    #[test]
    fn octahedron_counts_and_links() {
        let o = octahedron();
        assert_eq!(o.face_counts(), vec![1, 6, 12, 8]);
        let n = o.vertex_by_label("n").unwrap();
        let lk = o.link(&[n]).unwrap();
        assert_eq!(lk.face_counts(), vec![1, 4, 4]);
        let st = o
            .full_subcomplex(&["n", "a", "b", "c", "d"].map(|l| o.vertex_by_label(l).unwrap()))
            .unwrap();
        assert_eq!(st.num_faces(2), 4);
        assert_eq!(o.weight(&o.faces(1)[0]).unwrap(), Rational::new(1, 12));
        assert_eq!(o.weight(&[]).unwrap(), Rational::from_integer(1));
        assert_eq!(o.skeleton(1).unwrap().num_faces(1), 12);
    }

    #[test]
    fn malformed_inputs() {
        assert!(Complex::from_labelled_faces(&[vec!["1", "1"]]).is_err());
        assert!(Complex::from_labelled_faces(&[vec!["1", "2"], vec!["1"]]).is_err());
        assert!(triangle().link(&[7]).is_err());
        assert!(triangle().skeleton(3).is_err());
    }

    #[test]
    fn joins() {
        let p = Complex::from_labelled_faces(&[vec!["x"]]).unwrap();
        assert_eq!(p.join(&p).face_counts(), vec![1, 2, 1]);
        let two = Complex::from_labelled_faces(&[vec!["x"], vec!["y"]]).unwrap();
        let c4 = two.join(&two);
        assert_eq!(c4.face_counts(), vec![1, 4, 4]);
        let e = Complex::from_labelled_faces(&[vec!["x", "y"]]).unwrap();
        assert_eq!(e.join(&e).face_counts(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn connectivity() {
        assert!(triangle().is_connected().unwrap());
        let two = Complex::from_labelled_faces(&[vec!["1", "2"], vec!["3", "4"]]).unwrap();
        assert!(!two.is_connected().unwrap());
        assert!(Complex::empty().is_connected().is_err());
    }

    #[test]
    fn flag_complex_of_square_with_diagonal() {
        let ids = vec![0, 1, 2, 3];
        let labels = ids.iter().map(|i| i.to_string()).collect();
        let edges = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)];
        let c = flag_complex(ids, labels, |a, b| edges.contains(&(a.min(b), a.max(b))));
        assert_eq!(c.face_counts(), vec![1, 4, 5, 2]);
    }
}
