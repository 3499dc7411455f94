//! Small named complexes used as fixtures and by the `build` command.

use crate::error::{HdxError, Result};
use crate::simplicial::Complex;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// The full simplex on `m` vertices.
pub fn simplex(m: usize) -> Result<Complex> {
    if m == 0 {
        return Err(HdxError::Domain("a simplex needs at least one vertex".into()));
    }
    Complex::from_maximal_faces(labels(m), vec![(0..m).collect()])
}

/// The boundary of the simplex on `m ≥ 2` vertices.
pub fn simplex_boundary(m: usize) -> Result<Complex> {
    if m < 2 {
        return Err(HdxError::Domain("a simplex boundary needs at least two vertices".into()));
    }
    let faces = (0..m).map(|skip| (0..m).filter(|&i| i != skip).collect()).collect();
    Complex::from_maximal_faces(labels(m), faces)
}

pub fn cycle(n: usize) -> Result<Complex> {
    if n < 3 {
        return Err(HdxError::Domain("a cycle needs at least three vertices".into()));
    }
    Complex::from_maximal_faces(labels(n), (0..n).map(|i| vec![i, (i + 1) % n]).collect())
}

/// The path on `n ≥ 2` vertices 0, 1, …, n−1 joined in order.
pub fn path(n: usize) -> Result<Complex> {
    if n < 2 {
        return Err(HdxError::Domain("a path needs at least two vertices".into()));
    }
    Complex::from_maximal_faces(labels(n), (0..n - 1).map(|i| vec![i, i + 1]).collect())
}

/// Octahedron with poles `n`, `s` over the square a-b-c-d.
pub fn octahedron() -> Complex {
    let mut faces = Vec::new();
    for pole in ["n", "s"] {
        for (a, b) in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] {
            faces.push(vec![pole, a, b]);
        }
    }
    Complex::from_labelled_faces(&faces).unwrap()
}

/// `m` isolated points.
pub fn points(m: usize) -> Result<Complex> {
    if m == 0 {
        return Err(HdxError::Domain("need at least one point".into()));
    }
    Complex::from_maximal_faces(labels(m), (0..m).map(|i| vec![i]).collect())
}
