use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::chains::Chain;
use crate::error::{HdxError, Result};
use crate::simplicial::Complex;

use super::ConeFunction;

/// A vertex `u` of the subdivision T sitting on the edge {w1, w2} of T̃, with
/// `wu` the endpoint it collapses to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdividedEdge {
    pub u: u32,
    pub w1: u32,
    pub w2: u32,
    pub wu: u32,
}

struct Pairing<'a> {
    by_u: HashMap<u32, &'a SubdividedEdge>,
}

impl<'a> Pairing<'a> {
    fn new(t: &Complex, tt: &Complex, edges: &'a [SubdividedEdge]) -> Result<Pairing<'a>> {
        let mut by_u = HashMap::new();
        for e in edges {
            if e.wu != e.w1 && e.wu != e.w2 {
                return Err(HdxError::Domain(format!("chosen endpoint {} is not on edge {{{}, {}}}", e.wu, e.w1, e.w2)));
            }
            if tt.contains(&[e.u]) || !t.contains(&[e.u]) {
                return Err(HdxError::Domain(format!("subdividing vertex {} must lie only in the subdivision", e.u)));
            }
            let mut edge = vec![e.w1, e.w2];
            edge.sort_unstable();
            if !tt.contains(&edge) || t.contains(&edge) {
                return Err(HdxError::Domain(format!("{edge:?} is not a subdivided edge")));
            }
            let (a, b) = (e.u.min(e.w1), e.u.max(e.w1));
            let (c, d) = (e.u.min(e.w2), e.u.max(e.w2));
            if !t.contains(&[a, b]) || !t.contains(&[c, d]) {
                return Err(HdxError::Domain(format!("vertex {} is not joined to both endpoints", e.u)));
            }
            if by_u.insert(e.u, e).is_some() {
                return Err(HdxError::Domain(format!("vertex {} listed twice", e.u)));
            }
        }
        for v in t.vertices() {
            if !tt.contains(&[*v]) && !by_u.contains_key(v) {
                return Err(HdxError::Domain(format!("vertex {v} of the subdivision is unpaired")));
            }
        }
        Ok(Pairing { by_u })
    }

    /// Simplices of T̃ to chains on T.
    fn forward(&self, edges: &[SubdividedEdge], t: &Complex, s: &[u32]) -> Result<Chain> {
        let inside: Vec<&SubdividedEdge> =
            edges.iter().filter(|e| s.binary_search(&e.w1).is_ok() && s.binary_search(&e.w2).is_ok()).collect();
        let mut out = Chain::zero(s.len() as i32 - 1);
        match inside.as_slice() {
            [] => {
                if !t.contains(s) {
                    return Err(HdxError::Domain(format!("{s:?} is missing from the subdivision")));
                }
                out.add_term(s.to_vec(), 1);
            }
            [e] => {
                for replaced in [e.w2, e.w1] {
                    let img: Vec<u32> = s.iter().map(|&v| if v == replaced { e.u } else { v }).collect();
                    out.add_oriented(&img, 1)?;
                }
            }
            _ => return Err(HdxError::Unsupported(format!("{s:?} contains several subdivided edges"))),
        }
        Ok(out)
    }

    /// Chains on T to chains on T̃.
    fn backward(&self, a: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(a.degree());
        for (s, &c) in a.iter() {
            let us: Vec<&&SubdividedEdge> = s.iter().filter_map(|v| self.by_u.get(v)).collect();
            match us.as_slice() {
                [] => out.add_term(s.clone(), c),
                [e] => {
                    if s.binary_search(&e.wu).is_err() {
                        let img: Vec<u32> = s.iter().map(|&v| if v == e.u { e.wu } else { v }).collect();
                        out.add_oriented(&img, c)?;
                    }
                }
                _ => return Err(HdxError::Domain(format!("{s:?} contains two subdividing vertices"))),
            }
        }
        Ok(out)
    }
}

/// Moves a cone on the edge subdivision T to T̃ as `g ∘ Cone_T ∘ f`.
pub fn subdivision_transport(cone: &ConeFunction, t: &Complex, tt: &Complex, edges: &[SubdividedEdge]) -> Result<ConeFunction> {
    let pairing = Pairing::new(t, tt, edges)?;
    let apex_img = pairing.backward(&Chain::basis(&[cone.apex()])?)?;
    let apex = *apex_img.iter().next().ok_or_else(|| HdxError::Domain("apex collapses to zero".into()))?.0.first().unwrap();
    let mut out = ConeFunction::new(apex, cone.degree());
    for j in 0..=cone.degree().min(tt.dim()) {
        for s in tt.faces(j) {
            let img = cone.eval(&pairing.forward(edges, t, s)?)?;
            out.set(s.clone(), pairing.backward(&img)?.with_degree(j + 1))?;
        }
    }
    Ok(out)
}
