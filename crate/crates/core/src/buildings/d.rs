use std::collections::{BTreeSet, HashMap};

use crate::caps::Caps;
use crate::cones::SubdividedEdge;
use crate::error::{HdxError, Result};
use crate::fqlinalg::{is_tilde_transversal, Form, Subspace};
use crate::simplicial::Complex;

use super::c::check_perp_closed;
use super::{check_field, Geometry};

/// The weak building T = Flag X, the oriflamme complex T̃ on X̃ (same vertex
/// ids), and the subdivision pairing between them.
#[derive(Clone, Debug)]
pub struct DnGeometry {
    pub n: usize,
    pub geometry: Geometry,
    pub tilde: Complex,
    pub pairing: Vec<SubdividedEdge>,
    /// The maximal spaces split by the parity of their codimension of intersection.
    pub families: [Vec<u32>; 2],
}

impl DnGeometry {
    pub fn t(&self) -> &Complex {
        self.geometry.complex()
    }
}

fn check_dn(form: &Form) -> Result<usize> {
    let m = form.dim();
    if m % 2 != 0 || m < 4 {
        return Err(HdxError::Domain(format!("ambient dimension {m} must be even and at least 4")));
    }
    if !form.is_nondegenerate() {
        return Err(HdxError::Domain("form is degenerate".into()));
    }
    let n = m / 2;
    let w = form.witt_index();
    if w != n {
        return Err(HdxError::Domain(format!("Witt index {w} differs from {n}")));
    }
    Ok(n)
}

pub fn dn_oriflamme(form: &Form, caps: &Caps) -> Result<DnGeometry> {
    dn_with(form, &[], caps)
}

/// T_E, T̃_E and the restricted pairing, using ~transversality to E.
pub fn opposition_dn(form: &Form, e: &[Subspace], caps: &Caps) -> Result<DnGeometry> {
    check_perp_closed(form, e)?;
    dn_with(form, e, caps)
}

fn dn_with(form: &Form, e: &[Subspace], caps: &Caps) -> Result<DnGeometry> {
    check_field(form.field(), caps)?;
    let n = check_dn(form)?;
    let f = &**form.field();
    let all: Vec<Subspace> = form.isotropic_subspaces(caps.subspaces)?.into_iter().flatten().collect();
    let mut keep = Vec::new();
    for u in &all {
        let mut ok = true;
        for s in e {
            ok &= is_tilde_transversal(form, u, s)?;
        }
        if ok {
            keep.push(u.clone());
        }
    }
    let geometry = Geometry::from_spaces(form.field().clone(), form.dim(), Some(form.clone()), keep);
    let ids: Vec<u32> = geometry.complex().vertices().to_vec();
    let tilde_ids: Vec<u32> = ids.iter().copied().filter(|&i| geometry.space(i).dim() != n - 1).collect();
    let incident = |a: u32, b: u32| {
        let (x, y) = (geometry.space(a), geometry.space(b));
        if x.dim() == n && y.dim() == n {
            return x.intersect(f, y).map(|c| c.dim() == n - 1).unwrap_or(false);
        }
        x.dim() != y.dim() && (x.is_subspace_of(f, y) || y.is_subspace_of(f, x))
    };
    let tilde = geometry.flag_by(&tilde_ids, incident);
    let maximal: Vec<&Subspace> = all.iter().filter(|s| s.dim() == n).collect();
    let mut pairing = Vec::new();
    for &u in &ids {
        let s = geometry.space(u);
        if s.dim() != n - 1 {
            continue;
        }
        let over: Vec<&Subspace> = maximal.iter().copied().filter(|w| s.is_subspace_of(f, w)).collect();
        if over.len() != 2 {
            return Err(HdxError::Domain(format!("{s:?} lies in {} maximal spaces, not 2", over.len())));
        }
        let w: Vec<u32> = over
            .iter()
            .map(|w| {
                geometry
                    .id_of(w)
                    .ok_or_else(|| HdxError::Domain(format!("maximal space over {s:?} is missing from X_E")))
            })
            .collect::<Result<_>>()?;
        let (w1, w2) = (w[0].min(w[1]), w[0].max(w[1]));
        pairing.push(SubdividedEdge { u, w1, w2, wu: w1 });
    }
    let tops: Vec<u32> = ids.iter().copied().filter(|&i| geometry.space(i).dim() == n).collect();
    let mut families = [Vec::new(), Vec::new()];
    if let Some(&w0) = tops.first() {
        for &w in &tops {
            let c = geometry.space(w).intersect(f, geometry.space(w0))?.dim();
            families[(n - c) % 2].push(w);
        }
    }
    Ok(DnGeometry { n, geometry, tilde, pairing, families })
}

/// Whether `t` is the subdivision of `tt` along the pairing: the subdivided
/// edges are exactly the edges of `tt` missing from `t`, each used once.
pub fn subdivision_matches(t: &Complex, tt: &Complex, pairing: &[SubdividedEdge]) -> bool {
    let mut used: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut by_u: HashMap<u32, (u32, u32)> = HashMap::new();
    for e in pairing {
        let edge = (e.w1.min(e.w2), e.w1.max(e.w2));
        if !used.insert(edge) || by_u.insert(e.u, edge).is_some() {
            return false;
        }
        if !t.contains(&sorted(e.u, e.w1)) || !t.contains(&sorted(e.u, e.w2)) || tt.contains(&[e.u]) {
            return false;
        }
    }
    let new_edges: BTreeSet<(u32, u32)> =
        tt.faces(1).iter().filter(|s| !t.contains(s)).map(|s| (s[0], s[1])).collect();
    let tilde_vertices_ok = t.vertices().iter().all(|v| tt.contains(&[*v]) || by_u.contains_key(v));
    new_edges == used && tilde_vertices_ok
}

fn sorted(a: u32, b: u32) -> [u32; 2] {
    [a.min(b), a.max(b)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqlinalg::Field;

    #[test]
    fn d2_over_f3() {
        let form = Form::hyperbolic(Field::new(3, 1).unwrap(), 2, &[]).unwrap();
        let d = dn_oriflamme(&form, &Caps::default()).unwrap();
        assert_eq!(d.t().face_counts(), vec![1, 24, 32]);
        assert_eq!(d.tilde.face_counts(), vec![1, 8, 16]);
        assert_eq!(d.pairing.len(), 16);
        assert_eq!(d.families[0].len(), 4);
        assert_eq!(d.families[1].len(), 4);
        assert!(subdivision_matches(d.t(), &d.tilde, &d.pairing));
    }
}
