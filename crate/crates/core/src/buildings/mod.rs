//! Spherical buildings over finite fields and their opposition complexes.

mod a;
mod c;
mod d;
mod iso;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{HdxError, Result};
use crate::fqlinalg::{enumerate_subspaces, Field, Form, Subspace};
use crate::simplicial::{flag_complex, Complex};

pub use a::{an_building, an_filtration_plan, opposition_an, relative_dim_provider};
pub use c::{cn_building, cn_filtration_plan, n_of_e, opposition_cn};
pub use d::{dn_oriflamme, opposition_dn, subdivision_matches, DnGeometry};
pub use iso::{complexes_isomorphic, facet_transitive, isomorphism_with_pins};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    A,
    C,
    D,
}

/// A set of subspaces, indexed by position, with the flag complex of some
/// incidence relation on (a subset of) them.
#[derive(Clone, Debug)]
pub struct Geometry {
    field: Arc<Field>,
    m: usize,
    form: Option<Form>,
    spaces: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    complex: Complex,
}

impl Geometry {
    fn from_spaces(field: Arc<Field>, m: usize, form: Option<Form>, mut spaces: Vec<Subspace>) -> Geometry {
        spaces.sort();
        spaces.dedup();
        let index = spaces.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let mut g = Geometry { field, m, form, spaces, index, complex: Complex::empty() };
        let ids: Vec<u32> = (0..g.spaces.len() as u32).collect();
        g.complex = g.containment_flag(&ids);
        g
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.m
    }
    pub fn form(&self) -> Option<&Form> {
        self.form.as_ref()
    }
    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }
    pub fn space(&self, id: u32) -> &Subspace {
        &self.spaces[id as usize]
    }
    pub fn id_of(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }
    pub fn complex(&self) -> &Complex {
        &self.complex
    }
    pub fn ids_of_dim(&self, d: usize) -> Vec<u32> {
        (0..self.spaces.len() as u32).filter(|&i| self.space(i).dim() == d).collect()
    }

    pub fn label(&self, id: u32) -> String {
        space_label(self.field.order(), self.space(id))
    }

    /// Flag complex of the containment relation on the given ids.
    pub fn containment_flag(&self, ids: &[u32]) -> Complex {
        let f = &*self.field;
        self.flag_by(ids, |a, b| {
            let (x, y) = (self.space(a), self.space(b));
            x.dim() != y.dim() && (x.is_subspace_of(f, y) || y.is_subspace_of(f, x))
        })
    }

    pub(crate) fn flag_by<P>(&self, ids: &[u32], pred: P) -> Complex
    where
        P: Fn(u32, u32) -> bool + Sync,
    {
        let mut sorted = ids.to_vec();
        sorted.sort_unstable();
        let edges: HashSet<(u32, u32)> = sorted
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, &a)| {
                let pred = &pred;
                sorted[i + 1..].iter().filter(move |&&b| pred(a, b)).map(move |&b| (a, b))
            })
            .collect();
        let labels = sorted.iter().map(|&i| self.label(i)).collect();
        flag_complex(sorted, labels, |a, b| edges.contains(&(a.min(b), a.max(b))))
    }
}

/// `d:row;row` with digits separated by `.` once the field has more than 10 elements.
pub fn space_label(q: u32, s: &Subspace) -> String {
    let sep = if q > 10 { "." } else { "" };
    let rows: Vec<String> =
        s.basis().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)).collect();
    format!("{}:{}", s.dim(), rows.join(";"))
}

fn check_field(field: &Field, caps: &Caps) -> Result<()> {
    if field.order() > caps.field_size {
        return Err(HdxError::Resource(format!("field of order {} exceeds cap {}", field.order(), caps.field_size)));
    }
    Ok(())
}

/// All proper nonzero subspaces of GF(q)^m.
fn proper_subspaces(field: &Field, m: usize, caps: &Caps) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for d in 1..m {
        out.extend(enumerate_subspaces(field, m, d, caps.subspaces.saturating_sub(out.len()))?);
    }
    Ok(out)
}

/// The defining data of an opposition complex and the derived class data.
#[derive(Clone, Debug, Serialize)]
pub struct OppositionSpec {
    pub kind: Kind,
    pub q: u32,
    pub m: usize,
    pub subspaces: Vec<String>,
    /// `e_j` for j = 0..=m.
    pub counts: Vec<usize>,
    /// Left side of the class inequality for the A type.
    pub class_a_sum: Option<u128>,
    /// `N(E)` for the C type; absent when the space is not thick.
    pub n_of_e: Option<u128>,
    pub in_class: Option<bool>,
}

impl OppositionSpec {
    pub fn new(kind: Kind, field: &Field, m: usize, e: &[Subspace], form: Option<&Form>) -> OppositionSpec {
        let mut counts = vec![0usize; m + 1];
        for s in e {
            counts[s.dim()] += 1;
        }
        let q = field.order();
        let (class_a_sum, n_e, in_class) = match kind {
            Kind::A => {
                let n = m.saturating_sub(2) as u64;
                let sum: u128 = (1..m)
                    .map(|j| crate::simplicial::binomial(n, j as u64 - 1) as u128 * counts[j] as u128)
                    .sum();
                (Some(sum), None, Some(sum <= q as u128))
            }
            Kind::C => {
                let ne = form.and_then(|f| n_of_e(f, &counts));
                (None, ne, ne.map(|v| v <= q as u128))
            }
            Kind::D => (None, None, None),
        };
        OppositionSpec {
            kind,
            q,
            m,
            subspaces: e.iter().map(|s| space_label(q, s)).collect(),
            counts,
            class_a_sum,
            n_of_e: n_e,
            in_class,
        }
    }
}
