use std::collections::HashSet;

use crate::caps::Caps;
use crate::cones::{recursion_r_c, recursion_s, staged_targets, ConeProvider, FiltrationPlan, Stage};
use crate::error::{HdxError, Result};
use crate::fqlinalg::{is_transversal, Form, Subspace};
use crate::simplicial::binomial;

use super::a::{join_of, relative_dim_provider, split_around};
use super::{check_field, Geometry};

fn isotropic_spaces(form: &Form, caps: &Caps) -> Result<Vec<Subspace>> {
    if !form.is_nondegenerate() {
        return Err(HdxError::Domain("form is degenerate".into()));
    }
    Ok(form.isotropic_subspaces(caps.subspaces)?.into_iter().flatten().collect())
}

/// Flag complex of nonzero totally isotropic subspaces.
pub fn cn_building(form: &Form, caps: &Caps) -> Result<Geometry> {
    check_field(form.field(), caps)?;
    let spaces = isotropic_spaces(form, caps)?;
    if spaces.is_empty() {
        return Err(HdxError::Domain("form has Witt index 0".into()));
    }
    Ok(Geometry::from_spaces(form.field().clone(), form.dim(), Some(form.clone()), spaces))
}

pub(super) fn check_perp_closed(form: &Form, e: &[Subspace]) -> Result<()> {
    let set: HashSet<&Subspace> = e.iter().collect();
    for s in e {
        if s.ambient_dim() != form.dim() {
            return Err(HdxError::Domain(format!("subspace {s:?} does not live in dimension {}", form.dim())));
        }
        if !set.contains(&form.perp(s)) {
            return Err(HdxError::Domain(format!("E is not closed under perp: {s:?}")));
        }
    }
    Ok(())
}

/// T_E(V) for a set E with E^⊥ = E.
pub fn opposition_cn(form: &Form, e: &[Subspace], caps: &Caps) -> Result<Geometry> {
    check_field(form.field(), caps)?;
    check_perp_closed(form, e)?;
    let f = &**form.field();
    let mut keep = Vec::new();
    for u in isotropic_spaces(form, caps)? {
        let mut ok = true;
        for s in e {
            ok &= is_transversal(f, &u, s)?;
        }
        if ok {
            keep.push(u);
        }
    }
    Ok(Geometry::from_spaces(form.field().clone(), form.dim(), Some(form.clone()), keep))
}

/// `N(E)` from the counts `e_j` (j = 0..=m). Defined for m = 2n+1 and
/// m = 2n+2 with n the Witt index; the hyperbolic case m = 2n is not thick.
pub fn n_of_e(form: &Form, counts: &[usize]) -> Option<u128> {
    let m = form.dim();
    let n = form.witt_index();
    if n == 0 {
        return None;
    }
    let e = |j: usize| counts.get(j).copied().unwrap_or(0) as u128;
    let s = n - 1;
    let eh = |h: usize| -> u128 { (0..=2 * s).map(|j| binomial(2 * s as u64, j as u64) as u128 * e(h + j)).sum() };
    if m == 2 * n + 1 {
        Some(2 * eh(2))
    } else if m == 2 * n + 2 {
        Some((eh(2) + eh(3) + 1).max(2 * eh(3)))
    } else {
        None
    }
}

/// The C-type filtration plan for T_E(V) with E^⊥ = E.
pub fn cn_filtration_plan(geo: &Geometry, e: &[Subspace]) -> Result<FiltrationPlan> {
    let form = geo.form().ok_or_else(|| HdxError::Domain("geometry carries no form".into()))?;
    let f = &**geo.field();
    let m = geo.ambient_dim();
    let witt = form.witt_index();
    let ids: Vec<u32> = geo.complex().vertices().to_vec();
    if witt < 2 {
        return Ok(FiltrationPlan {
            label: "C".into(),
            base_vertices: ids,
            base_provider: ConeProvider::Point,
            base_target: Some(1),
            stages: Vec::new(),
            notes: Vec::new(),
        });
    }
    let n = witt - 1;
    let line = ids
        .iter()
        .copied()
        .find(|&id| geo.space(id).dim() == 1)
        .ok_or_else(|| HdxError::Domain("class violation: no isotropic line is transversal to E".into()))?;
    let ell = geo.space(line).clone();
    let ell_perp = form.perp(&ell);
    let mut e_plus = Vec::new();
    let mut e_cap = Vec::new();
    let mut e_cap_plus = Vec::new();
    for s in e {
        e_plus.push(s.sum(f, &ell)?);
        let c = s.intersect(f, &ell_perp)?;
        e_cap_plus.push(c.sum(f, &ell)?);
        e_cap.push(c);
    }
    let transversal_all = |u: &Subspace, sets: &[&[Subspace]]| -> Result<bool> {
        for set in sets {
            for s in *set {
                if !is_transversal(f, u, s)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    let mut cond1 = Vec::new();
    let mut cond2 = Vec::new();
    let mut cond3 = Vec::new();
    let mut z = Vec::new();
    for &id in &ids {
        let u = geo.space(id);
        let contains = ell.is_subspace_of(f, u);
        if contains || transversal_all(u, &[&e_plus])? {
            z.push(id);
        }
        if contains {
            cond1.push(id);
        } else if u.is_subspace_of(f, &ell_perp) {
            if transversal_all(u, &[&e_plus])? {
                cond2.push(id);
            }
        } else if u.dim() > 1 && transversal_all(u, &[&e_cap, &e_plus, &e_cap_plus])? {
            cond3.push(id);
        }
    }
    let mut notes = vec![format!("line {}", geo.label(line))];
    let apex_provider = |s: Subspace, notes: &mut Vec<String>| match geo.id_of(&s) {
        Some(a) => ConeProvider::ApexStar(a),
        None => {
            notes.push(format!("fallback: apex {s:?} is not a vertex"));
            ConeProvider::Solve
        }
    };
    let mut inner_stages = Vec::new();
    for i in 1..=n + 1 {
        let vertices: Vec<u32> = cond2.iter().copied().filter(|&id| geo.space(id).dim() == i).collect();
        let mut providers = Vec::new();
        for &w in &vertices {
            providers.push((w, apex_provider(geo.space(w).sum(f, &ell)?, &mut notes)));
        }
        inner_stages.push(Stage { vertices, providers, target: Some(i as u128 + 1) });
    }
    for i in 1..=n + 1 {
        let vertices: Vec<u32> = cond3.iter().copied().filter(|&id| geo.space(id).dim() == n + 2 - i).collect();
        let mut providers = Vec::new();
        for &w in &vertices {
            providers.push((w, apex_provider(geo.space(w).intersect(f, &ell_perp)?, &mut notes)));
        }
        inner_stages.push(Stage { vertices, providers, target: Some((n + 2 + i) as u128) });
    }
    let inner = FiltrationPlan {
        label: "C inner".into(),
        base_vertices: cond1.clone(),
        base_provider: ConeProvider::ApexStar(line),
        base_target: Some(1),
        stages: inner_stages,
        notes,
    };
    let y0: Vec<u32> = cond1.iter().chain(&cond2).chain(&cond3).copied().collect();
    let mut covered: HashSet<u32> = y0.iter().copied().collect();
    let zset: HashSet<u32> = z.iter().copied().collect();
    let s = recursion_s(n, &|i| recursion_r_c(i));
    let targets = staged_targets(2 * n as u128 + 3, s, 2 * n + 2);
    let mut outer_notes = Vec::new();
    let mut stages = Vec::new();
    for i in 1..=2 * n + 2 {
        let vertices: Vec<u32> = if i <= n + 1 {
            z.iter().copied().filter(|id| !covered.contains(id) && geo.space(*id).dim() == i).collect()
        } else {
            ids.iter()
                .copied()
                .filter(|id| !zset.contains(id) && !covered.contains(id) && geo.space(*id).dim() == 2 * n + 3 - i)
                .collect()
        };
        let mut providers = Vec::new();
        for &w in &vertices {
            let u = geo.space(w);
            let (below, above) = split_around(geo, w, &covered);
            let lower = relative_dim_provider(geo, &below, &Subspace::zero(m), u)?;
            let upper = if u.dim() >= n || above.is_empty() {
                ConeProvider::Point
            } else {
                outer_notes.push(format!("fallback: upper part of the link of {} uses the linear solver", geo.label(w)));
                ConeProvider::Solve
            };
            providers.push((w, join_of(below, lower, above, upper)));
        }
        covered.extend(vertices.iter().copied());
        stages.push(Stage { vertices, providers, target: Some(targets[i]) });
    }
    outer_notes.push(format!(
        "base radius target {} (proven bound 2n+3 rather than the stated 2n+1)",
        targets[0]
    ));
    Ok(FiltrationPlan {
        label: "C".into(),
        base_vertices: y0,
        base_provider: ConeProvider::Plan(Box::new(inner)),
        base_target: Some(targets[0]),
        stages,
        notes: outer_notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::run_filtration;
    use crate::fqlinalg::Field;

    #[test]
    fn quadrangle_counts() {
        let form = Form::hyperbolic(Field::new(3, 1).unwrap(), 2, &[]).unwrap();
        let g = cn_building(&form, &Caps::default()).unwrap();
        assert_eq!(g.ids_of_dim(1).len(), 16);
        assert_eq!(g.ids_of_dim(2).len(), 8);
        assert_eq!(g.complex().num_faces(1), 32);
    }

    #[test]
    fn c2_plan_runs() {
        let form = Form::hyperbolic(Field::new(3, 1).unwrap(), 2, &[]).unwrap();
        let l = Subspace::coordinate(4, &[0]);
        let e = vec![l.clone(), form.perp(&l)];
        let g = opposition_cn(&form, &e, &Caps::default()).unwrap();
        let plan = cn_filtration_plan(&g, &e).unwrap();
        let (c, ledger) = run_filtration(g.complex(), &plan, 0, 1 << 22).unwrap();
        assert!(c.verify(g.complex()).is_ok());
        assert!(ledger.violations().is_empty(), "{:?}", ledger.violations());
    }

    #[test]
    fn not_perp_closed() {
        let form = Form::hyperbolic(Field::new(3, 1).unwrap(), 2, &[]).unwrap();
        let e = vec![Subspace::coordinate(4, &[0])];
        assert!(matches!(opposition_cn(&form, &e, &Caps::default()), Err(HdxError::Domain(_))));
    }
}
