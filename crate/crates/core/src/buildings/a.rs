use std::collections::HashSet;
use std::sync::Arc;

use crate::caps::Caps;
use crate::cones::{recursion_r_a, recursion_s, staged_targets, ConeProvider, FiltrationPlan, Stage};
use crate::error::{HdxError, Result};
use crate::fqlinalg::{enumerate_subspaces, is_transversal, is_transversal_in, Field, Subspace};

use super::{check_field, proper_subspaces, Geometry};

/// Flag complex of proper nonzero subspaces of GF(q)^m.
pub fn an_building(field: Arc<Field>, m: usize, caps: &Caps) -> Result<Geometry> {
    if m < 2 {
        return Err(HdxError::Domain(format!("ambient dimension {m} is below 2")));
    }
    check_field(&field, caps)?;
    let spaces = proper_subspaces(&field, m, caps)?;
    Ok(Geometry::from_spaces(field, m, None, spaces))
}

fn check_e(m: usize, e: &[Subspace]) -> Result<()> {
    for s in e {
        if s.ambient_dim() != m {
            return Err(HdxError::Domain(format!("subspace {s:?} does not live in dimension {m}")));
        }
    }
    Ok(())
}

/// The opposition complex T_E(V): subspaces transversal to every member of `e`.
pub fn opposition_an(field: Arc<Field>, m: usize, e: &[Subspace], caps: &Caps) -> Result<Geometry> {
    if m < 2 {
        return Err(HdxError::Domain(format!("ambient dimension {m} is below 2")));
    }
    check_e(m, e)?;
    for s in e {
        if s.is_zero() || s.is_full() {
            return Err(HdxError::Domain("subspaces in E must be proper and nonzero".into()));
        }
    }
    check_field(&field, caps)?;
    let mut keep = Vec::new();
    for u in proper_subspaces(&field, m, caps)? {
        let mut ok = true;
        for s in e {
            if !is_transversal(&field, &u, s)? {
                ok = false;
                break;
            }
        }
        if ok {
            keep.push(u);
        }
    }
    Ok(Geometry::from_spaces(field, m, None, keep))
}

/// Cone provider for the flag complex on `set`, a collection of subspaces
/// strictly between `bottom` and `top`, following the A-type filtration.
pub fn relative_dim_provider(geo: &Geometry, set: &[u32], bottom: &Subspace, top: &Subspace) -> Result<ConeProvider> {
    let rel = top.dim() - bottom.dim();
    if set.is_empty() || rel <= 2 {
        return Ok(ConeProvider::Point);
    }
    match interval_plan(geo, set, bottom, top, "A")? {
        Some(p) => Ok(ConeProvider::Plan(Box::new(p))),
        None => Ok(ConeProvider::Solve),
    }
}

fn interval_plan(geo: &Geometry, set: &[u32], bottom: &Subspace, top: &Subspace, label: &str) -> Result<Option<FiltrationPlan>> {
    let f = &**geo.field();
    let b = bottom.dim();
    let n = top.dim() - b - 2;
    let members: HashSet<u32> = set.iter().copied().collect();
    let rd = |id: u32| geo.space(id).dim() - b;
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let Some(line) = sorted.iter().copied().find(|&id| rd(id) == 1) else {
        return Ok(None);
    };
    let ell = geo.space(line).clone();
    let plus_ell = |id: u32| -> Result<Option<u32>> {
        let s = geo.space(id).sum(f, &ell)?;
        Ok(geo.id_of(&s).filter(|i| members.contains(i)))
    };
    let mut y0 = Vec::new();
    let mut z0 = Vec::new();
    let mut rest = Vec::new();
    for &id in &sorted {
        if ell.is_subspace_of(f, geo.space(id)) {
            z0.push(id);
            y0.push(id);
        } else if plus_ell(id)?.is_some() {
            y0.push(id);
        } else {
            rest.push(id);
        }
    }
    let z0set: HashSet<u32> = z0.iter().copied().collect();
    let mut inner_stages = Vec::new();
    for i in 1..=n + 1 {
        let vertices: Vec<u32> = y0.iter().copied().filter(|&id| !z0set.contains(&id) && rd(id) == i).collect();
        let mut providers = Vec::new();
        for &w in &vertices {
            providers.push((w, ConeProvider::ApexStar(plus_ell(w)?.expect("member of Y0"))));
        }
        inner_stages.push(Stage { vertices, providers, target: Some(i as u128 + 1) });
    }
    let inner = FiltrationPlan {
        label: format!("{label} inner"),
        base_vertices: z0,
        base_provider: ConeProvider::ApexStar(line),
        base_target: Some(1),
        stages: inner_stages,
        notes: vec![format!("line {}", geo.label(line))],
    };
    let s = recursion_s(n, &|i| recursion_r_a(i));
    let targets = staged_targets(n as u128 + 2, s, n + 1);
    let mut covered: HashSet<u32> = y0.iter().copied().collect();
    let mut outer_stages = Vec::new();
    for i in 1..=n + 1 {
        let d = n + 2 - i;
        let vertices: Vec<u32> = rest.iter().copied().filter(|&id| rd(id) == d).collect();
        let mut providers = Vec::new();
        for &w in &vertices {
            providers.push((w, link_provider(geo, w, &covered, bottom, top)?));
        }
        covered.extend(vertices.iter().copied());
        outer_stages.push(Stage { vertices, providers, target: Some(targets[i]) });
    }
    Ok(Some(FiltrationPlan {
        label: label.to_string(),
        base_vertices: y0,
        base_provider: ConeProvider::Plan(Box::new(inner)),
        base_target: Some(targets[0]),
        stages: outer_stages,
        notes: Vec::new(),
    }))
}

/// Provider for the relative link of `w` in the subcomplex on `covered`: the
/// join of the part below `w` (an A-type interval) and the part above it.
fn link_provider(geo: &Geometry, w: u32, covered: &HashSet<u32>, bottom: &Subspace, top: &Subspace) -> Result<ConeProvider> {
    let (below, above) = split_around(geo, w, covered);
    let u = geo.space(w);
    let lower = relative_dim_provider(geo, &below, bottom, u)?;
    let upper = relative_dim_provider(geo, &above, u, top)?;
    Ok(join_of(below, lower, above, upper))
}

pub(super) fn split_around(geo: &Geometry, w: u32, covered: &HashSet<u32>) -> (Vec<u32>, Vec<u32>) {
    let f = &**geo.field();
    let u = geo.space(w);
    let mut below = Vec::new();
    let mut above = Vec::new();
    for &c in covered {
        let s = geo.space(c);
        if s.dim() < u.dim() && s.is_subspace_of(f, u) {
            below.push(c);
        } else if s.dim() > u.dim() && u.is_subspace_of(f, s) {
            above.push(c);
        }
    }
    below.sort_unstable();
    above.sort_unstable();
    (below, above)
}

pub(super) fn join_of(below: Vec<u32>, lower: ConeProvider, above: Vec<u32>, upper: ConeProvider) -> ConeProvider {
    match (below.is_empty(), above.is_empty()) {
        (false, false) => ConeProvider::Join { left: below, left_provider: Box::new(lower), right_provider: Box::new(upper) },
        (false, true) => lower,
        (true, false) => upper,
        (true, true) => ConeProvider::Solve,
    }
}

/// The A-type filtration plan for T_E(V). Fails when no transversal line exists.
pub fn an_filtration_plan(geo: &Geometry, e: &[Subspace]) -> Result<FiltrationPlan> {
    let m = geo.ambient_dim();
    let ids: Vec<u32> = geo.complex().vertices().to_vec();
    let bottom = Subspace::zero(m);
    let top = Subspace::full(m);
    if m < 3 {
        return Ok(FiltrationPlan {
            label: "A".into(),
            base_vertices: ids,
            base_provider: ConeProvider::Point,
            base_target: Some(1),
            stages: Vec::new(),
            notes: Vec::new(),
        });
    }
    let mut plan = interval_plan(geo, &ids, &bottom, &top, "A")?
        .ok_or_else(|| HdxError::Domain("class violation: no line is transversal to E".into()))?;
    plan.notes.extend(factor_diagnostics(geo, e, &plan)?);
    Ok(plan)
}

/// Compares the sets T_{E'}(U) and T_{Ē}(V/U), with E' = {E ∩ U} and
/// Ē = {(E + U)/U}, to the relative-link parts actually used by the plan.
fn factor_diagnostics(geo: &Geometry, e: &[Subspace], plan: &FiltrationPlan) -> Result<Vec<String>> {
    let f = &**geo.field();
    let m = geo.ambient_dim();
    let caps = Caps::default();
    let mut all = Vec::new();
    for d in 1..m {
        match enumerate_subspaces(f, m, d, caps.subspaces) {
            Ok(v) => all.extend(v),
            Err(_) => return Ok(vec!["factor check skipped: too many subspaces".into()]),
        }
    }
    let mut covered: HashSet<u32> = plan.base_vertices.iter().copied().collect();
    let (mut below_ok, mut above_ok, mut total) = (0usize, 0usize, 0usize);
    for stage in &plan.stages {
        for &w in &stage.vertices {
            let u = geo.space(w);
            let (below, above) = split_around(geo, w, &covered);
            let below: HashSet<&Subspace> = below.iter().map(|&i| geo.space(i)).collect();
            let above: HashSet<&Subspace> = above.iter().map(|&i| geo.space(i)).collect();
            let mut e_low = Vec::new();
            let mut e_high = Vec::new();
            for s in e {
                let lo = s.intersect(f, u)?;
                if !lo.is_zero() && lo != *u {
                    e_low.push(lo);
                }
                let hi = s.sum(f, u)?;
                if hi != *u && !hi.is_full() {
                    e_high.push(hi);
                }
            }
            let zero = Subspace::zero(m);
            let full = Subspace::full(m);
            let mut pred_low = HashSet::new();
            let mut pred_high = HashSet::new();
            for x in &all {
                if x.dim() < u.dim() && x.is_subspace_of(f, u) {
                    let mut ok = true;
                    for t in &e_low {
                        ok &= is_transversal_in(f, x, t, &zero, u)?;
                    }
                    if ok {
                        pred_low.insert(x);
                    }
                } else if x.dim() > u.dim() && u.is_subspace_of(f, x) {
                    let mut ok = true;
                    for t in &e_high {
                        ok &= is_transversal_in(f, x, t, u, &full)?;
                    }
                    if ok {
                        pred_high.insert(x);
                    }
                }
            }
            total += 1;
            below_ok += usize::from(pred_low == below);
            above_ok += usize::from(pred_high == above);
        }
        covered.extend(stage.vertices.iter().copied());
    }
    Ok(vec![format!(
        "factor check: below part matches T_E'(U) for {below_ok}/{total}, above part matches T_Ebar(V/U) for {above_ok}/{total}"
    )])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::run_filtration;
    use crate::fqlinalg::Field;

    #[test]
    fn fano_counts() {
        let f = Field::new(2, 1).unwrap();
        let g = an_building(f, 3, &Caps::default()).unwrap();
        assert_eq!(g.complex().face_counts(), vec![1, 14, 21]);
    }

    #[test]
    fn a2_over_f3_flag() {
        let f = Field::new(3, 1).unwrap();
        let e = vec![Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[0, 1])];
        let g = opposition_an(f, 3, &e, &Caps::default()).unwrap();
        assert_eq!(g.complex().face_counts(), vec![1, 18, 27]);
        let plan = an_filtration_plan(&g, &e).unwrap();
        let (c, ledger) = run_filtration(g.complex(), &plan, 0, 1 << 22).unwrap();
        assert!(c.verify(g.complex()).is_ok());
        assert!(c.max_radius() <= 18, "{:?}", c.radius_profile());
        assert!(ledger.violations().is_empty(), "{:?}", ledger.violations());
    }
}
