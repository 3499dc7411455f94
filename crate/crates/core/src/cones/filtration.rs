//! Staged cone construction along a filtration by pairwise non-adjacent vertex sets.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{HdxError, Result};
use crate::simplicial::Complex;

use super::{
    apex_star_cone, extend_by_vertex_set, extension_bound, graph_bfs_cone, join_bound, join_cone, relative_link,
    solve_cone_linear, ConeFunction, Verdict,
};

/// How to obtain a cone on a given complex.
#[derive(Clone, Debug)]
pub enum ConeProvider {
    /// Any vertex; only meaningful in degree −1.
    Point,
    ApexStar(u32),
    Bfs(u32),
    /// The complex is the join of the full subcomplexes on `left` and on the remaining vertices.
    Join { left: Vec<u32>, left_provider: Box<ConeProvider>, right_provider: Box<ConeProvider> },
    Plan(Box<FiltrationPlan>),
    Solve,
    Fixed(ConeFunction),
}

impl ConeProvider {
    pub fn name(&self) -> &'static str {
        match self {
            ConeProvider::Point => "point",
            ConeProvider::ApexStar(_) => "apex-star",
            ConeProvider::Bfs(_) => "bfs",
            ConeProvider::Join { .. } => "join",
            ConeProvider::Plan(_) => "filtration",
            ConeProvider::Solve => "solve",
            ConeProvider::Fixed(_) => "fixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub vertices: Vec<u32>,
    pub providers: Vec<(u32, ConeProvider)>,
    /// Radius target for the cone after this stage.
    pub target: Option<u128>,
}

#[derive(Clone, Debug)]
pub struct FiltrationPlan {
    pub label: String,
    pub base_vertices: Vec<u32>,
    pub base_provider: ConeProvider,
    pub base_target: Option<u128>,
    pub stages: Vec<Stage>,
    /// Copied into the ledger when the plan runs.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub index: usize,
    pub added: usize,
    pub radii: Vec<usize>,
    /// Per-degree bound from the measured base and link radii.
    pub extension_bound: Vec<u128>,
    pub target: Option<u128>,
}

impl StageRecord {
    pub fn within_extension_bound(&self) -> bool {
        self.extension_bound.is_empty() || self.radii.iter().zip(&self.extension_bound).all(|(&r, &b)| r as u128 <= b)
    }
    pub fn within_target(&self) -> bool {
        self.target.map_or(true, |t| self.radii.iter().all(|&r| r as u128 <= t))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub label: String,
    pub radii: Vec<usize>,
    pub bound: Vec<u128>,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.radii.iter().zip(&self.bound).all(|(&r, &b)| r as u128 <= b)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FiltrationLedger {
    pub label: String,
    pub stages: Vec<StageRecord>,
    pub checks: Vec<BoundCheck>,
    pub notes: Vec<String>,
    pub children: Vec<FiltrationLedger>,
}

impl FiltrationLedger {
    /// Every failed bound in this ledger and its children.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.stages {
            if !s.within_extension_bound() {
                out.push(format!("{} stage {}: radii {:?} exceed {:?}", self.label, s.index, s.radii, s.extension_bound));
            }
            if !s.within_target() {
                out.push(format!("{} stage {}: radii {:?} exceed target {:?}", self.label, s.index, s.radii, s.target));
            }
        }
        for c in &self.checks {
            if !c.holds() {
                out.push(format!("{} {}: radii {:?} exceed {:?}", self.label, c.label, c.radii, c.bound));
            }
        }
        for ch in &self.children {
            out.extend(ch.violations());
        }
        out
    }

    /// Number of radius comparisons made, recursively.
    pub fn comparisons(&self) -> usize {
        self.stages.len() * 2 + self.checks.len() + self.children.iter().map(|c| c.comparisons()).sum::<usize>()
    }

    pub fn fallbacks(&self) -> Vec<String> {
        let mut out: Vec<String> = self.notes.iter().filter(|n| n.contains("fallback")).cloned().collect();
        for ch in &self.children {
            out.extend(ch.fallbacks());
        }
        out
    }
}

fn build_once(p: &ConeProvider, x: &Complex, k: i32, cap: usize, ledger: &mut FiltrationLedger) -> Result<ConeFunction> {
    if x.num_vertices() == 0 {
        return Err(HdxError::NoCone("the empty complex has no cone".into()));
    }
    if k < 0 {
        let apex = match p {
            ConeProvider::ApexStar(v) | ConeProvider::Bfs(v) if x.contains(&[*v]) => *v,
            _ => x.vertices()[0],
        };
        return Ok(ConeFunction::new(apex, k));
    }
    match p {
        ConeProvider::Point => Err(HdxError::Domain("a point cone only exists in degree -1".into())),
        ConeProvider::ApexStar(v) => apex_star_cone(x, *v, k),
        ConeProvider::Bfs(v) => {
            if k > 0 {
                return Err(HdxError::Domain("a path cone only has degree 0".into()));
            }
            graph_bfs_cone(&x.skeleton(1.min(x.dim()))?, *v)
        }
        ConeProvider::Join { left, left_provider, right_provider } => {
            let lset: HashSet<u32> = left.iter().copied().collect();
            let lv: Vec<u32> = x.vertices().iter().copied().filter(|v| lset.contains(v)).collect();
            let rv: Vec<u32> = x.vertices().iter().copied().filter(|v| !lset.contains(v)).collect();
            if lv.is_empty() || rv.is_empty() {
                return Err(HdxError::Domain("join factor is empty".into()));
            }
            let l = x.full_subcomplex(&lv)?;
            let r = x.full_subcomplex(&rv)?;
            let count = |c: &Complex| c.face_counts().iter().sum::<usize>();
            if count(x) != count(&l) * count(&r) {
                return Err(HdxError::Domain("complex is not the join of the given parts".into()));
            }
            let (n1, n2) = (l.dim(), r.dim());
            let c1 = build(left_provider, &l, n1 - 1, cap, ledger)?;
            let c2 = build(right_provider, &r, n2 - 1, cap, ledger)?;
            let c = join_cone(&l, &c1, &r, &c2, k)?;
            let (r1, r2) = (c1.radius_profile(), c2.radius_profile());
            ledger.checks.push(BoundCheck {
                label: format!("join {}*{}", n1, n2),
                radii: c.radius_profile(),
                bound: (-1..=k).map(|j| if j < 0 { 1 } else { join_bound(&r1, n1, &r2, j) }).collect(),
            });
            Ok(c)
        }
        ConeProvider::Plan(plan) => {
            let (c, child) = run_filtration(x, plan, k, cap)?;
            ledger.children.push(child);
            Ok(c)
        }
        ConeProvider::Solve => solve_cone_linear(x, k, x.vertices()[0], cap),
        ConeProvider::Fixed(c) => Ok(c.truncated(k)),
    }
}

/// Builds and verifies a cone, falling back to the linear solver on failure.
pub(crate) fn build(p: &ConeProvider, x: &Complex, k: i32, cap: usize, ledger: &mut FiltrationLedger) -> Result<ConeFunction> {
    let attempt = build_once(p, x, k, cap, ledger).and_then(|c| {
        if c.degree() < k {
            return Err(HdxError::Domain(format!("{} cone has degree {} < {k}", p.name(), c.degree())));
        }
        match c.verify(x) {
            Verdict::Ok => Ok(c),
            Verdict::Violation { simplex, detail } => {
                Err(HdxError::Domain(format!("{} cone fails at {simplex:?}: {detail}", p.name())))
            }
        }
    });
    match attempt {
        Ok(c) => Ok(c),
        Err(e) if !matches!(p, ConeProvider::Solve) && !matches!(e, HdxError::Resource(_)) && x.num_vertices() > 0 => {
            ledger.notes.push(format!(
                "fallback: {} provider on a {}-vertex complex failed ({e}); using the linear solver",
                p.name(),
                x.num_vertices()
            ));
            let c = solve_cone_linear(x, k, x.vertices()[0], cap)?;
            Ok(c)
        }
        Err(e) => Err(e),
    }
}

/// Runs a filtration plan on `x`, returning a verified k-cone and its ledger.
pub fn run_filtration(x: &Complex, plan: &FiltrationPlan, k: i32, cap: usize) -> Result<(ConeFunction, FiltrationLedger)> {
    let mut ledger = FiltrationLedger { label: plan.label.clone(), notes: plan.notes.clone(), ..Default::default() };
    let mut covered: BTreeSet<u32> = BTreeSet::new();
    for &v in &plan.base_vertices {
        if x.vertex_index(v).is_none() {
            return Err(HdxError::Domain(format!("{}: base vertex {v} is not in the complex", plan.label)));
        }
        covered.insert(v);
    }
    let base_list: Vec<u32> = covered.iter().copied().collect();
    let base = x.full_subcomplex(&base_list)?;
    let mut cone = build(&plan.base_provider, &base, k, cap, &mut ledger)
        .map_err(|e| stage_error(&plan.label, 0, e))?;
    ledger.stages.push(StageRecord {
        index: 0,
        added: base_list.len(),
        radii: cone.radius_profile(),
        extension_bound: Vec::new(),
        target: plan.base_target,
    });
    for (i, stage) in plan.stages.iter().enumerate() {
        let idx = i + 1;
        let mut seen = HashSet::new();
        for &w in &stage.vertices {
            if x.vertex_index(w).is_none() || covered.contains(&w) || !seen.insert(w) {
                return Err(HdxError::Domain(format!("{} stage {idx}: vertex {w} is unknown or already added", plan.label)));
            }
        }
        if stage.vertices.is_empty() {
            ledger.stages.push(StageRecord {
                index: idx,
                added: 0,
                radii: cone.radius_profile(),
                extension_bound: Vec::new(),
                target: stage.target,
            });
            continue;
        }
        let providers: HashMap<u32, &ConeProvider> = stage.providers.iter().map(|(w, p)| (*w, p)).collect();
        let mut link_cones = HashMap::new();
        let mut link_radii = Vec::new();
        for &w in &stage.vertices {
            let rel = relative_link(x, w, &covered.iter().copied().collect())
                .map_err(|e| stage_error(&plan.label, idx, e))?;
            let p = providers.get(&w).copied().unwrap_or(&ConeProvider::Solve);
            let lc = build(p, &rel, k - 1, cap, &mut ledger).map_err(|e| stage_error(&plan.label, idx, e))?;
            link_radii.push(lc.radius_profile());
            link_cones.insert(w, lc);
        }
        let base_radii = cone.radius_profile();
        let next = extend_by_vertex_set(x, &covered.iter().copied().collect::<Vec<_>>(), &cone, &stage.vertices, &link_cones)
            .map_err(|e| stage_error(&plan.label, idx, e))?;
        if next.degree() < k {
            return Err(stage_error(&plan.label, idx, HdxError::Domain(format!("extension degree {} < {k}", next.degree()))));
        }
        covered.extend(stage.vertices.iter().copied());
        let sub = x.full_subcomplex(&covered.iter().copied().collect::<Vec<_>>())?;
        if let Verdict::Violation { simplex, detail } = next.verify(&sub) {
            return Err(stage_error(&plan.label, idx, HdxError::Domain(format!("extended cone fails at {simplex:?}: {detail}"))));
        }
        ledger.stages.push(StageRecord {
            index: idx,
            added: stage.vertices.len(),
            radii: next.radius_profile(),
            extension_bound: (-1..=k).map(|j| extension_bound(&base_radii, &link_radii, j)).collect(),
            target: stage.target,
        });
        cone = next;
    }
    if covered.len() != x.num_vertices() {
        return Err(HdxError::Domain(format!(
            "{}: plan covers {} of {} vertices",
            plan.label,
            covered.len(),
            x.num_vertices()
        )));
    }
    Ok((cone, ledger))
}

fn stage_error(label: &str, idx: usize, e: HdxError) -> HdxError {
    match e {
        HdxError::Domain(m) => HdxError::Domain(format!("{label} stage {idx}: {m}")),
        HdxError::NoCone(m) => HdxError::NoCone(format!("{label} stage {idx}: {m}")),
        other => other,
    }
}
