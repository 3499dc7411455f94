//! Named constructions shared by the command line and the C interface.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::buildings::{
    an_building, an_filtration_plan, cn_building, cn_filtration_plan, dn_oriflamme, opposition_an, opposition_cn,
    opposition_dn, DnGeometry, Geometry, Kind, OppositionSpec,
};
use crate::caps::Caps;
use crate::cones::{
    graph_bfs_cone, run_filtration, solve_cone_linear, subdivision_transport, BoundCheck, ConeFunction,
    FiltrationLedger,
};
use crate::cosets::{coset_complex, enumerate_group, kms_sl_example, unipotent_opposition, CosetComplex, KmsChecks, Mat};
use crate::error::{HdxError, Result};
use crate::fqlinalg::{Elem, Field, Form, Subspace};
use crate::simplicial::Complex;
use crate::standard;

pub const KINDS: [&str; 10] = [
    "simplex",
    "octahedron",
    "an-building",
    "an-opposition",
    "cn-building",
    "cn-opposition",
    "dn-oriflamme",
    "coset",
    "kms-sl",
    "unipotent-opposition",
];

/// Parameters of a named construction; unused fields stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<u32>>,
    /// Group description file for `coset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

pub enum Source {
    Plain,
    A { geometry: Geometry, e: Vec<Subspace> },
    C { geometry: Geometry, e: Vec<Subspace> },
    D(Box<DnGeometry>),
    Coset(Box<CosetComplex>),
}

/// A constructed complex with vertex ids renumbered to positions.
pub struct Built {
    pub spec: BuildSpec,
    pub complex: Complex,
    /// Original vertex id to position.
    pub renumber: HashMap<u32, u32>,
    pub source: Source,
    pub metadata: Value,
}

fn need<T: Copy>(v: Option<T>, name: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| HdxError::Malformed(format!("`{kind}` needs --{name}")))
}

fn flag_of(spec: &BuildSpec) -> &str {
    spec.flag.as_deref().unwrap_or("full")
}

/// E for the A type: `full` (the standard flag), `point`, `hyperplane`, or `none`.
fn a_subspaces(m: usize, flag: &str) -> Result<Vec<Subspace>> {
    let prefix = |i: usize| Subspace::coordinate(m, &(0..i).collect::<Vec<_>>());
    match flag {
        "full" => Ok((1..m).map(prefix).collect()),
        "point" => Ok(vec![prefix(1)]),
        "hyperplane" => Ok(vec![prefix(m - 1)]),
        "none" => Ok(Vec::new()),
        other => Err(HdxError::Malformed(format!("unknown flag `{other}`"))),
    }
}

/// Hyperbolic form on GF(q)^m, with one extra square when m is odd.
fn standard_form(field: std::sync::Arc<Field>, m: usize) -> Result<Form> {
    let diagonal: Vec<Elem> = if m % 2 == 1 { vec![1] } else { Vec::new() };
    Form::hyperbolic(field, m / 2, &diagonal)
}

/// E for the C and D types: the standard isotropic flag (or its first
/// member) together with the perps.
fn c_subspaces(form: &Form, flag: &str) -> Result<Vec<Subspace>> {
    let m = form.dim();
    let h = m / 2;
    let prefix = |i: usize| Subspace::coordinate(m, &(0..i).collect::<Vec<_>>());
    let base: Vec<Subspace> = match flag {
        "full" => (1..=form.witt_index()).map(prefix).collect(),
        "point" => vec![prefix(1)],
        "none" => Vec::new(),
        other => return Err(HdxError::Malformed(format!("unknown flag `{other}`"))),
    };
    debug_assert!(base.iter().all(|s| s.dim() <= h));
    let mut out = base.clone();
    for s in &base {
        let p = form.perp(s);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

fn geometry_types(geo: &Geometry, ids: &[u32]) -> Vec<u32> {
    ids.iter().map(|&i| geo.space(i).dim() as u32).collect()
}

#[derive(Deserialize)]
struct CosetInput {
    q: u32,
    degree: usize,
    generators: Vec<Vec<Vec<Elem>>>,
    subgroups: Vec<Vec<usize>>,
}

fn coset_from_file(path: &Path, caps: &Caps) -> Result<CosetComplex> {
    let input: CosetInput = crate::io::read_json(path)?;
    let field = Field::from_order(input.q)?;
    let mut gens = Vec::new();
    for g in &input.generators {
        if g.len() != input.degree {
            return Err(HdxError::Malformed(format!("generator has {} rows, not {}", g.len(), input.degree)));
        }
        gens.push(Mat::from_rows(g)?);
    }
    let group = enumerate_group(field.clone(), input.degree, gens.clone(), caps.group_order)?;
    let mut subs = Vec::new();
    for idx in &input.subgroups {
        let sg: Vec<Mat> = idx
            .iter()
            .map(|&i| gens.get(i).cloned().ok_or_else(|| HdxError::Malformed(format!("generator index {i} out of range"))))
            .collect::<Result<_>>()?;
        subs.push(enumerate_group(field.clone(), input.degree, sg, caps.group_order)?);
    }
    coset_complex(group, subs)
}

pub fn build(spec: &BuildSpec, caps: &Caps) -> Result<Built> {
    let kind = spec.kind.as_str();
    let mut extra = serde_json::Map::new();
    let (complex, types, source): (Complex, Option<Vec<u32>>, Source) = match kind {
        "simplex" => (standard::simplex(need(spec.dim, "dim", kind)? + 1)?, None, Source::Plain),
        "octahedron" => (standard::octahedron(), None, Source::Plain),
        "an-building" | "an-opposition" => {
            let field = Field::from_order(need(spec.q, "q", kind)?)?;
            let m = need(spec.dim, "dim", kind)?;
            let (geometry, e) = if kind == "an-building" {
                (an_building(field.clone(), m, caps)?, Vec::new())
            } else {
                let e = a_subspaces(m, flag_of(spec))?;
                (opposition_an(field.clone(), m, &e, caps)?, e)
            };
            extra.insert("opposition".into(), serde_json::to_value(OppositionSpec::new(Kind::A, &field, m, &e, None))?);
            let ids = geometry.complex().vertices().to_vec();
            (geometry.complex().clone(), Some(geometry_types(&geometry, &ids)), Source::A { geometry, e })
        }
        "cn-building" | "cn-opposition" => {
            let field = Field::from_order(need(spec.q, "q", kind)?)?;
            let form = standard_form(field.clone(), need(spec.dim, "dim", kind)?)?;
            let (geometry, e) = if kind == "cn-building" {
                (cn_building(&form, caps)?, Vec::new())
            } else {
                let e = c_subspaces(&form, flag_of(spec))?;
                (opposition_cn(&form, &e, caps)?, e)
            };
            extra.insert(
                "opposition".into(),
                serde_json::to_value(OppositionSpec::new(Kind::C, &field, form.dim(), &e, Some(&form)))?,
            );
            let ids = geometry.complex().vertices().to_vec();
            (geometry.complex().clone(), Some(geometry_types(&geometry, &ids)), Source::C { geometry, e })
        }
        "dn-oriflamme" => {
            let field = Field::from_order(need(spec.q, "q", kind)?)?;
            let form = standard_form(field, need(spec.dim, "dim", kind)?)?;
            let d = match spec.flag.as_deref() {
                None | Some("none") => dn_oriflamme(&form, caps)?,
                Some(fl) => opposition_dn(&form, &c_subspaces(&form, fl)?, caps)?,
            };
            extra.insert("weak_counts".into(), json!(d.t().face_counts()));
            extra.insert("families".into(), json!([d.families[0].len(), d.families[1].len()]));
            let ids = d.tilde.vertices().to_vec();
            let types = geometry_types(&d.geometry, &ids);
            (d.tilde.clone(), Some(types), Source::D(Box::new(d)))
        }
        "coset" | "kms-sl" | "unipotent-opposition" => {
            let cc = match kind {
                "coset" => {
                    let path = spec.input.as_deref().ok_or_else(|| HdxError::Malformed("`coset` needs --input".into()))?;
                    coset_from_file(Path::new(path), caps)?
                }
                "kms-sl" => {
                    let f = spec.f.clone().ok_or_else(|| HdxError::Malformed("`kms-sl` needs --f".into()))?;
                    let ex = kms_sl_example(need(spec.n, "n", kind)?, need(spec.q, "q", kind)?, &f, caps)?;
                    extra.insert("kms".into(), serde_json::to_value::<&KmsChecks>(&ex.checks)?);
                    ex.coset
                }
                _ => unipotent_opposition(need(spec.n, "n", kind)?, need(spec.q, "q", kind)?, caps)?,
            };
            extra.insert("group_order".into(), json!(cc.group.order()));
            extra.insert("subgroup_orders".into(), json!(cc.subgroups.iter().map(|h| h.order()).collect::<Vec<_>>()));
            let types = cc.complex.vertices().iter().map(|v| cc.types[v]).collect();
            (cc.complex.clone(), Some(types), Source::Coset(Box::new(cc)))
        }
        other => {
            return Err(HdxError::Malformed(format!("unknown kind `{other}`; expected one of {}", KINDS.join(", "))))
        }
    };
    let renumber: HashMap<u32, u32> = complex.vertices().iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
    let normalized = complex.normalized();
    let mut meta = serde_json::Map::new();
    meta.insert("build".into(), serde_json::to_value(spec)?);
    meta.insert("dimension".into(), json!(normalized.dim()));
    meta.insert("counts".into(), json!(normalized.face_counts()[1..].to_vec()));
    meta.insert("pure".into(), json!(normalized.is_pure()));
    if let Some(t) = types {
        meta.insert("types".into(), json!(t));
    }
    meta.extend(extra);
    Ok(Built { spec: spec.clone(), complex: normalized, renumber, source, metadata: Value::Object(meta) })
}

impl Built {
    /// Vertex types by position, when the construction is typed.
    pub fn types(&self) -> Option<HashMap<u32, u32>> {
        let t = self.metadata.get("types")?.as_array()?;
        Some(t.iter().enumerate().map(|(i, v)| (i as u32, v.as_u64().unwrap_or(0) as u32)).collect())
    }
}

/// The structured cone of a construction, in degree k (default n−1), on the
/// renumbered complex: the filtration plan for A and C oppositions, the
/// subdivision transport for D.
/// Facet transitivity read off the construction: for coset complexes the
/// group acts by left translation. None when the construction does not settle it.
pub fn known_facet_transitive(built: &Built) -> Option<bool> {
    match &built.source {
        Source::Coset(cc) => cc.facet_transitivity().ok().filter(|t| *t),
        _ => None,
    }
}

/// A filtration stalls when a stage vertex has a relative link without a
/// cone, which can happen outside the class hypotheses. The whole complex
/// then goes to the solver and the ledger records it.
fn stall_fallback(
    x: &Complex,
    label: &str,
    run: Result<(ConeFunction, FiltrationLedger)>,
    k: i32,
    cap: usize,
) -> Result<(ConeFunction, FiltrationLedger)> {
    match run {
        Err(HdxError::NoCone(why)) => {
            let cone = solve_cone_linear(x, k, x.vertices()[0], cap)?;
            let ledger = FiltrationLedger {
                label: label.into(),
                notes: vec![format!("fallback: filtration stalled ({why}); whole-complex solver used")],
                ..Default::default()
            };
            Ok((cone, ledger))
        }
        other => other,
    }
}

pub fn structured_cone(built: &Built, k: Option<i32>, caps: &Caps) -> Result<(ConeFunction, FiltrationLedger)> {
    let k = k.unwrap_or(built.complex.dim() - 1);
    let cap = caps.linear_entries;
    let (cone, ledger) = match &built.source {
        Source::A { geometry, e } => {
            stall_fallback(geometry.complex(), "A", run_filtration(geometry.complex(), &an_filtration_plan(geometry, e)?, k, cap), k, cap)?
        }
        Source::C { geometry, e } => {
            stall_fallback(geometry.complex(), "C", run_filtration(geometry.complex(), &cn_filtration_plan(geometry, e)?, k, cap), k, cap)?
        }
        Source::D(d) => {
            let t = d.t();
            let base = if t.dim() == 1 && k <= 0 {
                graph_bfs_cone(t, t.vertices()[0])?
            } else {
                solve_cone_linear(t, k, t.vertices()[0], cap)?
            };
            let c = base.max_radius() as u128;
            let moved = subdivision_transport(&base, t, &d.tilde, &d.pairing)?;
            let radii = moved.radius_profile();
            let ledger = FiltrationLedger {
                label: "D".into(),
                checks: vec![BoundCheck { label: "subdivision".into(), bound: vec![2 * c; radii.len()], radii }],
                notes: vec![format!("weak building cone has maximal radius {c}")],
                ..Default::default()
            };
            (moved, ledger)
        }
        _ => {
            return Err(HdxError::Unsupported(format!(
                "no structured cone for `{}`; use the solve method",
                built.spec.kind
            )))
        }
    };
    Ok((cone.relabel(&built.renumber)?, ledger))
}
