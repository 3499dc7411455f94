use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hdx_core::buildings::facet_transitive;
use hdx_core::caps::Caps;
use hdx_core::catalog::{self, BuildSpec, Built};
use hdx_core::chains::{reduced_homology_ranks, CoefficientGroup};
use hdx_core::cones::{
    apex_star_cone, extend_by_vertex_set, extension_bound, graph_bfs_cone, join_bound, join_cone, rad_at,
    relative_link, solve_cone_linear, transport_coefficients, ConeFunction, Verdict,
};
use hdx_core::expansion::{
    cone_bound_check, expansion_degree, expansion_report, local_spectral_profile, second_eigenvalue,
};
use hdx_core::io::{self, ComplexJson};
use hdx_core::simplicial::Complex;
use hdx_core::{HdxError, Result};

/// Cone functions, coset complexes and expansion checks for small simplicial complexes.
///
/// Exit codes: 0 success, 2 bad arguments or input, 3 resource cap or
/// overflow, 4 no cone (or a cone that fails verification), 5 i/o.
#[derive(Parser)]
#[command(name = "hdx", version)]
struct Cli {
    /// Print only JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap overrides such as `group=5000,brute=65536`, applied after HDX_CAPS.
    #[arg(long, global = true)]
    caps: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named complex.
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a cone function.
    Cone(ConeArgs),
    /// Check a cone file against a complex.
    VerifyCone {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        cone: PathBuf,
    },
    /// Spectral, coboundary or cone-bound expansion report.
    Expansion(ExpansionArgs),
    /// Combined report: homology, local spectra, expansion and cone bounds.
    Report {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, default_value_t = 2)]
        coeff: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Default)]
struct SpecArgs {
    /// simplex, octahedron, an-building, an-opposition, cn-building,
    /// cn-opposition, dn-oriflamme, coset, kms-sl, unipotent-opposition
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    dim: Option<usize>,
    /// full, point, hyperplane or none
    #[arg(long)]
    flag: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Polynomial coefficients, low degree first, e.g. 1,1,1.
    #[arg(long, value_delimiter = ',')]
    f: Option<Vec<u32>>,
    /// Group description for `coset`.
    #[arg(long)]
    input: Option<String>,
}

impl SpecArgs {
    fn spec(&self) -> Option<BuildSpec> {
        Some(BuildSpec {
            kind: self.kind.clone()?,
            q: self.q,
            dim: self.dim,
            flag: self.flag.clone(),
            n: self.n,
            f: self.f.clone(),
            input: self.input.clone(),
        })
    }
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Complex JSON file.
    #[arg(long = "in")]
    input_file: Option<PathBuf>,
    #[command(flatten)]
    spec: SpecArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Apex,
    Bfs,
    Join,
    Extend,
    Filtration,
    Solve,
    Transport,
}

#[derive(Args)]
struct ConeArgs {
    #[command(flatten)]
    src: SourceArgs,
    #[arg(long, value_enum)]
    method: Method,
    /// Apex vertex position (default: the smallest that works).
    #[arg(long)]
    apex: Option<u32>,
    /// Cone degree (default: dimension − 1).
    #[arg(long)]
    k: Option<i32>,
    /// Second factor for `join`.
    #[arg(long)]
    with: Option<PathBuf>,
    /// Added vertex set for `extend`.
    #[arg(long, value_delimiter = ',')]
    w: Option<Vec<u32>>,
    /// Coefficient group for `transport`, e.g. Z/2 or Z/2+Z.
    #[arg(long, default_value = "Z")]
    coeff: String,
    /// Integral cone to transport (default: the solver's cone).
    #[arg(long)]
    cone: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Spectral,
    Coboundary,
    Bound,
}

#[derive(Args)]
struct ExpansionArgs {
    #[command(flatten)]
    src: SourceArgs,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    k: i32,
    /// Modulus m of the coefficient group ℤ/m.
    #[arg(long, default_value_t = 2)]
    coeff: u64,
    /// Cone file for `bound` (default: the solver's cone).
    #[arg(long)]
    cone: Option<PathBuf>,
    /// Take facet transitivity as given instead of searching for it.
    #[arg(long)]
    assume_transitive: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

struct Ctx {
    json: bool,
    caps: Caps,
}

struct Loaded {
    complex: Complex,
    built: Option<Built>,
}

fn load(src: &SourceArgs, caps: &Caps) -> Result<Loaded> {
    match (&src.input_file, src.spec.spec()) {
        (Some(_), Some(_)) => Err(HdxError::Malformed("give either --in or --kind, not both".into())),
        (None, None) => Err(HdxError::Malformed("a complex is needed: --in FILE or --kind KIND".into())),
        (None, Some(spec)) => {
            let built = catalog::build(&spec, caps)?;
            Ok(Loaded { complex: built.complex.clone(), built: Some(built) })
        }
        (Some(path), None) => {
            let j: ComplexJson = io::read_json(path)?;
            let complex = io::complex_from_json(&j)?;
            Ok(Loaded { complex, built: None })
        }
    }
}

/// Rebuilds the construction recorded in a file's metadata, checking it matches.
fn recorded_build(src: &SourceArgs, loaded: &Loaded, caps: &Caps) -> Result<Built> {
    if let Some(b) = &loaded.built {
        return Ok(catalog::build(&b.spec, caps)?);
    }
    let path = src.input_file.as_ref().unwrap();
    let j: ComplexJson = io::read_json(path)?;
    let spec: BuildSpec = j
        .metadata
        .as_ref()
        .and_then(|m| m.get("build"))
        .map(|b| serde_json::from_value(b.clone()))
        .transpose()?
        .ok_or_else(|| HdxError::Malformed("the complex file records no construction; use --kind".into()))?;
    let built = catalog::build(&spec, caps)?;
    if built.complex != loaded.complex {
        return Err(HdxError::Domain("the complex differs from its recorded construction".into()));
    }
    Ok(built)
}

fn emit(ctx: &Ctx, summary: &Value, artifact: Option<&Value>, out: Option<&Path>) -> Result<()> {
    match (artifact, out) {
        (Some(a), Some(path)) => io::write_json(path, a)?,
        (Some(a), None) => {
            say!("{}", serde_json::to_string_pretty(a)?);
            return Ok(());
        }
        (None, Some(path)) => io::write_json(path, summary)?,
        (None, None) => {}
    }
    if ctx.json {
        say!("{}", serde_json::to_string_pretty(summary)?);
    } else {
        print_text(summary, "");
    }
    Ok(())
}

fn print_text(v: &Value, prefix: &str) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                match x {
                    Value::Object(_) => print_text(x, &key),
                    _ => say!("{key}: {}", compact(x)),
                }
            }
        }
        other => say!("{}", compact(other)),
    }
}

fn compact(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 200 {
        format!("{}…", &s[..s.char_indices().take_while(|(i, _)| *i < 200).last().map_or(0, |(i, _)| i)])
    } else {
        s
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Ok => json!("ok"),
        Verdict::Violation { simplex, detail } => json!({"violation": simplex, "detail": detail}),
    }
}

fn no_cone_diagnostic(x: &Complex, caps: &Caps, e: HdxError) -> HdxError {
    match e {
        HdxError::NoCone(m) => {
            let diag = match reduced_homology_ranks(x, caps.linear_entries) {
                Ok(h) => h
                    .iter()
                    .filter(|g| !g.is_zero())
                    .map(|g| format!("H~_{} = Z^{} torsion {:?}", g.degree, g.rank, g.torsion))
                    .collect::<Vec<_>>()
                    .join("; "),
                Err(_) => "homology not computed".into(),
            };
            HdxError::NoCone(format!("{m} (reduced homology: {diag})"))
        }
        other => other,
    }
}

fn cmd_build(ctx: &Ctx, spec: &SpecArgs, out: Option<&Path>) -> Result<()> {
    let spec = spec.spec().ok_or_else(|| HdxError::Malformed("build needs --kind".into()))?;
    let built = catalog::build(&spec, &ctx.caps)?;
    let artifact = serde_json::to_value(io::complex_to_json(&built.complex, Some(built.metadata.clone())))?;
    emit(ctx, &built.metadata, Some(&artifact).filter(|_| out.is_some()).or(Some(&artifact)), out)
}

fn smallest_apex(x: &Complex) -> Option<u32> {
    x.vertices().iter().copied().find(|v| x.facets().iter().all(|f| f.binary_search(v).is_ok()))
}

fn cmd_cone(ctx: &Ctx, a: &ConeArgs) -> Result<()> {
    let loaded = load(&a.src, &ctx.caps)?;
    let mut x = loaded.complex.clone();
    let k = a.k.unwrap_or(x.dim() - 1);
    let cap = ctx.caps.linear_entries;
    let mut summary = serde_json::Map::new();
    summary.insert("method".into(), json!(format!("{:?}", a.method as u8)));
    let mut group = CoefficientGroup::integers();
    let cone: ConeFunction = match a.method {
        Method::Apex => {
            let v = match a.apex {
                Some(v) => v,
                None => smallest_apex(&x).ok_or_else(|| HdxError::NoCone("no vertex lies in every facet".into()))?,
            };
            let c = apex_star_cone(&x, v, k)?;
            summary.insert("bound".into(), json!(vec![1; (k + 2).max(0) as usize]));
            c
        }
        Method::Bfs => {
            let g = if x.dim() > 1 { x.skeleton(1)? } else { x.clone() };
            let c = graph_bfs_cone(&g, a.apex.unwrap_or(0))?;
            x = g;
            c
        }
        Method::Solve => solve_cone_linear(&x, k, a.apex.unwrap_or(0), cap).map_err(|e| no_cone_diagnostic(&x, &ctx.caps, e))?,
        Method::Join => {
            let other = io::read_complex(a.with.as_ref().ok_or_else(|| HdxError::Malformed("join needs --with".into()))?)?;
            let j = x.join(&other);
            let lv: Vec<u32> = x.vertices().to_vec();
            let rv: Vec<u32> = j.vertices().iter().copied().filter(|v| x.vertex_index(*v).is_none()).collect();
            let l = j.full_subcomplex(&lv)?;
            let r = j.full_subcomplex(&rv)?;
            let c1 = solve_cone_linear(&l, l.dim() - 1, lv[0], cap).map_err(|e| no_cone_diagnostic(&l, &ctx.caps, e))?;
            let c2 = solve_cone_linear(&r, r.dim() - 1, rv[0], cap).map_err(|e| no_cone_diagnostic(&r, &ctx.caps, e))?;
            let kk = a.k.unwrap_or(j.dim() - 1);
            let c = join_cone(&l, &c1, &r, &c2, kk)?;
            let (r1, r2) = (c1.radius_profile(), c2.radius_profile());
            summary.insert(
                "bound".into(),
                json!((-1..=kk).map(|i| if i < 0 { 1 } else { join_bound(&r1, l.dim(), &r2, i) }).collect::<Vec<_>>()),
            );
            x = j;
            c
        }
        Method::Extend => {
            let w = a.w.clone().ok_or_else(|| HdxError::Malformed("extend needs --w".into()))?;
            let wset: HashSet<u32> = w.iter().copied().collect();
            let base: Vec<u32> = x.vertices().iter().copied().filter(|v| !wset.contains(v)).collect();
            let sub = x.full_subcomplex(&base)?;
            let apex = a.apex.filter(|v| !wset.contains(v)).unwrap_or(base[0]);
            let base_cone = solve_cone_linear(&sub, k, apex, cap).map_err(|e| no_cone_diagnostic(&sub, &ctx.caps, e))?;
            let covered: HashSet<u32> = base.iter().copied().collect();
            let mut links = HashMap::new();
            let mut link_radii = Vec::new();
            for &v in &w {
                let rel = relative_link(&x, v, &covered)?;
                if rel.num_vertices() == 0 {
                    return Err(HdxError::Domain(format!("vertex {v} has an empty link in the base")));
                }
                let lc = solve_cone_linear(&rel, k - 1, rel.vertices()[0], cap)
                    .map_err(|e| no_cone_diagnostic(&rel, &ctx.caps, e))?;
                link_radii.push(lc.radius_profile());
                links.insert(v, lc);
            }
            let c = extend_by_vertex_set(&x, &base, &base_cone, &w, &links)?;
            let br = base_cone.radius_profile();
            summary.insert(
                "bound".into(),
                json!((-1..=k).map(|j| extension_bound(&br, &link_radii, j)).collect::<Vec<_>>()),
            );
            c
        }
        Method::Filtration => {
            let built = recorded_build(&a.src, &loaded, &ctx.caps)?;
            let (c, ledger) =
                catalog::structured_cone(&built, a.k, &ctx.caps).map_err(|e| no_cone_diagnostic(&x, &ctx.caps, e))?;
            summary.insert("violations".into(), json!(ledger.violations()));
            summary.insert("fallbacks".into(), json!(ledger.fallbacks()));
            summary.insert("ledger".into(), serde_json::to_value(&ledger)?);
            c
        }
        Method::Transport => {
            group = CoefficientGroup::parse(&a.coeff)?;
            let base = match &a.cone {
                Some(p) => {
                    let (c, g) = io::cone_from_json(&io::read_json(p)?)?;
                    if g != CoefficientGroup::integers() {
                        return Err(HdxError::Domain("transport starts from an integral cone".into()));
                    }
                    c
                }
                None => solve_cone_linear(&x, k, a.apex.unwrap_or(0), cap).map_err(|e| no_cone_diagnostic(&x, &ctx.caps, e))?,
            };
            let gc = transport_coefficients(&base, &group);
            summary.insert("integral_radii".into(), json!(base.radius_profile()));
            summary.insert("group_radii".into(), json!(gc.radius_profile()));
            summary.insert("support_contained".into(), json!(gc.support_contained()));
            let v = gc.verify(&x);
            if let Verdict::Violation { simplex, detail } = &v {
                return Err(HdxError::NoCone(format!("transported cone fails at {simplex:?}: {detail}")));
            }
            base
        }
    };
    summary.insert("method".into(), json!(method_name(a.method)));
    let verdict = cone.verify(&x);
    summary.insert("verdict".into(), verdict_json(&verdict));
    summary.insert("apex".into(), json!(cone.apex()));
    summary.insert("k".into(), json!(cone.degree()));
    summary.insert("radii".into(), json!(cone.radius_profile()));
    if let Verdict::Violation { simplex, detail } = verdict {
        return Err(HdxError::NoCone(format!("constructed cone fails at {simplex:?}: {detail}")));
    }
    let artifact = serde_json::to_value(io::cone_to_json(&cone, &group))?;
    match &a.out {
        Some(p) => emit(ctx, &Value::Object(summary), Some(&artifact), Some(p)),
        None => {
            summary.insert("cone".into(), artifact);
            emit(ctx, &Value::Object(summary), None, None)
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Apex => "apex",
        Method::Bfs => "bfs",
        Method::Join => "join",
        Method::Extend => "extend",
        Method::Filtration => "filtration",
        Method::Solve => "solve",
        Method::Transport => "transport",
    }
}

fn cmd_verify(ctx: &Ctx, src: &SourceArgs, cone: &Path) -> Result<()> {
    let x = load(src, &ctx.caps)?.complex;
    let (c, group) = io::cone_from_json(&io::read_json(cone)?)?;
    let mut summary = serde_json::Map::new();
    let verdict = if group == CoefficientGroup::integers() {
        summary.insert("radii".into(), json!(c.radius_profile()));
        c.verify(&x)
    } else {
        let gc = transport_coefficients(&c, &group);
        summary.insert("radii".into(), json!(gc.radius_profile()));
        summary.insert("support_contained".into(), json!(gc.support_contained()));
        gc.verify(&x)
    };
    summary.insert("coeff".into(), json!(group.descriptor()));
    summary.insert("verdict".into(), verdict_json(&verdict));
    emit(ctx, &Value::Object(summary), None, None)?;
    match verdict {
        Verdict::Ok => Ok(()),
        Verdict::Violation { simplex, .. } => Err(HdxError::NoCone(format!("cone equation fails at {simplex:?}"))),
    }
}

/// Facet transitivity from the construction when possible, else by search.
/// None when the search runs out of budget.
/// A k-cone for the bound check: BFS on the 1-skeleton in degree 0, the solver above.
fn bound_cone(x: &Complex, k: i32, caps: &Caps) -> Result<ConeFunction> {
    let apex = x.vertices().first().copied().ok_or_else(|| HdxError::NoCone("the empty complex has no cone".into()))?;
    if k == 0 {
        graph_bfs_cone(&x.skeleton(1)?, apex)
    } else {
        solve_cone_linear(x, k, apex, caps.linear_entries)
    }
}

fn transitivity(x: &Complex, built: Option<&Built>, caps: &Caps) -> Option<bool> {
    if let Some(t) = built.and_then(catalog::known_facet_transitive) {
        return Some(t);
    }
    facet_transitive(x, caps.isomorphism_nodes).ok()
}

/// The construction behind a loaded complex, if it can be recovered.
fn construction(src: &SourceArgs, loaded: Loaded, caps: &Caps) -> (Complex, Option<Built>) {
    if loaded.built.is_some() {
        return (loaded.complex, loaded.built);
    }
    let built = recorded_build(src, &loaded, caps).ok();
    (loaded.complex, built)
}

fn cmd_expansion(ctx: &Ctx, a: &ExpansionArgs) -> Result<()> {
    let (x, built) = construction(&a.src, load(&a.src, &ctx.caps)?, &ctx.caps);
    let report: Value = match a.mode {
        Mode::Spectral => {
            let r = local_spectral_profile(&x)?;
            let mut v = serde_json::to_value(&r)?;
            if x.is_connected()? {
                v["second_eigenvalue"] = serde_json::to_value(second_eigenvalue(&x)?)?;
            }
            v
        }
        Mode::Coboundary => serde_json::to_value(expansion_degree(&x, a.k, a.coeff, ctx.caps.brute_force_configs)?)?,
        Mode::Bound => {
            let cone = match &a.cone {
                Some(p) => io::cone_from_json(&io::read_json(p)?)?.0,
                None => bound_cone(&x, a.k, &ctx.caps).map_err(|e| no_cone_diagnostic(&x, &ctx.caps, e))?,
            };
            if let Verdict::Violation { simplex, .. } = cone.verify(&x) {
                return Err(HdxError::NoCone(format!("cone equation fails at {simplex:?}")));
            }
            let radius = rad_at(&cone.radius_profile(), a.k) as u64;
            let transitive = if a.assume_transitive { Some(true) } else { transitivity(&x, built.as_ref(), &ctx.caps) };
            let measured = match expansion_degree(&x, a.k, a.coeff, ctx.caps.brute_force_configs) {
                Ok(d) => d.coboundary.map(|v| v.value),
                Err(HdxError::Resource(_)) => None,
                Err(e) => return Err(e),
            };
            serde_json::to_value(cone_bound_check(&x, radius, a.k, transitive, measured)?)?
        }
    };
    emit(ctx, &report, None, a.out.as_deref())
}

fn cmd_report(ctx: &Ctx, src: &SourceArgs, coeff: u64, out: Option<&Path>) -> Result<()> {
    let (x, built) = construction(src, load(src, &ctx.caps)?, &ctx.caps);
    let x = &x;
    let mut r = serde_json::Map::new();
    r.insert("counts".into(), json!(x.face_counts()[1..].to_vec()));
    r.insert("dimension".into(), json!(x.dim()));
    r.insert("pure".into(), json!(x.is_pure()));
    r.insert("connected".into(), json!(x.num_vertices() > 0 && x.is_connected()?));
    match reduced_homology_ranks(x, ctx.caps.linear_entries) {
        Ok(h) => r.insert("reduced_homology".into(), serde_json::to_value(h)?),
        Err(e) => r.insert("reduced_homology".into(), json!(format!("skipped: {e}"))),
    };
    let spectral = if x.is_pure() && x.dim() >= 1 { Some(local_spectral_profile(x)?) } else { None };
    if let Some(s) = &spectral {
        r.insert("lambda".into(), json!(s.lambda));
        r.insert("spectral_verdict".into(), json!(s.verdict));
    }
    match expansion_report(x, coeff, ctx.caps.brute_force_configs) {
        Ok(e) => r.insert("expansion".into(), serde_json::to_value(e)?),
        Err(e) => r.insert("expansion".into(), json!(format!("skipped: {e}"))),
    };
    let transitive = transitivity(x, built.as_ref(), &ctx.caps);
    r.insert("facet_transitive".into(), json!(transitive));
    let mut bounds = Vec::new();
    for k in 0..x.dim() {
        let entry = match bound_cone(x, k, &ctx.caps) {
            Ok(c) => {
                let radius = rad_at(&c.radius_profile(), k) as u64;
                let measured = expansion_degree(x, k, coeff, ctx.caps.brute_force_configs)
                    .ok()
                    .and_then(|d| d.coboundary.map(|v| v.value));
                serde_json::to_value(cone_bound_check(x, radius, k, transitive, measured)?)?
            }
            Err(e) => json!(format!("no cone in degree {k}: {e}")),
        };
        bounds.push(entry);
    }
    r.insert("cone_bounds".into(), json!(bounds));
    let mut link_h = Vec::new();
    if x.dim() >= 2 {
        for v in x.vertices() {
            let lk = x.link(&[*v])?;
            let h = (0..lk.dim())
                .map(|k| {
                    expansion_degree(&lk, k, coeff, ctx.caps.brute_force_configs)
                        .ok()
                        .and_then(|d| d.coboundary.map(|v| hdx_core::expansion::format_rational(&v.value)))
                })
                .collect::<Vec<_>>();
            link_h.push(json!({"vertex": v, "coboundary": h}));
        }
    }
    r.insert(
        "local_to_global".into(),
        json!({
            "hypotheses": {
                "lambda": spectral.as_ref().and_then(|s| s.lambda),
                "vertex_link_coboundary_constants": link_h,
            },
            "conclusion": "if λ is small enough and every proper link is an ε-coboundary expander, the (n−1)-skeleton is an (ε′, μ)-cosystolic expander; ε′ and μ are not computed",
        }),
    );
    emit(ctx, &Value::Object(r), None, out)
}

fn run(cli: Cli) -> Result<()> {
    let mut caps = Caps::from_env()?;
    if let Some(s) = &cli.caps {
        caps = caps.parse_overrides(s)?;
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(HdxError::Malformed("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| HdxError::Malformed(e.to_string()))?;
    }
    let ctx = Ctx { json: cli.json, caps };
    match &cli.command {
        Command::Build { spec, out } => cmd_build(&ctx, spec, out.as_deref()),
        Command::Cone(a) => cmd_cone(&ctx, a),
        Command::VerifyCone { src, cone } => cmd_verify(&ctx, src, cone),
        Command::Expansion(a) => cmd_expansion(&ctx, a),
        Command::Report { src, coeff, out } => cmd_report(&ctx, src, *coeff, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hdx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
