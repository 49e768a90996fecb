use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use efftc_core::algebra::{FieldSpec, Scalar};
use efftc_core::complex::SimplicialComplex;
use efftc_core::cuplength::{
    effective_tc_lower_bound, equality_certificate, tc_lower_bound, GradedRing,
};
use efftc_core::gaction::{
    daleth_complex, fixed_subcomplex, fixed_subcomplex_of, orbit_complex, regularize,
    SimplicialAction, Subcomplex,
};
use efftc_core::io::{read_action_file, read_complex_file, serialize_complex};
use efftc_core::sphereplan::{
    extend_plan, merge_free, planner_classical_sphere, planner_free_involution,
    planner_orientation_reversing, planner_reflection, product_combine, render_plan,
    transport_planner, HomotopyHandle, MapHandle, OrthoAction, PlannerSuite, SpherePoint,
};
use efftc_core::verify::{table_check, verify_product_suite, verify_suite, TABLE_SCENARIOS};
use nalgebra::DMatrix;

/// Lower bounds and sampled certificates for the topological complexity of
/// motion planning, on finite simplicial complexes and on round spheres.
#[derive(Parser)]
#[command(
    name = "efftc",
    version,
    about = "Topological complexity bounds and sampled motion planner certificates",
    long_about = "Computes cohomological lower bounds for the topological complexity of \
finite simplicial complexes, effective variants for finite group actions via the orbit \
complex, and constructs explicit motion planners on spheres whose charts, leaps, and \
continuity are checked by deterministic sampling.\n\nInputs are plain-text complex and \
action files; named inputs resolve against EFFTC_DATA_DIR and the built-in catalogue. \
Exit code 0 means success (and a passing verification where one runs), 1 means a \
verification failed, 2 means the input violated a precondition."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Clone)]
struct RunConfig {
    /// Sampled queries for verification subcommands
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    /// Seed of the deterministic sample stream
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Also write the report to this file, byte-identical per config and seed
    #[arg(long)]
    out: Option<PathBuf>,

    /// Directory receiving sampled polyline dumps of example plans
    #[arg(long)]
    dump_plans: Option<PathBuf>,

    /// Points per segment in polyline dumps
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(2..))]
    resolution: u64,
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(rest) = s.strip_prefix("fp") {
        let p: u64 = rest
            .parse()
            .map_err(|_| format!("bad field `{s}`: expected q or fp<prime>"))?;
        return FieldSpec::prime(p).map_err(|e| e.to_string());
    }
    Err(format!("bad field `{s}`: expected q or fp<prime>"))
}

#[derive(Subcommand)]
enum Command {
    /// Lower bound TC(X) >= nilpotency of the zero-divisor ideal + 1
    ///
    /// Computes the cohomology ring of the complex over the chosen field,
    /// takes the kernel of the cup product map H* (x) H* -> H*, and reports
    /// the longest nonvanishing product of kernel elements plus one,
    /// together with an explicit witness product.
    TcBound {
        /// Complex file or catalogue name
        #[arg(long)]
        complex: String,
        /// Coefficient field: q or fp<prime>
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Effective lower bound from the orbit complex of a group action
    ///
    /// Regularizes the action by barycentric subdivision, forms the orbit
    /// complex, and applies the zero-divisor bound to its cohomology. The
    /// field characteristic must not divide the group order.
    EtcBound {
        /// Action file or catalogue name
        #[arg(long)]
        action: String,
        /// Optional complex the action is expected to act on, as a cross-check
        #[arg(long)]
        complex: Option<String>,
        /// Coefficient field: q or fp<prime>
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Betti numbers of a complex over a chosen field
    Betti {
        /// Complex file or catalogue name
        #[arg(long)]
        complex: String,
        /// Coefficient field: q or fp<prime>
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Cohomology ring: basis per degree and all nonzero products
    Ring {
        /// Complex file or catalogue name
        #[arg(long)]
        complex: String,
        /// Coefficient field: q or fp<prime>
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Regularize an action and report its orbit complex
    Quotient {
        /// Action file or catalogue name
        #[arg(long)]
        action: String,
        /// Coefficient field for the reported Betti numbers
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        /// Write the orbit complex as a parseable complex file
        #[arg(long)]
        emit_complex: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Saturated diagonal of an action: one glued sheet per group element
    Daleth {
        /// Action file or catalogue name
        #[arg(long)]
        action: String,
        /// Coefficient field for the reported Betti numbers
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        /// Write the glued complex as a parseable complex file
        #[arg(long)]
        emit_complex: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Fixed subcomplex of one group element, or of the whole group
    Fixed {
        /// Action file or catalogue name
        #[arg(long)]
        action: String,
        /// Group element name; omitted means the whole-group fixed set
        #[arg(long)]
        element: Option<String>,
        /// Coefficient field for the reported Betti numbers
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        /// Write the fixed subcomplex as a parseable complex file
        #[arg(long)]
        emit_complex: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Certify that effective and ordinary topological complexity agree
    ///
    /// Checks that the action is trivial on cohomology and that the
    /// zero-divisor bound already reaches the claimed value, which pins
    /// both invariants to it. Exit 0 only when certified.
    CertifyEquality {
        /// Action file or catalogue name
        #[arg(long)]
        action: String,
        /// Coefficient field: q or fp<prime>
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: FieldSpec,
        /// Claimed common value of the two invariants
        #[arg(long)]
        tc: usize,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Build a sphere motion planner and verify it on sampled queries
    ///
    /// Checks chart coverage, endpoint agreement, orbit alignment of the
    /// leaps at tolerance 1e-9, and a sampled continuity statistic. Exit 0
    /// when every sampled query passes.
    VerifyPlanner {
        /// Which planner family to construct
        #[arg(long, value_enum)]
        construction: Construction,
        /// Sphere dimension n
        #[arg(long)]
        n: usize,
        /// Negated-block parameter for the orrev construction: even, 2..=n-2
        #[arg(long)]
        rtilde: Option<usize>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Combine two planners into one for the product of their spheres
    ///
    /// The combined suite has m + n - 1 charts selected by products of the
    /// factor margins; verification samples pairs in the product.
    Combine {
        /// Planner family of the left factor
        #[arg(long, value_enum)]
        left: Construction,
        /// Sphere dimension of the left factor
        #[arg(long)]
        left_n: usize,
        /// Negated-block parameter when the left factor is orrev
        #[arg(long)]
        left_rtilde: Option<usize>,
        /// Planner family of the right factor
        #[arg(long, value_enum)]
        right: Construction,
        /// Sphere dimension of the right factor
        #[arg(long)]
        right_n: usize,
        /// Negated-block parameter when the right factor is orrev
        #[arg(long)]
        right_rtilde: Option<usize>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Transport a planner along a rotation and verify the result
    ///
    /// Conjugates every chart by the rotation of the first coordinate
    /// plane; the margin and section are pulled back, each segment is
    /// wrapped in the conjugating homotopy, and the transported suite is
    /// then verified by sampling.
    Transport {
        /// Which planner family to construct before transporting
        #[arg(long, value_enum, default_value_t = Construction::Classical)]
        construction: Construction,
        /// Sphere dimension n
        #[arg(long)]
        n: usize,
        /// Negated-block parameter for the orrev construction
        #[arg(long)]
        rtilde: Option<usize>,
        /// Rotation angle in degrees in the first coordinate plane
        #[arg(long, default_value_t = 60.0)]
        angle_degrees: f64,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Extend the free-involution planner by one leap, merge it back, verify
    ///
    /// For the antipodal action on S^n: the two-chart planner is extended
    /// to three segments, the final leap is composed away again, and the
    /// merged two-segment suite is verified by sampling. Exit 0 when it
    /// passes.
    MergeFree {
        /// Sphere dimension n
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Pin one row of the sphere table between matching bounds
    ///
    /// Builds the row's planner for the upper bound, computes or cites the
    /// lower bound, and checks that the interval pins the tabulated value
    /// while the planner passes sampled verification. Cited constants are
    /// marked "cited, not computed". Use --scenario all for every row.
    TableCheck {
        /// Scenario name, or `all`
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        run: RunConfig,
    },
}

/// Planner families available to the planner subcommands.
#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Construction {
    /// Geodesic planner on S^n without a group action, 2 or 3 charts
    Classical,
    /// One-chart pole-crossing planner for the equatorial reflection, k = 3
    Reflection,
    /// Two-chart planner for an orientation-reversing involution, k = 2
    Orrev,
    /// Two-chart planner for the free antipodal involution, k = 2
    Free,
}

impl Construction {
    fn label(self) -> &'static str {
        match self {
            Construction::Classical => "classical",
            Construction::Reflection => "reflection",
            Construction::Orrev => "orrev",
            Construction::Free => "free",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn resolve_input(name: &str, ext: &str) -> Result<PathBuf> {
    let direct = Path::new(name);
    if direct.is_file() {
        return Ok(direct.to_path_buf());
    }
    let file = format!("{name}.{ext}");
    let mut tried = vec![format!("`{name}`")];
    if let Ok(dir) = std::env::var("EFFTC_DATA_DIR") {
        let candidate = Path::new(&dir).join(&file);
        if candidate.is_file() {
            return Ok(candidate);
        }
        tried.push(format!("`{}`", candidate.display()));
    }
    let builtin = Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(&file);
    if builtin.is_file() {
        return Ok(builtin);
    }
    tried.push(format!("`{}`", builtin.display()));
    bail!("no {ext} input named `{name}`; tried {}", tried.join(", "))
}

fn load_complex(name: &str) -> Result<SimplicialComplex> {
    let path = resolve_input(name, "complex")?;
    read_complex_file(&path).with_context(|| format!("cannot load complex `{name}`"))
}

fn load_action(name: &str) -> Result<SimplicialAction> {
    let path = resolve_input(name, "action")?;
    read_action_file(&path).with_context(|| format!("cannot load action `{name}`"))
}

fn emit(report: &str, out: Option<&Path>) -> Result<()> {
    print!("{report}");
    if let Some(path) = out {
        fs::write(path, report)
            .with_context(|| format!("cannot write report to `{}`", path.display()))?;
    }
    Ok(())
}

fn build_suite(
    construction: Construction,
    n: usize,
    rtilde: Option<usize>,
) -> Result<PlannerSuite> {
    if construction != Construction::Orrev {
        if let Some(r) = rtilde {
            bail!("--rtilde {r} only applies to the orrev construction");
        }
    }
    match construction {
        Construction::Classical => {
            if n == 0 {
                bail!("the classical planner needs sphere dimension n >= 1");
            }
            Ok(planner_classical_sphere(n))
        }
        Construction::Reflection => {
            if n == 0 {
                bail!("the reflection planner needs sphere dimension n >= 1");
            }
            Ok(planner_reflection(n))
        }
        Construction::Orrev => {
            let r = rtilde
                .ok_or_else(|| anyhow!("orrev needs --rtilde: even, between 2 and n - 2"))?;
            planner_orientation_reversing(n, r).map_err(|e| anyhow!("{e}"))
        }
        Construction::Free => {
            if n == 0 {
                bail!("the free-involution planner needs sphere dimension n >= 1");
            }
            planner_free_involution(n, OrthoAction::antipodal(n)).map_err(|e| anyhow!("{e}"))
        }
    }
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn probe_point(state: &mut u64, dim: usize) -> SpherePoint {
    loop {
        let coords: Vec<f64> = (0..dim)
            .map(|_| splitmix(state) as f64 / u64::MAX as f64 * 2.0 - 1.0)
            .collect();
        if let Ok(p) = SpherePoint::new(coords) {
            return p;
        }
    }
}

fn dump_plans(dir: &Path, suite: &PlannerSuite, seed: u64, resolution: usize) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create dump directory `{}`", dir.display()))?;
    let dim = suite.action.ambient_dim();
    let mut state = seed;
    for i in 0..3 {
        let x = probe_point(&mut state, dim);
        let y = probe_point(&mut state, dim);
        let Some((sel, plan)) = suite.plan(&x, &y) else { continue };
        let mut text = String::new();
        let _ = writeln!(text, "query: {i}");
        let _ = writeln!(text, "from: {}", x.render());
        let _ = writeln!(text, "to: {}", y.render());
        let _ = writeln!(text, "chart: {} ({})", sel.chart, suite.charts[sel.chart].label);
        text.push_str(&render_plan(&plan, suite.action.group(), resolution));
        let path = dir.join(format!("plan-{i:03}.txt"));
        fs::write(&path, text)
            .with_context(|| format!("cannot write plan dump `{}`", path.display()))?;
    }
    Ok(())
}

fn render_combination(ring: &GradedRing, d: usize, coords: &[Scalar]) -> Option<String> {
    let f = ring.field();
    let mut parts = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        if c.is_one() {
            parts.push(ring.label(d, i).to_string());
        } else {
            parts.push(format!("{}*{}", c.render(), ring.label(d, i)));
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join(" + "))
    }
}

fn render_ring(ring: &GradedRing) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "top_degree: {}", ring.top_degree());
    for d in 0..=ring.top_degree() {
        let labels: Vec<&str> = (0..ring.dim(d)).map(|i| ring.label(d, i)).collect();
        if labels.is_empty() {
            let _ = writeln!(out, "H^{d}: dimension 0");
        } else {
            let _ = writeln!(out, "H^{d}: dimension {} basis {}", ring.dim(d), labels.join(" "));
        }
    }
    let _ = writeln!(out, "products of positive-degree basis classes:");
    let mut any = false;
    for d1 in 1..=ring.top_degree() {
        for d2 in d1..=ring.top_degree() {
            if d1 + d2 > ring.top_degree() {
                continue;
            }
            for i in 0..ring.dim(d1) {
                for j in 0..ring.dim(d2) {
                    if let Some(r) = render_combination(ring, d1 + d2, &ring.product(d1, i, d2, j))
                    {
                        any = true;
                        let _ = writeln!(
                            out,
                            "  {} * {} = {}",
                            ring.label(d1, i),
                            ring.label(d2, j),
                            r
                        );
                    }
                }
            }
        }
    }
    if !any {
        let _ = writeln!(out, "  all zero");
    }
    let _ = writeln!(out, "remaining products follow by graded commutativity");
    out
}

fn complex_summary(c: &SimplicialComplex, field: FieldSpec) -> String {
    let mut out = String::new();
    let counts: Vec<String> = (0..=c.dim()).map(|d| c.simplex_count(d).to_string()).collect();
    let betti: Vec<String> = c.betti_numbers(field).iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "dimension: {}", c.dim());
    let _ = writeln!(out, "simplices: {}", counts.join(" "));
    let _ = writeln!(out, "euler_characteristic: {}", c.euler_characteristic());
    let _ = writeln!(out, "field: {field}");
    let _ = writeln!(out, "betti: {}", betti.join(" "));
    out
}

fn emit_complex_file(path: Option<&Path>, c: &SimplicialComplex) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, serialize_complex(c))
            .with_context(|| format!("cannot write complex to `{}`", path.display()))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::TcBound { complex, field, run } => {
            let c = load_complex(&complex)?;
            let report = tc_lower_bound(&c, field).map_err(|e| anyhow!("{e}"))?;
            let mut text = String::new();
            let _ = writeln!(text, "command: tc-bound");
            let _ = writeln!(text, "complex: {complex}");
            text.push_str(&report.render());
            emit(&text, run.out.as_deref())?;
            Ok(0)
        }
        Command::EtcBound { action, complex, field, run } => {
            let a = load_action(&action)?;
            if let Some(cname) = &complex {
                let c = load_complex(cname)?;
                if serialize_complex(a.complex()) != serialize_complex(&c) {
                    bail!("action `{action}` acts on a different complex than `{cname}`");
                }
            }
            let report = effective_tc_lower_bound(&a, field).map_err(|e| anyhow!("{e}"))?;
            let mut text = String::new();
            let _ = writeln!(text, "command: etc-bound");
            let _ = writeln!(text, "action: {action}");
            text.push_str(&report.render());
            emit(&text, run.out.as_deref())?;
            Ok(0)
        }
        Command::Betti { complex, field, run } => {
            let c = load_complex(&complex)?;
            let mut text = String::new();
            let _ = writeln!(text, "command: betti");
            let _ = writeln!(text, "complex: {complex}");
            text.push_str(&complex_summary(&c, field));
            emit(&text, run.out.as_deref())?;
            Ok(0)
        }
        Command::Ring { complex, field, run } => {
            let c = load_complex(&complex)?;
            let ring = c.cohomology_ring(field).ring;
            let mut text = String::new();
            let _ = writeln!(text, "command: ring");
            let _ = writeln!(text, "complex: {complex}");
            let _ = writeln!(text, "field: {field}");
            text.push_str(&render_ring(&ring));
            emit(&text, run.out.as_deref())?;
            Ok(0)
        }
        Command::Quotient { action, field, emit_complex, run } => {
            let a = load_action(&action)?;
            let reg = regularize(&a).map_err(|e| anyhow!("{e}"))?;
            let orbit = orbit_complex(&reg.action).map_err(|e| anyhow!("{e}"))?;
            let mut text = String::new();
            let _ = writeln!(text, "command: quotient");
            let _ = writeln!(text, "action: {action}");
            let _ = writeln!(text, "subdivisions: {}", reg.subdivisions);
            text.push_str(&complex_summary(&orbit.complex, field));
            emit(&text, run.out.as_deref())?;
            emit_complex_file(emit_complex.as_deref(), &orbit.complex)?;
            Ok(0)
        }
        Command::Daleth { action, field, emit_complex, run } => {
            let a = load_action(&action)?;
            let daleth = daleth_complex(&a);
            let mut text = String::new();
            let _ = writeln!(text, "command: daleth");
            let _ = writeln!(text, "action: {action}");
            let _ = writeln!(text, "sheets: {}", a.group().order());
            text.push_str(&complex_summary(&daleth.complex, field));
            emit(&text, run.out.as_deref())?;
            emit_complex_file(emit_complex.as_deref(), &daleth.complex)?;
            Ok(0)
        }
        Command::Fixed { action, element, field, emit_complex, run } => {
            let a = load_action(&action)?;
            let (scope, sub): (String, Option<Subcomplex>) = match &element {
                Some(name) => {
                    let g = (0..a.group().order())
                        .find(|&g| a.group().name(g) == name)
                        .ok_or_else(|| {
                            let names: Vec<&str> =
                                (0..a.group().order()).map(|g| a.group().name(g)).collect();
                            anyhow!(
                                "unknown group element `{name}`; this group has {}",
                                names.join(", ")
                            )
                        })?;
                    (format!("element {name}"), fixed_subcomplex_of(&a, g))
                }
                None => ("whole group".to_string(), fixed_subcomplex(&a)),
            };
            let mut text = String::new();
            let _ = writeln!(text, "command: fixed");
            let _ = writeln!(text, "action: {action}");
            let _ = writeln!(text, "scope: {scope}");
            match &sub {
                Some(sub) => {
                    let verts: Vec<&str> =
                        sub.inclusion.iter().map(|&v| a.complex().label(v)).collect();
                    let _ = writeln!(text, "fixed_vertices: {}", verts.join(" "));
                    text.push_str(&complex_summary(&sub.complex, field));
                }
                None => {
                    let _ = writeln!(text, "fixed_vertices: none");
                }
            }
            emit(&text, run.out.as_deref())?;
            if let Some(sub) = &sub {
                emit_complex_file(emit_complex.as_deref(), &sub.complex)?;
            } else if emit_complex.is_some() {
                bail!("the fixed set is empty, no complex to emit");
            }
            Ok(0)
        }
        Command::CertifyEquality { action, field, tc, run } => {
            let a = load_action(&action)?;
            let cert = equality_certificate(&a, field, tc).map_err(|e| anyhow!("{e}"))?;
            let mut text = String::new();
            let _ = writeln!(text, "command: certify-equality");
            let _ = writeln!(text, "action: {action}");
            text.push_str(&cert.render());
            emit(&text, run.out.as_deref())?;
            Ok(if cert.certified { 0 } else { 1 })
        }
        Command::VerifyPlanner { construction, n, rtilde, run } => {
            let suite = build_suite(construction, n, rtilde)?;
            let report = verify_suite(&suite, run.samples as usize, run.seed);
            let mut text = String::new();
            let _ = writeln!(text, "command: verify-planner");
            let _ = writeln!(text, "construction: {}", construction.label());
            let _ = writeln!(text, "n: {n}");
            if let Some(r) = rtilde {
                let _ = writeln!(text, "rtilde: {r}");
            }
            text.push_str(&report.render());
            emit(&text, run.out.as_deref())?;
            if let Some(dir) = &run.dump_plans {
                dump_plans(dir, &suite, run.seed, run.resolution as usize)?;
            }
            Ok(if report.pass() { 0 } else { 1 })
        }
        Command::Combine {
            left,
            left_n,
            left_rtilde,
            right,
            right_n,
            right_rtilde,
            run,
        } => {
            let l = build_suite(left, left_n, left_rtilde)?;
            let r = build_suite(right, right_n, right_rtilde)?;
            let product = product_combine(&l, &r);
            let report = verify_product_suite(&product, run.samples as usize, run.seed);
            let mut text = String::new();
            let _ = writeln!(text, "command: combine");
            let _ = writeln!(text, "left: {} n={left_n}", left.label());
            let _ = writeln!(text, "right: {} n={right_n}", right.label());
            let _ = writeln!(text, "charts: {}", product.chart_count());
            let _ = writeln!(text, "k: {}", product.k);
            text.push_str(&report.render());
            emit(&text, run.out.as_deref())?;
            Ok(if report.pass() { 0 } else { 1 })
        }
        Command::Transport { construction, n, rtilde, angle_degrees, run } => {
            let suite = build_suite(construction, n, rtilde)?;
            let dim = suite.action.ambient_dim();
            let theta = angle_degrees.to_radians();
            let mut rot = DMatrix::identity(dim, dim);
            rot[(0, 0)] = theta.cos();
            rot[(0, 1)] = -theta.sin();
            rot[(1, 0)] = theta.sin();
            rot[(1, 1)] = theta.cos();
            let f = MapHandle::from_matrix("rotate", rot.clone());
            let g = MapHandle::from_matrix("unrotate", rot.transpose());
            let transported = transport_planner(
                &suite,
                suite.action.clone(),
                f,
                g,
                HomotopyHandle::stationary(),
            )
            .map_err(|e| anyhow!("{e}"))?;
            let report = verify_suite(&transported, run.samples as usize, run.seed);
            let mut text = String::new();
            let _ = writeln!(text, "command: transport");
            let _ = writeln!(text, "construction: {}", construction.label());
            let _ = writeln!(text, "n: {n}");
            let _ = writeln!(text, "angle_degrees: {angle_degrees}");
            text.push_str(&report.render());
            emit(&text, run.out.as_deref())?;
            if let Some(dir) = &run.dump_plans {
                dump_plans(dir, &transported, run.seed, run.resolution as usize)?;
            }
            Ok(if report.pass() { 0 } else { 1 })
        }
        Command::MergeFree { n, run } => {
            if n == 0 {
                bail!("the free-involution planner needs sphere dimension n >= 1");
            }
            let suite = planner_free_involution(n, OrthoAction::antipodal(n))
                .map_err(|e| anyhow!("{e}"))?;
            let extended = extend_plan(&suite);
            let merged = merge_free(&extended).map_err(|e| anyhow!("{e}"))?;
            let report = verify_suite(&merged, run.samples as usize, run.seed);
            let mut text = String::new();
            let _ = writeln!(text, "command: merge-free");
            let _ = writeln!(text, "n: {n}");
            let _ = writeln!(text, "extended_k: {}", extended.k);
            let _ = writeln!(text, "k: {}", merged.k);
            let _ = writeln!(text, "charts: {}", merged.charts.len());
            text.push_str(&report.render());
            emit(&text, run.out.as_deref())?;
            if let Some(dir) = &run.dump_plans {
                dump_plans(dir, &merged, run.seed, run.resolution as usize)?;
            }
            Ok(if report.pass() { 0 } else { 1 })
        }
        Command::TableCheck { scenario, run } => {
            let names: Vec<&str> = if scenario == "all" {
                TABLE_SCENARIOS.to_vec()
            } else {
                vec![scenario.as_str()]
            };
            let mut text = String::new();
            let _ = writeln!(text, "command: table-check");
            let mut all_pass = true;
            for name in names {
                let report =
                    table_check(name, run.samples as usize, run.seed).map_err(|e| anyhow!("{e}"))?;
                all_pass &= report.pass();
                text.push_str(&report.render());
                text.push('\n');
            }
            emit(&text, run.out.as_deref())?;
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}
