//! Command orchestration shared by the CLI and the tests: resolve settings,
//! run the requested analyses, and assemble the report.

use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::contraction::{
    self, AdmissibilityFilter, ContractionParams, Kind, Status, VerificationReport, VerifyOptions,
};
use crate::error::{Error, Result};
use crate::functions::{validate_phi, validate_theta, PhiReport, PhiSpec, ThetaReport, ThetaSpec};
use crate::instances::{generate_builtin, triangular, Builtin};
use crate::io::{read_instance_file, Tolerances};
use crate::metric::{validate_metric_axioms, AxiomReport, FiniteInstance};
use crate::proximal::{
    check_approx_compact, check_p_property, check_range_condition, proximal_subsets, CompactDirection,
    CompactnessReport, PMode, PPropertyReport, ProximalProfile, RangeReport,
};
use crate::report::{self, fmt_num, skipped, to_value};
use crate::solver::{solve_from, uniqueness_with, BppResult, SolveError, SolveOptions, UniquenessReport};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_EPS_CONV: f64 = 1e-10;
pub const DEFAULT_DEMO_SIZE: usize = 10;
/// Sample grids and depths for the function-family checks.
pub const THETA_GRID: [f64; 4] = [0.1, 1.0, 2.0, 5.0];
pub const THETA_VANISHING_LEN: usize = 1_000_000;
pub const PHI_GRID: [f64; 3] = [1.5, 2.0, 10.0];
pub const PHI_DEPTH: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Functions,
    Verify,
    Solve,
    DemoPaper,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Functions => "functions",
            Command::Verify => "verify",
            Command::Solve => "solve",
            Command::DemoPaper => "demo-paper",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Builtin(Builtin, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KindSelection {
    #[default]
    First,
    Second,
    Both,
}

impl KindSelection {
    fn kinds(self) -> &'static [Kind] {
        match self {
            KindSelection::First => &[Kind::First],
            KindSelection::Second => &[Kind::Second],
            KindSelection::Both => &[Kind::First, Kind::Second],
        }
    }
}

impl std::str::FromStr for KindSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(KindSelection::First),
            "second" => Ok(KindSelection::Second),
            "both" => Ok(KindSelection::Both),
            other => Err(Error::param(format!(
                "unknown kind `{other}` (expected first, second or both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub source: Option<Source>,
    /// Size for `demo-paper`.
    pub size: Option<usize>,
    pub kinds: KindSelection,
    pub theta: Option<ThetaSpec>,
    pub phi: Option<PhiSpec>,
    pub params: Option<ContractionParams>,
    pub tol: Option<f64>,
    pub eps_conv: Option<f64>,
    pub max_iter: Option<usize>,
    pub p_mode: PMode,
    pub filter: AdmissibilityFilter,
    pub exact_int: bool,
    /// Start point for `solve`; defaults to the first point of `A0`.
    pub start: Option<String>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub report: Value,
    pub summary: Vec<String>,
    pub failed: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }

    pub fn report_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Settings after merging instance-file values, flags and defaults.
#[derive(Debug, Clone)]
struct Settings {
    theta: ThetaSpec,
    phi: PhiSpec,
    params: ContractionParams,
    tol: f64,
    eps_conv: f64,
    max_iter: Option<usize>,
}

impl Settings {
    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            eps_conv: self.eps_conv,
            max_iter: self.max_iter,
        }
    }
}

struct Loaded {
    inst: Option<FiniteInstance>,
    label: String,
    settings: Settings,
}

fn load(command: Command, cfg: &RunConfig) -> Result<Loaded> {
    let mut file_theta = None;
    let mut file_phi = None;
    let mut file_params = None;
    let mut file_tols = Tolerances::default();

    let (inst, label) = match (command, &cfg.source) {
        (Command::DemoPaper, Some(_)) => {
            return Err(Error::param("demo-paper generates its own instance; use --size only"))
        }
        (Command::DemoPaper, None) => {
            let n = cfg.size.unwrap_or(DEFAULT_DEMO_SIZE);
            (Some(triangular(n)?), format!("builtin triangular({n})"))
        }
        (_, Some(Source::File(path))) => {
            let file = read_instance_file(path)?;
            file_theta = file.theta()?;
            file_phi = file.phi()?;
            file_params = file.params()?;
            file_tols = file.tolerances.unwrap_or_default();
            (Some(file.instance()?), format!("file {}", path.display()))
        }
        (_, Some(Source::Builtin(kind, size))) => {
            let name = format!("{kind:?}").to_lowercase();
            let label = match kind {
                Builtin::Strip => format!("builtin {name}"),
                _ => format!("builtin {name}({size})"),
            };
            (Some(generate_builtin(*kind, *size)?), label)
        }
        (Command::Functions, None) => (None, "none".to_string()),
        (_, None) => return Err(Error::param("an instance is required: pass --instance or --builtin")),
    };

    let inst = match inst {
        Some(i) if cfg.exact_int => Some(i.into_exact_int()?),
        other => other,
    };
    let (tol, eps_conv) = if cfg.exact_int {
        (0.0, 0.0)
    } else {
        (
            cfg.tol.or(file_tols.tol).unwrap_or(DEFAULT_TOL),
            cfg.eps_conv.or(file_tols.eps_conv).unwrap_or(DEFAULT_EPS_CONV),
        )
    };
    if !(tol >= 0.0 && eps_conv >= 0.0) {
        return Err(Error::param("tolerances must be non-negative"));
    }
    let settings = Settings {
        theta: cfg.theta.clone().or(file_theta).unwrap_or(ThetaSpec::Exp),
        phi: cfg.phi.clone().or(file_phi).unwrap_or(PhiSpec::pow(0.5)?),
        params: cfg.params.or(file_params).unwrap_or_default(),
        tol,
        eps_conv,
        max_iter: cfg.max_iter.or(file_tols.max_iter),
    };
    Ok(Loaded { inst, label, settings })
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<RunOutcome> {
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::param(format!("cannot start {n} workers: {e}")))?
            .install(|| run_inner(command, cfg)),
        None => run_inner(command, cfg),
    }
}

struct Analysis {
    axioms: AxiomReport,
    profile: ProximalProfile,
    p_property: PPropertyReport,
    compact: [CompactnessReport; 2],
    range: RangeReport,
}

impl Analysis {
    fn hypotheses_pass(&self) -> bool {
        self.p_property.passed && self.range.passed && self.compact.iter().all(|c| c.passed)
    }
}

fn analyze(inst: &FiniteInstance, s: &Settings, mode: PMode) -> Analysis {
    let profile = proximal_subsets(inst, s.tol);
    Analysis {
        axioms: validate_metric_axioms(inst, s.tol),
        p_property: check_p_property(inst, &profile, mode),
        compact: [
            check_approx_compact(inst, CompactDirection::BWrtA),
            check_approx_compact(inst, CompactDirection::AWrtB),
        ],
        range: check_range_condition(inst, &profile),
        profile,
    }
}

fn theta_grid(spec: &ThetaSpec) -> (Vec<f64>, usize) {
    match spec {
        ThetaSpec::Tabulated(t) => {
            let lo = t.domain().0;
            (
                t.knots().iter().map(|k| k.0).collect(),
                (1.0 / lo).floor().clamp(1.0, 1e6) as usize,
            )
        }
        _ => (THETA_GRID.to_vec(), THETA_VANISHING_LEN),
    }
}

fn phi_grid(spec: &PhiSpec) -> Vec<f64> {
    match spec {
        PhiSpec::Tabulated(t) => t.knots().iter().map(|k| k.0).filter(|&x| x > 1.0).collect(),
        _ => PHI_GRID.to_vec(),
    }
}

fn validate_functions(s: &Settings) -> (ThetaReport, PhiReport) {
    let (grid, m) = theta_grid(&s.theta);
    (
        validate_theta(&s.theta, &grid, m),
        validate_phi(&s.phi, &phi_grid(&s.phi), PHI_DEPTH),
    )
}

const SUMMARY_ID_LIMIT: usize = 12;

fn ids(inst: &FiniteInstance, xs: &[usize]) -> String {
    let v: Vec<&str> = xs.iter().take(SUMMARY_ID_LIMIT).map(|&x| inst.id(x)).collect();
    if xs.len() > SUMMARY_ID_LIMIT {
        format!("{{{}, ...}} ({} points)", v.join(", "), xs.len())
    } else {
        format!("{{{}}}", v.join(", "))
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Violated => "violated",
        Status::Vacuous => "vacuous",
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::First => "first",
        Kind::Second => "second",
    }
}

struct Builder {
    sections: Map<String, Value>,
    summary: Vec<String>,
    failed: bool,
}

impl Builder {
    fn set(&mut self, key: &str, v: Value) {
        self.sections.insert(key.to_string(), v);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    fn fail_if(&mut self, cond: bool) {
        self.failed |= cond;
    }
}

fn run_inner(command: Command, cfg: &RunConfig) -> Result<RunOutcome> {
    let Loaded { inst, label, settings } = load(command, cfg)?;
    let mut b = Builder {
        sections: Map::new(),
        summary: Vec::new(),
        failed: false,
    };
    b.set("command", json!(command.name()));
    b.set(
        "settings",
        report::rounded(json!({
            "tol": settings.tol,
            "eps_conv": settings.eps_conv,
            "max_iter": inst.as_ref().map(|i| settings.solve_options().max_iter_for(i)),
            "theta": settings.theta.to_record(),
            "phi": settings.phi.to_record(),
            "params": settings.params,
            "p_property_mode": cfg.p_mode,
            "admissibility_filter": cfg.filter,
        })),
    );
    for key in [
        "metric_axioms",
        "profile",
        "hypotheses",
        "functions",
        "verification",
        "solve",
        "uniqueness",
        "theorems",
        "example_comparison",
    ] {
        b.set(key, skipped(&format!("not part of `{}`", command.name())));
    }

    let wants = |cmds: &[Command]| cmds.contains(&command);
    let wants_functions = wants(&[Command::Functions, Command::Verify, Command::DemoPaper]);

    let Some(inst) = inst else {
        b.set("instance", skipped("no instance given"));
        b.line("instance: none");
        functions_section(&mut b, &settings);
        return Ok(finish(b));
    };

    b.set(
        "instance",
        json!({
            "source": label,
            "metric": inst.metric().kind(),
            "points": inst.len(),
            "A_size": inst.a().len(),
            "B_size": inst.b().len(),
            "exact_int": inst.is_exact(),
        }),
    );
    b.line(format!(
        "instance: {label}, {} points, |A| = {}, |B| = {}, {} metric{}",
        inst.len(),
        inst.a().len(),
        inst.b().len(),
        inst.metric().kind(),
        if inst.is_exact() { " (exact integers)" } else { "" }
    ));

    let analysis = analyze(&inst, &settings, cfg.p_mode);
    b.set("metric_axioms", to_value(&analysis.axioms));
    if !analysis.axioms.passed() {
        b.line("metric axioms: FAILED");
        for (name, c) in [
            ("identity", &analysis.axioms.identity),
            ("symmetry", &analysis.axioms.symmetry),
            ("triangle", &analysis.axioms.triangle),
        ] {
            if !c.passed {
                b.line(format!("  {name}: witness {:?}", c.witness.clone().unwrap_or_default()));
            }
        }
        b.fail_if(true);
        let reason = "metric axioms failed; downstream analyses need a metric";
        for key in [
            "profile",
            "hypotheses",
            "verification",
            "solve",
            "uniqueness",
            "theorems",
            "example_comparison",
        ] {
            b.set(key, skipped(reason));
        }
        if wants(&[Command::Functions]) {
            functions_section(&mut b, &settings);
        }
        return Ok(finish(b));
    }
    b.line(format!(
        "metric axioms: pass{}",
        if analysis.axioms.by_construction {
            " (by construction)"
        } else {
            ""
        }
    ));

    let profile = &analysis.profile;
    b.set("profile", report::profile(&inst, profile));
    b.line(format!("d(A,B) = {}", fmt_num(profile.dab)));
    b.line(format!(
        "A0 = {}  B0 = {}",
        ids(&inst, &profile.a0),
        ids(&inst, &profile.b0)
    ));

    if wants(&[Command::Analyze, Command::Verify, Command::DemoPaper]) {
        hypotheses_section(&mut b, &inst, &analysis);
        if command == Command::Analyze {
            b.fail_if(!analysis.hypotheses_pass());
        }
    }

    let mut functions_ok = true;
    if wants_functions {
        functions_ok = functions_section(&mut b, &settings);
    }

    let mut verifications: Vec<VerificationReport> = Vec::new();
    if wants(&[Command::Verify, Command::DemoPaper]) {
        let kinds = if command == Command::DemoPaper {
            KindSelection::Both
        } else {
            cfg.kinds
        };
        let mut section = Map::new();
        for k in [Kind::First, Kind::Second] {
            section.insert(kind_name(k).into(), skipped("kind not requested"));
        }
        if !functions_ok {
            for &k in kinds.kinds() {
                section.insert(kind_name(k).into(), skipped("theta/phi failed validation"));
            }
            b.line("verification: skipped, theta/phi failed validation");
        } else {
            let opts = VerifyOptions {
                tol: settings.tol,
                filter: cfg.filter,
                workers: None,
            };
            for &k in kinds.kinds() {
                let r = contraction::verify(&inst, k, &settings.theta, &settings.phi, &settings.params, &opts)?;
                b.line(format!(
                    "{} kind: {} ({} admissible quadruples, {} violations)",
                    kind_name(k),
                    status_name(r.status),
                    r.admissible_quadruple_count,
                    r.violations.len()
                ));
                if let Some(v) = r.violations.first() {
                    b.line(format!(
                        "  first violation: u1={} u2={} v1={} v2={} lhs={} rhs={}",
                        inst.id(v.u1),
                        inst.id(v.u2),
                        inst.id(v.v1),
                        inst.id(v.v2),
                        fmt_num(v.lhs),
                        v.rhs.map_or("undefined".to_string(), fmt_num)
                    ));
                }
                b.fail_if(r.status == Status::Violated);
                section.insert(kind_name(k).into(), report::verification(&inst, &r));
                verifications.push(r);
            }
        }
        b.set("verification", Value::Object(section));
    }

    let mut solved: Option<std::result::Result<BppResult, SolveError>> = None;
    let mut unique: Option<UniquenessReport> = None;
    if wants(&[Command::Solve, Command::DemoPaper]) {
        let opts = settings.solve_options();
        let start = match &cfg.start {
            Some(id) => {
                let u = inst.index_of(id)?;
                if !inst.in_a(u) {
                    return Err(Error::param(format!("start `{id}` is not in A")));
                }
                u
            }
            None => profile.a0[0],
        };
        let result = solve_from(&inst, profile, start, &opts);
        if !profile.in_a0(start) {
            b.line(format!("warning: start {} is not in A0", inst.id(start)));
        }
        match &result {
            Ok(r) => {
                b.line(format!(
                    "solve from {}: converged to {} in {} iteration(s), bpp residual {}{}",
                    inst.id(start),
                    inst.id(r.point),
                    r.trace.step_residuals.len(),
                    fmt_num(r.bpp_residual),
                    if r.certified { "" } else { " (NOT certified)" }
                ));
                b.fail_if(!r.certified);
            }
            Err(e) => {
                b.line(format!("solve from {}: {e}", inst.id(start)));
                b.fail_if(true);
            }
        }
        let mut solve_value = report::solve_outcome(&inst, &result);
        if let Value::Object(m) = &mut solve_value {
            m.insert("start".into(), json!(inst.id(start)));
        }
        b.set("solve", solve_value);

        let u = uniqueness_with(&inst, profile, &opts);
        b.line(format!(
            "best proximity points: {} ({})",
            ids(&inst, &u.limits),
            if u.unique { "unique" } else { "NOT unique" }
        ));
        b.fail_if(!u.unique);
        b.set("uniqueness", report::uniqueness(&inst, &u));
        solved = Some(result);
        unique = Some(u);
    }

    if wants(&[Command::Verify, Command::DemoPaper]) && functions_ok {
        b.set("theorems", theorems_section(&analysis, &verifications, cfg.p_mode));
    }

    if command == Command::DemoPaper {
        b.fail_if(!analysis.hypotheses_pass() || !functions_ok);
        example_section(
            &mut b,
            &inst,
            &analysis,
            &verifications,
            solved.as_ref(),
            unique.as_ref(),
        );
    }

    Ok(finish(b))
}

fn finish(b: Builder) -> RunOutcome {
    let mut summary = b.summary;
    summary.push(format!("result: {}", if b.failed { "FAIL" } else { "PASS" }));
    RunOutcome {
        report: Value::Object(b.sections),
        summary,
        failed: b.failed,
    }
}

fn hypotheses_section(b: &mut Builder, inst: &FiniteInstance, a: &Analysis) {
    let pass = |x: bool| if x { "pass" } else { "FAIL" };
    let mode = match a.p_property.mode {
        PMode::Strict => "strict",
        PMode::Weak => "weak",
    };
    b.line(format!("P-property ({mode}): {}", pass(a.p_property.passed)));
    if let Some(w) = &a.p_property.witness {
        b.line(format!(
            "  witness: x1={} y1={} x2={} y2={}  d(x1,x2)={} d(y1,y2)={}",
            w.x1,
            w.y1,
            w.x2,
            w.y2,
            fmt_num(w.d_x),
            fmt_num(w.d_y)
        ));
    }
    b.line(format!("T(A0) in B0: {}", pass(a.range.passed)));
    if let Some((u, tu)) = &a.range.witness {
        b.line(format!("  witness: T({u}) = {tu} is not in B0"));
    }
    b.line("approximate compactness: pass (finite sets)");
    let _ = inst;
    b.set(
        "hypotheses",
        json!({
            "p_property": to_value(&a.p_property),
            "approx_compact": {
                "B_wrt_A": to_value(&a.compact[0]),
                "A_wrt_B": to_value(&a.compact[1]),
            },
            "range_condition": to_value(&a.range),
            "continuity_of_T": {"passed": true, "note": "every map on a finite metric space is continuous"},
        }),
    );
}

/// Returns whether both families validated.
fn functions_section(b: &mut Builder, s: &Settings) -> bool {
    let (theta, phi) = validate_functions(s);
    let (t_ok, p_ok) = (theta.passed(), phi.passed());
    b.line(format!(
        "theta {}: {}",
        theta.name,
        if t_ok {
            "pass".to_string()
        } else {
            format!("FAIL ({})", theta.failures().join(", "))
        }
    ));
    b.line(format!(
        "phi {}: {}",
        phi.name,
        if p_ok {
            "pass".to_string()
        } else {
            format!("FAIL ({})", phi.failures().join(", "))
        }
    ));
    b.set("functions", json!({ "theta": to_value(&theta), "phi": to_value(&phi) }));
    b.fail_if(!(t_ok && p_ok));
    t_ok && p_ok
}

fn theorems_section(a: &Analysis, verifications: &[VerificationReport], mode: PMode) -> Value {
    let status = |k: Kind| verifications.iter().find(|r| r.kind == k).map(|r| r.status);
    let contraction_value = |k: Kind| match status(k) {
        Some(s) => json!(status_name(s)),
        None => json!("not evaluated"),
    };
    let contraction_ok = |k: Kind| matches!(status(k), Some(Status::Holds | Status::Vacuous));
    let common = a.range.passed && a.p_property.passed;
    let vacuous = |ks: &[Kind]| ks.iter().any(|&k| status(k) == Some(Status::Vacuous));
    let p_key = match mode {
        PMode::Strict => "p_property_strict",
        PMode::Weak => "p_property_weak",
    };

    let first = common && a.compact[0].passed && contraction_ok(Kind::First);
    let second = common && a.compact[1].passed && contraction_ok(Kind::Second);
    let both = common && contraction_ok(Kind::First) && contraction_ok(Kind::Second);
    json!({
        "first_kind": {
            "hypotheses": {
                "B_approx_compact_wrt_A": a.compact[0].passed,
                "range_condition": a.range.passed,
                p_key: a.p_property.passed,
                "first_kind_contraction": contraction_value(Kind::First),
            },
            "satisfied": first,
            "vacuous_contraction": vacuous(&[Kind::First]),
            "conclusion": "unique best proximity point, reached from every start in A0",
        },
        "second_kind": {
            "hypotheses": {
                "A_approx_compact_wrt_B": a.compact[1].passed,
                "range_condition": a.range.passed,
                p_key: a.p_property.passed,
                "T_continuous": true,
                "second_kind_contraction": contraction_value(Kind::Second),
            },
            "satisfied": second,
            "vacuous_contraction": vacuous(&[Kind::Second]),
            "conclusion": "best proximity point reached from every start in A0; any two share their image under T",
        },
        "both_kinds": {
            "hypotheses": {
                "range_condition": a.range.passed,
                p_key: a.p_property.passed,
                "first_kind_contraction": contraction_value(Kind::First),
                "second_kind_contraction": contraction_value(Kind::Second),
            },
            "satisfied": both,
            "vacuous_contraction": vacuous(&[Kind::First, Kind::Second]),
            "conclusion": "unique best proximity point, reached from every start in A0",
        },
    })
}

/// Claimed values of the published triangular-number example, set beside the
/// computed ones.
fn example_section(
    b: &mut Builder,
    inst: &FiniteInstance,
    a: &Analysis,
    verifications: &[VerificationReport],
    solved: Option<&std::result::Result<BppResult, SolveError>>,
    unique: Option<&UniquenessReport>,
) {
    let p = &a.profile;
    let list = |xs: &[usize]| json!(xs.iter().map(|&x| inst.id(x)).collect::<Vec<_>>());
    let a0 = ids(inst, &p.a0);
    let b0 = ids(inst, &p.b0);
    let bpp = solved.and_then(|r| r.as_ref().ok());
    let bpp_id = bpp.map_or("none".to_string(), |r| inst.id(r.point).to_string());
    let six = inst.index_of("6").expect("triangular instances contain 6");
    let d_six = inst.distance(six, inst.image(six));
    let second = verifications.iter().find(|r| r.kind == Kind::Second);
    let second_status = second.map_or("not evaluated", |r| status_name(r.status));
    let is_unique = unique.is_some_and(|u| u.unique);

    let mut rows = Vec::new();
    let mut row = |quantity: &str, claimed: Value, computed: Value, matches: bool, note: Option<String>| {
        let mut m = Map::new();
        m.insert("quantity".into(), json!(quantity));
        m.insert("claimed".into(), claimed);
        m.insert("computed".into(), computed);
        m.insert("matches".into(), json!(matches));
        if let Some(n) = note {
            m.insert("note".into(), json!(n));
        }
        rows.push(Value::Object(m));
    };

    row("d(A,B)", json!(3.0), json!(p.dab), p.dab == 3.0, None);
    row(
        "A0",
        list(inst.a()),
        list(&p.a0),
        p.a0 == inst.a(),
        (p.a0 != inst.a()).then(|| format!("claimed A0 = A; computed A0 = {a0}")),
    );
    row(
        "B0",
        list(inst.b()),
        list(&p.b0),
        p.b0 == inst.b(),
        (p.b0 != inst.b()).then(|| format!("claimed B0 = B; computed B0 = {b0}")),
    );
    row("T(A0) in B0", json!(true), json!(a.range.passed), a.range.passed, None);
    row(
        "P-property",
        json!(true),
        json!(a.p_property.passed),
        a.p_property.passed,
        None,
    );
    row(
        "second-kind contraction, theta = e^t, phi = t^(1/2), (a,b,c,h) = (1,0,0,0)",
        json!("holds"),
        json!(second_status),
        second.is_some_and(|r| r.status == Status::Holds),
        second.filter(|r| r.status == Status::Vacuous).map(|r| {
            format!(
                "holds only vacuously: {} proximal pair(s), no quadruple with positive left-hand distance",
                r.proximal_pair_count
            )
        }),
    );
    row("best proximity point", json!("6"), json!(bpp_id), bpp_id == "6", None);
    row("d(6, T6)", json!(3.0), json!(d_six), d_six == 3.0, None);
    row(
        "unique best proximity point",
        json!(true),
        json!(is_unique),
        is_unique,
        None,
    );

    b.line("published example vs computed:");
    for r in &rows {
        let mark = if r["matches"] == json!(true) { "ok " } else { "DIFF" };
        let show = |v: &Value| match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.as_f64().map_or(n.to_string(), fmt_num),
            Value::Array(xs) if xs.len() > SUMMARY_ID_LIMIT => format!("{} points", xs.len()),
            Value::Array(xs) => format!(
                "{{{}}}",
                xs.iter()
                    .map(|x| x.as_str().unwrap_or("?"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            other => other.to_string(),
        };
        b.line(format!(
            "  [{mark}] {}: claimed {}, computed {}",
            r["quantity"].as_str().unwrap_or(""),
            show(&r["claimed"]),
            show(&r["computed"])
        ));
        if let Some(n) = r.get("note").and_then(Value::as_str) {
            b.line(format!("         {n}"));
        }
    }
    b.set(
        "example_comparison",
        report::rounded(json!({
            "rows": rows,
            "discrepancies": rows.iter().filter(|r| r["matches"] != json!(true)).count(),
            "note": "theta(t) = e^t is used as declared; the example's displayed algebra with e^d + 1 is not reproduced",
        })),
    );
}
