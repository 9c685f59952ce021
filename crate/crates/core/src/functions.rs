//! The auxiliary function families: `θ: (0,∞) → (1,∞)` and `φ: [1,∞) → [1,∞)`.
//!
//! Builtins are closed-form. Tabulated functions (piecewise linear through
//! knots) are accepted for validation; the contraction verifier only takes
//! them once [`ThetaSpec::ensure_admissible`] / [`PhiSpec::ensure_admissible`]
//! succeed.
//!
//! Membership is checked numerically on sample grids. The limit conditions
//! cannot be decided from finitely many samples, so every check carries a
//! margin alongside its verdict.

// Negated comparisons below are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Relative shrink a vanishing sequence must reach: the final gap to 1 must
/// be at most this fraction of the initial gap.
pub const VANISHING_SHRINK: f64 = 1e-2;

/// Step sizes probed by the sampled continuity checks.
const CONTINUITY_STEPS: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Jump allowed at the finest step, relative to `max(1, |f(t)|)`.
const CONTINUITY_TOL: f64 = 1e-6;

/// Piecewise-linear function through `(t, value)` knots with strictly
/// increasing abscissae. Undefined outside `[t_first, t_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    knots: Vec<(f64, f64)>,
}

impl Table {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::param("a tabulated function needs at least two knots"));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::param("tabulated knots must be finite"));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::param("tabulated abscissae must be strictly increasing"));
        }
        Ok(Table { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0].0, self.knots[self.knots.len() - 1].0)
    }

    fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&t) {
            return None;
        }
        let i = self.knots.partition_point(|&(x, _)| x <= t);
        if i == self.knots.len() {
            return Some(self.knots[i - 1].1);
        }
        let (x0, y0) = self.knots[i - 1];
        let (x1, y1) = self.knots[i];
        Some(y0 + (y1 - y0) * (t - x0) / (x1 - x0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSpec {
    /// `θ(t) = e^t`.
    Exp,
    /// `θ(t) = e^{√t}`.
    ExpSqrt,
    Tabulated(Table),
}

/// Exponent `k ∈ (0,1)` of `φ(t) = t^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(k: f64) -> Result<Self> {
        if k > 0.0 && k < 1.0 {
            Ok(Exponent(k))
        } else {
            Err(Error::param(format!("pow exponent must lie in (0,1), got {k}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhiSpec {
    /// `φ(t) = t^k`.
    Pow(Exponent),
    Tabulated(Table),
}

impl PhiSpec {
    pub fn pow(k: f64) -> Result<Self> {
        Exponent::new(k).map(PhiSpec::Pow)
    }
}

/// `{name, parameters}` form used in instance files and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionRecord {
    pub name: String,
    #[serde(default)]
    pub parameters: Map<String, Value>,
}

fn knots_from(params: &Map<String, Value>) -> Result<Table> {
    let knots: Vec<(f64, f64)> = params
        .get("knots")
        .cloned()
        .ok_or_else(|| Error::param("tabulated function needs a `knots` parameter"))
        .and_then(|v| serde_json::from_value(v).map_err(|e| Error::param(format!("bad knots: {e}"))))?;
    Table::new(knots)
}

fn no_params(record: &FunctionRecord) -> Result<()> {
    if let Some(key) = record.parameters.keys().next() {
        return Err(Error::param(format!("`{}` takes no parameter `{key}`", record.name)));
    }
    Ok(())
}

impl ThetaSpec {
    pub fn from_record(record: &FunctionRecord) -> Result<Self> {
        match record.name.as_str() {
            "exp" => no_params(record).map(|_| ThetaSpec::Exp),
            "exp_sqrt" => no_params(record).map(|_| ThetaSpec::ExpSqrt),
            "tabulated" => knots_from(&record.parameters).map(ThetaSpec::Tabulated),
            other => Err(Error::param(format!("unknown theta `{other}`"))),
        }
    }

    pub fn to_record(&self) -> FunctionRecord {
        let (name, parameters) = match self {
            ThetaSpec::Exp => ("exp", Map::new()),
            ThetaSpec::ExpSqrt => ("exp_sqrt", Map::new()),
            ThetaSpec::Tabulated(t) => ("tabulated", knots_map(t)),
        };
        FunctionRecord {
            name: name.into(),
            parameters,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ThetaSpec::Exp => "exp",
            ThetaSpec::ExpSqrt => "exp_sqrt",
            ThetaSpec::Tabulated(_) => "tabulated",
        }
    }

    /// `ln θ(t)`, computed without overflow for the builtins.
    pub fn ln_eval(&self, t: f64) -> Result<f64> {
        match self {
            ThetaSpec::Exp => check_theta_domain(t),
            ThetaSpec::ExpSqrt => check_theta_domain(t).map(f64::sqrt),
            ThetaSpec::Tabulated(_) => eval_theta(self, t).map(f64::ln),
        }
    }

    /// Builtins are admissible outright; tables must pass validation on their
    /// own knots.
    pub fn ensure_admissible(&self) -> Result<()> {
        let ThetaSpec::Tabulated(table) = self else {
            return Ok(());
        };
        let grid: Vec<f64> = table.knots().iter().map(|k| k.0).filter(|&t| t > 0.0).collect();
        let m = (1.0 / table.domain().0.max(f64::MIN_POSITIVE)).floor().clamp(1.0, 1e6) as usize;
        let report = validate_theta(self, &grid, m);
        if report.passed() {
            Ok(())
        } else {
            Err(Error::Inadmissible(format!(
                "tabulated theta fails {}",
                report.failures().join(", ")
            )))
        }
    }
}

impl std::str::FromStr for ThetaSpec {
    type Err = Error;

    /// `exp` or `exp_sqrt`; tables come from instance files.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(ThetaSpec::Exp),
            "exp_sqrt" => Ok(ThetaSpec::ExpSqrt),
            other => Err(Error::param(format!(
                "unknown theta `{other}` (expected exp or exp_sqrt)"
            ))),
        }
    }
}

impl std::str::FromStr for PhiSpec {
    type Err = Error;

    /// `pow:K` with `K` in (0,1).
    fn from_str(s: &str) -> Result<Self> {
        let k = s
            .strip_prefix("pow:")
            .ok_or_else(|| Error::param(format!("unknown phi `{s}` (expected pow:K)")))?;
        let k: f64 = k.trim().parse().map_err(|e| Error::param(format!("phi `{s}`: {e}")))?;
        PhiSpec::pow(k)
    }
}

impl PhiSpec {
    pub fn from_record(record: &FunctionRecord) -> Result<Self> {
        match record.name.as_str() {
            "pow" => {
                let k = record
                    .parameters
                    .get("k")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::param("pow needs a numeric parameter `k`"))?;
                if let Some(key) = record.parameters.keys().find(|k| *k != "k") {
                    return Err(Error::param(format!("`pow` takes no parameter `{key}`")));
                }
                PhiSpec::pow(k)
            }
            "tabulated" => knots_from(&record.parameters).map(PhiSpec::Tabulated),
            other => Err(Error::param(format!("unknown phi `{other}`"))),
        }
    }

    pub fn to_record(&self) -> FunctionRecord {
        let (name, parameters) = match self {
            PhiSpec::Pow(k) => {
                let mut m = Map::new();
                m.insert("k".into(), json!(k.get()));
                ("pow", m)
            }
            PhiSpec::Tabulated(t) => ("tabulated", knots_map(t)),
        };
        FunctionRecord {
            name: name.into(),
            parameters,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PhiSpec::Pow(_) => "pow",
            PhiSpec::Tabulated(_) => "tabulated",
        }
    }

    /// `ln φ(x)` given `ln x`.
    pub fn ln_apply(&self, ln_x: f64) -> Result<f64> {
        if ln_x.is_nan() || ln_x < 0.0 {
            return Err(Error::Domain {
                function: "phi",
                value: ln_x.exp(),
                domain: "[1, inf)",
            });
        }
        match self {
            PhiSpec::Pow(k) => Ok(k.get() * ln_x),
            PhiSpec::Tabulated(_) => eval_phi(self, ln_x.exp()).map(f64::ln),
        }
    }

    pub fn ensure_admissible(&self) -> Result<()> {
        let PhiSpec::Tabulated(table) = self else {
            return Ok(());
        };
        let grid: Vec<f64> = table.knots().iter().map(|k| k.0).filter(|&t| t > 1.0).collect();
        let report = validate_phi(self, &grid, 100);
        if report.passed() {
            Ok(())
        } else {
            Err(Error::Inadmissible(format!(
                "tabulated phi fails {}",
                report.failures().join(", ")
            )))
        }
    }
}

fn knots_map(t: &Table) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("knots".into(), json!(t.knots()));
    m
}

fn check_theta_domain(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::Domain {
            function: "theta",
            value: t,
            domain: "(0, inf)",
        })
    }
}

pub fn eval_theta(spec: &ThetaSpec, t: f64) -> Result<f64> {
    let t = check_theta_domain(t)?;
    match spec {
        ThetaSpec::Exp => Ok(t.exp()),
        ThetaSpec::ExpSqrt => Ok(t.sqrt().exp()),
        ThetaSpec::Tabulated(table) => table.eval(t).ok_or(Error::Domain {
            function: "theta",
            value: t,
            domain: "the table's knot range",
        }),
    }
}

pub fn eval_phi(spec: &PhiSpec, t: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::Domain {
            function: "phi",
            value: t,
            domain: "[1, inf)",
        });
    }
    match spec {
        PhiSpec::Pow(k) => Ok(t.powf(k.get())),
        PhiSpec::Tabulated(table) => table.eval(t).ok_or(Error::Domain {
            function: "phi",
            value: t,
            domain: "the table's knot range",
        }),
    }
}

/// `φ^n(t)`, the n-fold composition; `n = 0` returns `t`.
pub fn phi_iterate(spec: &PhiSpec, t: f64, n: usize) -> Result<f64> {
    let mut x = eval_phi(spec, t).map(|_| t)?;
    for _ in 0..n {
        x = eval_phi(spec, x)?;
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCheck {
    pub passed: bool,
    /// Signed evidence strength; its meaning is stated in `note`.
    pub margin: f64,
    pub witness: Option<String>,
    pub note: String,
}

impl SampledCheck {
    fn fail(note: impl Into<String>) -> Self {
        SampledCheck {
            passed: false,
            margin: f64::NAN,
            witness: None,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaReport {
    pub name: &'static str,
    pub theta1_increasing: SampledCheck,
    pub theta2_vanishing: SampledCheck,
    pub theta3_continuous: SampledCheck,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("theta1", &self.theta1_increasing),
            ("theta2", &self.theta2_vanishing),
            ("theta3", &self.theta3_continuous),
        ]
        .into_iter()
        .filter(|(_, c)| !c.passed)
        .map(|(n, _)| n)
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiReport {
    pub name: &'static str,
    pub phi1_increasing: SampledCheck,
    pub phi2_iterates_to_one: SampledCheck,
    pub phi3_continuous: SampledCheck,
    pub lemma_fixes_one: SampledCheck,
    pub lemma_below_identity: SampledCheck,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("phi1", &self.phi1_increasing),
            ("phi2", &self.phi2_iterates_to_one),
            ("phi3", &self.phi3_continuous),
            ("phi(1)=1", &self.lemma_fixes_one),
            ("phi(t)<t", &self.lemma_below_identity),
        ]
        .into_iter()
        .filter(|(_, c)| !c.passed)
        .map(|(n, _)| n)
        .collect()
    }
}

fn check_grid(grid: &[f64], min_len: usize) -> Option<String> {
    if grid.len() < min_len {
        return Some(format!("grid needs at least {min_len} points, got {}", grid.len()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Some("grid must be strictly ascending".into());
    }
    None
}

/// Consecutive-pair monotonicity on `grid`. Margin is the smallest increment.
fn monotone_check(f: impl Fn(f64) -> Result<f64>, grid: &[f64], strict: bool, label: &str) -> SampledCheck {
    let values: Result<Vec<f64>> = grid.iter().map(|&t| f(t)).collect();
    let values = match values {
        Ok(v) => v,
        Err(e) => return SampledCheck::fail(e.to_string()),
    };
    let mut margin = f64::INFINITY;
    for (i, w) in values.windows(2).enumerate() {
        let inc = w[1] - w[0];
        margin = margin.min(inc);
        if inc < 0.0 || (strict && inc <= 0.0) {
            return SampledCheck {
                passed: false,
                margin: inc,
                witness: Some(format!(
                    "{label}({}) = {} vs {label}({}) = {}",
                    grid[i],
                    w[0],
                    grid[i + 1],
                    w[1]
                )),
                note: "smallest increment between consecutive grid points".into(),
            };
        }
    }
    SampledCheck {
        passed: true,
        margin,
        witness: None,
        note: "smallest increment between consecutive grid points".into(),
    }
}

/// Sampled continuity: jumps `|f(t±δ) - f(t)|` must shrink as `δ` shrinks and
/// end below `CONTINUITY_TOL · max(1, |f(t)|)`. Margin is the worst final
/// jump relative to that bound (pass iff `<= 1`).
fn continuity_check(f: impl Fn(f64) -> Result<f64>, grid: &[f64], label: &str) -> SampledCheck {
    let note =
        format!("largest final jump at step 1e-8 relative to {CONTINUITY_TOL:e}*max(1,|{label}(t)|); pass iff <= 1");
    let mut worst = 0.0f64;
    for &t in grid {
        let Ok(ft) = f(t) else {
            return SampledCheck::fail(format!("{label} undefined at grid point {t}"));
        };
        for side in [1.0, -1.0] {
            let jumps: Vec<f64> = CONTINUITY_STEPS
                .iter()
                .map_while(|&h| f(t + side * h).ok().map(|v| (v - ft).abs()))
                .collect();
            if jumps.len() < CONTINUITY_STEPS.len() {
                // One-sided at a domain boundary.
                continue;
            }
            let last = jumps[jumps.len() - 1] / (CONTINUITY_TOL * ft.abs().max(1.0));
            worst = worst.max(last);
            // 4 ulps of slack for jumps that are already at rounding level.
            let slack = 4.0 * f64::EPSILON * ft.abs().max(1.0);
            let shrinking = jumps.windows(2).all(|w| w[1] <= w[0] + slack);
            if !shrinking || last > 1.0 {
                return SampledCheck {
                    passed: false,
                    margin: last,
                    witness: Some(format!("{label} jumps at t = {t}: {jumps:?}")),
                    note,
                };
            }
        }
    }
    SampledCheck {
        passed: true,
        margin: worst,
        witness: None,
        note,
    }
}

/// Sampled evidence for θ1–θ3.
///
/// θ2 is probed along `t_i = 1/i`, `i = 1..=m`: the values must decrease
/// strictly, stay above 1, and `θ(1/m) - 1` must fall to at most
/// [`VANISHING_SHRINK`] times `θ(1) - 1`. The margin is `θ(1/m) - 1`.
pub fn validate_theta(spec: &ThetaSpec, grid: &[f64], m: usize) -> ThetaReport {
    let f = |t| eval_theta(spec, t);
    let grid_problem = check_grid(grid, 3);

    let theta1 = match &grid_problem {
        Some(p) => SampledCheck::fail(p.clone()),
        None => {
            let mut c = monotone_check(f, grid, true, "theta");
            if c.passed {
                if let Some(&t) = grid.iter().find(|&&t| !matches!(f(t), Ok(v) if v > 1.0)) {
                    c = SampledCheck {
                        passed: false,
                        margin: f(t).map(|v| v - 1.0).unwrap_or(f64::NAN),
                        witness: Some(format!("theta({t}) is not above 1")),
                        note: "theta must map into (1, inf)".into(),
                    };
                }
            }
            c
        }
    };

    let theta2 = vanishing_check(spec, m.max(1));

    let theta3 = match &grid_problem {
        Some(p) => SampledCheck::fail(p.clone()),
        None => continuity_check(f, grid, "theta"),
    };

    ThetaReport {
        name: spec.name(),
        theta1_increasing: theta1,
        theta2_vanishing: theta2,
        theta3_continuous: theta3,
    }
}

fn vanishing_check(spec: &ThetaSpec, m: usize) -> SampledCheck {
    let note = format!(
        "margin = theta(1/{m}) - 1; pass needs strict decrease along 1/i and margin <= {VANISHING_SHRINK:e}*(theta(1)-1)"
    );
    let first = match eval_theta(spec, 1.0) {
        Ok(v) => v,
        Err(e) => return SampledCheck::fail(e.to_string()),
    };
    let mut prev = first;
    for i in 2..=m {
        let t = 1.0 / i as f64;
        let v = match eval_theta(spec, t) {
            Ok(v) => v,
            Err(e) => return SampledCheck::fail(format!("{e}; the sequence 1/i leaves the domain at i = {i}")),
        };
        if !(v < prev) || v <= 1.0 {
            return SampledCheck {
                passed: false,
                margin: v - 1.0,
                witness: Some(format!("theta(1/{i}) = {v} after theta(1/{}) = {prev}", i - 1)),
                note,
            };
        }
        prev = v;
    }
    let gap = prev - 1.0;
    SampledCheck {
        passed: gap <= VANISHING_SHRINK * (first - 1.0),
        margin: gap,
        witness: None,
        note,
    }
}

/// Sampled evidence for φ1–φ3 and the two consequences `φ(1) = 1`, `φ(t) < t`.
///
/// φ2 runs `n` iterations from every grid point: iterates must not increase,
/// must stay `>= 1`, and `φ^n(t) - 1` must fall to at most
/// [`VANISHING_SHRINK`] times `t - 1`. The margin is the largest `φ^n(t) - 1`.
pub fn validate_phi(spec: &PhiSpec, grid: &[f64], n: usize) -> PhiReport {
    let f = |t| eval_phi(spec, t);
    let grid_problem = check_grid(grid, 1).or_else(|| {
        grid.iter()
            .find(|&&t| !(t > 1.0))
            .map(|t| format!("grid point {t} is not in (1, inf)"))
    });
    let with_grid = |check: &dyn Fn() -> SampledCheck| match &grid_problem {
        Some(p) => SampledCheck::fail(p.clone()),
        None => check(),
    };

    let phi1 = with_grid(&|| monotone_check(f, grid, false, "phi"));
    let phi2 = with_grid(&|| iterate_check(spec, grid, n));
    let phi3 = with_grid(&|| continuity_check(f, grid, "phi"));

    let fixes_one = match f(1.0) {
        Ok(v) => SampledCheck {
            passed: v == 1.0,
            margin: v - 1.0,
            witness: (v != 1.0).then(|| format!("phi(1) = {v}")),
            note: "margin = phi(1) - 1, must be exactly 0".into(),
        },
        Err(e) => SampledCheck::fail(e.to_string()),
    };

    let below = with_grid(&|| {
        let mut margin = f64::INFINITY;
        for &t in grid {
            match f(t) {
                Ok(v) if v < t => margin = margin.min(t - v),
                Ok(v) => {
                    return SampledCheck {
                        passed: false,
                        margin: t - v,
                        witness: Some(format!("phi({t}) = {v}")),
                        note: "margin = min over grid of t - phi(t)".into(),
                    }
                }
                Err(e) => return SampledCheck::fail(e.to_string()),
            }
        }
        SampledCheck {
            passed: true,
            margin,
            witness: None,
            note: "margin = min over grid of t - phi(t)".into(),
        }
    });

    PhiReport {
        name: spec.name(),
        phi1_increasing: phi1,
        phi2_iterates_to_one: phi2,
        phi3_continuous: phi3,
        lemma_fixes_one: fixes_one,
        lemma_below_identity: below,
    }
}

fn iterate_check(spec: &PhiSpec, grid: &[f64], n: usize) -> SampledCheck {
    let note = format!(
        "margin = max over grid of phi^{n}(t) - 1; pass needs non-increasing iterates and phi^{n}(t) - 1 <= {VANISHING_SHRINK:e}*(t-1)"
    );
    let mut worst = 0.0f64;
    for &t in grid {
        let mut x = t;
        for step in 1..=n {
            let next = match eval_phi(spec, x) {
                Ok(v) => v,
                Err(e) => return SampledCheck::fail(format!("iteration {step} from {t}: {e}")),
            };
            if next > x || next < 1.0 {
                return SampledCheck {
                    passed: false,
                    margin: next - 1.0,
                    witness: Some(format!("phi^{step}({t}) = {next} after {x}")),
                    note,
                };
            }
            x = next;
        }
        let gap = x - 1.0;
        worst = worst.max(gap);
        if gap > VANISHING_SHRINK * (t - 1.0) {
            return SampledCheck {
                passed: false,
                margin: gap,
                witness: Some(format!("phi^{n}({t}) - 1 = {gap}")),
                note,
            };
        }
    }
    SampledCheck {
        passed: true,
        margin: worst,
        witness: None,
        note,
    }
}
