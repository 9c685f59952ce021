//! Machine-readable report sections. Point indices are rendered as ids and
//! every float is rounded to 12 significant digits, so reports are stable
//! across runs and platforms.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::contraction::{VerificationReport, Violation};
use crate::metric::FiniteInstance;
use crate::proximal::ProximalProfile;
use crate::solver::{BppResult, SolveError, SolveTrace, StartOutcome, UniquenessReport};

pub const SIGNIFICANT_DIGITS: usize = 12;
/// Violations listed per verification report; the count is always exact.
pub const VIOLATION_LIST_LIMIT: usize = 1000;

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Formats a float for human-readable output with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r.is_finite() {
        format!("{r}")
    } else {
        format!("{x}")
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(round_value).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Serializes `x` and rounds every float in it.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    round_value(serde_json::to_value(x).expect("report sections serialize"))
}

pub fn rounded(v: Value) -> Value {
    round_value(v)
}

pub fn skipped(reason: &str) -> Value {
    json!({ "skipped": reason })
}

fn ids(inst: &FiniteInstance, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| inst.id(x).to_string()).collect()
}

pub fn profile(inst: &FiniteInstance, p: &ProximalProfile) -> Value {
    let pairs: Vec<[&str; 2]> = p
        .attaining_pairs
        .iter()
        .map(|&(a, b)| [inst.id(a), inst.id(b)])
        .collect();
    rounded(json!({
        "dAB": p.dab,
        "tol": p.tol,
        "attaining_pairs": pairs,
        "A0": ids(inst, &p.a0),
        "B0": ids(inst, &p.b0),
    }))
}

fn violation(inst: &FiniteInstance, v: &Violation) -> Value {
    json!({
        "u1": inst.id(v.u1),
        "u2": inst.id(v.u2),
        "v1": inst.id(v.v1),
        "v2": inst.id(v.v2),
        "lhs": v.lhs,
        "rhs": v.rhs.map_or(Value::String("undefined".into()), |r| json!(r)),
        "ln_lhs": v.ln_lhs,
        "ln_rhs": v.ln_rhs,
    })
}

pub fn verification(inst: &FiniteInstance, r: &VerificationReport) -> Value {
    rounded(json!({
        "kind": r.kind,
        "status": r.status,
        "proximal_pair_count": r.proximal_pair_count,
        "admissible_quadruple_count": r.admissible_quadruple_count,
        "filtered_count": r.filtered_count,
        "violation_count": r.violations.len(),
        "violations_truncated": r.violations.len() > VIOLATION_LIST_LIMIT,
        "violations": r.violations.iter().take(VIOLATION_LIST_LIMIT).map(|v| violation(inst, v)).collect::<Vec<_>>(),
    }))
}

pub fn trace(inst: &FiniteInstance, t: &SolveTrace) -> Value {
    rounded(json!({
        "start_in_A0": t.start_in_a0,
        "status": t.status,
        "iterates": ids(inst, &t.iterates),
        "step_residuals": t.step_residuals,
        "proximal_residuals": t.proximal_residuals,
    }))
}

pub fn bpp(inst: &FiniteInstance, r: &BppResult) -> Value {
    rounded(json!({
        "point": inst.id(r.point),
        "bpp_residual": r.bpp_residual,
        "certified": r.certified,
        "iterations": r.trace.step_residuals.len(),
        "trace": trace(inst, &r.trace),
    }))
}

pub fn solve_error(inst: &FiniteInstance, e: &SolveError) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), Value::String(e.to_string()));
    if let SolveError::InfeasibleStep { step, .. } = e {
        m.insert(
            "step".into(),
            json!({
                "from": inst.id(step.from),
                "target": inst.id(step.target),
                "nearest": inst.id(step.nearest),
                "distance": step.distance,
                "bound": step.bound,
            }),
        );
    }
    if let Some(t) = e.trace() {
        m.insert("trace".into(), trace(inst, t));
    }
    rounded(Value::Object(m))
}

pub fn solve_outcome(inst: &FiniteInstance, r: &Result<BppResult, SolveError>) -> Value {
    match r {
        Ok(b) => bpp(inst, b),
        Err(e) => solve_error(inst, e),
    }
}

fn start(inst: &FiniteInstance, s: &StartOutcome) -> Value {
    json!({ "start": inst.id(s.start), "outcome": solve_outcome(inst, &s.result) })
}

pub fn uniqueness(inst: &FiniteInstance, u: &UniquenessReport) -> Value {
    let mut images: Vec<usize> = u.limits.iter().map(|&x| inst.image(x)).collect();
    images.sort_unstable();
    images.dedup();
    json!({
        "unique": u.unique,
        "unique_image": u.unique_image,
        "limits": ids(inst, &u.limits),
        "images": ids(inst, &images),
        "scan_hits": ids(inst, &u.scan_hits),
        "starts": u.starts.iter().map(|s| start(inst, s)).collect::<Vec<_>>(),
    })
}
