//! Exhaustive verification of the proximal contraction inequalities.
//!
//! For proximal pairs `(u1,v1)`, `(u2,v2)` (meaning `d(u_i, T v_i) = d(A,B)`)
//! the first kind requires
//!
//! ```text
//! θ(d(u1,u2)) <= φ(θ(a·d(v1,v2) + b·d(u1,v1) + c·d(u2,v2) + h·(d(v1,u2) + d(v2,u1))))
//! ```
//!
//! and the second kind the same inequality with every point replaced by its
//! image under `T`. Every ordered pair of proximal pairs is scanned.
//!
//! The comparison runs in log space (`ln θ` against `ln φ(θ(·))`) so large
//! distances do not overflow.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{PhiSpec, ThetaSpec};
use crate::metric::FiniteInstance;
use crate::proximal::set_distance;

/// Slack on the coefficient constraint `a + b + c + 2h <= 1`.
const PARAM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionParams {
    a: f64,
    b: f64,
    c: f64,
    h: f64,
}

impl ContractionParams {
    /// Requires `a, b, c, h >= 0`, `a + b + c + 2h <= 1` and `c + h < 1`.
    pub fn new(a: f64, b: f64, c: f64, h: f64) -> Result<Self> {
        let all = [a, b, c, h];
        if all.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::param(format!(
                "contraction coefficients must be finite and non-negative, got ({a}, {b}, {c}, {h})"
            )));
        }
        let total = a + b + c + 2.0 * h;
        if total > 1.0 + PARAM_TOL {
            return Err(Error::param(format!("a + b + c + 2h = {total} exceeds 1")));
        }
        if c + h >= 1.0 {
            return Err(Error::param(format!("c + h = {} must be below 1", c + h)));
        }
        Ok(ContractionParams { a, b, c, h })
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.h]
    }
}

impl Default for ContractionParams {
    fn default() -> Self {
        ContractionParams {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            h: 0.0,
        }
    }
}

impl std::str::FromStr for ContractionParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let xs: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::param(format!("params `{s}`: {e}")))?;
        match xs[..] {
            [a, b, c, h] => ContractionParams::new(a, b, c, h),
            _ => Err(Error::param(format!("params `{s}` must be four numbers a,b,c,h"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    First,
    Second,
}

/// Which quadruples the inequality is asserted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibilityFilter {
    /// The left-hand distance must be positive, so `θ` is defined there.
    #[default]
    PositiveDistance,
    /// `u1 ≠ v1` (first kind) or `T u1 ≠ T v1` (second kind), on top of the
    /// positive left-hand distance that `θ` needs anyway.
    Literal,
}

impl std::str::FromStr for AdmissibilityFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive_distance" => Ok(AdmissibilityFilter::PositiveDistance),
            "literal" => Ok(AdmissibilityFilter::Literal),
            other => Err(Error::param(format!(
                "unknown filter `{other}` (expected positive_distance or literal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub filter: AdmissibilityFilter,
    /// Worker threads for the scan; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-9,
            filter: AdmissibilityFilter::default(),
            workers: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated,
    Vacuous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub u1: usize,
    pub u2: usize,
    pub v1: usize,
    pub v2: usize,
    pub lhs: f64,
    /// `None` when the bracketed argument is not positive, so `θ` is undefined.
    pub rhs: Option<f64>,
    pub ln_lhs: f64,
    pub ln_rhs: Option<f64>,
}

impl Violation {
    fn key(&self) -> (usize, usize, usize, usize) {
        (self.u1, self.u2, self.v1, self.v2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub kind: Kind,
    pub status: Status,
    pub proximal_pair_count: usize,
    pub admissible_quadruple_count: usize,
    pub filtered_count: usize,
    /// Sorted by `(u1, u2, v1, v2)`.
    pub violations: Vec<Violation>,
}

/// All `(u, v) ∈ A × A` with `|d(u, T v) - d(A,B)| <= tol`, sorted.
pub fn enumerate_proximal_pairs(inst: &FiniteInstance, tol: f64) -> Vec<(usize, usize)> {
    let (dab, _) = set_distance(inst, tol);
    proximal_pairs_at(inst, dab, tol)
}

pub(crate) fn proximal_pairs_at(inst: &FiniteInstance, dab: f64, tol: f64) -> Vec<(usize, usize)> {
    inst.a()
        .iter()
        .flat_map(|&u| inst.a().iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| (inst.distance(u, inst.image(v)) - dab).abs() <= tol)
        .collect()
}

pub fn verify_first_kind(
    inst: &FiniteInstance,
    theta: &ThetaSpec,
    phi: &PhiSpec,
    params: &ContractionParams,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    verify(inst, Kind::First, theta, phi, params, opts)
}

pub fn verify_second_kind(
    inst: &FiniteInstance,
    theta: &ThetaSpec,
    phi: &PhiSpec,
    params: &ContractionParams,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    verify(inst, Kind::Second, theta, phi, params, opts)
}

pub fn verify(
    inst: &FiniteInstance,
    kind: Kind,
    theta: &ThetaSpec,
    phi: &PhiSpec,
    params: &ContractionParams,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    theta.ensure_admissible()?;
    phi.ensure_admissible()?;
    let pairs = enumerate_proximal_pairs(inst, opts.tol);
    let scan = || scan_quadruples(inst, kind, theta, phi, params, opts, &pairs);
    let (admissible, mut violations) = match opts.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::param(format!("cannot start {n} workers: {e}")))?
            .install(scan),
        None => scan(),
    }?;
    violations.sort_by_key(Violation::key);

    let total = pairs.len() * pairs.len();
    let status = if admissible == 0 {
        Status::Vacuous
    } else if violations.is_empty() {
        Status::Holds
    } else {
        Status::Violated
    };
    Ok(VerificationReport {
        kind,
        status,
        proximal_pair_count: pairs.len(),
        admissible_quadruple_count: admissible,
        filtered_count: total - admissible,
        violations,
    })
}

fn scan_quadruples(
    inst: &FiniteInstance,
    kind: Kind,
    theta: &ThetaSpec,
    phi: &PhiSpec,
    params: &ContractionParams,
    opts: &VerifyOptions,
    pairs: &[(usize, usize)],
) -> Result<(usize, Vec<Violation>)> {
    let [a, b, c, h] = params.coefficients();
    let tol = opts.tol;
    // Points the inequality is evaluated on: the pair itself, or its images.
    let lift = |x: usize| match kind {
        Kind::First => x,
        Kind::Second => inst.image(x),
    };
    let d = |x: usize, y: usize| inst.distance(x, y);

    let rows: Vec<Result<(usize, Vec<Violation>)>> = pairs
        .par_iter()
        .map(|&(u1, v1)| {
            let (p1, q1) = (lift(u1), lift(v1));
            let mut admissible = 0usize;
            let mut found = Vec::new();
            for &(u2, v2) in pairs {
                let (p2, q2) = (lift(u2), lift(v2));
                let lhs_d = d(p1, p2);
                if lhs_d <= tol {
                    continue;
                }
                if opts.filter == AdmissibilityFilter::Literal && p1 == q1 {
                    continue;
                }
                admissible += 1;
                let arg = a * d(q1, q2) + b * d(p1, q1) + c * d(p2, q2) + h * (d(q1, p2) + d(q2, p1));
                let ln_lhs = theta.ln_eval(lhs_d)?;
                let ln_rhs = if arg > tol {
                    Some(phi.ln_apply(theta.ln_eval(arg)?)?)
                } else {
                    None
                };
                let holds = matches!(ln_rhs, Some(r) if ln_lhs <= r + tol);
                if !holds {
                    found.push(Violation {
                        u1,
                        u2,
                        v1,
                        v2,
                        lhs: ln_lhs.exp(),
                        rhs: ln_rhs.map(f64::exp),
                        ln_lhs,
                        ln_rhs,
                    });
                }
            }
            Ok((admissible, found))
        })
        .collect();

    let mut admissible = 0;
    let mut violations = Vec::new();
    for row in rows {
        let (n, v) = row?;
        admissible += n;
        violations.extend(v);
    }
    Ok((admissible, violations))
}
