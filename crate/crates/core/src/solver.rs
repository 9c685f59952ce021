//! Proximal Picard iteration: from `u_n` pick `u_{n+1}` with
//! `d(u_{n+1}, T u_n) = d(A,B)`, until consecutive iterates meet.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::error::Error;
use crate::metric::FiniteInstance;
use crate::proximal::{proximal_subsets, ProximalProfile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Tolerance on `d(u_{n+1}, T u_n) = d(A,B)`.
    pub tol: f64,
    /// Stop once `d(u_n, u_{n+1}) <= eps_conv`.
    pub eps_conv: f64,
    /// Defaults to `10·|A| + 100`.
    pub max_iter: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-9,
            eps_conv: 1e-10,
            max_iter: None,
        }
    }
}

impl SolveOptions {
    /// Zero tolerances, for exact-integer instances.
    pub fn exact() -> Self {
        SolveOptions {
            tol: 0.0,
            eps_conv: 0.0,
            max_iter: None,
        }
    }

    pub fn max_iter_for(&self, inst: &FiniteInstance) -> usize {
        self.max_iter.unwrap_or(10 * inst.a().len() + 100)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Converged,
    MaxIter,
    InfeasibleStep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    pub start_in_a0: bool,
    pub iterates: Vec<usize>,
    /// `d(u_n, u_{n+1})`.
    pub step_residuals: Vec<f64>,
    /// `|d(u_{n+1}, T u_n) - d(A,B)|`.
    pub proximal_residuals: Vec<f64>,
    pub status: TraceStatus,
}

impl SolveTrace {
    fn start(u0: usize, in_a0: bool) -> Self {
        SolveTrace {
            start_in_a0: in_a0,
            iterates: vec![u0],
            step_residuals: Vec::new(),
            proximal_residuals: Vec::new(),
            status: TraceStatus::MaxIter,
        }
    }

    /// Whether step residuals decrease strictly (by more than `tol`) up to the
    /// converging step.
    pub fn steps_strictly_decreasing(&self, tol: f64) -> bool {
        self.step_residuals.windows(2).all(|w| w[1] < w[0] - tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BppResult {
    pub point: usize,
    /// `|d(u*, T u*) - d(A,B)|`.
    pub bpp_residual: f64,
    /// Whether `bpp_residual <= eps_conv + tol`.
    pub certified: bool,
    pub trace: SolveTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    pub from: usize,
    pub target: usize,
    pub nearest: usize,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Input(#[from] Error),

    #[error("no point of A lies within d(A,B) of the image of the current iterate (nearest at {:.12})", .step.distance)]
    InfeasibleStep { step: StepFailure, trace: SolveTrace },

    #[error("no convergence within {} iterations", .trace.step_residuals.len())]
    NonConvergence { trace: SolveTrace },
}

impl SolveError {
    pub fn trace(&self) -> Option<&SolveTrace> {
        match self {
            SolveError::Input(_) => None,
            SolveError::InfeasibleStep { trace, .. } | SolveError::NonConvergence { trace } => Some(trace),
        }
    }
}

/// Nearest point of `A` to `T(u)`, first in declaration order on ties, if it
/// attains `d(A,B)` within `tol`.
pub fn proximal_step(inst: &FiniteInstance, profile: &ProximalProfile, u: usize) -> Result<usize, StepFailure> {
    let target = inst.image(u);
    let (nearest, distance) =
        inst.a()
            .iter()
            .map(|&a| (a, inst.distance(a, target)))
            .fold(
                (usize::MAX, f64::INFINITY),
                |best, cand| if cand.1 < best.1 { cand } else { best },
            );
    let bound = profile.dab + profile.tol;
    if distance <= bound {
        Ok(nearest)
    } else {
        Err(StepFailure {
            from: u,
            target,
            nearest,
            distance,
            bound,
        })
    }
}

pub fn solve(inst: &FiniteInstance, u0: &str, opts: &SolveOptions) -> Result<BppResult, SolveError> {
    let u0 = inst.index_of(u0)?;
    if !inst.in_a(u0) {
        return Err(Error::param(format!("start `{}` is not in A", inst.id(u0))).into());
    }
    let profile = proximal_subsets(inst, opts.tol);
    solve_from(inst, &profile, u0, opts)
}

pub fn solve_from(
    inst: &FiniteInstance,
    profile: &ProximalProfile,
    u0: usize,
    opts: &SolveOptions,
) -> Result<BppResult, SolveError> {
    let mut trace = SolveTrace::start(u0, profile.in_a0(u0));
    let mut u = u0;
    for _ in 0..opts.max_iter_for(inst) {
        let next = match proximal_step(inst, profile, u) {
            Ok(next) => next,
            Err(step) => {
                trace.status = TraceStatus::InfeasibleStep;
                return Err(SolveError::InfeasibleStep { step, trace });
            }
        };
        let step = inst.distance(u, next);
        trace.iterates.push(next);
        trace.step_residuals.push(step);
        trace
            .proximal_residuals
            .push((inst.distance(next, inst.image(u)) - profile.dab).abs());
        u = next;
        if step <= opts.eps_conv {
            trace.status = TraceStatus::Converged;
            let bpp_residual = (inst.distance(u, inst.image(u)) - profile.dab).abs();
            return Ok(BppResult {
                point: u,
                bpp_residual,
                certified: bpp_residual <= opts.eps_conv + opts.tol,
                trace,
            });
        }
    }
    trace.status = TraceStatus::MaxIter;
    Err(SolveError::NonConvergence { trace })
}

/// `|d(u, T u) - d(A,B)| <= tol`.
pub fn verify_bpp(inst: &FiniteInstance, u: &str, tol: f64) -> Result<bool, Error> {
    let u = inst.index_of(u)?;
    if !inst.in_a(u) {
        return Err(Error::param(format!("`{}` is not in A", inst.id(u))));
    }
    let profile = proximal_subsets(inst, tol);
    Ok(is_bpp(inst, &profile, u))
}

pub(crate) fn is_bpp(inst: &FiniteInstance, profile: &ProximalProfile, u: usize) -> bool {
    (inst.distance(u, inst.image(u)) - profile.dab).abs() <= profile.tol
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartOutcome {
    pub start: usize,
    pub result: Result<BppResult, SolveError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    /// Solver limits and scan hits together form a single point.
    pub unique: bool,
    /// All best proximity points share one image under `T`.
    pub unique_image: bool,
    /// Union of solver limits and scan hits, ascending.
    pub limits: Vec<usize>,
    /// Points of `A` certified by the exhaustive scan.
    pub scan_hits: Vec<usize>,
    /// One entry per start in `A0`, ascending.
    pub starts: Vec<StartOutcome>,
}

/// Multi-start from every point of `A0` plus an exhaustive scan of `A`.
pub fn uniqueness_check(inst: &FiniteInstance, opts: &SolveOptions) -> UniquenessReport {
    let profile = proximal_subsets(inst, opts.tol);
    uniqueness_with(inst, &profile, opts)
}

pub fn uniqueness_with(inst: &FiniteInstance, profile: &ProximalProfile, opts: &SolveOptions) -> UniquenessReport {
    let starts: Vec<StartOutcome> = profile
        .a0
        .par_iter()
        .map(|&start| StartOutcome {
            start,
            result: solve_from(inst, profile, start, opts),
        })
        .collect();
    let scan_hits: Vec<usize> = inst.a().iter().copied().filter(|&u| is_bpp(inst, profile, u)).collect();

    let mut limits: Vec<usize> = starts
        .iter()
        .filter_map(|s| s.result.as_ref().ok().map(|r| r.point))
        .chain(scan_hits.iter().copied())
        .collect();
    limits.sort_unstable();
    limits.dedup();

    let mut images: Vec<usize> = limits.iter().map(|&u| inst.image(u)).collect();
    images.sort_unstable();
    images.dedup();

    UniquenessReport {
        unique: limits.len() == 1,
        unique_image: images.len() == 1,
        limits,
        scan_hits,
        starts,
    }
}
