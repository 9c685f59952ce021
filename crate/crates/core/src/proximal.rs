//! `d(A,B)`, the proximal subsets `A0`/`B0`, and the structural hypotheses
//! (P-property, approximate compactness, `T(A0) ⊆ B0`).

use rayon::prelude::*;
use serde::Serialize;

use crate::metric::FiniteInstance;

#[derive(Debug, Clone, PartialEq)]
pub struct ProximalProfile {
    pub dab: f64,
    pub tol: f64,
    /// `(a, b)` index pairs with `|d(a,b) - dab| <= tol`, ascending.
    pub attaining_pairs: Vec<(usize, usize)>,
    pub a0: Vec<usize>,
    pub b0: Vec<usize>,
}

impl ProximalProfile {
    pub fn in_a0(&self, idx: usize) -> bool {
        self.a0.binary_search(&idx).is_ok()
    }

    pub fn in_b0(&self, idx: usize) -> bool {
        self.b0.binary_search(&idx).is_ok()
    }
}

/// `d(A,B)` together with the pairs attaining it within `tol`.
pub fn set_distance(inst: &FiniteInstance, tol: f64) -> (f64, Vec<(usize, usize)>) {
    let dab = inst
        .a()
        .iter()
        .flat_map(|&a| inst.b().iter().map(move |&b| inst.distance(a, b)))
        .fold(f64::INFINITY, f64::min);
    let pairs = inst
        .a()
        .iter()
        .flat_map(|&a| inst.b().iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| (inst.distance(a, b) - dab).abs() <= tol)
        .collect();
    (dab, pairs)
}

pub fn proximal_subsets(inst: &FiniteInstance, tol: f64) -> ProximalProfile {
    let (dab, attaining_pairs) = set_distance(inst, tol);
    let mut a0: Vec<usize> = attaining_pairs.iter().map(|p| p.0).collect();
    let mut b0: Vec<usize> = attaining_pairs.iter().map(|p| p.1).collect();
    a0.sort_unstable();
    a0.dedup();
    b0.sort_unstable();
    b0.dedup();
    ProximalProfile {
        dab,
        tol,
        attaining_pairs,
        a0,
        b0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PMode {
    /// `d(x1,x2) = d(y1,y2)`.
    #[default]
    Strict,
    /// `d(x1,x2) <= d(y1,y2)`.
    Weak,
}

impl std::str::FromStr for PMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(PMode::Strict),
            "weak" => Ok(PMode::Weak),
            other => Err(format!("unknown P-property mode `{other}` (expected strict or weak)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PWitness {
    pub x1: String,
    pub y1: String,
    pub x2: String,
    pub y2: String,
    pub d_x: f64,
    pub d_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PPropertyReport {
    pub mode: PMode,
    pub passed: bool,
    pub checked_tuples: usize,
    pub witness: Option<PWitness>,
}

/// Checks the P-property over every ordered pair of attaining pairs. The
/// witness is the first violation in `(x1, y1, x2, y2)` order.
pub fn check_p_property(inst: &FiniteInstance, profile: &ProximalProfile, mode: PMode) -> PPropertyReport {
    let pairs = &profile.attaining_pairs;
    let tol = profile.tol;
    let violates = |d_x: f64, d_y: f64| match mode {
        PMode::Strict => (d_x - d_y).abs() > tol,
        PMode::Weak => d_x > d_y + tol,
    };
    let witness = pairs.par_iter().find_map_first(|&(x1, y1)| {
        pairs.iter().find_map(|&(x2, y2)| {
            let (d_x, d_y) = (inst.distance(x1, x2), inst.distance(y1, y2));
            violates(d_x, d_y).then(|| PWitness {
                x1: inst.id(x1).to_string(),
                y1: inst.id(y1).to_string(),
                x2: inst.id(x2).to_string(),
                y2: inst.id(y2).to_string(),
                d_x,
                d_y,
            })
        })
    });
    PPropertyReport {
        mode,
        passed: witness.is_none(),
        checked_tuples: pairs.len() * pairs.len(),
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompactDirection {
    /// `B` approximately compact with respect to `A`.
    #[serde(rename = "B_wrt_A")]
    BWrtA,
    /// `A` approximately compact with respect to `B`.
    #[serde(rename = "A_wrt_B")]
    AWrtB,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub direction: CompactDirection,
    pub passed: bool,
    pub note: &'static str,
}

pub fn check_approx_compact(_inst: &FiniteInstance, direction: CompactDirection) -> CompactnessReport {
    CompactnessReport {
        direction,
        passed: true,
        note: "finite set: every sequence in it has a constant, hence convergent, subsequence",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeReport {
    pub passed: bool,
    /// First `a` in `A0` whose image is outside `B0`, with that image.
    pub witness: Option<(String, String)>,
}

/// `T(A0) ⊆ B0`.
pub fn check_range_condition(inst: &FiniteInstance, profile: &ProximalProfile) -> RangeReport {
    let witness = profile
        .a0
        .iter()
        .map(|&a| (a, inst.image(a)))
        .find(|&(_, ta)| !profile.in_b0(ta))
        .map(|(a, ta)| (inst.id(a).to_string(), inst.id(ta).to_string()));
    RangeReport {
        passed: witness.is_none(),
        witness,
    }
}
