//! Best proximity points of non-self maps `T: A → B` on finite metric spaces.
//!
//! The crate computes `d(A,B)` and the proximal subsets, checks the
//! structural hypotheses (P-property, `T(A0) ⊆ B0`, approximate compactness),
//! validates the auxiliary function families `θ`/`φ`, verifies the
//! θ-φ proximal contraction inequalities of the first and second kind by
//! exhaustive scan, and runs the proximal Picard iteration
//! `d(u_{n+1}, T u_n) = d(A,B)` with uniqueness certification.

pub mod contraction;
pub mod error;
pub mod functions;
pub mod instances;
pub mod io;
pub mod metric;
pub mod pipeline;
pub mod proximal;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use metric::{FiniteInstance, MetricSpec, Point, PointValue};
