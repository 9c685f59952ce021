//! Finite point sets, metrics, and the instance type every analysis reads.
//!
//! Points are addressed internally by their declaration index. Every scan in
//! this crate walks indices in ascending order, so "first witness" always means
//! first in declaration order.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest magnitude for which every integer is exactly representable as `f64`.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

#[derive(Debug, Clone, PartialEq)]
pub enum PointValue {
    Scalar(f64),
    Tuple(Vec<f64>),
}

impl PointValue {
    pub fn arity(&self) -> usize {
        match self {
            PointValue::Scalar(_) => 1,
            PointValue::Tuple(xs) => xs.len(),
        }
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            PointValue::Scalar(x) => std::slice::from_ref(x),
            PointValue::Tuple(xs) => xs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub id: String,
    /// Optional only for instances with an explicit distance matrix.
    pub value: Option<PointValue>,
}

impl Point {
    pub fn scalar(id: impl Into<String>, x: f64) -> Self {
        Point {
            id: id.into(),
            value: Some(PointValue::Scalar(x)),
        }
    }

    pub fn tuple(id: impl Into<String>, xs: Vec<f64>) -> Self {
        Point {
            id: id.into(),
            value: Some(PointValue::Tuple(xs)),
        }
    }

    pub fn bare(id: impl Into<String>) -> Self {
        Point {
            id: id.into(),
            value: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// `|x - y|` on scalar points.
    Absolute,
    /// Euclidean distance on coordinate tuples (scalars count as 1-tuples).
    Euclidean,
    /// Full matrix, rows and columns in point declaration order.
    Explicit(Vec<Vec<f64>>),
}

impl MetricSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            MetricSpec::Absolute => "absolute",
            MetricSpec::Euclidean => "euclidean",
            MetricSpec::Explicit(_) => "explicit",
        }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, MetricSpec::Explicit(_))
    }
}

/// A finite metric space with subsets `A`, `B` and a total map `T: A -> B`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteInstance {
    points: Vec<Point>,
    metric: MetricSpec,
    a: Vec<usize>,
    b: Vec<usize>,
    map: Vec<Option<usize>>,
    index: HashMap<String, usize>,
    exact: Option<Vec<i64>>,
}

impl FiniteInstance {
    /// Builds an instance, checking structure and referential integrity.
    ///
    /// Metric axioms are not checked here; see [`validate_metric_axioms`].
    pub fn new(
        points: Vec<Point>,
        metric: MetricSpec,
        a_ids: &[&str],
        b_ids: &[&str],
        map: &[(&str, &str)],
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.id.clone(), i).is_some() {
                return Err(Error::integrity(format!("duplicate point id `{}`", p.id)));
            }
        }
        check_values(&points, &metric)?;

        let resolve = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownId(id.to_string()));
        let subset = |ids: &[&str], name: &str| -> Result<Vec<usize>> {
            if ids.is_empty() {
                return Err(Error::integrity(format!("subset {name} is empty")));
            }
            let mut out = ids.iter().map(|id| resolve(id)).collect::<Result<Vec<_>>>()?;
            out.sort_unstable();
            if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::integrity(format!(
                    "point `{}` listed twice in {name}",
                    points[w[0]].id
                )));
            }
            Ok(out)
        };
        let a = subset(a_ids, "A")?;
        let b = subset(b_ids, "B")?;

        let mut table = vec![None; points.len()];
        for &(from, to) in map {
            let (u, v) = (resolve(from)?, resolve(to)?);
            if a.binary_search(&u).is_err() {
                return Err(Error::integrity(format!("T is given at `{from}`, which is not in A")));
            }
            if b.binary_search(&v).is_err() {
                return Err(Error::integrity(format!(
                    "T maps `{from}` to `{to}`, which is not in B"
                )));
            }
            if table[u].replace(v).is_some() {
                return Err(Error::integrity(format!("T is given twice at `{from}`")));
            }
        }
        if let Some(&u) = a.iter().find(|&&u| table[u].is_none()) {
            return Err(Error::integrity(format!("T is not defined at `{}`", points[u].id)));
        }

        Ok(FiniteInstance {
            points,
            metric,
            a,
            b,
            map: table,
            index,
            exact: None,
        })
    }

    /// Switches to exact integer arithmetic. Requires the absolute metric and
    /// integer-valued scalar points.
    pub fn into_exact_int(mut self) -> Result<Self> {
        if self.metric != MetricSpec::Absolute {
            return Err(Error::param(format!(
                "exact-int mode needs the absolute metric, instance uses `{}`",
                self.metric.kind()
            )));
        }
        let mut ints = Vec::with_capacity(self.points.len());
        for p in &self.points {
            match p.value {
                Some(PointValue::Scalar(x)) if x.fract() == 0.0 && x.abs() < EXACT_INT_LIMIT / 2.0 => {
                    ints.push(x as i64)
                }
                _ => {
                    return Err(Error::param(format!(
                        "exact-int mode needs integer scalar points, `{}` is not one",
                        p.id
                    )))
                }
            }
        }
        self.exact = Some(ints);
        Ok(self)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of `A`, ascending.
    pub fn a(&self) -> &[usize] {
        &self.a
    }

    /// Indices of `B`, ascending.
    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.points[idx].id
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn in_a(&self, idx: usize) -> bool {
        self.a.binary_search(&idx).is_ok()
    }

    pub fn in_b(&self, idx: usize) -> bool {
        self.b.binary_search(&idx).is_ok()
    }

    /// `T(u)` for `u` in `A`.
    ///
    /// # Panics
    /// If `u` is not an index of `A`.
    pub fn image(&self, u: usize) -> usize {
        self.map[u].unwrap_or_else(|| panic!("T is undefined at `{}`", self.points[u].id))
    }

    /// `(u, T(u))` pairs in `A` order.
    pub fn mapping(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.a.iter().map(move |&u| (u, self.image(u)))
    }

    /// Distance between two points by index.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        if let Some(ints) = &self.exact {
            return ints[i].abs_diff(ints[j]) as f64;
        }
        match &self.metric {
            MetricSpec::Explicit(m) => m[i][j],
            MetricSpec::Absolute => {
                let (x, y) = (self.coords(i)[0], self.coords(j)[0]);
                (x - y).abs()
            }
            MetricSpec::Euclidean => {
                let (x, y) = (self.coords(i), self.coords(j));
                x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
            }
        }
    }

    fn coords(&self, i: usize) -> &[f64] {
        self.points[i]
            .value
            .as_ref()
            .expect("analytic metrics require point values")
            .coords()
    }
}

fn check_values(points: &[Point], metric: &MetricSpec) -> Result<()> {
    match metric {
        MetricSpec::Explicit(m) => {
            if m.len() != points.len() {
                return Err(Error::schema(
                    "metric.matrix",
                    format!("expected {} rows, found {}", points.len(), m.len()),
                ));
            }
            for (r, row) in m.iter().enumerate() {
                if row.len() != points.len() {
                    return Err(Error::schema(
                        format!("metric.matrix[{r}]"),
                        format!("expected {} entries, found {}", points.len(), row.len()),
                    ));
                }
                if let Some((c, x)) = row.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x >= 0.0)) {
                    return Err(Error::schema(
                        format!("metric.matrix[{r}][{c}]"),
                        format!("entry {x} is not a finite non-negative real"),
                    ));
                }
            }
        }
        MetricSpec::Absolute | MetricSpec::Euclidean => {
            let mut arity = None;
            for p in points {
                let Some(v) = &p.value else {
                    return Err(Error::integrity(format!(
                        "point `{}` has no value but the {} metric needs one",
                        p.id,
                        metric.kind()
                    )));
                };
                if v.coords().iter().any(|x| !x.is_finite()) {
                    return Err(Error::integrity(format!(
                        "point `{}` has a non-finite coordinate",
                        p.id
                    )));
                }
                if *metric == MetricSpec::Absolute && !matches!(v, PointValue::Scalar(_)) {
                    return Err(Error::integrity(format!(
                        "absolute metric needs scalar points, `{}` is a tuple",
                        p.id
                    )));
                }
                match arity {
                    None => arity = Some(v.arity()),
                    Some(n) if n != v.arity() => {
                        return Err(Error::integrity(format!(
                            "point `{}` has arity {}, expected {n}",
                            p.id,
                            v.arity()
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(())
}

/// `d(i, j)` by point id.
pub fn eval_metric(inst: &FiniteInstance, i: &str, j: &str) -> Result<f64> {
    Ok(inst.distance(inst.index_of(i)?, inst.index_of(j)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    /// Ids of the first violating pair or triple.
    pub witness: Option<Vec<String>>,
    pub detail: Option<String>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            passed: true,
            witness: None,
            detail: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    /// True when the report was produced by construction rather than by scanning.
    pub by_construction: bool,
    pub identity: AxiomCheck,
    pub symmetry: AxiomCheck,
    pub triangle: AxiomCheck,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.identity.passed && self.symmetry.passed && self.triangle.passed
    }
}

/// Metric axioms for the instance. Analytic metrics pass by construction;
/// explicit matrices are scanned exhaustively.
pub fn validate_metric_axioms(inst: &FiniteInstance, tol: f64) -> AxiomReport {
    if inst.metric().is_analytic() {
        AxiomReport {
            by_construction: true,
            identity: AxiomCheck::pass(),
            symmetry: AxiomCheck::pass(),
            triangle: AxiomCheck::pass(),
        }
    } else {
        scan_metric_axioms(inst, tol)
    }
}

/// Exhaustive O(n^3) axiom scan, regardless of metric kind.
pub fn scan_metric_axioms(inst: &FiniteInstance, tol: f64) -> AxiomReport {
    let n = inst.len();
    let d = |i, j| inst.distance(i, j);
    let ids = |xs: &[usize]| Some(xs.iter().map(|&x| inst.id(x).to_string()).collect());

    let mut identity = AxiomCheck::pass();
    'identity: for i in 0..n {
        for j in 0..n {
            let bad = if i == j { d(i, i) > tol } else { d(i, j) <= tol };
            if bad {
                identity = AxiomCheck {
                    passed: false,
                    witness: ids(&[i, j]),
                    detail: Some(format!("d = {}", d(i, j))),
                };
                break 'identity;
            }
        }
    }

    let mut symmetry = AxiomCheck::pass();
    'symmetry: for i in 0..n {
        for j in i + 1..n {
            if (d(i, j) - d(j, i)).abs() > tol {
                symmetry = AxiomCheck {
                    passed: false,
                    witness: ids(&[i, j]),
                    detail: Some(format!("d(i,j) = {}, d(j,i) = {}", d(i, j), d(j, i))),
                };
                break 'symmetry;
            }
        }
    }

    let mut triangle = AxiomCheck::pass();
    'triangle: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d(i, k) > d(i, j) + d(j, k) + tol {
                    triangle = AxiomCheck {
                        passed: false,
                        witness: ids(&[i, j, k]),
                        detail: Some(format!(
                            "d(i,k) = {} exceeds d(i,j) + d(j,k) = {}",
                            d(i, k),
                            d(i, j) + d(j, k)
                        )),
                    };
                    break 'triangle;
                }
            }
        }
    }

    AxiomReport {
        by_construction: false,
        identity,
        symmetry,
        triangle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn explicit(ids: &[&str], m: Vec<Vec<f64>>) -> FiniteInstance {
        let points = ids.iter().map(|id| Point::bare(*id)).collect();
        FiniteInstance::new(
            points,
            MetricSpec::Explicit(m),
            &ids[..1],
            &ids[1..2],
            &[(ids[0], ids[1])],
        )
        .unwrap()
    }

    fn planar() -> FiniteInstance {
        let points = vec![
            Point::tuple("o", vec![0.0, 0.0]),
            Point::tuple("o2", vec![0.0, 0.0]),
            Point::tuple("e1", vec![1.0, 0.0]),
            Point::tuple("e2", vec![0.0, 1.0]),
        ];
        FiniteInstance::new(
            points,
            MetricSpec::Euclidean,
            &["o", "e2"],
            &["e1"],
            &[("o", "e1"), ("e2", "e1")],
        )
        .unwrap()
    }

    #[test]
    fn absolute_distance_from_example() {
        let points = vec![Point::scalar("3", 3.0), Point::scalar("6", 6.0)];
        let inst = FiniteInstance::new(points, MetricSpec::Absolute, &["6"], &["3"], &[("6", "3")]).unwrap();
        assert_eq!(eval_metric(&inst, "6", "3").unwrap(), 3.0);
        assert_eq!(eval_metric(&inst, "3", "6").unwrap(), 3.0);
    }

    #[test]
    fn euclidean_identity_and_diagonal() {
        let inst = planar();
        assert_eq!(eval_metric(&inst, "o", "o2").unwrap(), 0.0);
        assert_eq!(eval_metric(&inst, "e2", "e1").unwrap(), 2f64.sqrt());
    }

    #[test]
    fn unknown_id() {
        assert_eq!(eval_metric(&planar(), "o", "zz"), Err(Error::UnknownId("zz".into())));
    }

    #[test]
    fn analytic_metrics_pass_by_construction() {
        let report = validate_metric_axioms(&planar(), 1e-9);
        assert!(report.passed());
        assert!(report.by_construction);
    }

    #[test]
    fn triangle_violation_reports_first_triple() {
        let inst = explicit(
            &["a", "b", "c"],
            vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]],
        );
        let report = validate_metric_axioms(&inst, 1e-9);
        assert!(!report.passed());
        assert!(report.identity.passed && report.symmetry.passed);
        assert_eq!(report.triangle.witness, Some(vec!["a".into(), "b".into(), "c".into()]));
    }

    #[test]
    fn asymmetric_matrix() {
        let inst = explicit(&["a", "b"], vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        let report = validate_metric_axioms(&inst, 1e-9);
        assert!(!report.symmetry.passed);
        assert_eq!(report.symmetry.witness, Some(vec!["a".into(), "b".into()]));
    }

    #[test]
    fn zero_distance_between_distinct_points() {
        let inst = explicit(&["a", "b"], vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert!(!validate_metric_axioms(&inst, 1e-9).identity.passed);
    }

    #[test]
    fn structural_errors() {
        let pts = || vec![Point::scalar("x", 0.0), Point::scalar("y", 1.0)];
        let err = FiniteInstance::new(pts(), MetricSpec::Absolute, &["x"], &["y"], &[("x", "x")]).unwrap_err();
        assert!(
            matches!(err, Error::Integrity(ref m) if m.contains("not in B")),
            "{err}"
        );
        let err = FiniteInstance::new(pts(), MetricSpec::Absolute, &["x"], &["y"], &[]).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
        let err = FiniteInstance::new(pts(), MetricSpec::Absolute, &[], &["y"], &[]).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
        let err = FiniteInstance::new(
            pts(),
            MetricSpec::Explicit(vec![vec![0.0, 1.0]]),
            &["x"],
            &["y"],
            &[("x", "y")],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Schema { .. }));
        let mixed = vec![Point::scalar("x", 0.0), Point::tuple("y", vec![1.0, 2.0])];
        assert!(FiniteInstance::new(mixed, MetricSpec::Euclidean, &["x"], &["y"], &[("x", "y")]).is_err());
    }

    #[test]
    fn exact_int_mode() {
        let points = vec![Point::scalar("3", 3.0), Point::scalar("6", 6.0)];
        let inst = FiniteInstance::new(points, MetricSpec::Absolute, &["6"], &["3"], &[("6", "3")])
            .unwrap()
            .into_exact_int()
            .unwrap();
        assert!(inst.is_exact());
        assert_eq!(inst.distance(0, 1), 3.0);

        let points = vec![Point::scalar("a", 0.5), Point::scalar("b", 1.0)];
        let inst = FiniteInstance::new(points, MetricSpec::Absolute, &["a"], &["b"], &[("a", "b")]).unwrap();
        assert!(matches!(inst.into_exact_int(), Err(Error::Param(_))));
    }
}
