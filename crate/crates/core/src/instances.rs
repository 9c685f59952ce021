//! Built-in instance generators.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metric::{FiniteInstance, MetricSpec, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// Triangular numbers on the real line, `A = {λ_3n}`, `B = {λ_3n-1}`.
    Triangular,
    /// Two vertical columns with ordinates `{0} ∪ {4^-j}`, `T` quarters the ordinate.
    Quartic,
    /// Two points per side, `T` a horizontal shift. Two best proximity points.
    Strip,
    /// `n` points per column, `T(0,i) = (1, floor(i/2))`. Synthetic load for
    /// the quadruple scan: exactly `n` proximal pairs.
    Halving,
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangular" => Ok(Builtin::Triangular),
            "quartic" => Ok(Builtin::Quartic),
            "strip" => Ok(Builtin::Strip),
            "halving" => Ok(Builtin::Halving),
            other => Err(Error::param(format!(
                "unknown builtin `{other}` (expected triangular, quartic, strip or halving)"
            ))),
        }
    }
}

pub fn generate_builtin(kind: Builtin, size: usize) -> Result<FiniteInstance> {
    match kind {
        Builtin::Triangular => triangular(size),
        Builtin::Quartic => quartic(size),
        Builtin::Strip => Ok(strip()),
        Builtin::Halving => halving(size),
    }
}

/// `λ_n = n(n+1)/2`.
pub fn triangular_number(n: u64) -> u64 {
    n * (n + 1) / 2
}

pub fn triangular(n: usize) -> Result<FiniteInstance> {
    if n == 0 {
        return Err(Error::param("triangular size must be at least 1"));
    }
    let n = n as u64;
    let points = (1..=3 * n)
        .map(|i| {
            let v = triangular_number(i);
            Point::scalar(v.to_string(), v as f64)
        })
        .collect();
    let a: Vec<String> = (1..=n).map(|i| triangular_number(3 * i).to_string()).collect();
    let b: Vec<String> = (1..=n).map(|i| triangular_number(3 * i - 1).to_string()).collect();
    let a_ids: Vec<&str> = a.iter().map(String::as_str).collect();
    let b_ids: Vec<&str> = b.iter().map(String::as_str).collect();
    let map: Vec<(&str, &str)> = a_ids.iter().copied().zip(b_ids.iter().copied()).collect();
    FiniteInstance::new(points, MetricSpec::Absolute, &a_ids, &b_ids, &map)
}

fn pow4_label(j: u32) -> String {
    if j == 0 {
        "1".to_string()
    } else {
        format!("1/{}", 4u64.pow(j))
    }
}

pub fn quartic(depth: usize) -> Result<FiniteInstance> {
    if depth == 0 {
        return Err(Error::param("quartic depth must be at least 1"));
    }
    // 4^-depth must stay a normal float.
    if depth > 500 {
        return Err(Error::param("quartic depth must be at most 500"));
    }
    let depth = depth as u32;
    // Ordinates in declaration order: 1, 1/4, ..., 4^-depth, 0.
    let mut ys: Vec<(String, f64)> = (0..=depth).map(|j| (pow4_label(j), 0.25f64.powi(j as i32))).collect();
    ys.push(("0".to_string(), 0.0));

    let a_id = |label: &str| format!("(0,{label})");
    let b_id = |label: &str| format!("(1,{label})");
    let mut points: Vec<Point> = ys.iter().map(|(l, y)| Point::tuple(a_id(l), vec![0.0, *y])).collect();
    points.extend(ys.iter().map(|(l, y)| Point::tuple(b_id(l), vec![1.0, *y])));

    let a: Vec<String> = ys.iter().map(|(l, _)| a_id(l)).collect();
    let b: Vec<String> = ys.iter().map(|(l, _)| b_id(l)).collect();
    let map: Vec<(String, String)> = (0..ys.len())
        .map(|i| {
            let target = if i + 2 >= ys.len() { b_id("0") } else { b[i + 1].clone() };
            (a[i].clone(), target)
        })
        .collect();

    let a_ids: Vec<&str> = a.iter().map(String::as_str).collect();
    let b_ids: Vec<&str> = b.iter().map(String::as_str).collect();
    let map: Vec<(&str, &str)> = map.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    FiniteInstance::new(points, MetricSpec::Euclidean, &a_ids, &b_ids, &map)
}

pub fn strip() -> FiniteInstance {
    let points = vec![
        Point::tuple("(0,0)", vec![0.0, 0.0]),
        Point::tuple("(0,1)", vec![0.0, 1.0]),
        Point::tuple("(2,0)", vec![2.0, 0.0]),
        Point::tuple("(2,1)", vec![2.0, 1.0]),
    ];
    FiniteInstance::new(
        points,
        MetricSpec::Euclidean,
        &["(0,0)", "(0,1)"],
        &["(2,0)", "(2,1)"],
        &[("(0,0)", "(2,0)"), ("(0,1)", "(2,1)")],
    )
    .expect("strip fixture is well formed")
}

pub fn halving(n: usize) -> Result<FiniteInstance> {
    if n == 0 {
        return Err(Error::param("halving size must be at least 1"));
    }
    let a: Vec<String> = (0..n).map(|i| format!("(0,{i})")).collect();
    let b: Vec<String> = (0..n).map(|i| format!("(1,{i})")).collect();
    let mut points: Vec<Point> = (0..n)
        .map(|i| Point::tuple(a[i].clone(), vec![0.0, i as f64]))
        .collect();
    points.extend((0..n).map(|i| Point::tuple(b[i].clone(), vec![1.0, i as f64])));
    let a_ids: Vec<&str> = a.iter().map(String::as_str).collect();
    let b_ids: Vec<&str> = b.iter().map(String::as_str).collect();
    let map: Vec<(&str, &str)> = (0..n).map(|i| (a_ids[i], b_ids[i / 2])).collect();
    FiniteInstance::new(points, MetricSpec::Euclidean, &a_ids, &b_ids, &map)
}
