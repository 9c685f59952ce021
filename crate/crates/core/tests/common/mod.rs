#![allow(dead_code, clippy::needless_range_loop)]

use bestprox_core::{FiniteInstance, MetricSpec, Point};
use proptest::prelude::*;

/// Random Euclidean instance in the plane: `A` on the left, `B` on the
/// right, an arbitrary map between them. Coordinates sit on a coarse grid so
/// that distance ties (and hence non-trivial proximal structure) are common.
#[derive(Debug, Clone)]
pub struct Planar {
    pub a: Vec<(f64, f64)>,
    pub b: Vec<(f64, f64)>,
    pub map: Vec<usize>,
}

impl Planar {
    pub fn build(&self) -> FiniteInstance {
        self.build_scaled(1.0)
    }

    pub fn build_scaled(&self, s: f64) -> FiniteInstance {
        let a_ids: Vec<String> = (0..self.a.len()).map(|i| format!("a{i}")).collect();
        let b_ids: Vec<String> = (0..self.b.len()).map(|i| format!("b{i}")).collect();
        let mut points: Vec<Point> = self
            .a
            .iter()
            .zip(&a_ids)
            .map(|(&(x, y), id)| Point::tuple(id.clone(), vec![s * x, s * y]))
            .collect();
        points.extend(
            self.b
                .iter()
                .zip(&b_ids)
                .map(|(&(x, y), id)| Point::tuple(id.clone(), vec![s * x, s * y])),
        );
        let a: Vec<&str> = a_ids.iter().map(String::as_str).collect();
        let b: Vec<&str> = b_ids.iter().map(String::as_str).collect();
        let map: Vec<(&str, &str)> = self.map.iter().enumerate().map(|(i, &j)| (a[i], b[j])).collect();
        FiniteInstance::new(points, MetricSpec::Euclidean, &a, &b, &map).unwrap()
    }
}

fn coord() -> impl Strategy<Value = f64> {
    (0u8..=8).prop_map(|k| f64::from(k) / 2.0)
}

pub fn planar(max: usize) -> impl Strategy<Value = Planar> {
    (1..=max, 1..=max).prop_flat_map(|(na, nb)| {
        (
            prop::collection::vec((Just(0.0), coord()), na),
            prop::collection::vec((coord().prop_map(|x| x + 1.0), coord()), nb),
            prop::collection::vec(0..nb, na),
        )
            .prop_map(|(a, b, map)| Planar { a, b, map })
    })
}

/// Vertical chains `(0, y_i)` / `(1, y_i)` with `T(0, y_i) = (1, y_{i+1})`
/// and the last point fixed, like the quartic fixture but with random
/// ordinates.
pub fn chain(max: usize) -> impl Strategy<Value = Planar> {
    prop::collection::vec(1u32..=64, 1..=max).prop_map(|gaps| {
        let mut ys = vec![0.0];
        for g in gaps {
            let last = *ys.last().unwrap();
            ys.push(last + f64::from(g) / 16.0);
        }
        ys.reverse();
        let n = ys.len();
        Planar {
            a: ys.iter().map(|&y| (0.0, y)).collect(),
            b: ys.iter().map(|&y| (1.0, y)).collect(),
            map: (0..n).map(|i| (i + 1).min(n - 1)).collect(),
        }
    })
}

/// Random symmetric matrix with zero diagonal; not necessarily a metric.
pub fn dissimilarity(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(1u8..=6, n * (n - 1) / 2).prop_map(move |upper| {
        let mut m = vec![vec![0.0; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m[i][j] = f64::from(upper[k]);
                m[j][i] = m[i][j];
                k += 1;
            }
        }
        m
    })
}

/// Direct-loop evaluation of the contraction inequality on raw values
/// (`θ(t) = e^t`, `φ(t) = t^k`), over all of `A⁴`. Shares nothing with the
/// optimized verifier beyond the instance's distance function.
pub fn oracle_violations(
    inst: &FiniteInstance,
    second: bool,
    k: f64,
    [a, b, c, h]: [f64; 4],
    tol: f64,
) -> Vec<(String, String, String, String)> {
    let n = inst.len();
    let in_a: Vec<bool> = (0..n).map(|i| inst.in_a(i)).collect();
    let in_b: Vec<bool> = (0..n).map(|i| inst.in_b(i)).collect();
    let mut dab = f64::INFINITY;
    for x in 0..n {
        for y in 0..n {
            if in_a[x] && in_b[y] {
                dab = dab.min(inst.distance(x, y));
            }
        }
    }
    let pts: Vec<usize> = (0..n).filter(|&i| in_a[i]).collect();
    let t = |x: usize| inst.image(x);
    let lift = |x: usize| if second { t(x) } else { x };
    let d = |x: usize, y: usize| inst.distance(x, y);

    let mut out = Vec::new();
    for &u1 in &pts {
        for &u2 in &pts {
            for &v1 in &pts {
                for &v2 in &pts {
                    if (d(u1, t(v1)) - dab).abs() > tol || (d(u2, t(v2)) - dab).abs() > tol {
                        continue;
                    }
                    let (p1, p2, q1, q2) = (lift(u1), lift(u2), lift(v1), lift(v2));
                    let left = d(p1, p2);
                    if left <= tol {
                        continue;
                    }
                    let arg = a * d(q1, q2) + b * d(p1, q1) + c * d(p2, q2) + h * (d(q1, p2) + d(q2, p1));
                    let bad = arg <= tol || left.exp() > arg.exp().powf(k) * (1.0 + tol);
                    if bad {
                        let id = |x: usize| inst.id(x).to_string();
                        out.push((id(u1), id(u2), id(v1), id(v2)));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Chains whose consecutive gaps shrink by a factor of at most 1/2, so the
/// first-kind inequality with `θ = exp`, `φ = pow(1/2)`, `a = 1` holds.
/// Ratios stay at least 1/4 so every gap is well above `sqrt(tol)`.
pub fn contracting_chain(max: usize) -> impl Strategy<Value = Planar> {
    (1u32..=16, prop::collection::vec(4u32..=8, 1..=max)).prop_map(|(first, ratios)| {
        let mut gaps = vec![f64::from(first)];
        for r in ratios {
            let last = *gaps.last().unwrap();
            gaps.push(last * f64::from(r) / 16.0);
        }
        let mut ys = vec![0.0];
        for g in gaps.iter().rev() {
            let last = *ys.last().unwrap();
            ys.push(last + g);
        }
        ys.reverse();
        let n = ys.len();
        Planar {
            a: ys.iter().map(|&y| (0.0, y)).collect(),
            b: ys.iter().map(|&y| (1.0, y)).collect(),
            map: (0..n).map(|i| (i + 1).min(n - 1)).collect(),
        }
    })
}
