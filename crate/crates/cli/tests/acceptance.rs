//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs the `bestprox` binary where a criterion is about the
//! command line, and the library for the direct-loop oracle and `φ` algebra.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bestprox_core::contraction::{verify, ContractionParams, Kind, Status, VerifyOptions};
use bestprox_core::functions::{phi_iterate, PhiSpec, ThetaSpec};
use bestprox_core::instances::{halving, quartic, strip, triangular};
use bestprox_core::proximal::proximal_subsets;
use bestprox_core::solver::{solve_from, SolveError, SolveOptions};
use bestprox_core::FiniteInstance;
use serde_json::{json, Value};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_json(args: &[&str], workers: Option<&str>) -> Result<(i32, Value, Duration), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bestprox"));
    cmd.args(args).arg("--json");
    match workers {
        Some(w) => cmd.env("BESTPROX_WORKERS", w),
        None => cmd.env_remove("BESTPROX_WORKERS"),
    };
    let start = Instant::now();
    let out = cmd.output().map_err(|e| format!("cannot run bestprox: {e}"))?;
    let elapsed = start.elapsed();
    let v = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("bad report ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok((out.status.code().unwrap_or(-1), v, elapsed))
}

fn row<'a>(report: &'a Value, quantity: &str) -> Result<&'a Value, String> {
    report["example_comparison"]["rows"]
        .as_array()
        .and_then(|rows| rows.iter().find(|r| r["quantity"] == quantity))
        .ok_or_else(|| format!("no comparison row `{quantity}`"))
}

fn theta_phi() -> (ThetaSpec, PhiSpec) {
    (ThetaSpec::Exp, PhiSpec::pow(0.5).unwrap())
}

/// Violation set straight from the displayed inequality, on raw values.
fn direct_loop(inst: &FiniteInstance, second: bool) -> Vec<[String; 4]> {
    let a_pts = inst.a();
    let mut dab = f64::INFINITY;
    for &x in a_pts {
        for &y in inst.b() {
            dab = dab.min(inst.distance(x, y));
        }
    }
    let tol = 1e-9;
    let d = |x: usize, y: usize| inst.distance(x, y);
    let lift = |x: usize| if second { inst.image(x) } else { x };
    let mut out = Vec::new();
    for &u1 in a_pts {
        for &u2 in a_pts {
            for &v1 in a_pts {
                for &v2 in a_pts {
                    if (d(u1, inst.image(v1)) - dab).abs() > tol || (d(u2, inst.image(v2)) - dab).abs() > tol {
                        continue;
                    }
                    let lhs_d = d(lift(u1), lift(u2));
                    if lhs_d <= tol {
                        continue;
                    }
                    let arg = d(lift(v1), lift(v2));
                    if arg <= tol || lhs_d.exp() > arg.exp().sqrt() * (1.0 + tol) {
                        out.push([u1, u2, v1, v2].map(|x| inst.id(x).to_string()));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn verifier_set(inst: &FiniteInstance, kind: Kind) -> Result<(Status, usize, Vec<[String; 4]>), String> {
    let (theta, phi) = theta_phi();
    let r = verify(
        inst,
        kind,
        &theta,
        &phi,
        &ContractionParams::default(),
        &VerifyOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut v: Vec<[String; 4]> = r
        .violations
        .iter()
        .map(|v| [v.u1, v.u2, v.v1, v.v2].map(|x| inst.id(x).to_string()))
        .collect();
    v.sort();
    Ok((r.status, r.admissible_quadruple_count, v))
}

fn c1_demo_exact() -> Check {
    let (code, r, t) = run_json(&["demo-paper", "--size", "10", "--exact-int"], None)?;
    ensure(code == 0, format!("exit code {code}"))?;
    ensure(
        r["profile"]["dAB"] == json!(3.0),
        format!("dAB = {}", r["profile"]["dAB"]),
    )?;
    ensure(r["solve"]["point"] == "6", format!("point = {}", r["solve"]["point"]))?;
    ensure(r["solve"]["start"] == "6", format!("start = {}", r["solve"]["start"]))?;
    ensure(
        r["solve"]["bpp_residual"] == json!(0.0),
        format!("residual = {}", r["solve"]["bpp_residual"]),
    )?;
    let iters = r["solve"]["iterations"].as_u64().unwrap_or(u64::MAX);
    ensure(iters <= 1, format!("{iters} iterations"))?;
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!(
        "dAB = 3, point 6, residual 0, {iters} iteration, {} ms",
        t.as_millis()
    ))
}

fn c2_demo_discrepancies() -> Check {
    let (_, r, _) = run_json(&["demo-paper", "--size", "10", "--exact-int"], None)?;
    ensure(
        r["profile"]["A0"] == json!(["6"]),
        format!("A0 = {}", r["profile"]["A0"]),
    )?;
    ensure(
        r["profile"]["B0"] == json!(["3"]),
        format!("B0 = {}", r["profile"]["B0"]),
    )?;
    for q in ["A0", "B0"] {
        ensure(row(&r, q)?["matches"] == false, format!("claim on {q} not flagged"))?;
    }
    let first = &r["verification"]["first"];
    ensure(first["status"] == "vacuous", format!("first kind {}", first["status"]))?;
    ensure(
        first["admissible_quadruple_count"] == 0,
        format!("admissible = {}", first["admissible_quadruple_count"]),
    )?;
    // The brute-force oracle is the ground truth for A0.
    let inst = triangular(10).unwrap();
    let oracle: Vec<&str> = inst
        .a()
        .iter()
        .filter(|&&a| inst.b().iter().any(|&b| inst.distance(a, b) == 3.0))
        .map(|&a| inst.id(a))
        .collect();
    ensure(oracle == ["6"], format!("oracle A0 = {oracle:?}"))?;
    Ok("A0 = {6}, B0 = {3} flagged against claim A0 = A, B0 = B; first kind vacuous (0 quadruples)".into())
}

fn c3_quartic_holds() -> Check {
    let start = Instant::now();
    let (code, r, t) = run_json(
        &["verify", "--builtin", "quartic", "--size", "3", "--kind", "both"],
        None,
    )?;
    ensure(code == 0, format!("exit code {code}"))?;
    for k in ["first", "second"] {
        let v = &r["verification"][k];
        ensure(v["status"] == "holds", format!("{k}: {}", v["status"]))?;
        ensure(
            v["violation_count"] == 0,
            format!("{k}: {} violations", v["violation_count"]),
        )?;
    }
    let inst = quartic(3).unwrap();
    for (kind, second) in [(Kind::First, false), (Kind::Second, true)] {
        let (status, admissible, got) = verifier_set(&inst, kind)?;
        let want = direct_loop(&inst, second);
        ensure(status == Status::Holds, format!("{kind:?}: {status:?}"))?;
        ensure(got == want, format!("{kind:?}: verifier {got:?} vs oracle {want:?}"))?;
        ensure(
            kind == Kind::Second || admissible >= 12,
            format!("only {admissible} admissible"),
        )?;
    }
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!(
        "both kinds hold, oracle violation sets empty and identical, {} ms (total {} ms)",
        t.as_millis(),
        start.elapsed().as_millis()
    ))
}

fn c4_quartic_solve() -> Check {
    let (code, r, _) = run_json(
        &["solve", "--builtin", "quartic", "--size", "3", "--start", "(0,1)"],
        None,
    )?;
    ensure(code == 0, format!("exit code {code}"))?;
    let path = &r["solve"]["trace"]["iterates"];
    let want = json!(["(0,1)", "(0,1/4)", "(0,1/16)", "(0,1/64)", "(0,0)", "(0,0)"]);
    ensure(*path == want, format!("iterates {path}"))?;
    ensure(r["solve"]["trace"]["status"] == "converged", "not converged")?;
    ensure(r["settings"]["eps_conv"] == json!(1e-10), "eps_conv is not 1e-10")?;
    let res = r["solve"]["bpp_residual"].as_f64().unwrap_or(f64::NAN);
    ensure(res <= 1e-12, format!("residual {res}"))?;
    ensure(r["uniqueness"]["unique"] == true, "not unique")?;
    ensure(
        r["uniqueness"]["limits"] == json!(["(0,0)"]),
        format!("limits {}", r["uniqueness"]["limits"]),
    )?;
    ensure(r["uniqueness"]["scan_hits"] == json!(["(0,0)"]), "scan disagrees")?;
    Ok(format!(
        "(0,1) -> ... -> (0,0), residual {res}, unique via exhaustive scan"
    ))
}

// The criterion states e and e^(1/2) to nine decimals.
#[allow(clippy::approx_constant)]
fn c5_strip_violated() -> Check {
    let (code, r, _) = run_json(&["verify", "--builtin", "strip", "--kind", "first"], None)?;
    ensure(code == 1, format!("exit code {code}"))?;
    let v = &r["verification"]["first"];
    ensure(v["status"] == "violated", format!("status {}", v["status"]))?;
    let w = &v["violations"][0];
    let ids = [&w["u1"], &w["u2"], &w["v1"], &w["v2"]];
    ensure(
        ids == [&json!("(0,0)"), &json!("(0,1)"), &json!("(0,0)"), &json!("(0,1)")],
        format!("witness {w}"),
    )?;
    // Unrounded values from the library for the 1e-9 comparison.
    let (theta, phi) = theta_phi();
    let lib = verify(
        &strip(),
        Kind::First,
        &theta,
        &phi,
        &ContractionParams::default(),
        &VerifyOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let first = lib.violations.first().ok_or("no violation")?;
    let rhs = first.rhs.ok_or("rhs undefined")?;
    ensure((first.lhs - 2.718281828).abs() <= 1e-9, format!("lhs {}", first.lhs))?;
    ensure((rhs - 1.648721271).abs() <= 1e-9, format!("rhs {rhs}"))?;

    let (_, s, _) = run_json(&["solve", "--builtin", "strip"], None)?;
    ensure(
        s["uniqueness"]["limits"] == json!(["(0,0)", "(0,1)"]),
        format!("limits {}", s["uniqueness"]["limits"]),
    )?;
    ensure(s["uniqueness"]["unique"] == false, "reported unique")?;
    Ok(format!(
        "violated, lhs = {:.9}, rhs = {rhs:.9}, two best proximity points",
        first.lhs
    ))
}

fn c6_phi_iteration() -> Check {
    let phi = PhiSpec::pow(0.5).unwrap();
    let v = phi_iterate(&phi, 2.0, 20).map_err(|e| e.to_string())?;
    let closed = 2f64.powf(0.5f64.powi(20));
    ensure(
        (v - closed).abs() <= 1e-12,
        format!("phi^20(2) = {v}, closed form {closed}"),
    )?;
    ensure((v - 1.0).abs() < 1e-5, format!("|phi^20(2) - 1| = {}", v - 1.0))?;
    for n in 0..=100 {
        let one = phi_iterate(&phi, 1.0, n).map_err(|e| e.to_string())?;
        ensure(one == 1.0, format!("phi^{n}(1) = {one}"))?;
    }
    Ok(format!(
        "phi^20(2) = {v:.12}, |error| = {:e}, phi^n(1) = 1 for n <= 100",
        (v - closed).abs()
    ))
}

fn c7_residual_monotonicity() -> Check {
    let mut instances: Vec<(String, FiniteInstance)> = (1..=7)
        .map(|k| (format!("quartic({k})"), quartic(k).unwrap()))
        .collect();
    instances.push(("strip".into(), strip()));
    instances.push(("triangular(10)".into(), triangular(10).unwrap()));
    instances.push(("halving(40)".into(), halving(40).unwrap()));
    let opts = SolveOptions::default();
    let mut checked = 0;
    let mut traces = 0;
    for (name, inst) in &instances {
        let (status, _, _) = verifier_set(inst, Kind::First)?;
        if status != Status::Holds {
            continue;
        }
        checked += 1;
        let prof = proximal_subsets(inst, opts.tol);
        for &u0 in &prof.a0 {
            let trace = match solve_from(inst, &prof, u0, &opts) {
                Ok(r) => r.trace,
                Err(SolveError::InfeasibleStep { trace, .. }) => trace,
                Err(e) => return Err(format!("{name} from {}: {e}", inst.id(u0))),
            };
            traces += 1;
            ensure(
                trace.steps_strictly_decreasing(1e-12),
                format!("{name} from {}: {:?}", inst.id(u0), trace.step_residuals),
            )?;
        }
    }
    ensure(checked > 0, "no instance with a non-vacuous holding contraction")?;
    Ok(format!(
        "{checked} holding instances, {traces} traces strictly decreasing"
    ))
}

fn c8_hypothesis_checkers() -> Check {
    for (b, size) in [("triangular", "10"), ("quartic", "3")] {
        let (code, r, _) = run_json(
            &["analyze", "--builtin", b, "--size", size, "--p-property", "strict"],
            None,
        )?;
        ensure(code == 0, format!("{b}: exit {code}"))?;
        ensure(
            r["hypotheses"]["p_property"]["passed"] == true,
            format!("{b}: P-property failed"),
        )?;
    }
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/");
    let mismatch = format!("{fixtures}p_mismatch.json");
    let mut witnesses = Vec::new();
    for workers in ["1", "4"] {
        let (code, r, _) = run_json(&["analyze", "--instance", &mismatch], Some(workers))?;
        ensure(code == 1, format!("mismatch: exit {code}"))?;
        witnesses.push(r["hypotheses"]["p_property"]["witness"].clone());
    }
    let w = &witnesses[0];
    ensure(witnesses[0] == witnesses[1], "witness depends on worker count")?;
    ensure(
        [&w["x1"], &w["y1"], &w["x2"], &w["y2"]] == [&json!("x1"), &json!("y1"), &json!("x2"), &json!("y2")],
        format!("witness {w}"),
    )?;
    ensure(
        w["d_x"] == json!(2.0) && w["d_y"] == json!(1.0),
        format!("witness distances {w}"),
    )?;

    let bad = format!("{fixtures}triangle_bad.json");
    let (code, r, _) = run_json(&["analyze", "--instance", &bad], None)?;
    ensure(code == 1, format!("triangle: exit {code}"))?;
    ensure(
        r["metric_axioms"]["triangle"]["witness"] == json!(["a", "b", "c"]),
        format!("triangle witness {}", r["metric_axioms"]["triangle"]["witness"]),
    )?;
    Ok(
        "strict P-property passes on triangular/quartic; mismatch witness (x1,y1,x2,y2); triangle (a,b,c) rejected"
            .into(),
    )
}

fn c9_performance() -> Check {
    let inst = halving(1000).unwrap();
    let pairs = bestprox_core::contraction::enumerate_proximal_pairs(&inst, 1e-9).len();
    ensure(pairs == 1000, format!("{pairs} proximal pairs"))?;
    let args = ["verify", "--builtin", "halving", "--size", "1000", "--kind", "first"];
    let n = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .max(2)
        .to_string();
    let (c1, r1, t1) = run_json(&args, Some("1"))?;
    let (cn, rn, tn) = run_json(&args, Some(&n))?;
    ensure(c1 == cn, "exit codes differ")?;
    ensure(r1 == rn, "reports differ between 1 and N workers")?;
    let v = &r1["verification"]["first"];
    let total = v["admissible_quadruple_count"].as_u64().unwrap_or(0) + v["filtered_count"].as_u64().unwrap_or(0);
    ensure(total == 1_000_000, format!("{total} quadruples scanned"))?;
    for t in [t1, tn] {
        ensure(t < Duration::from_secs(5), format!("took {t:?}"))?;
    }
    // Full violation lists, not just the report's bounded listing.
    let (theta, phi) = theta_phi();
    let run = |w| {
        let opts = VerifyOptions {
            workers: Some(w),
            ..VerifyOptions::default()
        };
        verify(&inst, Kind::First, &theta, &phi, &ContractionParams::default(), &opts).map_err(|e| e.to_string())
    };
    ensure(run(1)? == run(4)?, "library results differ between 1 and 4 workers")?;
    Ok(format!(
        "10^6 quadruples: {} ms with 1 worker, {} ms with {n}; identical results",
        t1.as_millis(),
        tn.as_millis()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("demo, exact mode", c1_demo_exact),
        ("demo discrepancies", c2_demo_discrepancies),
        ("quartic verification vs oracle", c3_quartic_holds),
        ("quartic solve and uniqueness", c4_quartic_solve),
        ("strip violation and non-uniqueness", c5_strip_violated),
        ("phi iteration decay", c6_phi_iteration),
        ("residual monotonicity", c7_residual_monotonicity),
        ("hypothesis checkers", c8_hypothesis_checkers),
        ("performance and determinism", c9_performance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
