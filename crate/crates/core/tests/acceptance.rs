//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use bohrlab::cli;
use bohrlab::polyroots::{rational, sturm_count, CertificateKind, RationalPolynomial};
use bohrlab::radii::{
    cross_check_t32, figure_certificates, solve_radius, solve_radius_numeric, Params, RadiusProblem, T32Variant,
    TheoremId,
};
use bohrlab::series::{concave_coefficients, concave_coefficients_exact};
use bohrlab::witnesses::{falsify, sharpness_probe, CampaignSettings};
use num_rational::BigRational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn radius(t: TheoremId, p: Params, tol: f64) -> Result<f64, String> {
    let problem = RadiusProblem::new(t, p).map_err(|e| e.to_string())?;
    solve_radius(&problem, tol).map(|r| r.estimate).map_err(|e| e.to_string())
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn c1() -> Outcome {
    let start = Instant::now();
    let problem = RadiusProblem::new(TheoremId::T31, Params::with_k(1.0)).map_err(|e| e.to_string())?;
    let root = solve_radius(&problem, 1e-12).map_err(|e| e.to_string())?;
    ensure((root.estimate - 0.24683).abs() <= 5e-6, || format!("r = {}", root.estimate))?;
    ensure(root.certificate == CertificateKind::SturmCountOne, || format!("{:?}", root.certificate))?;
    // 3r³ − 5r² − 3r + 1
    let p = RationalPolynomial::from_integers(&[1, -3, -5, 3]);
    let count = sturm_count(&p, &rational(0, 1), &rational(1, 3)).map_err(|e| e.to_string())?;
    ensure(count == 1, || format!("Sturm count {count}"))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("r = {:.9}, Sturm count 1 on (0, 1/3)", root.estimate))
}

/// Integer expansion of (1−6r+r²)(1−r)²(1+r)³ − 16r²(1+r²), independent of
/// the library's polynomial arithmetic.
fn thm_g_oracle() -> Vec<i64> {
    fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
    let mut p = vec![1, -6, 1];
    for f in [[1, -1], [1, -1], [1, 1], [1, 1], [1, 1]] {
        p = mul(&p, &f);
    }
    p[2] -= 16;
    p[4] -= 16;
    p
}

fn c2() -> Outcome {
    let start = Instant::now();
    let problem = RadiusProblem::new(TheoremId::ThmG, Params::default()).map_err(|e| e.to_string())?;
    let poly = problem.polynomial().ok_or("ThmG has no polynomial")?;
    let oracle = RationalPolynomial::from_integers(&thm_g_oracle());
    ensure(poly == oracle, || format!("polynomial {poly} differs from expansion {oracle}"))?;
    let r = solve_radius(&problem, 1e-12).map_err(|e| e.to_string())?;
    ensure((r.estimate - 0.128445).abs() <= 5e-7, || format!("r = {}", r.estimate))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("r_g = {:.9} from the expanded degree-7 polynomial", r.estimate))
}

fn c3() -> Outcome {
    let mut worst: f64 = 0.0;
    for big_k in [1.0, 2.0, 5.0, 10.0] {
        let r = radius(TheoremId::T42, Params::with_k_mu(big_k, 0.0), 1e-13)?;
        let want = (big_k + 1.0) / (5.0 * big_k + 1.0);
        worst = worst.max((r - want).abs());
        // numeric path as well
        let problem = RadiusProblem::new(TheoremId::T42, Params::with_k_mu(big_k, 0.0)).map_err(|e| e.to_string())?;
        let n = solve_radius_numeric(&problem, 1e-13).map_err(|e| e.to_string())?.estimate;
        worst = worst.max((n - want).abs());
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("max |r − (K+1)/(5K+1)| = {worst:.1e} over K ∈ {{1,2,5,10}}"))
}

fn c4() -> Outcome {
    let mut parts = Vec::new();
    for (t, want) in [(TheoremId::T51, 1.0 / 3.0), (TheoremId::T52, 0.2)] {
        let problem = RadiusProblem::new(t, Params::with_k_alpha(1.0, 1.0)).map_err(|e| e.to_string())?;
        let closed = solve_radius(&problem, 1e-13).map_err(|e| e.to_string())?.estimate;
        let numeric = solve_radius_numeric(&problem, 1e-13).map_err(|e| e.to_string())?.estimate;
        ensure((closed - want).abs() <= 1e-10 && (numeric - want).abs() <= 1e-10, || {
            format!("{t}: closed {closed}, bisection {numeric}, want {want}")
        })?;
        parts.push(format!("{t} = {closed:.12} (bisection {numeric:.12})"));
    }
    Ok(parts.join(", "))
}

fn c5() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    let code = cli::run(["bohrlab", "certify", "--format", "json"], &mut out, &mut std::io::sink());
    let certs = figure_certificates().map_err(|e| e.to_string())?;
    ensure(code == cli::EXIT_OK, || format!("certify exit code {code}"))?;
    for c in &certs {
        ensure(c.passed, || format!("{} failed: {:?}", c.id, c.grid_failures))?;
    }
    let by_id = |id: &str| certs.iter().find(|c| c.id == id).ok_or(format!("missing {id}"));
    for id in ["F3", "F4"] {
        ensure(by_id(id)?.sturm_count == Some(0), || format!("{id} Sturm count not 0"))?;
    }
    for id in ["F1", "F2"] {
        ensure(by_id(id)?.grid_points == 99, || format!("{id} grid size"))?;
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!("F1–F4 pass (F3, F4 Sturm count 0; F1, F2 on 99 grid points) in {:.2}s", start.elapsed().as_secs_f64()))
}

fn c6() -> Outcome {
    let start = Instant::now();
    let probes = cli::probe_catalog();
    for &(t, p) in &probes {
        let rep = sharpness_probe(t, p, 1e-3).map_err(|e| format!("{t}: {e}"))?;
        ensure(rep.transition, || {
            format!("{t} {:?}: below {:?}, above {:?}", p, rep.below.verdict, rep.above.verdict)
        })?;
    }
    within(start.elapsed(), 30.0)?;
    Ok(format!("{} probes hold at r0(1−1e−3) and fail at r0(1+1e−3) in {:.2}s", probes.len(), start.elapsed().as_secs_f64()))
}

fn c7() -> Outcome {
    let start = Instant::now();
    let settings = CampaignSettings {
        trials: 1000,
        r_fraction: 0.99,
        seed: 42,
        order: 200,
        ..CampaignSettings::default()
    };
    let mut parts = Vec::new();
    for (t, p) in [
        (TheoremId::ThmD, Params::default()),
        (TheoremId::T31, Params::default()),
        (TheoremId::T51, Params::default()),
        (TheoremId::ThmD, Params::with_k(2.0)),
        (TheoremId::T31, Params::with_k(2.0)),
        (TheoremId::T51, Params::with_k_alpha(2.0, 1.5)),
    ] {
        let rep = falsify(t, p, &settings).map_err(|e| format!("{t}: {e}"))?;
        ensure(rep.fails == 0 && rep.inconclusive == 0, || {
            format!("{t}: fails {} inconclusive {}", rep.fails, rep.inconclusive)
        })?;
        parts.push(format!("{t}(K={}) max ratio {:.4}", rep.params.big_k, rep.max_ratio));
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "6×1000 trials, 0 fails, 0 inconclusive in {:.2}s; {}",
        start.elapsed().as_secs_f64(),
        parts.join(", ")
    ))
}

/// `A_n` from `(1+z)^α (1−z)^{−α}` by convolving the two binomial series.
fn concave_oracle(alpha: f64, m: usize) -> Vec<f64> {
    let mut p = vec![1.0; m + 1]; // binom(α, j)
    let mut q = vec![1.0; m + 1]; // binom(α+i−1, i)
    for j in 1..=m {
        p[j] = p[j - 1] * (alpha - (j - 1) as f64) / j as f64;
        q[j] = q[j - 1] * (alpha + (j - 1) as f64) / j as f64;
    }
    (1..=m)
        .map(|n| (0..=n).map(|j| p[j] * q[n - j]).sum::<f64>() / (2.0 * alpha))
        .collect()
}

fn c8() -> Outcome {
    let m = 50;
    let mut worst: f64 = 0.0;
    for alpha in [1.0, 1.25, 1.5, 2.0] {
        let rec = concave_coefficients(alpha, m).map_err(|e| e.to_string())?;
        let oracle = concave_oracle(alpha, m);
        for n in 1..=m {
            let rel = (rec.get(n) - oracle[n - 1]).abs() / oracle[n - 1].abs().max(1.0);
            worst = worst.max(rel);
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    let one = concave_coefficients_exact(&rational(1, 1), m).map_err(|e| e.to_string())?;
    let two = concave_coefficients_exact(&rational(2, 1), m).map_err(|e| e.to_string())?;
    for n in 1..=m {
        ensure(one[n - 1] == BigRational::from_integer(1.into()), || format!("A_{n}(1) = {}", one[n - 1]))?;
        ensure(two[n - 1] == BigRational::from_integer((n as i64).into()), || format!("A_{n}(2) = {}", two[n - 1]))?;
    }
    Ok(format!("max relative deviation {worst:.1e} for n ≤ 50; A_n(1) = 1 and A_n(2) = n exactly"))
}

fn c9() -> Outcome {
    let mut parts = Vec::new();
    for big_k in [1.0, 3.0] {
        let rep = cross_check_t32(big_k, 1e-12).map_err(|e| e.to_string())?;
        let root_of = |v: T32Variant| rep.variants.iter().find(|x| x.variant == v).and_then(|x| x.root);
        let statement = root_of(T32Variant::Statement).ok_or("statement equation has no root")?;
        let proof = root_of(T32Variant::ProofG2).ok_or("proof equation has no root")?;
        let cmp = rep
            .comparisons
            .iter()
            .find(|c| {
                (c.a, c.b) == (T32Variant::Statement, T32Variant::ProofG2)
                    || (c.a, c.b) == (T32Variant::ProofG2, T32Variant::Statement)
            })
            .ok_or("missing statement/proof comparison")?;
        ensure(cmp.gap.is_some(), || "gap missing".into())?;
        serde_json::to_string(&rep).map_err(|e| e.to_string())?;
        parts.push(format!(
            "K={big_k}: statement {statement:.9}, proof {proof:.9}, gap {:.2e}, divides {}/{}",
            cmp.gap.unwrap_or(f64::NAN),
            cmp.a_divides_b,
            cmp.b_divides_a
        ));
    }
    Ok(parts.join("; "))
}

fn capture(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let code = cli::run(std::iter::once("bohrlab").chain(args.iter().copied()), &mut out, &mut std::io::sink());
    ensure(code == cli::EXIT_OK, || format!("{args:?} exited {code}"))?;
    Ok(out)
}

fn c10() -> Outcome {
    let runs: [&[&str]; 6] = [
        &["report", "--format", "json", "--seed", "42"],
        &["report", "--format", "csv", "--seed", "42"],
        &["sweep", "--theorem", "T41", "--format", "csv"],
        &["sweep", "--theorem", "T51", "--format", "json"],
        &["falsify", "--theorem", "T31", "--trials", "300", "--seed", "42", "--format", "json"],
        &["radius", "--theorem", "ThmG", "--format", "json"],
    ];
    let mut bytes = 0;
    for args in runs {
        let first = capture(args)?;
        let second = capture(args)?;
        ensure(first == second, || format!("{args:?} differs between runs"))?;
        bytes += first.len();
    }
    // scheduling must not change output either
    let par = capture(&["falsify", "--theorem", "ThmD", "--trials", "300", "--format", "json"])?;
    let seq = capture(&["falsify", "--theorem", "ThmD", "--trials", "300", "--format", "json", "--sequential"])?;
    ensure(par == seq, || "parallel and sequential campaigns differ".into())?;
    Ok(format!("{} outputs ({bytes} bytes) identical across two runs; parallel = sequential", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("T31 radius at K=1 and Sturm count", c1),
        ("ThmG radius from the expanded polynomial", c2),
        ("T42 at mu=0 equals (K+1)/(5K+1)", c3),
        ("T51 and T52 closed forms at K=1, alpha=1", c4),
        ("figure certificates", c5),
        ("sharpness probes", c6),
        ("falsification campaigns", c7),
        ("A_n recurrence", c8),
        ("T32 cross-check report", c9),
        ("determinism with seed 42", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
