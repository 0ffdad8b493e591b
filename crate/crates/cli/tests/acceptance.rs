//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use holomellin::forward::{mellin_of_term, ode_to_mellin_rec};
use holomellin::inverse::rec_to_ode_traced;
use holomellin::operators::{normalize_diffop, normalize_recop, BoundarySymbol, DiffOp, Operator, RecOp};
use holomellin::oracle::quadrature::{regularized_mellin_quadrature, tanh_sinh};
use holomellin::oracle::{
    expand, mellin_moments, numeric_mellin, verify_recurrence, with_growing_series, OracleConfig, SeriesMode,
};
use holomellin::poly::{Polynomial, Var};
use holomellin::scalar::{self, rat, Scalar};
use holomellin::solvers::{hyper_solutions, verify_certificate, Candidate};
use holomellin::syntax::{from_json, parse_operator, to_json};

const CORPUS: &str = include_str!("../../core/tests/data/corpus.txt");

type Check = Result<String, String>;

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("first example inverse golden", criterion_1),
        ("second example inverse golden", criterion_2),
        ("third example g and h golden, rational solutions", criterion_3),
        ("forward conversion of the sqrt example", criterion_4),
        ("numeric round trip through the series oracle", criterion_5),
        ("closed-form spot values", criterion_6),
        ("regularized Mellin identity by quadrature", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS ({name}; {detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL ({name}; {detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("holomellin").chain(args.iter().copied());
    let code = holomellin_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Runs a subcommand with JSON output and returns the parsed document.
fn cli_json(args: &[&str]) -> Result<serde_json::Value, String> {
    let (code, out, err) = cli(args);
    if code != 0 {
        return Err(format!("exit {code}: {err}"));
    }
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn diffop(text: &str) -> DiffOp {
    match parse_operator(text).unwrap() {
        Operator::Diff(d) => d,
        Operator::Rec(r) => panic!("{r} is not a differential operator"),
    }
}

fn recop(text: &str) -> RecOp {
    match parse_operator(text).unwrap() {
        Operator::Rec(r) => r,
        Operator::Diff(d) => panic!("{d} is not a recurrence"),
    }
}

fn result_diffop(v: &serde_json::Value) -> Result<DiffOp, String> {
    match from_json(&v["result"]).map_err(|e| e.to_string())? {
        Operator::Diff(d) => Ok(d),
        Operator::Rec(_) => Err("result is not a differential operator".into()),
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("took {t:?}, limit {limit:?}"))
    }
}

const EX1: &str = "(2+n)*f(n+2) - f(n+1) - (n+1)*f(n) = 0";
const EX2: &str = "(n+1)*(n+2)^2*f(n) - (n+2)*(n^2+7*n+11)*f(n+1) + (-n^3-5*n^2-6*n+1)*f(n+2) + (n+3)^3*f(n+3) = 0";
const EX3_F: &str = "4*(1+n)*(2+n)*f(n) - 2*(2+n)*(7+2*n)*f(n+1) + (2-2*n-n^2)*f(n+2) + (3+n)^2*f(n+3) = 0";
const EX3_G: &str = "-2*(2+n)*f(n+1) + (4+n)*f(n+2) + (3+n)*f(n+3) = 0";
const EX3_H: &str = "-(1+n)*f(n) + f(n+1) + (2+n)*f(n+2) = 0";

fn golden_inverse(rec: &str, expected: &str) -> Check {
    let start = Instant::now();
    let v = cli_json(&["invmellin", "--expr", rec])?;
    within(Duration::from_secs(1), start)?;
    let got = result_diffop(&v)?;
    let want = normalize_diffop(&diffop(expected)).map_err(|e| e.to_string())?;
    if got == want {
        Ok(format!("`{got}`"))
    } else {
        Err(format!("got `{got}`, expected `{want}`"))
    }
}

fn criterion_1() -> Check {
    golden_inverse(EX1, "(x - x^3)*Dx - (x^2 + x)")
}

fn criterion_2() -> Check {
    golden_inverse(
        EX2,
        "-(x-1)^2*(x+1)*x^3*Dx^3 - (x-1)*(2*x-1)*(3*x+1)*x^2*Dx^2 - (x-1)*(7*x-1)*x^2*Dx - (x-1)*x^2",
    )
    .map(|_| "order-3 ODE matches".into())
}

fn criterion_3() -> Check {
    let mut details = Vec::new();
    for (rec, ode, solution) in [
        (EX3_G, "x^2*(2-x-x^2)*Dx + x^2*(1-x)", "1/(x + 2)"),
        (EX3_H, "x*(1-x^2)*Dx + x*(1-x)", "1/(x + 1)"),
    ] {
        golden_inverse(rec, ode)?;
        let start = Instant::now();
        let v = cli_json(&["invmellin", "--expr", rec])?;
        let result = v["result"].to_string();
        let dir = std::env::temp_dir().join(format!("holomellin-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let file = dir.join("ode.json");
        std::fs::write(&file, result).map_err(|e| e.to_string())?;
        let sols = cli_json(&["solve-ode", "--file", file.to_str().unwrap()])?;
        within(Duration::from_secs(1), start)?;
        let values: Vec<&str> = sols["solutions"]
            .as_array()
            .ok_or("no solutions array")?
            .iter()
            .filter_map(|s| s["value"].as_str())
            .collect();
        if values != [solution] {
            return Err(format!("solve-ode gave {values:?}, expected {solution}"));
        }
        details.push(solution);
    }
    Ok(format!("solutions {}", details.join(", ")))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let v = cli_json(&["mellin", "--expr", "2*(x^2-1)*Dx^2 + (x-3)*Dx"])?;
    within(Duration::from_secs(1), start)?;
    let got = match from_json(&v["result"]).map_err(|e| e.to_string())? {
        Operator::Rec(r) => r,
        Operator::Diff(_) => return Err("result is not a recurrence".into()),
    };
    // the written form M(n-2), M(n-1), M(n) is re-indexed by n -> n + 2
    let written = recop("-2*(n-1)*n*M(n-2) + 3*n*M(n-1) + (n+1)*(2*n+3)*M(n) = 6*f(1)");
    let want = normalize_recop(&written).map_err(|e| e.to_string())?;
    if got != want {
        return Err(format!("got `{got}`, expected `{want}`"));
    }
    // back to the written indexing: coefficients of M(n-2), M(n-1), M(n)
    let back: Vec<Polynomial> = got.coeffs().iter().map(|p| p.shift(-2)).collect();
    let expected_hom = [
        Polynomial::from_ints(&[0, 2, -2], Var::N),
        Polynomial::from_ints(&[0, 3], Var::N),
        Polynomial::from_ints(&[3, 5, 2], Var::N),
    ];
    // hom - 6 f(1) = 0
    let inhom: Vec<_> = got.inhom().iter().collect();
    let single = inhom.len() == 1
        && *inhom[0].0 == BoundarySymbol::DerivAtOne(0)
        && *inhom[0].1 == Polynomial::from_ints(&[-6], Var::N);
    if back == expected_hom && single {
        Ok(format!("`{got} = 0`"))
    } else {
        Err(format!("written indexing gives {back:?}, inhomogeneous part {inhom:?}"))
    }
}

/// One oracle solution: ODE, initial Taylor coefficients, weight.
type Component = (&'static str, Vec<Scalar>, f64);

fn criterion_5() -> Check {
    let start = Instant::now();
    let config = OracleConfig {
        tol: 1e-12,
        max_terms: 100_000,
        ..OracleConfig::default()
    };
    let log2 = std::f64::consts::LN_2;
    let f_ode = "(-2*x+3*x^2) + (4*x-16*x^2+13*x^3)*Dx + (8*x-10*x^2-9*x^3+8*x^4)*Dx^2 + (4*x^2-4*x^3-x^4+x^5)*Dx^3";
    let ex2_ode =
        "-(x-1)^2*(x+1)*x^3*Dx^3 - (x-1)*(2*x-1)*(3*x+1)*x^2*Dx^2 - (x-1)*(7*x-1)*x^2*Dx - (x-1)*x^2";
    // Taylor coefficients (-1)^k / 2^(k+1) of 1/(2+x)
    let half_powers: Vec<Scalar> = (0..4).map(|k| rat(if k % 2 == 0 { 1 } else { -1 }, 2 << k)).collect();
    let alternating: Vec<Scalar> = (0..4).map(|k| scalar::int(if k % 2 == 0 { 1 } else { -1 })).collect();
    // -log(1 - x/2)/(2 + x) - log(2)/(2 + x) vanishes at x = 1
    let f_components: Vec<Component> = vec![
        (f_ode, vec![rat(0, 1), rat(1, 4), rat(-1, 16), rat(5, 96)], 1.0),
        (f_ode, half_powers.clone(), -log2),
    ];
    let cases: Vec<(&str, &str, Vec<Component>)> = vec![
        ("second", EX2, vec![(ex2_ode, alternating.clone(), 1.0)]),
        ("third f", EX3_F, f_components),
        ("third g", EX3_G, vec![("x^2*(2-x-x^2)*Dx + x^2*(1-x)", half_powers, 1.0)]),
        ("third h", EX3_H, vec![("x*(1-x^2)*Dx + x*(1-x)", alternating, 1.0)]),
    ];
    let mut worst = 0.0f64;
    for (name, rec_text, components) in &cases {
        let rec = normalize_recop(&recop(rec_text)).map_err(|e| e.to_string())?;
        let r = combined_residual(&components, &rec, &config).map_err(|e| format!("{name}: {e}"))?;
        // the inverse-converted ODE, forward-converted again
        let inverse = rec_to_ode_traced(&rec).map_err(|e| e.to_string())?.ode;
        let again = ode_to_mellin_rec(&inverse).map_err(|e| e.to_string())?;
        let inverse_components: Vec<Component> = components.clone();
        let r2 = combined_residual_with(&inverse, &inverse_components, &again, &config)
            .map_err(|e| format!("{name} after round trip: {e}"))?;
        if r.max(r2) >= 1e-6 {
            return Err(format!("{name}: residual {r:.2e} / {r2:.2e}"));
        }
        worst = worst.max(r).max(r2);
    }
    // the first recurrence has no integrable solution: its ODE is solved by
    // 1/(1 - x), and its hypergeometric solution 1 does not decay
    let ex1_ode = diffop("(x - x^3)*Dx - (x^2 + x)");
    let refused = mellin_moments(&ex1_ode, &[scalar::int(1)], 0..1, &config).is_err();
    if !refused {
        return Err("the oracle assigned a Mellin transform to 1/(1 - x)".into());
    }
    let ex1 = normalize_recop(&recop(EX1)).unwrap();
    let inverse = rec_to_ode_traced(&ex1).unwrap().ode;
    if inverse != normalize_diffop(&ex1_ode).unwrap() {
        return Err("first example symbolic round trip failed".into());
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!(
        "4 recurrences, n = 0..20, max residual {worst:.1e}; first example has no integrable solution, checked symbolically"
    ))
}

fn combined_residual(components: &[Component], rec: &RecOp, config: &OracleConfig) -> Result<f64, String> {
    let ode = diffop(components[0].0);
    combined_residual_with(&ode, components, rec, config)
}

/// Residual of `rec` on the moments of `sum weight * solution(init)`, every
/// solution taken from `ode`. The recurrence is linear in the function, so
/// the per-component residuals add.
fn combined_residual_with(
    ode: &DiffOp,
    components: &[Component],
    rec: &RecOp,
    config: &OracleConfig,
) -> Result<f64, String> {
    let mut total = vec![0.0f64; 21];
    for (_, init, weight) in components {
        let report = verify_recurrence(ode, init, rec, 20, config).map_err(|e| e.to_string())?;
        for (t, r) in total.iter_mut().zip(&report.residuals) {
            *t += weight * r;
        }
    }
    Ok(total.iter().fold(0.0f64, |m, r| m.max(r.abs())))
}

fn criterion_6() -> Check {
    let config = OracleConfig {
        tol: 1e-10,
        ..OracleConfig::default()
    };
    let log2 = std::f64::consts::LN_2;
    let log3 = 3f64.ln();
    let mut worst = 0.0f64;
    let one_plus = diffop("(1+x)*Dx + 1");
    let got = mellin_moments(&one_plus, &[scalar::int(1)], 0..=10, &config).map_err(|e| e.to_string())?;
    for (n, e) in got.iter().enumerate() {
        let s: f64 = (1..=n).map(|i| (-1f64).powi(i as i32) / i as f64).sum();
        let want = (-1f64).powi(n as i32) * (log2 + s);
        worst = worst.max((e.value - want).abs());
    }
    let two_plus = diffop("(2+x)*Dx + 1");
    let got = mellin_moments(&two_plus, &[rat(1, 2)], 0..=6, &config).map_err(|e| e.to_string())?;
    for (n, e) in got.iter().enumerate() {
        let s: f64 = (1..=n as i32).map(|i| 1.0 / ((-2f64).powi(i) * i as f64)).sum();
        let want = (-2f64).powi(n as i32) * (log3 - log2 + s);
        worst = worst.max((e.value - want).abs());
    }
    if worst < 1e-6 {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        Err(format!("max deviation {worst:.1e}"))
    }
}

fn criterion_7() -> Check {
    let mut worst = 0.0f64;
    for n in 1..=5u32 {
        let e = regularized_mellin_quadrature(|x| x.ln() / (1.0 - x), n, 0.0, 1e-10).map_err(|e| e.to_string())?;
        let want: f64 = (1..=n).map(|i| 1.0 / (i * i) as f64).sum();
        worst = worst.max((e.value - want).abs());
    }
    if worst < 1e-5 {
        Ok(format!("n = 1..5, max deviation {worst:.1e}"))
    } else {
        Err(format!("max deviation {worst:.1e}"))
    }
}

fn criterion_8() -> Check {
    let a = integration_by_parts_identity()?;
    let b = degree_monotonicity()?;
    let c = petkovsek_certificates()?;
    let d = round_trips()?;
    Ok(format!("{a}; {b}; {c}; {d}"))
}

/// `M[x^m f^(p)](n)` by quadrature against the converted form, for
/// `f = 1/(1+x)` and every `(m, p)` in `[0, 3]^2`.
fn integration_by_parts_identity() -> Check {
    let config = OracleConfig {
        tol: 1e-11,
        ..OracleConfig::default()
    };
    let ode = diffop("(1+x)*Dx + 1");
    let moments = with_growing_series(&ode, &[scalar::int(1)], &config, |s| {
        (0..=12).map(|k| numeric_mellin(s, k, config.tol).map(|e| e.value)).collect::<Result<Vec<_>, _>>()
    })
    .map_err(|e| e.to_string())?;
    let deriv_at_one = |j: u32| {
        let fact: f64 = (1..=j).map(f64::from).product();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * fact / 2f64.powi(j as i32 + 1)
    };
    let mut worst = 0.0f64;
    for m in 0..=3i64 {
        for p in 0..=3i64 {
            let img = mellin_of_term(m, p).map_err(|e| e.to_string())?;
            // boundary terms at zero vanish once n + m >= p
            let n0 = (p - m).max(0);
            for n in n0..=n0 + 4 {
                let fact: f64 = (1..=p).map(|k| k as f64).product();
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                let lhs = tanh_sinh(
                    |x| x.powi((n + m) as i32) * sign * fact / (1.0 + x).powi(p as i32 + 1),
                    0.0,
                    1.0,
                    1e-12,
                )
                .map_err(|e| e.to_string())?
                .value;
                let c = img.coeff.eval_f64(n as f64);
                let shifted = n + img.shift;
                let mut rhs = if c == 0.0 { 0.0 } else { c * moments[shifted as usize] };
                for (sym, q) in img.inhom.iter() {
                    if let BoundarySymbol::DerivAtOne(j) = sym {
                        rhs += q.eval_f64(n as f64) * deriv_at_one(*j);
                    }
                }
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    if worst < 1e-8 {
        Ok(format!("integration by parts on 16 (m, p) pairs, max deviation {worst:.1e}"))
    } else {
        Err(format!("integration by parts identity off by {worst:.1e}"))
    }
}

fn poly_strategy(var: Var) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-5i64..=5, 0..=4).prop_map(move |c| Polynomial::from_ints(&c, var))
}

fn rec_strategy() -> impl Strategy<Value = RecOp> {
    prop::collection::vec(poly_strategy(Var::N), 1..=4)
        .prop_filter_map("zero operator", |cs| RecOp::homogeneous(cs).ok())
}

fn degree_monotonicity() -> Check {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 200,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner
        .run(&rec_strategy(), |rec| {
            let t = rec_to_ode_traced(&rec).map_err(|e| TestCaseError::fail(format!("{rec}: {e}")))?;
            prop_assert!(t.degrees.windows(2).all(|w| w[0] > w[1]), "{rec}: degrees {:?}", t.degrees);
            prop_assert!(t.degrees.len() <= t.input.max_degree() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("200 random recurrences reduce with strictly falling degree".into())
}

fn petkovsek_certificates() -> Check {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 60,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    // (sum_i c_i S^i) (b S - a) has the hypergeometric solution with ratio a/b
    let strategy = (
        prop::collection::vec(poly_strategy(Var::N), 1..=2),
        (1i64..=3, -3i64..=3),
        (1i64..=3, -3i64..=3),
    );
    runner
        .run(&strategy, |(left, (a1, a0), (b1, b0))| {
            let a = Polynomial::from_ints(&[a0, a1], Var::N);
            let b = Polynomial::from_ints(&[b0, b1], Var::N);
            prop_assume!(left.iter().any(|p| !p.is_zero()));
            let mut coeffs = vec![Polynomial::zero(Var::N); left.len() + 1];
            for (i, c) in left.iter().enumerate() {
                coeffs[i + 1] = &coeffs[i + 1] + &(c * &b.shift(i as i64));
                coeffs[i] = &coeffs[i] - &(c * &a.shift(i as i64));
            }
            let rec = RecOp::homogeneous(coeffs).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assume!(!rec.coeff(0).is_zero());
            let sols = hyper_solutions(&rec).map_err(|e| TestCaseError::fail(format!("{rec}: {e}")))?;
            let op = Operator::Rec(rec.clone());
            for s in &sols {
                let cert = verify_certificate(&op, &Candidate::Ratio(s.ratio.clone()))
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(cert.holds, "{rec}: {} does not verify", s.ratio);
            }
            let expected = holomellin::ratfun::RationalFunction::new(a.clone(), b.clone()).unwrap();
            prop_assert!(
                sols.iter().any(|s| s.ratio == expected),
                "{rec}: ratio {expected} missing from {:?}",
                sols.iter().map(|s| s.ratio.to_string()).collect::<Vec<_>>()
            );
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("constructed hypergeometric solutions found and verified".into())
}

fn round_trips() -> Check {
    let mut count = 0;
    for line in CORPUS.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let op = parse_operator(line).map_err(|e| format!("{line}: {e}"))?;
        for form in [op.clone(), op.normalized().map_err(|e| e.to_string())?] {
            let printed = parse_operator(&form.to_string()).map_err(|e| format!("{form}: {e}"))?;
            if printed != form {
                return Err(format!("print/parse changed `{form}`"));
            }
            let json = from_json(&to_json(&form)).map_err(|e| e.to_string())?;
            if json != form {
                return Err(format!("JSON changed `{form}`"));
            }
        }
        count += 1;
    }
    // the series oracle agrees with rational solutions
    let ode = diffop("(1+x)*Dx + 1");
    let s = expand(&ode, &[scalar::int(1)], 20, SeriesMode::Exact).map_err(|e| e.to_string())?;
    if s.exact().unwrap().iter().enumerate().any(|(k, c)| *c != scalar::int(if k % 2 == 0 { 1 } else { -1 })) {
        return Err("series of 1/(1+x) is wrong".into());
    }
    Ok(format!("{count} corpus operators round-trip through text and JSON"))
}
