//! One line per acceptance criterion, `PASS` or `FAIL`, then a nonzero exit
//! if any criterion failed.

use std::fs;
use std::time::Instant;

use fracbvp::bvp::{
    lower_bound_check, solve_fixed_point, solve_linear, BoundaryData, Parameters, ProblemSpec,
    Solution, SolverOptions, Start,
};
use fracbvp::fraccore::{caputo_power, gamma_fn, rl_integral};
use fracbvp::green::{green_inner_integral, kernel_properties};
use fracbvp::polyid::{
    caputo_closed_form, higher_order_multinomial, numbers, polynomial, power_rule_oracle, Family,
    Rational,
};
use fracbvp::regime::{HypothesisReport, DEFAULT_DELTA};
use fracbvp::{Error, GridFunction, Order, PExponent};
use num_bigint::BigInt;
use rand::{rngs::StdRng, Rng, SeedableRng};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn ord(v: f64) -> Order {
    Order::new(v).unwrap()
}

fn max_err(u: &GridFunction, exact: impl Fn(f64) -> f64) -> f64 {
    u.nodes()
        .zip(u.values())
        .fold(0.0f64, |m, (t, v)| m.max((v - exact(t)).abs()))
}

fn green_kernel_suite() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, 0.0f64);
    for b in [3.1, 3.5, 4.0] {
        let r = kernel_properties(ord(b), 201).unwrap();
        ok &= r.nonnegative() && r.dominated() && r.lower_bound() && r.continuous();
        worst.0 = worst.0.min(r.min_value);
        worst.1 = worst.1.max(r.max_domination_excess);
        worst.2 = worst.2.min(r.min_lower_margin);
        worst.3 = worst.3.max(r.max_branch_gap);
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        ok && elapsed < 1.0,
        format!(
            "min H {:.2e}, domination excess {:.2e}, lower margin {:.2e}, branch gap {:.2e}, {elapsed:.3}s",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

fn row_integral_oracle() -> Outcome {
    let one = GridFunction::constant(1024, 1.0).unwrap();
    let mut worst = 0.0f64;
    for b in [3.1, 3.5, 4.0] {
        let (gb, gb1) = (gamma_fn(b).unwrap(), gamma_fn(b + 1.0).unwrap());
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            let got = green_inner_integral(s, &one, ord(b)).unwrap();
            worst = worst.max((got - (s / gb - s.powf(b) / gb1)).abs());
        }
    }
    outcome(worst <= 1e-8, format!("max deviation {worst:.2e} over β ∈ {{3.1, 3.5, 4}}"))
}

fn manufactured_linear() -> Outcome {
    // u = t², u(0) = 0 = γu(h) + λ, u'(0) = 0
    let bc = BoundaryData {
        gamma: 0.5,
        h: 0.5,
        lambda: -0.125,
        mu: 0.0,
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [1.25, 1.5, 2.0] {
        let y_exact = caputo_power(2.0, ord(a)).unwrap();
        let err = |nodes: usize| {
            let y = GridFunction::from_fn(nodes - 1, |t| y_exact.eval(t)).unwrap();
            max_err(&solve_linear(&y, ord(a), &bc).unwrap(), |t| t * t)
        };
        let (e1, e2) = (err(1025), err(2049));
        let exact = e1 < 1e-12 && e2 < 1e-12;
        let ratio = e1 / e2;
        ok &= e1 <= 1e-6 && (exact || (3.5..=4.5).contains(&ratio));
        parts.push(if exact {
            format!("α={a}: err {e1:.1e} (exact)")
        } else {
            format!("α={a}: err {e1:.2e}, ratio {ratio:.2}")
        });
    }
    outcome(ok, parts.join("; "))
}

fn demo_spec() -> ProblemSpec {
    let p = Parameters {
        alpha: 1.5,
        beta: 3.5,
        p: 2.0,
        gamma: 0.5,
        h: 0.5,
        lambda: 0.1,
        mu: 0.1,
    };
    ProblemSpec::new(p, |_| 1.0, f64::sqrt).unwrap()
}

fn fixed_point_demo(converged: &mut Vec<(ProblemSpec, Solution)>) -> Outcome {
    let spec = demo_spec();
    let opts = |start| SolverOptions {
        nodes: 2049,
        start,
        ..SolverOptions::default()
    };
    let t0 = Instant::now();
    let a = solve_fixed_point(&spec, &opts(Start::Zero));
    let elapsed = t0.elapsed().as_secs_f64();
    let b = solve_fixed_point(&spec, &opts(Start::Constant(10.0)));
    let (Ok(a), Ok(b)) = (a, b) else {
        return outcome(false, "solver did not converge from both starts".into());
    };
    let gap = a.u.max_abs_diff(&b.u);
    let ok = a.fp_residual < 1e-8
        && a.bc_residuals.0.abs() < 1e-6
        && a.bc_residuals.1.abs() < 1e-6
        && a.iterations <= 200
        && elapsed < 5.0
        && gap <= 1e-6;
    let detail = format!(
        "{} iterations, residual {:.1e}, bc ({:.1e}, {:.1e}), {elapsed:.2}s, start gap {gap:.1e}",
        a.iterations, a.fp_residual, a.bc_residuals.0, a.bc_residuals.1
    );
    converged.push((spec.clone(), a));
    converged.push((spec, b));
    outcome(ok, detail)
}

fn regime_consistency(converged: &mut Vec<(ProblemSpec, Solution)>) -> Outcome {
    let p = Parameters {
        alpha: 1.5,
        beta: 3.5,
        p: 2.0,
        gamma: 0.5,
        h: 0.5,
        lambda: 0.01,
        mu: 0.1,
    };
    let template = ProblemSpec::new(p, |_| 1.0, |x| x * x).unwrap();
    let report = HypothesisReport::compute(&template, DEFAULT_DELTA).unwrap();
    let (Some(h2), Some(h4)) = (report.h2, report.h4) else {
        return outcome(false, "missing (H2) or (H4) witness".into());
    };
    let q = template.exponent();
    let load_band = (1.0 - p.gamma) * (1.0 - q.phi_inv(h2.sigma)) * h2.c;
    let lam_in = 0.5 * (load_band - p.gamma * p.mu * p.h);
    let inside = template.with_lambda_mu(lam_in, p.mu).unwrap();
    let small = solve_fixed_point(&inside, &SolverOptions::default());
    let lam_out = 10.0 * (1.0 - p.gamma) * h4.e - p.gamma * p.mu * p.h;
    let outside = template.with_lambda_mu(lam_out, p.mu).unwrap();
    let large = solve_fixed_point(&outside, &SolverOptions::default());
    let large_label = match &large {
        Err(Error::MaxIterExceeded { .. }) => "max_iter",
        Err(Error::Diverged { .. }) => "diverged",
        Ok(_) => "converged",
        Err(_) => "other error",
    };
    let (small_ok, residual) = match &small {
        Ok(s) => (s.fp_residual < 1e-8, s.fp_residual),
        Err(_) => (false, f64::NAN),
    };
    if let Ok(s) = small {
        converged.push((inside, s));
    }
    outcome(
        small_ok && matches!(large_label, "max_iter" | "diverged"),
        format!(
            "σ={:.3}, c={:.3}, e={:.2}; λ={lam_in:.4} residual {residual:.1e}; λ={lam_out:.1} {large_label}",
            h2.sigma, h2.c, h4.e
        ),
    )
}

fn lower_bound(converged: &[(ProblemSpec, Solution)]) -> Outcome {
    if converged.len() < 3 {
        return outcome(false, format!("only {} converged solutions available", converged.len()));
    }
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for (spec, sol) in converged {
        let r = lower_bound_check(&sol.u, 0.5, spec.alpha(), spec.beta(), spec.exponent().q()).unwrap();
        ok &= r.passed;
        worst = worst.min(r.min_margin);
    }
    outcome(ok, format!("{} solutions, smallest margin {worst:.3e}", converged.len()))
}

fn polyid_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut ok = true;
    for fam in Family::ALL {
        for l in 1..=3 {
            for m in 0..=10 {
                let poly = polynomial(fam, l, m).unwrap();
                for a in [0.5, 1.25, 1.5, 2.5, 3.5] {
                    let alpha = ord(a);
                    let cf = caputo_closed_form(fam, l, m, alpha).unwrap();
                    let or = power_rule_oracle(&poly, alpha).unwrap();
                    if cf.terms().len() != or.terms().len() {
                        ok = false;
                        continue;
                    }
                    for (x, y) in cf.terms().iter().zip(or.terms()) {
                        ok &= x.1 == y.1;
                        worst = worst.max((x.0 - y.0).abs() / y.0.abs());
                    }
                }
            }
        }
        for l in 1..=4 {
            let seq = numbers(fam, l, 12).unwrap();
            for m in 0..=12 {
                ok &= higher_order_multinomial(fam, l, m).unwrap() == seq.values[m];
            }
        }
    }
    let b = numbers(Family::Bernoulli, 1, 20).unwrap().values;
    let g = numbers(Family::Genocchi, 1, 20).unwrap().values;
    for n in 0..=20u32 {
        let factor = Rational::from_integer(BigInt::from(2) * (BigInt::from(1) - BigInt::from(2).pow(n)));
        ok &= g[n as usize] == factor * &b[n as usize];
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        ok && worst <= 1e-10 && elapsed < 10.0,
        format!("max term rel. error {worst:.1e}, exact identities hold: {ok}, {elapsed:.2}s"),
    )
}

fn fraccore_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst_phi = 0.0f64;
    for _ in 0..10_000 {
        let p = rng.gen_range(1.05..8.0);
        let x: f64 = rng.gen_range(-1e3..1e3);
        let e = PExponent::new(p).unwrap();
        worst_phi = worst_phi.max((e.phi_inv(e.phi(x)) - x).abs() / x.abs().max(1.0));
    }
    let y = |t: f64| (std::f64::consts::PI * t).sin();
    let diff = |nodes: usize| {
        let g = GridFunction::from_fn(nodes - 1, y).unwrap();
        let two_step = rl_integral(&rl_integral(&g, ord(0.7)), ord(0.5));
        two_step.max_abs_diff(&rl_integral(&g, ord(1.2)))
    };
    let (d1, d2) = (diff(1025), diff(2049));
    let ratio = d1 / d2;
    outcome(
        worst_phi <= 1e-12 && d1 <= 1e-4 && (3.5..=4.5).contains(&ratio),
        format!("φ round-trip {worst_phi:.1e}; semigroup gap {d1:.2e}, refinement ratio {ratio:.2}"),
    )
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("square.conf");
    fs::write(
        &cfg,
        "alpha = 1.5\nbeta = 3.5\np = 2\ngamma = 0.5\nh = 0.5\nmu = 0.1\na = 1\nf = u^2\n\
         lambda_range = 0.01:1000:5\nmu_range = 0.05:0.2:3\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let out = dir.path().join(name);
        let args = [
            "fracbvp", "sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
            "--solve", "--grid", "129",
        ];
        let code = fracbvp_cli::run(args, &mut Vec::new(), &mut Vec::new());
        if code != 0 {
            return outcome(false, format!("sweep exited with {code}"));
        }
        outputs.push(fs::read(out).unwrap());
    }
    outcome(
        outputs[0] == outputs[1],
        format!("{} bytes, {} rows", outputs[0].len(), outputs[0].iter().filter(|&&b| b == b'\n').count()),
    )
}

fn main() {
    let mut converged = Vec::new();
    let results = [
        ("green kernel suite", green_kernel_suite()),
        ("row-integral oracle", row_integral_oracle()),
        ("manufactured linear solves", manufactured_linear()),
        ("fixed-point demo", fixed_point_demo(&mut converged)),
        ("regime consistency", regime_consistency(&mut converged)),
        ("lower bound on [0.5, 1]", lower_bound(&converged)),
        ("polyid oracle suite", polyid_suite()),
        ("fraccore properties", fraccore_properties()),
        ("CLI determinism", cli_determinism()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {tag}: {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
