//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use a3count::analytic::{davenport_sweep, ideal_density_check};
use a3count::peyre::integrate::McConfig;
use a3count::peyre::polytope::alpha_dual_cone;
use a3count::peyre::{
    alpha_monte_carlo, alpha_volume, euler_product, omega_infinity, theta8_average_identity, IntegrationConfig,
    OmegaMethod,
};
use a3count::surface::{brute_force_count, default_radius, random_surface_checks, BruteMode};
use a3count::torsor::{fiber_census, torsor_count, TorsorOptions};
use a3count::{BigRational, FieldContext};

type Outcome = Result<String, String>;

fn field(d: i64) -> FieldContext {
    FieldContext::quadratic(d).expect("valid field")
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn dual_counts() -> Outcome {
    let cases: [(FieldContext, &[u64]); 4] = [
        (FieldContext::rational(), &[4, 10, 20, 50, 100]),
        (field(-1), &[4, 10, 30]),
        (field(-3), &[4, 10, 30]),
        (field(-5), &[4, 10, 20]),
    ];
    let mut notes = Vec::new();
    for (ctx, bounds) in cases {
        for &b in bounds {
            let brute = brute_force_count(&ctx, b, default_radius(&ctx, b), BruteMode::Psi);
            let torsor = torsor_count(&ctx, b, TorsorOptions { unit_normalized: true }).map_err(|e| e.to_string())?;
            if !brute.stabilized || brute.count != torsor {
                return Err(format!("{} B={b}: brute {} (stabilized {}) vs torsor {torsor}", ctx.spec(), brute.count, brute.stabilized));
            }
            notes.push(format!("{}:{b}={torsor}", ctx.spec()));
        }
    }
    Ok(notes.join(" "))
}

fn fiber_sizes() -> Outcome {
    let mut notes = Vec::new();
    for (ctx, b) in [(FieldContext::rational(), 100), (field(-1), 30), (field(-3), 4)] {
        let c = fiber_census(&ctx, b).map_err(|e| e.to_string())?;
        let n = torsor_count(&ctx, b, TorsorOptions { unit_normalized: true }).map_err(|e| e.to_string())?;
        if !c.exact() || c.fibers != n {
            return Err(format!("{} B={b}: {c:?}, expected {n} fibers", ctx.spec()));
        }
        notes.push(format!("{} B={b}: {} fibers of {}", ctx.spec(), c.fibers, c.expected));
    }
    Ok(notes.join("; "))
}

fn theta8() -> Outcome {
    let r = theta8_average_identity();
    ensure(r.holds(), format!("{} = {}", r.average, r.target))
}

fn alpha() -> Outcome {
    let exact = alpha_volume().map_err(|e| e.to_string())?;
    let dual = alpha_dual_cone().map_err(|e| e.to_string())?;
    let target = BigRational::new(1.into(), 4320.into());
    let mc = alpha_monte_carlo::<f64>(&McConfig { samples: 1_000_000, seed: 2024, workers: 4 }).map_err(|e| e.to_string())?;
    let rel = (mc.mean * 4320.0 - 1.0).abs();
    ensure(
        exact == target && dual == target && rel < 0.02,
        format!("polytope {exact}, dual cone {dual}, Monte Carlo {:.6e} (rel. dev. {rel:.4})", mc.mean),
    )
}

fn ideal_density() -> Outcome {
    let g = ideal_density_check(&field(-1), 1_000_000);
    let dev_g = (g[0].lhs / 1e6 / (PI / 4.0) - 1.0).abs();
    let f = ideal_density_check(&field(-5), 100_000);
    let dev_f: f64 = f.iter().map(|c| (c.lhs / 1e5 / (PI / 20f64.sqrt()) - 1.0).abs()).fold(0.0, f64::max);
    ensure(dev_g < 0.005 && dev_f < 0.02, format!("Q(i) t=1e6 rel. dev. {dev_g:.2e}; Q(sqrt-5) t=1e5 worst class {dev_f:.2e}"))
}

fn euler() -> Outcome {
    let mut notes = Vec::new();
    for ctx in [FieldContext::rational(), field(-1)] {
        let mut prev = None;
        for p in [1250u64, 2500, 5000, 10_000, 20_000, 40_000, 80_000] {
            let e = euler_product::<f64>(&ctx, p);
            if let Some(q) = prev {
                if !a3count::peyre::EulerProduct::contains(&q, &e) {
                    return Err(format!("{}: bracket at {p} not nested", ctx.spec()));
                }
            }
            prev = Some(e);
        }
        let a = euler_product::<f64>(&ctx, 10_000).value;
        let b = euler_product::<f64>(&ctx, 100_000).value;
        let rel = (a - b).abs() / b;
        if rel >= 1e-3 {
            return Err(format!("{}: change {rel:.2e}", ctx.spec()));
        }
        notes.push(format!("{}: {b:.10} (change {rel:.2e})", ctx.spec()));
    }
    Ok(notes.join("; "))
}

fn omega() -> Outcome {
    let cfg = IntegrationConfig { mc: McConfig { samples: 2_000_000, seed: 77, workers: 4 }, ..IntegrationConfig::default() };
    let mut notes = Vec::new();
    for ctx in [FieldContext::rational(), field(-1)] {
        let all = OmegaMethod::available(ctx.mode)
            .iter()
            .map(|&m| omega_infinity::<f64>(&ctx, m, &cfg))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let base = all[0].value;
        for e in &all {
            if (e.value - base).abs() > 0.01 * base {
                return Err(format!("{}: {:?} vs {base}", ctx.spec(), e));
            }
        }
        let again = omega_infinity::<f64>(&ctx, OmegaMethod::MonteCarlo, &cfg).map_err(|e| e.to_string())?;
        let mc = all.iter().find(|e| e.method == OmegaMethod::MonteCarlo).expect("Monte Carlo runs");
        if again != *mc {
            return Err("Monte Carlo not deterministic".into());
        }
        let vals: Vec<String> = all.iter().map(|e| format!("{}={:.6}", e.method, e.value)).collect();
        notes.push(format!("{}: {}", ctx.spec(), vals.join(", ")));
    }
    Ok(notes.join("; "))
}

fn davenport() -> Outcome {
    let mut notes = Vec::new();
    for d in [-1, -5] {
        let s = davenport_sweep(&field(d), 20, 300, &[10, 20, 40], 31).map_err(|e| e.to_string())?;
        if s.spread() > 2.0 {
            return Err(format!("d={d}: per-radius constants {:?}", s.per_radius));
        }
        notes.push(format!("d={d}: C={:.3} spread {:.2}", s.fitted_c, s.spread()));
    }
    Ok(notes.join("; "))
}

fn random_exact() -> Outcome {
    let mut notes = Vec::new();
    for ctx in [FieldContext::rational(), field(-1), field(-5)] {
        let r = random_surface_checks(&ctx, 1000, 4242);
        if !(r.membership.passed() && r.height_invariance.passed()) || r.membership.checked < 1000 {
            return Err(format!("{}: {r:?}", ctx.spec()));
        }
        notes.push(format!("{}: 2x{}", ctx.spec(), r.membership.checked));
    }
    Ok(notes.join(" "))
}

fn trend() -> Outcome {
    let q = FieldContext::rational();
    let grid = [10u64, 30, 100, 300, 1000, 3000, 10_000];
    println!("    B, N(B), N(B)/(B log^5 B)");
    let mut prev = 0;
    for b in grid {
        let n = torsor_count(&q, b, TorsorOptions { unit_normalized: true }).map_err(|e| e.to_string())?;
        println!("    {b}, {n}, {:.6e}", n as f64 / (b as f64 * (b as f64).ln().powi(5)));
        if n < prev {
            return Err(format!("N({b}) = {n} < {prev}"));
        }
        prev = n;
    }
    Ok("monotone; the normalized column is far from its limit at this scale".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("dual-count equality", dual_counts),
        ("fiber census", fiber_sizes),
        ("theta8 average identity", theta8),
        ("alpha = 1/4320", alpha),
        ("ideal densities", ideal_density),
        ("Euler product brackets", euler),
        ("omega_inf cross-methods", omega),
        ("Davenport counting", davenport),
        ("height invariance and psi membership", random_exact),
        ("trend emission", trend),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS criterion {}: {name} [{secs:.1}s] {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{secs:.1}s] {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
