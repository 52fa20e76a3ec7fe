use a3count::analytic::{average_value_check, ideal_density_check, omega_sum_report};
use a3count::peyre::integrate::McConfig;
use a3count::peyre::polytope::alpha_dual_cone;
use a3count::peyre::{
    alpha_volume, assemble_constant, euler_product, omega_infinity, theta8_average_identity, IntegrationConfig,
    OmegaMethod,
};
use a3count::surface::{brute_force_count, default_radius, random_surface_checks, BruteMode};
use a3count::torsor::{fiber_census, torsor_count_by_tuple, TorsorOptions};
use a3count::{BigRational, FieldContext};
use serde_json::{json, Value};

use crate::output::{float, Table};
use crate::{AnalyticArgs, ConstantArgs, CountArgs, Failure, Mode, Outcome, RunConfig, VerifyArgs};

fn context(cfg: &RunConfig) -> Result<FieldContext, Failure> {
    Ok(FieldContext::new(cfg.field)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn integration(cfg: &RunConfig, rel_tol: f64) -> IntegrationConfig {
    IntegrationConfig {
        rel_tol,
        mc: McConfig { samples: cfg.mc_samples, seed: cfg.seed, workers: cfg.workers },
        ..IntegrationConfig::default()
    }
}

pub fn field_info(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let ctx = context(cfg)?;
    let reps: Vec<String> = ctx.class_reps.iter().map(|i| i.to_string()).collect();
    let json = json!({
        "field": ctx.spec().to_string(),
        "mode": ctx.mode,
        "disc": ctx.disc,
        "class_number": ctx.class_number,
        "units": ctx.units,
        "rho": ctx.rho,
        "class_reps": reps,
        "reduced_forms": ctx.reduced_forms(),
    });
    let mut table = Table::new(&["key", "value"]);
    for (k, v) in [
        ("field", ctx.spec().to_string()),
        ("disc", ctx.disc.to_string()),
        ("class_number", ctx.class_number.to_string()),
        ("units", ctx.units.to_string()),
        ("rho", float(ctx.rho)),
        ("class_reps", reps.join(" ")),
    ] {
        table.push(vec![k.into(), v]);
    }
    Ok(Outcome { json, table, passed: true })
}

pub fn count(cfg: &RunConfig, args: &CountArgs) -> Result<Outcome, Failure> {
    let ctx = context(cfg)?;
    if args.bounds.contains(&0) {
        return Err(Failure::Input("bounds must be at least 1".into()));
    }
    let opts = TorsorOptions { unit_normalized: !args.full_torsor };
    let mut rows = Vec::new();
    let mut table =
        Table::new(&["bound", "brute", "stabilized", "torsor", "equal", "fibers_exact", "n_over_b_log5b"]);
    let mut passed = true;
    let mut previous: Option<u64> = None;
    for &b in &args.bounds {
        let brute = (args.mode != Mode::Torsor).then(|| brute_force_count(&ctx, b, default_radius(&ctx, b), BruteMode::Psi));
        let torsor = match args.mode {
            Mode::Brute => None,
            _ => {
                let mut t = torsor_count_by_tuple(&ctx, b, opts)?;
                if !args.timings {
                    t.tuples.iter_mut().for_each(|r| r.millis = 0);
                }
                Some(t)
            }
        };
        let census = if args.census { Some(fiber_census(&ctx, b)?) } else { None };
        let equal = match (&brute, &torsor) {
            (Some(x), Some(y)) => Some(x.count == y.count),
            _ => None,
        };
        let n = torsor.as_ref().map(|t| t.count).or(brute.as_ref().map(|x| x.count)).unwrap_or(0);
        let lb = (b as f64).ln();
        let trend = (b > 1).then(|| n as f64 / (b as f64 * lb.powi(5)));
        passed &= equal != Some(false);
        passed &= brute.as_ref().is_none_or(|x| x.stabilized);
        passed &= census.as_ref().is_none_or(|c| c.exact());
        if let Some(p) = previous {
            passed &= p <= n || args.bounds.windows(2).any(|w| w[1] < w[0]);
        }
        previous = Some(n);
        table.push(vec![
            b.to_string(),
            brute.as_ref().map(|x| x.count.to_string()).unwrap_or_default(),
            brute.as_ref().map(|x| x.stabilized.to_string()).unwrap_or_default(),
            torsor.as_ref().map(|t| t.count.to_string()).unwrap_or_default(),
            equal.map(|e| e.to_string()).unwrap_or_default(),
            census.as_ref().map(|c| c.exact().to_string()).unwrap_or_default(),
            trend.map(float).unwrap_or_default(),
        ]);
        let mut torsor_json = torsor.as_ref().map(to_value).unwrap_or(Value::Null);
        if !args.per_tuple {
            if let Value::Object(m) = &mut torsor_json {
                m.remove("tuples");
            }
        }
        rows.push(json!({
            "bound": b,
            "brute": brute,
            "torsor": torsor_json,
            "equal": equal,
            "census": census,
            "n_over_b_log5b": trend,
        }));
    }
    let json = json!({
        "field": ctx.spec().to_string(),
        "mode": format!("{:?}", args.mode).to_lowercase(),
        "unit_normalized": opts.unit_normalized,
        "rows": rows,
        "passed": passed,
    });
    Ok(Outcome { json, table, passed })
}

pub fn constant(cfg: &RunConfig, args: &ConstantArgs) -> Result<Outcome, Failure> {
    let ctx = context(cfg)?;
    if cfg.euler_cutoff < 2 {
        return Err(Failure::Input("--euler-cutoff must be at least 2".into()));
    }
    let c = assemble_constant::<f64>(&ctx, cfg.euler_cutoff, args.method.into(), &integration(cfg, args.rel_tol))?;
    let mut table = Table::new(&["quantity", "value", "error"]);
    let f = float;
    table.push(vec!["alpha".into(), format!("{}/{}", c.alpha.numer(), c.alpha.denom()), String::new()]);
    table.push(vec!["prefactor".into(), f(c.prefactor.value), String::new()]);
    table.push(vec!["euler".into(), f(c.euler.value), f(c.euler.hi - c.euler.lo)]);
    table.push(vec!["omega_inf".into(), f(c.omega_inf.value), f(c.omega_inf.err)]);
    table.push(vec!["c".into(), f(c.c.value), f(c.c.err)]);
    Ok(Outcome { json: to_value(&c), table, passed: c.omega_inf.converged })
}

struct Suite {
    checks: Vec<Value>,
    table: Table,
    passed: bool,
}

impl Suite {
    fn add(&mut self, name: &str, pass: bool, detail: Value) {
        self.passed &= pass;
        self.table.push(vec![name.into(), pass.to_string()]);
        self.checks.push(json!({ "name": name, "pass": pass, "detail": detail }));
    }
}

pub fn verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<Outcome, Failure> {
    let ctx = context(cfg)?;
    let mut s = Suite { checks: Vec::new(), table: Table::new(&["check", "pass"]), passed: true };

    let id = theta8_average_identity();
    s.add("theta8-identity", id.holds(), json!({ "average": id.average.to_string(), "target": id.target.to_string() }));

    let alpha = alpha_volume()?;
    let dual = alpha_dual_cone()?;
    let expect = BigRational::new(1.into(), 4320.into());
    s.add("alpha-exact", alpha == expect && dual == expect, json!({ "alpha": alpha.to_string(), "dual_cone": dual.to_string() }));

    let ideals = ctx.random_ideal_checks(args.trials, cfg.seed);
    s.add("ideal-inverse-fuzz", ideals.passed(), to_value(&ideals));

    let surf = random_surface_checks(&ctx, args.trials, cfg.seed);
    s.add("psi-membership", surf.membership.passed(), to_value(&surf.membership));
    s.add("height-invariance", surf.height_invariance.passed(), to_value(&surf.height_invariance));

    let p = cfg.euler_cutoff.max(10);
    let (e1, e2) = (euler_product::<f64>(&ctx, p), euler_product::<f64>(&ctx, 2 * p));
    s.add("euler-brackets-nest", e1.contains(&e2), json!({ "at_cutoff": e1, "at_double": e2 }));

    let census = fiber_census(&ctx, args.census_bound.unwrap_or(args.bound))?;
    s.add("fiber-census", census.exact(), to_value(&census));

    let b = args.bound;
    let brute = brute_force_count(&ctx, b, default_radius(&ctx, b), BruteMode::Psi);
    let torsor = torsor_count_by_tuple(&ctx, b, TorsorOptions { unit_normalized: true })?;
    s.add(
        "count-equality",
        brute.stabilized && brute.count == torsor.count,
        json!({ "bound": b, "brute": brute, "torsor": torsor.count }),
    );

    let ic = integration(cfg, 1e-8);
    let methods = OmegaMethod::available(ctx.mode);
    let est: Vec<_> = methods.iter().map(|&m| omega_infinity::<f64>(&ctx, m, &ic)).collect::<Result<_, _>>()?;
    let agree = est.iter().all(|e| e.converged || e.method == OmegaMethod::MonteCarlo)
        && est.iter().all(|e| (e.value - est[0].value).abs() <= 0.01 * est[0].value);
    s.add("omega-methods-agree", agree, to_value(&est));

    let json = json!({
        "field": ctx.spec().to_string(),
        "bound": b,
        "seed": cfg.seed,
        "checks": s.checks,
        "passed": s.passed,
    });
    Ok(Outcome { json, table: s.table, passed: s.passed })
}

pub fn analytic(cfg: &RunConfig, args: &AnalyticArgs) -> Result<Outcome, Failure> {
    let ctx = context(cfg)?;
    if args.t == 0 {
        return Err(Failure::Input("--t must be at least 1".into()));
    }
    let density = ideal_density_check(&ctx, args.t);
    let average = average_value_check(&ctx, args.spec, args.t, cfg.euler_cutoff)?;
    let grid: Vec<u64> = [args.t / 100, args.t / 10, args.t].into_iter().filter(|&t| t > 0).collect();
    let omega: Vec<_> = (0..=3).flat_map(|c| omega_sum_report(&ctx, c, &grid)).collect();

    let mut table = Table::new(&["table", "key", "t", "lhs", "rhs", "ratio"]);
    for r in &density {
        table.push(vec!["density".into(), r.class.to_string(), r.t.to_string(), float(r.lhs), float(r.rhs), float(r.ratio)]);
    }
    for r in &average.rows {
        table.push(vec!["average".into(), r.class.to_string(), r.t.to_string(), float(r.lhs), float(r.rhs), float(r.ratio)]);
    }
    for r in &omega {
        let norm = r.t as f64 * ((r.t + 2) as f64).ln().powi(r.c as i32);
        table.push(vec!["omega-sum".into(), r.c.to_string(), r.t.to_string(), float(r.sum), float(norm), float(r.ratio)]);
    }
    let json = json!({
        "field": ctx.spec().to_string(),
        "rho": ctx.rho,
        "density": density,
        "average": average,
        "omega_sums": omega,
    });
    Ok(Outcome { json, table, passed: true })
}
