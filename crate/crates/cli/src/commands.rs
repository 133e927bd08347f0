//! One function per subcommand; each returns the JSON result, an optional
//! CSV table and the text printed to stdout.

use std::path::Path;
use std::time::Instant;

use friable_core::analytic::{
    harper_prediction, sifted_mobius_sum, sifted_mu2_tail, singular_series_s1, solve_saddle_alpha,
};
use friable_core::correlate::{
    balanced_friable, correlation, default_tau, h_tau, sigma_split, subset_decomposition_bound,
    PhaseSequence, DEFAULT_EPSILON,
};
use friable_core::dickman::{rho, DickmanTable, DEFAULT_TOL};
use friable_core::forms::{
    count_friable_values, count_friable_values_with_bounds, main_term, parse_body, parse_forms,
    ConvexBody,
};
use friable_core::gowers::{gowers_norm_cyclic, gowers_norm_interval, SequenceFn};
use friable_core::numeric::snapped_power;
use friable_core::sieve::{psi_count_with, FactorSieve, SPF_INFINITY};
use friable_core::{Error, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::args::*;
use crate::config::Settings;
use crate::output::{fmt_f64, to_json, Table};

pub struct Outcome {
    pub result: Value,
    pub table: Option<Table>,
    pub stdout: String,
    /// `false` when a verification suite did not meet its criterion.
    pub passed: bool,
}

impl Outcome {
    fn json(result: Value) -> Self {
        Outcome {
            stdout: to_json(&result),
            result,
            table: None,
            passed: true,
        }
    }

    fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

fn cplx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn phase(spec: &str) -> Result<PhaseSequence> {
    spec.parse()
}

pub fn run(command: &Command, settings: &Settings) -> Result<Outcome> {
    match command {
        Command::Sieve(a) => sieve(a, settings),
        Command::Dickman(a) => dickman(a, settings),
        Command::Count(a) => count(a),
        Command::Saddle(a) => saddle(a),
        Command::Harper(a) => harper(a),
        Command::Mertens(a) => mertens(a),
        Command::Gowers(a) => gowers(a),
        Command::Correlate(a) => correlate(a),
        Command::Decompose(a) => decompose(a),
        Command::Verify(a) => verify(a, settings),
    }
}

fn sieve(a: &SieveArgs, settings: &Settings) -> Result<Outcome> {
    let s = FactorSieve::with_config(a.lo, a.hi, &settings.sieve)?;
    let mut table = Table::new(vec!["n", "lpf", "spf", "mu"]);
    let (mut primes, mut squarefree, mut friable) = (0u64, 0u64, 0u64);
    for (i, n) in (a.lo..=a.hi).enumerate() {
        let (lpf, spf, mu) = (s.lpf_table()[i], s.spf_table()[i], s.mu_table()[i]);
        primes += u64::from(n >= 2 && lpf == n);
        squarefree += u64::from(mu != 0);
        if let Some(y) = a.y {
            friable += u64::from(n >= 1 && lpf as f64 <= y);
        }
        let spf = if spf == SPF_INFINITY { "inf".to_string() } else { spf.to_string() };
        table.push(vec![n.to_string(), lpf.to_string(), spf, mu.to_string()]);
    }
    let mut result = json!({
        "lo": a.lo,
        "hi": a.hi,
        "len": s.len(),
        "primes": primes,
        "squarefree": squarefree,
    });
    if let Some(y) = a.y {
        result["y"] = json!(y);
        result["friable"] = json!(friable);
    }
    Ok(Outcome::json(result).with_table(table))
}

fn dickman(a: &DickmanArgs, settings: &Settings) -> Result<Outcome> {
    let tol = a.tol.unwrap_or(settings.tol);
    if let Some(t) = &a.table {
        let (u_max, step) = (t[0], t[1]);
        if !(step > 0.0) || !(u_max >= 0.0) {
            return Err(Error::Argument("table needs U_MAX >= 0 and STEP > 0".into()));
        }
        let dt = DickmanTable::new(u_max.max(1.0), tol)?;
        let mut table = Table::new(vec!["u", "rho"]);
        let steps = (u_max / step + 1e-9).floor() as u64;
        for i in 0..=steps {
            let u = i as f64 * step;
            table.push(vec![fmt_f64(u), fmt_f64(dt.eval(u)?)]);
        }
        let result = json!({"u_max": u_max, "step": step, "tol": tol, "rows": steps + 1});
        return Ok(Outcome::json(result).with_table(table));
    }
    let u = a.u.expect("clap requires --u or --table");
    let value = if tol == DEFAULT_TOL {
        rho(u)?
    } else {
        DickmanTable::new(u.max(1.0), tol)?.eval(u)?
    };
    let mut out = Outcome::json(json!({"u": u, "rho": value, "tol": tol}));
    out.stdout = format!("{value}");
    Ok(out)
}

fn count(a: &CountArgs) -> Result<Outcome> {
    let start = Instant::now();
    let n = i64::try_from(a.n).map_err(|_| Error::Argument("N too large".into()))?;
    let system = parse_forms(&a.forms, n)?;
    let body = parse_body(&a.body, system.dim(), n)?;
    let c = count_friable_values(&system, &body, a.n, &a.u)?;
    let m = main_term(&system, &body, a.n, &a.u)?;
    Ok(Outcome::json(json!({
        "forms": system.to_string(),
        "N": a.n,
        "u": a.u,
        "count": c,
        "main_term": m.value,
        "ratio": c as f64 / m.value,
        "volume": m.volume.value,
        "volume_exact": m.volume.exact,
        "rho_product": m.rho_product,
        "elapsed": start.elapsed().as_secs_f64(),
    })))
}

fn saddle(a: &SaddleArgs) -> Result<Outcome> {
    let s = solve_saddle_alpha(a.n, a.y)?;
    let log_n = (a.n as f64).ln();
    Ok(Outcome::json(json!({
        "N": s.n,
        "y": s.y,
        "alpha": s.alpha,
        "residual": s.residual,
        "residual_bound": 1e-10 * log_n,
    })))
}

fn harper_system(n: u64) -> Result<(friable_core::forms::FormSystem, ConvexBody)> {
    let n = n as i64;
    Ok((parse_forms("x1; x2; x1+x2", n)?, ConvexBody::simplex(2, 1, n)?))
}

fn harper(a: &HarperArgs) -> Result<Outcome> {
    let h = harper_prediction(a.n, a.y)?;
    let mut result = json!({
        "N": a.n,
        "y": a.y,
        "alpha": h.saddle.alpha,
        "residual": h.saddle.residual,
        "s0": h.s0.value,
        "s0_tail_bound": h.s0.tail_bound,
        "s0_bracket": [h.s0.lower, h.s0.upper],
        "s1": h.s1,
        "psi": h.psi,
        "prediction": h.value,
        "prediction_bracket": [h.lower, h.upper],
    });
    if a.exact {
        let (system, body) = harper_system(a.n)?;
        let c = count_friable_values_with_bounds(&system, &body, a.n, &[a.y; 3])?;
        result["count"] = json!(c);
        result["ratio"] = json!(c as f64 / h.value);
    }
    Ok(Outcome::json(result))
}

fn mertens(a: &MertensArgs) -> Result<Outcome> {
    let sum = sifted_mobius_sum(a.n, a.u)?;
    let r = rho(a.u)?;
    let log_n = (a.n as f64).ln();
    let mut result = json!({
        "N": a.n,
        "u": a.u,
        "sum": sum,
        "rho": r,
        "abs_error": (sum - r).abs(),
        "error_scale": a.u * (a.u + 1.0).ln() / log_n,
    });
    if let Some(tau) = a.tau {
        result["tau"] = json!(tau);
        result["mu2_tail"] = json!(sifted_mu2_tail(a.n, a.u, tau)?);
        result["mu2_tail_scale"] = json!(tau * a.u * a.u);
    }
    Ok(Outcome::json(result))
}

fn parse_csv_sequence(path: &Path) -> Result<SequenceFn> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<f64> = line
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Argument(format!("line {}: expected re or re,im", i + 1)))?;
        match parts[..] {
            [re] => values.push(Complex64::new(re, 0.0)),
            [re, im] => values.push(Complex64::new(re, im)),
            _ => return Err(Error::Argument(format!("line {}: expected re or re,im", i + 1))),
        }
    }
    SequenceFn::new(values, path.display().to_string())
}

fn preset_sequence(spec: &str) -> Result<SequenceFn> {
    let bad = || Error::Argument(format!("unknown sequence {spec:?}"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    let nums = |s: &str| -> Result<Vec<f64>> {
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
            .collect()
    };
    match kind {
        "balanced" => match nums(rest)?[..] {
            [n, u] if n >= 2.0 && n.fract() == 0.0 => balanced_friable(n as u64, u)?.to_sequence(),
            _ => Err(bad()),
        },
        "ones" => match nums(rest)?[..] {
            [m] if m >= 1.0 && m.fract() == 0.0 => SequenceFn::constant(m as usize, Complex64::new(1.0, 0.0)),
            _ => Err(bad()),
        },
        "character" => match nums(rest)?[..] {
            [m, xi] if m >= 1.0 && m.fract() == 0.0 => {
                let m = m as usize;
                let v = (0..m)
                    .map(|n| Complex64::from_polar(1.0, std::f64::consts::TAU * xi * n as f64 / m as f64))
                    .collect();
                SequenceFn::new(v, spec)
            }
            _ => Err(bad()),
        },
        "phase" => {
            let (m, p) = rest.split_once(':').ok_or_else(bad)?;
            let m: usize = m.trim().parse().map_err(|_| bad())?;
            let g = phase(p)?;
            SequenceFn::new((0..m as u64).map(|n| g.eval(n)).collect(), spec)
        }
        _ => Err(bad()),
    }
}

fn gowers(a: &GowersArgs) -> Result<Outcome> {
    let path = Path::new(&a.input);
    let f = if path.is_file() {
        parse_csv_sequence(path)?
    } else {
        preset_sequence(&a.input)?
    };
    let norm = if a.cyclic {
        gowers_norm_cyclic(&f, a.k)?
    } else {
        gowers_norm_interval(&f, a.k)?
    };
    Ok(Outcome::json(json!({
        "input": a.input,
        "label": f.label(),
        "length": f.len(),
        "k": a.k,
        "domain": if a.cyclic { "cyclic" } else { "interval" },
        "norm": norm,
    })))
}

fn correlate(a: &CorrelateArgs) -> Result<Outcome> {
    let g = phase(&a.phase)?;
    let h = balanced_friable(a.n, a.u)?;
    let c = correlation(&h.values(), &g);
    let mut result = json!({
        "N": a.n,
        "u": a.u,
        "phase": g.to_string(),
        "step": g.step(),
        "lipschitz": g.lipschitz(),
        "correlation": cplx(c),
        "modulus": c.norm(),
    });
    if let Some(tau) = a.tau {
        let ht = h_tau(a.n, a.u, tau)?;
        let ct = correlation(&ht.values, &g);
        result["tau"] = json!(tau);
        result["h_tau_correlation"] = cplx(ct);
        result["h_tau_modulus"] = json!(ct.norm());
    }
    Ok(Outcome::json(result))
}

fn decompose(a: &DecomposeArgs) -> Result<Outcome> {
    let g = phase(&a.phase)?;
    let tau = match a.tau {
        Some(t) => t,
        None => default_tau(a.n, DEFAULT_EPSILON)?,
    };
    let s = sigma_split(a.n, a.u, tau, &g)?;
    Ok(Outcome::json(json!({
        "N": a.n,
        "u": a.u,
        "tau": tau,
        "phase": g.to_string(),
        "sigma1": cplx(s.sigma1),
        "sigma2": cplx(s.sigma2),
        "total": cplx(s.total),
        "identity_error": s.identity_error,
        "bounds": {
            "sigma2_scale": s.sigma2_scale,
            "sigma2_constant": s.sigma2.norm() / s.sigma2_scale,
        },
    })))
}

fn suite_outcome(suite: Suite, pass: bool, mut result: Value, table: Table) -> Outcome {
    result["suite"] = json!(suite);
    result["pass"] = json!(pass);
    let mut out = Outcome::json(result).with_table(table);
    out.passed = pass;
    out
}

fn verify(a: &VerifyArgs, settings: &Settings) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = match a.suite {
        Suite::Theorem1 => verify_theorem1(a.n.unwrap_or(2000))?,
        Suite::Hildebrand => verify_hildebrand(a.n.unwrap_or(1_000_000), settings)?,
        Suite::Product => verify_product(a.n.unwrap_or(1000), settings)?,
        Suite::Dickman => verify_dickman()?,
        Suite::Mertens => verify_mertens(a.n.unwrap_or(1_000_000))?,
        Suite::Gowers => verify_gowers(a.n.unwrap_or(1 << 14))?,
        Suite::Decomposition => verify_decomposition(a.n.unwrap_or(1_000_000))?,
        Suite::Harper => verify_harper(a.n.unwrap_or(10_000))?,
        Suite::Subsets => verify_subsets(a.n.unwrap_or(2000))?,
    };
    out.result["elapsed"] = json!(start.elapsed().as_secs_f64());
    out.stdout = to_json(&out.result);
    Ok(out)
}

fn verify_theorem1(n: u64) -> Result<Outcome> {
    let (system, body) = harper_system(n)?;
    let mut table = Table::new(vec!["u1", "u2", "u3", "count", "main_term", "ratio", "pass"]);
    let mut pass = true;
    for u in [[2.0, 2.0, 2.0], [1.5, 2.0, 2.5]] {
        let c = count_friable_values(&system, &body, n, &u)?;
        let m = main_term(&system, &body, n, &u)?;
        let ratio = c as f64 / m.value;
        let ok = (0.75..=1.25).contains(&ratio);
        pass &= ok;
        table.push(vec![
            fmt_f64(u[0]),
            fmt_f64(u[1]),
            fmt_f64(u[2]),
            c.to_string(),
            fmt_f64(m.value),
            fmt_f64(ratio),
            ok.to_string(),
        ]);
    }
    let result = json!({"N": n, "ratio_range": [0.75, 1.25], "rows": table.rows.len()});
    Ok(suite_outcome(Suite::Theorem1, pass, result, table))
}

fn verify_hildebrand(n: u64, settings: &Settings) -> Result<Outcome> {
    let log_n = (n as f64).ln();
    let mut table = Table::new(vec!["u", "psi", "rho", "deviation", "bound", "pass"]);
    let mut pass = true;
    for u in [1.5, 2.0, 2.5, 3.0] {
        let psi = psi_count_with(n, snapped_power(n as f64, 1.0 / u), &settings.sieve)?;
        let r = rho(u)?;
        let dev = (psi as f64 / (n as f64 * r) - 1.0).abs();
        let bound = 3.0 * u * (u + 1.0).ln() / log_n;
        pass &= dev <= bound;
        table.push(vec![fmt_f64(u), psi.to_string(), fmt_f64(r), fmt_f64(dev), fmt_f64(bound), (dev <= bound).to_string()]);
    }
    Ok(suite_outcome(Suite::Hildebrand, pass, json!({"N": n}), table))
}

fn verify_product(n: u64, settings: &Settings) -> Result<Outcome> {
    let system = parse_forms("x1; x2", n as i64)?;
    let body = ConvexBody::boxed(vec![1, 1], vec![n as i64, n as i64])?;
    let mut table = Table::new(vec!["u", "count", "psi_squared", "pass"]);
    let mut pass = true;
    for u in [2.0, 3.0] {
        let c = count_friable_values(&system, &body, n, &[u, u])?;
        let psi = psi_count_with(n, snapped_power(n as f64, 1.0 / u), &settings.sieve)?;
        pass &= c == psi * psi;
        table.push(vec![fmt_f64(u), c.to_string(), (psi * psi).to_string(), (c == psi * psi).to_string()]);
    }
    Ok(suite_outcome(Suite::Product, pass, json!({"N": n}), table))
}

fn verify_dickman() -> Result<Outcome> {
    let closed = (rho(2.0)? - (1.0 - 2f64.ln())).abs();
    let h = 1e-5;
    let mut residual = 0.0f64;
    let mut table = Table::new(vec!["u", "rho", "dde_residual"]);
    for i in 0..1000 {
        let u = 1.0 + 19.0 * (i as f64 + 0.5) / 1000.0;
        let d = (rho(u + h)? - rho(u - h)?) / (2.0 * h);
        let r = (u * d + rho(u - 1.0)?).abs();
        residual = residual.max(r);
        table.push(vec![fmt_f64(u), fmt_f64(rho(u)?), fmt_f64(r)]);
    }
    let pass = closed <= 1e-9 && residual <= 1e-9;
    let result = json!({"closed_form_error": closed, "max_dde_residual": residual});
    Ok(suite_outcome(Suite::Dickman, pass, result, table))
}

fn verify_mertens(n_max: u64) -> Result<Outcome> {
    let u = 2.0;
    let r = rho(u)?;
    let mut table = Table::new(vec!["N", "sum", "abs_error"]);
    let mut errors = Vec::new();
    let mut n = 1000u64;
    while n <= n_max {
        let s = sifted_mobius_sum(n, u)?;
        errors.push((s - r).abs());
        table.push(vec![n.to_string(), fmt_f64(s), fmt_f64((s - r).abs())]);
        n *= 10;
    }
    let inversions: Vec<f64> = errors.windows(2).filter(|w| w[1] > w[0]).map(|w| w[1] / w[0] - 1.0).collect();
    let trend = inversions.is_empty() || (inversions.len() == 1 && inversions[0] <= 0.10);
    let last_n = n / 10;
    let bound = 2.0 * u * (u + 1.0).ln() / (last_n as f64).ln() * r;
    let last = errors.last().copied().unwrap_or(f64::INFINITY);
    let pass = trend && last <= bound;
    let result = json!({"u": u, "rho": r, "bound_at_largest_N": bound});
    Ok(suite_outcome(Suite::Mertens, pass, result, table))
}

fn verify_gowers(n_max: u64) -> Result<Outcome> {
    let mut table = Table::new(vec!["N", "u2_interval"]);
    let mut norms = Vec::new();
    let mut n = 1u64 << 10;
    while n <= n_max {
        let seq = balanced_friable(n, 2.0)?.to_sequence()?;
        let v = gowers_norm_interval(&seq, 2)?;
        norms.push(v);
        table.push(vec![n.to_string(), fmt_f64(v)]);
        n <<= 2;
    }
    let one = SequenceFn::constant(64, Complex64::new(1.0, 0.0))?;
    let unit = (2..=4).map(|k| gowers_norm_cyclic(&one, k)).collect::<Result<Vec<_>>>()?;
    let pass = norms.windows(2).all(|w| w[1] < w[0]) && unit.iter().all(|&x| x == 1.0);
    Ok(suite_outcome(Suite::Gowers, pass, json!({"u": 2.0, "norm_of_one": unit}), table))
}

fn verify_decomposition(n_max: u64) -> Result<Outcome> {
    let phases = [PhaseSequence::golden(), PhaseSequence::golden_quadratic(), PhaseSequence::golden_bracket()];
    let mut table = Table::new(vec!["N", "u", "tau", "phase", "identity_error", "sigma2_constant"]);
    let (mut worst, mut fitted) = (0.0f64, 0.0f64);
    for n in [n_max / 100, n_max / 10, n_max] {
        let tau = default_tau(n, DEFAULT_EPSILON)?;
        for u in [1.5, 2.0, 3.0] {
            for g in &phases {
                let s = sigma_split(n, u, tau, g)?;
                let c = s.sigma2.norm() / s.sigma2_scale;
                worst = worst.max(s.identity_error);
                fitted = fitted.max(c);
                table.push(vec![n.to_string(), fmt_f64(u), fmt_f64(tau), g.to_string(), fmt_f64(s.identity_error), fmt_f64(c)]);
            }
        }
    }
    let pass = worst <= 1e-8 && fitted <= 50.0;
    let result = json!({"max_identity_error": worst, "fitted_constant": fitted});
    Ok(suite_outcome(Suite::Decomposition, pass, result, table))
}

fn verify_harper(n: u64) -> Result<Outcome> {
    let y = 100.0f64.min(n as f64);
    let h = harper_prediction(n, y)?;
    let (system, body) = harper_system(n)?;
    let c = count_friable_values_with_bounds(&system, &body, n, &[y; 3])?;
    let ratio = c as f64 / h.value;
    let s1 = (singular_series_s1(1.0, 1e-12)? - 0.5).abs();
    let pass = (0.5..=2.0).contains(&ratio) && s1 <= 1e-10 && h.saddle.residual <= 1e-10 * (n as f64).ln();
    let mut table = Table::new(vec!["N", "y", "count", "prediction", "ratio"]);
    table.push(vec![n.to_string(), fmt_f64(y), c.to_string(), fmt_f64(h.value), fmt_f64(ratio)]);
    let result = json!({
        "N": n, "y": y, "alpha": h.saddle.alpha, "residual": h.saddle.residual,
        "s0": h.s0.value, "s1": h.s1, "count": c, "prediction": h.value, "ratio": ratio,
    });
    Ok(suite_outcome(Suite::Harper, pass, result, table))
}

fn verify_subsets(n: u64) -> Result<Outcome> {
    let (system, body) = harper_system(n)?;
    let r = subset_decomposition_bound(&system, &body, n, &[2.0, 2.0, 2.0])?;
    let mut table = Table::new(vec!["subset", "sum"]);
    for s in &r.subset_sums {
        let name: Vec<String> = s.subset.iter().map(|i| (i + 1).to_string()).collect();
        table.push(vec![name.join("+"), fmt_f64(s.value)]);
    }
    let result = serde_json::to_value(&r).expect("report serializes");
    Ok(suite_outcome(Suite::Subsets, r.holds, result, table))
}
