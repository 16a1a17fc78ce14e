use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use num_complex::Complex64;
use quartic_core::analytic::{self, conjecture_scan, geometric_grid, vaughan_check, weyl_moment, SmoothWeight};
use quartic_core::dirichlet::{
    check_identity, gamma_support_scan, gamma_transform_check, large_sieve_grid, DeltaPoly, Identity, IdentityReport,
    SeriesBuilder, SieveFamily,
};
use quartic_core::gauss_sums::cache::verify_dir;
use quartic_core::gauss_sums::{g2_direct, g4_direct, ComplexVal, GaussSumCache, GaussSumEngine, PrimeMode};
use quartic_core::sieve::primary_factored_upto;
use quartic_core::symbols::{quadratic_symbol, quartic_symbol};
use quartic_core::verify::{identity_battery, BatteryConfig};
use quartic_core::{BetaClass, GaussInt};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::{CacheAction, CmdResult, Command, Failure};

/// Relative tolerance of the Vaughan and Type-II comparisons.
const VAUGHAN_REL: f64 = 1e-8;
/// Largest diagonal growth accepted by `sieve-ratio`.
const SIEVE_SLOPE_MAX: f64 = 0.2;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|e| usage(format!("{what}: '{t}': {e}"))))
        .collect()
}

/// `lo:hi:geometricN` or a comma-separated list of values.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, kind] => {
            let lo: f64 = lo.trim().parse().map_err(|_| usage(format!("bad grid start '{lo}'")))?;
            let hi: f64 = hi.trim().parse().map_err(|_| usage(format!("bad grid end '{hi}'")))?;
            let n: usize = kind
                .trim()
                .strip_prefix("geometric")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| usage(format!("grid spacing '{kind}' is not geometricN")))?;
            if !(lo > 0.0 && hi >= lo && n >= 1) {
                return Err(usage("grid needs 0 < lo ≤ hi and N ≥ 1"));
            }
            geometric_grid(lo, hi, n)
        }
        [_] => parse_list::<f64>(s, "grid")?,
        _ => return Err(usage(format!("cannot parse grid '{s}'"))),
    };
    if grid.is_empty() || grid.iter().any(|x| !(x.is_finite() && *x >= 1.0)) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(usage("grid values must be ≥ 1 and nondecreasing"));
    }
    Ok(grid)
}

fn engine(cfg: &RunConfig) -> Result<GaussSumEngine, Failure> {
    let e = match cfg.resolved_cache_dir() {
        Some(dir) => {
            let cache = GaussSumCache::open(&dir).with_context(|| format!("opening cache {}", dir.display()))?;
            GaussSumEngine::with_cache(Arc::new(cache), PrimeMode::Compute)
        }
        None => GaussSumEngine::new(),
    };
    Ok(e.precision(cfg.precision.unwrap_or_default()))
}

fn create(cfg: &RunConfig) -> Result<Option<BufWriter<File>>, Failure> {
    match &cfg.output {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Ok(Some(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)))
        }
        None => Ok(None),
    }
}

/// JSON-only results; an explicit `--format csv` is a usage error.
fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<(), Failure> {
    if cfg.output.is_none() {
        return Ok(());
    }
    if cfg.format == Some(OutputFormat::Csv) {
        return Err(usage("this command writes JSON only"));
    }
    let mut w = create(cfg)?.expect("output set");
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn fmt_c(z: Complex64) -> String {
    if z.im < 0.0 {
        format!("{:.12}-{:.12}i", z.re, -z.im)
    } else {
        format!("{:.12}+{:.12}i", z.re, z.im)
    }
}

fn fmt_val(v: ComplexVal) -> String {
    format!("{} ± {:.1e}", fmt_c(v.value), v.err)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn with_params(cfg: RunConfig, x: Option<f64>, ell: Option<i64>, beta: Option<BetaClass>, u: Option<f64>, n_max: Option<u64>) -> Result<RunConfig, Failure> {
    let c = cfg.overlay(RunConfig { x_max: x, ell, beta, u, n_max, ..Default::default() });
    c.validate().map_err(usage)?;
    Ok(c)
}

pub fn run(cmd: Command, cfg: RunConfig) -> CmdResult {
    match cmd {
        Command::Symbol { alpha, gamma, order } => symbol(&cfg, alpha, gamma, order),
        Command::GaussSum { nu, c, order, direct } => gauss_sum(&cfg, nu, c, order, direct),
        Command::Identities { quick, prime_max, pairs } => identities(&cfg, quick, prime_max, pairs),
        Command::ConjectureScan { x_grid, ell, beta } => {
            let cfg = with_params(cfg, None, ell, beta, None, None)?;
            scan(&cfg, x_grid)
        }
        Command::Moments { x, k } => {
            let cfg = with_params(cfg, x, None, None, None, None)?;
            moments(&cfg, &k)
        }
        Command::VaughanCheck { x, u, ell, beta, weight } => {
            let cfg = with_params(cfg, x, ell, beta, u, None)?;
            vaughan(&cfg, &weight)
        }
        Command::SeriesCheck { identity, alpha, alpha_max, nu, ell, beta, n_max } => {
            let cfg = with_params(cfg, None, None, beta, None, n_max)?;
            series(&cfg, &identity, alpha, alpha_max, nu, ell.as_deref())
        }
        Command::GammaCheck { k_max, extra, tuples } => gamma(&cfg, k_max, extra, tuples),
        Command::SieveRatio { m_grid, n_grid, families, trials } => sieve(&cfg, &m_grid, n_grid.as_deref(), &families, trials),
        Command::Cache { action } => cache(&cfg, action),
    }
}

fn symbol(cfg: &RunConfig, alpha: GaussInt, gamma: GaussInt, order: u8) -> CmdResult {
    let v = if order == 2 { quadratic_symbol(alpha, gamma) } else { quartic_symbol(alpha, gamma) };
    let v = v.map_err(|e| usage(e.to_string()))?;
    println!("{v}");
    emit_json(cfg, &serde_json::json!({ "alpha": alpha.to_string(), "gamma": gamma.to_string(), "order": order, "value": v.to_string() }))?;
    Ok(true)
}

fn gauss_sum(cfg: &RunConfig, nu: GaussInt, c: GaussInt, order: u8, direct: bool) -> CmdResult {
    let e = engine(cfg)?;
    let (value, reference) = if order == 2 {
        (g2_direct(nu, c)?, None)
    } else {
        let v = e.g4(nu, c).map_err(|err| match err {
            quartic_core::Error::EvenModulus(_) | quartic_core::Error::ZeroModulus => usage(err.to_string()),
            other => Failure::from(other),
        })?;
        (v, if direct { Some(g4_direct(nu, c)?) } else { None })
    };
    println!("g{order}({nu}, {c}) = {}", fmt_val(value));
    let n = (c.norm() as f64).sqrt();
    println!("normalized         = {}", fmt_c(value.value / n));
    let mut ok = true;
    if let Some(r) = reference {
        let d = (r.value - value.value).norm();
        ok = d <= r.err + value.err + 1e-9 * n;
        println!("direct sum         = {}  |Δ| = {d:.2e}  {}", fmt_val(r), verdict(ok));
    }
    emit_json(
        cfg,
        &serde_json::json!({ "nu": nu.to_string(), "c": c.to_string(), "order": order, "value": value, "direct": reference }),
    )?;
    Ok(ok)
}

fn identities(cfg: &RunConfig, quick: bool, prime_max: Option<u64>, pairs: Option<usize>) -> CmdResult {
    let e = engine(cfg)?;
    let mut bc = if quick {
        BatteryConfig {
            reciprocity_norm: 100,
            supplement_norm: 2000,
            prime_max: 5000,
            sqrootcancel_norm: 2000,
            moment_norm: 2000,
            moment_k: 8,
            pairs: 100,
            pair_norm: 4000,
            seed: 1,
        }
    } else {
        BatteryConfig::default()
    };
    if let Some(p) = prime_max {
        bc.prime_max = p;
    }
    if let Some(p) = pairs {
        bc.pairs = p;
    }
    if let Some(s) = cfg.seed {
        bc.seed = s;
    }
    let t = Instant::now();
    let reports = identity_battery(&e, &bc)?;
    println!("{:<24} {:>10} {:>9} {:>12}  result", "check", "cases", "failures", "max_error");
    let mut ok = true;
    for r in &reports {
        ok &= r.pass();
        println!("{:<24} {:>10} {:>9} {:>12.3e}  {}", r.name, r.cases, r.failures, r.max_error, verdict(r.pass()));
        if let Some(f) = &r.first_failure {
            println!("    first failure: {f}");
        }
    }
    println!("battery: {} in {:.1?}", verdict(ok), t.elapsed());
    emit_json(cfg, &reports)?;
    Ok(ok)
}

fn scan(cfg: &RunConfig, x_grid: Option<String>) -> CmdResult {
    let grid = match (x_grid, cfg.x_max) {
        (Some(g), _) => parse_grid(&g)?,
        (None, Some(x)) if x >= 1e3 => geometric_grid(1e3, x, 8),
        (None, Some(x)) => vec![x],
        (None, None) => return Err(usage("conjecture-scan needs --x-grid or x_max")),
    };
    let ell = cfg.ell.unwrap_or(0);
    let beta = cfg.beta.unwrap_or(BetaClass::One);
    let e = engine(cfg)?;
    let rows = conjecture_scan(&e, &grid, ell, beta)?;
    match create(cfg)? {
        Some(mut w) => {
            match cfg.resolved_format() {
                OutputFormat::Csv => analytic::write_csv(&mut w, &rows)?,
                OutputFormat::Json => analytic::write_json(&mut w, &rows)?,
            }
            w.flush()?;
            println!("{:>14} {:>5} {:>5} {:>26}", "X", "ell", "beta", "S(X)/X^(3/4)");
            for r in &rows {
                println!("{:>14.1} {:>5} {:>5} {:>26}", r.x, r.ell, r.beta, r.normalized.map(fmt_c).unwrap_or_default());
            }
        }
        None => {
            let out = io::stdout();
            let mut lock = out.lock();
            analytic::write_csv(&mut lock, &rows)?;
        }
    }
    Ok(true)
}

fn moments(cfg: &RunConfig, ks: &str) -> CmdResult {
    let x = cfg.x_max.ok_or_else(|| usage("moments needs --x or x_max"))?;
    let ks: Vec<i64> = parse_list(ks, "k")?;
    if ks.contains(&0) {
        return Err(usage("moment exponents must be nonzero"));
    }
    let e = engine(cfg)?;
    let mut ok = true;
    let mut pairs = Vec::new();
    println!("{:>4} {:>8} {:>36} {:>36} {:>10}  result", "k", "primes", "direct", "reduced", "|Δ|");
    for k in ks {
        let m = weyl_moment(&e, x, k)?;
        ok &= m.agree();
        println!("{:>4} {:>8} {:>36} {:>36} {:>10.2e}  {}", k, m.primes, fmt_c(m.direct.value), fmt_c(m.reduced.value), m.discrepancy(), verdict(m.agree()));
        pairs.push(m);
    }
    emit_json(cfg, &pairs)?;
    Ok(ok)
}

fn vaughan(cfg: &RunConfig, weight: &str) -> CmdResult {
    let x = cfg.x_max.ok_or_else(|| usage("vaughan-check needs --x or x_max"))?;
    let u = cfg.u.ok_or_else(|| usage("vaughan-check needs --u"))?;
    let r: SmoothWeight = weight.parse().map_err(|e: String| usage(e))?;
    let (ell, beta) = (cfg.ell.unwrap_or(0), cfg.beta.unwrap_or(BetaClass::One));
    let e = engine(cfg)?;
    let rep = vaughan_check(&e, x, ell, beta, u, &r)?;
    println!("X = {x}, u = {u}, ell = {ell}, beta = {beta}, weight = {r}");
    for p in analytic::VaughanPiece::ALL {
        println!("  Sigma_{:<3} = {}", p.to_string(), fmt_val(rep.sums.get(p)));
    }
    println!("  H         = {}", fmt_val(rep.h));
    let tol = VAUGHAN_REL * rep.scale + rep.sums.residual().err;
    println!("identity residual {:.3e} (tolerance {:.3e})  {}", rep.residual, tol, verdict(rep.identity_ok(VAUGHAN_REL)));
    if rep.regime {
        println!("Sigma_4 = 0 exactly                        {}", verdict(rep.sigma4_zero()));
    } else {
        println!("Sigma_4 = 0 not expected (u ≥ √X)");
    }
    println!("Sigma_0 = H                                {}", verdict(rep.sigma0_is_h(VAUGHAN_REL)));
    let (d2, d3) = rep.type2_discrepancy();
    println!("Type II: |AB − Σ₂''| = {d2:.3e}, |GH − Σ₃| = {d3:.3e}  {}", verdict(rep.type2_ok(VAUGHAN_REL)));
    let ok = rep.pass(VAUGHAN_REL);
    println!("vaughan-check: {}", verdict(ok));
    emit_json(cfg, &rep)?;
    Ok(ok)
}

fn series(cfg: &RunConfig, which: &str, alpha: Option<GaussInt>, alpha_max: u64, nu: GaussInt, ells: Option<&str>) -> CmdResult {
    let ids: Vec<Identity> = if which == "all" { Identity::ALL.to_vec() } else { parse_list(which, "identity")? };
    let ells: Vec<i64> = match (ells, cfg.ell) {
        (Some(s), _) => parse_list(s, "ell")?,
        (None, Some(l)) => vec![l],
        (None, None) => vec![0, 1, -1, 4, -4],
    };
    let betas: Vec<BetaClass> = cfg.beta.map(|b| vec![b]).unwrap_or_else(|| BetaClass::ALL.to_vec());
    let alphas: Vec<GaussInt> = match alpha {
        Some(a) => vec![a],
        None => primary_factored_upto(alpha_max as u128, true).into_iter().map(|f| f.c).collect(),
    };
    let n_max = cfg.n_max.unwrap_or(2000);
    let e = engine(cfg)?;
    let builder = SeriesBuilder::new(&e, n_max);
    let t = Instant::now();
    let mut reports: Vec<IdentityReport> = Vec::new();
    let mut delta_ok = true;
    let mut skipped = 0usize;
    for &a in &alphas {
        for &beta in &betas {
            let d = DeltaPoly::new(beta, 0, a).map_err(|err| usage(err.to_string()))?;
            delta_ok &= d.symbolic_check()?;
            for &ell in &ells {
                for &id in &ids {
                    match check_identity(&builder, id, a, nu, ell, beta) {
                        Ok(r) => reports.push(r),
                        Err(quartic_core::Error::Precondition(_)) if alpha.is_none() => skipped += 1,
                        Err(err) => return Err(usage(err.to_string())),
                    }
                }
            }
        }
    }
    let failed: Vec<&IdentityReport> = reports.iter().filter(|r| !r.pass).collect();
    let worst = reports.iter().map(|r| r.max_discrepancy / r.scale.max(1.0)).fold(0.0, f64::max);
    println!("levels: {}, identities: {:?}, ell: {:?}, N_max: {n_max}", alphas.len(), ids.iter().map(|i| i.to_string()).collect::<Vec<_>>(), ells);
    println!("checks: {}, failures: {}, skipped (ν not coprime): {skipped}", reports.len(), failed.len());
    println!("worst discrepancy / coefficient scale: {worst:.3e}");
    println!("Δ product = expansion: {}", verdict(delta_ok));
    for r in failed.iter().take(10) {
        println!("  FAIL {} α={} ν={} ℓ={} β={}: {:.3e} (scale {:.3e})", r.identity, r.alpha, r.nu, r.ell, r.beta, r.max_discrepancy, r.scale);
    }
    let ok = failed.is_empty() && delta_ok && !reports.is_empty();
    println!("series-check: {} in {:.1?}", verdict(ok), t.elapsed());
    emit_json(cfg, &reports)?;
    Ok(ok)
}

fn gamma(cfg: &RunConfig, k_max: u32, extra: u32, tuples: usize) -> CmdResult {
    let mut ok = true;
    let mut scans = Vec::new();
    println!("{:>3} {:>9} {:>14} {:>14} {:>10}  support", "k", "evaluated", "sup inside", "sup outside", "violations");
    for k in 0..=k_max {
        let s = gamma_support_scan(k, extra.max(6))?;
        ok &= s.violations == 0;
        println!("{:>3} {:>9} {:>14.6} {:>14.3e} {:>10}  {}", k, s.evaluated, s.sup_inside, s.sup_outside, s.violations, verdict(s.violations == 0));
        scans.push(s);
    }
    let t = gamma_transform_check(tuples, cfg.seed.unwrap_or(7))?;
    ok &= t.failures == 0;
    println!("transform: {} tuples, {} failures, max |Δ| {:.3e}  {}", t.tuples, t.failures, t.max_discrepancy, verdict(t.failures == 0));
    println!("gamma-check: {}", verdict(ok));
    emit_json(cfg, &serde_json::json!({ "support": scans, "transform": t }))?;
    Ok(ok)
}

fn sieve(cfg: &RunConfig, m_grid: &str, n_grid: Option<&str>, families: &str, trials: usize) -> CmdResult {
    let ms: Vec<u64> = parse_list(m_grid, "m-grid")?;
    let ns: Vec<u64> = match n_grid {
        Some(s) => parse_list(s, "n-grid")?,
        None => ms.clone(),
    };
    let fams: Vec<SieveFamily> = parse_list(families, "families")?;
    if ms.iter().chain(&ns).any(|&v| v == 0) || trials == 0 || fams.is_empty() {
        return Err(usage("grids, trials and families must be nonempty and positive"));
    }
    let rep = large_sieve_grid(&ms, &ns, &fams, trials, cfg.seed.unwrap_or(1))?;
    println!("{:>8} {:>8} {:>8} {:>8} {:>8} {:>10}", "family", "M", "N", "#m", "#n", "ratio");
    for c in rep.cells.iter().filter(|c| c.m == c.n) {
        println!("{:>8} {:>8} {:>8} {:>8} {:>8} {:>10.5}", c.family.to_string(), c.m, c.n, c.moduli, c.support, c.ratio);
    }
    for s in &rep.diagonal {
        println!("diagonal {:>8} {:?} -> {:?}: slope {:+.3}", s.family.to_string(), s.from, s.to, s.slope);
    }
    let diag = rep.max_diagonal_slope();
    let ok = rep.diagonal.is_empty() || diag <= SIEVE_SLOPE_MAX;
    println!("max diagonal slope {diag:.3} (limit {SIEVE_SLOPE_MAX})  {}", verdict(ok));
    if !rep.fixed_n.is_empty() {
        println!("max fixed-N slope {:.3} (normalization transition, informational)", rep.max_fixed_n_slope());
    }
    emit_json(cfg, &rep)?;
    Ok(ok)
}

fn cache(cfg: &RunConfig, action: CacheAction) -> CmdResult {
    let dir = cfg.resolved_cache_dir().ok_or_else(|| usage("no cache directory: pass --cache-dir or set QUARTIC_CACHE_DIR"))?;
    let report = match action {
        CacheAction::Inspect => {
            let c = GaussSumCache::open(&dir)?;
            println!("cache {}", c.path().display());
            println!("records: {}, corrupt lines skipped: {}", c.len(), c.corrupt_on_open());
            verify_dir(&dir)?
        }
        CacheAction::Verify => verify_dir(&dir)?,
        CacheAction::Compact => GaussSumCache::open(&dir)?.compact()?,
    };
    println!("records {}, corrupt {}, duplicates {}, max norm {}", report.records, report.corrupt, report.duplicates, report.max_norm);
    emit_json(cfg, &report)?;
    Ok(!matches!(action, CacheAction::Verify) || report.corrupt == 0)
}
