use super::config::ExperimentConfig;
use crate::characters::{character_group, Character};
use crate::error::{Error, Result};
use crate::euler_sums::{abel_reduction_check, dyadic_grid, lemma_sup_scan, AbelReport, LemmaScanReport, SumSpec};
use crate::number_core::{sieve_primes, sum_reciprocal_primes, PrimeTable};
use crate::sieve_inequality::{
    build_delta, duality_check, estimate_c1, extremal_ratio, gram_matrix, top_eigenpair, variant_re_bound,
    verify_theorem, C1Estimate, DeltaMatrix, DualityReport, ExtremalReport, VerificationReport,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

/// What a subcommand produced.
pub struct Outcome {
    pub json: Value,
    pub csv: Vec<Vec<String>>,
    pub passed: bool,
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

struct Setup {
    spec: SumSpec,
    table: PrimeTable,
    chars: Vec<Character>,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    let spec = cfg.spec()?;
    let table = sieve_primes(cfg.x.max(2))?;
    let group = character_group(cfg.d)?;
    let chars = cfg.characters.select(&group)?;
    if chars.is_empty() {
        return config_err("the character selection is empty");
    }
    Ok(Setup { spec, table, chars })
}

fn envelope(cfg: &ExperimentConfig, body: impl Serialize) -> Result<Value> {
    let mut v = serde_json::to_value(body).map_err(|e| Error::Config(e.to_string()))?;
    if let Value::Object(map) = &mut v {
        map.insert("config".into(), serde_json::to_value(cfg).map_err(|e| Error::Config(e.to_string()))?);
    }
    Ok(v)
}

pub fn characters(cfg: &ExperimentConfig) -> Result<Outcome> {
    let group = character_group(cfg.d)?;
    let chars = cfg.characters.select(&group)?;
    let ns: Vec<u64> = (0..cfg.d).collect();
    let values: Vec<Vec<Complex64>> = chars.iter().map(|c| c.values_at(&ns)).collect();
    let entries: Vec<Value> = chars
        .iter()
        .zip(&values)
        .map(|(c, vals)| {
            json!({
                "index": c.index(),
                "exponents": c.exponents(),
                "order": c.order(),
                "conductor": c.conductor(),
                "primitive": c.is_primitive(),
                "real": c.is_real(),
                "values": vals.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut csv = vec![std::iter::once("n".to_string()).chain(chars.iter().map(|c| format!("chi{}", c.index()))).collect()];
    for (i, n) in ns.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend(values.iter().map(|v| format!("{},{}", num(v[i].re), num(v[i].im))));
        csv.push(row);
    }
    let json = envelope(cfg, json!({ "modulus": cfg.d, "group_size": group.len(), "characters": entries }))?;
    Ok(Outcome { json, csv, passed: true })
}

pub fn lemma_scan(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setup(cfg)?;
    let grid = dyadic_grid(cfg.d, cfg.x);
    let reports: Vec<LemmaScanReport> = s
        .chars
        .iter()
        .filter(|c| !c.is_principal())
        .map(|c| lemma_sup_scan(c, &s.spec, &grid, &grid, &s.table))
        .collect::<Result<_>>()?;
    let mut csv = vec![["character", "w", "y", "t", "sigma", "re_value", "abs_value"].map(String::from).to_vec()];
    for r in &reports {
        for p in &r.profile {
            csv.push(vec![
                r.character_index.to_string(),
                p.w.to_string(),
                p.y.to_string(),
                num(p.t),
                num(p.sigma),
                num(p.re_value),
                num(p.abs_value),
            ]);
        }
    }
    let max = reports.iter().map(|r| r.max_value).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let json = envelope(cfg, json!({ "w_grid": grid, "y_grid": grid, "max_value": max, "reports": reports }))?;
    Ok(Outcome { json, csv, passed: true })
}

fn c1_for(s: &Setup) -> Result<Option<C1Estimate>> {
    if s.chars.len() < 2 {
        Ok(None)
    } else {
        estimate_c1(&s.spec, &s.chars, &s.table).map(Some)
    }
}

#[derive(Serialize)]
struct TrialSummary {
    l: f64,
    c1_hat: f64,
    c_default: f64,
    c_used: f64,
    c_source: &'static str,
    c1_estimate: Option<C1Estimate>,
    max_ratio: f64,
    all_passed: bool,
    trials: Vec<VerificationReport>,
}

fn verification_rows(reports: &[VerificationReport]) -> Vec<Vec<String>> {
    let mut csv = vec![["trial", "seed", "k", "lhs", "rhs", "ratio", "c_used", "lambda_max", "passed"].map(String::from).to_vec()];
    for (i, r) in reports.iter().enumerate() {
        csv.push(vec![
            i.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.k.to_string(),
            num(r.lhs),
            num(r.rhs),
            num(r.ratio),
            num(r.c_used),
            r.lambda_max.map(num).unwrap_or_default(),
            r.passed.to_string(),
        ]);
    }
    csv
}

fn run_trials(cfg: &ExperimentConfig, variant: bool) -> Result<Outcome> {
    let s = setup(cfg)?;
    let est = c1_for(&s)?;
    let c1 = est.as_ref().map_or(0.0, |e| e.c1);
    let c_default = if variant { c1 } else { 4.0 * c1 };
    let (c_used, c_source) = match cfg.c_override {
        Some(c) => (c, "override"),
        None => (c_default, "default"),
    };
    let mut reports = Vec::with_capacity(cfg.trials);
    for i in 0..cfg.trials {
        let seed = cfg.trial_seed(i);
        let a = cfg.coefficients.draw(&s.table, cfg.d, cfg.x, seed)?;
        let report = if variant {
            variant_re_bound(&a, &s.chars, &s.spec, c_used, &s.table)?
        } else {
            let r = verify_theorem(&a, &s.chars, &s.spec, c_used, &s.table)?;
            let (shifts, cutoffs) = r.witness_rows();
            let delta = build_delta(&s.chars, &shifts, &cutoffs, &s.spec, &s.table)?;
            let lambda = top_eigenpair(&gram_matrix(&delta))?.lambda;
            r.with_lambda_max(lambda)
        };
        reports.push(report.with_seed(seed));
    }
    let l = if cfg.d < cfg.x { sum_reciprocal_primes(cfg.d, cfg.x, &s.table)? } else { 0.0 };
    let all_passed = reports.iter().all(|r| r.passed);
    let max_ratio = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let csv = verification_rows(&reports);
    let summary = TrialSummary {
        l,
        c1_hat: c1,
        c_default,
        c_used,
        c_source,
        c1_estimate: est,
        max_ratio,
        all_passed,
        trials: reports,
    };
    Ok(Outcome { json: envelope(cfg, summary)?, csv, passed: all_passed })
}

pub fn verify(cfg: &ExperimentConfig) -> Result<Outcome> {
    run_trials(cfg, false)
}

pub fn variant_verify(cfg: &ExperimentConfig) -> Result<Outcome> {
    run_trials(cfg, true)
}

pub fn estimate_constants(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setup(cfg)?;
    let est = estimate_c1(&s.spec, &s.chars, &s.table)?;
    let l = if cfg.d < cfg.x { sum_reciprocal_primes(cfg.d, cfg.x, &s.table)? } else { 0.0 };
    let k = s.chars.len() as f64;
    let mut csv = vec![vec!["name".to_string(), "value".to_string()]];
    let mut push = |name: String, v: f64| csv.push(vec![name, num(v)]);
    push("l".into(), l);
    push("c1_hat".into(), est.c1);
    push("c_default".into(), 4.0 * est.c1);
    for p in &est.products {
        push(format!("product{}", p.product_index), p.value);
    }
    let json = envelope(
        cfg,
        json!({
            "l": l,
            "k": s.chars.len(),
            "c1_hat": est.c1,
            "c_default": 4.0 * est.c1,
            "theorem_constant": 4.0 * l + (k - 1.0) * 4.0 * est.c1,
            "dual_display_constant": 4.0 * (l + k * est.c1),
            "variant_constant": 2.0 * (l + k * est.c1),
            "estimate": est,
        }),
    )?;
    Ok(Outcome { json, csv, passed: true })
}

/// `(name, shifts, cutoffs)` for the extremal sweep.
fn extremal_grid(k: usize, spec: &SumSpec) -> Vec<(String, Vec<f64>, Vec<u64>)> {
    let t = spec.t_half_width();
    let shift_patterns: [(&str, Vec<f64>); 3] = [
        ("zero", vec![0.0; k]),
        (
            "ramp",
            (0..k).map(|j| if k == 1 { 0.0 } else { -t + 2.0 * t * j as f64 / (k - 1) as f64 }).collect(),
        ),
        ("alternating", (0..k).map(|j| if j % 2 == 0 { t / 2.0 } else { -t / 2.0 }).collect()),
    ];
    let cutoff_patterns: [(&str, Vec<u64>); 2] = [
        ("full", vec![spec.x; k]),
        ("halving", (0..k).map(|j| (spec.x >> j.min(63)).max(spec.d + 1).min(spec.x)).collect()),
    ];
    let mut out = Vec::new();
    for (sn, shifts) in &shift_patterns {
        for (cn, cutoffs) in &cutoff_patterns {
            out.push((format!("{sn}/{cn}"), shifts.clone(), cutoffs.clone()));
        }
    }
    out
}

#[derive(Serialize)]
struct NamedExtremal {
    name: String,
    #[serde(flatten)]
    report: ExtremalReport,
}

pub fn extremal(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setup(cfg)?;
    let c1 = c1_for(&s)?.map_or(0.0, |e| e.c1);
    let mut reports = Vec::new();
    for (name, shifts, cutoffs) in extremal_grid(s.chars.len(), &s.spec) {
        let report = extremal_ratio(&s.chars, &s.spec, &shifts, &cutoffs, c1, &s.table)?;
        reports.push(NamedExtremal { name, report });
    }
    let sane = reports.iter().all(|r| r.report.ratio_to_l >= r.report.max_diagonal_ratio * (1.0 - 1e-12));
    let mut csv = vec![["config", "k", "lambda_max", "l", "ratio_to_l", "ratio_to_real_bound", "max_diagonal_ratio"]
        .map(String::from)
        .to_vec()];
    for r in &reports {
        let e = &r.report;
        csv.push(vec![
            r.name.clone(),
            e.k.to_string(),
            num(e.lambda_max),
            num(e.l),
            num(e.ratio_to_l),
            num(e.ratio_to_real_bound),
            num(e.max_diagonal_ratio),
        ]);
    }
    let json = envelope(cfg, json!({ "c1_hat": c1, "sanity_bound_holds": sane, "reports": reports }))?;
    Ok(Outcome { json, csv, passed: sane })
}

#[derive(Serialize)]
struct NamedDuality {
    name: String,
    #[serde(flatten)]
    report: DualityReport,
}

/// Seeded complex Gaussian fixture with `k` rows and `n` columns.
pub fn random_fixture(k: usize, n: usize, seed: u64) -> Result<DeltaMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect()
        })
        .collect();
    DeltaMatrix::from_dense(rows)
}

pub fn duality_selftest(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setup(cfg)?;
    let k = s.chars.len();
    let (_, shifts, cutoffs) = extremal_grid(k, &s.spec).swap_remove(2);
    let mut reports = Vec::new();
    let euler = build_delta(&s.chars, &shifts, &cutoffs, &s.spec, &s.table)?;
    reports.push(NamedDuality { name: "euler".into(), report: duality_check(&euler, cfg.trials, cfg.seed)? });
    let c = |v: f64| Complex64::new(v, 0.0);
    let diag = DeltaMatrix::from_dense(vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(2.0)]])?;
    reports.push(NamedDuality { name: "diagonal".into(), report: duality_check(&diag, cfg.trials, cfg.seed)? });
    for f in 0..4usize {
        let seed = cfg.trial_seed(f);
        let fixture = random_fixture(2 + 2 * f, 25 + 50 * f, seed)?;
        reports.push(NamedDuality { name: format!("random{f}"), report: duality_check(&fixture, cfg.trials, seed)? });
    }
    let all_passed = reports.iter().all(|r| r.report.passed);
    let mut csv = vec![[
        "fixture",
        "k",
        "columns",
        "lambda_rows",
        "lambda_columns",
        "max_trial_quotient",
        "pullback_quotient",
        "passed",
    ]
    .map(String::from)
    .to_vec()];
    for r in &reports {
        let d = &r.report;
        csv.push(vec![
            r.name.clone(),
            d.k.to_string(),
            d.columns.to_string(),
            num(d.lambda_rows),
            num(d.lambda_columns),
            num(d.max_trial_quotient),
            num(d.pullback_quotient),
            d.passed.to_string(),
        ]);
    }
    let json = envelope(cfg, json!({ "all_passed": all_passed, "reports": reports }))?;
    Ok(Outcome { json, csv, passed: all_passed })
}

#[derive(Serialize)]
struct AbelEntry {
    character_index: usize,
    seed: u64,
    #[serde(flatten)]
    report: AbelReport,
}

pub fn abel_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = setup(cfg)?;
    let mut checks = Vec::new();
    for i in 0..cfg.trials {
        let seed = cfg.trial_seed(i);
        let a = cfg.coefficients.draw(&s.table, cfg.d, cfg.x, seed)?;
        for chi in &s.chars {
            checks.push(AbelEntry { character_index: chi.index(), seed, report: abel_reduction_check(chi, &a, &s.spec, &s.table)? });
        }
    }
    let all_passed = checks.iter().all(|c| c.report.passed);
    let max_ratio = checks.iter().map(|c| c.report.ratio).fold(0.0, f64::max);
    let mut csv = vec![["character", "seed", "m1", "m_rect", "ratio", "passed"].map(String::from).to_vec()];
    for c in &checks {
        csv.push(vec![
            c.character_index.to_string(),
            c.seed.to_string(),
            num(c.report.m1),
            num(c.report.m_rect),
            num(c.report.ratio),
            c.report.passed.to_string(),
        ]);
    }
    let json = envelope(cfg, json!({ "max_ratio": max_ratio, "all_passed": all_passed, "checks": checks }))?;
    Ok(Outcome { json, csv, passed: all_passed })
}
