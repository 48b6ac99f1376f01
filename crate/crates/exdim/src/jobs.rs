//! Job dispatch and output assembly.

use std::collections::BTreeSet;

use exdim_core::exceptional::{
    a_n_check, dimension_meta, dimension_scan_row, entropy_meta, entropy_scan_row, hole_to_cylinders, oracle_estimate,
    survivor_system, Hole, OracleSetup, ScanKind, ScanResult,
};
use exdim_core::markov_systems::{
    describe, gauss_subsystem, linear_cantor, linear_doubling, linear_markov_at, quadratic_julia, random_linear_markov,
    CertificationReport,
};
use exdim_core::thermo::{bowen_root, sandwich_check, PressureCurve, SandwichReport};
use exdim_core::{Enclosure, EntropyValue, Error, MarkovSystem, Sft};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{JobConfig, JobKind, SystemSpec};
use crate::error::{invalid, CliError, Result};
use crate::formats::{emit_plotdata, enclosure_json, read_markov, scan_csv, scan_json, write_text};
use crate::numfmt::{hi, lo, near};

/// Everything a job produces. `csv` is also what goes to stdout.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub csv: String,
    pub json: String,
    pub scan: Option<ScanResult>,
    /// A verification job that found violations: what was checked and how
    /// many cases failed.
    pub failures: Option<(&'static str, usize)>,
}

/// Builds the Markov system named by the config.
pub fn build_system(spec: &SystemSpec) -> Result<MarkovSystem> {
    Ok(match spec {
        SystemSpec::Linear {
            slopes,
            cells,
            transitions,
            depth,
        } => linear_markov_at(slopes, transitions, cells, *depth)?,
        SystemSpec::LinearCantor { depth } => linear_cantor(*depth)?,
        SystemSpec::LinearDoubling { depth } => linear_doubling(*depth)?,
        SystemSpec::Gauss { digits, depth } => gauss_subsystem(digits, *depth)?,
        SystemSpec::Julia(cfg) => quadratic_julia(*cfg)?,
        SystemSpec::Markov(path) => read_markov(path)?,
        SystemSpec::Sft(_) | SystemSpec::RandomLinear { .. } => {
            return invalid(format!("`{}` is not a single Markov system", spec.name()))
        }
    })
}

/// Symbolic base of a system spec, without building the geometry.
pub fn base_sft(spec: &SystemSpec) -> Result<Sft> {
    Ok(match spec {
        SystemSpec::Sft(s) => s.clone(),
        SystemSpec::Linear { transitions, .. } => transitions.clone(),
        SystemSpec::LinearCantor { .. } | SystemSpec::LinearDoubling { .. } | SystemSpec::Julia(_) => Sft::full(2),
        SystemSpec::Gauss { digits, .. } => Sft::full(digits.len()),
        SystemSpec::Markov(_) | SystemSpec::RandomLinear { .. } => {
            return invalid(format!("`{}` has no symbolic base", spec.name()))
        }
    })
}

/// Thread count: the config (including `--threads`), then `EXDIM_THREADS`,
/// then all cores.
pub fn thread_count(cfg: &JobConfig) -> Result<usize> {
    if let Some(n) = cfg.threads {
        return Ok(n);
    }
    match std::env::var("EXDIM_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => invalid(format!("EXDIM_THREADS must be a positive integer, found `{v}`")),
        },
        Err(_) => Ok(0),
    }
}

/// Runs the job on a pool of the configured size.
pub fn run(cfg: &JobConfig) -> Result<JobOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cfg)?)
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cfg))
}

/// Text for stdout, plus the verification failure if any cases failed.
#[derive(Debug)]
pub struct Finished {
    pub stdout: String,
    pub failure: Option<CliError>,
}

/// Runs the job and writes the configured output files. Outputs are written
/// even when a verification fails.
pub fn execute(cfg: &JobConfig) -> Result<Finished> {
    let out = match run(cfg) {
        Ok(out) => out,
        Err(CliError::Compute(Error::NotCertifiedExpanding(r))) => {
            if let Some(p) = &cfg.outputs.report {
                write_text(p, &certification_json(&r))?;
            }
            return Err(CliError::Compute(Error::NotCertifiedExpanding(r)));
        }
        Err(e) => return Err(e),
    };
    if let Some(p) = &cfg.outputs.csv {
        write_text(p, &out.csv)?;
    }
    if let Some(p) = &cfg.outputs.json {
        write_text(p, &out.json)?;
    }
    if let Some(p) = &cfg.outputs.plot {
        match &out.scan {
            Some(s) => emit_plotdata(s, p)?,
            None => return invalid("`plot` output needs a scan job"),
        }
    }
    Ok(Finished {
        failure: out.failures.map(|(what, count)| CliError::Check { what, count }),
        stdout: out.csv,
    })
}

fn dispatch(cfg: &JobConfig) -> Result<JobOutput> {
    match cfg.job {
        JobKind::Entropy => entropy_job(cfg),
        JobKind::Dimension => dimension_job(cfg),
        JobKind::EntropyScan | JobKind::DimensionScan => scan_job(cfg),
        JobKind::VerifySandwich => sandwich_job(cfg),
        JobKind::VerifyAn => an_job(cfg),
        JobKind::Oracle => oracle_job(cfg),
    }
}

fn finish(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json serializes");
    s.push('\n');
    s
}

fn plain(csv: String, json: Value) -> JobOutput {
    JobOutput {
        csv,
        json: finish(json),
        scan: None,
        failures: None,
    }
}

fn pair(e: Option<Enclosure>) -> String {
    match e {
        Some(e) => format!("{},{}", lo(e.lo), hi(e.hi)),
        None => "-inf,-inf".to_string(),
    }
}

fn system_name(cfg: &JobConfig, ms: Option<&MarkovSystem>) -> String {
    match (&cfg.system, ms) {
        (SystemSpec::Sft(s), _) => format!("sft d={}", s.alphabet_size()),
        (_, Some(ms)) => describe(ms),
        (spec, None) => spec.name().to_string(),
    }
}

fn entropy_job(cfg: &JobConfig) -> Result<JobOutput> {
    let (value, name) = match &cfg.system {
        SystemSpec::Sft(s) => (s.entropy(cfg.tol), system_name(cfg, None)),
        spec => {
            let ms = build_system(spec)?;
            let value = if ms.is_empty() {
                EntropyValue::Empty
            } else {
                let p = PressureCurve::new(&ms, cfg.tol)?.sample(0.0).enclosure;
                EntropyValue::Bounds(Enclosure::new(p.lo.max(0.0), p.hi.max(0.0)))
            };
            (value, system_name(cfg, Some(&ms)))
        }
    };
    let csv = format!("entropy_lo,entropy_hi\n{}\n", pair(value.bounds()));
    let json = json!({
        "job": "entropy",
        "system": name,
        "tol": cfg.tol,
        "entropy": enclosure_json(value.bounds()),
    });
    Ok(plain(csv, json))
}

fn dimension_job(cfg: &JobConfig) -> Result<JobOutput> {
    let ms = build_system(&cfg.system)?;
    let dim = bowen_root(&ms, cfg.tol)?;
    let csv = format!("dim_lo,dim_hi\n{}\n", pair(Some(dim.as_enclosure())));
    let json = json!({
        "job": "dimension",
        "system": system_name(cfg, Some(&ms)),
        "tol": cfg.tol,
        "cells": ms.cells().len(),
        "dimension": enclosure_json(Some(dim.as_enclosure())),
    });
    Ok(plain(csv, json))
}

fn scan_job(cfg: &JobConfig) -> Result<JobOutput> {
    let ks = cfg.scan_ks.as_deref().expect("validated");
    let (kind, rows, mut meta) = if cfg.job == JobKind::EntropyScan {
        let sft = base_sft(&cfg.system)?;
        let target = cfg.target.as_ref().expect("validated").resolve(&sft)?;
        let rows = ks
            .par_iter()
            .map(|&k| entropy_scan_row(&sft, &target, k, cfg.tol))
            .collect::<exdim_core::Result<Vec<_>>>()?;
        (ScanKind::Entropy, rows, entropy_meta(&sft, &target, cfg.tol))
    } else {
        let ms = build_system(&cfg.system)?;
        let sft = base_sft(&cfg.system)?;
        let holes = cfg.hole.as_ref().expect("validated").schedule(&sft)?;
        let rows = ks
            .par_iter()
            .map(|&k| dimension_scan_row(&ms, &holes, k, cfg.tol))
            .collect::<exdim_core::Result<Vec<_>>>()?;
        (ScanKind::Dimension, rows, dimension_meta(&ms, &holes, cfg.tol)?)
    };
    meta.seed = cfg.seed;
    let scan = ScanResult::assemble(kind, rows, meta)?;
    Ok(JobOutput {
        csv: scan_csv(&scan),
        json: scan_json(&scan),
        scan: Some(scan),
        failures: None,
    })
}

/// Random linear system number `index` of a seeded batch. Each index has its
/// own ChaCha stream, so the batch does not depend on evaluation order.
pub fn random_system(seed: u64, index: usize, max_symbols: usize) -> exdim_core::Result<MarkovSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    random_linear_markov(&mut rng, max_symbols)
}

fn sandwich_job(cfg: &JobConfig) -> Result<JobOutput> {
    let reports: Vec<SandwichReport> = match &cfg.system {
        SystemSpec::RandomLinear { count, max_symbols } => (0..*count)
            .into_par_iter()
            .map(|i| sandwich_check(&random_system(cfg.seed, i, *max_symbols)?, cfg.tol))
            .collect::<exdim_core::Result<Vec<_>>>()?,
        spec => vec![sandwich_check(&build_system(spec)?, cfg.tol)?],
    };
    let mut csv = String::from("index,h_lo,h_hi,chi_min,chi_max,dim_lo,dim_hi,bound_lo,bound_hi,pass\n");
    let mut rows = Vec::with_capacity(reports.len());
    for (i, r) in reports.iter().enumerate() {
        csv.push_str(&format!(
            "{i},{},{},{},{},{},{},{},{},{}\n",
            lo(r.entropy.lo),
            hi(r.entropy.hi),
            lo(r.lyapunov.chi_min),
            hi(r.lyapunov.chi_max),
            lo(r.dimension.lower),
            hi(r.dimension.upper),
            lo(r.lower_bound),
            hi(r.upper_bound),
            r.pass
        ));
        rows.push(json!({
            "index": i,
            "entropy": enclosure_json(Some(r.entropy)),
            "lyapunov": enclosure_json(Some(Enclosure::new(r.lyapunov.chi_min, r.lyapunov.chi_max))),
            "dimension": enclosure_json(Some(r.dimension.as_enclosure())),
            "bounds": enclosure_json(Some(Enclosure::new(r.lower_bound, r.upper_bound))),
            "pass": r.pass,
        }));
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let json = json!({
        "job": "verify-sandwich",
        "system": cfg.system.name(),
        "seed": cfg.seed,
        "tol": cfg.tol,
        "rows": rows,
        "failures": failed,
    });
    Ok(JobOutput {
        failures: (failed > 0).then_some(("sandwich", failed)),
        ..plain(csv, json)
    })
}

fn an_job(cfg: &JobConfig) -> Result<JobOutput> {
    let sft = base_sft(&cfg.system)?;
    let spec = cfg.an.as_ref().expect("validated");
    let a = spec.cylinders(&sft)?;
    if let Some(&k) = spec.k.iter().find(|&&k| k < a.depth()) {
        return invalid(format!("`an.k` = {k} is below the depth of `an.a`"));
    }
    let cases: Vec<(usize, usize)> = spec.n.iter().flat_map(|&n| spec.k.iter().map(move |&k| (n, k))).collect();
    let reports = cases
        .par_iter()
        .map(|&(n, k)| a_n_check(&sft, &a, n, k, cfg.tol))
        .collect::<exdim_core::Result<Vec<_>>>()?;
    let mut csv = String::from("n,k,direct_lo,direct_hi,power_lo,power_hi,diff,pass\n");
    let mut rows = Vec::with_capacity(reports.len());
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.k,
            pair(r.direct.bounds()),
            pair(r.via_power.bounds()),
            near(r.diff),
            r.pass
        ));
        rows.push(json!({
            "n": r.n,
            "k": r.k,
            "direct": enclosure_json(r.direct.bounds()),
            "via_power": enclosure_json(r.via_power.bounds()),
            "diff": if r.diff.is_finite() { json!(r.diff) } else { Value::Null },
            "pass": r.pass,
        }));
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let json = json!({
        "job": "verify-an",
        "system": system_name(cfg, None),
        "tol": cfg.tol,
        "rows": rows,
        "failures": failed,
    });
    Ok(JobOutput {
        failures: (failed > 0).then_some(("A_N invariance", failed)),
        ..plain(csv, json)
    })
}

fn oracle_job(cfg: &JobConfig) -> Result<JobOutput> {
    let ms = build_system(&cfg.system)?;
    let params = cfg.oracle;
    let hole: Option<Hole> = match &cfg.hole {
        Some(h) => Some(h.schedule(&base_sft(&cfg.system)?)?.at(params.cover_depth)),
        None => None,
    };
    let setup = OracleSetup::new(&ms, hole.as_ref(), &params)?;
    let boxes = (0..setup.chunks(&params))
        .into_par_iter()
        .map(|c| setup.chunk(&params, c))
        .reduce(BTreeSet::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });
    let estimate = oracle_estimate(&boxes, &params)?;
    let reference = match &hole {
        Some(h) => {
            let cover = hole_to_cylinders(&ms, h, params.cover_depth)?;
            let sys = survivor_system(&ms, &cover)?;
            if sys.is_empty() {
                return Err(Error::EmptySystem.into());
            }
            bowen_root(&sys, cfg.tol)?
        }
        None => bowen_root(&ms, cfg.tol)?,
    };
    let diff = (estimate - reference.mid()).abs();
    let csv = format!(
        "oracle,dim_lo,dim_hi,dim_mid,diff\n{},{},{},{},{}\n",
        near(estimate),
        lo(reference.lower),
        hi(reference.upper),
        near(reference.mid()),
        near(diff)
    );
    let json = json!({
        "job": "oracle",
        "system": system_name(cfg, Some(&ms)),
        "hole": hole.as_ref().map(|h| h.describe()),
        "samples": params.samples,
        "iters": params.iters,
        "grid": params.grid,
        "cover_depth": params.cover_depth,
        "seed": params.seed,
        "boxes": boxes.len(),
        "estimate": estimate,
        "dimension": enclosure_json(Some(reference.as_enclosure())),
        "diff": diff,
    });
    Ok(plain(csv, json))
}

/// JSON document for a failed Julia certification.
pub fn certification_json(r: &CertificationReport) -> String {
    let cells: Vec<Value> = r
        .cells
        .iter()
        .map(|c| {
            json!({
                "word": c.word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(""),
                "deriv": enclosure_json(Some(c.deriv)),
            })
        })
        .collect();
    finish(json!({
        "c_re": r.c_re,
        "c_im": r.c_im,
        "depth": r.depth,
        "margin": r.margin,
        "min_deriv": r.min_deriv,
        "reason": r.reason,
        "cells": cells,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn run_text(text: &str) -> Result<JobOutput> {
        run(&JobConfig::parse(text, Path::new("."), &[])?)
    }

    #[test]
    fn entropy_of_full_shift() {
        let out = run_text("job = \"entropy\"\nsystem = \"sft\"\nd = 2\nfull = true\ntol = 1e-12\n").unwrap();
        let mut lines = out.csv.lines();
        assert_eq!(lines.next(), Some("entropy_lo,entropy_hi"));
        let v: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[0] <= std::f64::consts::LN_2 && std::f64::consts::LN_2 <= v[1]);
    }

    #[test]
    fn cantor_dimension_row() {
        let out = run_text("job = \"dimension\"\nsystem = \"linear-cantor\"\n").unwrap();
        let row = out.csv.lines().nth(1).unwrap();
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        let exact = 2f64.ln() / 3f64.ln();
        assert!(v[0] <= exact && exact <= v[1], "{row}");
        assert!((v[0] - 0.6309298).abs() < 1e-6);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let text = "job = \"entropy-scan\"\n[sft]\ngolden = true\n[target]\nperiod = \"0\"\n[scan]\nk = \"1..6\"\n";
        let mut outs = Vec::new();
        for t in [1, 3] {
            let o = crate::config::parse_overrides(&["--threads".into(), t.to_string()]).unwrap();
            let cfg = JobConfig::parse(text, Path::new("."), &o).unwrap();
            let r = run(&cfg).unwrap();
            outs.push((r.csv, r.json));
        }
        assert_eq!(outs[0], outs[1]);
    }

    #[test]
    fn random_batch_is_reproducible() {
        let a = random_system(5, 3, 5).unwrap();
        let b = random_system(5, 3, 5).unwrap();
        assert_eq!(a.branches(), b.branches());
        let c = random_system(5, 4, 5).unwrap();
        assert!(a.branches() != c.branches() || a.cells() != c.cells());
    }

    #[test]
    fn an_rejects_short_k() {
        let e = run_text("job = \"verify-an\"\n[sft]\ngolden = true\n[an]\na = [\"01\"]\nn = 2\nk = \"1..3\"\n").unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }
}
