//! Job configuration files.
//!
//! A config is a TOML document with top-level job keys and one section per
//! system or job parameter group:
//!
//! ```toml
//! job = "dimension-scan"
//! tol = 1e-10
//! csv = "cantor.csv"
//!
//! [linear-cantor]
//! depth = 1
//!
//! [hole]
//! center = 0.0
//! radius = 1.0
//! factor = 0.333333333333333333
//!
//! [scan]
//! k = "1..10"
//! ```
//!
//! Instead of a section, a system may be named with `system = "<name>"` and
//! its parameters given at top level. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use exdim_core::exceptional::{HoleSchedule, Hole, OracleParams, Target, DEFAULT_SEED};
use exdim_core::markov_systems::JuliaConfig;
use exdim_core::{Complex64, CylinderSet, Sft};
use toml::{Table, Value};

use crate::error::{invalid, CliError, Result};
use crate::formats::{parse_word, read_cylinders, read_sft};

pub const DEFAULT_TOL: f64 = 1e-10;

const SYSTEMS: [&str; 8] = [
    "sft",
    "linear",
    "linear-cantor",
    "linear-doubling",
    "gauss",
    "julia",
    "markov",
    "random-linear",
];

const TOP_LEVEL: [&str; 9] = ["job", "system", "tol", "seed", "threads", "csv", "json", "plot", "report"];

const JOB_SECTIONS: [&str; 5] = ["target", "hole", "scan", "an", "oracle"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JobKind {
    Entropy,
    Dimension,
    EntropyScan,
    DimensionScan,
    VerifySandwich,
    VerifyAn,
    Oracle,
}

impl JobKind {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "entropy" => JobKind::Entropy,
            "dimension" => JobKind::Dimension,
            "entropy-scan" => JobKind::EntropyScan,
            "dimension-scan" => JobKind::DimensionScan,
            "verify-sandwich" => JobKind::VerifySandwich,
            "verify-an" => JobKind::VerifyAn,
            "oracle" => JobKind::Oracle,
            _ => return invalid(format!("unknown job `{s}`")),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            JobKind::Entropy => "entropy",
            JobKind::Dimension => "dimension",
            JobKind::EntropyScan => "entropy-scan",
            JobKind::DimensionScan => "dimension-scan",
            JobKind::VerifySandwich => "verify-sandwich",
            JobKind::VerifyAn => "verify-an",
            JobKind::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone)]
pub enum SystemSpec {
    Sft(Sft),
    Linear {
        slopes: Vec<f64>,
        cells: Vec<(f64, f64)>,
        transitions: Sft,
        depth: usize,
    },
    LinearCantor { depth: usize },
    LinearDoubling { depth: usize },
    Gauss { digits: Vec<u32>, depth: usize },
    Julia(JuliaConfig),
    /// Explicit system read from a `markov v1` file.
    Markov(PathBuf),
    /// `count` random linear systems, for sandwich verification.
    RandomLinear { count: usize, max_symbols: usize },
}

impl SystemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SystemSpec::Sft(_) => "sft",
            SystemSpec::Linear { .. } => "linear",
            SystemSpec::LinearCantor { .. } => "linear-cantor",
            SystemSpec::LinearDoubling { .. } => "linear-doubling",
            SystemSpec::Gauss { .. } => "gauss",
            SystemSpec::Julia(_) => "julia",
            SystemSpec::Markov(_) => "markov",
            SystemSpec::RandomLinear { .. } => "random-linear",
        }
    }
}

#[derive(Debug, Clone)]
pub enum TargetSpec {
    Periodic { preperiod: Vec<u32>, period: Vec<u32> },
    /// Words of one length; checked against the system's base shift when
    /// the job runs.
    Words(Vec<Vec<u32>>),
    File(PathBuf),
}

impl TargetSpec {
    pub fn resolve(&self, sft: &Sft) -> Result<Target> {
        Ok(match self {
            TargetSpec::Periodic { preperiod, period } => Target::Periodic {
                preperiod: preperiod.clone(),
                period: period.clone(),
            },
            TargetSpec::Words(w) => Target::Cylinders(cylinders(sft, w)?),
            TargetSpec::File(p) => Target::Cylinders(read_cylinders(p, sft)?),
        })
    }
}

#[derive(Debug, Clone)]
pub enum HoleSpec {
    Ball {
        center: Complex64,
        radius: f64,
        factor: Option<f64>,
    },
    Words(Vec<Vec<u32>>),
}

impl HoleSpec {
    pub fn schedule(&self, sft: &Sft) -> Result<HoleSchedule> {
        Ok(match self {
            HoleSpec::Ball {
                center,
                radius,
                factor: Some(f),
            } => HoleSchedule::Shrinking {
                center: *center,
                base_radius: *radius,
                factor: *f,
            },
            HoleSpec::Ball {
                center,
                radius,
                factor: None,
            } => HoleSchedule::Fixed(Hole::Geometric {
                center: *center,
                radius: *radius,
            }),
            HoleSpec::Words(w) => HoleSchedule::Fixed(Hole::Symbolic(cylinders(sft, w)?)),
        })
    }
}

fn cylinders(sft: &Sft, words: &[Vec<u32>]) -> Result<CylinderSet> {
    let depth = words.first().map_or(0, |w| w.len());
    if words.iter().any(|w| w.len() != depth) {
        return invalid("cylinder words must share one length");
    }
    Ok(CylinderSet::from_words(sft, depth, words.iter().cloned())?)
}

#[derive(Debug, Clone)]
pub struct AnSpec {
    pub a: Vec<Vec<u32>>,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
}

impl AnSpec {
    pub fn cylinders(&self, sft: &Sft) -> Result<CylinderSet> {
        cylinders(sft, &self.a)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    /// Julia certification report, written when certification fails.
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub job: JobKind,
    pub system: SystemSpec,
    pub tol: f64,
    pub seed: u64,
    pub threads: Option<usize>,
    pub outputs: Outputs,
    pub target: Option<TargetSpec>,
    pub hole: Option<HoleSpec>,
    pub scan_ks: Option<Vec<usize>>,
    pub an: Option<AnSpec>,
    pub oracle: OracleParams,
}

/// One `[section]` (or the top level) with its keys checked against a list.
struct Section<'a> {
    name: &'a str,
    table: &'a Table,
}

impl<'a> Section<'a> {
    fn new(name: &'a str, table: &'a Table, allowed: &[&str]) -> Result<Self> {
        if let Some(k) = table.keys().find(|k| !allowed.contains(&k.as_str())) {
            return invalid(format!("unknown key `{}`", qualified(name, k)));
        }
        Ok(Section { name, table })
    }

    fn key(&self, k: &str) -> String {
        qualified(self.name, k)
    }

    fn has(&self, k: &str) -> bool {
        self.table.contains_key(k)
    }

    fn f64(&self, k: &str) -> Result<Option<f64>> {
        match self.table.get(k) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => invalid(format!("`{}` must be a number", self.key(k))),
        }
    }

    fn finite(&self, k: &str) -> Result<Option<f64>> {
        match self.f64(k)? {
            Some(x) if !x.is_finite() => invalid(format!("`{}` must be finite", self.key(k))),
            x => Ok(x),
        }
    }

    fn usize(&self, k: &str) -> Result<Option<usize>> {
        match self.table.get(k) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(_) => invalid(format!("`{}` must be a nonnegative integer", self.key(k))),
        }
    }

    fn positive(&self, k: &str) -> Result<Option<usize>> {
        match self.usize(k)? {
            Some(0) => invalid(format!("`{}` must be positive", self.key(k))),
            x => Ok(x),
        }
    }

    fn bool(&self, k: &str) -> Result<Option<bool>> {
        match self.table.get(k) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => invalid(format!("`{}` must be true or false", self.key(k))),
        }
    }

    fn str(&self, k: &str) -> Result<Option<&'a str>> {
        match self.table.get(k) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => invalid(format!("`{}` must be a string", self.key(k))),
        }
    }

    fn array(&self, k: &str) -> Result<Option<&'a Vec<Value>>> {
        match self.table.get(k) {
            None => Ok(None),
            Some(Value::Array(a)) => Ok(Some(a)),
            Some(_) => invalid(format!("`{}` must be an array", self.key(k))),
        }
    }

    fn f64s(&self, k: &str) -> Result<Option<Vec<f64>>> {
        let Some(a) = self.array(k)? else { return Ok(None) };
        a.iter()
            .map(|v| match v {
                Value::Float(x) if x.is_finite() => Ok(*x),
                Value::Integer(i) => Ok(*i as f64),
                _ => invalid(format!("`{}` must hold finite numbers", self.key(k))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn strings(&self, k: &str) -> Result<Option<Vec<&'a str>>> {
        let Some(a) = self.array(k)? else { return Ok(None) };
        a.iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.as_str()),
                _ => invalid(format!("`{}` must hold strings", self.key(k))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn words(&self, k: &str, d: usize) -> Result<Option<Vec<Vec<u32>>>> {
        let Some(list) = self.strings(k)? else { return Ok(None) };
        list.iter()
            .map(|s| word(s, d).ok_or_else(|| CliError::Validation(format!("bad word `{s}` in `{}`", self.key(k)))))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// `"a..b"` (inclusive), a single integer, or an integer array; strictly
    /// increasing.
    fn range(&self, k: &str) -> Result<Option<Vec<usize>>> {
        let bad = || invalid(format!("`{}` must be \"a..b\", an integer or an integer array", self.key(k)));
        let out: Vec<usize> = match self.table.get(k) {
            None => return Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => vec![*i as usize],
            Some(Value::String(s)) => {
                let Some((a, b)) = s.split_once("..") else { return bad() };
                let (Ok(a), Ok(b)) = (a.trim().parse::<usize>(), b.trim().parse::<usize>()) else {
                    return bad();
                };
                (a..=b).collect()
            }
            Some(Value::Array(a)) => {
                let mut v = Vec::with_capacity(a.len());
                for x in a {
                    match x {
                        Value::Integer(i) if *i >= 0 => v.push(*i as usize),
                        _ => return bad(),
                    }
                }
                v
            }
            Some(_) => return bad(),
        };
        if out.is_empty() || out.contains(&0) {
            return invalid(format!("`{}` must list positive values", self.key(k)));
        }
        if out.windows(2).any(|p| p[0] >= p[1]) {
            return invalid(format!("`{}` must be strictly increasing", self.key(k)));
        }
        Ok(Some(out))
    }
}

fn qualified(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

/// Word written as base-`d` digits, or dot-separated indices when `d > 36`.
/// An empty string is the empty word.
fn word(s: &str, d: usize) -> Option<Vec<u32>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    parse_word(s, d)
}

fn path_in(base: &Path, s: &str) -> PathBuf {
    let p = Path::new(s);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Parses a `--key value` override list. Values are read as TOML values when
/// possible and as bare strings otherwise.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, Value)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let Some(key) = a.strip_prefix("--") else {
            return invalid(format!("expected `--key value`, found `{a}`"));
        };
        let (key, raw) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| CliError::Validation(format!("missing value for `--{key}`")))?;
                (key.to_string(), v.clone())
            }
        };
        if key.is_empty() {
            return invalid("empty override key");
        }
        out.push((key, override_value(&raw)));
    }
    Ok(out)
}

fn override_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn apply_override(root: &mut Table, key: &str, value: Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields one part");
    let mut t = root;
    for p in parts {
        let entry = t.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        t = match entry {
            Value::Table(t) => t,
            _ => return invalid(format!("`{p}` is not a section")),
        };
    }
    t.insert(last.to_string(), value);
    Ok(())
}

impl JobConfig {
    /// Reads `path`, applies overrides and validates. Relative input paths
    /// are resolved against the config's directory, output paths against the
    /// working directory.
    pub fn load(path: &Path, overrides: &[(String, Value)]) -> Result<JobConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        JobConfig::parse(&text, base, overrides)
    }

    pub fn parse(text: &str, base: &Path, overrides: &[(String, Value)]) -> Result<JobConfig> {
        let mut root: Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Validation(format!("config: {}", e.message())))?;
        for (k, v) in overrides {
            apply_override(&mut root, k, v.clone())?;
        }
        let (top, sections) = split_sections(root)?;
        let top_keys = Section::new("", &top, &all_top_keys())?;

        let job = JobKind::parse(top_keys.str("job")?.ok_or_else(|| CliError::Validation("missing `job`".into()))?)?;
        let tol = top_keys.f64("tol")?.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return invalid("`tol` must be positive and finite");
        }
        let seed = match top.get("seed") {
            None => DEFAULT_SEED,
            Some(Value::Integer(i)) if *i >= 0 => *i as u64,
            Some(Value::String(s)) => parse_seed(s)?,
            Some(_) => return invalid("`seed` must be a nonnegative integer or a hex string"),
        };
        let threads = top_keys.positive("threads")?;
        let out = |k: &str| -> Result<Option<PathBuf>> { Ok(top_keys.str(k)?.map(PathBuf::from)) };
        let outputs = Outputs {
            csv: out("csv")?,
            json: out("json")?,
            plot: out("plot")?,
            report: out("report")?,
        };

        let system = system_spec(&top, &sections, base)?;
        let d = base_alphabet(&system);
        let section = |name: &str| sections.iter().find(|(n, _)| n == name).map(|(_, t)| t);

        let target = match section("target") {
            None => None,
            Some(t) => Some(target_spec(&Section::new("target", t, &["preperiod", "period", "cylinders", "file"])?, d, base)?),
        };
        let hole = match section("hole") {
            None => None,
            Some(t) => Some(hole_spec(
                &Section::new("hole", t, &["center", "center_im", "radius", "factor", "cylinders"])?,
                d,
            )?),
        };
        let scan_ks = match section("scan") {
            None => None,
            Some(t) => Section::new("scan", t, &["k"])?.range("k")?,
        };
        let an = match section("an") {
            None => None,
            Some(t) => {
                let s = Section::new("an", t, &["a", "n", "k"])?;
                let a = s.words("a", d)?.ok_or_else(|| CliError::Validation("missing `an.a`".into()))?;
                let n = s.range("n")?.ok_or_else(|| CliError::Validation("missing `an.n`".into()))?;
                let k = s.range("k")?.ok_or_else(|| CliError::Validation("missing `an.k`".into()))?;
                Some(AnSpec { a, n, k })
            }
        };
        let mut oracle = OracleParams {
            seed,
            ..OracleParams::default()
        };
        if let Some(t) = section("oracle") {
            let s = Section::new("oracle", t, &["samples", "iters", "grid", "cover_depth"])?;
            oracle.samples = s.positive("samples")?.unwrap_or(oracle.samples);
            oracle.iters = s.positive("iters")?.unwrap_or(oracle.iters);
            oracle.grid = s.positive("grid")?.unwrap_or(oracle.grid);
            oracle.cover_depth = s.positive("cover_depth")?.unwrap_or(oracle.cover_depth);
            if oracle.grid < 2 {
                return invalid("`oracle.grid` must be at least 2");
            }
        }

        let cfg = JobConfig {
            job,
            system,
            tol,
            seed,
            threads,
            outputs,
            target,
            hole,
            scan_ks,
            an,
            oracle,
        };
        cfg.check_job()?;
        Ok(cfg)
    }

    /// Job-specific requirements.
    fn check_job(&self) -> Result<()> {
        let sft_only = matches!(self.system, SystemSpec::Sft(_));
        let random = matches!(self.system, SystemSpec::RandomLinear { .. });
        let need = |ok: bool, msg: &str| if ok { Ok(()) } else { invalid(msg.to_string()) };
        if random {
            need(self.job == JobKind::VerifySandwich, "`random-linear` is only valid for verify-sandwich")?;
        }
        match self.job {
            JobKind::Entropy => Ok(()),
            JobKind::Dimension | JobKind::Oracle | JobKind::VerifySandwich => {
                need(!sft_only, "this job needs a Markov system, not an sft")
            }
            JobKind::EntropyScan => {
                need(self.target.is_some(), "entropy-scan needs a [target] section")?;
                need(self.scan_ks.is_some(), "entropy-scan needs [scan] k")?;
                need(!matches!(self.system, SystemSpec::Markov(_)), "entropy-scan needs a symbolic base")
            }
            JobKind::DimensionScan => {
                need(!sft_only, "dimension-scan needs a Markov system")?;
                need(!matches!(self.system, SystemSpec::Markov(_)), "dimension-scan needs a generated system")?;
                need(self.hole.is_some(), "dimension-scan needs a [hole] section")?;
                need(self.scan_ks.is_some(), "dimension-scan needs [scan] k")
            }
            JobKind::VerifyAn => {
                need(sft_only, "verify-an needs an sft")?;
                need(self.an.is_some(), "verify-an needs an [an] section")
            }
        }
    }
}

fn parse_seed(s: &str) -> Result<u64> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| CliError::Validation(format!("bad seed `{s}`")))
}

fn all_top_keys() -> Vec<&'static str> {
    let mut v: Vec<&str> = TOP_LEVEL.to_vec();
    v.extend(SYSTEM_KEYS.iter().flat_map(|(_, keys)| keys.iter().copied()));
    v.sort_unstable();
    v.dedup();
    v
}

const SYSTEM_KEYS: [(&str, &[&str]); 8] = [
    ("sft", &["d", "full", "golden", "rows", "file"]),
    ("linear", &["slopes", "cells", "rows", "depth"]),
    ("linear-cantor", &["depth"]),
    ("linear-doubling", &["depth"]),
    ("gauss", &["digits", "depth"]),
    ("julia", &["c_re", "c_im", "depth", "margin"]),
    ("markov", &["file"]),
    ("random-linear", &["count", "max_symbols"]),
];

/// Top-level scalars and named sections. Unknown section names are errors.
fn split_sections(root: Table) -> Result<(Table, Vec<(String, Table)>)> {
    let mut top = Table::new();
    let mut sections = Vec::new();
    for (k, v) in root {
        match v {
            Value::Table(t) => {
                if !SYSTEMS.contains(&k.as_str()) && !JOB_SECTIONS.contains(&k.as_str()) {
                    return invalid(format!("unknown section `[{k}]`"));
                }
                sections.push((k, t));
            }
            v => {
                top.insert(k, v);
            }
        }
    }
    Ok((top, sections))
}

fn system_spec(top: &Table, sections: &[(String, Table)], base: &Path) -> Result<SystemSpec> {
    let named: Vec<&str> = sections
        .iter()
        .map(|(n, _)| n.as_str())
        .filter(|n| SYSTEMS.contains(n))
        .collect();
    let flat: Table = top
        .iter()
        .filter(|(k, _)| !TOP_LEVEL.contains(&k.as_str()))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let chosen = match top.get("system") {
        Some(Value::String(s)) => {
            if !SYSTEMS.contains(&s.as_str()) {
                return invalid(format!("unknown system `{s}`"));
            }
            if named.iter().any(|n| *n != s) {
                return invalid("multiple system specs");
            }
            s.as_str()
        }
        Some(_) => return invalid("`system` must be a string"),
        None => match named.as_slice() {
            [] => return invalid("no system spec"),
            [one] => one,
            _ => return invalid("multiple system specs"),
        },
    };
    let mut params = flat;
    if let Some((_, t)) = sections.iter().find(|(n, _)| n == chosen) {
        for (k, v) in t {
            if params.insert(k.clone(), v.clone()).is_some() {
                return invalid(format!("`{k}` given both at top level and in [{chosen}]"));
            }
        }
    }
    let allowed = SYSTEM_KEYS.iter().find(|(n, _)| *n == chosen).expect("known system").1;
    let s = Section::new(chosen, &params, allowed)?;
    build_system(chosen, &s, base)
}

fn depth_of(s: &Section, default: usize) -> Result<usize> {
    Ok(s.positive("depth")?.unwrap_or(default))
}

fn transitions(s: &Section, d: usize) -> Result<Sft> {
    match s.strings("rows")? {
        None => Ok(Sft::full(d)),
        Some(rows) => {
            if rows.len() != d {
                return invalid(format!("`{}` needs {d} rows", s.key("rows")));
            }
            Ok(Sft::from_rows(&rows).map_err(|e| CliError::Validation(format!("`{}`: {e}", s.key("rows"))))?)
        }
    }
}

fn build_system(name: &str, s: &Section, base: &Path) -> Result<SystemSpec> {
    Ok(match name {
        "sft" => {
            let given = ["full", "golden", "rows", "file"].iter().filter(|k| s.has(k)).count();
            if given != 1 {
                return invalid("[sft] needs exactly one of `full`, `golden`, `rows`, `file`");
            }
            let sft = if let Some(f) = s.bool("full")? {
                if !f {
                    return invalid("`sft.full` must be true when given");
                }
                Sft::full(s.positive("d")?.ok_or_else(|| CliError::Validation("`sft.full` needs `d`".into()))?)
            } else if let Some(g) = s.bool("golden")? {
                if !g || s.has("d") {
                    return invalid("`sft.golden` must be true and takes no `d`");
                }
                Sft::golden_mean()
            } else if let Some(f) = s.str("file")? {
                if s.has("d") {
                    return invalid("`sft.file` takes no `d`");
                }
                read_sft(&path_in(base, f))?
            } else {
                let rows = s.strings("rows")?.expect("counted above");
                if let Some(d) = s.usize("d")? {
                    if d != rows.len() {
                        return invalid("`sft.d` does not match the number of rows");
                    }
                }
                transitions(s, rows.len())?
            };
            SystemSpec::Sft(sft)
        }
        "linear" => {
            let slopes = s.f64s("slopes")?.ok_or_else(|| CliError::Validation("`linear.slopes` missing".into()))?;
            let cells = match s.array("cells")? {
                None => return invalid("`linear.cells` missing"),
                Some(a) => a
                    .iter()
                    .map(|c| match c {
                        Value::Array(p) if p.len() == 2 => {
                            let x = |v: &Value| match v {
                                Value::Float(f) => Some(*f),
                                Value::Integer(i) => Some(*i as f64),
                                _ => None,
                            };
                            match (x(&p[0]), x(&p[1])) {
                                (Some(a), Some(b)) => Ok((a, b)),
                                _ => invalid("`linear.cells` entries must be [lo, hi] numbers"),
                            }
                        }
                        _ => invalid("`linear.cells` entries must be [lo, hi] pairs"),
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            if slopes.len() != cells.len() || slopes.is_empty() {
                return invalid("`linear` needs one slope per cell");
            }
            SystemSpec::Linear {
                transitions: transitions(s, slopes.len())?,
                slopes,
                cells,
                depth: depth_of(s, 1)?,
            }
        }
        "linear-cantor" => SystemSpec::LinearCantor { depth: depth_of(s, 1)? },
        "linear-doubling" => SystemSpec::LinearDoubling { depth: depth_of(s, 1)? },
        "gauss" => {
            let digits = match s.array("digits")? {
                None => return invalid("`gauss.digits` missing"),
                Some(a) => a
                    .iter()
                    .map(|v| match v {
                        Value::Integer(i) if *i >= 1 && *i <= u32::MAX as i64 => Ok(*i as u32),
                        _ => invalid("`gauss.digits` must be positive integers"),
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            SystemSpec::Gauss {
                digits,
                depth: depth_of(s, 1)?,
            }
        }
        "julia" => {
            let c = Complex64::new(s.finite("c_re")?.unwrap_or(0.0), s.finite("c_im")?.unwrap_or(0.0));
            let mut cfg = JuliaConfig::new(c, depth_of(s, 8)?);
            if let Some(m) = s.finite("margin")? {
                if m < 0.0 {
                    return invalid("`julia.margin` must be nonnegative");
                }
                cfg.expansion_margin = m;
            }
            SystemSpec::Julia(cfg)
        }
        "markov" => {
            let f = s.str("file")?.ok_or_else(|| CliError::Validation("`markov.file` missing".into()))?;
            SystemSpec::Markov(path_in(base, f))
        }
        "random-linear" => {
            let count = s.positive("count")?.unwrap_or(100);
            let max_symbols = s.usize("max_symbols")?.unwrap_or(6);
            if max_symbols < 2 {
                return invalid("`random-linear.max_symbols` must be at least 2");
            }
            SystemSpec::RandomLinear { count, max_symbols }
        }
        _ => unreachable!("checked against SYSTEMS"),
    })
}

/// Alphabet size of the symbolic base, used to read words in the config.
fn base_alphabet(system: &SystemSpec) -> usize {
    match system {
        SystemSpec::Sft(s) => s.alphabet_size(),
        SystemSpec::Linear { slopes, .. } => slopes.len(),
        SystemSpec::LinearCantor { .. } | SystemSpec::LinearDoubling { .. } | SystemSpec::Julia(_) => 2,
        SystemSpec::Gauss { digits, .. } => digits.len(),
        SystemSpec::Markov(_) | SystemSpec::RandomLinear { .. } => usize::MAX,
    }
}

fn target_spec(s: &Section, d: usize, base: &Path) -> Result<TargetSpec> {
    let periodic = s.has("period") || s.has("preperiod");
    let given = [periodic, s.has("cylinders"), s.has("file")].iter().filter(|b| **b).count();
    if given != 1 {
        return invalid("[target] needs exactly one of `period`, `cylinders`, `file`");
    }
    if periodic {
        let one = |k: &str| -> Result<Vec<u32>> {
            let w = s.str(k)?.unwrap_or("");
            word(w, d).ok_or_else(|| CliError::Validation(format!("bad word in `{}`", s.key(k))))
        };
        let period = one("period")?;
        if period.is_empty() {
            return invalid("`target.period` must be nonempty");
        }
        return Ok(TargetSpec::Periodic {
            preperiod: one("preperiod")?,
            period,
        });
    }
    if let Some(f) = s.str("file")? {
        return Ok(TargetSpec::File(path_in(base, f)));
    }
    Ok(TargetSpec::Words(s.words("cylinders", d)?.expect("checked above")))
}

fn hole_spec(s: &Section, d: usize) -> Result<HoleSpec> {
    if s.has("cylinders") {
        if ["center", "center_im", "radius", "factor"].iter().any(|k| s.has(k)) {
            return invalid("[hole] takes either `cylinders` or a ball");
        }
        return Ok(HoleSpec::Words(s.words("cylinders", d)?.expect("checked above")));
    }
    let radius = s
        .finite("radius")?
        .ok_or_else(|| CliError::Validation("`hole.radius` missing".into()))?;
    if radius < 0.0 {
        return invalid("`hole.radius` must be nonnegative");
    }
    let factor = s.finite("factor")?;
    if let Some(f) = factor {
        if !(f > 0.0 && f < 1.0) {
            return invalid("`hole.factor` must lie in (0, 1)");
        }
    }
    Ok(HoleSpec::Ball {
        center: Complex64::new(s.finite("center")?.unwrap_or(0.0), s.finite("center_im")?.unwrap_or(0.0)),
        radius,
        factor,
    })
}
