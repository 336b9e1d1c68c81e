//! Parameter sweeps over `(κ/ε, γ/ε)` and time series of a single point.

use crate::coeffs::{coeffs, GaussianCoeffs, Model};
use crate::dynamics::sink_diagnostics;
use crate::error::{Error, Result};
use crate::io::{finite, fmt_num};
use crate::model::{ModelParams, Regime, DEFAULT_EP_TOL};
use crate::witnesses::{max_over_period, period, Flag, Flags, Witness, WitnessReport};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Cells with `|Λ|/ε` above this are flagged divergent.
pub const LAMBDA_DIVERGENCE: f64 = 100.0;

pub const SWEEP_HEADER: &str = "kappa_over_eps,gamma_over_eps,value,flags,regime";

pub const EVOLVE_HEADER: &str =
    "eps_t,B1,B2,ReC1,ImC1,ReD,ImD,ReDbar,ImDbar,tau,tau1,tau2,EN,flags";

/// Evenly spaced grid including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid {
    pub fn validate(&self, name: &str) -> Result<()> {
        let in_range = |x: f64| (0.0..=2.0).contains(&x);
        if !(in_range(self.min) && in_range(self.max) && self.min <= self.max) {
            return Err(Error::InvalidConfig(format!("{name} grid bounds must satisfy 0 <= min <= max <= 2")));
        }
        if !(2..=4096).contains(&self.n) {
            return Err(Error::InvalidConfig(format!("{name} grid size must be in [2, 4096], got {}", self.n)));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.value(i))
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self { min: 0.0, max: 1.0, n: 101 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Tau,
    Tau1,
    Tau2,
    EN,
    Lambda,
    /// Full-model `τ₁` over the chosen model's.
    RatioTau1,
    /// Full-model `E_N` over the chosen model's.
    RatioEN,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Tau,
        Quantity::Tau1,
        Quantity::Tau2,
        Quantity::EN,
        Quantity::Lambda,
        Quantity::RatioTau1,
        Quantity::RatioEN,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Tau => "tau",
            Quantity::Tau1 => "tau1",
            Quantity::Tau2 => "tau2",
            Quantity::EN => "en",
            Quantity::Lambda => "lambda",
            Quantity::RatioTau1 => "ratio_tau1",
            Quantity::RatioEN => "ratio_en",
        }
    }

    fn witness(&self) -> Option<Witness> {
        match self {
            Quantity::Tau => Some(Witness::Tau),
            Quantity::Tau1 | Quantity::RatioTau1 => Some(Witness::Tau1),
            Quantity::Tau2 => Some(Witness::Tau2),
            Quantity::EN | Quantity::RatioEN => Some(Witness::EN),
            Quantity::Lambda => None,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.trim().to_ascii_lowercase().chars().filter(|c| *c != '_' && *c != '-').collect();
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str().replace('_', "") == key)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown quantity '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSpec {
    MaxOverPeriod,
    /// `t = f·T`.
    FixedFractionOfPeriod(f64),
    /// Fixed `εt`.
    FixedTime(f64),
}

impl TimeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TimeSpec::MaxOverPeriod => Ok(()),
            TimeSpec::FixedFractionOfPeriod(f) if f > 0.0 && f.is_finite() => Ok(()),
            TimeSpec::FixedTime(t) if t >= 0.0 && t.is_finite() => Ok(()),
            other => Err(Error::InvalidConfig(format!("invalid time specification {other}"))),
        }
    }
}

impl fmt::Display for TimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeSpec::MaxOverPeriod => f.write_str("max_over_period"),
            TimeSpec::FixedFractionOfPeriod(x) => write!(f, "fraction:{x}"),
            TimeSpec::FixedTime(x) => write!(f, "time:{x}"),
        }
    }
}

impl FromStr for TimeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::InvalidConfig(format!("bad number in time spec '{s}'")));
        let spec = match s.split_once(':') {
            None if s == "max_over_period" || s == "max" => TimeSpec::MaxOverPeriod,
            Some(("fraction", v)) => TimeSpec::FixedFractionOfPeriod(num(v)?),
            Some(("time", v)) => TimeSpec::FixedTime(num(v)?),
            _ => return Err(Error::InvalidConfig(format!("unknown time spec '{s}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidConfig(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kappa: Grid,
    pub gamma: Grid,
    pub model: Model,
    pub quantity: Quantity,
    pub time: TimeSpec,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kappa: Grid::default(),
            gamma: Grid::default(),
            model: Model::Full,
            quantity: Quantity::Tau,
            time: TimeSpec::MaxOverPeriod,
            output_path: None,
            format: Format::Csv,
            seed: 0,
            threads: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::InvalidConfig(format!("bad value '{v}' for {key}")))
}

impl SweepConfig {
    /// Set one field from its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "kappa_min" => self.kappa.min = parse(key, value)?,
            "kappa_max" => self.kappa.max = parse(key, value)?,
            "kappa_n" => self.kappa.n = parse(key, value)?,
            "gamma_min" => self.gamma.min = parse(key, value)?,
            "gamma_max" => self.gamma.max = parse(key, value)?,
            "gamma_n" => self.gamma.n = parse(key, value)?,
            "grid_n" => {
                let n = parse(key, value)?;
                self.kappa.n = n;
                self.gamma.n = n;
            }
            "model" => self.model = value.parse()?,
            "quantity" => self.quantity = value.parse()?,
            "time_spec" => self.time = value.parse()?,
            "time_frac" => self.time = TimeSpec::FixedFractionOfPeriod(parse(key, value)?),
            "eps_t" => self.time = TimeSpec::FixedTime(parse(key, value)?),
            "output_path" => self.output_path = Some(PathBuf::from(value.trim())),
            "format" => self.format = value.parse()?,
            "seed" => self.seed = parse(key, value)?,
            "threads" => self.threads = Some(parse(key, value)?),
            other => return Err(Error::InvalidConfig(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Apply a flat `key = value` file; `#` starts a comment.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key=value", no + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.kappa.validate("kappa")?;
        self.gamma.validate("gamma")?;
        self.time.validate()?;
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("threads must be positive".into()));
        }
        if matches!(self.quantity, Quantity::RatioEN | Quantity::RatioTau1) && self.model == Model::Full {
            return Err(Error::InvalidConfig("ratio quantities compare against a non-full model".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub gamma: f64,
    pub value: f64,
    pub flags: Flags,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

/// Value of a witness for one model at the configured time, plus flags.
fn witness_value(model: Model, params: &ModelParams, w: Witness, time: TimeSpec) -> Result<(f64, Flags)> {
    let t = match time {
        TimeSpec::MaxOverPeriod => {
            return Ok(match max_over_period(model, params, w)? {
                Some((v, _)) => (v, depth_flags(w, v)),
                None => (f64::NAN, Flag::ComplexSymplectic.into()),
            });
        }
        TimeSpec::FixedFractionOfPeriod(f) => f * period(params)?,
        TimeSpec::FixedTime(t) => t,
    };
    let r = WitnessReport::from_coeffs(&coeffs(model, params, t)?)?;
    let v = r.get(w).unwrap_or(f64::NAN);
    let mut flags = depth_flags(w, v);
    if r.flags.contains(Flag::ComplexSymplectic) && w == Witness::EN {
        flags.insert(Flag::ComplexSymplectic);
    }
    Ok((v, flags))
}

fn depth_flags(w: Witness, v: f64) -> Flags {
    match w {
        Witness::EN => Flags::default(),
        _ => Flags::for_depth(v),
    }
}

/// `numerator / denominator` with `0/0 → 1` and `x/0 → −1` (flagged).
pub fn ratio(numerator: f64, denominator: f64) -> (f64, Flags) {
    if denominator == 0.0 {
        if numerator == 0.0 {
            (1.0, Flags::default())
        } else {
            (-1.0, Flag::UndefinedRatio.into())
        }
    } else {
        (numerator / denominator, Flags::default())
    }
}

fn regime_flags(e: &Error) -> Flags {
    match e {
        Error::EpDegenerate { .. } => Flag::Divergent.into(),
        Error::NotOscillatory { .. } => Flag::NotOscillatory.into(),
        _ => Flag::ComplexSymplectic.into(),
    }
}

/// Evaluate one grid cell. Regime problems become flagged `NaN` values.
pub fn evaluate_cell(cfg: &SweepConfig, kappa: f64, gamma: f64) -> Result<SweepRow> {
    let params = ModelParams::dimensionless(kappa, gamma)?;
    let regime = params.regime(DEFAULT_EP_TOL);
    let outcome: Result<(f64, Flags)> = match cfg.quantity {
        Quantity::Lambda => sink_diagnostics(&params, DEFAULT_EP_TOL).map(|d| {
            let f = if d.lambda.abs() > LAMBDA_DIVERGENCE { Flag::Divergent.into() } else { Flags::default() };
            (d.lambda, f)
        }),
        Quantity::RatioEN | Quantity::RatioTau1 => {
            let w = cfg.quantity.witness().expect("ratio of a witness");
            witness_value(Model::Full, &params, w, cfg.time).and_then(|(num, fa)| {
                let (den, fb) = witness_value(cfg.model, &params, w, cfg.time)?;
                if !(num.is_finite() && den.is_finite()) {
                    return Ok((f64::NAN, fa.union(fb)));
                }
                let (v, fr) = ratio(num, den);
                Ok((v, fr.union(fb.union(fa))))
            })
        }
        q => witness_value(cfg.model, &params, q.witness().expect("witness quantity"), cfg.time),
    };
    let (value, flags) = match outcome {
        Ok(x) => x,
        Err(e) if e.is_regime_error() => (f64::NAN, regime_flags(&e)),
        Err(e) => return Err(e),
    };
    Ok(SweepRow { kappa, gamma, value, flags, regime })
}

/// Evaluate the whole grid (γ outer, κ inner, ascending). Nothing is
/// returned unless every cell succeeded.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let cells: Vec<(f64, f64)> = cfg
        .gamma
        .values()
        .flat_map(|g| cfg.kappa.values().map(move |k| (k, g)))
        .collect();
    let eval = || cells.par_iter().map(|&(k, g)| evaluate_cell(cfg, k, g)).collect::<Result<Vec<_>>>();
    let rows = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(eval)?,
        None => eval()?,
    };
    Ok(SweepResult { config: cfg.clone(), rows })
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    model: &'a str,
    quantity: &'a str,
    time_spec: String,
    kappa_grid: [f64; 2],
    gamma_grid: [f64; 2],
    kappa_n: usize,
    gamma_n: usize,
    tool_version: &'a str,
    seed: u64,
}

#[derive(Serialize)]
struct JsonSweepRow {
    kappa_over_eps: f64,
    gamma_over_eps: f64,
    value: Option<f64>,
    flags: String,
    regime: &'static str,
}

#[derive(Serialize)]
struct JsonDoc<M, R> {
    metadata: M,
    rows: Vec<R>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(SWEEP_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_num(r.kappa),
                fmt_num(r.gamma),
                fmt_num(r.value),
                r.flags,
                r.regime
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let c = &self.config;
        let doc = JsonDoc {
            metadata: JsonMeta {
                model: c.model.as_str(),
                quantity: c.quantity.as_str(),
                time_spec: c.time.to_string(),
                kappa_grid: [c.kappa.min, c.kappa.max],
                gamma_grid: [c.gamma.min, c.gamma.max],
                kappa_n: c.kappa.n,
                gamma_n: c.gamma.n,
                tool_version: env!("CARGO_PKG_VERSION"),
                seed: c.seed,
            },
            rows: self
                .rows
                .iter()
                .map(|r| JsonSweepRow {
                    kappa_over_eps: r.kappa,
                    gamma_over_eps: r.gamma,
                    value: finite(r.value),
                    flags: r.flags.to_string(),
                    regime: r.regime.as_str(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// One time sample of a single-point evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveRow {
    pub eps_t: f64,
    pub coeffs: GaussianCoeffs,
    pub report: WitnessReport,
}

/// Coefficients and witnesses at `steps` evenly spaced times in `[0, t_max]`.
pub fn evolve(params: &ModelParams, model: Model, t_max: f64, steps: usize) -> Result<Vec<EvolveRow>> {
    if steps < 2 {
        return Err(Error::InvalidConfig("steps must be at least 2".into()));
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidConfig("t_max must be finite and nonnegative".into()));
    }
    (0..steps)
        .map(|i| {
            let t = t_max * i as f64 / (steps - 1) as f64;
            let c = coeffs(model, params, t)?;
            Ok(EvolveRow { eps_t: t * params.epsilon(), coeffs: c, report: WitnessReport::from_coeffs(&c)? })
        })
        .collect()
}

#[derive(Serialize)]
struct JsonEvolveRow {
    eps_t: f64,
    #[serde(rename = "B1")]
    b1: f64,
    #[serde(rename = "B2")]
    b2: f64,
    #[serde(rename = "ReC1")]
    re_c1: f64,
    #[serde(rename = "ImC1")]
    im_c1: f64,
    #[serde(rename = "ReD")]
    re_d: f64,
    #[serde(rename = "ImD")]
    im_d: f64,
    #[serde(rename = "ReDbar")]
    re_dbar: f64,
    #[serde(rename = "ImDbar")]
    im_dbar: f64,
    tau: f64,
    tau1: f64,
    tau2: f64,
    #[serde(rename = "EN")]
    en: Option<f64>,
    flags: String,
}

#[derive(Serialize)]
struct JsonEvolveMeta<'a> {
    model: &'a str,
    kappa_over_eps: f64,
    gamma_over_eps: f64,
    tool_version: &'a str,
}

pub fn evolve_csv(rows: &[EvolveRow]) -> String {
    let mut out = String::from(EVOLVE_HEADER);
    out.push('\n');
    for r in rows {
        let c = &r.coeffs;
        let nums = [
            r.eps_t, c.b1, c.b2, c.c1.re, c.c1.im, c.d.re, c.d.im, c.d_bar.re, c.d_bar.im, r.report.tau,
            r.report.tau1, r.report.tau2, r.report.en,
        ];
        let fields: Vec<String> = nums.iter().map(|x| fmt_num(*x)).collect();
        out.push_str(&fields.join(","));
        out.push(',');
        out.push_str(&r.report.flags.to_string());
        out.push('\n');
    }
    out
}

pub fn evolve_json(rows: &[EvolveRow], params: &ModelParams, model: Model) -> String {
    let doc = JsonDoc {
        metadata: JsonEvolveMeta {
            model: model.as_str(),
            kappa_over_eps: params.kappa() / params.epsilon(),
            gamma_over_eps: params.gamma() / params.epsilon(),
            tool_version: env!("CARGO_PKG_VERSION"),
        },
        rows: rows
            .iter()
            .map(|r| JsonEvolveRow {
                eps_t: r.eps_t,
                b1: r.coeffs.b1,
                b2: r.coeffs.b2,
                re_c1: r.coeffs.c1.re,
                im_c1: r.coeffs.c1.im,
                re_d: r.coeffs.d.re,
                im_d: r.coeffs.d.im,
                re_dbar: r.coeffs.d_bar.re,
                im_dbar: r.coeffs.d_bar.im,
                tau: r.report.tau,
                tau1: r.report.tau1,
                tau2: r.report.tau2,
                en: finite(r.report.en),
                flags: r.report.flags.to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(quantity: Quantity, model: Model, time: TimeSpec) -> SweepConfig {
        SweepConfig {
            kappa: Grid { min: 0.0, max: 1.0, n: 11 },
            gamma: Grid { min: 0.0, max: 1.0, n: 11 },
            model,
            quantity,
            time,
            ..Default::default()
        }
    }

    #[test]
    fn grid_and_ordering() {
        let r = run_sweep(&small(Quantity::Lambda, Model::Sink, TimeSpec::MaxOverPeriod)).unwrap();
        assert_eq!(r.rows.len(), 121);
        assert_eq!((r.rows[1].kappa, r.rows[1].gamma), (0.1, 0.0));
        assert_eq!((r.rows[11].kappa, r.rows[11].gamma), (0.0, 0.1));
    }

    #[test]
    fn lambda_sweep() {
        let r = run_sweep(&small(Quantity::Lambda, Model::Sink, TimeSpec::MaxOverPeriod)).unwrap();
        for row in &r.rows {
            match row.regime {
                Regime::Oscillatory => {
                    assert!(row.value <= 0.0);
                    if row.gamma == 0.0 {
                        assert_eq!(row.value, 0.0);
                    }
                }
                Regime::ExceptionalPoint => assert!(row.flags.contains(Flag::Divergent)),
                Regime::Exponential => assert!(row.flags.contains(Flag::NotOscillatory)),
            }
        }
        // (0.6, 0.8) sits on the exceptional point
        let ep = r.rows.iter().find(|x| x.kappa == 0.6 && x.gamma == 0.8).unwrap();
        assert_eq!(ep.regime, Regime::ExceptionalPoint);
    }

    #[test]
    fn ratio_rules() {
        assert_eq!(ratio(0.0, 0.0), (1.0, Flags::default()));
        let (v, f) = ratio(0.3, 0.0);
        assert_eq!(v, -1.0);
        assert!(f.contains(Flag::UndefinedRatio));
        assert_eq!(ratio(1.0, 2.0).0, 0.5);
    }

    #[test]
    fn ratio_is_one_without_damping() {
        let cfg = small(Quantity::RatioEN, Model::Sink, TimeSpec::FixedFractionOfPeriod(1e-3));
        let r = run_sweep(&cfg).unwrap();
        for row in r.rows.iter().filter(|x| x.gamma == 0.0 && x.regime == Regime::Oscillatory) {
            assert!((row.value - 1.0).abs() < 1e-12, "{row:?}");
        }
    }

    #[test]
    fn deterministic_under_threads() {
        let mut cfg = small(Quantity::EN, Model::Full, TimeSpec::FixedTime(2.0));
        cfg.threads = Some(1);
        let a = run_sweep(&cfg).unwrap().to_csv();
        cfg.threads = Some(4);
        let b = run_sweep(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with(SWEEP_HEADER));
    }

    #[test]
    fn json_has_metadata_and_nulls() {
        let r = run_sweep(&small(Quantity::Lambda, Model::Sink, TimeSpec::MaxOverPeriod)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["metadata"]["quantity"], "lambda");
        assert_eq!(v["rows"].as_array().unwrap().len(), 121);
        assert!(v["rows"].as_array().unwrap().iter().any(|x| x["value"].is_null()));
    }

    #[test]
    fn config_parsing() {
        let mut cfg = SweepConfig::default();
        cfg.apply_kv("# comment\nkappa_n = 5\ngamma_max=0.5\nmodel=sink\nquantity=RatioTau1\ntime_spec=fraction:0.01\n")
            .unwrap();
        assert_eq!(cfg.kappa.n, 5);
        assert_eq!(cfg.gamma.max, 0.5);
        assert_eq!(cfg.model, Model::Sink);
        assert_eq!(cfg.quantity, Quantity::RatioTau1);
        assert_eq!(cfg.time, TimeSpec::FixedFractionOfPeriod(0.01));
        assert!(cfg.validate().is_ok());

        assert!(cfg.clone().apply_kv("bogus=1").is_err());
        assert!(cfg.clone().apply_kv("kappa_n").is_err());
        let mut bad = cfg.clone();
        bad.set("kappa_max", "3").unwrap();
        assert!(bad.validate().is_err());
        let mut bad = cfg.clone();
        bad.set("grid_n", "1").unwrap();
        assert!(bad.validate().is_err());
        assert!("fraction:-1".parse::<TimeSpec>().is_err());
        for q in Quantity::ALL {
            assert_eq!(q.as_str().parse::<Quantity>().unwrap(), q);
        }
    }

    #[test]
    fn evolve_rows() {
        let rows = evolve(&ModelParams::dimensionless(0.0, 0.0).unwrap(), Model::Full, 10.0, 11).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.report.tau == 0.0 && r.report.en == 0.0));
        let csv = evolve_csv(&rows);
        assert_eq!(csv.lines().count(), 12);
        assert!(csv.starts_with(EVOLVE_HEADER));
        assert!(evolve(&ModelParams::dimensionless(0.6, 0.9).unwrap(), Model::Sink, 1.0, 3).unwrap_err().is_regime_error());
    }
}
