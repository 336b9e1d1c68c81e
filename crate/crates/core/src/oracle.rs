//! Brute-force reference computations and the randomized agreement suite
//! behind `ptgauss verify`. Nothing here is used on the fast path.

use crate::coeffs::{coeffs_closed_form, coeffs_general, ClosedForm, GaussianCoeffs};
use crate::dynamics::{
    commutator_defect, ff_from_l0, full_reservoir_matrix, max_abs, noise_moments_full, propagator,
    tailor_reservoir, ReservoirModel, ReservoirSpec,
};
use crate::error::{Error, Result};
use crate::model::{build_system, dynamical_matrix, re, CMatrix4, ModelParams, C64, DEFAULT_EP_TOL, I};
use crate::witnesses::{depth_matrix, negativity, nonclassicality_depth, symplectic_spectrum};
use nalgebra::{Cholesky, SMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub propagator: f64,
    pub noise_ode: f64,
    pub noise_engines: f64,
    pub coeff_paths: f64,
    pub depth: f64,
    pub commutator: f64,
    pub sink: f64,
    pub symplectic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            propagator: 1e-9,
            noise_ode: 1e-7,
            noise_engines: 1e-10,
            coeff_paths: 1e-9,
            depth: 1e-7,
            commutator: 1e-8,
            sink: 1e-12,
            symplectic: 1e-8,
        }
    }
}

impl Tolerances {
    /// Every tolerance set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        Self {
            propagator: tol,
            noise_ode: tol,
            noise_engines: tol,
            coeff_paths: tol,
            depth: tol,
            commutator: tol,
            sink: tol,
            symplectic: tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Taylor order of the matrix exponential core.
    pub expm_terms: usize,
    /// RK4 steps for the moment ODE, never fewer than 1000 per period.
    pub ode_steps: usize,
    pub s_scan_bounds: (f64, f64),
    pub s_scan_tol: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    /// Random points per check.
    pub samples: usize,
    /// Random points for the (slower) moment-ODE check.
    pub ode_samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            expm_terms: 20,
            ode_steps: 20_000,
            s_scan_bounds: (-3.0, 1.0),
            s_scan_tol: 1e-10,
            tolerances: Tolerances::default(),
            seed: DEFAULT_SEED,
            samples: 200,
            ode_samples: 40,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ode_steps < 1000 {
            return Err(Error::InvalidConfig("ode_steps must be at least 1000".into()));
        }
        if self.expm_terms == 0 || self.samples == 0 {
            return Err(Error::InvalidConfig("expm_terms and samples must be positive".into()));
        }
        let t = &self.tolerances;
        let all = [
            t.propagator,
            t.noise_ode,
            t.noise_engines,
            t.coeff_paths,
            t.depth,
            t.commutator,
            t.sink,
            t.symplectic,
        ];
        if all.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        let (lo, hi) = self.s_scan_bounds;
        if !(lo < hi) {
            return Err(Error::InvalidConfig("s-scan bounds must satisfy lo < hi".into()));
        }
        Ok(())
    }
}

fn norm_inf(m: &CMatrix4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation relative to `max(1, ‖reference‖)`.
pub fn scaled_deviation(a: &CMatrix4, reference: &CMatrix4) -> f64 {
    norm_inf(&(a - reference)) / norm_inf(reference).max(1.0)
}

/// `exp(G t)` by scaling and squaring around a truncated Taylor series.
pub fn expm_oracle(g: &CMatrix4, t: f64, terms: usize) -> CMatrix4 {
    let a = g * re(t);
    let norm = a.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = a * re(0.5f64.powi(squarings));

    let mut result = CMatrix4::identity();
    let mut term = CMatrix4::identity();
    for n in 1..=terms {
        term = term * a * re(1.0 / n as f64);
        result += term;
    }
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

/// Equal-time noise moments from RK4 integration of
/// `dΣ/dt = GΣ + ΣG† + L⁰`, `Σ(0) = 0`.
pub fn moment_ode_oracle(g: &CMatrix4, l0: &CMatrix4, t: f64, steps: usize) -> CMatrix4 {
    let gh = g.adjoint();
    let rhs = |s: &CMatrix4| g * s + s * gh + l0;
    let h = t / steps as f64;
    let hc = re(h);
    let mut s = CMatrix4::zeros();
    for _ in 0..steps {
        let k1 = rhs(&s);
        let k2 = rhs(&(s + k1 * (hc * 0.5)));
        let k3 = rhs(&(s + k2 * (hc * 0.5)));
        let k4 = rhs(&(s + k3 * hc));
        s += (k1 + (k2 + k3) * re(2.0) + k4) * (hc / 6.0);
    }
    s
}

/// Nonclassicality depth by bisection on the ordering parameter `s`: the
/// `s`-ordered quasi-distribution is a regular function as long as the
/// depth matrix shifted by `−(1 − s)/2` is negative definite.
pub fn s_scan_depth_oracle(c: &GaussianCoeffs, bounds: (f64, f64), tol: f64) -> f64 {
    let k = depth_matrix(c);
    let classical = |s: f64| {
        let shifted = -(k - CMatrix4::identity() * re((1.0 - s) / 2.0));
        Cholesky::new(real_embedding(&shifted)).is_some()
    };
    let (mut lo, mut hi) = bounds;
    if classical(hi) {
        return (1.0 - hi).max(0.0) / 2.0;
    }
    if !classical(lo) {
        return (1.0 - lo) / 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if classical(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (1.0 - 0.5 * (lo + hi)) / 2.0
}

/// `A + iB ↦ [[A, −B], [B, A]]`; positive definite iff the Hermitian input is.
fn real_embedding(h: &CMatrix4) -> SMatrix<f64, 8, 8> {
    SMatrix::<f64, 8, 8>::from_fn(|r, c| {
        let z = h[(r % 4, c % 4)];
        match (r < 4, c < 4) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<6} {:<28} samples={:<4} max_dev={:.3e} tol={:.1e}",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.samples,
                c.max_deviation,
                c.tolerance
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Random parameters in `[0, 1.5]²` away from the exceptional point.
fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let k = rng.gen_range(0.0..1.5);
        let g = rng.gen_range(0.0..1.5);
        let p = ModelParams::new(1.0, k, g).expect("finite nonnegative rates");
        if p.mu_sq().abs() > 1e-6 && (1.0 - k).abs() > 1e-6 {
            return p;
        }
    }
}

/// Parameters with `|μ| < 10⁻³`, on either side of the exceptional point.
fn near_ep_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let k: f64 = rng.gen_range(0.0..0.95);
    let mu_sq = rng.gen_range(-1e-6..1e-6);
    let g = (1.0 - k * k - mu_sq).sqrt();
    ModelParams::new(1.0, k, g).expect("finite nonnegative rates")
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> GaussianCoeffs {
    let mut z = || C64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
    let (c1, c2, d, d_bar) = (z(), z(), z(), z());
    GaussianCoeffs { b1: rng.gen_range(0.0..1.5), b2: rng.gen_range(0.0..1.5), c1, c2, d, d_bar }
}

fn check<F>(name: &'static str, samples: usize, tolerance: f64, mut f: F) -> Result<CheckResult>
where
    F: FnMut() -> Result<f64>,
{
    let mut max_deviation = 0.0f64;
    for _ in 0..samples {
        let d = f()?;
        max_deviation = if d.is_nan() { f64::INFINITY } else { max_deviation.max(d) };
    }
    Ok(CheckResult { name, samples, max_deviation, tolerance })
}

/// Run every randomized agreement check. Deterministic for a fixed config.
pub fn run_verification(cfg: &OracleConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let tol = &cfg.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    checks.push(check("propagator_vs_expm", cfg.samples, tol.propagator, || {
        let p = random_params(&mut rng);
        let t = rng.gen_range(0.0..20.0);
        let g = dynamical_matrix(&p) * (-I);
        let reference = expm_oracle(&g, t, cfg.expm_terms);
        Ok(scaled_deviation(&propagator(&p, t).full_matrix(), &reference))
    })?);

    let mut i = 0usize;
    checks.push(check("noise_vs_moment_ode", cfg.ode_samples, tol.noise_ode, || {
        i += 1;
        let p = if i % 4 == 0 { near_ep_params(&mut rng) } else { random_params(&mut rng) };
        let t = rng.gen_range(0.0..20.0);
        let g = dynamical_matrix(&p) * (-I);
        let reference = moment_ode_oracle(&g, &full_reservoir_matrix(&p), t, cfg.ode_steps);
        Ok(scaled_deviation(&noise_moments_full(&p, t).ff, &reference))
    })?);

    checks.push(check("noise_eigenbasis_vs_closed", cfg.samples, tol.noise_engines, || {
        let p = random_params(&mut rng);
        let t = rng.gen_range(0.0..20.0);
        let sys = build_system(&p, DEFAULT_EP_TOL)?;
        let a = ff_from_l0(&sys, &full_reservoir_matrix(&p), t).ff;
        Ok(scaled_deviation(&a, &noise_moments_full(&p, t).ff))
    })?);

    checks.push(check("coeffs_general_vs_closed", cfg.samples, tol.coeff_paths, || {
        let p = random_params(&mut rng);
        let t = rng.gen_range(0.0..20.0);
        let spec = ReservoirSpec::new(ReservoirModel::FullPhysical, &p, DEFAULT_EP_TOL)?;
        let a = coeffs_general(&spec, &p, t)?;
        let b = coeffs_closed_form(ClosedForm::FullPhysical, &p, t)?;
        Ok(a.max_abs_diff(&b) / b.max_abs().max(1.0))
    })?);

    checks.push(check("depth_vs_s_scan", cfg.samples, tol.depth, || {
        let c = random_coeffs(&mut rng);
        let tau = nonclassicality_depth(&c)?.tau;
        Ok((tau - s_scan_depth_oracle(&c, cfg.s_scan_bounds, cfg.s_scan_tol)).abs())
    })?);

    checks.push(check("commutators_full_and_sink", cfg.samples, tol.commutator, || {
        let p = loop {
            let p = random_params(&mut rng);
            if p.mu_sq() > 1e-2 {
                break p;
            }
        };
        let t = rng.gen_range(0.0..20.0);
        let pr = propagator(&p, t);
        let sys = build_system(&p, DEFAULT_EP_TOL)?;
        let sink = tailor_reservoir(&p, DEFAULT_EP_TOL)?.sink;
        let full = max_abs(&commutator_defect(&pr, &noise_moments_full(&p, t)));
        let sunk = max_abs(&commutator_defect(&pr, &ff_from_l0(&sys, &sink, t)));
        Ok(full.max(sunk))
    })?);

    checks.push(check("sink_decomposition", cfg.samples, tol.sink, || {
        let p = loop {
            let p = random_params(&mut rng);
            if p.mu_sq() > 1e-2 {
                break p;
            }
        };
        let tr = tailor_reservoir(&p, DEFAULT_EP_TOL)?;
        Ok(norm_inf(&(full_reservoir_matrix(&p) - tr.secular - tr.sink)))
    })?);

    checks.push(check("symplectic_invariants", cfg.samples, tol.symplectic, || {
        let p = loop {
            let p = random_params(&mut rng);
            if p.mu_sq() > 1e-2 {
                break p;
            }
        };
        let t = rng.gen_range(0.0..20.0);
        let c = coeffs_closed_form(ClosedForm::FullPhysical, &p, t)?;
        let (_, cov) = negativity(&c)?;
        let direct = symplectic_spectrum(&cov.sigma).map_or(f64::NAN, |s| s[0]);
        Ok((direct - cov.nu_minus_symp).abs() / cov.nu_minus_symp.max(1.0))
    })?);

    Ok(VerificationReport { seed: cfg.seed, checks })
}
