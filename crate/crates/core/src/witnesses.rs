//! Nonclassicality depth, logarithmic negativity and their extrema over one
//! period of the coherent dynamics.

use crate::coeffs::{coeffs, GaussianCoeffs, Model};
use crate::error::{Error, Result};
use crate::hermitian::{hermitian_eigenvalues, hermitian_eigenvalues4, hermiticity_residual};
use crate::model::{CMatrix4, ModelParams, Regime, C64, DEFAULT_EP_TOL};
use nalgebra::{Matrix2, Matrix4};
use std::fmt;
use std::str::FromStr;

pub const HERMITICITY_TOL: f64 = 1e-10;

/// Absolute floor for a negative symplectic discriminant still treated as 0.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// Uniform samples per window before refinement.
pub const PERIOD_SAMPLES: usize = 512;

/// Refinement stops once the bracket is this fraction of the window.
pub const REFINE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// `τ > 1/2`: beyond what any Gaussian state reaches.
    ExceedsGaussianBound,
    /// `τ > 1`.
    Nonphysical,
    ComplexSymplectic,
    UndefinedRatio,
    Divergent,
    NotOscillatory,
}

impl Flag {
    const ALL: [Flag; 6] = [
        Flag::ExceedsGaussianBound,
        Flag::Nonphysical,
        Flag::ComplexSymplectic,
        Flag::UndefinedRatio,
        Flag::Divergent,
        Flag::NotOscillatory,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::ExceedsGaussianBound => "exceeds_gaussian_bound",
            Flag::Nonphysical => "nonphysical",
            Flag::ComplexSymplectic => "complex_symplectic",
            Flag::UndefinedRatio => "undefined_ratio",
            Flag::Divergent => "divergent",
            Flag::NotOscillatory => "not_oscillatory",
        }
    }

    fn bit(self) -> u8 {
        1 << Flag::ALL.iter().position(|f| *f == self).unwrap_or(0)
    }
}

/// Small set of [`Flag`]s, displayed as a `;`-separated list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Flags(u8);

impl Flags {
    pub fn insert(&mut self, f: Flag) {
        self.0 |= f.bit();
    }

    pub fn contains(&self, f: Flag) -> bool {
        self.0 & f.bit() != 0
    }

    pub fn union(self, other: Flags) -> Flags {
        Flags(self.0 | other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Flag> + '_ {
        Flag::ALL.into_iter().filter(|f| self.contains(*f))
    }

    /// Depth flags for a value of `τ`.
    pub fn for_depth(tau: f64) -> Flags {
        let mut f = Flags::default();
        if tau > 0.5 {
            f.insert(Flag::ExceedsGaussianBound);
        }
        if tau > 1.0 {
            f.insert(Flag::Nonphysical);
        }
        f
    }
}

impl From<Flag> for Flags {
    fn from(f: Flag) -> Self {
        let mut s = Flags::default();
        s.insert(f);
        s
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(|x| x.as_str()).collect();
        f.write_str(&names.join(";"))
    }
}

/// Hermitian matrix whose largest eigenvalue is the nonclassicality depth.
///
/// Rows and columns are ordered `(β₁, β₁*, β₂, β₂*)`.
pub fn depth_matrix(c: &GaussianCoeffs) -> CMatrix4 {
    let b1 = C64::new(-c.b1, 0.0);
    let b2 = C64::new(-c.b2, 0.0);
    Matrix4::new(
        b1, c.c1.conj(), c.d_bar.conj(), c.d, //
        c.c1, b1, c.d.conj(), c.d_bar, //
        c.d_bar, c.d, b2, c.c2.conj(), //
        c.d.conj(), c.d_bar.conj(), c.c2, b2,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Depths {
    pub tau: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub flags: Flags,
}

pub fn nonclassicality_depth(c: &GaussianCoeffs) -> Result<Depths> {
    let k = depth_matrix(c);
    if !c.is_finite() {
        return Err(Error::NonHermitianInput { residual: f64::NAN });
    }
    let residual = hermiticity_residual(&k);
    let scale = c.max_abs().max(1.0);
    if !(residual <= HERMITICITY_TOL * scale) {
        return Err(Error::NonHermitianInput { residual });
    }
    let tau = hermitian_eigenvalues4(&k)[3].max(0.0);
    let tau1 = (c.c1.norm() - c.b1).max(0.0);
    let tau2 = (c.c2.norm() - c.b2).max(0.0);
    Ok(Depths { tau, tau1, tau2, flags: Flags::for_depth(tau) })
}

/// Partially transposed covariance matrix in `(q₁, p₁, q₂, p₂)` quadratures,
/// `q = a + a†`, `p = −i(a − a†)`, with vacuum normalized to the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariancePT {
    pub sigma: Matrix4<f64>,
    /// `det σᴾᵀ`
    pub big_delta: f64,
    /// `det σ₁ + det σ₂ᴾᵀ + 2 det σ₁₂ᴾᵀ`
    pub small_delta: f64,
    /// Smaller symplectic eigenvalue of `σᴾᵀ`.
    pub nu_minus_symp: f64,
}

impl CovariancePT {
    pub fn from_coeffs(c: &GaussianCoeffs) -> Self {
        let s1 = Matrix2::new(
            1.0 + 2.0 * c.b1 + 2.0 * c.c1.re,
            2.0 * c.c1.im,
            2.0 * c.c1.im,
            1.0 + 2.0 * c.b1 - 2.0 * c.c1.re,
        );
        let s2 = Matrix2::new(
            1.0 + 2.0 * c.b2 + 2.0 * c.c2.re,
            -2.0 * c.c2.im,
            -2.0 * c.c2.im,
            1.0 + 2.0 * c.b2 - 2.0 * c.c2.re,
        );
        let (sum, diff) = (c.d + c.d_bar, c.d - c.d_bar);
        let s12 = Matrix2::new(diff.re, -diff.im, sum.im, sum.re) * 2.0;

        let mut sigma = Matrix4::zeros();
        sigma.fixed_view_mut::<2, 2>(0, 0).copy_from(&s1);
        sigma.fixed_view_mut::<2, 2>(2, 2).copy_from(&s2);
        sigma.fixed_view_mut::<2, 2>(0, 2).copy_from(&s12);
        sigma.fixed_view_mut::<2, 2>(2, 0).copy_from(&s12.transpose());

        Self {
            sigma,
            big_delta: sigma.determinant(),
            small_delta: s1.determinant() + s2.determinant() + 2.0 * s12.determinant(),
            nu_minus_symp: f64::NAN,
        }
    }

    pub fn symmetry_residual(&self) -> f64 {
        (self.sigma - self.sigma.transpose()).amax()
    }
}

/// Logarithmic negativity (natural log) and the covariance data behind it.
pub fn negativity(c: &GaussianCoeffs) -> Result<(f64, CovariancePT)> {
    let mut cov = CovariancePT::from_coeffs(c);
    let (delta, big) = (cov.small_delta, cov.big_delta);
    let disc = delta * delta / 4.0 - big;
    if disc < -DISCRIMINANT_TOL * (delta * delta / 4.0).max(1.0) {
        return Err(Error::ComplexSymplecticEigenvalue { discriminant: disc });
    }
    let root = disc.max(0.0).sqrt();
    let nu_plus_sq = delta / 2.0 + root;
    // ν₋² ν₊² = Δ avoids cancellation when ν₊ ≫ ν₋.
    let nu_minus_sq = if nu_plus_sq > 0.0 { big / nu_plus_sq } else { delta / 2.0 - root };
    if !(nu_minus_sq >= 0.0) {
        return Err(Error::NegativeSymplecticSquare { value: nu_minus_sq });
    }
    cov.nu_minus_symp = nu_minus_sq.sqrt();
    let en = if cov.nu_minus_symp >= 1.0 { 0.0 } else { -cov.nu_minus_symp.ln() };
    Ok((en, cov))
}

/// Symplectic eigenvalues (ascending) of a positive definite covariance
/// matrix, from the spectrum of `σ^{1/2} iΩ σ^{1/2}`.
///
/// Returns `None` when `σ` is not positive definite.
pub fn symplectic_spectrum(sigma: &Matrix4<f64>) -> Option<[f64; 2]> {
    let eig = nalgebra::SymmetricEigen::new(*sigma);
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return None;
    }
    let root = &eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let mut omega = Matrix4::<f64>::zeros();
    for j in 0..2 {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    let h = root.map(|x| C64::new(x, 0.0)) * omega.map(|x| C64::new(0.0, x)) * root.map(|x| C64::new(x, 0.0));
    let arr: [[C64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| h[(r, c)]));
    let ev = hermitian_eigenvalues(&arr);
    // eigenvalues come in ± pairs
    Some([ev[2], ev[3]])
}

/// All witnesses of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub tau: f64,
    pub tau1: f64,
    pub tau2: f64,
    /// `NaN` when the coefficients do not describe a covariance matrix with
    /// real symplectic eigenvalues.
    pub en: f64,
    pub flags: Flags,
}

impl WitnessReport {
    pub fn from_coeffs(c: &GaussianCoeffs) -> Result<Self> {
        let d = nonclassicality_depth(c)?;
        let mut flags = d.flags;
        let en = match negativity(c) {
            Ok((en, _)) => en,
            Err(Error::ComplexSymplecticEigenvalue { .. } | Error::NegativeSymplecticSquare { .. }) => {
                flags.insert(Flag::ComplexSymplectic);
                f64::NAN
            }
            Err(e) => return Err(e),
        };
        Ok(Self { tau: d.tau, tau1: d.tau1, tau2: d.tau2, en, flags })
    }

    pub fn get(&self, q: Witness) -> Option<f64> {
        let v = match q {
            Witness::Tau => self.tau,
            Witness::Tau1 => self.tau1,
            Witness::Tau2 => self.tau2,
            Witness::EN => self.en,
        };
        v.is_finite().then_some(v)
    }
}

/// Witnesses of the state of `model` at time `t`.
pub fn witnesses(model: Model, params: &ModelParams, t: f64) -> Result<WitnessReport> {
    WitnessReport::from_coeffs(&coeffs(model, params, t)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    Tau,
    Tau1,
    Tau2,
    EN,
}

impl Witness {
    pub const ALL: [Witness; 4] = [Witness::Tau, Witness::Tau1, Witness::Tau2, Witness::EN];

    pub fn as_str(&self) -> &'static str {
        match self {
            Witness::Tau => "tau",
            Witness::Tau1 => "tau1",
            Witness::Tau2 => "tau2",
            Witness::EN => "en",
        }
    }
}

impl FromStr for Witness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Witness::ALL
            .into_iter()
            .find(|w| w.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown witness '{s}'")))
    }
}

/// `T = 2π/μ`.
pub fn period(params: &ModelParams) -> Result<f64> {
    let mu_sq = params.mu_sq();
    match params.regime(DEFAULT_EP_TOL) {
        Regime::Oscillatory => Ok(2.0 * std::f64::consts::PI / mu_sq.sqrt()),
        Regime::ExceptionalPoint => Err(Error::EpDegenerate { mu_sq }),
        Regime::Exponential => Err(Error::NotOscillatory { mu_sq }),
    }
}

/// Maximum of `f` over `[t0, t1]`: uniform sampling followed by a
/// golden-section search around the best sample. Samples where `f` returns
/// `None` are skipped.
pub fn max_over_window<F>(f: F, t0: f64, t1: f64, samples: usize) -> Option<(f64, f64)>
where
    F: Fn(f64) -> Option<f64>,
{
    let n = samples.max(2);
    let h = (t1 - t0) / (n - 1) as f64;
    let (mut best_i, mut best) = (None, f64::NEG_INFINITY);
    for i in 0..n {
        if let Some(v) = f(t0 + h * i as f64) {
            if v > best {
                best = v;
                best_i = Some(i);
            }
        }
    }
    let i = best_i?;
    let mut best_t = t0 + h * i as f64;

    let eval = |t: f64| f(t).unwrap_or(f64::NEG_INFINITY);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = ((best_t - h).max(t0), (best_t + h).min(t1));
    let (mut x1, mut x2) = (b - phi * (b - a), a + phi * (b - a));
    let (mut f1, mut f2) = (eval(x1), eval(x2));
    let stop = REFINE_TOL * (t1 - t0).abs().max(f64::MIN_POSITIVE);
    while b - a > stop {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = eval(x2);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v > best {
            best = v;
            best_t = t;
        }
    }
    Some((best, best_t))
}

/// Maximum of a witness over the `k`-th period `[kT, (k+1)T]`.
///
/// Returns `Ok(None)` when no sample in the window yields a defined value.
pub fn max_over_period_k(
    model: Model,
    params: &ModelParams,
    quantity: Witness,
    k: u32,
) -> Result<Option<(f64, f64)>> {
    let tp = period(params)?;
    let t0 = k as f64 * tp;
    // Surface regime errors before sampling.
    coeffs(model, params, t0)?;
    let f = |t: f64| witnesses(model, params, t).ok().and_then(|r| r.get(quantity));
    Ok(max_over_window(f, t0, t0 + tp, PERIOD_SAMPLES))
}

/// Maximum of a witness over the first period, with the time it is reached.
pub fn max_over_period(model: Model, params: &ModelParams, quantity: Witness) -> Result<Option<(f64, f64)>> {
    max_over_period_k(model, params, quantity, 0)
}

/// Maxima of all four witnesses over one period from a single sampling pass
/// (no refinement); used by sweeps.
pub fn max_all_over_period(model: Model, params: &ModelParams, samples: usize) -> Result<[Option<f64>; 4]> {
    let tp = period(params)?;
    let mut best = [None::<f64>; 4];
    for i in 0..samples {
        let t = tp * i as f64 / (samples - 1) as f64;
        let Ok(r) = witnesses(model, params, t) else { continue };
        for (slot, w) in best.iter_mut().zip(Witness::ALL) {
            if let Some(v) = r.get(w) {
                *slot = Some(slot.map_or(v, |b: f64| b.max(v)));
            }
        }
    }
    Ok(best)
}
