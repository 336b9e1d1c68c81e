//! Coefficients of the Gaussian normal characteristic function
//!
//! `C_N(β₁, β₂) = exp{ −B₁|β₁|² − B₂|β₂|² + [C₁*β₁²/2 + C₂*β₂²/2 + D*β₁β₂ + D̄*β₁β₂* + c.c.] }`
//!
//! and the mean amplitudes of an initially coherent state.

use crate::dynamics::{self, propagator, ReservoirModel, ReservoirSpec};
use crate::error::{Error, Result};
use crate::kernels::TrigKernels;
use crate::model::{re, CMatrix4, ModelParams, Regime, C64, DEFAULT_EP_TOL, I};
use std::fmt;
use std::str::FromStr;

/// Absolute floor of the imaginary-residue check on `B₁`, `B₂`.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaussianCoeffs {
    pub b1: f64,
    pub b2: f64,
    pub c1: C64,
    pub c2: C64,
    pub d: C64,
    pub d_bar: C64,
}

impl GaussianCoeffs {
    pub fn is_finite(&self) -> bool {
        self.b1.is_finite()
            && self.b2.is_finite()
            && [self.c1, self.c2, self.d, self.d_bar].iter().all(|z| z.is_finite())
    }

    /// Largest absolute difference over all six coefficients.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.b1 - other.b1).abs(),
            (self.b2 - other.b2).abs(),
            (self.c1 - other.c1).norm(),
            (self.c2 - other.c2).norm(),
            (self.d - other.d).norm(),
            (self.d_bar - other.d_bar).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Self::default())
    }

    /// Add the same amount of thermal-like noise to both modes.
    pub fn with_added_noise(mut self, delta: f64) -> Self {
        self.b1 += delta;
        self.b2 += delta;
        self
    }
}

/// Reservoir model, including the long-time asymptote of the physical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Full,
    Sink,
    Semiclassical,
    Asymptotic,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Full, Model::Sink, Model::Semiclassical, Model::Asymptotic];

    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Full => "full",
            Model::Sink => "sink",
            Model::Semiclassical => "semiclassical",
            Model::Asymptotic => "asymptotic",
        }
    }

    /// Whether the model needs `μ² > 0`.
    pub fn requires_oscillatory(&self) -> bool {
        matches!(self, Model::Sink)
    }

    pub fn closed_form(&self) -> ClosedForm {
        match self {
            Model::Full => ClosedForm::FullPhysical,
            Model::Sink => ClosedForm::SinkPeriodic,
            Model::Semiclassical => ClosedForm::Semiclassical,
            Model::Asymptotic => ClosedForm::Asymptotic,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown model '{s}'")))
    }
}

/// Which set of closed-form expressions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// Physical damping and gain reservoirs.
    FullPhysical,
    /// Physical reservoirs with the secular terms dropped.
    SinkPeriodic,
    /// No fluctuating forces.
    Semiclassical,
    /// Leading linear-in-`t` terms of the physical model.
    Asymptotic,
}

/// Read the coefficients off the normally ordered moment matrix
/// `N = ⟨δA δA†ᵀ⟩` of a state that started in vacuum.
fn coeffs_from_moments(n: &CMatrix4) -> Result<GaussianCoeffs> {
    let real = |name: &'static str, z: C64| {
        let tol = IMAG_RESIDUE_TOL * z.re.abs().max(1.0);
        if z.im.abs() > tol {
            Err(Error::ImaginaryResidue { name, residue: z.im.abs() })
        } else {
            Ok(z.re)
        }
    };
    Ok(GaussianCoeffs {
        b1: real("B1", n[(1, 1)])?,
        b2: real("B2", n[(3, 3)])?,
        c1: n[(0, 1)],
        c2: n[(2, 3)],
        d: n[(0, 3)],
        d_bar: -n[(1, 3)],
    })
}

/// Coefficients from the propagator and the noise moments of a reservoir,
/// for vacuum (or coherent) input.
pub fn coeffs_general(spec: &ReservoirSpec, params: &ModelParams, t: f64) -> Result<GaussianCoeffs> {
    let p = propagator(params, t).full_matrix();
    // Vacuum: ⟨a aᵀ†⟩ per mode is diag(1, 0) in the (a, a†) ordering.
    let mut vac = CMatrix4::zeros();
    vac[(0, 0)] = re(1.0);
    vac[(2, 2)] = re(1.0);
    let ff = dynamics::noise_moments(spec, params, t, DEFAULT_EP_TOL)?.ff;
    coeffs_from_moments(&(p * vac * p.adjoint() + ff))
}

/// Coefficients in closed form.
///
/// Written through `cos μt`, `sin μt/μ` and the secular kernel so that the
/// physical and semiclassical models stay finite at the exceptional point.
/// The periodic sink form needs `μ² > 0` and the asymptote needs `μ² ≠ 0`.
pub fn coeffs_closed_form(form: ClosedForm, params: &ModelParams, t: f64) -> Result<GaussianCoeffs> {
    let (e, k, g) = (params.epsilon(), params.kappa(), params.gamma());
    let mu_sq = params.mu_sq();
    let kern = TrigKernels::new(mu_sq, t);
    let (s2, sc) = (kern.sinc_sq(), kern.sin_cos());

    let with_secular = |q: f64| GaussianCoeffs {
        b1: k * k * s2 - e * e * g * q,
        b2: (k * k + 2.0 * g * g) * s2 + 2.0 * g * sc - e * e * g * q,
        c1: re(-e * k * s2 + e * k * g * q),
        c2: re(-e * k * s2 + e * k * g * q),
        d: -I * (k * g * s2 + k * sc),
        d_bar: I * (e * g * g * q - e * g * s2),
    };

    match form {
        ClosedForm::FullPhysical => Ok(with_secular(kern.secular)),
        ClosedForm::SinkPeriodic => {
            match params.regime(DEFAULT_EP_TOL) {
                Regime::Oscillatory => {}
                Regime::ExceptionalPoint => return Err(Error::EpDegenerate { mu_sq }),
                Regime::Exponential => return Err(Error::NotOscillatory { mu_sq }),
            }
            // secular kernel without its −t/μ² part
            Ok(with_secular(sc / mu_sq))
        }
        ClosedForm::Semiclassical => {
            let b = k * k * s2;
            Ok(GaussianCoeffs {
                b1: b,
                b2: b,
                c1: re(-e * k * s2),
                c2: re(-e * k * s2),
                d: I * (k * g * s2 - k * sc),
                d_bar: re(0.0),
            })
        }
        ClosedForm::Asymptotic => {
            if params.regime(DEFAULT_EP_TOL) == Regime::ExceptionalPoint {
                return Err(Error::EpDegenerate { mu_sq });
            }
            let r = g * t / mu_sq;
            Ok(GaussianCoeffs {
                b1: e * e * r,
                b2: e * e * r,
                c1: re(-e * k * r),
                c2: re(-e * k * r),
                d: re(0.0),
                d_bar: -I * (e * g * r),
            })
        }
    }
}

/// Fast-path coefficients for a model.
pub fn coeffs(model: Model, params: &ModelParams, t: f64) -> Result<GaussianCoeffs> {
    coeffs_closed_form(model.closed_form(), params, t)
}

/// `α(t) = U α(0) + V α*(0)`; identical for every reservoir model.
pub fn mean_amplitudes(params: &ModelParams, alpha0: [C64; 2], t: f64) -> [C64; 2] {
    let p = propagator(params, t);
    let conj = [alpha0[0].conj(), alpha0[1].conj()];
    std::array::from_fn(|j| {
        (0..2)
            .map(|l| p.u[(j, l)] * alpha0[l] + p.v[(j, l)] * conj[l])
            .sum()
    })
}

/// Gaussian state evolved from a coherent state `α(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub alpha1: C64,
    pub alpha2: C64,
    pub coeffs: GaussianCoeffs,
    pub t: f64,
    pub model: Model,
}

impl GaussianState {
    /// Coherent input only shifts the means; the fluctuation coefficients
    /// are those of vacuum input.
    pub fn evolve(model: Model, params: &ModelParams, alpha0: [C64; 2], t: f64) -> Result<Self> {
        let [alpha1, alpha2] = mean_amplitudes(params, alpha0, t);
        Ok(Self { alpha1, alpha2, coeffs: coeffs(model, params, t)?, t, model })
    }
}

/// Reservoir spec matching a [`Model`], if it has one.
pub fn reservoir_for(model: Model, params: &ModelParams) -> Result<Option<ReservoirSpec>> {
    let rm = match model {
        Model::Full => ReservoirModel::FullPhysical,
        Model::Sink => ReservoirModel::Sink,
        Model::Semiclassical => ReservoirModel::Semiclassical,
        Model::Asymptotic => return Ok(None),
    };
    ReservoirSpec::new(rm, params, DEFAULT_EP_TOL).map(Some)
}
