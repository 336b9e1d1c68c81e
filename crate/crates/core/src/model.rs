//! System parameters, derived spectral scales and the dynamical matrix with
//! its analytic eigendecomposition.
//!
//! Operators are ordered as `(a₁, a₁†, a₂, a₂†)` everywhere in the crate. The
//! Heisenberg-Langevin equations read `dA/dt = -i M A + L`, where `M` carries
//! `ε` and `κ` as real couplings and the damping/gain `γ` as `∓iγ` on the
//! diagonal, so that the spectrum of `M` is `{+μ, +μ, −μ, −μ}` with
//! `μ = √(ε² − κ² − γ²)`.

use crate::error::{Error, Result};
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix2 = Matrix2<C64>;
pub type CMatrix4 = Matrix4<C64>;

/// Relative tolerance on `μ²/ε²` below which parameters sit at the EP.
pub const DEFAULT_EP_TOL: f64 = 1e-9;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The three real rates defining the two-mode system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    epsilon: f64,
    kappa: f64,
    gamma: f64,
}

impl ModelParams {
    /// `epsilon` is the linear exchange rate, `kappa` the parametric coupling
    /// and `gamma` the damping of mode 1 (equal to the gain of mode 2).
    pub fn new(epsilon: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if !(epsilon.is_finite() && kappa.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidParams("rates must be finite".into()));
        }
        if epsilon <= 0.0 {
            return Err(Error::InvalidParams(format!("epsilon must be > 0, got {epsilon}")));
        }
        if kappa < 0.0 {
            return Err(Error::InvalidParams(format!("kappa must be >= 0, got {kappa}")));
        }
        if gamma < 0.0 {
            return Err(Error::InvalidParams(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(Self { epsilon, kappa, gamma })
    }

    /// Parameters in units of `ε` (so `ε = 1`).
    pub fn dimensionless(kappa_over_eps: f64, gamma_over_eps: f64) -> Result<Self> {
        Self::new(1.0, kappa_over_eps, gamma_over_eps)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `μ² = ε² − κ² − γ²`.
    pub fn mu_sq(&self) -> f64 {
        self.epsilon * self.epsilon - self.kappa * self.kappa - self.gamma * self.gamma
    }

    pub fn regime(&self, ep_tol: f64) -> Regime {
        Regime::classify(self.mu_sq(), self.epsilon, ep_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `μ² > 0`: periodic coherent dynamics.
    Oscillatory,
    /// `μ² ≈ 0`: eigenvalues coalesce.
    ExceptionalPoint,
    /// `μ² < 0`: hyperbolic growth and decay.
    Exponential,
}

impl Regime {
    pub fn classify(mu_sq: f64, epsilon: f64, ep_tol: f64) -> Regime {
        let scale = ep_tol * epsilon * epsilon;
        if mu_sq.abs() <= scale {
            Regime::ExceptionalPoint
        } else if mu_sq > 0.0 {
            Regime::Oscillatory
        } else {
            Regime::Exponential
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Oscillatory => "oscillatory",
            Regime::ExceptionalPoint => "exceptional_point",
            Regime::Exponential => "exponential",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Spectral scales derived from [`ModelParams`], all with principal complex
/// square roots so that the exponential regime is reached by continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// `ξ = √(ε² − κ²)`
    pub xi: C64,
    /// `μ = √(ε² − κ² − γ²)`
    pub mu: C64,
    pub mu_sq: f64,
    /// `ζ± = √(ε ± ξ)`
    pub zeta_plus: C64,
    pub zeta_minus: C64,
    /// `ψ± = (μ ± iγ)/ξ`
    pub psi_plus: C64,
    pub psi_minus: C64,
    pub regime: Regime,
}

pub fn derive_scales(params: &ModelParams, ep_tol: f64) -> DerivedScales {
    let (e, k, g) = (params.epsilon, params.kappa, params.gamma);
    let xi = re(e * e - k * k).sqrt();
    let mu_sq = params.mu_sq();
    let mu = re(mu_sq).sqrt();
    let zeta_plus = (re(e) + xi).sqrt();
    let zeta_minus = (re(e) - xi).sqrt();
    let psi_plus = (mu + I * g) / xi;
    let psi_minus = (mu - I * g) / xi;
    DerivedScales {
        xi,
        mu,
        mu_sq,
        zeta_plus,
        zeta_minus,
        psi_plus,
        psi_minus,
        regime: Regime::classify(mu_sq, e, ep_tol),
    }
}

/// The 4×4 coupling matrix `M` of `dA/dt = -i M A + L`.
///
/// Off-diagonal entries follow the `ε`/`κ` sign pattern of the two-mode
/// Hamiltonian; the diagonal carries `-iγ, -iγ, +iγ, +iγ`.
pub fn dynamical_matrix(params: &ModelParams) -> CMatrix4 {
    let (e, k, g) = (re(params.epsilon), re(params.kappa), I * params.gamma);
    let z = C64::new(0.0, 0.0);
    CMatrix4::new(
        -g, z, e, k, //
        z, -g, -k, -e, //
        e, k, g, z, //
        -k, -e, z, g,
    )
}

/// Coupling matrix together with its analytic eigendecomposition
/// `M = T · diag(μ, μ, −μ, −μ) · T⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalSystem {
    pub params: ModelParams,
    pub scales: DerivedScales,
    pub matrix: CMatrix4,
    pub transform: CMatrix4,
    pub transform_inv: CMatrix4,
    pub eigenvalues: [C64; 4],
}

pub fn build_system(params: &ModelParams, ep_tol: f64) -> Result<DynamicalSystem> {
    let scales = derive_scales(params, ep_tol);
    if scales.regime == Regime::ExceptionalPoint {
        return Err(Error::EpDegenerate { mu_sq: scales.mu_sq });
    }
    let e = params.epsilon;
    if (e * e - params.kappa * params.kappa).abs() <= ep_tol * e * e {
        return Err(Error::DegenerateBasis);
    }

    let DerivedScales { mu, zeta_plus: zp, zeta_minus: zm, psi_plus: pp, psi_minus: pm, .. } =
        scales;

    let a = re(1.0 / (2.0 * e.sqrt()));
    let t1 = [zp, -zm, zp * pp, -zm * pp];
    let t2 = [zm, -zp, -zm * pp, zp * pp];
    let t3 = [zp, -zm, -zp * pm, zm * pm];
    let t4 = [zm, -zp, zm * pm, -zp * pm];
    let transform = CMatrix4::from_fn(|r, c| a * [t1, t2, t3, t4][c][r]);

    // Columns of the inverse; the prefactor is √ε/(2μ).
    let b = re(e.sqrt()) / (2.0 * mu);
    let s1 = [zp * pm, -zm * pm, zp * pp, -zm * pp];
    let s2 = [zm * pm, -zp * pm, zm * pp, -zp * pp];
    let s3 = [zp, zm, -zp, -zm];
    let s4 = [zm, zp, -zm, -zp];
    let transform_inv = CMatrix4::from_fn(|r, c| b * [s1, s2, s3, s4][c][r]);

    Ok(DynamicalSystem {
        params: *params,
        scales,
        matrix: dynamical_matrix(params),
        transform,
        transform_inv,
        eigenvalues: [mu, mu, -mu, -mu],
    })
}

impl DynamicalSystem {
    /// Generator `G = -i M` of the coherent evolution `P(t) = exp(G t)`.
    pub fn generator(&self) -> CMatrix4 {
        self.matrix * (-I)
    }

    /// Eigenvalues of the generator, `-i·(μ, μ, −μ, −μ)`.
    pub fn generator_eigenvalues(&self) -> [C64; 4] {
        self.eigenvalues.map(|l| -I * l)
    }

    /// `P(t) = T · exp(-iΛt) · T⁻¹`.
    pub fn evolution_matrix(&self, t: f64) -> CMatrix4 {
        let lam = self.generator_eigenvalues();
        let mut scaled = self.transform;
        for (c, l) in lam.iter().enumerate() {
            let f = (l * t).exp();
            for r in 0..4 {
                scaled[(r, c)] *= f;
            }
        }
        scaled * self.transform_inv
    }

    /// Max elementwise `|M − T Λ T⁻¹|`.
    pub fn reconstruction_residual(&self) -> f64 {
        let lam = CMatrix4::from_diagonal(&nalgebra::Vector4::from(self.eigenvalues));
        let rebuilt = self.transform * lam * self.transform_inv;
        (self.matrix - rebuilt).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
