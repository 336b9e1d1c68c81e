//! Coherent propagator blocks, reservoir noise moments and the tailored
//! (sink) reservoir.

use crate::error::{Error, Result};
use crate::hermitian::hermitian_eigenvalues4;
use crate::kernels::TrigKernels;
use crate::model::{re, CMatrix2, CMatrix4, DynamicalSystem, ModelParams, Regime, C64, I};
use nalgebra::Matrix2;

/// Relative threshold below which `λᵢ + λⱼ*` counts as zero in the Markovian
/// noise integral.
pub const DEGENERATE_RATE_TOL: f64 = 1e-12;

/// `U(t)` and `V(t)` of `a(t) = U a(0) + V a†(0) + f(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub u: CMatrix2,
    pub v: CMatrix2,
    pub t: f64,
}

impl Propagator {
    /// The full 4×4 evolution matrix in `(a₁, a₁†, a₂, a₂†)` ordering.
    pub fn full_matrix(&self) -> CMatrix4 {
        let mut p = CMatrix4::zeros();
        for j in 0..2 {
            for k in 0..2 {
                p[(2 * j, 2 * k)] = self.u[(j, k)];
                p[(2 * j, 2 * k + 1)] = self.v[(j, k)];
                p[(2 * j + 1, 2 * k + 1)] = self.u[(j, k)].conj();
                p[(2 * j + 1, 2 * k)] = self.v[(j, k)].conj();
            }
        }
        p
    }

    /// Extract `U`, `V` from a 4×4 evolution matrix.
    pub fn from_full_matrix(p: &CMatrix4, t: f64) -> Self {
        let u = Matrix2::from_fn(|j, k| p[(2 * j, 2 * k)]);
        let v = Matrix2::from_fn(|j, k| p[(2 * j, 2 * k + 1)]);
        Self { u, v, t }
    }
}

/// Coherent propagator in closed form; finite across the exceptional point.
pub fn propagator(params: &ModelParams, t: f64) -> Propagator {
    let k = TrigKernels::new(params.mu_sq(), t);
    let (e, kap, g) = (params.epsilon(), params.kappa(), params.gamma());
    let off = -I * (e * k.sinc);
    let u = Matrix2::new(re(k.cos - g * k.sinc), off, off, re(k.cos + g * k.sinc));
    let w = -I * (kap * k.sinc);
    let v = Matrix2::new(re(0.0), w, w, re(0.0));
    Propagator { u, v, t }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReservoirModel {
    /// Zero-temperature damping and amplifying reservoirs.
    FullPhysical,
    /// Tailored reservoir with the secular part of the noise removed.
    Sink,
    /// No Langevin forces at all.
    Semiclassical,
}

/// δ-correlation strength `L⁰` of `⟨L(t) L†ᵀ(t′)⟩ = L⁰ δ(t − t′)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirSpec {
    pub model: ReservoirModel,
    pub l0: CMatrix4,
}

impl ReservoirSpec {
    pub fn new(model: ReservoirModel, params: &ModelParams, ep_tol: f64) -> Result<Self> {
        let l0 = match model {
            ReservoirModel::FullPhysical => full_reservoir_matrix(params),
            ReservoirModel::Sink => tailor_reservoir(params, ep_tol)?.sink,
            ReservoirModel::Semiclassical => CMatrix4::zeros(),
        };
        Ok(Self { model, l0 })
    }
}

/// `L⁰` of the physical reservoirs: `⟨ℓ₁ℓ₁†⟩ = ⟨ℓ₂†ℓ₂⟩ = 2γ`.
pub fn full_reservoir_matrix(params: &ModelParams) -> CMatrix4 {
    let mut l0 = CMatrix4::zeros();
    l0[(0, 0)] = re(2.0 * params.gamma());
    l0[(3, 3)] = re(2.0 * params.gamma());
    l0
}

/// Equal-time force correlations `⟨F(t) F†ᵀ(t)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMoments {
    pub ff: CMatrix4,
    pub t: f64,
}

impl NoiseMoments {
    pub fn zero(t: f64) -> Self {
        Self { ff: CMatrix4::zeros(), t }
    }

    /// Mode-1 block `F₁`.
    pub fn f1(&self) -> CMatrix2 {
        self.ff.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Mode-2 block `F₂`.
    pub fn f2(&self) -> CMatrix2 {
        self.ff.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Cross block `F₁₂`.
    pub fn f12(&self) -> CMatrix2 {
        self.ff.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        crate::hermitian::hermiticity_residual(&self.ff)
    }

    /// Smallest eigenvalue of the (Hermitian part of the) correlation matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (self.ff + self.ff.adjoint()) * re(0.5);
        hermitian_eigenvalues4(&h)[0]
    }
}

/// Noise moments of the physical reservoirs in closed form.
///
/// Assembled from the blocks `F₁`, `F₂`, `F₁₂` including the secular
/// `(sc − μt)/μ³` terms; evaluated through [`TrigKernels`] so it stays
/// finite at the exceptional point.
pub fn noise_moments_full(params: &ModelParams, t: f64) -> NoiseMoments {
    let k = TrigKernels::new(params.mu_sq(), t);
    let (e, kap, g) = (params.epsilon(), params.kappa(), params.gamma());
    let sc = k.sin_cos();
    let s2 = k.sinc_sq();
    let q = k.secular;

    let fa = Matrix2::new(-e, kap, kap, -e);
    let f1 = Matrix2::new(2.0 * g * (sc - g * s2), 0.0, 0.0, 0.0) + fa * (g * e * q);
    let f2 = Matrix2::new(0.0, 0.0, 0.0, 2.0 * g * (sc + g * s2)) + fa * (g * e * q);
    let f12 = Matrix2::new(re(e * g * g * q), re(0.0), re(0.0), re(-e * g * g * q)) * I
        + Matrix2::new(re(e), re(-2.0 * kap), re(0.0), re(e)) * (I * (g * s2));

    let mut ff = CMatrix4::zeros();
    ff.fixed_view_mut::<2, 2>(0, 0).copy_from(&f1.map(re));
    ff.fixed_view_mut::<2, 2>(2, 2).copy_from(&f2.map(re));
    ff.fixed_view_mut::<2, 2>(0, 2).copy_from(&f12);
    ff.fixed_view_mut::<2, 2>(2, 0).copy_from(&f12.adjoint());
    NoiseMoments { ff, t }
}

/// `∫₀ᵗ e^{z s} ds`, exact limit `t` at `z = 0`.
fn exp_integral(z: C64, t: f64, zero_tol: f64) -> C64 {
    if z.norm() < zero_tol {
        return re(t);
    }
    let zt = z * t;
    if zt.norm() < 1e-3 {
        // t Σ (zt)ⁿ/(n+1)!
        let mut sum = re(0.0);
        let mut term = re(1.0);
        for n in 0..12 {
            sum += term;
            term *= zt / (n as f64 + 2.0);
        }
        return sum * t;
    }
    (zt.exp() - 1.0) / z
}

/// Noise moments for an arbitrary δ-correlated reservoir `L⁰`, integrated in
/// the eigenbasis of the generator.
pub fn ff_from_l0(system: &DynamicalSystem, l0: &CMatrix4, t: f64) -> NoiseMoments {
    let lam = system.generator_eigenvalues();
    let tinv = &system.transform_inv;
    let g = tinv * l0 * tinv.adjoint();
    let zero_tol = DEGENERATE_RATE_TOL * system.params.epsilon();
    let integrated = CMatrix4::from_fn(|i, j| g[(i, j)] * exp_integral(lam[i] + lam[j].conj(), t, zero_tol));
    let ff = system.transform * integrated * system.transform.adjoint();
    NoiseMoments { ff, t }
}

/// Decomposition of the physical reservoir `L⁰ = L_t + L_sink`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailoredReservoir {
    /// Part responsible for the noise growing linearly in time.
    pub secular: CMatrix4,
    /// The remainder, which keeps the evolution periodic.
    pub sink: CMatrix4,
}

pub fn tailor_reservoir(params: &ModelParams, ep_tol: f64) -> Result<TailoredReservoir> {
    let mu_sq = require_oscillatory(params, ep_tol)?;
    let (e, k, g) = (params.epsilon(), params.kappa(), params.gamma());
    let pre = e * g / mu_sq;
    let (ig, z) = (I * g, re(0.0));

    let secular = CMatrix4::new(
        re(e), re(-k), -ig, z, //
        re(-k), re(e), z, ig, //
        ig, z, re(e), re(-k), //
        z, -ig, re(-k), re(e),
    ) * re(pre);

    let d = re(2.0 * mu_sq / e - e);
    let sink = CMatrix4::new(
        d, re(k), ig, z, //
        re(k), re(-e), z, -ig, //
        -ig, z, re(-e), re(k), //
        z, ig, re(k), d,
    ) * re(pre);

    Ok(TailoredReservoir { secular, sink })
}

fn require_oscillatory(params: &ModelParams, ep_tol: f64) -> Result<f64> {
    let mu_sq = params.mu_sq();
    match params.regime(ep_tol) {
        Regime::Oscillatory => Ok(mu_sq),
        Regime::ExceptionalPoint => Err(Error::EpDegenerate { mu_sq }),
        Regime::Exponential => Err(Error::NotOscillatory { mu_sq }),
    }
}

/// Eigenvalues of the sink correlation matrix and the sink strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkDiagnostics {
    /// Doubly degenerate eigenvalue `ν₊`.
    pub nu_plus: f64,
    /// Doubly degenerate eigenvalue `ν₋` (negative whenever `γ > 0`).
    pub nu_minus: f64,
    /// `Λ = 4γ(1 − ε²/μ²)`.
    pub lambda: f64,
}

impl SinkDiagnostics {
    /// `Λ` recomputed as the sum of all eigenvalues, `2(ν₊ + ν₋)`.
    pub fn lambda_from_eigenvalues(&self) -> f64 {
        2.0 * (self.nu_plus + self.nu_minus)
    }
}

pub fn sink_diagnostics(params: &ModelParams, ep_tol: f64) -> Result<SinkDiagnostics> {
    let mu_sq = require_oscillatory(params, ep_tol)?;
    let (e, k, g) = (params.epsilon(), params.kappa(), params.gamma());
    let r2 = k * k + g * g;
    let root = (mu_sq * mu_sq + e * e * r2).sqrt();
    Ok(SinkDiagnostics {
        nu_plus: g / mu_sq * (-r2 + root),
        nu_minus: g / mu_sq * (-r2 - root),
        lambda: 4.0 * g * (1.0 - e * e / mu_sq),
    })
}

/// Noise moments for the chosen reservoir model.
pub fn noise_moments(spec: &ReservoirSpec, params: &ModelParams, t: f64, ep_tol: f64) -> Result<NoiseMoments> {
    match spec.model {
        ReservoirModel::FullPhysical => Ok(noise_moments_full(params, t)),
        ReservoirModel::Semiclassical => Ok(NoiseMoments::zero(t)),
        ReservoirModel::Sink => {
            let system = crate::model::build_system(params, ep_tol)?;
            Ok(ff_from_l0(&system, &spec.l0, t))
        }
    }
}

/// Deviation of the equal-time commutators `[δaⱼ, δaₖ†]` from `δⱼₖ`.
///
/// The coherent part is `U U† − V V†`; the force part is
/// `⟨fⱼ fₖ†⟩ − ⟨fₖ† fⱼ⟩` read off the correlation matrix.
pub fn commutator_defect(prop: &Propagator, noise: &NoiseMoments) -> CMatrix2 {
    let coherent = prop.u * prop.u.adjoint() - prop.v * prop.v.adjoint();
    let ff = &noise.ff;
    let forces = Matrix2::from_fn(|j, k| ff[(2 * j, 2 * k)] - ff[(2 * k + 1, 2 * j + 1)]);
    coherent + forces - CMatrix2::identity()
}

pub fn max_abs(m: &CMatrix2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_system, DEFAULT_EP_TOL};
    use std::f64::consts::PI;

    fn p(k: f64, g: f64) -> ModelParams {
        ModelParams::new(1.0, k, g).unwrap()
    }

    fn max4(m: &CMatrix4) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        for (k, g) in [(0.5, 0.3), (0.6, 0.8), (1.1, 0.4)] {
            let pr = propagator(&p(k, g), 0.0);
            assert_eq!(pr.u, CMatrix2::identity());
            assert_eq!(pr.v, CMatrix2::zeros());
        }
    }

    #[test]
    fn beam_splitter_swap() {
        let pr = propagator(&p(0.0, 0.0), PI / 2.0);
        let expected = Matrix2::new(re(0.0), -I, -I, re(0.0));
        assert!(max_abs(&(pr.u - expected)) < 1e-15);
        assert_eq!(pr.v, CMatrix2::zeros());
    }

    #[test]
    fn v_is_antidiagonal_and_symmetric() {
        let pr = propagator(&p(0.4, 0.2), 3.3);
        assert_eq!(pr.v[(0, 0)], re(0.0));
        assert_eq!(pr.v[(1, 1)], re(0.0));
        assert_eq!(pr.v[(0, 1)], pr.v[(1, 0)]);
    }

    #[test]
    fn propagator_matches_eigendecomposition() {
        let params = p(0.5, 0.3);
        let sys = build_system(&params, DEFAULT_EP_TOL).unwrap();
        for t in [0.3, 1.0, 7.5] {
            let a = propagator(&params, t).full_matrix();
            let b = sys.evolution_matrix(t);
            assert!(max4(&(a - b)) < 1e-12);
        }
    }

    #[test]
    fn propagator_solves_heisenberg_equation() {
        // central finite differences of dP/dt = G P
        let params = p(0.5, 0.3);
        let g = crate::model::dynamical_matrix(&params) * (-I);
        let h = 1e-6;
        for i in 0..10 {
            let t = 0.37 + 1.9 * i as f64;
            let dp = (propagator(&params, t + h).full_matrix() - propagator(&params, t - h).full_matrix())
                * re(0.5 / h);
            let res = dp - g * propagator(&params, t).full_matrix();
            assert!(max4(&res) < 1e-5 * max4(&g));
        }
    }

    #[test]
    fn noise_vanishes_at_t0_and_without_damping() {
        assert_eq!(noise_moments_full(&p(0.5, 0.3), 0.0).ff, CMatrix4::zeros());
        for t in [0.5, 3.0, 40.0] {
            assert!(max4(&noise_moments_full(&p(0.5, 0.0), t).ff) == 0.0);
        }
    }

    #[test]
    fn noise_golden_values() {
        // Direct quadrature of ∫ P L⁰ P† at (1, 0.5, 0.3), t = 2.
        let n = noise_moments_full(&p(0.5, 0.3), 2.0);
        assert!((n.ff[(0, 0)] - re(0.627_506_956_243_268_6)).norm() < 1e-12);
        assert!((n.ff[(3, 3)] - re(1.171_371_834_020_475_7)).norm() < 1e-12);
        assert!((n.ff[(0, 3)] - C64::new(0.0, -0.453_220_731_481_006_06)).norm() < 1e-12);
        assert!(n.hermiticity_residual() < 1e-15);
    }

    #[test]
    fn ff_from_l0_agrees_with_closed_form() {
        for (k, g) in [(0.5, 0.3), (0.2, 0.9), (0.9, 0.05), (0.5, 1.2)] {
            let params = p(k, g);
            let sys = build_system(&params, DEFAULT_EP_TOL).unwrap();
            for t in [0.0, 0.4, 2.0, 5.0] {
                let a = ff_from_l0(&sys, &full_reservoir_matrix(&params), t).ff;
                let b = noise_moments_full(&params, t).ff;
                assert!(max4(&(a - b)) < 1e-10 * (1.0 + max4(&b)), "{k} {g} {t}");
            }
            assert_eq!(ff_from_l0(&sys, &CMatrix4::zeros(), 3.0).ff, CMatrix4::zeros());
        }
    }

    #[test]
    fn tailored_reservoir_identity() {
        let params = p(0.5, 0.3);
        let tr = tailor_reservoir(&params, DEFAULT_EP_TOL).unwrap();
        let diff = full_reservoir_matrix(&params) - tr.secular - tr.sink;
        assert!(max4(&diff) < 1e-12);

        let tr = tailor_reservoir(&p(0.5, 0.5), DEFAULT_EP_TOL).unwrap();
        assert!((tr.secular[(0, 0)] - re(1.0)).norm() < 1e-15);

        let tr = tailor_reservoir(&p(0.5, 0.0), DEFAULT_EP_TOL).unwrap();
        assert_eq!(max4(&tr.secular), 0.0);
        assert_eq!(max4(&tr.sink), 0.0);

        assert!(matches!(tailor_reservoir(&p(0.6, 0.8), DEFAULT_EP_TOL), Err(Error::EpDegenerate { .. })));
        assert!(matches!(tailor_reservoir(&p(0.6, 0.9), DEFAULT_EP_TOL), Err(Error::NotOscillatory { .. })));
    }

    #[test]
    fn secular_reservoir_is_stationary() {
        // G L_t + L_t G† = 0, so the secular part integrates to exactly L_t·t.
        let params = p(0.35, 0.45);
        let sys = build_system(&params, DEFAULT_EP_TOL).unwrap();
        let tr = tailor_reservoir(&params, DEFAULT_EP_TOL).unwrap();
        let g = sys.generator();
        assert!(max4(&(g * tr.secular + tr.secular * g.adjoint())) < 1e-14);
        let t = 6.1;
        let ff = ff_from_l0(&sys, &tr.secular, t).ff;
        assert!(max4(&(ff - tr.secular * re(t))) < 1e-10);
    }

    #[test]
    fn sink_noise_is_periodic() {
        let params = p(0.5, 0.3);
        let sys = build_system(&params, DEFAULT_EP_TOL).unwrap();
        let tr = tailor_reservoir(&params, DEFAULT_EP_TOL).unwrap();
        let period = 2.0 * PI / params.mu_sq().sqrt();
        for t in [0.3, 1.7, 4.4] {
            let a = ff_from_l0(&sys, &tr.sink, t).ff;
            let b = ff_from_l0(&sys, &tr.sink, t + period).ff;
            let c = ff_from_l0(&sys, &tr.sink, t + 10.0 * period).ff;
            assert!(max4(&(a - b)) < 1e-9);
            assert!(max4(&(a - c)) < 1e-8);
        }
    }

    #[test]
    fn full_is_sink_plus_secular() {
        let params = p(0.3, 0.6);
        let sys = build_system(&params, DEFAULT_EP_TOL).unwrap();
        let tr = tailor_reservoir(&params, DEFAULT_EP_TOL).unwrap();
        for t in [0.5, 2.0, 9.0] {
            let full = noise_moments_full(&params, t).ff;
            let sink = ff_from_l0(&sys, &tr.sink, t).ff;
            let sec = ff_from_l0(&sys, &tr.secular, t).ff;
            assert!(max4(&(full - sink - sec)) < 1e-9);
        }
    }

    #[test]
    fn sink_diagnostics_values() {
        let d = sink_diagnostics(&p(0.5, 0.0), DEFAULT_EP_TOL).unwrap();
        assert_eq!((d.nu_plus, d.nu_minus, d.lambda), (0.0, 0.0, 0.0));

        let d = sink_diagnostics(&p(0.5, 0.5), DEFAULT_EP_TOL).unwrap();
        assert!((d.lambda + 2.0).abs() < 1e-14);

        let params = p(0.5, 0.3);
        let d = sink_diagnostics(&params, DEFAULT_EP_TOL).unwrap();
        assert!(d.nu_minus < 0.0);
        assert!((d.lambda - d.lambda_from_eigenvalues()).abs() < 1e-10 * d.lambda.abs());

        // ν± are the doubly degenerate eigenvalues of the sink matrix.
        let tr = tailor_reservoir(&params, DEFAULT_EP_TOL).unwrap();
        let ev = hermitian_eigenvalues4(&tr.sink);
        for (a, b) in ev.iter().zip([d.nu_minus, d.nu_minus, d.nu_plus, d.nu_plus]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(sink_diagnostics(&p(0.6, 0.8), DEFAULT_EP_TOL).is_err());
    }

    #[test]
    fn commutators() {
        let params = p(0.5, 0.3);
        let sys = build_system(&params, DEFAULT_EP_TOL).unwrap();
        let tr = tailor_reservoir(&params, DEFAULT_EP_TOL).unwrap();
        for t in [0.0, 0.8, 3.1, 12.0] {
            let pr = propagator(&params, t);
            assert!(max_abs(&commutator_defect(&pr, &noise_moments_full(&params, t))) < 1e-10);
            assert!(max_abs(&commutator_defect(&pr, &ff_from_l0(&sys, &tr.sink, t))) < 1e-10);
        }
        let pr = propagator(&params, 1.0);
        assert!(max_abs(&commutator_defect(&pr, &NoiseMoments::zero(1.0))) > 1e-3);
    }

    #[test]
    fn positivity_of_physical_noise_and_sink_violation() {
        let params = p(0.5, 0.3);
        let sys = build_system(&params, DEFAULT_EP_TOL).unwrap();
        let tr = tailor_reservoir(&params, DEFAULT_EP_TOL).unwrap();
        let period = 2.0 * PI / params.mu_sq().sqrt();
        let mut first_negative = None;
        for i in 1..=400 {
            let t = period * i as f64 / 400.0;
            assert!(noise_moments_full(&params, t).min_eigenvalue() > -1e-12);
            if first_negative.is_none() && ff_from_l0(&sys, &tr.sink, t).min_eigenvalue() < -1e-12 {
                first_negative = Some(t);
            }
        }
        let t0 = first_negative.expect("sink noise must lose positivity within one period");
        assert!(t0 > 0.0 && t0 < period);
    }
}
