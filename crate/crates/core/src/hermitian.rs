//! Cyclic Jacobi eigenvalue iteration for small dense Hermitian matrices.

use crate::model::{C64, CMatrix4};

const MAX_SWEEPS: usize = 64;

/// Relative off-diagonal tolerance at which the iteration stops.
pub const JACOBI_TOL: f64 = 1e-12;

/// Eigenvalues of a Hermitian `N×N` matrix, ascending.
///
/// Only the upper triangle and the real part of the diagonal are read.
pub fn hermitian_eigenvalues<const N: usize>(m: &[[C64; N]; N]) -> [f64; N] {
    let mut a = *m;
    for p in 0..N {
        a[p][p] = C64::new(a[p][p].re, 0.0);
        for q in p + 1..N {
            a[q][p] = a[p][q].conj();
        }
    }

    let scale = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return [0.0; N];
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale * 1e-3 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                rotate(&mut a, p, q);
            }
        }
    }

    let mut ev = [0.0; N];
    for (i, e) in ev.iter_mut().enumerate() {
        *e = a[i][i].re;
    }
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// One unitary rotation annihilating `a[p][q]`.
fn rotate<const N: usize>(a: &mut [[C64; N]; N], p: usize, q: usize) {
    let apq = a[p][q];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = D·R with D_qq = e^{-iφ}: columns p, q of J are
    // (c, -s e^{-iφ}) and (s, c e^{-iφ}) in rows (p, q).
    let pc = phase.conj();
    let jpp = C64::new(c, 0.0);
    let jqp = -pc * s;
    let jpq = C64::new(s, 0.0);
    let jqq = pc * c;

    // A ← A J
    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * jpp + y * jqp;
        row[q] = x * jpq + y * jqq;
    }
    // A ← J† A
    for k in 0..N {
        let (x, y) = (a[p][k], a[q][k]);
        a[p][k] = jpp.conj() * x + jqp.conj() * y;
        a[q][k] = jpq.conj() * x + jqq.conj() * y;
    }
    a[p][q] = C64::new(0.0, 0.0);
    a[q][p] = C64::new(0.0, 0.0);
    a[p][p] = C64::new(a[p][p].re, 0.0);
    a[q][q] = C64::new(a[q][q].re, 0.0);
}

/// Convenience wrapper for nalgebra matrices.
pub fn hermitian_eigenvalues4(m: &CMatrix4) -> [f64; 4] {
    let arr: [[C64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]));
    hermitian_eigenvalues(&arr)
}

/// Max elementwise `|A − A†|`.
pub fn hermiticity_residual(m: &CMatrix4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
