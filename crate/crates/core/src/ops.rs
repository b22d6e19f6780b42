//! Linear Fourier-multiplier operators: fractional Laplacian, Riesz velocity,
//! derivatives, and the Poisson solve.

use crate::error::{Result, SqgError};
use crate::grid::{ScalarField, VectorField};
use num_complex::Complex;

const ZERO: Complex<f64> = Complex::new(0.0, 0.0);
const ONE: Complex<f64> = Complex::new(1.0, 0.0);

#[inline]
fn knorm(k1: i64, k2: i64) -> f64 {
    ((k1 * k1 + k2 * k2) as f64).sqrt()
}

/// True when the mode sits on the Nyquist line, where odd-order derivative
/// multipliers cannot stay Hermitian.
#[inline]
fn nyquist(n: usize, k1: i64, k2: i64) -> bool {
    let h = (n / 2) as i64;
    k1 == -h || k2 == -h
}

/// Lambda^s = (-Delta)^{s/2}: multiply coefficients by |k|^s.
///
/// The zero mode maps to 0 for every s; for s < 0 the mean is projected out
/// first (mean-zero convention for negative-order operators).
pub fn fractional_laplacian(f: &ScalarField, s: f64) -> Result<ScalarField> {
    if !s.is_finite() {
        return Err(SqgError::InvalidParameter(format!("non-finite exponent {s}")));
    }
    Ok(f.multiplier(|k1, k2| {
        if k1 == 0 && k2 == 0 {
            ZERO
        } else {
            Complex::new(knorm(k1, k2).powf(s), 0.0)
        }
    }))
}

/// SQG structure law u = T[theta] = grad^perp Lambda^{-1} theta with
/// grad^perp = (-d2, d1). Input mean is projected out; output is
/// divergence-free to spectral precision.
pub fn riesz_velocity(theta: &ScalarField) -> VectorField {
    let n = theta.grid().n();
    let u1 = theta.multiplier(|k1, k2| {
        if (k1 == 0 && k2 == 0) || nyquist(n, k1, k2) {
            ZERO
        } else {
            // -d2 Lambda^{-1}: -i k2 / |k|
            Complex::new(0.0, -(k2 as f64) / knorm(k1, k2))
        }
    });
    let u2 = theta.multiplier(|k1, k2| {
        if (k1 == 0 && k2 == 0) || nyquist(n, k1, k2) {
            ZERO
        } else {
            Complex::new(0.0, (k1 as f64) / knorm(k1, k2))
        }
    });
    VectorField::new(u1, u2)
}

pub fn deriv(f: &ScalarField, axis: usize) -> ScalarField {
    let n = f.grid().n();
    f.multiplier(|k1, k2| {
        if nyquist(n, k1, k2) {
            ZERO
        } else {
            let k = if axis == 0 { k1 } else { k2 };
            Complex::new(0.0, k as f64)
        }
    })
}

pub fn gradient(f: &ScalarField) -> VectorField {
    VectorField::new(deriv(f, 0), deriv(f, 1))
}

/// grad^perp f = (-d2 f, d1 f).
pub fn perp_gradient(f: &ScalarField) -> VectorField {
    VectorField::new(deriv(f, 1).scale(-1.0), deriv(f, 0))
}

pub fn divergence(v: &VectorField) -> ScalarField {
    deriv(&v.c1, 0).add(&deriv(&v.c2, 1))
}

/// Solve Delta psi = f for the zero-mean psi; errors if f is not mean-zero.
pub fn poisson_solve(f: &ScalarField) -> Result<ScalarField> {
    let mean = f.mean();
    if mean.abs() > 1e-10 * f.max_abs().max(1.0) {
        return Err(SqgError::NotMeanZero { what: "poisson_solve input", mean });
    }
    Ok(f.multiplier(|k1, k2| {
        if k1 == 0 && k2 == 0 {
            ZERO
        } else {
            Complex::new(-1.0 / ((k1 * k1 + k2 * k2) as f64), 0.0)
        }
    }))
}

/// Inverse Laplacian on mean-zero data without the mean check (the mean is
/// projected out). Engine plumbing for potentials of products.
pub fn inv_laplacian(f: &ScalarField) -> ScalarField {
    f.multiplier(|k1, k2| {
        if k1 == 0 && k2 == 0 {
            ZERO
        } else {
            Complex::new(-1.0 / ((k1 * k1 + k2 * k2) as f64), 0.0)
        }
    })
}

/// Spatial low-pass with multiplier m(|k|) given as a radial profile.
pub fn radial_multiplier(f: &ScalarField, m: impl Fn(f64) -> f64) -> ScalarField {
    f.multiplier(|k1, k2| Complex::new(m(knorm(k1, k2)), 0.0))
}

/// u . grad f with the product formed physically and truncated to the
/// dealias ball.
pub fn advect(u: &VectorField, f: &ScalarField) -> ScalarField {
    let g = gradient(f);
    u.c1.mul_dealiased(&g.c1).add(&u.c2.mul_dealiased(&g.c2))
}

const _: () = {
    // keep the ONE constant referenced; several multipliers were refactored
    // away from it but it documents the convention.
    let _ = ONE;
};
