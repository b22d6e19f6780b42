//! Symmetric 2-tensor calculus: inverse divergence, the perp-div-div
//! operator of the relaxed system, and the geometric decomposition into
//! simple tensors xi (x) xi.

use crate::error::{Result, SqgError};
use crate::grid::{ScalarField, SymTensorField, VectorField};
use crate::ops::{self, deriv};

/// Anti-divergence: (div^-1 u)^{ij} = Delta^-1 (d_i u^j + d_j u^i - delta_ij div u).
///
/// Maps mean-zero vector fields to symmetric trace-free tensors with
/// div(div^-1 u) = u.
pub fn inv_div(u: &VectorField) -> Result<SymTensorField> {
    for (c, name) in [(&u.c1, "inv_div input, component 1"), (&u.c2, "inv_div input, component 2")] {
        let mean = c.mean();
        if mean.abs() > 1e-10 * c.max_abs().max(1.0) {
            return Err(SqgError::NotMeanZero { what: name, mean });
        }
    }
    let div = ops::divergence(u);
    let r11 = ops::inv_laplacian(&deriv(&u.c1, 0).scale(2.0).sub(&div));
    let r22 = ops::inv_laplacian(&deriv(&u.c2, 1).scale(2.0).sub(&div));
    let r12 = ops::inv_laplacian(&deriv(&u.c2, 0).add(&deriv(&u.c1, 1)));
    Ok(SymTensorField::new(r11, r12, r22))
}

/// grad^perp . div R = d1 d2 (R22 - R11) + (d1^2 - d2^2) R12, the
/// right-hand-side operator of the relaxed SQG system.
pub fn perp_div_div(r: &SymTensorField) -> ScalarField {
    let a = deriv(&deriv(&r.r22.sub(&r.r11), 0), 1);
    let b = deriv(&deriv(&r.r12, 0), 0).sub(&deriv(&deriv(&r.r12, 1), 1));
    a.add(&b)
}

/// The four directions of the decomposition basis.
pub const DIRECTIONS: [(i64, i64); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];

/// Direction set and closed-form coefficients for R = sum c_xi xi (x) xi on
/// the Frobenius ball B_1/2(Id) of symmetric 2x2 matrices.
#[derive(Clone, Copy, Debug, Default)]
pub struct GeometricBasis;

impl GeometricBasis {
    pub fn directions(&self) -> &'static [(i64, i64); 4] {
        &DIRECTIONS
    }

    /// Frobenius distance of (r11, r12, r22) from the identity.
    pub fn dist_from_id(&self, r11: f64, r12: f64, r22: f64) -> f64 {
        ((r11 - 1.0).powi(2) + 2.0 * r12 * r12 + (r22 - 1.0).powi(2)).sqrt()
    }

    /// Coefficients c_xi = gamma_xi^2 >= 0; exact reconstruction and strict
    /// positivity hold inside the open ball.
    pub fn coefficients(&self, r11: f64, r12: f64, r22: f64) -> Result<[f64; 4]> {
        let dist = self.dist_from_id(r11, r12, r22);
        if dist >= 0.5 {
            return Err(SqgError::OutsideBall { dist });
        }
        Ok(Self::coefficients_unchecked(r11, r12, r22))
    }

    /// Closed form without the domain check (engine fast path; the caller
    /// performs the ball check with context).
    #[inline]
    pub fn coefficients_unchecked(r11: f64, r12: f64, r22: f64) -> [f64; 4] {
        [r11 - 0.5, r22 - 0.5, 0.25 + 0.5 * r12, 0.25 - 0.5 * r12]
    }

    pub fn gammas(&self, r11: f64, r12: f64, r22: f64) -> Result<[f64; 4]> {
        let c = self.coefficients(r11, r12, r22)?;
        Ok([c[0].sqrt(), c[1].sqrt(), c[2].sqrt(), c[3].sqrt()])
    }

    /// Reassemble sum c_xi xi (x) xi as (m11, m12, m22).
    pub fn reconstruct(c: &[f64; 4]) -> (f64, f64, f64) {
        let mut m = (0.0, 0.0, 0.0);
        for (ci, (x1, x2)) in c.iter().zip(DIRECTIONS.iter()) {
            m.0 += ci * (x1 * x1) as f64;
            m.1 += ci * (x1 * x2) as f64;
            m.2 += ci * (x2 * x2) as f64;
        }
        m
    }
}

/// Decompose one symmetric matrix, given as (r11, r12, r22).
pub fn geometric_decompose(r11: f64, r12: f64, r22: f64) -> Result<[f64; 4]> {
    GeometricBasis.coefficients(r11, r12, r22)
}
