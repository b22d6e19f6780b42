//! Periodic fields on the uniform n x n grid of [0, 2pi)^2.
//!
//! A field holds either physical point values (real) or spectral coefficients
//! of the Fourier series f(x) = sum_k c(k) e^{i k.x}, with k per axis in
//! [-n/2, n/2). Point index = i1 * n + i2 (x2 fastest), x_i = 2pi i / n.

use crate::error::{Result, SqgError};
use crate::fft;
use num_complex::Complex;

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Uniform collocation grid with a dealiasing cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    n: usize,
    dealias_num: u32,
    dealias_den: u32,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_dealias(n, 2, 3)
    }

    pub fn with_dealias(n: usize, num: u32, den: u32) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(SqgError::InvalidGrid { n });
        }
        if num == 0 || den == 0 || num > den {
            return Err(SqgError::InvalidDealias { num, den });
        }
        Ok(Grid { n, dealias_num: num, dealias_den: den })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest retained |k| per axis: floor(dealias_fraction * n/2).
    #[inline]
    pub fn cutoff(&self) -> i64 {
        ((self.n as u64 / 2) * self.dealias_num as u64 / self.dealias_den as u64) as i64
    }

    pub fn dealias_fraction(&self) -> (u32, u32) {
        (self.dealias_num, self.dealias_den)
    }

    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        fft::wavenumber(self.n, i)
    }

    /// Physical coordinate of index i along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        TAU * i as f64 / self.n as f64
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Phys(Vec<f64>),
    Spec(Vec<Complex<f64>>),
}

/// Real scalar field on a [`Grid`], stored physically or spectrally.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Grid,
    repr: Repr,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        ScalarField { grid, repr: Repr::Spec(vec![Complex::default(); grid.len()]) }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SqgError::GridMismatch(values.len(), grid.len()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(SqgError::NonFinite);
        }
        Ok(ScalarField { grid, repr: Repr::Phys(values) })
    }

    pub fn from_spec(grid: Grid, coeffs: Vec<Complex<f64>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(SqgError::GridMismatch(coeffs.len(), grid.len()));
        }
        if !coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(SqgError::NonFinite);
        }
        Ok(ScalarField { grid, repr: Repr::Spec(coeffs) })
    }

    /// Sample a function of (x1, x2) on the grid.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut v = Vec::with_capacity(grid.len());
        for i1 in 0..n {
            let x1 = grid.coord(i1);
            for i2 in 0..n {
                v.push(f(x1, grid.coord(i2)));
            }
        }
        ScalarField { grid, repr: Repr::Phys(v) }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self.repr, Repr::Spec(_))
    }

    /// Physical point values (converts if needed).
    pub fn values(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Phys(v) => v.clone(),
            Repr::Spec(c) => fft::spec_to_phys(self.grid.n(), c),
        }
    }

    /// Spectral coefficients (converts if needed, enforcing Hermitian symmetry).
    pub fn spec(&self) -> Vec<Complex<f64>> {
        match &self.repr {
            Repr::Phys(v) => fft::phys_to_spec(self.grid.n(), v),
            Repr::Spec(c) => c.clone(),
        }
    }

    pub fn into_spectral(self) -> Self {
        let grid = self.grid;
        match self.repr {
            Repr::Spec(_) => self,
            Repr::Phys(v) => {
                ScalarField { grid, repr: Repr::Spec(fft::phys_to_spec(grid.n(), &v)) }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.repr {
            Repr::Phys(v) => v.iter().sum::<f64>() / v.len() as f64,
            Repr::Spec(c) => c[0].re,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// L2 norm over the torus, computed spectrally (Parseval).
    pub fn l2_norm(&self) -> f64 {
        let c = self.spec();
        (c.iter().map(|z| z.norm_sqr()).sum::<f64>() * TAU * TAU).sqrt()
    }

    /// Apply a real or complex Fourier multiplier m(k1, k2).
    pub fn multiplier(&self, m: impl Fn(i64, i64) -> Complex<f64>) -> ScalarField {
        let n = self.grid.n();
        let mut c = self.spec();
        for i1 in 0..n {
            let k1 = self.grid.wavenumber(i1);
            for i2 in 0..n {
                let k2 = self.grid.wavenumber(i2);
                c[i1 * n + i2] *= m(k1, k2);
            }
        }
        ScalarField { grid: self.grid, repr: Repr::Spec(c) }
    }

    /// Zero all coefficients with max(|k1|, |k2|) above the grid cutoff.
    pub fn dealias(&self) -> ScalarField {
        let cut = self.grid.cutoff();
        self.multiplier(|k1, k2| {
            if k1.abs().max(k2.abs()) > cut {
                Complex::default()
            } else {
                Complex::new(1.0, 0.0)
            }
        })
    }

    pub fn project_mean_zero(&self) -> ScalarField {
        let mut c = self.spec();
        c[0] = Complex::default();
        ScalarField { grid: self.grid, repr: Repr::Spec(c) }
    }

    pub fn scale(&self, a: f64) -> ScalarField {
        match &self.repr {
            Repr::Phys(v) => ScalarField {
                grid: self.grid,
                repr: Repr::Phys(v.iter().map(|x| a * x).collect()),
            },
            Repr::Spec(c) => ScalarField {
                grid: self.grid,
                repr: Repr::Spec(c.iter().map(|z| a * z).collect()),
            },
        }
    }

    pub fn add(&self, other: &ScalarField) -> ScalarField {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let a = self.spec();
        let b = other.spec();
        let c: Vec<_> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        ScalarField { grid: self.grid, repr: Repr::Spec(c) }
    }

    pub fn sub(&self, other: &ScalarField) -> ScalarField {
        self.add(&other.scale(-1.0))
    }

    /// Pointwise product in physical space, result truncated to the dealias ball.
    pub fn mul_dealiased(&self, other: &ScalarField) -> ScalarField {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let a = self.values();
        let b = other.values();
        let v: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        ScalarField::from_values(self.grid, v)
            .expect("finite product")
            .into_spectral()
            .dealias()
    }

    /// Maximum |f| difference against another field.
    pub fn max_diff(&self, other: &ScalarField) -> f64 {
        let a = self.values();
        let b = other.values();
        a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }
}

/// Velocity-type field with two scalar components.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub c1: ScalarField,
    pub c2: ScalarField,
}

impl VectorField {
    pub fn new(c1: ScalarField, c2: ScalarField) -> Self {
        assert_eq!(c1.grid(), c2.grid(), "grid mismatch");
        VectorField { c1, c2 }
    }

    pub fn zeros(grid: Grid) -> Self {
        VectorField { c1: ScalarField::zeros(grid), c2: ScalarField::zeros(grid) }
    }

    pub fn grid(&self) -> Grid {
        self.c1.grid()
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField { c1: self.c1.add(&other.c1), c2: self.c2.add(&other.c2) }
    }

    pub fn scale(&self, a: f64) -> VectorField {
        VectorField { c1: self.c1.scale(a), c2: self.c2.scale(a) }
    }

    pub fn max_abs(&self) -> f64 {
        self.c1.max_abs().max(self.c2.max_abs())
    }
}

/// Symmetric 2-tensor field stored as (R11, R12, R22).
#[derive(Clone, Debug)]
pub struct SymTensorField {
    pub r11: ScalarField,
    pub r12: ScalarField,
    pub r22: ScalarField,
}

impl SymTensorField {
    pub fn new(r11: ScalarField, r12: ScalarField, r22: ScalarField) -> Self {
        assert_eq!(r11.grid(), r12.grid(), "grid mismatch");
        assert_eq!(r11.grid(), r22.grid(), "grid mismatch");
        SymTensorField { r11, r12, r22 }
    }

    pub fn zeros(grid: Grid) -> Self {
        SymTensorField {
            r11: ScalarField::zeros(grid),
            r12: ScalarField::zeros(grid),
            r22: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> Grid {
        self.r11.grid()
    }

    pub fn trace(&self) -> ScalarField {
        self.r11.add(&self.r22)
    }

    pub fn add(&self, other: &SymTensorField) -> SymTensorField {
        SymTensorField {
            r11: self.r11.add(&other.r11),
            r12: self.r12.add(&other.r12),
            r22: self.r22.add(&other.r22),
        }
    }

    pub fn scale(&self, a: f64) -> SymTensorField {
        SymTensorField {
            r11: self.r11.scale(a),
            r12: self.r12.scale(a),
            r22: self.r22.scale(a),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.r11.max_abs().max(self.r12.max_abs()).max(self.r22.max_abs())
    }
}
