//! Seeded random field generators shared by tests and the verify suites.

use crate::grid::{Grid, ScalarField, VectorField};
use crate::ops;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random real field with spectrum supported in |k|_inf <= kmax, unit-ish size.
pub fn random_band_limited(grid: Grid, kmax: i64, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let mut c = vec![Complex::default(); grid.len()];
    for i1 in 0..n {
        let k1 = grid.wavenumber(i1);
        for i2 in 0..n {
            let k2 = grid.wavenumber(i2);
            if k1.abs().max(k2.abs()) <= kmax {
                let decay = 1.0 / (1.0 + (k1 * k1 + k2 * k2) as f64);
                c[i1 * n + i2] = Complex::new(
                    rng.gen_range(-1.0..1.0) * decay,
                    rng.gen_range(-1.0..1.0) * decay,
                );
            }
        }
    }
    c[0] = Complex::new(c[0].re, 0.0);
    let mut f = ScalarField::from_spec(grid, c).expect("finite spec");
    // passing through the physical representation enforces Hermitian symmetry
    f = ScalarField::from_values(grid, f.values()).expect("finite values");
    f.into_spectral()
}

/// Random mean-zero band-limited field.
pub fn random_mean_zero(grid: Grid, kmax: i64, seed: u64) -> ScalarField {
    random_band_limited(grid, kmax, seed).project_mean_zero()
}

/// Random divergence-free band-limited velocity (a perp gradient).
pub fn random_divfree(grid: Grid, kmax: i64, seed: u64) -> VectorField {
    ops::perp_gradient(&random_mean_zero(grid, kmax, seed))
}

/// Amplitude with the iteration's spectral texture: unit mean plus a random
/// tail decaying like exp(-|k|/k0) out to |k|_inf = kmax. Mirrors the
/// roughness the Newton-Nash amplitudes carry up to the mollification scale.
pub fn textured_amplitude(grid: Grid, k0: f64, kmax: i64, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let mut c = vec![Complex::<f64>::default(); grid.len()];
    for i1 in 0..n {
        let k1 = grid.wavenumber(i1);
        for i2 in 0..n {
            let k2 = grid.wavenumber(i2);
            let kn = ((k1 * k1 + k2 * k2) as f64).sqrt();
            if k1.abs().max(k2.abs()) <= kmax && (k1, k2) != (0, 0) {
                let amp = 0.15 * (-kn / k0).exp();
                let ph: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                c[i1 * n + i2] = Complex::from_polar(amp, ph);
            }
        }
    }
    c[0] = Complex::new(1.0, 0.0);
    let f = ScalarField::from_spec(grid, c).expect("finite");
    ScalarField::from_values(grid, f.values()).expect("finite").into_spectral()
}
