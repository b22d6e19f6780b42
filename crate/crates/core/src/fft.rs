//! Plan-cached 2D complex FFTs on n x n row-major buffers.
//!
//! Layout convention: index = i1 * n + i2, so the x2 axis is contiguous.
//! Forward transforms are unnormalized, inverse transforms divide by n^2.

use num_complex::Complex;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

static PLANS: Lazy<Mutex<HashMap<usize, PlanPair>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plans(n: usize) -> PlanPair {
    let mut map = PLANS.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

fn transpose(n: usize, data: &mut [Complex<f64>], scratch: &mut Vec<Complex<f64>>) {
    scratch.clear();
    scratch.extend_from_slice(data);
    const B: usize = 32;
    for ib in (0..n).step_by(B) {
        for jb in (0..n).step_by(B) {
            for i in ib..(ib + B).min(n) {
                for j in jb..(jb + B).min(n) {
                    data[j * n + i] = scratch[i * n + j];
                }
            }
        }
    }
}

fn fft2_with(n: usize, data: &mut [Complex<f64>], plan: &Arc<dyn Fft<f64>>) {
    debug_assert_eq!(data.len(), n * n);
    let mut scratch = vec![Complex::default(); plan.get_inplace_scratch_len()];
    plan.process_with_scratch(data, &mut scratch);
    let mut tbuf = Vec::with_capacity(n * n);
    transpose(n, data, &mut tbuf);
    plan.process_with_scratch(data, &mut scratch);
    transpose(n, data, &mut tbuf);
}

/// In-place forward 2D FFT (physical -> spectral), unnormalized.
pub fn fft2_forward(n: usize, data: &mut [Complex<f64>]) {
    let (fwd, _) = plans(n);
    fft2_with(n, data, &fwd);
}

/// In-place inverse 2D FFT (spectral -> physical), normalized by 1/n^2.
pub fn fft2_inverse(n: usize, data: &mut [Complex<f64>]) {
    let (_, inv) = plans(n);
    fft2_with(n, data, &inv);
    let scale = 1.0 / (n * n) as f64;
    for c in data.iter_mut() {
        *c *= scale;
    }
}

/// Signed wavenumber for index i on an n-grid: i in [0, n) -> k in [-n/2, n/2).
#[inline]
pub fn wavenumber(n: usize, i: usize) -> i64 {
    let h = (n / 2) as i64;
    let i = i as i64;
    if i < h {
        i
    } else {
        i - n as i64
    }
}

/// Index of -k for index i.
#[inline]
pub fn neg_index(n: usize, i: usize) -> usize {
    if i == 0 {
        0
    } else {
        n - i
    }
}

/// Average c(k) with conj(c(-k)) so the field is exactly real in physical space.
pub fn enforce_hermitian(n: usize, c: &mut [Complex<f64>]) {
    for i1 in 0..n {
        let j1 = neg_index(n, i1);
        for i2 in 0..n {
            let j2 = neg_index(n, i2);
            let a = i1 * n + i2;
            let b = j1 * n + j2;
            if a < b {
                let avg = 0.5 * (c[a] + c[b].conj());
                c[a] = avg;
                c[b] = avg.conj();
            } else if a == b {
                c[a] = Complex::new(c[a].re, 0.0);
            }
        }
    }
}

/// Real physical values -> Hermitian spectral coefficients.
pub fn phys_to_spec(n: usize, values: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft2_forward(n, &mut buf);
    let scale = 1.0 / (n * n) as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
    enforce_hermitian(n, &mut buf);
    buf
}

/// Hermitian spectral coefficients -> real physical values (imaginary parts dropped).
pub fn spec_to_phys(n: usize, coeffs: &[Complex<f64>]) -> Vec<f64> {
    let mut buf = coeffs.to_vec();
    // inverse with unnormalized convention: coefficients already carry 1/n^2
    let (_, inv) = plans(n);
    fft2_with(n, &mut buf, &inv);
    buf.into_iter().map(|c| c.re).collect()
}
