//! Dyadic Littlewood-Paley decomposition and Besov-style norm estimation.
//!
//! Blocks use the radial profile psi with psi = 1 on B_1 and supp psi in
//! B_{3/2}: Delta_j has multiplier chi_j(k) = psi(|k|/2^j) - psi(|k|/2^{j-1})
//! for j >= 0, Delta_{-1} is the mean, and Delta_j = 0 for j < -1.

use crate::bump::psi_lp;
use crate::grid::ScalarField;
use crate::ops;
use num_complex::Complex;

/// The radial cutoff profile backing all blocks (psi = 1 on [0,1],
/// supported in [0, 3/2], monotone nonincreasing, C-infinity).
#[derive(Clone, Copy, Debug, Default)]
pub struct LpProfile;

impl LpProfile {
    pub fn psi(&self, r: f64) -> f64 {
        psi_lp(r)
    }

    /// chi_j evaluated at radius r (j >= 0).
    pub fn chi(&self, r: f64, j: i32) -> f64 {
        psi_lp(r / 2f64.powi(j)) - psi_lp(r / 2f64.powi(j - 1))
    }
}

/// Littlewood-Paley block Delta_j f.
pub fn lp_block(f: &ScalarField, j: i32) -> ScalarField {
    match j {
        j if j < -1 => ScalarField::zeros(f.grid()),
        -1 => {
            let mut c = vec![Complex::default(); f.grid().len()];
            c[0] = Complex::new(f.mean(), 0.0);
            ScalarField::from_spec(f.grid(), c).expect("finite mean")
        }
        j => {
            let p = LpProfile;
            ops::radial_multiplier(f, |r| p.chi(r, j))
        }
    }
}

/// Low-frequency projection S_j f with multiplier psi(|k|/2^j).
pub fn low_pass(f: &ScalarField, j: i32) -> ScalarField {
    ops::radial_multiplier(f, |r| psi_lp(r / 2f64.powi(j)))
}

/// Largest block index fully resolved on the grid: blocks with 2^{j+1}
/// beyond the dealiasing cutoff are skipped (they would report spurious
/// decay).
pub fn max_resolved_block(f: &ScalarField) -> i32 {
    let cut = f.grid().cutoff();
    let mut j = 0i32;
    while 2i64.pow(j as u32 + 2) <= cut {
        j += 1;
    }
    j
}

/// Besov proxy for the Hoelder norm: sup_{j >= -1} 2^{j alpha} |Delta_j f|_inf.
///
/// Returns the value together with a flag that is true when under-resolved
/// blocks had to be skipped while f still carries spectral mass there.
pub fn holder_norm_checked(f: &ScalarField, alpha: f64) -> (f64, bool) {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha in (0,1)");
    let jmax = max_resolved_block(f);
    let mut sup = f.mean().abs() * 2f64.powf(-alpha);
    for j in 0..=jmax {
        let b = lp_block(f, j).max_abs();
        sup = sup.max(2f64.powf(j as f64 * alpha) * b);
    }
    // mass beyond the resolved blocks?
    let tail = f.sub(&low_pass(f, jmax)).max_abs();
    let skipped = tail > 1e-13 * f.max_abs().max(1.0);
    (sup, skipped)
}

/// Besov proxy for |f|_alpha (see [`holder_norm_checked`]).
pub fn holder_norm(f: &ScalarField, alpha: f64) -> f64 {
    holder_norm_checked(f, alpha).0
}

/// Grid C^N norm: max over |gamma| <= N of |d^gamma f|_inf with spectral
/// derivatives. The flag warns when 2^N exceeds the resolvable range.
pub fn c_n_norm(f: &ScalarField, n_order: usize) -> (f64, bool) {
    let warn = 2f64.powi(n_order as i32) > f.grid().cutoff() as f64;
    let mut best = 0.0f64;
    let spec = f.clone().into_spectral();
    for g1 in 0..=n_order {
        let mut d1 = spec.clone();
        for _ in 0..g1 {
            d1 = ops::deriv(&d1, 0);
        }
        for g2 in 0..=(n_order - g1) {
            let mut d = d1.clone();
            for _ in 0..g2 {
                d = ops::deriv(&d, 1);
            }
            best = best.max(d.max_abs());
        }
    }
    (best, warn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::testkit::random_band_limited;

    fn grid() -> Grid {
        Grid::new(128).unwrap()
    }

    #[test]
    fn block_of_cos4_lands_in_j2() {
        // chi_2(4) = psi(1) - psi(2) = 1; chi_1(4) = chi_3(4) = 0.
        let f = ScalarField::from_fn(grid(), |x1, _| (4.0 * x1).cos());
        assert!(lp_block(&f, 2).max_diff(&f) < 1e-12);
        assert!(lp_block(&f, 1).max_abs() < 1e-12);
        assert!(lp_block(&f, 3).max_abs() < 1e-12);
    }

    #[test]
    fn constant_lives_in_block_minus_one() {
        let f = ScalarField::from_fn(grid(), |_, _| 2.5);
        assert!(lp_block(&f, -1).max_diff(&f) < 1e-12);
        assert!(lp_block(&f, -3).max_abs() == 0.0);
    }

    #[test]
    fn partition_of_unity() {
        let f = random_band_limited(grid(), 20, 17);
        let mut sum = ScalarField::zeros(grid());
        for j in -1..=max_resolved_block(&f) + 1 {
            sum = sum.add(&lp_block(&f, j));
        }
        assert!(sum.max_diff(&f) < 1e-10 * f.max_abs().max(1.0));
    }

    #[test]
    fn low_pass_telescopes() {
        let f = random_band_limited(grid(), 25, 4);
        for j in [1, 3, 5] {
            let mut sum = ScalarField::zeros(grid());
            for i in -1..=j {
                sum = sum.add(&lp_block(&f, i));
            }
            assert!(low_pass(&f, j).max_diff(&sum) < 1e-11 * f.max_abs().max(1.0));
        }
    }

    #[test]
    fn low_pass_extremes() {
        let f = ScalarField::from_fn(grid(), |x1, _| x1.cos());
        assert!(low_pass(&f, 5).max_diff(&f) < 1e-12);
        let g = ScalarField::from_fn(grid(), |x1, _| (8.0 * x1).cos());
        // psi(8/2) = psi(4) = 0
        assert!(low_pass(&g, 1).max_abs() < 1e-12);
    }

    #[test]
    fn blocks_far_apart_annihilate() {
        let f = random_band_limited(grid(), 40, 9);
        for j in 0..=5 {
            for k in 0..=5 {
                let d = lp_block(&lp_block(&f, j), k).max_abs();
                if (j - k).abs() > 1 {
                    assert_eq!(d, 0.0, "Delta_{j} Delta_{k} should vanish exactly");
                }
            }
        }
    }

    #[test]
    fn holder_norm_basics() {
        let zero = ScalarField::zeros(grid());
        assert_eq!(holder_norm(&zero, 0.5), 0.0);

        // single active block: doubling the frequency scales by about 2^alpha
        let alpha = 0.4;
        let f1 = ScalarField::from_fn(grid(), |x1, _| (8.0 * x1).cos());
        let f2 = ScalarField::from_fn(grid(), |x1, _| (16.0 * x1).cos());
        let ratio = holder_norm(&f2, alpha) / holder_norm(&f1, alpha);
        let target = 2f64.powf(alpha);
        assert!(ratio >= target / 1.2 && ratio <= target * 1.2, "ratio {ratio}");
    }

    #[test]
    fn holder_norm_subadditive() {
        let f = random_band_limited(grid(), 20, 31);
        let g = random_band_limited(grid(), 20, 32);
        let a = 0.3;
        assert!(holder_norm(&f.add(&g), a) <= holder_norm(&f, a) + holder_norm(&g, a) + 1e-10);
    }

    #[test]
    fn holder_norm_translation_invariant() {
        let f = random_band_limited(grid(), 18, 2);
        let n = grid().n();
        let v = f.values();
        // cyclic shift by (5, 11) grid points
        let mut w = vec![0.0; v.len()];
        for i1 in 0..n {
            for i2 in 0..n {
                w[i1 * n + i2] = v[((i1 + 5) % n) * n + (i2 + 11) % n];
            }
        }
        let g = ScalarField::from_values(grid(), w).unwrap();
        let a = 0.45;
        assert!((holder_norm(&f, a) - holder_norm(&g, a)).abs() < 1e-10);
    }

    #[test]
    fn bernstein_ratio_for_single_blocks() {
        for (j, seed) in [(2, 5u64), (3, 6), (4, 7)] {
            let f = lp_block(&random_band_limited(grid(), 40, seed), j);
            let lam = ops::fractional_laplacian(&f, 1.0).unwrap();
            let ratio = lam.max_abs() / (2f64.powi(j) * f.max_abs());
            assert!((0.25..=4.0).contains(&ratio), "j = {j}: ratio {ratio}");
        }
    }

    #[test]
    fn c_n_norm_values() {
        let g = grid();
        let (v, warn) = c_n_norm(&ScalarField::from_fn(g, |x1, _| x1.cos()), 0);
        assert!((v - 1.0).abs() < 1e-10 && !warn);
        let lam = 9.0;
        let (v1, _) = c_n_norm(&ScalarField::from_fn(g, |x1, _| (lam * x1).cos()), 1);
        assert!((v1 - lam).abs() < lam * 1e-8, "{v1}");
        let (vz, _) = c_n_norm(&ScalarField::zeros(g), 4);
        assert_eq!(vz, 0.0);
        let (_, warn_hi) = c_n_norm(&ScalarField::zeros(g), 9);
        assert!(warn_hi, "2^9 exceeds cutoff 42 at n = 128");
    }
}
