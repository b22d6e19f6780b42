//! One audited family of C-infinity cutoffs used everywhere a smooth bump,
//! step, or annulus profile is required.

/// exp(-1/x) for x > 0, else 0. Smooth on all of R.
#[inline]
pub fn h(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

#[inline]
fn h_prime(x: f64) -> f64 {
    if x > 0.0 {
        h(x) / (x * x)
    } else {
        0.0
    }
}

/// Smooth step: 0 for x <= 0, 1 for x >= 1, with step(1 - x) = 1 - step(x).
#[inline]
pub fn step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = h(x);
        a / (a + h(1.0 - x))
    }
}

/// Derivative of [`step`].
#[inline]
pub fn step_prime(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let a = h(x);
        let b = h(1.0 - x);
        let s = a + b;
        (h_prime(x) * b + a * h_prime(1.0 - x)) / (s * s)
    }
}

/// Plateau profile: 1 on [lo1, hi1], 0 outside (lo0, hi0), smooth between.
/// Requires lo0 < lo1 <= hi1 < hi0.
#[derive(Clone, Copy, Debug)]
pub struct Plateau {
    pub lo0: f64,
    pub lo1: f64,
    pub hi1: f64,
    pub hi0: f64,
}

impl Plateau {
    pub fn eval(&self, r: f64) -> f64 {
        step((r - self.lo0) / (self.lo1 - self.lo0)) * step((self.hi0 - r) / (self.hi0 - self.hi1))
    }

    pub fn eval_prime(&self, r: f64) -> f64 {
        let wl = self.lo1 - self.lo0;
        let wr = self.hi0 - self.hi1;
        step_prime((r - self.lo0) / wl) / wl * step((self.hi0 - r) / wr)
            - step((r - self.lo0) / wl) * step_prime((self.hi0 - r) / wr) / wr
    }
}

/// Littlewood-Paley radial profile: 1 on [0, 1], 0 beyond 3/2, nonincreasing.
#[inline]
pub fn psi_lp(r: f64) -> f64 {
    step((1.5 - r) * 2.0)
}

/// Mollifier symbol: 1 on [0, 1], 0 beyond 2.
#[inline]
pub fn zeta_hat(r: f64) -> f64 {
    step(2.0 - r)
}

/// Inner radius of the annulus A containing xi/2 for all basis directions.
pub const ANNULUS_INNER: f64 = 0.5;
/// Outer radius of A, containing 2 xi for all basis directions (= 2 sqrt 2).
pub const ANNULUS_OUTER: f64 = 2.828_427_124_746_190_3;

/// Nash projection profile chi: 1 on A = [1/2, 2 sqrt 2], supported in the
/// slightly larger annulus A'.
pub fn chi_annulus() -> Plateau {
    Plateau { lo0: 0.40, lo1: ANNULUS_INNER, hi1: 2.8285, hi0: 2.95 }
}

/// Enlarged profile chi-tilde: 1 on A'' (covering supp chi), supported in A'''.
pub fn chi_annulus_enlarged() -> Plateau {
    Plateau { lo0: 0.33, lo1: 0.40, hi1: 2.95, hi0: 3.08 }
}

/// Even temporal mollifier with unit integral, supported in (-1, 1).
pub fn rho(s: f64) -> f64 {
    // integral of exp(-1/(1-s^2)) over (-1,1)
    const MASS: f64 = 0.443_993_816_168_079_37;
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp() / MASS
    } else {
        0.0
    }
}
