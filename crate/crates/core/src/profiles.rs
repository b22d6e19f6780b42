//! Time cutoffs and oscillatory profiles of the decoupling machinery: the
//! squared partition of unity chi_k, the localizers chi-tilde_k, and the
//! disjointly supported 1-periodic oscillators g with unit L^2 mass.

use crate::bump::{step, step_prime, Plateau};
use crate::error::{Result, SqgError};

/// Identifies one oscillator: direction index, parity slot (0 even / 1 odd),
/// and Newton level n in 1..=Gamma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OscKey {
    pub xi_index: usize,
    pub parity: usize,
    pub level: usize,
}

/// The oscillator bump shape on [0, 1]: supported in the interior 80% of the
/// slot, plateau in the middle.
fn osc_bump() -> Plateau {
    Plateau { lo0: 0.10, lo1: 0.45, hi1: 0.55, hi0: 0.90 }
}

const CUM_SUBDIV: usize = 256;

/// Gauss-Legendre 8-point rule on [0, 1].
const GL8_X: [f64; 8] = [
    0.019_855_071_751_231_86,
    0.101_666_761_293_186_63,
    0.237_233_795_041_835_5,
    0.408_282_678_752_175_05,
    0.591_717_321_247_825,
    0.762_766_204_958_164_5,
    0.898_333_238_706_813_3,
    0.980_144_928_248_768_1,
];
const GL8_W: [f64; 8] = [
    0.050_614_268_145_188_13,
    0.111_190_517_226_687_24,
    0.156_853_322_938_943_62,
    0.181_341_891_689_181_0,
    0.181_341_891_689_181_0,
    0.156_853_322_938_943_62,
    0.111_190_517_226_687_24,
    0.050_614_268_145_188_13,
];

fn gl8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = b - a;
    GL8_X.iter().zip(GL8_W.iter()).map(|(&x, &w)| w * f(a + x * h)).sum::<f64>() * h
}

/// Temporal cutoffs and oscillators for one stage.
#[derive(Clone, Debug)]
pub struct TemporalProfileSet {
    tau: f64,
    gamma: usize,
    n_dirs: usize,
    slot_width: f64,
    /// 1 / (slot_width * int_0^1 p^2), so that int g^2 over the slot is 1.
    norm_sq: f64,
    /// cumulative table of int_0^v p^2 at v = j / CUM_SUBDIV
    cum_p2: Vec<f64>,
    int_p2: f64,
}

impl TemporalProfileSet {
    /// Build profiles for `n_dirs` directions, `gamma` Newton levels, and the
    /// cutoff time scale `tau`. [0,1) is split into n_dirs * 2 * gamma equal
    /// slots, one disjoint oscillator per slot.
    pub fn build(n_dirs: usize, gamma: usize, tau: f64) -> Result<Self> {
        if n_dirs == 0 || gamma == 0 || tau <= 0.0 {
            return Err(SqgError::InvalidParameter(format!(
                "profiles need n_dirs, gamma >= 1 and tau > 0 (got {n_dirs}, {gamma}, {tau})"
            )));
        }
        let p = osc_bump();
        let mut cum = Vec::with_capacity(CUM_SUBDIV + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for j in 0..CUM_SUBDIV {
            let a = j as f64 / CUM_SUBDIV as f64;
            let b = (j + 1) as f64 / CUM_SUBDIV as f64;
            acc += gl8(|v| p.eval(v).powi(2), a, b);
            cum.push(acc);
        }
        let int_p2 = acc;
        let slot_width = 1.0 / (n_dirs * 2 * gamma) as f64;
        Ok(TemporalProfileSet {
            tau,
            gamma,
            n_dirs,
            slot_width,
            norm_sq: 1.0 / (slot_width * int_p2),
            cum_p2: cum,
            int_p2,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn n_dirs(&self) -> usize {
        self.n_dirs
    }

    pub fn key_for(&self, xi_index: usize, k: i64, level: usize) -> OscKey {
        OscKey { xi_index, parity: (k.rem_euclid(2)) as usize, level }
    }

    fn slot_index(&self, key: OscKey) -> Result<usize> {
        if key.xi_index >= self.n_dirs || key.parity > 1 || key.level == 0 || key.level > self.gamma
        {
            return Err(SqgError::UnknownKey {
                xi: key.xi_index,
                parity: key.parity,
                n: key.level,
            });
        }
        Ok(((key.level - 1) * self.n_dirs + key.xi_index) * 2 + key.parity)
    }

    /// Slot-local coordinate of the 1-periodic argument s.
    fn slot_coord(&self, key: OscKey, s: f64) -> Result<f64> {
        let slot = self.slot_index(key)? as f64;
        let frac = s.rem_euclid(1.0);
        Ok((frac - slot * self.slot_width) / self.slot_width)
    }

    /// Oscillator g_key(s), 1-periodic in s with unit L^2(0,1) mass.
    pub fn g(&self, key: OscKey, s: f64) -> Result<f64> {
        let v = self.slot_coord(key, s)?;
        if !(0.0..1.0).contains(&v) {
            return Ok(0.0);
        }
        Ok(osc_bump().eval(v) * self.norm_sq.sqrt())
    }

    /// d/ds of g_key(s).
    pub fn g_prime(&self, key: OscKey, s: f64) -> Result<f64> {
        let v = self.slot_coord(key, s)?;
        if !(0.0..1.0).contains(&v) {
            return Ok(0.0);
        }
        Ok(osc_bump().eval_prime(v) * self.norm_sq.sqrt() / self.slot_width)
    }

    /// f = 1 - g^2.
    pub fn f(&self, key: OscKey, s: f64) -> Result<f64> {
        Ok(1.0 - self.g(key, s)?.powi(2))
    }

    /// Periodic primitive f^[1](s) = int_0^s f, well defined because
    /// int_0^1 g^2 = 1.
    pub fn f_prim(&self, key: OscKey, s: f64) -> Result<f64> {
        let slot = self.slot_index(key)? as f64;
        let periods = s.div_euclid(1.0);
        let frac = s - periods;
        let v = ((frac - slot * self.slot_width) / self.slot_width).clamp(0.0, 1.0);
        // cumulative int_0^v p^2 from the table plus a partial GL-8 tail
        let pos = v * CUM_SUBDIV as f64;
        let j = (pos.floor() as usize).min(CUM_SUBDIV - 1);
        let a = j as f64 / CUM_SUBDIV as f64;
        let p = osc_bump();
        let cum = self.cum_p2[j] + gl8(|u| p.eval(u).powi(2), a, v);
        Ok(frac - cum / self.int_p2)
    }

    /// Squared-partition cutoff chi_k(t), centered at t_k = k tau with
    /// support (t_k - 2tau/3, t_k + 2tau/3).
    pub fn chi(&self, k: i64, t: f64) -> f64 {
        let u = ((t - k as f64 * self.tau) / self.tau).abs();
        if u <= 1.0 / 3.0 {
            1.0
        } else if u >= 2.0 / 3.0 {
            0.0
        } else {
            (std::f64::consts::FRAC_PI_2 * step(3.0 * u - 1.0)).cos()
        }
    }

    /// d/dt chi_k(t).
    pub fn chi_prime(&self, k: i64, t: f64) -> f64 {
        let u = (t - k as f64 * self.tau) / self.tau;
        let au = u.abs();
        if !(1.0 / 3.0..2.0 / 3.0).contains(&au) {
            return 0.0;
        }
        let arg = 3.0 * au - 1.0;
        let d = -(std::f64::consts::FRAC_PI_2 * step(arg)).sin()
            * std::f64::consts::FRAC_PI_2
            * 3.0
            * step_prime(arg)
            / self.tau;
        d * u.signum()
    }

    /// Localizer chi-tilde_k(t): 1 on supp chi_k, supported in (t_k - tau, t_k + tau).
    pub fn chi_tilde(&self, k: i64, t: f64) -> f64 {
        let u = ((t - k as f64 * self.tau) / self.tau).abs();
        step(3.0 * (1.0 - u))
    }

    pub fn chi_tilde_prime(&self, k: i64, t: f64) -> f64 {
        let u = (t - k as f64 * self.tau) / self.tau;
        let au = u.abs();
        if !(2.0 / 3.0..1.0).contains(&au) {
            return 0.0;
        }
        -3.0 * step_prime(3.0 * (1.0 - au)) / self.tau * u.signum()
    }

    /// Second derivative of chi-tilde (needed for exact d_t of the glued
    /// stresses); computed by a tight central stencil on the analytic first
    /// derivative.
    pub fn chi_tilde_second(&self, k: i64, t: f64) -> f64 {
        let e = 1e-6 * self.tau;
        (self.chi_tilde_prime(k, t + e) - self.chi_tilde_prime(k, t - e)) / (2.0 * e)
    }

    /// CSV sample of an oscillator over one period: `t,value`.
    pub fn oscillator_csv(&self, key: OscKey, samples: usize) -> Result<String> {
        let mut out = String::from("t,value\n");
        for i in 0..samples {
            let s = i as f64 / samples as f64;
            out.push_str(&format!("{},{}\n", s, self.g(key, s)?));
        }
        Ok(out)
    }

    /// CSV sample of chi_k over its support: `t,value`.
    pub fn cutoff_csv(&self, k: i64, samples: usize) -> String {
        let mut out = String::from("t,value\n");
        let t0 = k as f64 * self.tau - self.tau;
        for i in 0..=samples {
            let t = t0 + 2.0 * self.tau * i as f64 / samples as f64;
            out.push_str(&format!("{},{}\n", t, self.chi(k, t)));
        }
        out
    }
}
