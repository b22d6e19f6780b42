//! Backward flow maps of time-dependent velocities and transport-type
//! pseudo-spectral solves (method of lines, RK4).

use crate::error::{Result, SqgError};
use crate::grid::{Grid, ScalarField, SymTensorField, VectorField, TAU};
use crate::ops::{self, advect};
use crate::tensor::perp_div_div;

/// Linear combinations, for time interpolation of sampled fields.
pub trait FieldLike: Clone {
    fn lincomb(terms: &[(f64, &Self)]) -> Self;
}

impl FieldLike for ScalarField {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        let mut acc = terms[0].1.scale(terms[0].0);
        for (w, f) in &terms[1..] {
            acc = acc.add(&f.scale(*w));
        }
        acc
    }
}

impl FieldLike for VectorField {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        let c1: Vec<(f64, &ScalarField)> = terms.iter().map(|(w, f)| (*w, &f.c1)).collect();
        let c2: Vec<(f64, &ScalarField)> = terms.iter().map(|(w, f)| (*w, &f.c2)).collect();
        VectorField::new(ScalarField::lincomb(&c1), ScalarField::lincomb(&c2))
    }
}

impl FieldLike for SymTensorField {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        let r11: Vec<(f64, &ScalarField)> = terms.iter().map(|(w, f)| (*w, &f.r11)).collect();
        let r12: Vec<(f64, &ScalarField)> = terms.iter().map(|(w, f)| (*w, &f.r12)).collect();
        let r22: Vec<(f64, &ScalarField)> = terms.iter().map(|(w, f)| (*w, &f.r22)).collect();
        SymTensorField::new(
            ScalarField::lincomb(&r11),
            ScalarField::lincomb(&r12),
            ScalarField::lincomb(&r22),
        )
    }
}

/// Uniformly sampled time series of fields.
#[derive(Clone, Debug)]
pub struct TimeSampled<T> {
    t0: f64,
    dt: f64,
    items: Vec<T>,
}

impl<T: FieldLike> TimeSampled<T> {
    pub fn new(t0: f64, dt: f64, items: Vec<T>) -> Self {
        assert!(dt > 0.0 && !items.is_empty());
        TimeSampled { t0, dt, items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn t_start(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + self.dt * (self.items.len() - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.items.len()).map(|i| self.t0 + i as f64 * self.dt).collect()
    }

    pub fn time_of(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn at(&self, i: usize) -> &T {
        &self.items[i]
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 - 1e-12 && t <= self.t_end() + 1e-12
    }

    /// Cubic (4-point Lagrange) interpolation in time; clamped to one-sided
    /// stencils at the ends.
    pub fn eval(&self, t: f64) -> Result<T> {
        if !self.contains(t) {
            return Err(SqgError::WindowExceedsData {
                t0: t,
                t1: t,
                lo: self.t0,
                hi: self.t_end(),
            });
        }
        let m = self.items.len();
        if m == 1 {
            return Ok(self.items[0].clone());
        }
        let s = ((t - self.t0) / self.dt).clamp(0.0, (m - 1) as f64);
        let i1 = (s.floor() as usize).min(m - 2);
        if m < 4 {
            // linear fallback for very short series
            let u = s - i1 as f64;
            return Ok(T::lincomb(&[(1.0 - u, &self.items[i1]), (u, &self.items[i1 + 1])]));
        }
        let i0 = i1.saturating_sub(1).min(m - 4);
        let u = s - i0 as f64; // position in [0,3] relative to the stencil
        let mut w = [0.0f64; 4];
        for (j, wj) in w.iter_mut().enumerate() {
            let mut prod = 1.0;
            for l in 0..4 {
                if l != j {
                    prod *= (u - l as f64) / (j as f64 - l as f64);
                }
            }
            *wj = prod;
        }
        let terms: Vec<(f64, &T)> = (0..4).map(|j| (w[j], &self.items[i0 + j])).collect();
        Ok(T::lincomb(&terms))
    }
}

/// One time slice of a flow map: the periodic displacement Phi - x.
#[derive(Clone, Debug)]
pub struct FlowSnapshot {
    pub time: f64,
    pub disp: VectorField,
}

impl FlowSnapshot {
    pub fn identity(grid: Grid, time: f64) -> Self {
        FlowSnapshot { time, disp: VectorField::zeros(grid) }
    }

    /// grad(Phi) = Id + grad(disp), spectrally; returned as physical values
    /// [d1 Phi1, d2 Phi1, d1 Phi2, d2 Phi2].
    pub fn grad_values(&self) -> [Vec<f64>; 4] {
        let g11 = ops::deriv(&self.disp.c1, 0).values();
        let g12 = ops::deriv(&self.disp.c1, 1).values();
        let g21 = ops::deriv(&self.disp.c2, 0).values();
        let g22 = ops::deriv(&self.disp.c2, 1).values();
        let n2 = self.disp.grid().len();
        let mut out = [g11, g12, g21, g22];
        for i in 0..n2 {
            out[0][i] += 1.0;
            out[3][i] += 1.0;
        }
        out
    }

    /// Phase Phi(x) . xi = (x + disp(x)) . xi as physical values.
    pub fn phase_values(&self, xi: (i64, i64)) -> Vec<f64> {
        let grid = self.disp.grid();
        let n = grid.n();
        let d1 = self.disp.c1.values();
        let d2 = self.disp.c2.values();
        let mut out = vec![0.0; grid.len()];
        for i1 in 0..n {
            let x1 = grid.coord(i1);
            for i2 in 0..n {
                let idx = i1 * n + i2;
                let x2 = grid.coord(i2);
                out[idx] = (x1 + d1[idx]) * xi.0 as f64 + (x2 + d2[idx]) * xi.1 as f64;
            }
        }
        out
    }

    pub fn det_grad(&self) -> Vec<f64> {
        let g = self.grad_values();
        g[0].iter()
            .zip(&g[3])
            .zip(g[1].iter().zip(&g[2]))
            .map(|((a, d), (b, c))| a * d - b * c)
            .collect()
    }
}

/// Backward flow Phi_t of a velocity on a short window around its anchor.
#[derive(Clone, Debug)]
pub struct FlowMap {
    pub t_anchor: f64,
    pub times: Vec<f64>,
    pub snapshots: Vec<FlowSnapshot>,
    pub velocity_ref: String,
}

impl FlowMap {
    pub fn snapshot_at(&self, t: f64) -> Option<&FlowSnapshot> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() < 1e-10)
            .map(|i| &self.snapshots[i])
    }

    /// Interpolated displacement at an arbitrary window time.
    pub fn disp_at(&self, t: f64) -> Result<VectorField> {
        let lo = *self.times.first().unwrap();
        let hi = *self.times.last().unwrap();
        if t < lo - 1e-12 || t > hi + 1e-12 {
            return Err(SqgError::WindowExceedsData { t0: t, t1: t, lo, hi });
        }
        // locate bracketing samples (times ascending, uniform except possibly
        // a short first/last step); linear interpolation is enough here since
        // callers needing high accuracy sample exactly on stored times.
        let i = self
            .times
            .iter()
            .position(|&s| s >= t - 1e-12)
            .unwrap_or(self.times.len() - 1)
            .max(1);
        let (ta, tb) = (self.times[i - 1], self.times[i]);
        let u = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
        Ok(VectorField::lincomb(&[
            (1.0 - u, &self.snapshots[i - 1].disp),
            (u, &self.snapshots[i].disp),
        ]))
    }
}

fn cfl_check(grid: Grid, umax: f64, dt: f64) -> Result<()> {
    let cfl = dt * umax * grid.n() as f64 / TAU;
    if cfl >= 0.5 {
        return Err(SqgError::CflViolation { cfl });
    }
    Ok(())
}

fn max_speed(v: &TimeSampled<VectorField>) -> f64 {
    v.items().iter().map(|u| u.max_abs()).fold(0.0, f64::max)
}

/// d/ds of the backward-flow displacement: -(u . grad) D - u.
fn flow_rhs(u: &VectorField, d: &VectorField) -> VectorField {
    VectorField::new(
        advect(u, &d.c1).scale(-1.0).sub(&u.c1),
        advect(u, &d.c2).scale(-1.0).sub(&u.c2),
    )
}

fn rk4_vector(
    state: &VectorField,
    s: f64,
    dt: f64,
    velocity: &TimeSampled<VectorField>,
) -> Result<VectorField> {
    let u1 = velocity.eval(s)?;
    let k1 = flow_rhs(&u1, state);
    let u2 = velocity.eval(s + 0.5 * dt)?;
    let k2 = flow_rhs(&u2, &state.add(&k1.scale(0.5 * dt)));
    let k3 = flow_rhs(&u2, &state.add(&k2.scale(0.5 * dt)));
    let u4 = velocity.eval(s + dt)?;
    let k4 = flow_rhs(&u4, &state.add(&k3.scale(dt)));
    Ok(state.add(
        &k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4).scale(dt / 6.0),
    ))
}

/// Solve the backward flow d_s Phi + u . grad Phi = 0, Phi|_{s=t_anchor} = x,
/// marching both directions from the anchor and recording every step.
pub fn solve_backward_flow(
    velocity: &TimeSampled<VectorField>,
    t_anchor: f64,
    window: (f64, f64),
    dt: f64,
) -> Result<FlowMap> {
    let grid = velocity.at(0).grid();
    if window.0 < velocity.t_start() - 1e-12
        || window.1 > velocity.t_end() + 1e-12
        || t_anchor < window.0 - 1e-12
        || t_anchor > window.1 + 1e-12
    {
        return Err(SqgError::WindowExceedsData {
            t0: window.0,
            t1: window.1,
            lo: velocity.t_start(),
            hi: velocity.t_end(),
        });
    }
    cfl_check(grid, max_speed(velocity), dt)?;

    let mut fwd_times = vec![t_anchor];
    let mut fwd = vec![FlowSnapshot::identity(grid, t_anchor)];
    let mut s = t_anchor;
    let mut d = VectorField::zeros(grid);
    while s < window.1 - 1e-12 {
        let step = dt.min(window.1 - s);
        d = rk4_vector(&d, s, step, velocity)?;
        s += step;
        fwd_times.push(s);
        fwd.push(FlowSnapshot { time: s, disp: d.clone() });
    }

    let mut bwd_times = Vec::new();
    let mut bwd = Vec::new();
    s = t_anchor;
    d = VectorField::zeros(grid);
    while s > window.0 + 1e-12 {
        let step = (-dt).max(window.0 - s);
        d = rk4_vector(&d, s, step, velocity)?;
        s += step;
        bwd_times.push(s);
        bwd.push(FlowSnapshot { time: s, disp: d.clone() });
    }
    bwd.reverse();
    bwd_times.reverse();

    bwd_times.extend(fwd_times);
    bwd.extend(fwd);
    Ok(FlowMap {
        t_anchor,
        times: bwd_times,
        snapshots: bwd,
        velocity_ref: "velocity".into(),
    })
}

/// Right-hand side of the forced Newtonian linearization:
/// -(u_bar . grad) theta - T[theta] . grad theta_bar + forcing.
fn linearized_rhs(
    theta: &ScalarField,
    ubar: &VectorField,
    grad_theta_bar: &VectorField,
    forcing: Option<&ScalarField>,
) -> ScalarField {
    let w = ops::riesz_velocity(theta);
    let mut rhs = advect(ubar, theta).scale(-1.0);
    rhs = rhs.sub(&w.c1.mul_dealiased(&grad_theta_bar.c1));
    rhs = rhs.sub(&w.c2.mul_dealiased(&grad_theta_bar.c2));
    if let Some(f) = forcing {
        rhs = rhs.add(f);
    }
    rhs.project_mean_zero()
}

fn rk4_linearized(
    theta: &ScalarField,
    s: f64,
    dt: f64,
    theta_bar: &TimeSampled<ScalarField>,
    u_bar: &TimeSampled<VectorField>,
    forcing: Option<&TimeSampled<ScalarField>>,
) -> Result<ScalarField> {
    let eval_force = |t: f64| -> Result<Option<ScalarField>> {
        forcing.map(|f| f.eval(t)).transpose()
    };
    let gtb = |t: f64| -> Result<VectorField> { Ok(ops::gradient(&theta_bar.eval(t)?)) };

    let (u1, g1, f1) = (u_bar.eval(s)?, gtb(s)?, eval_force(s)?);
    let k1 = linearized_rhs(theta, &u1, &g1, f1.as_ref());
    let sh = s + 0.5 * dt;
    let (u2, g2, f2) = (u_bar.eval(sh)?, gtb(sh)?, eval_force(sh)?);
    let k2 = linearized_rhs(&theta.add(&k1.scale(0.5 * dt)), &u2, &g2, f2.as_ref());
    let k3 = linearized_rhs(&theta.add(&k2.scale(0.5 * dt)), &u2, &g2, f2.as_ref());
    let se = s + dt;
    let (u4, g4, f4) = (u_bar.eval(se)?, gtb(se)?, eval_force(se)?);
    let k4 = linearized_rhs(&theta.add(&k3.scale(dt)), &u4, &g4, f4.as_ref());
    Ok(theta.add(
        &k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4).scale(dt / 6.0),
    ))
}

/// Solve the forced Newtonian linearization of SQG by pseudo-spectral RK4.
///
/// The solution is anchored at `t0` with data `initial` and integrated in
/// both directions to cover `window`; samples are returned on the uniform
/// grid t0 + m dt intersected with the window.
#[allow(clippy::too_many_arguments)]
pub fn solve_linearized_sqg(
    theta_bar: &TimeSampled<ScalarField>,
    u_bar: &TimeSampled<VectorField>,
    forcing: Option<&TimeSampled<ScalarField>>,
    initial: &ScalarField,
    t0: f64,
    window: (f64, f64),
    dt: f64,
) -> Result<TimeSampled<ScalarField>> {
    let grid = initial.grid();
    cfl_check(grid, max_speed(u_bar), dt)?;
    if window.0 < u_bar.t_start() - 1e-12 || window.1 > u_bar.t_end() + 1e-12 {
        return Err(SqgError::WindowExceedsData {
            t0: window.0,
            t1: window.1,
            lo: u_bar.t_start(),
            hi: u_bar.t_end(),
        });
    }
    let forcing_scale = forcing.map_or(0.0, |f| {
        f.items().iter().map(|x| x.max_abs()).fold(0.0, f64::max)
    });
    let limit = 1e6 * initial.max_abs().max(forcing_scale).max(1e-3);
    let init = initial.project_mean_zero();

    let steps_back = ((t0 - window.0) / dt).round() as usize;
    let steps_fwd = ((window.1 - t0) / dt).round() as usize;

    let mut states = vec![init.clone()];
    let mut th = init.clone();
    for m in 0..steps_fwd {
        let s = t0 + m as f64 * dt;
        th = rk4_linearized(&th, s, dt, theta_bar, u_bar, forcing)?;
        if th.max_abs() > limit {
            return Err(SqgError::BlowUp { t: s + dt, norm: th.max_abs(), limit });
        }
        states.push(th.clone());
    }
    let mut back = Vec::new();
    th = init;
    for m in 0..steps_back {
        let s = t0 - m as f64 * dt;
        th = rk4_linearized(&th, s, -dt, theta_bar, u_bar, forcing)?;
        if th.max_abs() > limit {
            return Err(SqgError::BlowUp { t: s - dt, norm: th.max_abs(), limit });
        }
        back.push(th.clone());
    }
    back.reverse();
    back.extend(states);
    Ok(TimeSampled::new(t0 - steps_back as f64 * dt, dt, back))
}

/// Full nonlinear relaxed evolution d_t theta + T[theta].grad theta =
/// grad^perp . div R, for diagnostics.
pub fn sqg_step(
    initial: &ScalarField,
    t0: f64,
    window: (f64, f64),
    dt: f64,
    stress: Option<&TimeSampled<SymTensorField>>,
) -> Result<TimeSampled<ScalarField>> {
    let grid = initial.grid();
    let limit = 1e6 * initial.max_abs().max(1e-8);
    cfl_check(grid, initial.max_abs() * 1.5 + 1e-12, dt)?;
    assert!((t0 - window.0).abs() < 1e-12, "sqg_step integrates forward from t0 = window start");

    let rhs = |th: &ScalarField, t: f64| -> Result<ScalarField> {
        let u = ops::riesz_velocity(th);
        let mut r = advect(&u, th).scale(-1.0);
        if let Some(srs) = stress {
            r = r.add(&perp_div_div(&srs.eval(t)?));
        }
        Ok(r.project_mean_zero())
    };

    let steps = ((window.1 - window.0) / dt).round().max(1.0) as usize;
    let dt = (window.1 - window.0) / steps as f64;
    let mut th = initial.project_mean_zero();
    let mut out = vec![th.clone()];
    for m in 0..steps {
        let s = t0 + m as f64 * dt;
        let k1 = rhs(&th, s)?;
        let k2 = rhs(&th.add(&k1.scale(0.5 * dt)), s + 0.5 * dt)?;
        let k3 = rhs(&th.add(&k2.scale(0.5 * dt)), s + 0.5 * dt)?;
        let k4 = rhs(&th.add(&k3.scale(dt)), s + dt)?;
        th = th.add(&k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4).scale(dt / 6.0));
        if th.max_abs() > limit {
            return Err(SqgError::BlowUp { t: s + dt, norm: th.max_abs(), limit });
        }
        out.push(th.clone());
    }
    Ok(TimeSampled::new(t0, dt, out))
}

/// Periodic bicubic (Catmull-Rom) interpolation of grid values.
pub fn interp_bicubic(grid: Grid, values: &[f64], x1: f64, x2: f64) -> f64 {
    let n = grid.n() as i64;
    let h = grid.spacing();
    let wrap = |i: i64| -> usize { i.rem_euclid(n) as usize };
    let catmull = |p: [f64; 4], u: f64| -> f64 {
        0.5 * ((2.0 * p[1])
            + (-p[0] + p[2]) * u
            + (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) * u * u
            + (-p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3]) * u * u * u)
    };
    let g1 = (x1 / h).div_euclid(1.0) as i64;
    let u1 = (x1 / h) - g1 as f64;
    let g2 = (x2 / h).div_euclid(1.0) as i64;
    let u2 = (x2 / h) - g2 as f64;
    let mut col = [0.0; 4];
    for (a, cv) in col.iter_mut().enumerate() {
        let i1 = wrap(g1 + a as i64 - 1);
        let mut row = [0.0; 4];
        for (b, rv) in row.iter_mut().enumerate() {
            let i2 = wrap(g2 + b as i64 - 1);
            *rv = values[i1 * grid.n() + i2];
        }
        *cv = catmull(row, u2);
    }
    catmull(col, u1)
}

/// Lagrangian particle oracle: integrate dX/ds = u(X, s) from `t_from` to
/// `t_to` for a list of start points, with bicubic space and cubic time
/// interpolation of the sampled velocity.
pub fn lagrangian_positions(
    velocity: &TimeSampled<VectorField>,
    t_from: f64,
    t_to: f64,
    dt: f64,
    starts: &[(f64, f64)],
) -> Result<Vec<(f64, f64)>> {
    let grid = velocity.at(0).grid();
    let vel_values = |t: f64| -> Result<(Vec<f64>, Vec<f64>)> {
        let u = velocity.eval(t)?;
        Ok((u.c1.values(), u.c2.values()))
    };
    let mut pts: Vec<(f64, f64)> = starts.to_vec();
    let total = t_to - t_from;
    let nsteps = (total.abs() / dt).ceil().max(1.0) as usize;
    let step = total / nsteps as f64;
    let mut s = t_from;
    for _ in 0..nsteps {
        let (a1, a2) = vel_values(s)?;
        let (b1, b2) = vel_values(s + 0.5 * step)?;
        let (c1, c2) = vel_values(s + step)?;
        for p in pts.iter_mut() {
            let ev = |vals1: &[f64], vals2: &[f64], x: (f64, f64)| {
                (
                    interp_bicubic(grid, vals1, x.0, x.1),
                    interp_bicubic(grid, vals2, x.0, x.1),
                )
            };
            let k1 = ev(&a1, &a2, *p);
            let p2 = (p.0 + 0.5 * step * k1.0, p.1 + 0.5 * step * k1.1);
            let k2 = ev(&b1, &b2, p2);
            let p3 = (p.0 + 0.5 * step * k2.0, p.1 + 0.5 * step * k2.1);
            let k3 = ev(&b1, &b2, p3);
            let p4 = (p.0 + step * k3.0, p.1 + step * k3.1);
            let k4 = ev(&c1, &c2, p4);
            p.0 += step / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            p.1 += step / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        s += step;
    }
    Ok(pts)
}

/// Constant-in-time series helper.
pub fn steady<T: FieldLike>(item: T, t0: f64, t1: f64, dt: f64) -> TimeSampled<T> {
    let m = ((t1 - t0) / dt).round() as usize + 1;
    TimeSampled::new(t0, dt, vec![item; m.max(2)])
}
