//! Spatial Fourier mollification, the Nash annulus projections, and
//! mollification along the flow.

use crate::bump::{chi_annulus, chi_annulus_enlarged, rho, zeta_hat};
use crate::error::{Result, SqgError};
use crate::flow::{interp_bicubic, FieldLike, TimeSampled};
use crate::grid::{ScalarField, SymTensorField, VectorField};
use crate::ops;

/// P_{<~ 1/ell}: multiplier zeta-hat(|k| ell), 1 below 1/ell, 0 above 2/ell.
pub fn spatial_mollify(f: &ScalarField, ell: f64) -> ScalarField {
    assert!(ell > 0.0, "mollification length must be positive");
    ops::radial_multiplier(f, |r| zeta_hat(r * ell))
}

pub fn spatial_mollify_vector(v: &VectorField, ell: f64) -> VectorField {
    VectorField::new(spatial_mollify(&v.c1, ell), spatial_mollify(&v.c2, ell))
}

pub fn spatial_mollify_tensor(r: &SymTensorField, ell: f64) -> SymTensorField {
    SymTensorField::new(
        spatial_mollify(&r.r11, ell),
        spatial_mollify(&r.r12, ell),
        spatial_mollify(&r.r22, ell),
    )
}

/// Annulus projection P_{~lambda} (or the enlarged variant): multiplier
/// chi(|k|/lambda) with chi = 1 on the annulus A of the direction basis.
pub fn annulus_project(f: &ScalarField, lambda: i64, enlarged: bool) -> ScalarField {
    assert!(lambda >= 1);
    let profile = if enlarged { chi_annulus_enlarged() } else { chi_annulus() };
    let lam = lambda as f64;
    ops::radial_multiplier(f, |r| profile.eval(r / lam))
}

/// Gauss-Legendre nodes and weights on [-1, 1] (16 points).
const GL16_X: [f64; 16] = [
    -0.989_400_934_991_649_9,
    -0.944_575_023_073_232_6,
    -0.865_631_202_387_831_7,
    -0.755_404_408_355_003_0,
    -0.617_876_244_402_643_7,
    -0.458_016_777_657_227_4,
    -0.281_603_550_779_258_9,
    -0.095_012_509_837_637_44,
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003_0,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_W: [f64; 16] = [
    0.027_152_459_411_754_095,
    0.062_253_523_938_647_89,
    0.095_158_511_682_492_78,
    0.124_628_971_255_533_87,
    0.149_595_988_816_576_73,
    0.169_156_519_395_002_54,
    0.182_603_415_044_923_59,
    0.189_450_610_455_068_5,
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_59,
    0.169_156_519_395_002_54,
    0.149_595_988_816_576_73,
    0.124_628_971_255_533_87,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_095,
];

/// Quadrature nodes (offsets s) and rho_{ell_t}-weights for the temporal
/// mollifier, normalized to unit mass exactly.
pub(crate) fn rho_quadrature(ell_t: f64) -> Vec<(f64, f64)> {
    let mut nodes: Vec<(f64, f64)> = GL16_X
        .iter()
        .zip(GL16_W.iter())
        .map(|(&x, &w)| (x * ell_t, w * rho(x)))
        .collect();
    let mass: f64 = nodes.iter().map(|(_, w)| w).sum();
    for (_, w) in nodes.iter_mut() {
        *w /= mass;
    }
    nodes
}

/// Lagrangian trajectory positions X_t(x, t + s) for all grid points at the
/// requested offsets (ascending in |s| per sign), integrated with RK4 and
/// bicubic velocity interpolation.
pub(crate) fn trajectory_positions(
    velocity: &TimeSampled<VectorField>,
    t: f64,
    offsets: &[f64],
    substep: f64,
) -> Result<Vec<Vec<(f64, f64)>>> {
    let grid = velocity.at(0).grid();
    let n = grid.n();
    let mut start = Vec::with_capacity(grid.len());
    for i1 in 0..n {
        for i2 in 0..n {
            start.push((grid.coord(i1), grid.coord(i2)));
        }
    }
    let mut out: Vec<Vec<(f64, f64)>> = vec![Vec::new(); offsets.len()];
    for dir in [-1.0f64, 1.0] {
        let mut wanted: Vec<(usize, f64)> = offsets
            .iter()
            .enumerate()
            .filter(|(_, &s)| if dir > 0.0 { s >= 0.0 } else { s < 0.0 })
            .map(|(i, &s)| (i, s))
            .collect();
        wanted.sort_by(|a, b| (a.1 * dir).partial_cmp(&(b.1 * dir)).unwrap());
        let mut pts = start.clone();
        let mut s_now = 0.0f64;
        for (idx, s_target) in wanted {
            while (s_target - s_now).abs() > 1e-14 {
                let step = dir * substep.min((s_target - s_now).abs());
                let t_now = t + s_now;
                let (a1, a2) = {
                    let u = velocity.eval(t_now)?;
                    (u.c1.values(), u.c2.values())
                };
                let (b1, b2) = {
                    let u = velocity.eval(t_now + 0.5 * step)?;
                    (u.c1.values(), u.c2.values())
                };
                let (c1, c2) = {
                    let u = velocity.eval(t_now + step)?;
                    (u.c1.values(), u.c2.values())
                };
                for p in pts.iter_mut() {
                    let ev = |v1: &[f64], v2: &[f64], x: (f64, f64)| {
                        (interp_bicubic(grid, v1, x.0, x.1), interp_bicubic(grid, v2, x.0, x.1))
                    };
                    let k1 = ev(&a1, &a2, *p);
                    let k2 = ev(&b1, &b2, (p.0 + 0.5 * step * k1.0, p.1 + 0.5 * step * k1.1));
                    let k3 = ev(&b1, &b2, (p.0 + 0.5 * step * k2.0, p.1 + 0.5 * step * k2.1));
                    let k4 = ev(&c1, &c2, (p.0 + step * k3.0, p.1 + step * k3.1));
                    p.0 += step / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                    p.1 += step / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
                }
                s_now += step;
            }
            out[idx] = pts.clone();
        }
    }
    Ok(out)
}

/// Mollification along the flow: R-bar(x, t) = integral of
/// R(X_t(x, t+s), t+s) rho_{ell_t}(s) ds over |s| < ell_t.
///
/// Output samples are the input samples with a full ell_t margin on both
/// sides; componentwise means are reset to the rho-weighted input means
/// (the analytic operation preserves them since the flow is measure
/// preserving).
pub fn flow_mollify(
    r: &TimeSampled<SymTensorField>,
    velocity: &TimeSampled<VectorField>,
    ell_t: f64,
) -> Result<TimeSampled<SymTensorField>> {
    let have = (r.t_end() - r.t_start()) / 2.0;
    if ell_t <= 0.0 || ell_t > have {
        return Err(SqgError::TimeMargin { need: ell_t, have });
    }
    let valid: Vec<f64> = (0..r.len())
        .map(|i| r.time_of(i))
        .filter(|&t| {
            t - ell_t >= r.t_start() - 1e-12
                && t + ell_t <= r.t_end() + 1e-12
                && t - ell_t >= velocity.t_start() - 1e-12
                && t + ell_t <= velocity.t_end() + 1e-12
        })
        .collect();
    if valid.is_empty() {
        return Err(SqgError::TimeMargin { need: ell_t, have });
    }
    let items = flow_mollify_at(r, velocity, ell_t, &valid)?;
    Ok(TimeSampled::new(valid[0], r.dt(), items))
}

/// [`flow_mollify`] evaluated at selected output times only.
pub fn flow_mollify_at(
    r: &TimeSampled<SymTensorField>,
    velocity: &TimeSampled<VectorField>,
    ell_t: f64,
    times: &[f64],
) -> Result<Vec<SymTensorField>> {
    let grid = r.at(0).grid();
    let nodes = rho_quadrature(ell_t);
    let offsets: Vec<f64> = nodes.iter().map(|(s, _)| *s).collect();
    let substep = (ell_t / 4.0)
        .min(0.25 / (velocity_max(velocity) + 1e-12) * crate::grid::TAU / grid.n() as f64);

    let mut out_items = Vec::new();
    for &t in times {
        if t - ell_t < r.t_start() - 1e-12
            || t + ell_t > r.t_end() + 1e-12
            || t - ell_t < velocity.t_start() - 1e-12
            || t + ell_t > velocity.t_end() + 1e-12
        {
            return Err(SqgError::TimeMargin {
                need: ell_t,
                have: (t - r.t_start()).min(r.t_end() - t),
            });
        }
        let traj = trajectory_positions(velocity, t, &offsets, substep)?;
        let mut acc = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
        let mut mean_acc = [0.0f64; 3];
        for (m, (s, w)) in nodes.iter().enumerate() {
            let rt = r.eval(t + s)?;
            let comps = [rt.r11.values(), rt.r12.values(), rt.r22.values()];
            for c in 0..3 {
                mean_acc[c] += w * comps[c].iter().sum::<f64>() / grid.len() as f64;
                for (k, pos) in traj[m].iter().enumerate() {
                    acc[c][k] += w * interp_bicubic(grid, &comps[c], pos.0, pos.1);
                }
            }
        }
        // reset means to the weighted input means
        let fields: Vec<ScalarField> = (0..3)
            .map(|c| {
                let cur = acc[c].iter().sum::<f64>() / grid.len() as f64;
                let shift = mean_acc[c] - cur;
                let vals: Vec<f64> = acc[c].iter().map(|v| v + shift).collect();
                ScalarField::from_values(grid, vals).expect("finite")
            })
            .collect();
        out_items
            .push(SymTensorField::new(fields[0].clone(), fields[1].clone(), fields[2].clone()));
    }
    Ok(out_items)
}

fn velocity_max(v: &TimeSampled<VectorField>) -> f64 {
    v.items().iter().map(|u| u.max_abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::steady;
    use crate::grid::Grid;
    use crate::lp::c_n_norm;
    use crate::testkit::{random_band_limited, random_mean_zero};

    fn grid() -> Grid {
        Grid::new(128).unwrap()
    }

    #[test]
    fn mollifier_pass_and_stop_bands() {
        let ell = 1.0 / 8.0;
        // all |k| <= 1/ell = 8 pass untouched
        let f = random_band_limited(grid(), 5, 21);
        assert!(spatial_mollify(&f, ell).max_diff(&f) < 1e-13);
        // m >= 2/ell = 16 is annihilated
        let g = ScalarField::from_fn(grid(), |x1, _| (17.0 * x1).cos());
        assert!(spatial_mollify(&g, ell).max_abs() < 1e-13);
    }

    #[test]
    fn mollifier_commutes_with_multipliers() {
        let f = random_mean_zero(grid(), 20, 33);
        let a = spatial_mollify(&ops::deriv(&f, 0), 0.1);
        let b = ops::deriv(&spatial_mollify(&f, 0.1), 0);
        assert!(a.max_diff(&b) < 1e-12 * a.max_abs().max(1.0));
    }

    #[test]
    fn mollification_error_ratio_monitor() {
        // |f - P f|_0 <= C ell^2 |f|_2 with a tame constant
        for seed in [1u64, 2, 3] {
            let f = random_band_limited(grid(), 24, seed);
            let (n2, _) = c_n_norm(&f, 2);
            for ell in [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
                let err = f.sub(&spatial_mollify(&f, ell)).max_abs();
                let ratio = err / (ell * ell * n2);
                assert!(ratio <= 10.0, "mollification ratio {ratio} at ell {ell}");
            }
        }
    }

    #[test]
    fn annulus_projection_bands() {
        let lam = 16i64;
        let f = ScalarField::from_fn(grid(), |x1, _| (16.0 * x1).cos());
        assert!(annulus_project(&f, lam, false).max_diff(&f) < 1e-13, "|xi| = 1 direction");
        let low = ScalarField::from_fn(grid(), |x1, _| x1.cos());
        assert!(annulus_project(&low, 64, false).max_abs() < 1e-13, "far below annulus");
    }

    #[test]
    fn enlarged_projection_is_identity_on_projected() {
        let f = random_mean_zero(grid(), 40, 77);
        let p = annulus_project(&f, 12, false);
        let pp = annulus_project(&p, 12, true);
        assert!(pp.max_diff(&p) < 1e-12, "P-tilde of P must reproduce P");
        // and P is a projection on its pass band
        let p2 = annulus_project(&p, 12, false);
        let band = ops::radial_multiplier(&f, |r| {
            let c = crate::bump::chi_annulus();
            if c.eval(r / 12.0) == 1.0 {
                1.0
            } else {
                0.0
            }
        });
        let pband = annulus_project(&band, 12, false);
        assert!(pband.max_diff(&band) < 1e-12, "projection on the pass band");
        let _ = p2;
    }

    #[test]
    fn flow_mollify_constant_in_time() {
        let g = Grid::new(64).unwrap();
        let r0 = SymTensorField::new(
            random_mean_zero(g, 4, 1),
            random_mean_zero(g, 4, 2),
            random_mean_zero(g, 4, 3),
        );
        let r = steady(r0.clone(), -0.5, 0.5, 0.05);
        let v = steady(VectorField::zeros(g), -0.5, 0.5, 0.05);
        let rbar = flow_mollify(&r, &v, 0.1).unwrap();
        for i in 0..rbar.len() {
            assert!(rbar.at(i).r11.max_diff(&r0.r11) < 1e-10);
            assert!(rbar.at(i).r12.max_diff(&r0.r12) < 1e-10);
        }
    }

    #[test]
    fn flow_mollify_kills_linear_drift() {
        let g = Grid::new(64).unwrap();
        let rhat = random_mean_zero(g, 4, 9);
        let dt = 0.05;
        let items: Vec<SymTensorField> = (0..21)
            .map(|i| {
                let t = -0.5 + i as f64 * dt;
                SymTensorField::new(rhat.scale(t), ScalarField::zeros(g), rhat.scale(-t))
            })
            .collect();
        let r = TimeSampled::new(-0.5, dt, items);
        let v = steady(VectorField::zeros(g), -0.5, 0.5, 0.05);
        let rbar = flow_mollify(&r, &v, 0.08).unwrap();
        // symmetric mollifier: odd moment vanishes, R-bar = R at interior times
        for i in 0..rbar.len() {
            let t = rbar.time_of(i);
            assert!(
                rbar.at(i).r11.max_diff(&rhat.scale(t)) < 1e-8,
                "linear drift must survive untouched at t = {t}"
            );
        }
    }

    #[test]
    fn flow_mollify_transported_tensor_invariance() {
        // if D_t R = 0 (R advected by the same velocity), then R-bar = R
        let g = Grid::new(256).unwrap();
        let psi = random_mean_zero(g, 3, 41).scale(0.3);
        let u = ops::perp_gradient(&psi);
        let v = steady(u.clone(), -0.15, 0.15, 0.01);
        let dt = 0.005;
        // advect each component: pure transport = linearized solve with theta_bar = 0
        let zero_t = steady(ScalarField::zeros(g), -0.15, 0.15, 0.05);
        let comp = |f0: &ScalarField| {
            crate::flow::solve_linearized_sqg(&zero_t, &v, None, f0, -0.15, (-0.15, 0.15), dt)
                .unwrap()
        };
        let c11 = comp(&random_mean_zero(g, 3, 51));
        let c12 = comp(&random_mean_zero(g, 3, 52));
        let items: Vec<SymTensorField> = (0..c11.len())
            .map(|i| {
                SymTensorField::new(c11.at(i).clone(), c12.at(i).clone(), c11.at(i).scale(-1.0))
            })
            .collect();
        let r = TimeSampled::new(-0.15, dt, items);
        let ell_t = 0.05;
        let probe = [-0.05, 0.0, 0.06];
        let rbar = flow_mollify_at(&r, &v, ell_t, &probe).unwrap();
        let mut worst = 0.0f64;
        for (i, &t) in probe.iter().enumerate() {
            let j = ((t - r.t_start()) / dt).round() as usize;
            worst = worst.max(rbar[i].r11.max_diff(&r.at(j).r11));
            worst = worst.max(rbar[i].r12.max_diff(&r.at(j).r12));
        }
        assert!(worst < 1e-5, "transported-tensor invariance error {worst}");
    }

    #[test]
    fn flow_mollify_preserves_symmetry_and_means() {
        let g = Grid::new(64).unwrap();
        let mk = |s| random_band_limited(g, 4, s);
        let r0 = SymTensorField::new(mk(61), mk(62), mk(63));
        let r = steady(r0.clone(), -0.3, 0.3, 0.03);
        let psi = random_mean_zero(g, 3, 64);
        let v = steady(ops::perp_gradient(&psi), -0.3, 0.3, 0.03);
        let rbar = flow_mollify(&r, &v, 0.05).unwrap();
        for i in 0..rbar.len() {
            assert!((rbar.at(i).r11.mean() - r0.r11.mean()).abs() < 1e-10);
            assert!((rbar.at(i).r12.mean() - r0.r12.mean()).abs() < 1e-10);
            assert!((rbar.at(i).r22.mean() - r0.r22.mean()).abs() < 1e-10);
        }
    }

    #[test]
    fn flow_mollify_requires_margin() {
        let g = Grid::new(64).unwrap();
        let r = steady(SymTensorField::zeros(g), 0.0, 0.1, 0.05);
        let v = steady(VectorField::zeros(g), 0.0, 0.1, 0.05);
        assert!(matches!(flow_mollify(&r, &v, 0.2), Err(SqgError::TimeMargin { .. })));
    }
}
