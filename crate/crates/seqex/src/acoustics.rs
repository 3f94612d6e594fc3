//! Sequential-explicit steppers for linear acoustics
//!
//! ```text
//!   d/dt p = -c^2 (dx u + dy v),   d/dt u = -(1/eps^2) dx p,
//!                                  d/dt v = -(1/eps^2) dy p
//! ```
//!
//! Up to the renaming `u = -Ey, v = Ex, p = -Bz` and the two scalar factors,
//! this is the transverse-magnetic Maxwell system, and the steppers here are
//! the Maxwell steppers under that renaming: p is updated first from the
//! velocity divergence, then the velocity from the fresh p. With `c = eps = 1`
//! the renamed trajectories coincide bitwise with the Maxwell ones.
//!
//! The conserved curl involution of the Maxwell side becomes a conserved
//! discrete vorticity; the spectra only rescale, at the effective Courant
//! ratio `(c/eps) dt/dx`.

use crate::grid::{fill_ghosts, Field, Grid, GridError, Layout};
use crate::maxwell::{op_dpx, op_dpy, op_dx, op_dy};
use crate::scheme::SchemeId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AcousticsError {
    #[error("time step must be positive, got {0}")]
    NonPositiveDt(f64),
    #[error("{name} must be positive and finite, got {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("{0} has no acoustic form")]
    Unsupported(SchemeId),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Sound speed `c` and the stiffness scaling `eps`; the acoustic signal
/// speed is `c / eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcousticParams {
    pub c: f64,
    pub eps: f64,
}

impl AcousticParams {
    pub fn new(c: f64, eps: f64) -> Result<AcousticParams, AcousticsError> {
        for (name, value) in [("sound speed", c), ("eps", eps)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(AcousticsError::BadParameter { name, value });
            }
        }
        Ok(AcousticParams { c, eps })
    }

    /// Largest stable step on `grid` for `scheme` at Courant safety `cfl`.
    pub fn max_dt(&self, scheme: SchemeId, grid: &Grid, cfl: f64) -> f64 {
        cfl * scheme.cfl_max() * grid.dx.min(grid.dy) * self.eps / self.c
    }
}

/// Scheme layouts in acoustic variable order (p, u, v): the renaming sends
/// Bz to p, Ey to u and Ex to v, swapping the two E layouts.
fn layouts_pud(scheme: SchemeId) -> Option<[Layout; 3]> {
    scheme.layouts_2d().map(|l| [l[0], l[2], l[1]])
}

fn supported(scheme: SchemeId) -> Result<(), AcousticsError> {
    if scheme.is_sequential_explicit() && !scheme.is_three_d() {
        Ok(())
    } else {
        Err(AcousticsError::Unsupported(scheme))
    }
}

#[derive(Debug, Clone)]
pub struct AcousticState2 {
    pub scheme: SchemeId,
    pub p: Field,
    pub u: Field,
    pub v: Field,
}

impl AcousticState2 {
    pub fn new(scheme: SchemeId, grid: &Grid) -> Result<AcousticState2, AcousticsError> {
        supported(scheme)?;
        let l = layouts_pud(scheme).expect("2D scheme");
        Ok(AcousticState2 {
            scheme,
            p: Field::new(grid, l[0]),
            u: Field::new(grid, l[1]),
            v: Field::new(grid, l[2]),
        })
    }

    /// Sample analytic (p, u, v) functions of (x, y) at the layout positions.
    pub fn from_fns(
        scheme: SchemeId,
        grid: &Grid,
        fp: impl Fn(f64, f64) -> f64,
        fu: impl Fn(f64, f64) -> f64,
        fv: impl Fn(f64, f64) -> f64,
    ) -> Result<AcousticState2, AcousticsError> {
        supported(scheme)?;
        let l = layouts_pud(scheme).expect("2D scheme");
        let mut state = AcousticState2 {
            scheme,
            p: Field::from_fn(grid, l[0], |x, y, _| fp(x, y)),
            u: Field::from_fn(grid, l[1], |x, y, _| fu(x, y)),
            v: Field::from_fn(grid, l[2], |x, y, _| fv(x, y)),
        };
        for f in [&mut state.p, &mut state.u, &mut state.v] {
            let snap = f.clone();
            fill_ghosts(f, grid, Some(&snap), None)?;
        }
        Ok(state)
    }

    pub fn fill_ghosts(&mut self, grid: &Grid) -> Result<(), AcousticsError> {
        fill_ghosts(&mut self.p, grid, None, None)?;
        fill_ghosts(&mut self.u, grid, None, None)?;
        fill_ghosts(&mut self.v, grid, None, None)?;
        Ok(())
    }

    pub fn linf_diff(&self, other: &AcousticState2) -> f64 {
        self.p
            .linf_diff(&other.p)
            .max(self.u.linf_diff(&other.u))
            .max(self.v.linf_diff(&other.v))
    }
}

/// One step: p from the step-n velocity divergence, ghosts refilled, then
/// the velocity from the fresh p.
pub fn step(
    state: &mut AcousticState2,
    grid: &Grid,
    dt: f64,
    params: AcousticParams,
) -> Result<(), AcousticsError> {
    if !(dt > 0.0) {
        return Err(AcousticsError::NonPositiveDt(dt));
    }
    supported(state.scheme)?;
    let scheme = state.scheme;
    let gp = dt * params.c * params.c;
    let gv = dt / (params.eps * params.eps);

    let mut du = Field::new(grid, Layout::Cell);
    let mut dv = Field::new(grid, Layout::Cell);
    op_dx(scheme, &state.u, grid.dx, &mut du);
    op_dy(scheme, &state.v, grid.dy, &mut dv);
    state
        .p
        .map_interior(|i, j, _, w| w - gp * (du.at2(i, j) + dv.at2(i, j)));
    fill_ghosts(&mut state.p, grid, None, None)?;

    let mut gx = Field::new(grid, Layout::Cell);
    let mut gy = Field::new(grid, Layout::Cell);
    op_dpx(scheme, &state.p, grid.dx, &mut gx);
    op_dpy(scheme, &state.p, grid.dy, &mut gy);
    state.u.map_interior(|i, j, _, w| w - gv * gx.at2(i, j));
    state.v.map_interior(|i, j, _, w| w - gv * gy.at2(i, j));
    fill_ghosts(&mut state.u, grid, None, None)?;
    fill_ghosts(&mut state.v, grid, None, None)?;
    Ok(())
}

/// The conserved discrete vorticity `D'_x v - D'_y u`: the acoustic image of
/// the Maxwell divergence involution. Exactly stationary under `step` for
/// every parameter pair (the mixed primed derivatives commute).
pub fn vorticity(state: &AcousticState2, grid: &Grid) -> Result<Field, AcousticsError> {
    supported(state.scheme)?;
    let mut wx = Field::new(grid, Layout::Cell);
    let mut wy = Field::new(grid, Layout::Cell);
    op_dpx(state.scheme, &state.v, grid.dx, &mut wx);
    op_dpy(state.scheme, &state.u, grid.dy, &mut wy);
    wx.map_interior(|i, j, _, v| v - wy.at2(i, j));
    Ok(wx)
}

/// Area-weighted kinetic energy `1/2 sum (u^2 + v^2) dx dy`.
pub fn kinetic_energy(state: &AcousticState2, grid: &Grid) -> f64 {
    0.5 * (state.u.l2sq_interior() + state.v.l2sq_interior()) * grid.dx * grid.dy
}

/// The continuous-time invariant `1/2 sum (eps^2 (u^2 + v^2) + p^2 / c^2)`,
/// area-weighted. Oscillates in a bounded band under the discrete stepper.
pub fn total_energy(state: &AcousticState2, grid: &Grid, params: AcousticParams) -> f64 {
    let e2 = params.eps * params.eps;
    let c2 = params.c * params.c;
    0.5 * ((state.u.l2sq_interior() + state.v.l2sq_interior()) * e2
        + state.p.l2sq_interior() / c2)
        * grid.dx
        * grid.dy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxwell::{self, MaxwellState2};
    use crate::scheme::SchemeId as S;
    use crate::stability::{acoustic_amplification_matrix, Wavenumber};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const NAMED: [S; 3] = [S::YeeOriginal, S::YeeCollocatedExtended, S::CentralExtended];

    fn random_state(scheme: S, grid: &Grid, seed: u64) -> AcousticState2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut st = AcousticState2::new(scheme, grid).unwrap();
        for f in [&mut st.p, &mut st.u, &mut st.v] {
            f.map_interior(|_, _, _, _| rng.gen_range(-1.0..1.0));
        }
        st.fill_ghosts(grid).unwrap();
        st
    }

    #[test]
    fn unit_parameters_reproduce_the_maxwell_trajectory_bitwise() {
        let grid = Grid::periodic_2d(20, 16, 0.05, 1.0 / 16.0);
        let params = AcousticParams::new(1.0, 1.0).unwrap();
        for scheme in S::SEQ_EXP_2D {
            if scheme == S::YeeCollocatedExplicit {
                // The Maxwell stepper uses the fused single-stage form there;
                // the acoustic one is staged, so only near-equality holds.
                continue;
            }
            let mut mx = {
                let mut rng = ChaCha8Rng::seed_from_u64(99);
                let mut st = MaxwellState2::new(scheme, &grid).unwrap();
                for f in [&mut st.bz, &mut st.ex, &mut st.ey] {
                    f.map_interior(|_, _, _, _| rng.gen_range(-1.0..1.0));
                }
                st.fill_ghosts(&grid).unwrap();
                st
            };
            let mut ac = AcousticState2::new(scheme, &grid).unwrap();
            ac.p.map_interior(|i, j, _, _| -mx.bz.at2(i, j));
            ac.u.map_interior(|i, j, _, _| -mx.ey.at2(i, j));
            ac.v.map_interior(|i, j, _, _| mx.ex.at2(i, j));
            ac.fill_ghosts(&grid).unwrap();

            let dt = 0.9 * scheme.cfl_max() * grid.dx.min(grid.dy);
            for _ in 0..7 {
                maxwell::step(&mut mx, &grid, dt).unwrap();
                step(&mut ac, &grid, dt, params).unwrap();
            }
            let mut worst: f64 = 0.0;
            ac.p.for_interior(|i, j, _, w| worst = worst.max((w + mx.bz.at2(i, j)).abs()));
            ac.u.for_interior(|i, j, _, w| worst = worst.max((w + mx.ey.at2(i, j)).abs()));
            ac.v.for_interior(|i, j, _, w| worst = worst.max((w - mx.ex.at2(i, j)).abs()));
            assert!(worst <= 1e-14, "{scheme}: renamed trajectories differ by {worst}");
        }
    }

    #[test]
    fn plane_wave_amplification_matches_spectral_matrix() {
        let n = 12usize;
        let grid = Grid::periodic_2d(n, n, 1.0, 1.0);
        let params = AcousticParams::new(1.7, 0.8).unwrap();
        let amps = [
            Complex64::new(0.4, 0.3),
            Complex64::new(-0.8, 0.1),
            Complex64::new(0.2, -0.6),
        ];
        for scheme in NAMED {
            let dt = 0.25;
            for (mx, my) in [(1, 0), (2, 5), (6, 6), (0, 4)] {
                let (bx, by) = (
                    2.0 * std::f64::consts::PI * mx as f64 / n as f64,
                    2.0 * std::f64::consts::PI * my as f64 / n as f64,
                );
                let phase =
                    |i: isize, j: isize| Complex64::new(0.0, bx * i as f64 + by * j as f64).exp();
                let probe = (4isize, 7isize);
                let mut got = [Complex64::default(); 3];
                for part in 0..2 {
                    let mut st = AcousticState2::new(scheme, &grid).unwrap();
                    // Matrix rows are ordered (u, v, p).
                    for (f, amp) in [
                        (&mut st.u, amps[0]),
                        (&mut st.v, amps[1]),
                        (&mut st.p, amps[2]),
                    ] {
                        f.map_interior(|i, j, _, _| {
                            let z = amp * phase(i, j);
                            if part == 0 {
                                z.re
                            } else {
                                z.im
                            }
                        });
                    }
                    st.fill_ghosts(&grid).unwrap();
                    step(&mut st, &grid, dt, params).unwrap();
                    let vals = [st.u.at2(probe.0, probe.1), st.v.at2(probe.0, probe.1), st.p.at2(probe.0, probe.1)];
                    for c in 0..3 {
                        got[c] += if part == 0 {
                            Complex64::new(vals[c], 0.0)
                        } else {
                            Complex64::new(0.0, vals[c])
                        };
                    }
                }
                let a = acoustic_amplification_matrix(
                    scheme,
                    Wavenumber::d2(bx, by),
                    dt,
                    params.c,
                    params.eps,
                )
                .unwrap();
                let ph = phase(probe.0, probe.1);
                for c in 0..3 {
                    let mut want = Complex64::default();
                    for (k, amp) in amps.iter().enumerate() {
                        want += a.get(c, k) * amp;
                    }
                    want *= ph;
                    assert!(
                        (got[c] - want).norm() <= 1e-12 * (want.norm() + 1.0),
                        "{scheme} mode ({mx},{my}) comp {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn vorticity_is_conserved_for_generic_parameters() {
        let grid = Grid::periodic_2d(24, 24, 1.0 / 24.0, 1.0 / 24.0);
        let params = AcousticParams::new(2.0, 0.7).unwrap();
        for scheme in NAMED {
            let mut st = random_state(scheme, &grid, 5);
            let w0 = vorticity(&st, &grid).unwrap();
            let scale = w0.linf_interior() + 1.0;
            let dt = params.max_dt(scheme, &grid, 0.9);
            for _ in 0..100 {
                step(&mut st, &grid, dt, params).unwrap();
            }
            let w = vorticity(&st, &grid).unwrap();
            assert!(
                w.linf_diff(&w0) <= 1e-12 * scale,
                "{scheme}: vorticity drift {}",
                w.linf_diff(&w0)
            );
        }
    }

    /// With p scaled by eps and dt proportional to eps, the discrete
    /// trajectory of (p / eps, u, v) does not depend on eps at all: the
    /// stepper is uniform in the stiffness parameter.
    #[test]
    fn scaled_trajectories_are_epsilon_uniform()  {
        let grid = Grid::periodic_2d(16, 16, 1.0 / 16.0, 1.0 / 16.0);
        let mut runs = Vec::new();
        for eps in [1e-1, 1e-3] {
            let params = AcousticParams::new(1.0, eps).unwrap();
            let mut st = AcousticState2::from_fns(
                S::YeeCollocatedExtended,
                &grid,
                |x, y| eps * ((2.0 * std::f64::consts::PI * x).sin() + (4.0 * std::f64::consts::PI * y).cos()),
                |x, y| (2.0 * std::f64::consts::PI * (x + y)).cos(),
                |x, y| (2.0 * std::f64::consts::PI * (x - 2.0 * y)).sin(),
            )
            .unwrap();
            let dt = params.max_dt(S::YeeCollocatedExtended, &grid, 0.9);
            let mut ke = Vec::new();
            for _ in 0..200 {
                step(&mut st, &grid, dt, params).unwrap();
                ke.push(kinetic_energy(&st, &grid));
            }
            st.p.map_interior(|_, _, _, v| v / eps);
            runs.push((st, ke));
        }
        let (a, ka) = &runs[0];
        let (b, kb) = &runs[1];
        assert!(a.linf_diff(b) <= 1e-10, "scaled states differ by {}", a.linf_diff(b));
        let kdiff = ka
            .iter()
            .zip(kb)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(kdiff <= 1e-10, "kinetic energy histories differ by {kdiff}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let grid = Grid::periodic_2d(8, 8, 0.125, 0.125);
        assert!(AcousticParams::new(0.0, 1.0).is_err());
        assert!(AcousticParams::new(1.0, -2.0).is_err());
        assert!(matches!(
            AcousticState2::new(S::UpwindSplit, &grid),
            Err(AcousticsError::Unsupported(_))
        ));
        assert!(matches!(
            AcousticState2::new(S::YeeExtended3D, &grid),
            Err(AcousticsError::Unsupported(_))
        ));
        let params = AcousticParams::new(1.0, 1.0).unwrap();
        let mut st = AcousticState2::new(S::YeeOriginal, &grid).unwrap();
        assert!(matches!(
            step(&mut st, &grid, -0.1, params),
            Err(AcousticsError::NonPositiveDt(_))
        ));
    }
}
