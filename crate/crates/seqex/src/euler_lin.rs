//! Spectral stability of the two-stage Euler scheme
//!
//! Linearizing the numerical flux about a constant background and applying
//! the Fourier transform turns one time step into a 4x4 amplification matrix
//! per wavenumber. The matrix keeps the sequential structure of the scheme:
//! the momentum rows advance first, then the density and energy rows act on
//! the partially updated vector.
//!
//! Besides the matrix itself this module measures the largest stable time
//! step per background state (bisection over dt, sweep over wavenumbers,
//! root-modulus test on the characteristic polynomial) and tabulates it
//! against the closed-form candidate
//!
//! ```text
//!   dt < dx / (|ubar| + |vbar| + cbar sqrt(2/gamma))
//! ```

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cmat::CMat;
use crate::grid::Axis;
use crate::stability::Wavenumber;

/// Slack on the spectral radius: a wavenumber counts as stable when every
/// eigenvalue has modulus at most `1 + EULER_RADIUS_TOL`.
///
/// The value is set by what double precision can certify. The amplification
/// matrices keep multiple and near-multiple eigenvalues on the unit circle
/// (a quadruple unit root at wavenumber zero, coalescing advective families
/// at small wavenumbers), and the modulus of a quadruple root is conditioned
/// like eps^(1/4), about 1e-4, no matter how it is computed. The tolerance
/// sits one order above that noise floor and well below the growth of a
/// genuinely unstable mode a few percent past the bound, so the measured
/// bounds move by under a percent when it varies within [1e-4, 1e-2].
pub const EULER_RADIUS_TOL: f64 = 1e-3;

/// Constant background state the scheme is linearized around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerBackground {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub gamma: f64,
}

impl EulerBackground {
    /// Background with unit density and the given sound speed
    /// (`p = c^2 / gamma`). The amplification matrix depends on the
    /// thermodynamic state only through `p / rho`, so this loses nothing.
    pub fn from_sound_speed(u: f64, v: f64, c: f64, gamma: f64) -> EulerBackground {
        EulerBackground { rho: 1.0, u, v, p: c * c / gamma, gamma }
    }

    pub fn energy(&self) -> f64 {
        self.p / (self.gamma - 1.0) + 0.5 * self.rho * (self.u * self.u + self.v * self.v)
    }

    fn enthalpy(&self) -> f64 {
        (self.energy() + self.p) / self.rho
    }

    fn flux_x(&self) -> [f64; 4] {
        let m = self.rho * self.u;
        [m, m * self.u + self.p, m * self.v, (self.energy() + self.p) * self.u]
    }

    fn flux_y(&self) -> [f64; 4] {
        let m = self.rho * self.v;
        [m, m * self.u, m * self.v + self.p, (self.energy() + self.p) * self.v]
    }

    fn jac_x(&self) -> [[f64; 4]; 4] {
        let (u, v, g) = (self.u, self.v, self.gamma);
        let k = 0.5 * (g - 1.0) * (u * u + v * v);
        let h = self.enthalpy();
        [
            [0.0, 1.0, 0.0, 0.0],
            [k - u * u, (3.0 - g) * u, -(g - 1.0) * v, g - 1.0],
            [-u * v, v, u, 0.0],
            [u * (k - h), h - (g - 1.0) * u * u, -(g - 1.0) * u * v, g * u],
        ]
    }

    fn jac_y(&self) -> [[f64; 4]; 4] {
        let (u, v, g) = (self.u, self.v, self.gamma);
        let k = 0.5 * (g - 1.0) * (u * u + v * v);
        let h = self.enthalpy();
        [
            [0.0, 0.0, 1.0, 0.0],
            [-u * v, v, u, 0.0],
            [k - v * v, -(g - 1.0) * u, (3.0 - g) * v, g - 1.0],
            [v * (k - h), -(g - 1.0) * u * v, h - (g - 1.0) * v * v, g * v],
        ]
    }
}

/// Fourier symbol of the linearized flux divergence (the discrete operator
/// whose negative, times dt, advances the conserved perturbations).
fn rhs_symbol(bg: &EulerBackground, dt: f64, dx: f64, wn: Wavenumber) -> CMat {
    let dy = dx;
    let tx = wn.t(Axis::X);
    let ty = wn.t(Axis::Y);
    let one = Complex64::new(1.0, 0.0);

    let jx = bg.jac_x();
    let jy = bg.jac_y();
    let fx = bg.flux_x();
    let fy = bg.flux_y();
    // Gradients of the velocities with respect to the conserved vector.
    let gu = [-bg.u / bg.rho, 1.0 / bg.rho, 0.0, 0.0];
    let gv = [-bg.v / bg.rho, 0.0, 1.0 / bg.rho, 0.0];

    // Symbols of the bracket stencils: pair sum / jump across the edge,
    // (1,2,1)-weighted transverse sum, wide transverse jump.
    let sum_x = tx + 1.0;
    let jump_x = tx - 1.0;
    let wsum_x = tx + 2.0 + tx.inv();
    let wide_x = tx - tx.inv();
    let sum_y = ty + 1.0;
    let jump_y = ty - 1.0;
    let wsum_y = ty + 2.0 + ty.inv();
    let wide_y = ty - ty.inv();

    // Linearized edge fluxes: centered average of the flux Jacobian, the
    // upwind jump with the background normal speed, and the first-order
    // expansion of the divergence denominator against the background flux.
    let mut lx = CMat::zeros(4);
    let mut ly = CMat::zeros(4);
    for r in 0..4 {
        for c in 0..4 {
            let mut v = jx[r][c] * sum_x * wsum_y * 0.125;
            if r == c {
                v -= 0.5 * bg.u.abs() * jump_x;
            }
            v -= dt * fx[r] * gu[c] * jump_x * wsum_y / (4.0 * dx);
            v -= dt * fx[r] * gv[c] * sum_x * wide_y / (4.0 * dy);
            lx.set(r, c, v);

            let mut w = jy[r][c] * wsum_x * sum_y * 0.125;
            if r == c {
                w -= 0.5 * bg.v.abs() * jump_y;
            }
            w -= dt * fy[r] * gu[c] * wide_x * sum_y / (4.0 * dx);
            w -= dt * fy[r] * gv[c] * wsum_x * jump_y / (4.0 * dy);
            ly.set(r, c, w);
        }
    }

    // Flux divergence symbol.
    let ddx = (one - tx.inv()) / dx;
    let ddy = (one - ty.inv()) / dy;
    let mut rhs = CMat::zeros(4);
    for r in 0..4 {
        for c in 0..4 {
            rhs.set(r, c, lx.get(r, c) * ddx + ly.get(r, c) * ddy);
        }
    }
    rhs
}

/// Amplification matrix of one full step (momentum stage, then the
/// density/energy stage) at wavenumber `wn`, on a square grid (dy = dx).
///
/// Rows and columns order the conserved perturbations (rho, mx, my, e).
pub fn euler_linearized_matrix(
    bg: &EulerBackground,
    dt: f64,
    dx: f64,
    wn: Wavenumber,
) -> CMat {
    let rhs = rhs_symbol(bg, dt, dx, wn);
    // Sequential composition: momentum rows first, then density and energy.
    let mut stage_m = CMat::identity(4);
    let mut stage_s = CMat::identity(4);
    for c in 0..4 {
        for r in [1usize, 2] {
            stage_m.add_to(r, c, -dt * rhs.get(r, c));
        }
        for r in [0usize, 3] {
            stage_s.add_to(r, c, -dt * rhs.get(r, c));
        }
    }
    stage_s.matmul(&stage_m)
}

/// Amplification matrix of the unsplit update (all four rows advance with
/// step-n data) at wavenumber `wn`.
///
/// With vanishing background pressure its characteristic polynomial is a
/// perfect fourth power of the scalar advection root, which gives the sharp
/// bound `dt <= dx / (|u| + |v|)`. The staged composition instead splits
/// that multiple root by O(dt^2) and sheds a weakly growing mode at every
/// dt, so the advective bound belongs to this operator. The solver itself
/// requires positive pressure, which makes zero-pressure backgrounds an
/// analytical limit; they are classified here.
pub fn euler_advective_matrix(bg: &EulerBackground, dt: f64, dx: f64, wn: Wavenumber) -> CMat {
    let rhs = rhs_symbol(bg, dt, dx, wn);
    let mut a = CMat::identity(4);
    for r in 0..4 {
        for c in 0..4 {
            a.add_to(r, c, -dt * rhs.get(r, c));
        }
    }
    a
}

/// Unit-disk test with [`EULER_RADIUS_TOL`] slack on the eigenvalue moduli.
pub fn euler_mode_stable(a: &CMat) -> bool {
    a.char_poly().max_abs_root() <= 1.0 + EULER_RADIUS_TOL
}

/// Wavenumber samples covering the distinct spectra: conjugation symmetry
/// halves one axis, so `bx` runs over [0, pi] and `by` over (-pi, pi]. The
/// counts are rounded so the extrema candidates 0, pi/2 and pi land on
/// sample points exactly.
pub fn beta_grid(res: f64) -> Vec<(f64, f64)> {
    let pi = std::f64::consts::PI;
    let half = (pi / (2.0 * res)).ceil().max(1.0) as usize;
    let nx = 2 * half;
    let ny = 4 * half;
    let mut grid = Vec::with_capacity((nx + 1) * ny);
    for k in 0..=nx {
        let bx = k as f64 * pi / nx as f64;
        for m in 1..=ny {
            let by = -pi + m as f64 * 2.0 * pi / ny as f64;
            grid.push((bx, by));
        }
    }
    grid
}

/// Closed-form time step candidate `dx / (|u| + |v| + c sqrt(2/gamma))`.
/// Returns infinity for a fully quiescent background.
pub fn euler_dt_formula(bg: &EulerBackground, dx: f64) -> f64 {
    let c = (bg.gamma * bg.p / bg.rho).sqrt();
    let speed = bg.u.abs() + bg.v.abs() + c * (2.0 / bg.gamma).sqrt();
    if speed > 0.0 {
        dx / speed
    } else {
        f64::INFINITY
    }
}

/// True when every sampled wavenumber is stable at this dt. Zero-pressure
/// backgrounds are classified on the unsplit operator, see
/// [`euler_advective_matrix`].
pub fn euler_dt_stable(bg: &EulerBackground, dx: f64, dt: f64, beta_res: f64) -> bool {
    let advective = bg.p == 0.0;
    beta_grid(beta_res).par_iter().all(|&(bx, by)| {
        let wn = Wavenumber::d2(bx, by);
        let a = if advective {
            euler_advective_matrix(bg, dt, dx, wn)
        } else {
            euler_linearized_matrix(bg, dt, dx, wn)
        };
        euler_mode_stable(&a)
    })
}

/// Largest stable dt for the background, found by growing an unstable
/// bracket from the closed-form guess and bisecting to `rel_tol` relative
/// accuracy. Returns infinity when no instability is found at any tested dt
/// (quiescent background).
pub fn euler_max_dt(bg: &EulerBackground, dx: f64, beta_res: f64, rel_tol: f64) -> f64 {
    let guess = match euler_dt_formula(bg, dx) {
        g if g.is_finite() => g,
        _ => dx,
    };
    let mut lo = 0.0;
    let mut hi = guess;
    let mut grows = 0;
    while euler_dt_stable(bg, dx, hi, beta_res) {
        lo = hi;
        hi *= 2.0;
        grows += 1;
        if grows >= 8 {
            return f64::INFINITY;
        }
    }
    while hi - lo > rel_tol * guess {
        let mid = 0.5 * (lo + hi);
        if euler_dt_stable(bg, dx, mid, beta_res) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// One row of the stability map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerDtRow {
    pub ubar: f64,
    pub vbar: f64,
    /// Largest measured stable dt (spectral sweep).
    pub measured: f64,
    /// Closed-form candidate for comparison.
    pub formula: f64,
}

/// Measured versus closed-form largest dt over a grid of background
/// velocities at fixed sound speed. Rows are ordered with `ubar` outermost;
/// entries are independent, so the parallel evaluation is deterministic.
pub fn euler_max_dt_map(
    ubars: &[f64],
    vbars: &[f64],
    cbar: f64,
    gamma: f64,
    dx: f64,
    beta_res: f64,
    rel_tol: f64,
) -> Vec<EulerDtRow> {
    let points: Vec<(f64, f64)> = ubars
        .iter()
        .flat_map(|&u| vbars.iter().map(move |&v| (u, v)))
        .collect();
    points
        .par_iter()
        .map(|&(ubar, vbar)| {
            let bg = EulerBackground::from_sound_speed(ubar, vbar, cbar, gamma);
            EulerDtRow {
                ubar,
                vbar,
                measured: euler_max_dt(&bg, dx, beta_res, rel_tol),
                formula: euler_dt_formula(&bg, dx),
            }
        })
        .collect()
}
