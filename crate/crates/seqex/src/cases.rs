//! Flow test cases and the diagnostics used to judge them
//!
//! Each case carries its documented domain, boundary treatment, default
//! resolution, final time and CFL number, plus the primitive-variable
//! initial data sampled at cell centers. The diagnostics are the mean
//! absolute error, the log-log convergence slope, and the low-Mach norm
//! pair (node divergence, Mach-rescaled pressure gradient).

use crate::euler::{
    compute_dt, node_divergence, step, velocities, EulerError, EulerState2, Prim2,
};
use crate::grid::{Axis, BoundaryPolicy, Field, Grid};
use crate::riemann::{GasState, RiemannProblem};

/// Ratio of specific heats used by every flow case.
pub const GAMMA: f64 = 1.4;

/// The catalog of runnable flow experiments. The vortex cases carry their
/// maximum Mach number (which sets the background pressure).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseId {
    Sod,
    Lax,
    Leveque,
    GreshoVortex(f64),
    SmoothVortex(f64),
    KelvinHelmholtz,
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseId::Sod => write!(f, "sod"),
            CaseId::Lax => write!(f, "lax"),
            CaseId::Leveque => write!(f, "leveque"),
            CaseId::GreshoVortex(m) => write!(f, "gresho (mach {m})"),
            CaseId::SmoothVortex(m) => write!(f, "vortex (mach {m})"),
            CaseId::KelvinHelmholtz => write!(f, "kh"),
        }
    }
}

/// Documented domain, boundaries and run defaults of one case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseSetup {
    pub id: CaseId,
    /// Domain extents [Lx, Ly]; the origin is at (0, 0).
    pub lengths: [f64; 2],
    pub bc: [BoundaryPolicy; 2],
    pub default_nx: usize,
    pub default_t_end: f64,
    pub default_cfl: f64,
}

impl CaseId {
    /// Every case at its default parameters (vortices at Mach 0.1).
    pub fn catalog() -> Vec<CaseId> {
        vec![
            CaseId::Sod,
            CaseId::Lax,
            CaseId::Leveque,
            CaseId::GreshoVortex(0.1),
            CaseId::SmoothVortex(0.1),
            CaseId::KelvinHelmholtz,
        ]
    }

    pub fn setup(&self) -> CaseSetup {
        use BoundaryPolicy::{Frozen, Periodic};
        let (lengths, bc, default_nx, default_t_end, default_cfl) = match self {
            // Shock tubes: 1D strips, inflow/outflow far from the action.
            CaseId::Sod => ([1.0, 0.0], [Frozen, Periodic], 1000, 0.2, 0.65),
            CaseId::Lax | CaseId::Leveque => ([1.0, 0.0], [Frozen, Periodic], 1000, 0.1, 0.65),
            CaseId::GreshoVortex(_) => ([1.0, 1.0], [Periodic, Periodic], 50, 1.0, 0.9),
            CaseId::SmoothVortex(_) => ([1.0, 1.0], [Periodic, Periodic], 50, 0.05, 0.9),
            CaseId::KelvinHelmholtz => ([2.0, 1.0], [Periodic, Frozen], 200, 5.0, 0.7),
        };
        CaseSetup { id: *self, lengths, bc, default_nx, default_t_end, default_cfl }
    }
}

impl CaseSetup {
    /// Square-cell grid with `nx` cells along x; shock-tube strips stay two
    /// cells wide, 2D domains scale ny to keep the aspect ratio.
    pub fn grid_with(&self, nx: usize) -> Grid {
        let dx = self.lengths[0] / nx as f64;
        let ny = if self.lengths[1] == 0.0 {
            2
        } else {
            (self.lengths[1] / dx).round().max(2.0) as usize
        };
        Grid::new_2d(nx, ny, dx, dx, self.bc)
    }

    pub fn default_grid(&self) -> Grid {
        self.grid_with(self.default_nx)
    }
}

/// Left/right states of the shock-tube cases; `None` for the 2D cases.
pub fn riemann_problem(case: &CaseId) -> Option<RiemannProblem> {
    let (left, right) = match case {
        CaseId::Sod => (
            GasState { rho: 1.0, u: 0.0, p: 1.0 },
            GasState { rho: 0.125, u: 0.0, p: 0.1 },
        ),
        CaseId::Lax => (
            GasState { rho: 0.445, u: 0.698, p: 3.528 },
            GasState { rho: 0.5, u: 0.0, p: 0.571 },
        ),
        CaseId::Leveque => (
            GasState { rho: 3.0, u: 0.9, p: 3.0 },
            GasState { rho: 1.0, u: 0.9, p: 1.0 },
        ),
        _ => return None,
    };
    Some(RiemannProblem { left, right, gamma: GAMMA })
}

/// Azimuthal speed of the solid-body/decay vortex: linear up to r = 0.2,
/// linear decay to zero at r = 0.4.
fn gresho_vphi(r: f64) -> f64 {
    if r < 0.2 {
        5.0 * r
    } else if r < 0.4 {
        2.0 - 5.0 * r
    } else {
        0.0
    }
}

/// Pressure in radial equilibrium with [`gresho_vphi`]; `p0` fixes the
/// background so the peak Mach number (at r = 0.2) is exactly the requested
/// one.
fn gresho_pressure(r: f64, p0: f64) -> f64 {
    if r < 0.2 {
        p0 + 12.5 * r * r
    } else if r < 0.4 {
        p0 + 4.0 * (5.0 * r).ln() + 4.0 - 20.0 * r + 12.5 * r * r
    } else {
        p0 + 4.0 * 2.0f64.ln() - 2.0
    }
}

const VORTEX_ALPHA: f64 = 20.0;

fn smooth_vphi(r: f64) -> f64 {
    let v0 = VORTEX_ALPHA * VORTEX_ALPHA / 0.13;
    v0 * r * r * (-VORTEX_ALPHA * r).exp()
}

/// Radial-equilibrium pressure of the smooth vortex (closed-form integral
/// of rho vphi^2 / r with rho = 1).
fn smooth_pressure(r: f64, p0: f64) -> f64 {
    let a = VORTEX_ALPHA;
    let v0 = a * a / 0.13;
    let ar = a * r;
    p0 + v0 * v0 / (8.0 * a.powi(4))
        * (3.0 + (-2.0 * ar).exp() * (-3.0 - 2.0 * ar * (3.0 + ar * (3.0 + 2.0 * ar))))
}

/// Primitive initial data of a case as a function of the cell center.
pub fn primitives(case: &CaseId) -> Box<dyn Fn(f64, f64) -> Prim2 + Sync> {
    match *case {
        CaseId::Sod | CaseId::Lax | CaseId::Leveque => {
            let rp = riemann_problem(case).unwrap();
            Box::new(move |x, _| {
                let s = if x < 0.5 { rp.left } else { rp.right };
                Prim2 { rho: s.rho, u: s.u, v: 0.0, p: s.p }
            })
        }
        CaseId::GreshoVortex(mach) => {
            let p0 = 1.0 / (GAMMA * mach * mach) - 0.5;
            Box::new(move |x, y| {
                let (dx, dy) = (x - 0.5, y - 0.5);
                let r = dx.hypot(dy);
                let vphi = gresho_vphi(r);
                let (u, v) = if r > 0.0 { (-vphi * dy / r, vphi * dx / r) } else { (0.0, 0.0) };
                Prim2 { rho: 1.0, u, v, p: gresho_pressure(r, p0) }
            })
        }
        CaseId::SmoothVortex(mach) => {
            let p0 = 20.0 / (GAMMA * mach * mach);
            Box::new(move |x, y| {
                let (dx, dy) = (x - 0.5, y - 0.5);
                let r = dx.hypot(dy);
                let vphi = smooth_vphi(r);
                let (u, v) = if r > 0.0 { (-vphi * dy / r, vphi * dx / r) } else { (0.0, 0.0) };
                Prim2 { rho: 1.0, u, v, p: smooth_pressure(r, p0) }
            })
        }
        CaseId::KelvinHelmholtz => Box::new(|x, y| {
            // Shear layer: the denser stream moves right, the lighter one
            // left; a small transverse wave seeds the roll-up.
            let lower = y < 0.5;
            Prim2 {
                rho: if lower { 1.001 } else { 0.999 },
                u: if lower { 0.1 } else { -0.1 },
                v: 1e-3 * (2.0 * std::f64::consts::PI * x).sin(),
                p: 5.0,
            }
        }),
    }
}

/// Conserved initial data of `case` sampled on `grid` (which should cover
/// the case's documented domain; see [`CaseSetup::grid_with`]).
pub fn build_case(case: &CaseId, grid: &Grid) -> Result<EulerState2, EulerError> {
    let f = primitives(case);
    EulerState2::from_primitives(grid, GAMMA, move |x, y| f(x, y))
}

/// Mean absolute difference over the interior, `(1/N) sum |a - b|`.
pub fn l1_error(a: &Field, b: &Field) -> f64 {
    assert_eq!(
        (a.nx(), a.ny(), a.nz()),
        (b.nx(), b.ny(), b.nz()),
        "field shapes differ"
    );
    let mut acc = 0.0;
    let mut n = 0usize;
    a.for_interior(|i, j, k, w| {
        acc += (w - b.at(i, j, k)).abs();
        n += 1;
    });
    acc / n as f64
}

/// Least-squares slope of log(error) against log(spacing); needs at least
/// three refinement levels.
pub fn convergence_rate(spacings: &[f64], errors: &[f64]) -> f64 {
    assert_eq!(spacings.len(), errors.len());
    assert!(spacings.len() >= 3, "need at least three levels for a rate");
    let n = spacings.len() as f64;
    let xs: Vec<f64> = spacings.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    num / den
}

/// One row of the low-Mach scaling series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowMachSample {
    pub t: f64,
    /// Mean absolute node divergence of the velocity, `(1/N) sum |div|`.
    pub divergence: f64,
    /// Mean absolute Mach-rescaled pressure x-derivative,
    /// `(1/N) sum |[M^2 p]_{i +- 1}| / 2`.
    pub pressure_gradient: f64,
}

/// The two low-Mach norms of a state.
pub fn lowmach_norms(state: &EulerState2, grid: &Grid, mach: f64) -> (f64, f64) {
    let (u, v) = velocities(state, grid);
    let div = node_divergence(&u, &v, grid);
    let mut cells = 0usize;
    let mut div_acc = 0.0;
    div.for_interior(|_, _, _, w| {
        div_acc += w.abs();
        cells += 1;
    });
    let div_norm = div_acc / cells as f64;

    let (nx, ny) = (grid.n(Axis::X) as isize, grid.n(Axis::Y) as isize);
    let mut p_acc = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let pm = state.prim_at(i - 1, j, GAMMA).p;
            let pp = state.prim_at(i + 1, j, GAMMA).p;
            p_acc += (mach * mach * (pp - pm) / 2.0).abs();
        }
    }
    let p_norm = p_acc / (nx * ny) as f64;
    (div_norm, p_norm)
}

/// Time averages (divergence, pressure gradient) of a series, excluding
/// the t = 0 sample: the initial-data norms are pure sampling truncation
/// of the analytic vortex and identical for every Mach number, so only the
/// samples the solver produced say anything about its scaling.
pub fn time_averages(series: &[LowMachSample]) -> (f64, f64) {
    let pos: Vec<&LowMachSample> = series.iter().filter(|s| s.t > 0.0).collect();
    let n = pos.len().max(1) as f64;
    (
        pos.iter().map(|s| s.divergence).sum::<f64>() / n,
        pos.iter().map(|s| s.pressure_gradient).sum::<f64>() / n,
    )
}

/// Run the stationary-vortex case at the given Mach number and sample the
/// low-Mach norms about `samples` times along the way. Returns the series
/// and the final state (for field comparisons across Mach numbers).
pub fn lowmach_run(
    mach: f64,
    grid: &Grid,
    cfl: f64,
    t_end: f64,
    samples: usize,
) -> Result<(Vec<LowMachSample>, EulerState2), EulerError> {
    let mut state = build_case(&CaseId::GreshoVortex(mach), grid)?;
    let record = |t: f64, st: &EulerState2| {
        let (divergence, pressure_gradient) = lowmach_norms(st, grid, mach);
        LowMachSample { t, divergence, pressure_gradient }
    };
    let mut series = vec![record(0.0, &state)];
    let stride = t_end / samples.max(1) as f64;
    let mut next = stride;
    let mut t = 0.0;
    while t < t_end {
        let dt = compute_dt(&state, grid, GAMMA, cfl)?.min(t_end - t);
        step(&mut state, grid, dt, GAMMA, None)?;
        t += dt;
        if t >= next || t >= t_end {
            series.push(record(t, &state));
            while next <= t {
                next += stride;
            }
        }
    }
    Ok((series, state))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shock_tube_tables_match_the_catalog() {
        let sod = riemann_problem(&CaseId::Sod).unwrap();
        assert_eq!(sod.left, GasState { rho: 1.0, u: 0.0, p: 1.0 });
        assert_eq!(sod.right, GasState { rho: 0.125, u: 0.0, p: 0.1 });
        let lax = riemann_problem(&CaseId::Lax).unwrap();
        assert_eq!(lax.left, GasState { rho: 0.445, u: 0.698, p: 3.528 });
        assert_eq!(lax.right, GasState { rho: 0.5, u: 0.0, p: 0.571 });
        let lev = riemann_problem(&CaseId::Leveque).unwrap();
        assert_eq!(lev.left, GasState { rho: 3.0, u: 0.9, p: 3.0 });
        assert_eq!(lev.right, GasState { rho: 1.0, u: 0.9, p: 1.0 });
        assert!(riemann_problem(&CaseId::KelvinHelmholtz).is_none());

        // Sampled onto a grid, the diaphragm sits at x = 0.5.
        let grid = CaseId::Sod.setup().grid_with(10);
        let st = build_case(&CaseId::Sod, &grid).unwrap();
        let l = st.prim_at(0, 0, GAMMA);
        let r = st.prim_at(9, 0, GAMMA);
        assert_eq!((l.rho, l.u, l.p), (1.0, 0.0, 1.0));
        assert!((r.rho - 0.125).abs() <= 1e-15 && (r.p - 0.1).abs() <= 1e-15);
    }

    #[test]
    fn vortex_speed_and_pressure_are_continuous_at_the_seams() {
        assert_eq!(gresho_vphi(0.2), 1.0);
        assert!((gresho_vphi(0.2 - 1e-12) - gresho_vphi(0.2 + 1e-12)).abs() <= 1e-10);
        let p0 = 7.3;
        for r in [0.2, 0.4] {
            let below = gresho_pressure(r - 1e-12, p0);
            let above = gresho_pressure(r + 1e-12, p0);
            assert!(
                (below - above).abs() <= 1e-10,
                "pressure jumps at r = {r}: {below} vs {above}"
            );
        }
        // Branch values agree exactly at the junction radii.
        assert!((gresho_pressure(0.2, p0) - (p0 + 0.5)).abs() <= 1e-13);
        assert!((gresho_pressure(0.4, p0) - (p0 + 4.0 * 2.0f64.ln() - 2.0)).abs() <= 1e-13);
    }

    #[test]
    fn gresho_peak_mach_number_matches_the_label() {
        for mach in [0.1, 1e-2] {
            let grid = CaseId::GreshoVortex(mach).setup().default_grid();
            let st = build_case(&CaseId::GreshoVortex(mach), &grid).unwrap();
            let mut worst = 0.0f64;
            for j in 0..50 {
                for i in 0..50 {
                    let w = st.prim_at(i, j, GAMMA);
                    let c = (GAMMA * w.p / w.rho).sqrt();
                    worst = worst.max(w.u.hypot(w.v) / c);
                }
            }
            assert!(
                (worst - mach).abs() <= 0.02 * mach,
                "peak Mach {worst} for label {mach}"
            );
        }
    }

    #[test]
    fn smooth_vortex_pressure_balances_the_rotation() {
        // dp/dr = rho vphi^2 / r, checked by a centered difference.
        let p0 = 300.0;
        for r in [0.05, 0.1, 0.2, 0.35] {
            let h = 1e-6;
            let grad = (smooth_pressure(r + h, p0) - smooth_pressure(r - h, p0)) / (2.0 * h);
            let want = smooth_vphi(r).powi(2) / r;
            assert!(
                (grad - want).abs() <= 1e-4 * (1.0 + want.abs()),
                "at r = {r}: gradient {grad}, centrifugal {want}"
            );
        }
    }

    #[test]
    fn kelvin_helmholtz_layers_and_domain() {
        let setup = CaseId::KelvinHelmholtz.setup();
        assert_eq!(setup.lengths, [2.0, 1.0]);
        let grid = setup.default_grid();
        assert_eq!((grid.nx, grid.ny), (200, 100));
        let st = build_case(&CaseId::KelvinHelmholtz, &grid).unwrap();
        let lo = st.prim_at(3, 10, GAMMA);
        let hi = st.prim_at(3, 90, GAMMA);
        assert_eq!((lo.rho, lo.u, lo.p), (1.001, 0.1, 5.0));
        assert_eq!((hi.rho, hi.u, hi.p), (0.999, -0.1, 5.0));
        // The transverse perturbation depends on x only.
        assert_eq!(lo.v, st.prim_at(3, 90, GAMMA).v);
    }

    #[test]
    fn error_norms_and_rates_behave() {
        let grid = Grid::periodic_2d(8, 8, 0.125, 0.125);
        let a = Field::from_fn(&grid, crate::grid::Layout::Cell, |x, y, _| x + y);
        assert_eq!(l1_error(&a, &a), 0.0);
        let mut b = a.clone();
        b.map_interior(|_, _, _, w| w + 0.25);
        assert!((l1_error(&a, &b) - 0.25).abs() <= 1e-15);

        let rate = convergence_rate(&[1.0, 0.5, 0.25], &[0.1, 0.05, 0.025]);
        assert!((rate - 1.0).abs() <= 1e-12, "rate {rate}");
    }

    #[test]
    fn quiescent_state_has_roundoff_lowmach_norms() {
        let grid = CaseId::GreshoVortex(0.1).setup().default_grid();
        let st = EulerState2::from_primitives(&grid, GAMMA, |_, _| Prim2 {
            rho: 1.0,
            u: 0.3,
            v: 0.3,
            p: 2.0,
        })
        .unwrap();
        let (div, pg) = lowmach_norms(&st, &grid, 0.1);
        assert!(div <= 1e-13 && pg <= 1e-13, "norms {div}, {pg}");
    }

    #[test]
    fn lowmach_series_samples_start_and_end() {
        let setup = CaseId::GreshoVortex(0.1).setup();
        let grid = setup.grid_with(16);
        let (series, _) = lowmach_run(0.1, &grid, 0.9, 0.02, 4).unwrap();
        assert_eq!(series[0].t, 0.0);
        assert!(series.len() >= 3);
        let last = series.last().unwrap();
        assert!((last.t - 0.02).abs() <= 1e-12);
        assert!(series.windows(2).all(|w| w[0].t < w[1].t));
    }
}
