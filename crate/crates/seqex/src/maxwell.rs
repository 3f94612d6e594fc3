//! Steppers for the two-dimensional transverse-magnetic Maxwell system
//!
//! ```text
//!   d/dt Bz = -(dx Ey - dy Ex),   d/dt Ex = dy Bz,   d/dt Ey = -dx Bz
//! ```
//!
//! Every sequential-explicit variant is defined by two pairs of discrete
//! derivative operators: `D` (entering the Bz update) and `D'` (entering the
//! E updates, applied to the freshly computed Bz). The stepper, the conserved
//! divergence, the two-level energy and the kernel-field builders are all
//! composed from the same four primitive operators, so their mutual
//! consistency is structural rather than accidental.
//!
//! The two forward-Euler references (dimensionally split upwind and the
//! multi-dimensional stationarity-preserving stencil) do not factor this way
//! and are implemented as fused single-stage updates.

use crate::grid::{fill_ghosts, Field, Grid, GridError, Layout};
use crate::scheme::SchemeId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MaxwellError {
    #[error("time step must be positive, got {0}")]
    NonPositiveDt(f64),
    #[error("{scheme} stores {field} on a different layout than this state")]
    LayoutMismatch { scheme: SchemeId, field: &'static str },
    #[error("{0} is a 3D scheme; use the 3D state and stepper")]
    ThreeDimensional(SchemeId),
    #[error("{0} has no preserved involution")]
    NoInvolution(SchemeId),
    #[error("states carry different schemes: {0} vs {1}")]
    SchemeMismatch(SchemeId, SchemeId),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// The three field components of the transverse-magnetic system, with the
/// scheme's staggering baked into the layout tags at construction.
#[derive(Debug, Clone)]
pub struct MaxwellState2 {
    pub scheme: SchemeId,
    pub bz: Field,
    pub ex: Field,
    pub ey: Field,
}

impl MaxwellState2 {
    /// Zero-initialized state on the scheme's layouts.
    pub fn new(scheme: SchemeId, grid: &Grid) -> Result<MaxwellState2, MaxwellError> {
        let layouts = scheme
            .layouts_2d()
            .ok_or(MaxwellError::ThreeDimensional(scheme))?;
        Ok(MaxwellState2 {
            scheme,
            bz: Field::new(grid, layouts[0]),
            ex: Field::new(grid, layouts[1]),
            ey: Field::new(grid, layouts[2]),
        })
    }

    /// Sample analytic component functions of (x, y) at the layout positions
    /// and fill the ghost cells.
    pub fn from_fns(
        scheme: SchemeId,
        grid: &Grid,
        fb: impl Fn(f64, f64) -> f64,
        fex: impl Fn(f64, f64) -> f64,
        fey: impl Fn(f64, f64) -> f64,
    ) -> Result<MaxwellState2, MaxwellError> {
        let layouts = scheme
            .layouts_2d()
            .ok_or(MaxwellError::ThreeDimensional(scheme))?;
        let mut state = MaxwellState2 {
            scheme,
            bz: Field::from_fn(grid, layouts[0], |x, y, _| fb(x, y)),
            ex: Field::from_fn(grid, layouts[1], |x, y, _| fex(x, y)),
            ey: Field::from_fn(grid, layouts[2], |x, y, _| fey(x, y)),
        };
        // from_fn sampled the ghosts analytically; re-derive them from the
        // boundary policy so periodic wrap is bitwise consistent. The
        // analytic samples double as the frozen snapshot where needed.
        for f in [&mut state.bz, &mut state.ex, &mut state.ey] {
            let snap = f.clone();
            fill_ghosts(f, grid, Some(&snap), None)?;
        }
        Ok(state)
    }

    pub fn fill_ghosts(&mut self, grid: &Grid) -> Result<(), MaxwellError> {
        fill_ghosts(&mut self.bz, grid, None, None)?;
        fill_ghosts(&mut self.ex, grid, None, None)?;
        fill_ghosts(&mut self.ey, grid, None, None)?;
        Ok(())
    }

    /// Discrete L2 norm of the full field triple, weighted by cell area.
    pub fn l2(&self, grid: &Grid) -> f64 {
        ((self.bz.l2sq_interior() + self.ex.l2sq_interior() + self.ey.l2sq_interior())
            * grid.dx
            * grid.dy)
            .sqrt()
    }

    pub fn linf_diff(&self, other: &MaxwellState2) -> f64 {
        self.bz
            .linf_diff(&other.bz)
            .max(self.ex.linf_diff(&other.ex))
            .max(self.ey.linf_diff(&other.ey))
    }
}

/// Operator family a scheme's primitive derivatives belong to.
fn family(scheme: SchemeId) -> Option<OpFamily> {
    match scheme {
        SchemeId::YeeOriginal | SchemeId::YeeCollocated | SchemeId::YeeCollocatedExplicit => {
            Some(OpFamily::Yee)
        }
        SchemeId::YeeCollocatedExtended | SchemeId::YeeExtendedStaggered => Some(OpFamily::Extended),
        SchemeId::Central => Some(OpFamily::Central),
        SchemeId::CentralExtended => Some(OpFamily::CentralExtended),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum OpFamily {
    Yee,
    Extended,
    Central,
    CentralExtended,
}

fn expect_family(scheme: SchemeId) -> Result<OpFamily, MaxwellError> {
    match scheme {
        SchemeId::YeeExtended3D => Err(MaxwellError::ThreeDimensional(scheme)),
        _ => family(scheme).ok_or(MaxwellError::NoInvolution(scheme)),
    }
}

/// D_x: the x-derivative entering the Bz update. Reads one ghost layer.
pub fn op_dx(scheme: SchemeId, q: &Field, dx: f64, out: &mut Field) {
    let fam = family(scheme).expect("sequential-explicit 2D scheme");
    match fam {
        OpFamily::Yee => out.map_interior(|i, j, _, _| (q.at2(i + 1, j) - q.at2(i, j)) / dx),
        OpFamily::Extended => out.map_interior(|i, j, _, _| {
            (q.at2(i + 1, j + 1) - q.at2(i, j + 1) + q.at2(i + 1, j) - q.at2(i, j)) / (2.0 * dx)
        }),
        OpFamily::Central => {
            out.map_interior(|i, j, _, _| (q.at2(i + 1, j) - q.at2(i - 1, j)) / (2.0 * dx))
        }
        OpFamily::CentralExtended => out.map_interior(|i, j, _, _| {
            // Central difference of the three-point y-average of q.
            (q.at2(i + 1, j + 1) + 2.0 * q.at2(i + 1, j) + q.at2(i + 1, j - 1)
                - q.at2(i - 1, j + 1)
                - 2.0 * q.at2(i - 1, j)
                - q.at2(i - 1, j - 1))
                / (8.0 * dx)
        }),
    }
}

/// D_y: the y-derivative entering the Bz update.
pub fn op_dy(scheme: SchemeId, q: &Field, dy: f64, out: &mut Field) {
    let fam = family(scheme).expect("sequential-explicit 2D scheme");
    match fam {
        OpFamily::Yee => out.map_interior(|i, j, _, _| (q.at2(i, j + 1) - q.at2(i, j)) / dy),
        OpFamily::Extended => out.map_interior(|i, j, _, _| {
            (q.at2(i + 1, j + 1) - q.at2(i + 1, j) + q.at2(i, j + 1) - q.at2(i, j)) / (2.0 * dy)
        }),
        OpFamily::Central => {
            out.map_interior(|i, j, _, _| (q.at2(i, j + 1) - q.at2(i, j - 1)) / (2.0 * dy))
        }
        OpFamily::CentralExtended => out.map_interior(|i, j, _, _| {
            (q.at2(i + 1, j + 1) + 2.0 * q.at2(i, j + 1) + q.at2(i - 1, j + 1)
                - q.at2(i + 1, j - 1)
                - 2.0 * q.at2(i, j - 1)
                - q.at2(i - 1, j - 1))
                / (8.0 * dy)
        }),
    }
}

/// D'_x: the x-derivative entering the Ey update (applied to fresh Bz).
pub fn op_dpx(scheme: SchemeId, q: &Field, dx: f64, out: &mut Field) {
    let fam = family(scheme).expect("sequential-explicit 2D scheme");
    match fam {
        OpFamily::Yee => out.map_interior(|i, j, _, _| (q.at2(i, j) - q.at2(i - 1, j)) / dx),
        OpFamily::Extended => out.map_interior(|i, j, _, _| {
            (q.at2(i, j) - q.at2(i - 1, j) + q.at2(i, j - 1) - q.at2(i - 1, j - 1)) / (2.0 * dx)
        }),
        OpFamily::Central | OpFamily::CentralExtended => op_dx(scheme, q, dx, out),
    }
}

/// D'_y: the y-derivative entering the Ex update (applied to fresh Bz).
pub fn op_dpy(scheme: SchemeId, q: &Field, dy: f64, out: &mut Field) {
    let fam = family(scheme).expect("sequential-explicit 2D scheme");
    match fam {
        OpFamily::Yee => out.map_interior(|i, j, _, _| (q.at2(i, j) - q.at2(i, j - 1)) / dy),
        OpFamily::Extended => out.map_interior(|i, j, _, _| {
            (q.at2(i, j) - q.at2(i, j - 1) + q.at2(i - 1, j) - q.at2(i - 1, j - 1)) / (2.0 * dy)
        }),
        OpFamily::Central | OpFamily::CentralExtended => op_dy(scheme, q, dy, out),
    }
}

/// The scheme's discrete curl of (Ex, Ey): the Bz update is `Bz -= dt * curl`.
pub fn curl_e(scheme: SchemeId, ex: &Field, ey: &Field, grid: &Grid) -> Result<Field, MaxwellError> {
    expect_family(scheme)?;
    let mut cx = Field::new(grid, Layout::Cell);
    let mut cy = Field::new(grid, Layout::Cell);
    op_dx(scheme, ey, grid.dx, &mut cx);
    op_dy(scheme, ex, grid.dy, &mut cy);
    cx.map_interior(|i, j, _, v| v - cy.at2(i, j));
    Ok(cx)
}

/// One full time step. Sequential-explicit schemes update Bz first, refill
/// its ghosts, then update E from the fresh Bz; the references are plain
/// forward-Euler; the explicit Yee variant is the literal fused form.
pub fn step(state: &mut MaxwellState2, grid: &Grid, dt: f64) -> Result<(), MaxwellError> {
    if !(dt > 0.0) {
        return Err(MaxwellError::NonPositiveDt(dt));
    }
    check_layouts(state)?;
    match state.scheme {
        SchemeId::YeeExtended3D => return Err(MaxwellError::ThreeDimensional(state.scheme)),
        SchemeId::YeeCollocatedExplicit => step_fused_explicit(state, grid, dt)?,
        SchemeId::UpwindSplit => step_upwind(state, grid, dt)?,
        SchemeId::StatPresReference => step_statpres(state, grid, dt)?,
        _ => step_sequential(state, grid, dt)?,
    }
    state.fill_ghosts(grid)
}

/// `step` trusts indices, not positions, so a state whose components were
/// swapped onto the wrong staggering would silently mean something else.
fn check_layouts(state: &MaxwellState2) -> Result<(), MaxwellError> {
    let layouts = state
        .scheme
        .layouts_2d()
        .ok_or(MaxwellError::ThreeDimensional(state.scheme))?;
    for (f, (layout, name)) in [&state.bz, &state.ex, &state.ey]
        .into_iter()
        .zip([(layouts[0], "Bz"), (layouts[1], "Ex"), (layouts[2], "Ey")])
    {
        if f.stagger() != layout.stagger(false) {
            return Err(MaxwellError::LayoutMismatch {
                scheme: state.scheme,
                field: name,
            });
        }
    }
    Ok(())
}

fn step_sequential(state: &mut MaxwellState2, grid: &Grid, dt: f64) -> Result<(), MaxwellError> {
    let scheme = state.scheme;
    let curl = curl_e(scheme, &state.ex, &state.ey, grid)?;
    state.bz.map_interior(|i, j, _, v| v - dt * curl.at2(i, j));
    fill_ghosts(&mut state.bz, grid, None, None)?;

    let mut gx = Field::new(grid, Layout::Cell);
    let mut gy = Field::new(grid, Layout::Cell);
    op_dpx(scheme, &state.bz, grid.dx, &mut gx);
    op_dpy(scheme, &state.bz, grid.dy, &mut gy);
    state.ex.map_interior(|i, j, _, v| v + dt * gy.at2(i, j));
    state.ey.map_interior(|i, j, _, v| v - dt * gx.at2(i, j));
    Ok(())
}

/// The collocated Yee scheme with the B substitution carried out by hand:
/// single stage, E updates read the step-n fields plus second-derivative
/// corrections. State-for-state identical to the two-stage form.
fn step_fused_explicit(
    state: &mut MaxwellState2,
    grid: &Grid,
    dt: f64,
) -> Result<(), MaxwellError> {
    let (dx, dy) = (grid.dx, grid.dy);
    let ex0 = state.ex.clone();
    let ey0 = state.ey.clone();
    let bz = &state.bz;

    state.ex.map_interior(|i, j, _, v| {
        v + dt * (bz.at2(i, j) - bz.at2(i, j - 1)) / dy
            - dt * dt / dy
                * ((ey0.at2(i + 1, j) - ey0.at2(i, j) - ey0.at2(i + 1, j - 1) + ey0.at2(i, j - 1))
                    / dx
                    - (ex0.at2(i, j + 1) - 2.0 * ex0.at2(i, j) + ex0.at2(i, j - 1)) / dy)
    });
    state.ey.map_interior(|i, j, _, v| {
        v - dt * (bz.at2(i, j) - bz.at2(i - 1, j)) / dx
            + dt * dt / dx
                * ((ey0.at2(i + 1, j) - 2.0 * ey0.at2(i, j) + ey0.at2(i - 1, j)) / dx
                    - (ex0.at2(i, j + 1) - ex0.at2(i, j) - ex0.at2(i - 1, j + 1) + ex0.at2(i - 1, j))
                        / dy)
    });
    state.bz.map_interior(|i, j, _, v| {
        v - dt
            * ((ey0.at2(i + 1, j) - ey0.at2(i, j)) / dx - (ex0.at2(i, j + 1) - ex0.at2(i, j)) / dy)
    });
    Ok(())
}

/// Dimensionally split first-order upwind reference: central curl coupling
/// plus one half of a per-axis second difference on each field's own axis.
fn step_upwind(state: &mut MaxwellState2, grid: &Grid, dt: f64) -> Result<(), MaxwellError> {
    let (dx, dy) = (grid.dx, grid.dy);
    let bz0 = state.bz.clone();
    let ex0 = state.ex.clone();
    let ey0 = state.ey.clone();

    state.bz.map_interior(|i, j, _, v| {
        v + dt
            * (-((ey0.at2(i + 1, j) - ey0.at2(i - 1, j)) / (2.0 * dx)
                - (ex0.at2(i, j + 1) - ex0.at2(i, j - 1)) / (2.0 * dy))
                + (bz0.at2(i + 1, j) - 2.0 * bz0.at2(i, j) + bz0.at2(i - 1, j)) / (2.0 * dx)
                + (bz0.at2(i, j + 1) - 2.0 * bz0.at2(i, j) + bz0.at2(i, j - 1)) / (2.0 * dy))
    });
    state.ex.map_interior(|i, j, _, v| {
        v + dt
            * ((bz0.at2(i, j + 1) - bz0.at2(i, j - 1)) / (2.0 * dy)
                + (ex0.at2(i, j + 1) - 2.0 * ex0.at2(i, j) + ex0.at2(i, j - 1)) / (2.0 * dy))
    });
    state.ey.map_interior(|i, j, _, v| {
        v + dt
            * (-(bz0.at2(i + 1, j) - bz0.at2(i - 1, j)) / (2.0 * dx)
                + (ey0.at2(i + 1, j) - 2.0 * ey0.at2(i, j) + ey0.at2(i - 1, j)) / (2.0 * dx))
    });
    Ok(())
}

/// Three-point average along y at fixed x offset.
#[inline]
fn avg_y(q: &Field, i: isize, j: isize) -> f64 {
    (q.at2(i, j + 1) + 2.0 * q.at2(i, j) + q.at2(i, j - 1)) * 0.25
}

/// Three-point average along x.
#[inline]
fn avg_x(q: &Field, i: isize, j: isize) -> f64 {
    (q.at2(i + 1, j) + 2.0 * q.at2(i, j) + q.at2(i - 1, j)) * 0.25
}

/// Multi-dimensional stationarity-preserving reference, forward Euler, as
/// written: central curl and diffusion of perpendicular-averaged fields plus
/// one-sided cross-difference terms in the E rows.
///
/// Note: the one-sided cross terms survive at the checkerboard mode where all
/// averaged terms vanish, so this stencil amplifies that mode by 1 + 2 dt/dx
/// for every dt; see `stability` and the scheme catalog.
fn step_statpres(state: &mut MaxwellState2, grid: &Grid, dt: f64) -> Result<(), MaxwellError> {
    let (dx, dy) = (grid.dx, grid.dy);
    let bz0 = state.bz.clone();
    let ex0 = state.ex.clone();
    let ey0 = state.ey.clone();

    state.bz.map_interior(|i, j, _, v| {
        v + dt
            * (-((avg_y(&ey0, i + 1, j) - avg_y(&ey0, i - 1, j)) / (2.0 * dx)
                - (avg_x(&ex0, i, j + 1) - avg_x(&ex0, i, j - 1)) / (2.0 * dy))
                + (avg_y(&bz0, i + 1, j) - 2.0 * avg_y(&bz0, i, j) + avg_y(&bz0, i - 1, j))
                    / (2.0 * dx)
                + (avg_x(&bz0, i, j + 1) - 2.0 * avg_x(&bz0, i, j) + avg_x(&bz0, i, j - 1))
                    / (2.0 * dy))
    });
    state.ex.map_interior(|i, j, _, v| {
        v + dt
            * ((avg_x(&bz0, i, j + 1) - avg_x(&bz0, i, j - 1)) / (2.0 * dy)
                + 0.5
                    * (-(ey0.at2(i + 1, j) - ey0.at2(i, j) - ey0.at2(i + 1, j - 1)
                        + ey0.at2(i, j - 1))
                        / dx
                        + (avg_x(&ex0, i, j + 1) - 2.0 * avg_x(&ex0, i, j)
                            + avg_x(&ex0, i, j - 1))
                            / dy))
    });
    state.ey.map_interior(|i, j, _, v| {
        v + dt
            * (-(avg_y(&bz0, i + 1, j) - avg_y(&bz0, i - 1, j)) / (2.0 * dx)
                + 0.5
                    * ((avg_y(&ey0, i + 1, j) - 2.0 * avg_y(&ey0, i, j) + avg_y(&ey0, i - 1, j))
                        / dx
                        - (ex0.at2(i, j + 1) - ex0.at2(i, j) - ex0.at2(i - 1, j + 1)
                            + ex0.at2(i - 1, j))
                            / dy))
    });
    Ok(())
}

/// The scheme's conserved divergence of E: `D'_x Ex + D'_y Ey`. Exactly
/// stationary under `step` for every sequential-explicit scheme (the row
/// vector (0, D'_x, D'_y) is a left eigenvector of the amplification matrix
/// with eigenvalue 1). The forward-Euler references preserve no such
/// functional and return an error.
pub fn discrete_involution(
    state: &MaxwellState2,
    grid: &Grid,
) -> Result<Field, MaxwellError> {
    expect_family(state.scheme)?;
    let mut wx = Field::new(grid, Layout::Cell);
    let mut wy = Field::new(grid, Layout::Cell);
    op_dpx(state.scheme, &state.ex, grid.dx, &mut wx);
    op_dpy(state.scheme, &state.ey, grid.dy, &mut wy);
    wx.map_interior(|i, j, _, v| v + wy.at2(i, j));
    Ok(wx)
}

/// Negated composed Laplacian `-(D_x D'_x + D_y D'_y) q`; its Fourier symbol
/// is `-s >= 0`.
fn lap_neg(scheme: SchemeId, q: &Field, grid: &Grid) -> Result<Field, MaxwellError> {
    let mut gx = Field::new(grid, Layout::Cell);
    let mut gy = Field::new(grid, Layout::Cell);
    op_dpx(scheme, q, grid.dx, &mut gx);
    op_dpy(scheme, q, grid.dy, &mut gy);
    fill_ghosts(&mut gx, grid, None, None)?;
    fill_ghosts(&mut gy, grid, None, None)?;
    let mut ox = Field::new(grid, Layout::Cell);
    let mut oy = Field::new(grid, Layout::Cell);
    op_dx(scheme, &gx, grid.dx, &mut ox);
    op_dy(scheme, &gy, grid.dy, &mut oy);
    ox.map_interior(|i, j, _, v| -(v + oy.at2(i, j)));
    Ok(ox)
}

/// The conserved two-level energy of a sequential-explicit scheme, evaluated
/// on two consecutive states:
///
/// ```text
///   H = 1/2 ||curl E^n||^2 + 1/2 <-Lap B^n, B^{n+1}>    (grid sums x dx dy)
/// ```
///
/// Exactly conserved by `step` in exact arithmetic for any dt; rounding
/// leaves a per-step drift at the 1e-15 level. Errors for the references.
pub fn conserved_energy(
    prev: &MaxwellState2,
    next: &MaxwellState2,
    grid: &Grid,
) -> Result<f64, MaxwellError> {
    if prev.scheme != next.scheme {
        return Err(MaxwellError::SchemeMismatch(prev.scheme, next.scheme));
    }
    expect_family(prev.scheme)?;
    let curl = curl_e(prev.scheme, &prev.ex, &prev.ey, grid)?;
    let lap = lap_neg(prev.scheme, &prev.bz, grid)?;
    let mut h = 0.0;
    curl.for_interior(|i, j, _, c| {
        h += 0.5 * c * c + 0.5 * lap.at2(i, j) * next.bz.at2(i, j);
    });
    Ok(h * grid.dx * grid.dy)
}

/// E field with identically zero conserved divergence, built from a stream
/// function: `Ex = -D'_y psi, Ey = D'_x psi` (the two mixed derivatives in
/// `discrete_involution` then cancel to rounding).
pub fn solenoidal_e(
    scheme: SchemeId,
    psi: &Field,
    grid: &Grid,
) -> Result<(Field, Field), MaxwellError> {
    expect_family(scheme)?;
    let layouts = scheme.layouts_2d().expect("2D scheme");
    let mut ex = Field::new(grid, layouts[1]);
    let mut ey = Field::new(grid, layouts[2]);
    let mut tmp = Field::new(grid, Layout::Cell);
    op_dpy(scheme, psi, grid.dy, &mut tmp);
    ex.map_interior(|i, j, _, _| -tmp.at2(i, j));
    op_dpx(scheme, psi, grid.dx, &mut tmp);
    ey.map_interior(|i, j, _, _| tmp.at2(i, j));
    fill_ghosts(&mut ex, grid, None, None)?;
    fill_ghosts(&mut ey, grid, None, None)?;
    Ok((ex, ey))
}

/// E field in the kernel of the scheme's curl: `Ex = D_x phi, Ey = D_y phi`.
/// With Bz = 0 this is a discrete stationary state of `step`.
pub fn gradient_e(
    scheme: SchemeId,
    phi: &Field,
    grid: &Grid,
) -> Result<(Field, Field), MaxwellError> {
    expect_family(scheme)?;
    let layouts = scheme.layouts_2d().expect("2D scheme");
    let mut ex = Field::new(grid, layouts[1]);
    let mut ey = Field::new(grid, layouts[2]);
    let mut tmp = Field::new(grid, Layout::Cell);
    op_dx(scheme, phi, grid.dx, &mut tmp);
    ex.map_interior(|i, j, _, _| tmp.at2(i, j));
    op_dy(scheme, phi, grid.dy, &mut tmp);
    ey.map_interior(|i, j, _, _| tmp.at2(i, j));
    fill_ghosts(&mut ex, grid, None, None)?;
    fill_ghosts(&mut ey, grid, None, None)?;
    Ok((ex, ey))
}
