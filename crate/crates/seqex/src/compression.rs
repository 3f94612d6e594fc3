//! Flux variants for 1D conservative advection with a given variable speed
//!
//! The model problem is `d_t q + d_x (U(x) q) = 0`, which splits into
//! advection `U d_x q` plus the compressive term `q d_x U`. The variants
//! collected here differ only in how that compressive part enters the
//! numerical flux: not at all (plain upwinding), through a Roe-type local
//! linearization, through the Lagrangian volume change of the cells, through
//! a relaxation intermediate state, or through a backward-Euler denominator.
//! They are the 1D comparison bed for the denominator used in the
//! compressible-flow flux.
//!
//! Index conventions: cell arrays hold `q[i]` and cell velocities `U(x_i)`;
//! edge arrays hold `U(x_{i+1/2})` at position `i`, the edge between cells
//! `i` and `i+1`. A flux function evaluates one edge; callers assemble steps
//! (tests here use periodic windows). All variants reduce to classical
//! first-order upwind when the velocity is a positive constant.

use thiserror::Error;

/// Failure modes of the compression-aware variants. Each one means the time
/// step (or the relaxation speed) is too small for the local compression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompressionError {
    #[error("volume fraction of cell {cell} is {value:.6e}; compression too strong for this dt")]
    VolumeFractionNotPositive { cell: usize, value: f64 },
    #[error("relaxation speed must be positive, got {0:.6e}")]
    NonPositiveRelaxationSpeed(f64),
    #[error("relaxation denominator is {value:.6e}; relaxation speed too small for this velocity jump")]
    RelaxationTooWeak { value: f64 },
    #[error("backward-Euler denominator of cell {cell} is {value:.6e}, not positive")]
    DenominatorNotPositive { cell: usize, value: f64 },
}

/// Piecewise-constant-velocity Riemann flux with cell-based velocities:
/// each cell sends its own outflow `U(x_i) q_i` across the edge. For
/// positive velocities this is `U(x_i) q_i` exactly; with general signs
/// each side contributes its outgoing part.
pub fn flux_leveque_cell_u(q: &[f64], u_cells: &[f64], i_edge: usize) -> f64 {
    let (i, j) = (i_edge, i_edge + 1);
    u_cells[i].max(0.0) * q[i] + u_cells[j].min(0.0) * q[j]
}

/// Locally linearized (Roe-type) flux with cell-based velocities: central
/// flux average plus diffusion `|ubar| [q]/2`, where `ubar` satisfies the
/// exact jump relation `[U q] = ubar [q]` whenever the data jump allows it
/// and falls back to the arithmetic mean on constant data.
pub fn flux_roe_nonconst(q: &[f64], u_cells: &[f64], i_edge: usize) -> f64 {
    let (i, j) = (i_edge, i_edge + 1);
    let (fl, fr) = (u_cells[i] * q[i], u_cells[j] * q[j]);
    let dq = q[j] - q[i];
    let ubar = if dq != 0.0 {
        (fr - fl) / dq
    } else {
        0.5 * (u_cells[i] + u_cells[j])
    };
    0.5 * (fl + fr) - 0.5 * ubar.abs() * dq
}

/// Pure upwind flux with respect to the edge velocity: `U_{i+1/2}` carries
/// the value from whichever side it points away from. No compressive term.
pub fn flux_edge_upwind(q: &[f64], u_edges: &[f64], i_edge: usize) -> f64 {
    let u = u_edges[i_edge];
    u * if u > 0.0 { q[i_edge] } else { q[i_edge + 1] }
}

/// Volume fraction of cell `i` after one Lagrangian step of the edge
/// velocities: `L_i = 1 + dt (U_{i+1/2} - U_{i-1/2}) / dx`.
fn volume_fraction(u_edges: &[f64], dt: f64, dx: f64, i: usize) -> f64 {
    1.0 + dt * (u_edges[i] - u_edges[i - 1]) / dx
}

/// Lagrange-Projection flux: upwinding acts on the Lagrangian densities
/// `q_i / L_i`, so the compressive stretch of each cell is accounted for
/// before the transport. Requires both adjacent volume fractions positive.
///
/// `i_edge` must have a neighbor edge on each side (`1 <= i_edge <=
/// u_edges.len() - 2`).
pub fn flux_lagrange_projection(
    q: &[f64],
    u_edges: &[f64],
    dt: f64,
    dx: f64,
    i_edge: usize,
) -> Result<f64, CompressionError> {
    assert!(dx > 0.0, "grid spacing must be positive");
    assert!(
        i_edge >= 1 && i_edge + 1 < u_edges.len(),
        "edge {i_edge} has no neighbor edges"
    );
    let (i, j) = (i_edge, i_edge + 1);
    let li = volume_fraction(u_edges, dt, dx, i);
    let lj = volume_fraction(u_edges, dt, dx, j);
    for (cell, l) in [(i, li), (j, lj)] {
        if l <= 0.0 {
            return Err(CompressionError::VolumeFractionNotPositive { cell, value: l });
        }
    }
    let u = u_edges[i_edge];
    let (wl, wr) = (q[i] / li, q[j] / lj);
    Ok(0.5 * u * (wl + wr) - 0.5 * u.abs() * (wr - wl))
}

/// Relaxation Riemann flux for the pressureless system `(rho, rho u)`:
/// intermediate state `u* = (uL + uR)/2` and an upwinded density divided by
/// `1 + rho (uR - uL) / (2a)`, the relaxation counterpart of the volume
/// fraction. `a > 0` is the relaxation speed (density times speed); it must
/// be large enough to keep the denominator positive.
pub fn flux_relaxation_pressureless(
    q_l: (f64, f64),
    q_r: (f64, f64),
    a: f64,
) -> Result<[f64; 2], CompressionError> {
    if a <= 0.0 {
        return Err(CompressionError::NonPositiveRelaxationSpeed(a));
    }
    let (rho_l, u_l) = q_l;
    let (rho_r, u_r) = q_r;
    let u_star = 0.5 * (u_l + u_r);
    let rho = if u_star > 0.0 { rho_l } else { rho_r };
    let den = 1.0 + rho * (u_r - u_l) / (2.0 * a);
    if !(den > 0.0) {
        return Err(CompressionError::RelaxationTooWeak { value: den });
    }
    let rho_star = rho / den;
    Ok([rho_star * u_star, rho_star * u_star * u_star])
}

/// Operator-split update on a periodic cell array: upwind advection treated
/// explicitly, the compressive ODE term `q d_x U` by backward Euler, which
/// moves the central divergence into a denominator:
///
/// ```text
///   q_i' = (q_i - dt U_i (d_x q)_upwind) / (1 + dt (U_{i+1} - U_{i-1}) / (2 dx))
/// ```
pub fn ode_compression_update(
    q: &[f64],
    u_cells: &[f64],
    dt: f64,
    dx: f64,
) -> Result<Vec<f64>, CompressionError> {
    assert!(dx > 0.0, "grid spacing must be positive");
    assert_eq!(q.len(), u_cells.len());
    let n = q.len();
    assert!(n >= 3, "periodic stencil needs at least 3 cells");
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (im, ip) = ((i + n - 1) % n, (i + 1) % n);
        let u = u_cells[i];
        let grad = if u > 0.0 {
            (q[i] - q[im]) / dx
        } else {
            (q[ip] - q[i]) / dx
        };
        let den = 1.0 + dt * (u_cells[ip] - u_cells[im]) / (2.0 * dx);
        if den <= 0.0 {
            return Err(CompressionError::DenominatorNotPositive { cell: i, value: den });
        }
        out.push((q[i] - dt * u * grad) / den);
    }
    Ok(out)
}
