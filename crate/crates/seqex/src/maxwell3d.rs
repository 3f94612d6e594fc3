//! Three-dimensional extended-stencil Maxwell stepper
//!
//! B lives on vertices, E on cells. Every curl entry is a pair difference
//! along the derivative axis combined with pair averages along the two
//! perpendicular axes, so each component update reads a full 2x2x2 block.
//! The B update uses the forward flavor of these operators, the E update
//! (from the fresh B) the backward flavor, which is exactly the adjoint on
//! a periodic grid. That adjointness gives the conserved divergences and the
//! two-level energy below the same structure as in the 2D module.

use crate::grid::{fill_ghosts, Axis, Field, Grid, Layout};
use crate::maxwell::MaxwellError;

/// Vertex B and cell E fields, component order (x, y, z).
#[derive(Debug, Clone)]
pub struct MaxwellState3 {
    pub b: [Field; 3],
    pub e: [Field; 3],
}

impl MaxwellState3 {
    pub fn new(grid: &Grid) -> MaxwellState3 {
        MaxwellState3 {
            b: std::array::from_fn(|_| Field::new(grid, Layout::Node)),
            e: std::array::from_fn(|_| Field::new(grid, Layout::Cell)),
        }
    }

    pub fn fill_ghosts(&mut self, grid: &Grid) -> Result<(), MaxwellError> {
        for f in self.b.iter_mut().chain(self.e.iter_mut()) {
            fill_ghosts(f, grid, None, None)?;
        }
        Ok(())
    }

    pub fn l2(&self, grid: &Grid) -> f64 {
        let sum: f64 = self
            .b
            .iter()
            .chain(self.e.iter())
            .map(|f| f.l2sq_interior())
            .sum();
        (sum * grid.dx * grid.dy * grid.dz).sqrt()
    }

    pub fn linf_diff(&self, other: &MaxwellState3) -> f64 {
        self.b
            .iter()
            .zip(&other.b)
            .chain(self.e.iter().zip(&other.e))
            .map(|(a, b)| a.linf_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Pair difference along `axis`, pair averages along the other two axes.
/// Forward flavor reads offsets {0, +1}, backward {-1, 0} on every axis.
fn ext_diff(q: &Field, axis: Axis, delta: f64, backward: bool, out: &mut Field) {
    let (lo, hi): (isize, isize) = if backward { (-1, 0) } else { (0, 1) };
    let d = match axis {
        Axis::X => [1, 0, 0],
        Axis::Y => [0, 1, 0],
        Axis::Z => [0, 0, 1],
    };
    // Perpendicular offsets: everything not on the derivative axis.
    let (p1, p2) = match axis {
        Axis::X => ([0, 1, 0], [0, 0, 1]),
        Axis::Y => ([1, 0, 0], [0, 0, 1]),
        Axis::Z => ([1, 0, 0], [0, 1, 0]),
    };
    out.map_interior(|i, j, k, _| {
        let mut acc = 0.0;
        for o1 in [lo, hi] {
            for o2 in [lo, hi] {
                let (bi, bj, bk) = (
                    i + o1 * p1[0] + o2 * p2[0],
                    j + o1 * p1[1] + o2 * p2[1],
                    k + o1 * p1[2] + o2 * p2[2],
                );
                acc += q.at(bi + hi * d[0], bj + hi * d[1], bk + hi * d[2])
                    - q.at(bi + lo * d[0], bj + lo * d[1], bk + lo * d[2]);
            }
        }
        acc / (4.0 * delta)
    });
}

/// Discrete curl of a component triple; `backward` picks the E-update flavor.
fn curl(v: &[Field; 3], grid: &Grid, backward: bool) -> [Field; 3] {
    let mut out: [Field; 3] = std::array::from_fn(|_| Field::new(grid, Layout::Cell));
    let mut tmp = Field::new(grid, Layout::Cell);
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let deltas = [grid.dx, grid.dy, grid.dz];
    for r in 0..3 {
        let (p, q) = ((r + 1) % 3, (r + 2) % 3);
        // (curl v)_r = d_p v_q - d_q v_p.
        ext_diff(&v[q], axes[p], deltas[p], backward, &mut out[r]);
        ext_diff(&v[p], axes[q], deltas[q], backward, &mut tmp);
        let t = &tmp;
        out[r].map_interior(|i, j, k, val| val - t.at(i, j, k));
    }
    out
}

/// One step: B first from the curl of E, then E from the fresh B.
pub fn step(state: &mut MaxwellState3, grid: &Grid, dt: f64) -> Result<(), MaxwellError> {
    if !(dt > 0.0) {
        return Err(MaxwellError::NonPositiveDt(dt));
    }
    let ce = curl(&state.e, grid, false);
    for (b, c) in state.b.iter_mut().zip(&ce) {
        b.map_interior(|i, j, k, v| v - dt * c.at(i, j, k));
        fill_ghosts(b, grid, None, None)?;
    }
    let cb = curl(&state.b, grid, true);
    for (e, c) in state.e.iter_mut().zip(&cb) {
        e.map_interior(|i, j, k, v| v + dt * c.at(i, j, k));
        fill_ghosts(e, grid, None, None)?;
    }
    Ok(())
}

fn divergence(v: &[Field; 3], grid: &Grid, backward: bool) -> Field {
    let mut out = Field::new(grid, Layout::Cell);
    let mut tmp = Field::new(grid, Layout::Cell);
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let deltas = [grid.dx, grid.dy, grid.dz];
    for r in 0..3 {
        ext_diff(&v[r], axes[r], deltas[r], backward, &mut tmp);
        let t = &tmp;
        out.map_interior(|i, j, k, val| val + t.at(i, j, k));
    }
    out
}

/// Backward-flavor divergence of E; exactly stationary under `step` (the
/// adjoint curl has zero divergence operator-by-operator).
pub fn divergence_e(state: &MaxwellState3, grid: &Grid) -> Field {
    divergence(&state.e, grid, true)
}

/// Forward-flavor divergence of B; also exactly stationary under `step`.
pub fn divergence_b(state: &MaxwellState3, grid: &Grid) -> Field {
    divergence(&state.b, grid, false)
}

/// Conserved two-level energy, the 3D version of the 2D functional:
/// `1/2 ||curl E^n||^2 + 1/2 <curl curl' B^n, B^{n+1}>`, volume-weighted.
pub fn conserved_energy(
    prev: &MaxwellState3,
    next: &MaxwellState3,
    grid: &Grid,
) -> Result<f64, MaxwellError> {
    let ce = curl(&prev.e, grid, false);
    let mut cpb = curl(&prev.b, grid, true);
    for f in cpb.iter_mut() {
        fill_ghosts(f, grid, None, None)?;
    }
    let ccb = curl(&cpb, grid, false);
    let mut h = 0.0;
    for r in 0..3 {
        ce[r].for_interior(|_, _, _, c| h += 0.5 * c * c);
        ccb[r].for_interior(|i, j, k, c| h += 0.5 * c * next.b[r].at(i, j, k));
    }
    Ok(h * grid.dx * grid.dy * grid.dz)
}

/// Cell E field in the kernel of the forward curl: the component-wise
/// extended gradient of a vertex potential. With B = 0 it is a discrete
/// stationary state.
pub fn gradient_e(phi: &Field, grid: &Grid) -> Result<[Field; 3], MaxwellError> {
    let mut e: [Field; 3] = std::array::from_fn(|_| Field::new(grid, Layout::Cell));
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let deltas = [grid.dx, grid.dy, grid.dz];
    for r in 0..3 {
        ext_diff(phi, axes[r], deltas[r], false, &mut e[r]);
        fill_ghosts(&mut e[r], grid, None, None)?;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::SchemeId;
    use crate::stability::{amplification_matrix, Wavenumber};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(grid: &Grid, seed: u64) -> MaxwellState3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut st = MaxwellState3::new(grid);
        for f in st.b.iter_mut().chain(st.e.iter_mut()) {
            f.map_interior(|_, _, _, _| rng.gen_range(-1.0..1.0));
        }
        st.fill_ghosts(grid).unwrap();
        st
    }

    #[test]
    fn constant_fields_are_stationary() {
        let grid = Grid::periodic_3d(6, 5, 4, 0.2, 0.25, 0.3);
        let mut st = MaxwellState3::new(&grid);
        for (f, v) in st.b.iter_mut().chain(st.e.iter_mut()).zip(1..) {
            f.fill(v as f64);
        }
        st.fill_ghosts(&grid).unwrap();
        let before = st.clone();
        for _ in 0..3 {
            step(&mut st, &grid, 0.05).unwrap();
        }
        assert!(st.linf_diff(&before) < 1e-15);
    }

    #[test]
    fn plane_wave_amplification_matches_spectral_matrix() {
        let n = 8usize;
        let grid = Grid::periodic_3d(n, n, n, 1.0, 1.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let amps: [Complex64; 6] =
            std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let ratio = 0.4;
        for (mx, my, mz) in [(1, 0, 0), (0, 2, 1), (3, 1, 2), (4, 4, 4), (0, 0, 3)] {
            let beta = [mx, my, mz].map(|m| 2.0 * std::f64::consts::PI * m as f64 / n as f64);
            let phase = |i: isize, j: isize, k: isize| {
                Complex64::new(0.0, beta[0] * i as f64 + beta[1] * j as f64 + beta[2] * k as f64)
                    .exp()
            };
            let probe = (3isize, 5isize, 2isize);
            let mut got = [Complex64::default(); 6];
            for part in 0..2 {
                let mut st = MaxwellState3::new(&grid);
                for (c, f) in st.b.iter_mut().chain(st.e.iter_mut()).enumerate() {
                    f.map_interior(|i, j, k, _| {
                        let z = amps[c] * phase(i, j, k);
                        if part == 0 {
                            z.re
                        } else {
                            z.im
                        }
                    });
                }
                st.fill_ghosts(&grid).unwrap();
                step(&mut st, &grid, ratio).unwrap();
                for (c, f) in st.b.iter().chain(st.e.iter()).enumerate() {
                    let v = f.at(probe.0, probe.1, probe.2);
                    got[c] += if part == 0 {
                        Complex64::new(v, 0.0)
                    } else {
                        Complex64::new(0.0, v)
                    };
                }
            }
            let a = amplification_matrix(
                SchemeId::YeeExtended3D,
                Wavenumber::d3(beta[0], beta[1], beta[2]),
                ratio,
            )
            .unwrap();
            let ph = phase(probe.0, probe.1, probe.2);
            for c in 0..6 {
                let mut want = Complex64::default();
                for (k, amp) in amps.iter().enumerate() {
                    want += a.get(c, k) * amp;
                }
                want *= ph;
                assert!(
                    (got[c] - want).norm() <= 1e-12 * (want.norm() + 1.0),
                    "mode ({mx},{my},{mz}) comp {c}: got {:?} want {:?}",
                    got[c],
                    want
                );
            }
        }
    }

    #[test]
    fn both_divergences_are_conserved() {
        let grid = Grid::periodic_3d(12, 12, 12, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0);
        let mut st = random_state(&grid, 4);
        let de0 = divergence_e(&st, &grid);
        let db0 = divergence_b(&st, &grid);
        let scale = de0.linf_interior().max(db0.linf_interior()) + 1.0;
        let dt = 0.9 * SchemeId::YeeExtended3D.cfl_max() * grid.dx;
        for _ in 0..100 {
            step(&mut st, &grid, dt).unwrap();
        }
        let de = divergence_e(&st, &grid);
        let db = divergence_b(&st, &grid);
        assert!(de.linf_diff(&de0) <= 1e-12 * scale, "div E drift");
        assert!(db.linf_diff(&db0) <= 1e-12 * scale, "div B drift");
    }

    #[test]
    fn gradient_field_with_zero_b_is_stationary() {
        let grid = Grid::periodic_3d(10, 10, 10, 0.1, 0.1, 0.1);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut phi = Field::new(&grid, Layout::Node);
        phi.map_interior(|_, _, _, _| rng.gen_range(-1.0..1.0));
        fill_ghosts(&mut phi, &grid, None, None).unwrap();
        let mut st = MaxwellState3::new(&grid);
        st.e = gradient_e(&phi, &grid).unwrap();
        let init = st.clone();
        let dt = 0.9 * grid.dx;
        for _ in 0..100 {
            step(&mut st, &grid, dt).unwrap();
        }
        assert!(
            st.linf_diff(&init) <= 1e-12 / grid.dx,
            "drift {}",
            st.linf_diff(&init)
        );
    }

    #[test]
    fn two_level_energy_is_conserved() {
        let grid = Grid::periodic_3d(10, 10, 10, 0.1, 0.1, 0.1);
        let mut st = random_state(&grid, 21);
        let dt = 0.9 * grid.dx;
        let mut prev = st.clone();
        step(&mut st, &grid, dt).unwrap();
        let h0 = conserved_energy(&prev, &st, &grid).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            prev = st.clone();
            step(&mut st, &grid, dt).unwrap();
            let h = conserved_energy(&prev, &st, &grid).unwrap();
            worst = worst.max((h - h0).abs());
        }
        assert!(worst <= 1e-12 * (h0.abs() + 1.0), "energy drift {worst} (H0 = {h0})");
    }

    #[test]
    fn stable_inside_the_bound_and_unstable_beyond() {
        let grid = Grid::periodic_3d(12, 12, 12, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0);
        let mut st = random_state(&grid, 30);
        let n0 = st.l2(&grid);
        let dt = 0.9 * grid.dx;
        for _ in 0..200 {
            step(&mut st, &grid, dt).unwrap();
            let n = st.l2(&grid);
            assert!(n >= n0 / 3.0 && n <= 3.0 * n0, "norm left the band: {n} vs {n0}");
        }

        let mut st = random_state(&grid, 30);
        let dt = 1.05 * grid.dx;
        let mut grew = false;
        for _ in 0..200 {
            step(&mut st, &grid, dt).unwrap();
            if st.l2(&grid) >= 1.5 * n0 {
                grew = true;
                break;
            }
        }
        assert!(grew, "no blow-up at 1.05x the bound");
    }
}
