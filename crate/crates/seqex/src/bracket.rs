//! Jump/sum stencil calculus on staggered fields.
//!
//! The primitive per-axis operations are
//!
//! * `JumpHalf`:  q_{+1} - q          (result moves to the half position)
//! * `SumHalf`:   q_{+1} + q
//! * `JumpWide`:  q_{+1} - q_{-1}
//! * `DoubleJump`: q_{+1} - 2 q + q_{-1}
//! * `DoubleSum`:  q_{+1} + 2 q + q_{-1}
//!
//! A half operation applied to an axis that is already staggered combines the
//! two half positions around the integer index instead (q - q_{-1} resp.
//! q + q_{-1}), so composing `JumpHalf` then `SumHalf` on the same axis
//! reproduces the wide jump q_{+1} - q_{-1}. Multi-axis composites expand one
//! axis at a time; the operations commute, so the order is immaterial. The
//! result staggering is computed from the parity of half shifts per axis,
//! never declared by the caller.
//!
//! This is the unfused reference path: every primitive materializes a full
//! field. The solvers fuse the same algebra into single loops and are tested
//! against this implementation.

use crate::grid::{Axis, Field};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BracketError {
    #[error("composite stencil reach on axis {axis:?} exceeds the allocated ghost width {ghost}")]
    ReachExceedsGhost { axis: Axis, ghost: usize },
    #[error("axis {axis:?} is degenerate (single layer); stencils cannot run along it")]
    DegenerateAxis { axis: Axis },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketOp {
    JumpHalf,
    SumHalf,
    JumpWide,
    DoubleJump,
    DoubleSum,
}

#[derive(Debug, Clone, Copy)]
pub struct AxisOp {
    pub axis: Axis,
    pub op: BracketOp,
}

impl AxisOp {
    pub fn new(axis: Axis, op: BracketOp) -> AxisOp {
        AxisOp { axis, op }
    }
}

/// A composite bracket expression: a sequence of per-axis operations and a
/// scalar normalization applied once at the end.
#[derive(Debug, Clone)]
pub struct BracketExpr {
    pub ops: Vec<AxisOp>,
    pub normalization: f64,
}

impl BracketExpr {
    pub fn new(ops: Vec<AxisOp>, normalization: f64) -> BracketExpr {
        BracketExpr { ops, normalization }
    }
}

#[inline]
fn shift(field: &Field, axis: Axis, i: isize, j: isize, k: isize, d: isize) -> f64 {
    match axis {
        Axis::X => field.at(i + d, j, k),
        Axis::Y => field.at(i, j + d, k),
        Axis::Z => field.at(i, j, k + d),
    }
}

/// Valid index range per axis, lower inclusive, upper exclusive.
type Valid = [(isize, isize); 3];

fn full_extent(field: &Field) -> Valid {
    let g = field.ghost();
    let n = [field.nx(), field.ny(), field.nz()];
    [
        (-(g[0] as isize), (n[0] + g[0]) as isize),
        (-(g[1] as isize), (n[1] + g[1]) as isize),
        (-(g[2] as isize), (n[2] + g[2]) as isize),
    ]
}

fn apply_op_ranged(
    field: &Field,
    axis_op: AxisOp,
    valid: &mut Valid,
) -> Result<Field, BracketError> {
    let AxisOp { axis, op } = axis_op;
    let a = axis.index();
    let n = [field.nx(), field.ny(), field.nz()];
    if n[a] == 1 {
        return Err(BracketError::DegenerateAxis { axis });
    }
    let staggered = field.stagger()[a];
    // relative index reach of this op
    let (lo, hi): (isize, isize) = match op {
        BracketOp::JumpHalf | BracketOp::SumHalf => {
            if staggered {
                (-1, 0)
            } else {
                (0, 1)
            }
        }
        BracketOp::JumpWide | BracketOp::DoubleJump | BracketOp::DoubleSum => (-1, 1),
    };
    let new_range = (valid[a].0 - lo, valid[a].1 - hi);
    if new_range.0 > 0 || new_range.1 < n[a] as isize {
        return Err(BracketError::ReachExceedsGhost {
            axis,
            ghost: field.ghost()[a],
        });
    }
    valid[a] = new_range;
    let mut out = field.clone();
    out.fill(0.0);
    for k in valid[2].0..valid[2].1 {
        for j in valid[1].0..valid[1].1 {
            for i in valid[0].0..valid[0].1 {
                let v = match op {
                    BracketOp::JumpHalf => {
                        if staggered {
                            shift(field, axis, i, j, k, 0) - shift(field, axis, i, j, k, -1)
                        } else {
                            shift(field, axis, i, j, k, 1) - shift(field, axis, i, j, k, 0)
                        }
                    }
                    BracketOp::SumHalf => {
                        if staggered {
                            shift(field, axis, i, j, k, 0) + shift(field, axis, i, j, k, -1)
                        } else {
                            shift(field, axis, i, j, k, 1) + shift(field, axis, i, j, k, 0)
                        }
                    }
                    BracketOp::JumpWide => {
                        shift(field, axis, i, j, k, 1) - shift(field, axis, i, j, k, -1)
                    }
                    BracketOp::DoubleJump => {
                        shift(field, axis, i, j, k, 1) - 2.0 * shift(field, axis, i, j, k, 0)
                            + shift(field, axis, i, j, k, -1)
                    }
                    BracketOp::DoubleSum => {
                        shift(field, axis, i, j, k, 1)
                            + 2.0 * shift(field, axis, i, j, k, 0)
                            + shift(field, axis, i, j, k, -1)
                    }
                };
                out.set(i, j, k, v);
            }
        }
    }
    let mut st = field.stagger();
    if matches!(op, BracketOp::JumpHalf | BracketOp::SumHalf) {
        st[a] = !st[a];
    }
    out.set_stagger(st);
    Ok(out)
}

/// Apply one primitive operation on its own.
pub fn apply_op(field: &Field, axis_op: AxisOp) -> Result<Field, BracketError> {
    let mut valid = full_extent(field);
    apply_op_ranged(field, axis_op, &mut valid)
}

/// Evaluate a composite expression. The interior of the result is fully
/// determined as long as the cumulative stencil reach stays within the ghost
/// width; otherwise an error is returned. Ghost entries of the result that
/// would need data beyond the allocated ghosts are left at zero.
pub fn apply_bracket(field: &Field, expr: &BracketExpr) -> Result<Field, BracketError> {
    let mut valid = full_extent(field);
    let mut cur = field.clone();
    for &op in &expr.ops {
        cur = apply_op_ranged(&cur, op, &mut valid)?;
    }
    if expr.normalization != 1.0 {
        let norm = expr.normalization;
        for k in valid[2].0..valid[2].1 {
            for j in valid[1].0..valid[1].1 {
                for i in valid[0].0..valid[0].1 {
                    let v = cur.at(i, j, k) * norm;
                    cur.set(i, j, k, v);
                }
            }
        }
    }
    Ok(cur)
}

/// Three-point average (q_{+1} + 2 q + q_{-1}) / 4 along `axis`; the
/// perpendicular smoothing used by the central-extended and reference
/// schemes. Identical to `DoubleSum` with normalization 1/4.
pub fn avg_perp(field: &Field, axis: Axis) -> Result<Field, BracketError> {
    apply_bracket(
        field,
        &BracketExpr::new(vec![AxisOp::new(axis, BracketOp::DoubleSum)], 0.25),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{fill_ghosts, Grid, Layout};

    fn ramp_grid() -> (Grid, Field) {
        let grid = Grid::periodic_2d(8, 8, 1.0, 1.0);
        let mut f = Field::new(&grid, Layout::Cell);
        f.map_interior(|i, j, _, _| (i * i) as f64 + 3.0 * (j as f64) + 0.5 * (i * j) as f64);
        fill_ghosts(&mut f, &grid, None, None).unwrap();
        (grid, f)
    }

    #[test]
    fn jump_half_on_linear_data() {
        let grid = Grid::periodic_2d(6, 2, 1.0, 1.0);
        let mut f = Field::new(&grid, Layout::Cell);
        f.map_interior(|i, _, _, _| 2.0 * i as f64);
        fill_ghosts(&mut f, &grid, None, None).unwrap();
        let j = apply_op(&f, AxisOp::new(Axis::X, BracketOp::JumpHalf)).unwrap();
        // interior away from the wrap seam: constant slope 2
        for i in 0..5 {
            assert_eq!(j.at2(i, 0), 2.0);
        }
        assert_eq!(j.stagger(), [true, false, false]);
    }

    #[test]
    fn half_jump_then_half_sum_equals_wide_jump() {
        let (_, f) = ramp_grid();
        let composite = apply_bracket(
            &f,
            &BracketExpr::new(
                vec![
                    AxisOp::new(Axis::X, BracketOp::JumpHalf),
                    AxisOp::new(Axis::X, BracketOp::SumHalf),
                ],
                1.0,
            ),
        )
        .unwrap();
        let wide = apply_op(&f, AxisOp::new(Axis::X, BracketOp::JumpWide)).unwrap();
        for j in 0..8 {
            for i in 0..8 {
                assert!((composite.at2(i, j) - wide.at2(i, j)).abs() < 1e-13);
            }
        }
        assert_eq!(composite.stagger(), [false, false, false]);
    }

    #[test]
    fn double_sum_equals_two_half_sums() {
        let (_, f) = ramp_grid();
        let two = apply_bracket(
            &f,
            &BracketExpr::new(
                vec![
                    AxisOp::new(Axis::Y, BracketOp::SumHalf),
                    AxisOp::new(Axis::Y, BracketOp::SumHalf),
                ],
                1.0,
            ),
        )
        .unwrap();
        let ds = apply_op(&f, AxisOp::new(Axis::Y, BracketOp::DoubleSum)).unwrap();
        for j in 0..8 {
            for i in 0..8 {
                assert!((two.at2(i, j) - ds.at2(i, j)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn multi_axis_composites_commute() {
        let (_, f) = ramp_grid();
        let xy = apply_bracket(
            &f,
            &BracketExpr::new(
                vec![
                    AxisOp::new(Axis::X, BracketOp::JumpHalf),
                    AxisOp::new(Axis::Y, BracketOp::DoubleSum),
                ],
                1.0,
            ),
        )
        .unwrap();
        let yx = apply_bracket(
            &f,
            &BracketExpr::new(
                vec![
                    AxisOp::new(Axis::Y, BracketOp::DoubleSum),
                    AxisOp::new(Axis::X, BracketOp::JumpHalf),
                ],
                1.0,
            ),
        )
        .unwrap();
        assert_eq!(xy.stagger(), yx.stagger());
        for j in 0..8 {
            for i in 0..8 {
                assert!((xy.at2(i, j) - yx.at2(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn avg_perp_matches_double_sum_over_four() {
        let (_, f) = ramp_grid();
        let a = avg_perp(&f, Axis::Y).unwrap();
        let d = apply_op(&f, AxisOp::new(Axis::Y, BracketOp::DoubleSum)).unwrap();
        for j in 0..8 {
            for i in 0..8 {
                assert!((a.at2(i, j) - d.at2(i, j) / 4.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cumulative_reach_beyond_ghost_is_an_error() {
        let (_, f) = ramp_grid();
        // two wide jumps need reach 2 > ghost width 1
        let r = apply_bracket(
            &f,
            &BracketExpr::new(
                vec![
                    AxisOp::new(Axis::X, BracketOp::JumpWide),
                    AxisOp::new(Axis::X, BracketOp::JumpWide),
                ],
                1.0,
            ),
        );
        assert_eq!(
            r.unwrap_err(),
            BracketError::ReachExceedsGhost {
                axis: Axis::X,
                ghost: 1
            }
        );
    }

    #[test]
    fn degenerate_axis_is_an_error() {
        let grid = Grid::periodic_2d(6, 1, 1.0, 1.0);
        let f = Field::new(&grid, Layout::Cell);
        let r = apply_op(&f, AxisOp::new(Axis::Y, BracketOp::JumpHalf));
        assert_eq!(
            r.err(),
            Some(BracketError::DegenerateAxis { axis: Axis::Y })
        );
    }

    #[test]
    fn linearity_under_composition() {
        let (grid, f) = ramp_grid();
        let mut g = Field::from_fn(&grid, Layout::Cell, |x, y, _| (0.7 * x - 0.3 * y).cos());
        fill_ghosts(&mut g, &grid, None, None).unwrap();
        let mut sum = f.clone();
        let gg = g.clone();
        sum.map_interior(|i, j, k, v| v + 2.0 * gg.at(i, j, k));
        fill_ghosts(&mut sum, &grid, None, None).unwrap();
        let expr = BracketExpr::new(
            vec![
                AxisOp::new(Axis::X, BracketOp::SumHalf),
                AxisOp::new(Axis::Y, BracketOp::JumpHalf),
            ],
            0.5,
        );
        let bf = apply_bracket(&f, &expr).unwrap();
        let bg = apply_bracket(&g, &expr).unwrap();
        let bs = apply_bracket(&sum, &expr).unwrap();
        for j in 0..7 {
            for i in 0..7 {
                assert!((bs.at2(i, j) - bf.at2(i, j) - 2.0 * bg.at2(i, j)).abs() < 1e-12);
            }
        }
    }
}
