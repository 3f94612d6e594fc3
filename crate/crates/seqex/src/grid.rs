//! Structured Cartesian grids and scalar fields with ghost layers.
//!
//! Storage is row-major with x fastest, ghost cells inline. Staggered
//! placements (node, edge midpoints) are carried as a per-axis half-offset
//! tag on the field; the index algebra is identical for all placements, only
//! the sampling positions differ.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GridError {
    #[error("axis {axis:?} uses frozen boundaries but no snapshot was supplied")]
    MissingSnapshot { axis: Axis },
    #[error("field shape {found:?} does not match grid shape {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },
    #[error("snapshot layout/shape does not match the field being filled")]
    SnapshotMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Boundary handling per axis. `Frozen` keeps ghost cells pinned to a
/// snapshot taken at initialization; `Reflective` mirrors the interior
/// (with a sign flip for the velocity component normal to the wall,
/// requested by the caller per field).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPolicy {
    Periodic,
    Frozen,
    Reflective,
}

/// Named staggering tags. `EdgeX` is the midpoint of an edge parallel to x
/// (offset by half a cell in the perpendicular axes), `Node` the cell corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Cell,
    Node,
    EdgeX,
    EdgeY,
    EdgeZ,
}

impl Layout {
    /// Half-offset per axis for a grid that is 2d (`three_d = false`) or 3d.
    pub fn stagger(self, three_d: bool) -> [bool; 3] {
        match self {
            Layout::Cell => [false, false, false],
            Layout::Node => [true, true, three_d],
            Layout::EdgeX => [false, true, three_d],
            Layout::EdgeY => [true, false, three_d],
            Layout::EdgeZ => [true, true, false],
        }
    }
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub origin: [f64; 3],
    pub ghost: usize,
    pub bc: [BoundaryPolicy; 3],
}

impl Grid {
    pub fn new_2d(nx: usize, ny: usize, dx: f64, dy: f64, bc: [BoundaryPolicy; 2]) -> Grid {
        assert!(nx > 0 && ny > 0 && dx > 0.0 && dy > 0.0);
        Grid {
            nx,
            ny,
            nz: 1,
            dx,
            dy,
            dz: 1.0,
            origin: [0.0; 3],
            ghost: 1,
            bc: [bc[0], bc[1], BoundaryPolicy::Periodic],
        }
    }

    pub fn periodic_2d(nx: usize, ny: usize, dx: f64, dy: f64) -> Grid {
        Grid::new_2d(nx, ny, dx, dy, [BoundaryPolicy::Periodic; 2])
    }

    pub fn periodic_3d(nx: usize, ny: usize, nz: usize, dx: f64, dy: f64, dz: f64) -> Grid {
        assert!(nx > 0 && ny > 0 && nz > 0 && dx > 0.0 && dy > 0.0 && dz > 0.0);
        Grid {
            nx,
            ny,
            nz,
            dx,
            dy,
            dz,
            origin: [0.0; 3],
            ghost: 1,
            bc: [BoundaryPolicy::Periodic; 3],
        }
    }

    pub fn with_origin(mut self, origin: [f64; 3]) -> Grid {
        self.origin = origin;
        self
    }

    pub fn is_3d(&self) -> bool {
        self.nz > 1
    }

    pub fn n(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
            Axis::Z => self.nz,
        }
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx,
            Axis::Y => self.dy,
            Axis::Z => self.dz,
        }
    }

    /// Ghost width actually allocated on an axis (degenerate axes carry none).
    pub fn ghost_on(&self, axis: Axis) -> usize {
        if self.n(axis) > 1 {
            self.ghost
        } else {
            0
        }
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny * self.nz
    }
}

/// Scalar field on a grid. Indices are interior-based: `i` runs over
/// `-g..nx+g`, and likewise for `j`, `k`; the ghost offset is handled
/// internally.
#[derive(Debug, Clone)]
pub struct Field {
    stagger: [bool; 3],
    n: [usize; 3],
    g: [usize; 3],
    stride: [usize; 3],
    data: Vec<f64>,
}

impl Field {
    pub fn new(grid: &Grid, layout: Layout) -> Field {
        let n = [grid.nx, grid.ny, grid.nz];
        let g = [
            grid.ghost_on(Axis::X),
            grid.ghost_on(Axis::Y),
            grid.ghost_on(Axis::Z),
        ];
        let ext = [n[0] + 2 * g[0], n[1] + 2 * g[1], n[2] + 2 * g[2]];
        Field {
            stagger: layout.stagger(grid.is_3d()),
            n,
            g,
            stride: [1, ext[0], ext[0] * ext[1]],
            data: vec![0.0; ext[0] * ext[1] * ext[2]],
        }
    }

    /// Sample an analytic function at this layout's positions, ghost cells
    /// included (so frozen boundaries can snapshot physically meaningful
    /// values).
    pub fn from_fn(grid: &Grid, layout: Layout, f: impl Fn(f64, f64, f64) -> f64) -> Field {
        let mut out = Field::new(grid, layout);
        let (gx, gy, gz) = (out.g[0] as isize, out.g[1] as isize, out.g[2] as isize);
        for k in -gz..out.n[2] as isize + gz {
            for j in -gy..out.n[1] as isize + gy {
                for i in -gx..out.n[0] as isize + gx {
                    let (x, y, z) = out.position(grid, i, j, k);
                    let v = f(x, y, z);
                    out.set(i, j, k, v);
                }
            }
        }
        out
    }

    pub fn stagger(&self) -> [bool; 3] {
        self.stagger
    }

    pub fn set_stagger(&mut self, stagger: [bool; 3]) {
        self.stagger = stagger;
    }

    pub fn nx(&self) -> usize {
        self.n[0]
    }

    pub fn ny(&self) -> usize {
        self.n[1]
    }

    pub fn nz(&self) -> usize {
        self.n[2]
    }

    pub fn ghost(&self) -> [usize; 3] {
        self.g
    }

    /// Physical position of index (i, j, k): cell centers plus the layout's
    /// half-offsets.
    pub fn position(&self, grid: &Grid, i: isize, j: isize, k: isize) -> (f64, f64, f64) {
        let off = |s: bool| if s { 0.5 } else { 0.0 };
        (
            grid.origin[0] + (i as f64 + 0.5 + off(self.stagger[0])) * grid.dx,
            grid.origin[1] + (j as f64 + 0.5 + off(self.stagger[1])) * grid.dy,
            grid.origin[2] + (k as f64 + 0.5 + off(self.stagger[2])) * grid.dz,
        )
    }

    #[inline(always)]
    fn idx(&self, i: isize, j: isize, k: isize) -> usize {
        debug_assert!(i >= -(self.g[0] as isize) && i < (self.n[0] + self.g[0]) as isize);
        debug_assert!(j >= -(self.g[1] as isize) && j < (self.n[1] + self.g[1]) as isize);
        debug_assert!(k >= -(self.g[2] as isize) && k < (self.n[2] + self.g[2]) as isize);
        ((i + self.g[0] as isize) as usize) * self.stride[0]
            + ((j + self.g[1] as isize) as usize) * self.stride[1]
            + ((k + self.g[2] as isize) as usize) * self.stride[2]
    }

    #[inline(always)]
    pub fn at(&self, i: isize, j: isize, k: isize) -> f64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: isize, j: isize, k: isize, v: f64) {
        let ix = self.idx(i, j, k);
        self.data[ix] = v;
    }

    #[inline(always)]
    pub fn add(&mut self, i: isize, j: isize, k: isize, v: f64) {
        let ix = self.idx(i, j, k);
        self.data[ix] += v;
    }

    /// 2d accessors (k = 0).
    #[inline(always)]
    pub fn at2(&self, i: isize, j: isize) -> f64 {
        self.at(i, j, 0)
    }

    #[inline(always)]
    pub fn set2(&mut self, i: isize, j: isize, v: f64) {
        self.set(i, j, 0, v);
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn for_interior(&self, mut f: impl FnMut(isize, isize, isize, f64)) {
        for k in 0..self.n[2] as isize {
            for j in 0..self.n[1] as isize {
                for i in 0..self.n[0] as isize {
                    f(i, j, k, self.at(i, j, k));
                }
            }
        }
    }

    pub fn map_interior(&mut self, mut f: impl FnMut(isize, isize, isize, f64) -> f64) {
        for k in 0..self.n[2] as isize {
            for j in 0..self.n[1] as isize {
                for i in 0..self.n[0] as isize {
                    let v = f(i, j, k, self.at(i, j, k));
                    self.set(i, j, k, v);
                }
            }
        }
    }

    pub fn sum_interior(&self) -> f64 {
        let mut s = 0.0;
        self.for_interior(|_, _, _, v| s += v);
        s
    }

    pub fn l1_interior(&self) -> f64 {
        let mut s = 0.0;
        self.for_interior(|_, _, _, v| s += v.abs());
        s
    }

    pub fn l2sq_interior(&self) -> f64 {
        let mut s = 0.0;
        self.for_interior(|_, _, _, v| s += v * v);
        s
    }

    pub fn linf_interior(&self) -> f64 {
        let mut s: f64 = 0.0;
        self.for_interior(|_, _, _, v| s = s.max(v.abs()));
        s
    }

    pub fn minmax_interior(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        self.for_interior(|_, _, _, v| {
            lo = lo.min(v);
            hi = hi.max(v);
        });
        (lo, hi)
    }

    /// Max-norm of the interior difference to another field of the same shape.
    pub fn linf_diff(&self, other: &Field) -> f64 {
        assert_eq!(self.n, other.n);
        let mut s: f64 = 0.0;
        self.for_interior(|i, j, k, v| s = s.max((v - other.at(i, j, k)).abs()));
        s
    }

    fn extent(&self, a: usize) -> (isize, isize) {
        (-(self.g[a] as isize), (self.n[a] + self.g[a]) as isize)
    }
}

/// Fill ghost layers according to the grid's boundary policies.
///
/// `frozen` must be supplied when any axis is `Frozen`; it is the field
/// snapshot taken at initialization (ghosts included). `odd_axis` marks the
/// field as odd under reflection on that axis (normal velocity component).
///
/// Axes are processed x, then y, then z; each later pass spans the already
/// extended range of the earlier axes so that corner ghosts are consistent.
pub fn fill_ghosts(
    field: &mut Field,
    grid: &Grid,
    frozen: Option<&Field>,
    odd_axis: Option<Axis>,
) -> Result<(), GridError> {
    if field.n != [grid.nx, grid.ny, grid.nz] {
        return Err(GridError::ShapeMismatch {
            expected: (grid.nx, grid.ny, grid.nz),
            found: (field.n[0], field.n[1], field.n[2]),
        });
    }
    if let Some(s) = frozen {
        if s.n != field.n || s.g != field.g {
            return Err(GridError::SnapshotMismatch);
        }
    }
    for axis in Axis::ALL {
        let a = axis.index();
        let g = field.g[a] as isize;
        if g == 0 {
            continue;
        }
        let n = field.n[a] as isize;
        // Earlier axes span their full extended range, later axes interior only.
        let range = |b: usize| -> (isize, isize) {
            if b < a {
                field.extent(b)
            } else {
                (0, field.n[b] as isize)
            }
        };
        let (lo0, hi0) = range(0);
        let (lo1, hi1) = range(1);
        let (lo2, hi2) = range(2);
        let policy = grid.bc[a];
        if policy == BoundaryPolicy::Frozen && frozen.is_none() {
            return Err(GridError::MissingSnapshot { axis });
        }
        let sign = if odd_axis == Some(axis) { -1.0 } else { 1.0 };
        for m in 1..=g {
            for k in lo2..hi2 {
                for j in lo1..hi1 {
                    for i in lo0..hi0 {
                        if a == 0 && (i != 0) {
                            continue; // handled via the m loop below
                        }
                        if a == 1 && (j != 0) {
                            continue;
                        }
                        if a == 2 && (k != 0) {
                            continue;
                        }
                        let put = |fld: &mut Field, pos: isize, val: f64| match a {
                            0 => fld.set(pos, j, k, val),
                            1 => fld.set(i, pos, k, val),
                            _ => fld.set(i, j, pos, val),
                        };
                        let get = |fld: &Field, pos: isize| match a {
                            0 => fld.at(pos, j, k),
                            1 => fld.at(i, pos, k),
                            _ => fld.at(i, j, pos),
                        };
                        match policy {
                            BoundaryPolicy::Periodic => {
                                let lo_v = get(field, n - m);
                                let hi_v = get(field, m - 1);
                                put(field, -m, lo_v);
                                put(field, n - 1 + m, hi_v);
                            }
                            BoundaryPolicy::Frozen => {
                                let s = frozen.unwrap();
                                let lo_v = get(s, -m);
                                let hi_v = get(s, n - 1 + m);
                                put(field, -m, lo_v);
                                put(field, n - 1 + m, hi_v);
                            }
                            BoundaryPolicy::Reflective => {
                                let lo_v = sign * get(field, m - 1);
                                let hi_v = sign * get(field, n - m);
                                put(field, -m, lo_v);
                                put(field, n - 1 + m, hi_v);
                            }
                        }
                    }
                }
            }
        }
    }
    debug_assert!(
        field.data.iter().all(|v| v.is_finite()),
        "non-finite value after ghost fill"
    );
    Ok(())
}
