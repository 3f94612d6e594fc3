//! Small dense complex matrices for amplification-matrix analysis.
//!
//! Sizes stay at 2..6, so storage is a flat `Vec` and all algorithms are the
//! textbook ones: Faddeev-LeVerrier for the characteristic polynomial (exact
//! in the coefficients up to rounding, no balancing or Hessenberg machinery)
//! and root finding on that polynomial for the spectral radius.

use num_complex::Complex64;

use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> CMat {
        CMat {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> CMat {
        let n = rows.len();
        let mut m = CMat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.add_to(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Characteristic polynomial det(zI - A), monic, via the
    /// Faddeev-LeVerrier recursion
    ///
    /// ```text
    /// M_1 = A, c_1 = -tr(A), M_{k+1} = A (M_k + c_k I), c_{k+1} = -tr(M_{k+1}) / (k+1)
    /// ```
    pub fn char_poly(&self) -> Poly {
        let n = self.n;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        let mut m = self.clone();
        for k in 1..=n {
            let c = -m.trace() / k as f64;
            coeffs[n - k] = c;
            if k < n {
                let mut shifted = m.clone();
                for i in 0..n {
                    shifted.add_to(i, i, c);
                }
                m = self.matmul(&shifted);
            }
        }
        Poly::new(coeffs)
    }

    /// Largest eigenvalue magnitude, from the characteristic polynomial.
    /// Exact identity matrices short-circuit to 1: they arise at the zero
    /// Fourier mode where the root iteration would sit on a fully defective
    /// root and return needless noise.
    pub fn spectral_radius(&self) -> f64 {
        if self == &CMat::identity(self.n) {
            return 1.0;
        }
        self.char_poly().max_abs_root()
    }

    /// True when every eigenvalue lies in the closed unit disk (tolerance as
    /// in [`Poly::all_roots_in_closed_unit_disk`]).
    pub fn power_bounded(&self, tol: f64) -> bool {
        if self == &CMat::identity(self.n) {
            return true;
        }
        self.char_poly().all_roots_in_closed_unit_disk(tol)
    }

    /// Geometric-mean growth rate of repeated application to a fixed start
    /// vector: an independent estimate of the spectral radius used to
    /// cross-check the polynomial route in tests.
    pub fn power_radius_estimate(&self, iters: usize) -> f64 {
        let n = self.n;
        // fixed, deliberately asymmetric start vector
        let mut v: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(1.0 + 0.3 * k as f64, 0.7 - 0.2 * k as f64))
            .collect();
        let norm = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut log_sum = 0.0;
        let mut counted = 0usize;
        for it in 0..iters {
            let w = self.mul_vec(&v);
            let nw = norm(&w);
            if nw == 0.0 {
                return 0.0;
            }
            // discard the transient before averaging growth factors
            if it >= iters / 2 {
                log_sum += nw.ln();
                counted += 1;
            }
            v = w.iter().map(|c| c / nw).collect();
        }
        if counted == 0 {
            0.0
        } else {
            (log_sum / counted as f64).exp()
        }
    }

    /// Upper bound on the smallest singular value, from the best approximate
    /// null vector among cross products of row pairs. For a matrix with an
    /// exact one-dimensional kernel the bound is sharp to rounding; for rank
    /// deficiency two or more every cross product degenerates and the bound
    /// falls back to zero, which is then also correct.
    pub fn smallest_singular_upper_bound(&self) -> f64 {
        assert_eq!(self.n, 3, "null-vector bound implemented for 3x3 only");
        let row = |i: usize| [self.get(i, 0), self.get(i, 1), self.get(i, 2)];
        let cross = |a: [Complex64; 3], b: [Complex64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let norm3 = |v: &[Complex64; 3]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let scale = self.max_abs_entry();
        if scale == 0.0 {
            return 0.0;
        }
        let mut best: Option<(f64, [Complex64; 3])> = None;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let v = cross(row(i), row(j));
            let nv = norm3(&v);
            if best.as_ref().map_or(true, |(b, _)| nv > *b) {
                best = Some((nv, v));
            }
        }
        let (nv, v) = best.unwrap();
        if nv <= 1e-14 * scale * scale {
            // rank <= 1 within rounding: at least two singular values vanish
            return 0.0;
        }
        let mv = self.mul_vec(&v);
        mv.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / nv
    }
}
