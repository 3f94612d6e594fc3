//! Complex polynomials: evaluation, root finding, and a unit-disk test.
//!
//! Everything here targets the low degrees (up to six) that show up as
//! characteristic polynomials of amplification matrices, so simplicity and
//! robustness win over asymptotic speed. Roots come from the Durand-Kerner
//! simultaneous iteration; the unit-disk membership test is a Schur-Cohn
//! style coefficient recursion that never computes roots at all.

use num_complex::Complex64;

/// Dense polynomial with `coeffs[k]` the coefficient of `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

/// Convergence threshold for the root iteration (relative step size).
const ROOT_STEP_TOL: f64 = 1e-14;
/// Iteration cap; degree <= 6 converges in far fewer steps.
const ROOT_MAX_ITER: usize = 600;

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Poly {
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Poly {
        Poly {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    /// Monic polynomial with the given roots, built by repeated convolution.
    pub fn from_roots(roots: &[Complex64]) -> Poly {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Poly { coeffs }
    }

    /// Degree after ignoring leading coefficients that are exactly zero.
    /// Returns None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.norm_sqr() != 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![]);
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All complex roots via Durand-Kerner. Leading coefficients below
    /// `1e-14` of the largest coefficient are treated as zero, which drops
    /// the associated near-infinite roots.
    pub fn roots(&self) -> Vec<Complex64> {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            return vec![];
        }
        let n = match self
            .coeffs
            .iter()
            .rposition(|c| c.norm() > 1e-14 * scale)
        {
            Some(n) => n,
            None => return vec![],
        };
        if n == 0 {
            return vec![];
        }
        // monic coefficients
        let lead = self.coeffs[n];
        let a: Vec<Complex64> = self.coeffs[..=n].iter().map(|&c| c / lead).collect();
        let horner = |z: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &c in a.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        // Cauchy bound on root magnitudes seeds the start points
        let bound = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| seed.powu(k as u32 + 1) * bound)
            .collect();
        let mut quiet_rounds = 0;
        for _ in 0..ROOT_MAX_ITER {
            let mut max_step = 0.0f64;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        denom *= z[i] - z[j];
                    }
                }
                if denom.norm() < 1e-300 {
                    // coincident iterates: nudge apart and retry next sweep
                    z[i] += Complex64::new(1e-6 * bound, 1e-6 * bound);
                    max_step = f64::INFINITY;
                    continue;
                }
                let step = horner(z[i]) / denom;
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
            if max_step < ROOT_STEP_TOL {
                quiet_rounds += 1;
                if quiet_rounds >= 2 {
                    break;
                }
            } else {
                quiet_rounds = 0;
            }
        }
        z
    }

    /// Largest root magnitude; 0 for constants and the zero polynomial.
    pub fn max_abs_root(&self) -> f64 {
        self.roots().iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// True when every root lies in the closed unit disk, decided purely on
    /// coefficients by the Schur-Cohn recursion
    ///
    /// ```text
    /// f1(z) = (conj(a_n) f(z) - a_0 f*(z)) / z,   f*(z) = sum conj(a_{n-k}) z^k
    /// ```
    ///
    /// with three outcomes per level: `f1 ~ 0` means f is self-inversive and
    /// the question reduces to the derivative (all roots on the circle iff
    /// the derivative's roots stay in the disk); `|a_n| > |a_0|` transfers
    /// the property to the lower-degree f1; otherwise some root escapes.
    /// `tol` guards both comparisons; polynomials with roots within about
    /// `tol` of the circle may be classified either way.
    pub fn all_roots_in_closed_unit_disk(&self, tol: f64) -> bool {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            return true;
        }
        let n0 = match self
            .coeffs
            .iter()
            .rposition(|c| c.norm() > 1e-14 * scale)
        {
            Some(n) => n,
            None => return true,
        };
        let mut f: Vec<Complex64> = self.coeffs[..=n0].to_vec();
        loop {
            // renormalize each level so tol is a relative threshold
            let m = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if m == 0.0 {
                return true;
            }
            for c in f.iter_mut() {
                *c /= m;
            }
            let n = f.len() - 1;
            if n == 0 {
                return true;
            }
            let a0 = f[0];
            let an = f[n];
            // f1 coefficients; the z^0 term of conj(a_n) f - a_0 f* vanishes
            // identically, so dividing by z just reindexes
            let f1: Vec<Complex64> = (1..=n)
                .map(|k| an.conj() * f[k] - a0 * f[n - k].conj())
                .collect();
            let f1_norm = f1.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if f1_norm <= tol {
                // self-inversive: recurse on the derivative
                f = f
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &c)| c * k as f64)
                    .collect();
                continue;
            }
            if an.norm() > a0.norm() + tol {
                f = f1;
                continue;
            }
            return false;
        }
    }
}
