//! Sequential-explicit time stepping for split ODE systems.
//!
//! For da/dt = f(b), db/dt = g(a) the update is
//!
//! ```text
//! a_{n+1} = a_n + dt f(b_n)
//! b_{n+1} = b_n + dt g(a_{n+1})
//! ```
//!
//! i.e. forward Euler in each substep, but the second substep consumes the
//! freshly updated first variable. For linear f, g this is the symplectic
//! Euler method of the pair: the amplification matrix has unit-modulus
//! eigenvalues whenever f'g' < 0 and dt < 2 / sqrt(-f'g'), and the staggered
//! quadratic form g' a_n a_{n+1} / 2 - f' b_n^2 / 2 is conserved exactly.

/// One sequential-explicit step for a general split system.
pub fn step_seqexp(
    a: f64,
    b: f64,
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    dt: f64,
) -> (f64, f64) {
    let a1 = a + dt * f(b);
    let b1 = b + dt * g(a1);
    (a1, b1)
}

/// Linear split system da/dt = fp * b, db/dt = gp * a.
#[derive(Debug, Clone, Copy)]
pub struct LinearSeqExp {
    pub fp: f64,
    pub gp: f64,
}

impl LinearSeqExp {
    pub fn new(fp: f64, gp: f64) -> LinearSeqExp {
        LinearSeqExp { fp, gp }
    }

    pub fn step(&self, a: f64, b: f64, dt: f64) -> (f64, f64) {
        step_seqexp(a, b, |b| self.fp * b, |a| self.gp * a, dt)
    }

    /// Exact one-step map as a 2x2 matrix acting on (a, b).
    pub fn amplification(&self, dt: f64) -> [[f64; 2]; 2] {
        [
            [1.0, dt * self.fp],
            [dt * self.gp, 1.0 + dt * dt * self.fp * self.gp],
        ]
    }

    /// Eigenvalues of the amplification matrix, as (re, im) pairs, from the
    /// closed-form quadratic z^2 - tr z + det with det = 1.
    pub fn eigenvalues(&self, dt: f64) -> [(f64, f64); 2] {
        let tr = 2.0 + dt * dt * self.fp * self.gp;
        let disc = tr * tr / 4.0 - 1.0;
        if disc >= 0.0 {
            let r = disc.sqrt();
            [(tr / 2.0 + r, 0.0), (tr / 2.0 - r, 0.0)]
        } else {
            let r = (-disc).sqrt();
            [(tr / 2.0, r), (tr / 2.0, -r)]
        }
    }

    /// True when the pair is oscillatory (f'g' < 0), the regime in which the
    /// scheme is non-dissipative below its step-size bound.
    pub fn oscillatory(&self) -> bool {
        self.fp * self.gp < 0.0
    }

    /// Largest non-dissipative step size 2 / sqrt(-f'g'); infinity when the
    /// system is not oscillatory.
    pub fn max_stable_dt(&self) -> f64 {
        if self.oscillatory() {
            2.0 / (-self.fp * self.gp).sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// The exactly conserved staggered quadratic form
    /// g' a_n a_{n+1} / 2 - f' b_n^2 / 2.
    pub fn hamiltonian(&self, a_n: f64, a_np1: f64, b_n: f64) -> f64 {
        self.gp * a_n * a_np1 / 2.0 - self.fp * b_n * b_n / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_checked_steps() {
        // dt = 0 is the identity
        assert_eq!(step_seqexp(1.0, 0.0, |b| -b, |a| a, 0.0), (1.0, 0.0));
        // harmonic pair f = -b, g = a from (1, 0) with dt = 1/2:
        // a1 = 1 + 0.5*(-0) = 1, b1 = 0 + 0.5*1 = 0.5
        assert_eq!(step_seqexp(1.0, 0.0, |b| -b, |a| a, 0.5), (1.0, 0.5));
        // from (0, 1) with dt = 1: a1 = -1, b1 = 1 + 1*(-1) = 0
        assert_eq!(step_seqexp(0.0, 1.0, |b| -b, |a| a, 1.0), (-1.0, 0.0));
    }

    #[test]
    fn matrix_matches_stepper() {
        let sys = LinearSeqExp::new(-0.7, 1.3);
        let (a, b) = (0.35, -1.2);
        let dt = 0.21;
        let m = sys.amplification(dt);
        let (a1, b1) = sys.step(a, b, dt);
        assert!((m[0][0] * a + m[0][1] * b - a1).abs() < 1e-15);
        assert!((m[1][0] * a + m[1][1] * b - b1).abs() < 1e-15);
    }

    #[test]
    fn harmonic_matrix_entries() {
        // f' = -1, g' = 1, dt = 1: [[1, -1], [1, 0]]
        let m = LinearSeqExp::new(-1.0, 1.0).amplification(1.0);
        assert_eq!(m, [[1.0, -1.0], [1.0, 0.0]]);
    }

    #[test]
    fn unit_modulus_below_bound() {
        let sys = LinearSeqExp::new(-2.0, 3.0);
        let bound = sys.max_stable_dt();
        assert!((bound - 2.0 / 6.0f64.sqrt()).abs() < 1e-15);
        for frac in [0.1, 0.5, 0.9, 0.999] {
            for (re, im) in sys.eigenvalues(frac * bound) {
                let modulus = (re * re + im * im).sqrt();
                assert!(
                    (modulus - 1.0).abs() < 1e-12,
                    "dt fraction {frac}: |lambda| = {modulus}"
                );
            }
        }
    }

    #[test]
    fn real_growth_beyond_bound() {
        let sys = LinearSeqExp::new(-1.0, 1.0);
        let dt = 2.01 / 1.0;
        let max_mod = sys
            .eigenvalues(dt)
            .iter()
            .map(|(re, im)| (re * re + im * im).sqrt())
            .fold(0.0f64, f64::max);
        assert!(max_mod > 1.0 + 1e-6);
    }

    #[test]
    fn hamiltonian_hand_value() {
        // f' = -1, g' = 1, a_n = a_{n+1} = 1, b_n = 1: H = 1/2 + 1/2 = 1
        let sys = LinearSeqExp::new(-1.0, 1.0);
        assert_eq!(sys.hamiltonian(1.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn hamiltonian_is_conserved_for_1000_steps() {
        let sys = LinearSeqExp::new(-1.7, 0.9);
        let dt = 0.8 * sys.max_stable_dt();
        let (mut a, mut b) = (0.3, -1.1);
        let (a1, _) = sys.step(a, b, dt);
        let h0 = sys.hamiltonian(a, a1, b);
        let scale = h0.abs().max(1.0);
        for _ in 0..1000 {
            let (a_next, b_next) = sys.step(a, b, dt);
            let h = sys.hamiltonian(a, a_next, b);
            assert!(((h - h0) / scale).abs() < 1e-12);
            a = a_next;
            b = b_next;
        }
        // the trajectory actually moved
        assert!((a - 0.3).abs() > 1e-3);
    }

    #[test]
    fn eigenvalues_solve_characteristic_polynomial() {
        for (fp, gp, dt) in [(-1.0, 1.0, 1.0), (-4.0, 0.25, 1.5), (2.0, 3.0, 0.3)] {
            let sys = LinearSeqExp::new(fp, gp);
            let tr = 2.0 + dt * dt * fp * gp;
            for (re, im) in sys.eigenvalues(dt) {
                // z^2 - tr z + 1 = 0
                let zre = re * re - im * im - tr * re + 1.0;
                let zim = 2.0 * re * im - tr * im;
                assert!(zre.abs() < 1e-12 && zim.abs() < 1e-12);
            }
        }
    }
}
