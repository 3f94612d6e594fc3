//! Exact Riemann solver for the 1D compressible Euler equations
//!
//! Ideal gas with constant ratio of specific heats. The star-region pressure
//! is found by a bracketed Newton iteration on the standard two-sided wave
//! relation; the self-similar solution is then sampled at any ray xi = x/t.
//! Used as the reference solution for the shock-tube test cases.

/// Primitive gas state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannProblem {
    pub left: GasState,
    pub right: GasState,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RiemannError {
    #[error("{side} state needs positive rho and p, got rho = {rho}, p = {p}")]
    NonPositiveState { side: &'static str, rho: f64, p: f64 },
    #[error("gamma must exceed 1, got {0}")]
    BadGamma(f64),
    #[error("the states expand into vacuum; no star region exists")]
    VacuumFormed,
    #[error("pressure iteration stalled at residual {residual} after {iterations} steps")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// Star region: the constant pressure and velocity between the two outer
/// waves, and the densities on each side of the contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarRegion {
    pub p: f64,
    pub u: f64,
    pub rho_left: f64,
    pub rho_right: f64,
}

impl RiemannProblem {
    pub fn validate(&self) -> Result<(), RiemannError> {
        for (side, s) in [("left", self.left), ("right", self.right)] {
            if !(s.rho > 0.0 && s.p > 0.0 && s.rho.is_finite() && s.p.is_finite() && s.u.is_finite())
            {
                return Err(RiemannError::NonPositiveState {
                    side,
                    rho: s.rho,
                    p: s.p,
                });
            }
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(RiemannError::BadGamma(self.gamma));
        }
        Ok(())
    }
}

fn sound_speed(s: GasState, g: f64) -> f64 {
    (g * s.p / s.rho).sqrt()
}

/// One-sided wave function f_K(p) and its derivative: the velocity change
/// across the K-side wave if the star pressure were p.
fn wave_fn(p: f64, s: GasState, g: f64) -> (f64, f64) {
    let a = sound_speed(s, g);
    if p > s.p {
        // Shock branch.
        let ak = 2.0 / ((g + 1.0) * s.rho);
        let bk = (g - 1.0) / (g + 1.0) * s.p;
        let root = (ak / (p + bk)).sqrt();
        let f = (p - s.p) * root;
        let df = root * (1.0 - 0.5 * (p - s.p) / (p + bk));
        (f, df)
    } else {
        // Rarefaction branch; the derivative is 1/(rho a) at p = p_K.
        let ex = (g - 1.0) / (2.0 * g);
        let f = 2.0 * a / (g - 1.0) * ((p / s.p).powf(ex) - 1.0);
        let df = (p / s.p).powf(-(g + 1.0) / (2.0 * g)) / (s.rho * a);
        (f, df)
    }
}

/// Solve for the star pressure and velocity. Newton iteration with a hard
/// bracket; converges to machine precision for any non-vacuum input.
pub fn solve_star(problem: &RiemannProblem) -> Result<StarRegion, RiemannError> {
    problem.validate()?;
    let g = problem.gamma;
    let (l, r) = (problem.left, problem.right);
    let (al, ar) = (sound_speed(l, g), sound_speed(r, g));
    let du = r.u - l.u;
    if 2.0 * (al + ar) / (g - 1.0) <= du {
        return Err(RiemannError::VacuumFormed);
    }

    let total = |p: f64| {
        let (fl, dfl) = wave_fn(p, l, g);
        let (fr, dfr) = wave_fn(p, r, g);
        (fl + fr + du, dfl + dfr)
    };

    // Two-rarefaction guess is exact when both waves are fans and a sane
    // positive start otherwise.
    let ex = (g - 1.0) / (2.0 * g);
    let guess = ((al + ar - 0.5 * (g - 1.0) * du)
        / (al / l.p.powf(ex) + ar / r.p.powf(ex)))
    .powf(1.0 / ex);
    let mut p = guess.max(1e-300);

    // f is increasing in p: f(0+) = -2(aL+aR)/(g-1) + du < 0 by the vacuum
    // check, so a zero exists and bisection on [lo, hi] is a safe fallback.
    let mut lo = 0.0_f64;
    let mut hi = p.max(l.p.max(r.p));
    while total(hi).0 < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(RiemannError::NoConvergence {
                iterations: 0,
                residual: f64::INFINITY,
            });
        }
    }
    if !(p > lo && p < hi) {
        p = 0.5 * hi;
    }

    let mut residual = f64::INFINITY;
    for it in 0..200 {
        let (f, df) = total(p);
        residual = f.abs();
        if f > 0.0 {
            hi = p;
        } else {
            lo = p;
        }
        let newton = p - f / df;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let change = (next - p).abs();
        p = next;
        if change <= 1e-14 * p.abs() + 1e-300 {
            let (fl, _) = wave_fn(p, l, g);
            let (fr, _) = wave_fn(p, r, g);
            let u = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);
            return Ok(StarRegion {
                p,
                u,
                rho_left: star_density(p, l, g),
                rho_right: star_density(p, r, g),
            });
        }
        let _ = it;
    }
    Err(RiemannError::NoConvergence {
        iterations: 200,
        residual,
    })
}

fn star_density(p: f64, s: GasState, g: f64) -> f64 {
    let beta = (g - 1.0) / (g + 1.0);
    if p > s.p {
        s.rho * (p / s.p + beta) / (beta * p / s.p + 1.0)
    } else {
        s.rho * (p / s.p).powf(1.0 / g)
    }
}

/// Sample the self-similar solution along the ray `xi = x / t`.
pub fn exact_riemann(problem: &RiemannProblem, xi: f64) -> Result<GasState, RiemannError> {
    let star = solve_star(problem)?;
    Ok(sample_with_star(problem, &star, xi))
}

/// Sampling with a precomputed star region, for evaluating many rays.
pub fn sample_with_star(problem: &RiemannProblem, star: &StarRegion, xi: f64) -> GasState {
    let g = problem.gamma;
    if xi <= star.u {
        side_sample(problem.left, star.p, star.u, star.rho_left, g, xi, 1.0)
    } else {
        side_sample(problem.right, star.p, star.u, star.rho_right, g, xi, -1.0)
    }
}

/// One side of the fan/shock structure; `sgn` is +1 for the left wave,
/// -1 for the mirrored right wave.
fn side_sample(s: GasState, ps: f64, us: f64, rs: f64, g: f64, xi: f64, sgn: f64) -> GasState {
    let a = sound_speed(s, g);
    if ps > s.p {
        // Shock: one speed from the mass flux through the front.
        let speed = s.u - sgn * a * ((g + 1.0) / (2.0 * g) * ps / s.p + (g - 1.0) / (2.0 * g)).sqrt();
        if sgn * xi < sgn * speed {
            s
        } else {
            GasState { rho: rs, u: us, p: ps }
        }
    } else {
        // Rarefaction fan between its head and tail characteristics.
        let astar = a * (ps / s.p).powf((g - 1.0) / (2.0 * g));
        let head = s.u - sgn * a;
        let tail = us - sgn * astar;
        if sgn * xi < sgn * head {
            s
        } else if sgn * xi > sgn * tail {
            GasState { rho: rs, u: us, p: ps }
        } else {
            let afan = 2.0 / (g + 1.0) * (a + sgn * (g - 1.0) / 2.0 * (s.u - xi));
            let u = 2.0 / (g + 1.0) * (sgn * a + (g - 1.0) / 2.0 * s.u + xi);
            let rho = s.rho * (afan / a).powf(2.0 / (g - 1.0));
            let p = s.p * (afan / a).powf(2.0 * g / (g - 1.0));
            GasState { rho, u, p }
        }
    }
}
