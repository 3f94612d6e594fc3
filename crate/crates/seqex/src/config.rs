//! Run configuration: flat key=value files, command-line overrides, and
//! per-scheme / per-case defaults
//!
//! A configuration starts from [`RunConfig::new`], absorbs a file through
//! [`parse_config`] or [`RunConfig::apply`] (line numbers feed the error
//! messages), then absorbs command-line flags the same way. Values left
//! unset resolve through the documented defaults: gamma is fixed at 1.4,
//! the Courant number is 0.9 of the scheme's stability bound for field
//! runs and the case's published value for flow runs.

use std::path::PathBuf;
use std::str::FromStr;

use crate::cases::CaseId;
use crate::grid::Grid;
use crate::scheme::SchemeId;

/// What the front end has been asked to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Time integration with snapshots.
    Run,
    /// Step-size bound table (field schemes) or map (flow solver).
    Stability,
    /// Grid refinement study on the smooth vortex.
    Convergence,
    /// Norm scaling series on the slow vortex.
    LowMach,
    /// List the flow cases.
    Cases,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Stability => "stability",
            Command::Convergence => "convergence",
            Command::LowMach => "lowmach",
            Command::Cases => "cases",
        }
    }
}

/// Which solver family a run or sweep addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Maxwell,
    Euler,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "maxwell" | "field" | "acoustic" | "acoustics" => Ok(Family::Maxwell),
            "euler" | "flow" => Ok(Family::Euler),
            other => Err(format!("unknown family `{other}`; expected maxwell or euler")),
        }
    }
}

/// The solver a `run` drives: one of the field schemes, or the flow solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Maxwell(SchemeId),
    Euler,
}

impl FromStr for Solver {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("euler") {
            return Ok(Solver::Euler);
        }
        SchemeId::from_str(s).map(Solver::Maxwell).map_err(|e| e.to_string())
    }
}

fn case_for(name: &str, mach: f64) -> Result<CaseId, String> {
    match name.trim().to_ascii_lowercase().as_str() {
        "sod" => Ok(CaseId::Sod),
        "lax" => Ok(CaseId::Lax),
        "leveque" => Ok(CaseId::Leveque),
        "gresho" => Ok(CaseId::GreshoVortex(mach)),
        "vortex" | "smooth-vortex" | "smooth_vortex" => Ok(CaseId::SmoothVortex(mach)),
        "kh" | "kelvin-helmholtz" | "kelvin_helmholtz" => Ok(CaseId::KelvinHelmholtz),
        other => Err(format!(
            "unknown case `{other}`; expected sod, lax, leveque, gresho, vortex or kh"
        )),
    }
}

/// A configuration error, carrying the offending line where one exists.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    NotKeyValue { line: usize, text: String },
    #[error("line {line}: bad value for `{key}`: {msg}")]
    BadValue { line: usize, key: String, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Validated front-end configuration. Optional fields fall back to the
/// scheme or case defaults; the `effective_*` methods resolve them.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub solver: Solver,
    pub case_name: String,
    /// True once `scheme` / `case` were given explicitly; drives which
    /// defaults win (an explicit case selects the flow solver and its
    /// published step parameters).
    pub solver_explicit: bool,
    pub case_explicit: bool,
    pub mach: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub out: PathBuf,
    /// Field snapshots per run (evenly spaced, final time included).
    pub snapshots: usize,
    /// Samples per wavenumber axis in the field-scheme bound sweeps.
    pub beta_samples: usize,
    /// Wavenumber resolution of the flow-solver stability map.
    pub beta_res: f64,
    /// Refinement levels (cells per axis) of the convergence study.
    pub grids: Vec<usize>,
    /// Mach numbers of the low-Mach scaling series.
    pub machs: Vec<f64>,
    pub family: Family,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            solver: Solver::Maxwell(SchemeId::YeeOriginal),
            case_name: "sod".to_string(),
            solver_explicit: false,
            case_explicit: false,
            mach: None,
            nx: None,
            ny: None,
            cfl: None,
            t_end: None,
            out: PathBuf::from("out"),
            snapshots: 1,
            beta_samples: 128,
            beta_res: 0.1,
            grids: vec![25, 50, 100, 200],
            machs: vec![1e-1, 1e-2, 1e-3],
            family: Family::Maxwell,
            threads: None,
        }
    }

    /// Select the solver explicitly (a scheme name or the flow solver).
    pub fn set_solver(&mut self, solver: Solver) {
        self.solver = solver;
        self.solver_explicit = true;
    }

    /// Select a flow case by name. Without an explicit scheme this also
    /// switches the run to the flow solver.
    pub fn set_case(&mut self, name: &str) -> Result<(), String> {
        case_for(name, 0.1)?;
        self.case_name = name.trim().to_ascii_lowercase();
        self.case_explicit = true;
        if !self.solver_explicit {
            self.solver = Solver::Euler;
        }
        Ok(())
    }

    /// Apply one `key = value` assignment; `line` is for error messages.
    pub fn apply(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let bad = |msg: String| ConfigError::BadValue {
            line,
            key: key.to_string(),
            msg,
        };
        let v = value.trim();
        match key {
            "scheme" => {
                let solver = v.parse().map_err(bad)?;
                self.set_solver(solver);
            }
            "case" => self.set_case(v).map_err(bad)?,
            "mach" => self.mach = Some(parse_num(v).map_err(bad)?),
            "nx" => self.nx = Some(parse_num(v).map_err(bad)?),
            "ny" => self.ny = Some(parse_num(v).map_err(bad)?),
            "cfl" => self.cfl = Some(parse_num(v).map_err(bad)?),
            "t_end" | "t-end" => self.t_end = Some(parse_num(v).map_err(bad)?),
            "out" => self.out = PathBuf::from(v),
            "snapshots" => self.snapshots = parse_num(v).map_err(bad)?,
            "beta_samples" => self.beta_samples = parse_num(v).map_err(bad)?,
            "beta_res" => self.beta_res = parse_num(v).map_err(bad)?,
            "grids" => self.grids = parse_list(v).map_err(bad)?,
            "machs" => self.machs = parse_list(v).map_err(bad)?,
            "family" => self.family = v.parse().map_err(bad)?,
            "threads" => self.threads = Some(parse_num(v).map_err(bad)?),
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Check the documented invariants on everything set so far.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        if let Some(c) = self.cfl {
            if !(c > 0.0 && c.is_finite()) {
                return fail(format!("cfl must be positive and finite, got {c}"));
            }
        }
        if let Some(t) = self.t_end {
            if !(t >= 0.0 && t.is_finite()) {
                return fail(format!("t_end must be nonnegative, got {t}"));
            }
        }
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if let Some(n) = n {
                if n < 2 {
                    return fail(format!("{name} must be at least 2, got {n}"));
                }
            }
        }
        if let Some(m) = self.mach {
            if !(m > 0.0) {
                return fail(format!("mach must be positive, got {m}"));
            }
        }
        if self.grids.iter().any(|&n| n < 2) || self.grids.is_empty() {
            return fail("grids must list sizes of at least 2".to_string());
        }
        if self.machs.iter().any(|&m| !(m > 0.0)) || self.machs.is_empty() {
            return fail("machs must list positive values".to_string());
        }
        if !(self.beta_res > 0.0 && self.beta_res <= std::f64::consts::PI) {
            return fail(format!("beta_res must lie in (0, pi], got {}", self.beta_res));
        }
        if self.beta_samples < 8 {
            return fail(format!("beta_samples must be at least 8, got {}", self.beta_samples));
        }
        self.case()?;
        Ok(())
    }

    /// The selected flow case with its Mach number filled in.
    pub fn case(&self) -> Result<CaseId, ConfigError> {
        case_for(&self.case_name, self.effective_mach()).map_err(ConfigError::Invalid)
    }

    fn case_drives_defaults(&self) -> bool {
        self.case_explicit || matches!(self.solver, Solver::Euler)
    }

    pub fn effective_mach(&self) -> f64 {
        // The refinement study follows the published setup at Mach 0.3; the
        // other vortex runs default to the well-subsonic 0.1.
        self.mach.unwrap_or(match self.command {
            Command::Convergence => 0.3,
            _ => 0.1,
        })
    }

    pub fn effective_cfl(&self) -> f64 {
        if let Some(c) = self.cfl {
            return c;
        }
        match (self.case_drives_defaults(), self.solver) {
            (true, _) => self
                .case()
                .map(|c| c.setup().default_cfl)
                .unwrap_or(0.9),
            (false, Solver::Maxwell(s)) => s.default_cfl(),
            (false, Solver::Euler) => 0.9,
        }
    }

    pub fn effective_t_end(&self) -> f64 {
        if let Some(t) = self.t_end {
            return t;
        }
        if self.case_drives_defaults() {
            self.case().map(|c| c.setup().default_t_end).unwrap_or(1.0)
        } else {
            1.0
        }
    }

    pub fn effective_nx(&self) -> usize {
        if let Some(n) = self.nx {
            return n;
        }
        if self.case_drives_defaults() {
            self.case().map(|c| c.setup().default_nx).unwrap_or(64)
        } else {
            64
        }
    }

    /// Grid of the selected flow case, honoring nx/ny overrides (square
    /// cells unless both are forced).
    pub fn euler_grid(&self) -> Result<Grid, ConfigError> {
        let setup = self.case()?.setup();
        let nx = self.effective_nx();
        let mut grid = setup.grid_with(nx);
        if let Some(ny) = self.ny {
            let dy = if setup.lengths[1] > 0.0 {
                setup.lengths[1] / ny as f64
            } else {
                grid.dx
            };
            grid = Grid::new_2d(nx, ny, grid.dx, dy, setup.bc);
        }
        Ok(grid)
    }
}

fn parse_num<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| e.to_string())
}

fn parse_list<T: FromStr>(v: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    v.split(',')
        .map(|piece| parse_num(piece.trim()))
        .collect()
}

/// Parse a flat key=value configuration text. Blank lines and `#` comments
/// are skipped; errors carry 1-based line numbers.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_into(RunConfig::new(Command::Run), text)
}

/// Like [`parse_config`] but layering onto an existing configuration
/// (used to seed the subcommand before the file applies).
pub fn parse_config_into(mut cfg: RunConfig, text: &str) -> Result<RunConfig, ConfigError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.trim();
        if stripped.is_empty() || stripped.starts_with('#') {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(ConfigError::NotKeyValue {
                line,
                text: stripped.to_string(),
            });
        };
        cfg.apply(key.trim(), value, line)?;
    }
    cfg.validate()?;
    Ok(cfg)
}
