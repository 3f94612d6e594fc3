//! Catalog of the solver family: scheme identifiers, staggering layouts and
//! stability constants shared by the steppers, the Fourier toolbox and the CLI.

use std::fmt;
use std::str::FromStr;

use crate::grid::Layout;

/// Identifiers for the Maxwell/acoustic steppers and the 3D variant.
///
/// The seven sequential-explicit schemes update the magnetic field first and
/// then the electric field with the fresh values; `UpwindSplit` and
/// `StatPresReference` are plain forward-Euler reference methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    /// Staggered leapfrog on the classical node/edge placement.
    YeeOriginal,
    /// Same update algebra as `YeeOriginal` with every unknown at cell centers.
    YeeCollocated,
    /// `YeeCollocated` rewritten as a single-stage update (E consumes expanded B).
    YeeCollocatedExplicit,
    /// Collocated scheme with vertex-averaged two-point derivatives.
    YeeCollocatedExtended,
    /// Vertex-averaged derivatives with B at nodes and E at cell centers.
    YeeExtendedStaggered,
    /// Collocated scheme with plain central derivatives.
    Central,
    /// Central derivatives with a perpendicular three-point average.
    CentralExtended,
    /// Forward Euler, dimensionally split upwind diffusion (dissipative reference).
    UpwindSplit,
    /// Forward Euler, averaged central derivatives plus averaged diffusion
    /// (stationarity-preserving reference family).
    StatPresReference,
    /// Three-dimensional variant of `YeeExtendedStaggered` (B at nodes, E at cells).
    YeeExtended3D,
}

pub const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

impl SchemeId {
    pub const ALL: [SchemeId; 10] = [
        SchemeId::YeeOriginal,
        SchemeId::YeeCollocated,
        SchemeId::YeeCollocatedExplicit,
        SchemeId::YeeCollocatedExtended,
        SchemeId::YeeExtendedStaggered,
        SchemeId::Central,
        SchemeId::CentralExtended,
        SchemeId::UpwindSplit,
        SchemeId::StatPresReference,
        SchemeId::YeeExtended3D,
    ];

    /// The sequential-explicit 2D schemes, in catalog order.
    pub const SEQ_EXP_2D: [SchemeId; 7] = [
        SchemeId::YeeOriginal,
        SchemeId::YeeCollocated,
        SchemeId::YeeCollocatedExplicit,
        SchemeId::YeeCollocatedExtended,
        SchemeId::YeeExtendedStaggered,
        SchemeId::Central,
        SchemeId::CentralExtended,
    ];

    pub fn is_sequential_explicit(self) -> bool {
        !matches!(self, SchemeId::UpwindSplit | SchemeId::StatPresReference)
    }

    pub fn is_three_d(self) -> bool {
        matches!(self, SchemeId::YeeExtended3D)
    }

    /// Courant number c dt/dx used as the step-size bound on a square grid.
    ///
    /// Sequential-explicit values are exact stability limits (closed-form
    /// symbol maxima). `UpwindSplit` carries the measured value frozen from
    /// the bisection sweep in `stability`. `StatPresReference` reuses that
    /// value for step selection only: as written, its one-sided
    /// cross-difference terms amplify the checkerboard mode at rate 2/dx for
    /// every dt, so it has no neutral von Neumann bound of its own (the
    /// `stability` sweep measures ~0 for it).
    pub fn cfl_max(self) -> f64 {
        match self {
            SchemeId::YeeOriginal | SchemeId::YeeCollocated | SchemeId::YeeCollocatedExplicit => {
                SQRT_HALF
            }
            SchemeId::YeeCollocatedExtended
            | SchemeId::YeeExtendedStaggered
            | SchemeId::YeeExtended3D => 1.0,
            SchemeId::Central => std::f64::consts::SQRT_2,
            SchemeId::CentralExtended => 2.0,
            SchemeId::UpwindSplit => UPWIND_SPLIT_CFL_MEASURED,
            SchemeId::StatPresReference => STAT_PRES_STEP_BOUND,
        }
    }

    /// Default Courant number used by drivers: a 0.9 safety factor below the bound.
    pub fn default_cfl(self) -> f64 {
        0.9 * self.cfl_max()
    }

    /// Staggering of (Bz, Ex, Ey) for the 2D schemes; `None` for the 3D scheme
    /// (whose placement is fixed: B components at nodes, E components at cells).
    pub fn layouts_2d(self) -> Option<[Layout; 3]> {
        match self {
            SchemeId::YeeOriginal => Some([Layout::Node, Layout::EdgeY, Layout::EdgeX]),
            SchemeId::YeeExtendedStaggered => Some([Layout::Node, Layout::Cell, Layout::Cell]),
            SchemeId::YeeExtended3D => None,
            _ => Some([Layout::Cell, Layout::Cell, Layout::Cell]),
        }
    }

    /// Canonical name, also accepted (case-insensitively) by `FromStr`.
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::YeeOriginal => "YeeOriginal",
            SchemeId::YeeCollocated => "YeeCollocated",
            SchemeId::YeeCollocatedExplicit => "YeeCollocatedExplicit",
            SchemeId::YeeCollocatedExtended => "YeeCollocatedExtended",
            SchemeId::YeeExtendedStaggered => "YeeExtendedStaggered",
            SchemeId::Central => "Central",
            SchemeId::CentralExtended => "CentralExtended",
            SchemeId::UpwindSplit => "UpwindSplit",
            SchemeId::StatPresReference => "StatPresReference",
            SchemeId::YeeExtended3D => "YeeExtended3D",
        }
    }

    /// Short lowercase alias used in config files and on the command line.
    pub fn alias(self) -> &'static str {
        match self {
            SchemeId::YeeOriginal => "yee",
            SchemeId::YeeCollocated => "yee-collocated",
            SchemeId::YeeCollocatedExplicit => "yee-explicit",
            SchemeId::YeeCollocatedExtended => "yee-extended",
            SchemeId::YeeExtendedStaggered => "yee-staggered",
            SchemeId::Central => "central",
            SchemeId::CentralExtended => "central-extended",
            SchemeId::UpwindSplit => "upwind",
            SchemeId::StatPresReference => "statpres",
            SchemeId::YeeExtended3D => "yee-3d",
        }
    }
}

/// Stability bound of the dimensionally split upwind reference (square
/// grid), frozen from the `stability::cfl_max` sweep; the binding mode is
/// the checkerboard, where 1 - 4 dt/dx hits -1.
pub const UPWIND_SPLIT_CFL_MEASURED: f64 = 0.5;

/// Step-size bound used to *run* the stationarity-preserving reference.
/// This is not a stability limit: the scheme's checkerboard mode grows at
/// rate 2/dx regardless of dt (see `stability`), so the upwind sibling's
/// bound is borrowed to pick usable demo steps.
pub const STAT_PRES_STEP_BOUND: f64 = UPWIND_SPLIT_CFL_MEASURED;

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error for scheme-name parsing, mentioning every accepted spelling.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown scheme `{input}`; expected one of {}", SchemeId::ALL.map(|s| s.alias()).join(", "))]
pub struct ParseSchemeError {
    pub input: String,
}

impl FromStr for SchemeId {
    type Err = ParseSchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let want = s.trim().to_ascii_lowercase();
        SchemeId::ALL
            .into_iter()
            .find(|id| {
                want == id.alias()
                    || want == id.name().to_ascii_lowercase()
                    || want == id.alias().replace('-', "_")
            })
            .ok_or(ParseSchemeError { input: s.to_string() })
    }
}
