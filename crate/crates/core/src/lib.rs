//! Billiards within confocal quadrics and the discrete systems built on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`projective`]: homogeneous points, hyperplanes and lines, rank-based
//!   incidence residuals and cross-ratios.
//! * [`confocal`]: the confocal family `sum x_i^2 / (a_i - lambda) = 1`, its
//!   dual tangency form, caustic parameters and touching points.
//! * [`billiards`]: line/quadric intersection, reflection, trajectories and
//!   the Chasles caustic parameters of a line.
//! * [`drnet`]: double reflection configurations and double reflection nets
//!   over finite windows of `Z^m`.
//! * [`hyperlattice`]: the midpoint lattice, its honeycomb cells, the
//!   hyperplane map `H`, the point map `P` and their verification.
//! * [`io`]: scene configuration, JSON export, SVG rendering and the
//!   end-to-end verification report used by the command line tool.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs.

pub mod billiards;
pub mod confocal;
pub mod drnet;
mod error;
pub mod hyperlattice;
pub mod io;
mod poly;
pub mod projective;
pub mod scene;

pub use error::{Error, Result};

/// Numerical thresholds shared by the checks in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value threshold for rank tests (collinearity, pencils).
    pub tol_rank: f64,
    /// Allowed deviation `|CR + 1|` for harmonic quadruples.
    pub tol_cr: f64,
    /// Relative drift allowed between caustic parameter sets.
    pub tol_caustic: f64,
    /// Minimum forward line parameter when choosing the next bounce.
    pub tol_forward: f64,
    /// Agreement of lines built along different construction routes.
    pub tol_closure: f64,
    /// Tangency and on-quadric residuals.
    pub tol_incidence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_rank: 1e-9,
            tol_cr: 1e-7,
            tol_caustic: 1e-8,
            tol_forward: 1e-9,
            tol_closure: 1e-8,
            tol_incidence: 1e-10,
        }
    }
}
