//! Geometric constants of planar normed spaces: the generalized
//! Dunkl–Williams constants, their orthogonality-constrained variants, and the
//! classical moduli they are bounded by.
//!
//! ```
//! use banach_core::{dw_general, Space, Weights};
//!
//! let r = dw_general(&Space::l2(), Weights::unit(), 64).unwrap();
//! assert!((r.value() - 2.0).abs() < 1e-6);
//! ```

mod dw;
mod error;
mod estimate;
pub mod harness;
mod moduli;
mod optim;
mod orthogonality;
mod pairs;
mod planar;
mod search;
mod spaces;

pub use dw::{
    dw_b, dw_b_direct, dw_direct, dw_general, dw_i, dw_objective, dw_s, ms_b, psi_inf, DwResult,
    Method, Objective, Weights, Witness,
};
pub use error::{Error, Result};
pub use estimate::{Bias, ConstantEstimate, EstimateKind};
pub use moduli::{
    delta, eps0, james_direct, james_via_delta, rect_constant, rho, rho_prime0, RHO_STEPS, S_RANGE,
};
pub use optim::{golden_min, log_grid};
pub use orthogonality::{
    angular_distance, birkhoff_partners, is_birkhoff, is_isosceles, is_singer, isosceles_radii,
    min_along_line, LineMin, OrthTolerance,
};
pub use planar::Point2;
pub use search::MIN_LEVEL;
pub use spaces::{Exponent, ScaledSpace, Space, SpaceSpec, UnitVector, Vector, UNIT_TOL};
