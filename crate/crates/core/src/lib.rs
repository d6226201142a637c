//! Exact Poincaré polynomials and Betti numbers of the Kontsevich (`M`),
//! Simpson (`S`) and Hilbert (`H`) compactifications of conics and twisted
//! cubics in a Grassmannian `Gr(k,n)`.
//!
//! Coefficients are arbitrary-precision integers; nothing is approximated.
//! Each `S` and `H` space can be computed from its closed product formula or
//! by replaying the blow-up/blow-down chain from the Kontsevich space, and
//! [`pipelines::verify_suite`] checks that the two agree.
//!
//! ```
//! use grbetti::pipelines::{s3, Mode};
//!
//! let plane_cubics = s3(1, 3, Mode::Pipeline).unwrap();
//! assert_eq!(plane_cubics.to_string(), "1 + 2q + 3q^2 + 3q^3 + 3q^4 + 3q^5 + 3q^6 + 2q^7 + q^8");
//! ```
//!
//! The `examples/` directory has one runnable program per capability.

pub mod catalog;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod pipelines;
pub mod polyring;
pub mod surgery;

pub use catalog::PoincarePoly;
pub use error::{Error, Result};
pub use pipelines::{Compactification, Mode, ModuliKey};
pub use polyring::{IntPoly, RatExpr};
