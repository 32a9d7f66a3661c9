//! Sharp upper bounds for `|z_1 + ... + z_N|` when the points `z_j` lie on
//! the unit circle, no open arc of length `φ` holds more than `n` of them,
//! and no open arc of length `δ` holds more than one.
//!
//! The crate is organized by task:
//!
//! * [`geometry`]: angles, arcs, arc counting, the semicircle counting
//!   function `K(θ)`.
//! * [`bounds`]: closed-form evaluation of every bound in the family.
//! * [`extremal`]: the configurations on which the sharp bound is attained.
//! * [`verify`]: admissibility checks, theorem conformance, an exhaustive
//!   lattice oracle and a constrained ascent optimizer.
//! * [`residue`]: Fourier coefficients of residue sets and the interval
//!   concentration they force.
//!
//! ```
//! use arcsum::{bounds, extremal};
//!
//! let bound = bounds::main_bound(1, 2, 0.5, 2.0).unwrap();
//! let config = extremal::build_extremal(1, 2, 0.5, 2.0).unwrap();
//! assert!((config.sum().norm() - bound).abs() < 1e-12);
//! ```
//!
//! The guide in `book/` walks through the same material with runnable
//! examples; its chapters are compiled as doc-tests of this crate.

pub mod bounds;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod residue;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{normalize_angle, Angle, ArcWindow, Closure, Configuration};

// Every Rust block in the guide runs as a doc-test.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/extremal.md")]
    mod extremal {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/residues.md")]
    mod residues {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
