//! Spin geometry at desk scale: Clifford representations, twisted spinor
//! spaces, the 2-forms a spinor drags along, fiberwise curvature identities,
//! a universal parallel spinor, a flat-torus Dirac model and the Bochner-type
//! eigenvalue bounds that follow from the twisted Schrödinger–Lichnerowicz
//! formula.
//!
//! Everything is fiberwise linear algebra: spinors are dense complex vectors
//! in the lexicographic ε-basis of Δ_n = (ℂ²)^{⊗⌊n/2⌋}, operators are lists
//! of per-factor 2×2 blocks applied matrix-free, and each identity the
//! library claims is also something it can check numerically. The [`suites`]
//! module packages those checks; the `spinlab` binary drives them from the
//! command line.
//!
//! All indices in the public API are 0-based (frame vectors `e_0..e_{n-1}`,
//! twist frame `f_0..f_{r-1}`, tensor factors `0..m`).

pub mod bounds;
pub mod clifford;
pub mod curvature;
pub mod error;
pub mod forms;
pub mod json;
pub mod kron;
pub mod linalg;
pub mod pairs;
pub mod phi0;
pub mod rng;
pub mod spin;
pub mod suites;
pub mod torus;
pub mod twist;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
