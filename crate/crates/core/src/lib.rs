//! Degrees of entanglement for multipartite pure states.
//!
//! A pure state on sites with local dimensions `d_1..d_n` is a dense complex
//! tensor ([`PureState`]). Entanglement is profiled by measuring sites
//! `n, n-1, ...` in the computational basis and recording, for every outcome
//! branch, the 2x2 minors of the remaining coefficient matrix
//! ([`indicators`]). The same minors decide separability: a site splits off
//! exactly when its flattening has rank one ([`separability`]).
//!
//! ```
//! use entangle::{ket, indicators, separability};
//!
//! let w = ket::parse_state("(1/sqrt(3))(|001>+|010>+|100>)", None)?.normalize()?;
//! let profile = indicators::full_profile(&w)?;
//! assert_eq!(profile.level(2).unwrap().binary_pattern(), vec![1, 0]);
//! assert!(!separability::completely_separable(&w)?);
//! # Ok::<(), entangle::Error>(())
//! ```

pub mod error;
pub mod indicators;
pub mod ket;
pub mod random;
pub mod separability;
pub mod state;
pub mod statefile;
pub mod tables;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use state::{Flattening, PureState, Reduced};
