//! Al-Salam–Carlitz polynomials `U_n^(a)(x; q)` for complex `a` and `q`.
//!
//! The crate builds the polynomials, integrates against their weight on the
//! two-spiral q-lattice, checks the orthogonality and summation identities,
//! locates zeros in the complex plane, and evaluates the associated
//! generating functions.

pub mod ascpoly;
pub mod cli;
pub mod error;
pub mod genfun;
pub mod orthocheck;
pub mod poly;
pub mod qkernel;
pub mod qlattice;
pub mod report;
pub mod sum;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::Poly;
