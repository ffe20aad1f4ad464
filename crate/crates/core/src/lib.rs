//! Exact arithmetic for generalized alternating hyperharmonic numbers.
//!
//! The core object is the kernel `T(n, t, r, s1, s2)`, a polynomial in `n`
//! and `t` with parity factors `(-1)^(n-1)` and `(-1)^(t-1)`, such that
//! `H_n^(p,r,s1,s2) = sum_{t=1}^n t^(-p) T(n, t, r, s1, s2)`. The crate builds
//! these kernels exactly, checks their structure, and reduces Euler sums of
//! hyperharmonic numbers to classical linear and alternating Euler sums.

pub mod analysis;
pub mod bipoly;
pub mod cli;
pub mod error;
pub mod eulersum;
pub mod exact;
pub mod faulhaber;
pub mod hyperharmonic;
pub mod tengine;

pub use bipoly::{Monomial, Sector, SignedBiPoly};
pub use error::{Error, Result};
pub use exact::Rational;
pub use hyperharmonic::{HarmonicSpec, HyperSpec};
pub use tengine::{Pattern, StepKind};
