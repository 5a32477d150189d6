//! Exact computations with the compatibility ordering on continuous
//! functions over finite topological spaces.
//!
//! For functions `f, g` on a space `X`, `f ⪯ g` when `g` coincides with `f`
//! on the support of `f`. A bijection between function families that
//! preserves this ordering in both directions is a *compatibility
//! isomorphism*. The crate recovers the underlying space from such an
//! isomorphism: the zero sets `ρ(f)` form a lattice `Θ(X)`, the ultrafilters
//! of `Θ(X)` form a topological space, and points correspond to ultrafilters.
//!
//! Modules:
//!
//! - [`topology`]: finite spaces, interior/closure, regular open and closed
//!   sets, components, quotients, homeomorphism search.
//! - [`functions`]: rational-valued continuous functions, `⪯`, `σ`, `ρ`.
//! - [`lattice`]: finite lattices of sets, filters, spectra.
//! - [`morphisms`]: compatibility morphisms, generators and structural checks.
//! - [`reconstruction`]: the point-recovery map and the induced homeomorphism.
//! - [`suite`]: exhaustive property sweeps used by the CLI and the tests.
//! - [`io`]: JSON and DOT formats.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod error;
pub mod functions;
pub mod io;
pub mod lattice;
pub mod morphisms;
pub mod reconstruction;
pub mod suite;
pub mod topology;

pub use error::{Error, Result};
