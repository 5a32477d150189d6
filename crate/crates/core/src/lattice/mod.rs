//! Finite bounded lattices (of sets or given by tables), their filters,
//! prime filters and ultrafilters, and the spectrum topology with basic
//! open sets `U_a = {F : a ∉ F}`.

mod filter;
mod finite;
mod iso;
mod spectrum;

pub use filter::Filter;
pub use finite::{sigma_lattice, small_lattices, theta_lattice, FiniteLattice, Provenance};
pub use iso::{is_lattice_isomorphism, order_iso_is_lattice_iso};
pub use spectrum::{spectrum, ult_space, zariski_spectrum, BaseKind, SpectrumSpace};
