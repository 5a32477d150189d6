//! Finite topological spaces: interior and closure, regular open and
//! regular closed sets, components, quotients and homeomorphism search.

mod enumerate;
mod homeomorphism;
mod map;
mod pointset;
mod space;

pub use enumerate::{all_topologies, small_spaces, topologies_up_to_homeomorphism, MAX_ENUMERATION_POINTS};
pub use homeomorphism::find_homeomorphism;
pub use map::SpaceMap;
pub use pointset::{PointSet, MAX_POINTS};
pub use space::FiniteSpace;
