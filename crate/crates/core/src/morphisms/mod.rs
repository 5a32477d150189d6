//! Compatibility morphisms between function families: verification,
//! generators, the component-swap construction, and structural checks.

mod checks;
mod construction;
mod corollaries;
mod generate;
mod map;
mod random;

pub use crate::functions::FnFamily;
pub use checks::{
    check_additive_lemma, check_clopen_props, connected_restriction_violations, isomorphism_obstructions,
    sigma_table, AdditiveKind, AdditiveReport, AdditiveViolation, ClopenKind, ClopenReport, ClopenViolation,
    ConnectedViolation, ObstructionCertificate,
};
pub use construction::{discont_construction, Construction, ConstructionTrace};
pub use corollaries::{
    check_corollary_suites, multiplicative_relabelings, CorollaryConfig, CorollaryReport, Monomial,
    RationalMultiplicative, SuiteOutcome, SuiteStatus,
};
pub use generate::{
    disconnected_shuffle_witness, from_homeomorphism, gl_shuffle, gl_shuffle_unchecked, kaplansky_shift,
    value_relabel, Monotone, PointwiseOrderMap,
};
pub use map::{CompatMap, Direction, MapFlags, Witness};
pub use random::{GeneratedIso, IsoGenerator, IsoKind};
