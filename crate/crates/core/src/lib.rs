//! β-numeration for Pisot bases: exact arithmetic in `Q(β)`, Parry
//! classification, the sofic automaton and β-substitution, the canonical
//! embedding into Archimedean and p-adic completions, generalized Rauzy
//! fractals, and two deciders for purely periodic β-expansions.

pub mod poly;
pub mod roots;
pub mod numberfield;
pub mod betaexpand;
pub mod sofic;
pub mod padic;
pub mod embedding;
pub mod rauzy;
pub mod periodicity;
pub mod io;

pub use betaexpand::{
    classify_parry, expand, value_of_periodic, Digit, EventuallyPeriodicWord, ExpandError, ExpansionResult,
    ParryData, ParryKind,
};
pub use embedding::{
    contraction_moduli, Axis, EmbedError, EmbeddedPoint, PlaceDescriptor, PlaceKind, RealCoord,
    RepresentationSpace,
};
pub use numberfield::{FieldElement, FieldError, PisotField};
pub use padic::{PadicPlace, PadicValue};
pub use periodicity::{Agreement, CommutationReport, PeriodicityError, PeriodicityReport, TwoSidedWord};
pub use rauzy::{
    CylinderSet, FractalApprox, MembershipConfig, MembershipVerdict, PointCloud, RauzyError, Raster, Verdict,
};
pub use sofic::{build_automaton, build_substitution, SoficAutomaton, Substitution};
