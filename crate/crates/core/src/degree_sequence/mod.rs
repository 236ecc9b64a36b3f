//! Realization of degree sequences as stable networks.

pub mod girth;
pub mod powerlaw;
pub mod realize;
pub mod validate;

pub use girth::{gen_regular_girth5, min_girth5_order, RegularGirthGraph};
pub use powerlaw::powerlaw_sequence;
pub use realize::{realize, RealizationReport, StepEntry};
pub use validate::{condition_one, smallest_k, twos_capacity, validate_sequence, SequenceDiagnostics};
