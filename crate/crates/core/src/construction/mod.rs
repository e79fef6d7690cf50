//! Construction and certification of long improving flip sequences.

pub mod counter;
pub mod ln;
pub mod setup;
pub mod trial;
pub mod two_flip;

pub use counter::{counter_moves, counter_sequence, CounterCertificate, CounterStep, CounterStepKind};
pub use ln::{ln_length, ln_sequence, verify_gn, GnReport, GnViolation, GnViolationKind};
pub use setup::{setup_sequence, SetupMode, SetupResult, TargetSetup};
pub use trial::{default_nk, smoothed_trial, TargetReport, TrialParams, TrialReport, TRIAL_SCHEMA_VERSION};
pub use two_flip::{token_certificate, two_flip_longest, TokenCertificate, TokenStep, TWO_FLIP_MAX};
