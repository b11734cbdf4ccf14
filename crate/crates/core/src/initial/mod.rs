//! Initial data: families, sampled profiles, the constants ledger and the
//! assumption audit.

pub mod assumptions;
pub mod family;
pub mod ledger;
pub mod profile;

pub use assumptions::{check_assumptions, AssumptionReport, Witness};
pub use family::{BumpMode, Family, ProfilePoint, RampParams, Source};
pub use ledger::{derive_constants, ConstantsLedger};
pub use profile::{build_profile, initial_gradients, DerivativeMode, EntropyTables, FamilyDescriptor, InitialProfile, Samples};
