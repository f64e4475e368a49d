//! Good families of terminal subsets and their use in vertex-connectivity
//! survivable network design.
//!
//! [`label`] holds the label arithmetic, [`builder`] the deterministic local
//! search, [`verify`] the goodness checks, [`sndp`] the reduction to
//! element-connectivity subinstances and [`io`] the file formats, reports and
//! command line.

pub mod builder;
pub mod cli;
pub mod io;
pub mod label;
pub mod sndp;
pub mod verify;

pub use builder::{build_family, build_family_traced, BuildConfig, BuildError};
pub use label::{derive_params, Alphabet, FamilyParams, GoodFamily, Label, Variant};
