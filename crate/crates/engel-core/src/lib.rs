//! Group-theory engine for Engel element classification and radical/central
//! series of concrete groups.
//!
//! The crate provides:
//!
//! - [`group`]: finite group engines (permutation, metacyclic p-group,
//!   cyclic, direct/semidirect products) behind a uniform element interface,
//!   plus [`subgroup`] machinery (generated closure, normal closure,
//!   centralizer).
//! - [`engel`]: iterated commutator calculus and exact left/right
//!   (bounded) Engel classification of finite groups.
//! - [`series`]: upper/lower central series, hypercentre, Fitting subgroup,
//!   Baer radical, subnormality defects, and the rho subgroups.
//! - [`example`]: an exact symbolic engine for the infinite group
//!   `<x> ⋉ Dr_i P_i` with unbounded `x`-exponent, truncated to finitely
//!   many metacyclic components.
//! - [`verify`]: a deterministic catalog of groups and cross-validating
//!   checks binding the Engel sets to the radicals.

pub mod engel;
pub mod example;
pub mod group;
mod modmath;
pub mod series;
pub mod subgroup;
pub mod verify;

pub use engel::{classify, EngelClassification, EngelDegree};
pub use example::{ExampleElement, ExampleGroup, ExampleParams};
pub use group::{
    Element, Group, GroupError, GroupOps, Payload, DEFAULT_ENUMERATION_CAP,
    DEFAULT_SET_ANALYSIS_CAP, HARD_CAP_CEILING,
};
pub use series::{SeriesReport, Subnormality};
pub use subgroup::Subgroup;
pub use verify::{catalog, CheckKind, CheckReport};
