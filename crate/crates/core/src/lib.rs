//! Subgroup graphs for amalgams of finite groups.
//!
//! The crate builds the canonical subgroup graph `Γ(H)` of a finitely
//! generated subgroup `H` of `G = G1 *_A G2` by generalized Stallings
//! foldings, and reads off membership, presentations, freeness, index and
//! separating finite-index subgroups.

pub mod amalgam;
pub mod decisions;
pub mod error;
pub mod finite_groups;
pub mod graph;
pub mod normal_form;
pub mod pipeline;
pub mod presentation;
pub mod separability;
pub mod session;
pub mod subgroup_presentation;
pub mod todd_coxeter;
pub mod word;

pub use amalgam::{Amalgam, EdgeClassification, EdgeGroup, Factor};
pub use error::{Error, Result};
pub use finite_groups::CayleyModel;
pub use presentation::{parse_amalgam, AmalgamSpec, GroupPresentation};
pub use todd_coxeter::{enumerate_cosets, CosetTable, DEFAULT_COSET_CAP};
pub use word::{parse_word, Alphabet, Letter, Word};
pub use separability::{separate, SeparatingSubgroup};
pub use session::Session;
