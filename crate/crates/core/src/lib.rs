//! Finite-scale verification library for a symmetry-enriched toric code on
//! the honeycomb lattice.
//!
//! The crate builds, entirely with exact arithmetic, the CCZ-entangled
//! honeycomb toric code together with its Z2×Z2 on-site symmetry, extracts
//! the fractionalization phases ω^(a)(g,h) carried by string-operator
//! endpoints, and checks the group-cohomology and abelian G-crossed
//! consistency conditions those phases must satisfy. A dense state-vector
//! simulator provides brute-force ground truth for every vacuum-level
//! identity.
//!
//! Modules:
//! - [`algebra`]: exact symbolic ops `U|z⟩ = (-1)^{p(z)}|z⊕x⟩`.
//! - [`lattice`]: finite honeycomb geometry (torus or open patch), loops,
//!   region partitions, edge paths.
//! - [`model`]: stabilizers, entangler, symmetry actions, dressed strings,
//!   W/ω tables, defect sectors and their locality checks.
//! - [`cohomology`]: exact finite-group cohomology with permutation modules.
//! - [`gcrossed`]: declarative checker for abelian G-crossed braided data.
//! - [`oracle`]: dense state-vector oracle (≤ 24 qubits).
//! - [`report`]: machine-readable check reports shared by the CLI and tests.
//!
//! All types are immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

pub mod algebra;
pub mod cohomology;
pub mod gcrossed;
pub mod lattice;
pub mod model;
pub mod oracle;
pub mod report;

pub use algebra::{AlgebraError, Monomial, PhasePoly, SiteId, XdOperator};
pub use lattice::{EdgeId, HoneycombLattice, LatticeError, Loop, RegionPartition, VertexId};
pub use model::{AnyonLabel, GroupElem, OmegaTable, SetModel, WTable};
