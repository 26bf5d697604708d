//! Engine for multi-path clinical decision trees.
//!
//! A [`TreeDef`] encodes a guideline as single-choice questions,
//! multi-choice questions and recommendations. A [`NavState`] tracks a
//! clinician's progress through it: several branches may be open at
//! once, any node can be clicked to jump forward or roll back, and
//! [`auto_advance`] answers questions from entered patient data.
//! [`layout`] computes a fisheye drawing of the whole tree that fits one
//! viewport.
//!
//! The [`eval`] module holds the tooling for simulation trials: scoring
//! participant transcripts against gold standards and comparing groups
//! with Welch tests.

pub mod autonav;
pub mod eval;
pub mod format;
pub mod indexset;
pub mod layout;
pub mod nav;
pub mod predicate;
pub mod stats;
pub mod testing;
pub mod tree;

pub use autonav::{auto_advance, AutoNavStep, AutoNavTrace, StopReason};
pub use format::FormatError;
pub use layout::{doi_distance, layout, node_scale, Layout, LayoutParams, Viewport};
pub use nav::{replay, Action, NavError, NavState, ReplayError};
pub use predicate::{
    eval_predicate, Comparator, Constant, DataPredicate, FieldDef, FieldType, PatientRecord,
    PatientValue, PredicateError, Truth,
};
pub use tree::{
    validate_tree, Edge, EdgeSymbol, Node, NodeId, NodeKind, TreeDef, TreeError, TreeParts,
    ValidationIssue, ValidationReport,
};
