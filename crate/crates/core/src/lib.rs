//! Cellular automata on finitely generated abelian groups acting on
//! partial configurations.
//!
//! The crate has four layers:
//!
//! * [`group`] — groups of the form `Z^a x Z/m_1 x ... x Z/m_k` given by
//!   their moduli, with canonical element arithmetic and finite-set
//!   operations.
//! * [`config`] — finite-support partial configurations under the
//!   extension order, with meets, joins, and canonical enumerations.
//! * [`automaton`] — neighborhoods and local rules, with three
//!   application semantics: global (total configurations of a finite
//!   group), coarse (only where the whole window is known), and fine
//!   (wherever the known entries already force the outcome).
//! * [`kanlab`] — finite posets and monotone maps, plus mechanical
//!   verification that the coarse/fine steps are the extremal monotone
//!   extensions they are claimed to be.

pub mod automaton;
pub mod config;
pub mod group;
pub mod kanlab;

pub use automaton::{Automaton, AutomatonDoc, AutomatonError, Injectivity, RuleSpec};
pub use config::{ConfigDoc, ConfigError, PartialConfig, State, StateSet};
pub use group::{ElementSet, GroupElement, GroupError, GroupSpec};
pub use kanlab::{
    build_ca_kan_problems, build_problems_on, enumerate_monotone_maps, pointwise_left_kan,
    pointwise_right_kan, verify_kan, CaSpaces, EnumerationOutcome, ExhaustiveStatus, FinitePoset,
    KanError, KanProblem, KanSide, KanVerdict, MonotoneMap,
};
