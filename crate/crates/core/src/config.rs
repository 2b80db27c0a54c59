//! Partial configurations: finite-support partial maps from a group to a
//! state alphabet, ordered by extension.
//!
//! The extension order (`leq`) makes the set of partial configurations a
//! poset with the empty configuration at the bottom. Meets always exist
//! (restrict to agreement); joins exist exactly for compatible families.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{ElementSet, GroupElement, GroupError, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("duplicate position {position} in configuration entries")]
    DuplicatePosition { position: GroupElement },
    #[error("configurations belong to different groups")]
    SpecMismatch,
    #[error("the empty family has no meet (the configuration poset has no top)")]
    EmptyMeet,
    #[error("no join: configurations disagree at {position}")]
    IncompatibleJoin { position: GroupElement },
    #[error("support point {position} lies outside the completion domain")]
    SupportOutsideDomain { position: GroupElement },
    #[error("state {state:?} is not in the state alphabet")]
    UnknownState { state: State },
    #[error("duplicate state {state:?} in alphabet")]
    DuplicateState { state: State },
    #[error("state alphabet must be non-empty")]
    EmptyStateSet,
    #[error("enumeration would exceed {limit} configurations")]
    EnumerationTooLarge { limit: usize },
}

/// A cell state, identified by its label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(pub String);

impl State {
    pub fn new(label: impl Into<String>) -> Self {
        State(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A non-empty alphabet of distinct states in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    states: Vec<State>,
}

impl StateSet {
    pub fn new(states: Vec<State>) -> Result<Self, ConfigError> {
        if states.is_empty() {
            return Err(ConfigError::EmptyStateSet);
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(ConfigError::DuplicateState { state: s.clone() });
            }
        }
        Ok(StateSet { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = &State> {
        self.states.iter()
    }

    pub fn get(&self, index: usize) -> Option<&State> {
        self.states.get(index)
    }

    pub fn index_of(&self, state: &State) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    pub fn contains(&self, state: &State) -> bool {
        self.index_of(state).is_some()
    }

    pub fn as_slice(&self) -> &[State] {
        &self.states
    }
}

/// Wire form of a configuration: a list of (position, state) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub entries: Vec<(Vec<i64>, State)>,
}

/// A finite-support partial map from group elements to states.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartialConfig {
    spec: GroupSpec,
    entries: BTreeMap<GroupElement, State>,
}

impl PartialConfig {
    pub fn empty(spec: GroupSpec) -> Self {
        PartialConfig {
            spec,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a configuration, rejecting duplicate positions outright
    /// (even a repeated position with an equal value is malformed input).
    pub fn from_entries(
        spec: GroupSpec,
        entries: impl IntoIterator<Item = (GroupElement, State)>,
    ) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (pos, state) in entries {
            spec.conforms(&pos)?;
            if map.insert(pos.clone(), state).is_some() {
                return Err(ConfigError::DuplicatePosition { position: pos });
            }
        }
        Ok(PartialConfig { spec, entries: map })
    }

    pub fn from_doc(spec: &GroupSpec, doc: &ConfigDoc) -> Result<Self, ConfigError> {
        let mut entries = Vec::with_capacity(doc.entries.len());
        for (coords, state) in &doc.entries {
            entries.push((spec.element(coords.clone())?, state.clone()));
        }
        PartialConfig::from_entries(spec.clone(), entries)
    }

    /// Canonical wire form: entries sorted by position.
    pub fn to_doc(&self) -> ConfigDoc {
        ConfigDoc {
            entries: self
                .entries
                .iter()
                .map(|(pos, state)| (pos.coords().to_vec(), state.clone()))
                .collect(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn get(&self, position: &GroupElement) -> Option<&State> {
        self.entries.get(position)
    }

    pub fn support(&self) -> ElementSet {
        self.entries.keys().cloned().collect()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, &State)> {
        self.entries.iter()
    }

    /// Fails if any entry uses a state outside the alphabet.
    pub fn validate_states(&self, states: &StateSet) -> Result<(), ConfigError> {
        for state in self.entries.values() {
            if !states.contains(state) {
                return Err(ConfigError::UnknownState {
                    state: state.clone(),
                });
            }
        }
        Ok(())
    }

    /// Keeps only the entries whose position lies in `domain`.
    pub fn restrict(&self, domain: &ElementSet) -> PartialConfig {
        PartialConfig {
            spec: self.spec.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(pos, _)| domain.contains(pos))
                .map(|(pos, state)| (pos.clone(), state.clone()))
                .collect(),
        }
    }

    /// Right shift by `g`: the result reads `c(g * h)` at position `h`,
    /// so each entry moves from `s` to `g^-1 * s`.
    pub fn shift(&self, g: &GroupElement) -> Result<PartialConfig, ConfigError> {
        let g_inv = self.spec.inverse(g)?;
        let mut entries = BTreeMap::new();
        for (pos, state) in &self.entries {
            entries.insert(self.spec.add_unchecked(&g_inv, pos), state.clone());
        }
        Ok(PartialConfig {
            spec: self.spec.clone(),
            entries,
        })
    }

    /// Extension order: every entry of `self` appears in `other`.
    pub fn leq(&self, other: &PartialConfig) -> bool {
        self.spec == other.spec
            && self
                .entries
                .iter()
                .all(|(pos, state)| other.entries.get(pos) == Some(state))
    }

    /// Binary meet: the entries on which both sides are defined and agree.
    pub fn meet(&self, other: &PartialConfig) -> Result<PartialConfig, ConfigError> {
        if self.spec != other.spec {
            return Err(ConfigError::SpecMismatch);
        }
        Ok(PartialConfig {
            spec: self.spec.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(pos, state)| other.entries.get(pos) == Some(state))
                .map(|(pos, state)| (pos.clone(), state.clone()))
                .collect(),
        })
    }

    /// Binary join: the union, defined only when the two sides agree on
    /// shared positions.
    pub fn join(&self, other: &PartialConfig) -> Result<PartialConfig, ConfigError> {
        PartialConfig::join_family(&self.spec, [self, other])
    }

    /// Meet of a non-empty family. The poset has no top element, so the
    /// empty family has no meet and is an error.
    pub fn meet_family<'a>(
        configs: impl IntoIterator<Item = &'a PartialConfig>,
    ) -> Result<PartialConfig, ConfigError> {
        let mut iter = configs.into_iter();
        let first = iter.next().ok_or(ConfigError::EmptyMeet)?;
        let mut acc = first.clone();
        for c in iter {
            acc = acc.meet(c)?;
        }
        Ok(acc)
    }

    /// Join of a family; the empty family yields the empty configuration.
    pub fn join_family<'a>(
        spec: &GroupSpec,
        configs: impl IntoIterator<Item = &'a PartialConfig>,
    ) -> Result<PartialConfig, ConfigError> {
        let mut entries: BTreeMap<GroupElement, State> = BTreeMap::new();
        for c in configs {
            if c.spec != *spec {
                return Err(ConfigError::SpecMismatch);
            }
            for (pos, state) in &c.entries {
                match entries.get(pos) {
                    None => {
                        entries.insert(pos.clone(), state.clone());
                    }
                    Some(existing) if existing == state => {}
                    Some(_) => {
                        return Err(ConfigError::IncompatibleJoin {
                            position: pos.clone(),
                        });
                    }
                }
            }
        }
        Ok(PartialConfig {
            spec: spec.clone(),
            entries,
        })
    }

    /// All configurations on `domain` that extend `self` and are defined on
    /// all of `domain`. Deterministic order: missing positions ascending,
    /// filled big-endian in alphabet order.
    pub fn completions(
        &self,
        states: &StateSet,
        domain: &ElementSet,
    ) -> Result<Vec<PartialConfig>, ConfigError> {
        for pos in self.entries.keys() {
            if !domain.contains(pos) {
                return Err(ConfigError::SupportOutsideDomain {
                    position: pos.clone(),
                });
            }
        }
        let missing: Vec<&GroupElement> = domain
            .iter()
            .filter(|pos| !self.entries.contains_key(pos))
            .collect();
        let total = checked_power(states.len(), missing.len())?;
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; missing.len()];
        loop {
            let mut entries = self.entries.clone();
            for (pos, &d) in missing.iter().zip(&digits) {
                entries.insert((*pos).clone(), states.get(d).expect("digit in range").clone());
            }
            out.push(PartialConfig {
                spec: self.spec.clone(),
                entries,
            });
            if !step_odometer(&mut digits, states.len()) {
                return Ok(out);
            }
        }
    }

    /// Every partial configuration over a finite group, in a canonical
    /// order: positions ascending, big-endian digits with 0 = undefined
    /// and k = the (k-1)-th state.
    pub fn enumerate_all(spec: &GroupSpec, states: &StateSet) -> Result<Vec<PartialConfig>, ConfigError> {
        let domain = spec.enumerate_elements()?;
        PartialConfig::enumerate_on(spec, states, &domain)
    }

    /// Every partial configuration with support inside `domain`, in the
    /// same canonical order as `enumerate_all`.
    pub fn enumerate_on(
        spec: &GroupSpec,
        states: &StateSet,
        domain: &ElementSet,
    ) -> Result<Vec<PartialConfig>, ConfigError> {
        let positions: Vec<GroupElement> = domain.iter().cloned().collect();
        for pos in &positions {
            spec.conforms(pos)?;
        }
        let total = checked_power(states.len() + 1, positions.len())?;
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; positions.len()];
        loop {
            let mut entries = BTreeMap::new();
            for (pos, &d) in positions.iter().zip(&digits) {
                if d > 0 {
                    entries.insert(pos.clone(), states.get(d - 1).expect("digit in range").clone());
                }
            }
            out.push(PartialConfig {
                spec: spec.clone(),
                entries,
            });
            if !step_odometer(&mut digits, states.len() + 1) {
                return Ok(out);
            }
        }
    }

    /// Every everywhere-defined configuration over a finite group.
    pub fn enumerate_total(spec: &GroupSpec, states: &StateSet) -> Result<Vec<PartialConfig>, ConfigError> {
        let domain = spec.enumerate_elements()?;
        PartialConfig::empty(spec.clone()).completions(states, &domain)
    }
}

/// Caps enumerations at a desk-scale size so a malformed instance fails
/// fast instead of exhausting memory.
const ENUMERATION_LIMIT: usize = 1 << 24;

pub(crate) fn checked_power(base: usize, exp: usize) -> Result<usize, ConfigError> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v <= ENUMERATION_LIMIT)
            .ok_or(ConfigError::EnumerationTooLarge {
                limit: ENUMERATION_LIMIT,
            })?;
    }
    Ok(acc)
}

/// Big-endian odometer step; false once all digits have wrapped to zero.
fn step_odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

impl fmt::Display for PartialConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (pos, state)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{pos}={state}")?;
        }
        write!(f, "}}")
    }
}
