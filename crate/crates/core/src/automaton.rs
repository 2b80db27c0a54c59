//! Cellular automata over abelian groups acting on partial configurations.
//!
//! An automaton pairs a group with a finite ordered neighborhood and a total
//! local rule on neighborhood patterns. Three application semantics live
//! here: `global_apply` on everywhere-defined configurations of a finite
//! group, `coarse_apply` on the interior of a partial configuration's
//! support, and `fine_apply` on the cells whose output is already forced by
//! the known entries.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, PartialConfig, State, StateSet};
use crate::group::{ElementSet, GroupElement, GroupError, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("neighborhood must be non-empty")]
    EmptyNeighborhood,
    #[error("duplicate neighborhood offset {position}")]
    DuplicateNeighbor { position: GroupElement },
    #[error("pattern has {got} slots, neighborhood has {expected}")]
    PatternLengthMismatch { expected: usize, got: usize },
    #[error("rule table repeats pattern {pattern:?}")]
    TableDuplicatePattern { pattern: Vec<State> },
    #[error("rule table is missing {missing} of {total} patterns")]
    TableIncomplete { missing: usize, total: usize },
    #[error("an ECA rule number requires exactly the states [\"0\", \"1\"] and a 3-cell neighborhood")]
    EcaShape,
    #[error("global application needs a finite group")]
    GlobalNeedsFiniteGroup,
    #[error("global application needs a value at every cell; {position} is undefined")]
    GlobalNeedsTotalSupport { position: GroupElement },
}

/// Wire form of a local rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RuleSpec {
    /// Wolfram rule number; binary states and a 3-cell neighborhood.
    Eca { number: u8 },
    /// Explicit total table: one entry per neighborhood pattern.
    Table { entries: Vec<(Vec<State>, State)> },
    /// Every pattern maps to the same state.
    Constant { value: State },
}

/// Wire form of an automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDoc {
    pub group: GroupSpec,
    pub states: Vec<State>,
    pub neighborhood: Vec<Vec<i64>>,
    pub rule: RuleSpec,
}

/// Whether distinct cells always see distinct neighborhood windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Injectivity {
    Injective,
    /// Two distinct cells whose translated neighborhoods coincide.
    NotInjective {
        left: GroupElement,
        right: GroupElement,
    },
    /// Reserved for decision procedures that can give up; the shipped
    /// procedure is exact and never returns this.
    Undecided,
}

/// A validated automaton with a dense rule table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    group: GroupSpec,
    states: StateSet,
    neighborhood: Vec<GroupElement>,
    rule: RuleSpec,
    table: Vec<usize>,
}

impl Automaton {
    pub fn from_doc(doc: &AutomatonDoc) -> Result<Self, AutomatonError> {
        let group = doc.group.clone();
        let states = StateSet::new(doc.states.clone())?;
        if doc.neighborhood.is_empty() {
            return Err(AutomatonError::EmptyNeighborhood);
        }
        let mut neighborhood = Vec::with_capacity(doc.neighborhood.len());
        for coords in &doc.neighborhood {
            let n = group.element(coords.clone())?;
            if neighborhood.contains(&n) {
                return Err(AutomatonError::DuplicateNeighbor { position: n });
            }
            neighborhood.push(n);
        }
        let table = build_table(&doc.rule, &states, neighborhood.len())?;
        Ok(Automaton {
            group,
            states,
            neighborhood,
            rule: doc.rule.clone(),
            table,
        })
    }

    /// Wire form preserving the rule exactly as given.
    pub fn to_doc(&self) -> AutomatonDoc {
        AutomatonDoc {
            group: self.group.clone(),
            states: self.states.as_slice().to_vec(),
            neighborhood: self
                .neighborhood
                .iter()
                .map(|n| n.coords().to_vec())
                .collect(),
            rule: self.rule.clone(),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn states(&self) -> &StateSet {
        &self.states
    }

    pub fn neighborhood(&self) -> &[GroupElement] {
        &self.neighborhood
    }

    pub fn rule(&self) -> &RuleSpec {
        &self.rule
    }

    pub fn neighborhood_set(&self) -> ElementSet {
        self.neighborhood.iter().cloned().collect()
    }

    /// The cells a rule application at `g` reads: `g * n` per offset, in
    /// neighborhood order. Distinct offsets give distinct cells.
    pub fn window_at(&self, g: &GroupElement) -> Result<Vec<GroupElement>, AutomatonError> {
        self.group.conforms(g)?;
        Ok(self
            .neighborhood
            .iter()
            .map(|n| self.group.add_unchecked(g, n))
            .collect())
    }

    /// Applies the local rule to a full neighborhood pattern.
    pub fn local_apply(&self, pattern: &[State]) -> Result<State, AutomatonError> {
        let index = self.pattern_index(pattern)?;
        Ok(self.states.get(self.table[index]).expect("table entry in range").clone())
    }

    /// The singleton configuration placing the local result at `g`.
    pub fn placed_local(
        &self,
        g: &GroupElement,
        pattern: &[State],
    ) -> Result<PartialConfig, AutomatonError> {
        self.group.conforms(g)?;
        let value = self.local_apply(pattern)?;
        Ok(PartialConfig::from_entries(
            self.group.clone(),
            [(g.clone(), value)],
        )
        .expect("singleton has no duplicates"))
    }

    /// Consensus of a partially known pattern: `Some(q)` iff every way of
    /// filling the unknown slots yields `q`.
    pub fn pattern_consensus(
        &self,
        pattern: &[Option<State>],
    ) -> Result<Option<State>, AutomatonError> {
        if pattern.len() != self.neighborhood.len() {
            return Err(AutomatonError::PatternLengthMismatch {
                expected: self.neighborhood.len(),
                got: pattern.len(),
            });
        }
        let mut digits = Vec::with_capacity(pattern.len());
        let mut unknown = Vec::new();
        for (slot, entry) in pattern.iter().enumerate() {
            match entry {
                Some(state) => digits.push(self.state_index(state)?),
                None => {
                    unknown.push(slot);
                    digits.push(0);
                }
            }
        }
        let base = self.states.len();
        let mut consensus = None;
        let mut filler = vec![0usize; unknown.len()];
        loop {
            for (&slot, &d) in unknown.iter().zip(&filler) {
                digits[slot] = d;
            }
            let index = digits.iter().fold(0usize, |acc, &d| acc * base + d);
            let out = self.table[index];
            match consensus {
                None => consensus = Some(out),
                Some(prev) if prev == out => {}
                Some(_) => return Ok(None),
            }
            if !step(&mut filler, base) {
                break;
            }
        }
        Ok(consensus.map(|i| self.states.get(i).expect("table entry in range").clone()))
    }

    /// Either the empty configuration or the singleton forced at `g` by a
    /// partially known pattern.
    pub fn placed_sublocal(
        &self,
        g: &GroupElement,
        pattern: &[Option<State>],
    ) -> Result<PartialConfig, AutomatonError> {
        self.group.conforms(g)?;
        match self.pattern_consensus(pattern)? {
            Some(value) => Ok(PartialConfig::from_entries(
                self.group.clone(),
                [(g.clone(), value)],
            )
            .expect("singleton has no duplicates")),
            None => Ok(PartialConfig::empty(self.group.clone())),
        }
    }

    /// The pattern a configuration shows at `g`: slot `i` holds
    /// `c(g * n_i)` when defined.
    pub fn neighborhood_pattern(
        &self,
        config: &PartialConfig,
        g: &GroupElement,
    ) -> Result<Vec<Option<State>>, AutomatonError> {
        Ok(self
            .window_at(g)?
            .iter()
            .map(|cell| config.get(cell).cloned())
            .collect())
    }

    /// One synchronous step on an everywhere-defined configuration of a
    /// finite group.
    pub fn global_apply(&self, config: &PartialConfig) -> Result<PartialConfig, AutomatonError> {
        if !self.group.is_finite() {
            return Err(AutomatonError::GlobalNeedsFiniteGroup);
        }
        let cells = self.group.enumerate_elements()?;
        for cell in cells.iter() {
            if config.get(cell).is_none() {
                return Err(AutomatonError::GlobalNeedsTotalSupport {
                    position: cell.clone(),
                });
            }
        }
        let mut entries = Vec::with_capacity(cells.len());
        for cell in cells.iter() {
            let pattern: Vec<State> = self
                .window_at(cell)?
                .iter()
                .map(|p| config.get(p).expect("checked total").clone())
                .collect();
            entries.push((cell.clone(), self.local_apply(&pattern)?));
        }
        Ok(PartialConfig::from_entries(self.group.clone(), entries)
            .expect("cells are distinct"))
    }

    /// Cells whose whole window lies inside `support`. Every interior cell
    /// is of the form `s * n^-1`, so the search space stays finite even
    /// over infinite groups.
    pub fn interior(&self, support: &ElementSet) -> Result<ElementSet, AutomatonError> {
        let mut out = ElementSet::new();
        for g in self.window_candidates(support)?.iter() {
            if self.window_at(g)?.iter().all(|cell| support.contains(cell)) {
                out.insert(g.clone());
            }
        }
        Ok(out)
    }

    /// One step keeping only cells whose window is fully known.
    pub fn coarse_apply(&self, config: &PartialConfig) -> Result<PartialConfig, AutomatonError> {
        let mut entries = Vec::new();
        for g in self.interior(&config.support())?.iter() {
            let pattern: Vec<State> = self
                .neighborhood_pattern(config, g)?
                .into_iter()
                .map(|v| v.expect("interior windows are fully defined"))
                .collect();
            entries.push((g.clone(), self.local_apply(&pattern)?));
        }
        Ok(PartialConfig::from_entries(self.group.clone(), entries)
            .expect("interior cells are distinct"))
    }

    /// The value forced at `g`, if the known entries already decide it.
    pub fn determined_at(
        &self,
        config: &PartialConfig,
        g: &GroupElement,
    ) -> Result<Option<State>, AutomatonError> {
        let pattern = self.neighborhood_pattern(config, g)?;
        self.pattern_consensus(&pattern)
    }

    /// One step keeping every cell of `region` whose output is forced.
    ///
    /// The forced set itself can be infinite (a constant rule forces every
    /// cell of an infinite group), so callers choose the region to report.
    pub fn fine_apply(
        &self,
        config: &PartialConfig,
        region: &ElementSet,
    ) -> Result<PartialConfig, AutomatonError> {
        let mut entries = Vec::new();
        for g in region.iter() {
            if let Some(value) = self.determined_at(config, g)? {
                entries.push((g.clone(), value));
            }
        }
        Ok(PartialConfig::from_entries(self.group.clone(), entries)
            .expect("region cells are distinct"))
    }

    /// Cells whose window touches the support at all: `s * n^-1` over
    /// support points and offsets. Outside this set a cell sees no data,
    /// so its behavior is the background question.
    pub fn window_candidates(&self, support: &ElementSet) -> Result<ElementSet, AutomatonError> {
        let mut out = ElementSet::new();
        for s in support.iter() {
            for n in &self.neighborhood {
                out.insert(self.group.add_unchecked(s, &self.group.inverse(n)?));
            }
        }
        Ok(out)
    }

    /// The value forced at a cell that sees none of the known entries;
    /// `Some` exactly when the rule is constant as a function.
    pub fn background_determined(&self) -> Option<State> {
        let first = self.table[0];
        if self.table.iter().all(|&out| out == first) {
            Some(self.states.get(first).expect("table entry in range").clone())
        } else {
            None
        }
    }

    /// Exact decision of whether `g -> g * N` is injective. Two windows
    /// coincide iff their offset difference keeps `N` fixed, and such a
    /// difference must be a torsion element, so testing the (finite)
    /// torsion subgroup settles it.
    pub fn neighborhood_injective(&self) -> Injectivity {
        let n_set = self.neighborhood_set();
        for d in self.group.torsion_elements() {
            if d == self.group.identity() {
                continue;
            }
            let translated = self
                .group
                .translate_set(&d, &n_set)
                .expect("torsion element conforms");
            if translated == n_set {
                return Injectivity::NotInjective {
                    left: self.group.identity(),
                    right: d,
                };
            }
        }
        Injectivity::Injective
    }

    /// All full neighborhood patterns, big-endian in alphabet order.
    pub fn enumerate_local_patterns(&self) -> Vec<Vec<State>> {
        let base = self.states.len();
        let mut out = Vec::new();
        let mut digits = vec![0usize; self.neighborhood.len()];
        loop {
            out.push(
                digits
                    .iter()
                    .map(|&d| self.states.get(d).expect("digit in range").clone())
                    .collect(),
            );
            if !step(&mut digits, base) {
                return out;
            }
        }
    }

    /// All partial neighborhood patterns, big-endian with the unknown
    /// slot as digit zero.
    pub fn enumerate_sublocal_patterns(&self) -> Vec<Vec<Option<State>>> {
        let base = self.states.len() + 1;
        let mut out = Vec::new();
        let mut digits = vec![0usize; self.neighborhood.len()];
        loop {
            out.push(
                digits
                    .iter()
                    .map(|&d| {
                        if d == 0 {
                            None
                        } else {
                            Some(self.states.get(d - 1).expect("digit in range").clone())
                        }
                    })
                    .collect(),
            );
            if !step(&mut digits, base) {
                return out;
            }
        }
    }

    fn state_index(&self, state: &State) -> Result<usize, AutomatonError> {
        self.states
            .index_of(state)
            .ok_or_else(|| ConfigError::UnknownState {
                state: state.clone(),
            })
            .map_err(AutomatonError::from)
    }

    fn pattern_index(&self, pattern: &[State]) -> Result<usize, AutomatonError> {
        if pattern.len() != self.neighborhood.len() {
            return Err(AutomatonError::PatternLengthMismatch {
                expected: self.neighborhood.len(),
                got: pattern.len(),
            });
        }
        let base = self.states.len();
        let mut index = 0usize;
        for state in pattern {
            index = index * base + self.state_index(state)?;
        }
        Ok(index)
    }
}

fn build_table(
    rule: &RuleSpec,
    states: &StateSet,
    arity: usize,
) -> Result<Vec<usize>, AutomatonError> {
    let base = states.len();
    let total = crate::config::checked_power(base, arity)?;
    match rule {
        RuleSpec::Eca { number } => {
            let binary = states.len() == 2
                && states.get(0).map(State::as_str) == Some("0")
                && states.get(1).map(State::as_str) == Some("1");
            if !binary || arity != 3 {
                return Err(AutomatonError::EcaShape);
            }
            // slot order (left, center, right); bit index 4l + 2c + r
            Ok((0..8)
                .map(|index| {
                    let (l, c, r) = (index >> 2 & 1, index >> 1 & 1, index & 1);
                    (number >> (4 * l + 2 * c + r) & 1) as usize
                })
                .collect())
        }
        RuleSpec::Constant { value } => {
            let out = states
                .index_of(value)
                .ok_or_else(|| ConfigError::UnknownState {
                    state: value.clone(),
                })
                .map_err(AutomatonError::from)?;
            Ok(vec![out; total])
        }
        RuleSpec::Table { entries } => {
            let mut table = vec![usize::MAX; total];
            let mut filled = 0usize;
            for (pattern, value) in entries {
                if pattern.len() != arity {
                    return Err(AutomatonError::PatternLengthMismatch {
                        expected: arity,
                        got: pattern.len(),
                    });
                }
                let mut index = 0usize;
                for state in pattern {
                    let d = states
                        .index_of(state)
                        .ok_or_else(|| ConfigError::UnknownState {
                            state: state.clone(),
                        })
                        .map_err(AutomatonError::from)?;
                    index = index * base + d;
                }
                if table[index] != usize::MAX {
                    return Err(AutomatonError::TableDuplicatePattern {
                        pattern: pattern.clone(),
                    });
                }
                table[index] = states
                    .index_of(value)
                    .ok_or_else(|| ConfigError::UnknownState {
                        state: value.clone(),
                    })
                    .map_err(AutomatonError::from)?;
                filled += 1;
            }
            if filled != total {
                return Err(AutomatonError::TableIncomplete {
                    missing: total - filled,
                    total,
                });
            }
            Ok(table)
        }
    }
}

/// Big-endian odometer step; false once all digits have wrapped to zero.
fn step(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

impl fmt::Display for Injectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Injectivity::Injective => write!(f, "injective"),
            Injectivity::NotInjective { left, right } => {
                write!(f, "not injective: cells {left} and {right} share a window")
            }
            Injectivity::Undecided => write!(f, "undecided"),
        }
    }
}
