//! Finite posets, monotone maps, and mechanical verification of extension
//! problems: is a candidate map the pointwise-least (or -greatest) monotone
//! map satisfying an extension inequality along another map?
//!
//! Verification is two-tier. The pointwise tier recomputes the candidate
//! from the join/meet formula at every element. The exhaustive tier
//! enumerates every constraint-satisfying monotone map by backtracking and
//! confirms the candidate is extremal among them; it aborts with a
//! distinguished `Skipped` status once a visit budget is exhausted.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::automaton::{Automaton, AutomatonError};
use crate::config::{ConfigError, PartialConfig, State};
use crate::group::{GroupElement, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KanError {
    #[error("duplicate element label {label:?}")]
    DuplicateLabel { label: String },
    #[error("relation table has {got} entries, expected {expected}")]
    MatrixShape { expected: usize, got: usize },
    #[error("relation is not reflexive at element {element}")]
    NotReflexive { element: usize },
    #[error("relation is not antisymmetric: elements {first} and {second} are mutually below each other")]
    NotAntisymmetric { first: usize, second: usize },
    #[error("relation is not transitive: {first} <= {second} <= {third} but not {first} <= {third}")]
    NotTransitive {
        first: usize,
        second: usize,
        third: usize,
    },
    #[error("map table has {got} entries, domain has {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("map sends element {element} to {value}, outside the codomain of {codomain_len}")]
    ValueOutOfRange {
        element: usize,
        value: usize,
        codomain_len: usize,
    },
    #[error("map is not monotone: {first} <= {second} in the domain but the images are not ordered")]
    NotMonotone { first: usize, second: usize },
    #[error("maps disagree on their posets")]
    PosetMismatch,
    #[error("no pointwise join at element {at}")]
    NoPointwiseJoin {
        at: usize,
        /// Two family members with no common upper bound, when that is
        /// the reason the join is missing.
        clash: Option<(usize, usize)>,
    },
    #[error("no pointwise meet at element {at} (family of {family_len})")]
    NoPointwiseMeet { at: usize, family_len: usize },
    #[error("{space} would have {size} elements, above the limit {limit}")]
    SpaceTooLarge {
        space: String,
        size: usize,
        limit: usize,
    },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Largest poset the lab will materialize; the relation table is dense.
pub const POSET_LIMIT: usize = 8192;

/// A finite poset over indexed elements with a dense order table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<bool>,
}

impl FinitePoset {
    /// Validates reflexivity, antisymmetry, and transitivity, reporting a
    /// concrete witness for the first violation found.
    pub fn new(labels: Vec<String>, leq: Vec<bool>) -> Result<Self, KanError> {
        let n = labels.len();
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(KanError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        if leq.len() != n * n {
            return Err(KanError::MatrixShape {
                expected: n * n,
                got: leq.len(),
            });
        }
        let at = |i: usize, j: usize| leq[i * n + j];
        for i in 0..n {
            if !at(i, i) {
                return Err(KanError::NotReflexive { element: i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && at(i, j) && at(j, i) {
                    return Err(KanError::NotAntisymmetric { first: i, second: j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !at(i, j) {
                    continue;
                }
                for k in 0..n {
                    if at(j, k) && !at(i, k) {
                        return Err(KanError::NotTransitive {
                            first: i,
                            second: j,
                            third: k,
                        });
                    }
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn from_leq(
        labels: Vec<String>,
        rel: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, KanError> {
        let n = labels.len();
        let mut leq = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                leq.push(rel(i, j));
            }
        }
        FinitePoset::new(labels, leq)
    }

    /// The discrete order: every element only below itself.
    pub fn discrete(labels: Vec<String>) -> Result<Self, KanError> {
        FinitePoset::from_leq(labels, |i, j| i == j)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    /// Least upper bound of a set of elements, if it exists. The empty
    /// set's join is the bottom element.
    pub fn join_of(&self, elems: &[usize]) -> Option<usize> {
        let uppers: Vec<usize> = (0..self.len())
            .filter(|&u| elems.iter().all(|&e| self.leq(e, u)))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&least| uppers.iter().all(|&u| self.leq(least, u)))
    }

    /// Greatest lower bound of a set of elements, if it exists. The empty
    /// set's meet is the top element.
    pub fn meet_of(&self, elems: &[usize]) -> Option<usize> {
        let lowers: Vec<usize> = (0..self.len())
            .filter(|&l| elems.iter().all(|&e| self.leq(l, e)))
            .collect();
        lowers
            .iter()
            .copied()
            .find(|&greatest| lowers.iter().all(|&l| self.leq(l, greatest)))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.join_of(&[])
    }

    pub fn top(&self) -> Option<usize> {
        self.meet_of(&[])
    }

    /// The opposite poset: same elements, order reversed.
    pub fn reversed(&self) -> FinitePoset {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = self.leq(j, i);
            }
        }
        FinitePoset {
            labels: self.labels.clone(),
            leq,
        }
    }

    /// A linear order listing every element after all elements below it
    /// (smallest index first among the available).
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n)
                .find(|&i| {
                    !placed[i]
                        && (0..n).all(|j| j == i || placed[j] || !self.leq(j, i))
                })
                .expect("a valid poset always has a minimal unplaced element");
            placed[next] = true;
            order.push(next);
        }
        order
    }
}

/// A monotone map between finite posets, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    domain: Arc<FinitePoset>,
    codomain: Arc<FinitePoset>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(
        domain: Arc<FinitePoset>,
        codomain: Arc<FinitePoset>,
        table: Vec<usize>,
    ) -> Result<Self, KanError> {
        if table.len() != domain.len() {
            return Err(KanError::TableLength {
                expected: domain.len(),
                got: table.len(),
            });
        }
        for (element, &value) in table.iter().enumerate() {
            if value >= codomain.len() {
                return Err(KanError::ValueOutOfRange {
                    element,
                    value,
                    codomain_len: codomain.len(),
                });
            }
        }
        for i in 0..domain.len() {
            for j in 0..domain.len() {
                if domain.leq(i, j) && !codomain.leq(table[i], table[j]) {
                    return Err(KanError::NotMonotone { first: i, second: j });
                }
            }
        }
        Ok(MonotoneMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn domain(&self) -> &Arc<FinitePoset> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinitePoset> {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, element: usize) -> usize {
        self.table[element]
    }

    /// Diagrammatic composition: `self.then(g)` applies `self` first.
    pub fn then(&self, next: &MonotoneMap) -> Result<MonotoneMap, KanError> {
        if self.codomain != next.domain {
            return Err(KanError::PosetMismatch);
        }
        let table = self.table.iter().map(|&v| next.table[v]).collect();
        MonotoneMap::new(self.domain.clone(), next.codomain.clone(), table)
    }

    /// Pointwise comparison of parallel maps: the 2-cell order.
    pub fn two_cell_leq(&self, other: &MonotoneMap) -> Result<bool, KanError> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(KanError::PosetMismatch);
        }
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .all(|(&a, &b)| self.codomain.leq(a, b)))
    }
}

/// Pointwise formula for the least extension at one element of `i`'s
/// codomain: the join of `f` over everything `i` sends below `b`.
pub fn pointwise_left_kan(
    f: &MonotoneMap,
    i: &MonotoneMap,
    b: usize,
) -> Result<usize, KanError> {
    if f.domain() != i.domain() {
        return Err(KanError::PosetMismatch);
    }
    let family: Vec<usize> = (0..i.domain().len())
        .filter(|&a| i.codomain().leq(i.apply(a), b))
        .map(|a| f.apply(a))
        .collect();
    match f.codomain().join_of(&family) {
        Some(j) => Ok(j),
        None => {
            let codomain = f.codomain();
            let clash = family
                .iter()
                .enumerate()
                .find_map(|(idx, &x)| {
                    family[idx + 1..]
                        .iter()
                        .find(|&&y| (0..codomain.len()).all(|u| !(codomain.leq(x, u) && codomain.leq(y, u))))
                        .map(|&y| (x, y))
                });
            Err(KanError::NoPointwiseJoin { at: b, clash })
        }
    }
}

/// Pointwise formula for the greatest restriction at one element: the meet
/// of `f` over everything `i` sends above `b`.
pub fn pointwise_right_kan(
    f: &MonotoneMap,
    i: &MonotoneMap,
    b: usize,
) -> Result<usize, KanError> {
    if f.domain() != i.domain() {
        return Err(KanError::PosetMismatch);
    }
    let family: Vec<usize> = (0..i.domain().len())
        .filter(|&a| i.codomain().leq(b, i.apply(a)))
        .map(|a| f.apply(a))
        .collect();
    f.codomain()
        .meet_of(&family)
        .ok_or(KanError::NoPointwiseMeet {
            at: b,
            family_len: family.len(),
        })
}

/// Result of a bounded enumeration of monotone maps.
#[derive(Debug, Clone)]
pub struct EnumerationOutcome {
    pub maps: Vec<MonotoneMap>,
    /// False when the visit budget ran out before the search finished.
    pub complete: bool,
    /// Partial assignments visited (the budget unit).
    pub visited: u64,
}

/// All monotone maps `domain -> codomain` whose value at each element
/// passes `admissible`, by backtracking over a linear extension. Stops
/// (with `complete = false`) after `budget` visited partial assignments.
pub fn enumerate_monotone_maps(
    domain: &Arc<FinitePoset>,
    codomain: &Arc<FinitePoset>,
    admissible: Option<&dyn Fn(usize, usize) -> bool>,
    budget: u64,
) -> EnumerationOutcome {
    let mut maps = Vec::new();
    let (end, visited) = backtrack_maps(domain, codomain, admissible, budget, &mut |table| {
        maps.push(
            MonotoneMap::new(domain.clone(), codomain.clone(), table.to_vec())
                .expect("backtracking preserves monotonicity"),
        );
        true
    });
    EnumerationOutcome {
        maps,
        complete: end == BacktrackEnd::Done,
        visited,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BacktrackEnd {
    Done,
    Budget,
    StoppedByVisitor,
}

/// Core backtracker. `visit` sees each complete assignment (indexed by
/// domain element, not extension order) and returns false to stop early.
fn backtrack_maps(
    domain: &FinitePoset,
    codomain: &FinitePoset,
    admissible: Option<&dyn Fn(usize, usize) -> bool>,
    budget: u64,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> (BacktrackEnd, u64) {
    let order = domain.linear_extension();
    // earlier elements below each element, per extension position
    let lower_preds: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            order[..k]
                .iter()
                .copied()
                .filter(|&y| domain.leq(y, x))
                .collect()
        })
        .collect();
    let mut search = Search {
        order: &order,
        lower_preds: &lower_preds,
        codomain,
        admissible,
        budget,
        visited: 0,
    };
    let mut assign = vec![usize::MAX; domain.len()];
    let end = search.go(0, &mut assign, visit);
    (end, search.visited)
}

struct Search<'a> {
    order: &'a [usize],
    lower_preds: &'a [Vec<usize>],
    codomain: &'a FinitePoset,
    admissible: Option<&'a dyn Fn(usize, usize) -> bool>,
    budget: u64,
    visited: u64,
}

impl Search<'_> {
    fn go(
        &mut self,
        k: usize,
        assign: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> BacktrackEnd {
        if k == self.order.len() {
            return if visit(assign) {
                BacktrackEnd::Done
            } else {
                BacktrackEnd::StoppedByVisitor
            };
        }
        let x = self.order[k];
        for v in 0..self.codomain.len() {
            if self.visited >= self.budget {
                return BacktrackEnd::Budget;
            }
            self.visited += 1;
            if let Some(ok) = self.admissible {
                if !ok(x, v) {
                    continue;
                }
            }
            if self.lower_preds[k]
                .iter()
                .any(|&y| !self.codomain.leq(assign[y], v))
            {
                continue;
            }
            assign[x] = v;
            let end = self.go(k + 1, assign, visit);
            assign[x] = usize::MAX;
            if end != BacktrackEnd::Done {
                return end;
            }
        }
        BacktrackEnd::Done
    }
}

/// Which extremum the candidate is claimed to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KanSide {
    Left,
    Right,
}

impl fmt::Display for KanSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KanSide::Left => write!(f, "left"),
            KanSide::Right => write!(f, "right"),
        }
    }
}

/// An extension problem: is `candidate` the least (left) or greatest
/// (right) monotone map `h` with `f ⪯ h∘i` (resp. `h∘i ⪯ f`) pointwise?
#[derive(Debug, Clone)]
pub struct KanProblem {
    pub side: KanSide,
    /// The map extended along, `A -> B`.
    pub i: MonotoneMap,
    /// The map being extended, `A -> C`.
    pub f: MonotoneMap,
    /// The claimed extension, `B -> C`.
    pub candidate: MonotoneMap,
}

impl KanProblem {
    pub fn new(
        side: KanSide,
        i: MonotoneMap,
        f: MonotoneMap,
        candidate: MonotoneMap,
    ) -> Result<Self, KanError> {
        if i.domain() != f.domain()
            || candidate.domain() != i.codomain()
            || candidate.codomain() != f.codomain()
        {
            return Err(KanError::PosetMismatch);
        }
        Ok(KanProblem {
            side,
            i,
            f,
            candidate,
        })
    }
}

/// Outcome of the exhaustive extremality tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExhaustiveStatus {
    /// Every constraint-satisfying map was enumerated and the candidate
    /// is extremal among them.
    Extremal,
    /// A constraint-satisfying map strictly beats the candidate.
    NotExtremal,
    /// The visit budget ran out before enumeration finished.
    Skipped,
}

impl fmt::Display for ExhaustiveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExhaustiveStatus::Extremal => write!(f, "true"),
            ExhaustiveStatus::NotExtremal => write!(f, "false"),
            ExhaustiveStatus::Skipped => write!(f, "skipped"),
        }
    }
}

/// Verdict of `verify_kan`: the three tiers plus the first witness found.
#[derive(Debug, Clone)]
pub struct KanVerdict {
    pub constraint_holds: bool,
    pub pointwise_agrees: bool,
    pub exhaustive: ExhaustiveStatus,
    /// Human-readable counterexample for the first failing tier.
    pub witness: Option<String>,
    pub visited: u64,
}

impl KanVerdict {
    pub fn passes(&self) -> bool {
        self.constraint_holds
            && self.pointwise_agrees
            && self.exhaustive != ExhaustiveStatus::NotExtremal
    }
}

/// Checks a Kan problem mechanically.
///
/// Tier 1 checks the extension inequality at every element of `A`. Tier 2
/// recomputes the candidate from the pointwise join/meet formula at every
/// element of `B`. Tier 3 enumerates every constraint-satisfying monotone
/// map within `budget` visits and confirms the candidate is the pointwise
/// extremum of the lot.
pub fn verify_kan(problem: &KanProblem, budget: u64) -> KanVerdict {
    let i = &problem.i;
    let f = &problem.f;
    let candidate = &problem.candidate;
    let b_poset = candidate.domain();
    let c_poset = candidate.codomain();
    let left = problem.side == KanSide::Left;
    let mut witness = None;

    let mut constraint_holds = true;
    for a in 0..i.domain().len() {
        let fa = f.apply(a);
        let hia = candidate.apply(i.apply(a));
        let ok = if left {
            c_poset.leq(fa, hia)
        } else {
            c_poset.leq(hia, fa)
        };
        if !ok {
            constraint_holds = false;
            witness.get_or_insert_with(|| {
                format!(
                    "constraint fails at {}: f gives {} but the candidate composite gives {}",
                    i.domain().label(a),
                    c_poset.label(fa),
                    c_poset.label(hia),
                )
            });
            break;
        }
    }

    let mut pointwise_agrees = true;
    for b in 0..b_poset.len() {
        let formula = if left {
            pointwise_left_kan(f, i, b)
        } else {
            pointwise_right_kan(f, i, b)
        };
        match formula {
            Ok(value) if value == candidate.apply(b) => {}
            Ok(value) => {
                pointwise_agrees = false;
                witness.get_or_insert_with(|| {
                    format!(
                        "pointwise formula at {} gives {} but the candidate gives {}",
                        b_poset.label(b),
                        c_poset.label(value),
                        c_poset.label(candidate.apply(b)),
                    )
                });
                break;
            }
            Err(err) => {
                pointwise_agrees = false;
                witness.get_or_insert_with(|| {
                    format!("pointwise formula undefined at {}: {err}", b_poset.label(b))
                });
                break;
            }
        }
    }

    // fibers of i, giving the per-element admissibility of candidates
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); b_poset.len()];
    for a in 0..i.domain().len() {
        fibers[i.apply(a)].push(a);
    }
    let admissible = |b: usize, v: usize| {
        fibers[b].iter().all(|&a| {
            if left {
                c_poset.leq(f.apply(a), v)
            } else {
                c_poset.leq(v, f.apply(a))
            }
        })
    };

    let mut beaten: Option<(usize, usize)> = None;
    let (end, visited) = backtrack_maps(
        b_poset,
        c_poset,
        Some(&admissible),
        budget,
        &mut |table| {
            for (b, &v) in table.iter().enumerate() {
                let ok = if left {
                    c_poset.leq(candidate.apply(b), v)
                } else {
                    c_poset.leq(v, candidate.apply(b))
                };
                if !ok {
                    beaten = Some((b, v));
                    return false;
                }
            }
            true
        },
    );
    let exhaustive = match end {
        BacktrackEnd::Budget => ExhaustiveStatus::Skipped,
        BacktrackEnd::StoppedByVisitor => {
            let (b, v) = beaten.expect("visitor only stops on a violation");
            witness.get_or_insert_with(|| {
                format!(
                    "a competing constraint-satisfying map sends {} to {}, not {} the candidate's {}",
                    b_poset.label(b),
                    c_poset.label(v),
                    if left { "above" } else { "below" },
                    c_poset.label(candidate.apply(b)),
                )
            });
            ExhaustiveStatus::NotExtremal
        }
        BacktrackEnd::Done => ExhaustiveStatus::Extremal,
    };

    KanVerdict {
        constraint_holds,
        pointwise_agrees,
        exhaustive,
        witness,
        visited,
    }
}

/// The four order spaces of one finite-group automaton, with the concrete
/// objects behind each poset index.
pub struct CaSpaces {
    pub conf: Arc<FinitePoset>,
    /// Every partial configuration, aligned with `conf`.
    pub configs: Vec<PartialConfig>,
    pub loc: Arc<FinitePoset>,
    /// Center plus full window pattern, aligned with `loc`.
    pub loc_elems: Vec<(GroupElement, PartialConfig)>,
    pub sub: Arc<FinitePoset>,
    /// Center plus partial window pattern, aligned with `sub`.
    pub sub_elems: Vec<(GroupElement, PartialConfig)>,
    pub totals: Arc<FinitePoset>,
    /// Every everywhere-defined configuration, aligned with `totals`.
    pub total_elems: Vec<PartialConfig>,
}

impl CaSpaces {
    pub fn build(automaton: &Automaton) -> Result<Self, KanError> {
        let group = automaton.group();
        let states = automaton.states();

        let configs = PartialConfig::enumerate_all(group, states)?;
        check_space("configuration poset", configs.len())?;
        let conf = Arc::new(FinitePoset::from_leq(
            configs.iter().map(|c| c.to_string()).collect(),
            |i, j| configs[i].leq(&configs[j]),
        )?);

        let cells = group.enumerate_elements()?;
        let mut loc_elems = Vec::new();
        let mut sub_elems = Vec::new();
        for g in cells.iter() {
            let window: crate::group::ElementSet =
                automaton.window_at(g)?.into_iter().collect();
            let empty = PartialConfig::empty(group.clone());
            for pattern in empty.completions(states, &window)? {
                loc_elems.push((g.clone(), pattern));
            }
            for pattern in PartialConfig::enumerate_on(group, states, &window)? {
                sub_elems.push((g.clone(), pattern));
            }
        }
        check_space("local-pattern poset", loc_elems.len())?;
        check_space("sub-pattern poset", sub_elems.len())?;
        let pair_label = |(g, c): &(GroupElement, PartialConfig)| format!("({g},{c})");
        let loc = Arc::new(FinitePoset::discrete(
            loc_elems.iter().map(pair_label).collect(),
        )?);
        let sub = Arc::new(FinitePoset::from_leq(
            sub_elems.iter().map(pair_label).collect(),
            |i, j| sub_elems[i].0 == sub_elems[j].0 && sub_elems[i].1.leq(&sub_elems[j].1),
        )?);

        let total_elems = PartialConfig::enumerate_total(group, states)?;
        let totals = Arc::new(FinitePoset::from_leq(
            total_elems.iter().map(|c| c.to_string()).collect(),
            |i, j| total_elems[i].leq(&total_elems[j]),
        )?);

        Ok(CaSpaces {
            conf,
            configs,
            loc,
            loc_elems,
            sub,
            sub_elems,
            totals,
            total_elems,
        })
    }

    pub fn conf_index(&self, config: &PartialConfig) -> usize {
        self.configs
            .iter()
            .position(|c| c == config)
            .expect("every partial configuration is enumerated")
    }

    fn conf_map(
        &self,
        domain: &Arc<FinitePoset>,
        values: impl Iterator<Item = PartialConfig>,
    ) -> Result<MonotoneMap, KanError> {
        let table = values.map(|c| self.conf_index(&c)).collect();
        MonotoneMap::new(domain.clone(), self.conf.clone(), table)
    }
}

fn check_space(space: &str, size: usize) -> Result<(), KanError> {
    if size > POSET_LIMIT {
        return Err(KanError::SpaceTooLarge {
            space: space.to_string(),
            size,
            limit: POSET_LIMIT,
        });
    }
    Ok(())
}

/// The named extension problems of one finite-group automaton:
///
/// * `P1` — the coarse step as the least extension of the placed local
///   rule along the pattern projection.
/// * `P2` — the fine step as the greatest restriction of the global step
///   along the inclusion of total configurations.
/// * `P3` — the forced sub-pattern result as the greatest restriction of
///   the placed local rule along the inclusion of full patterns.
/// * `P4` — the fine step as the least extension of the forced
///   sub-pattern result along the pattern projection.
/// * `P5@g` — the shift on partial configurations as the greatest
///   restriction of the shift on total configurations, one problem per
///   group element; emitted only with at least two states, where the
///   claim is meaningful.
pub fn build_ca_kan_problems(
    automaton: &Automaton,
) -> Result<Vec<(String, KanProblem)>, KanError> {
    let spaces = CaSpaces::build(automaton)?;
    build_problems_on(automaton, &spaces)
}

/// As `build_ca_kan_problems`, reusing already-built spaces.
pub fn build_problems_on(
    automaton: &Automaton,
    spaces: &CaSpaces,
) -> Result<Vec<(String, KanProblem)>, KanError> {
    let group = automaton.group();
    let states = automaton.states();
    let cells = group.enumerate_elements()?;
    let all_cells: crate::group::ElementSet = cells.iter().cloned().collect();

    // pattern projection and placed local rule out of the full patterns
    let project_loc = MonotoneMap::new(
        spaces.loc.clone(),
        spaces.conf.clone(),
        spaces
            .loc_elems
            .iter()
            .map(|(_, pattern)| spaces.conf_index(pattern))
            .collect(),
    )?;
    let mut placed_local_table = Vec::with_capacity(spaces.loc_elems.len());
    for (g, pattern) in &spaces.loc_elems {
        let full: Vec<State> = automaton
            .neighborhood_pattern(pattern, g)?
            .into_iter()
            .map(|v| v.expect("full patterns cover the window"))
            .collect();
        placed_local_table.push(spaces.conf_index(&automaton.placed_local(g, &full)?));
    }
    let placed_local = MonotoneMap::new(
        spaces.loc.clone(),
        spaces.conf.clone(),
        placed_local_table,
    )?;

    // coarse and fine steps as endomaps of the configuration poset
    let coarse = spaces.conf_map(
        &spaces.conf,
        spaces
            .configs
            .iter()
            .map(|c| automaton.coarse_apply(c))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter(),
    )?;
    let fine = spaces.conf_map(
        &spaces.conf,
        spaces
            .configs
            .iter()
            .map(|c| automaton.fine_apply(c, &all_cells))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter(),
    )?;

    // inclusion of total configurations and the global step over them
    let include_totals = spaces.conf_map(
        &spaces.totals,
        spaces.total_elems.iter().cloned(),
    )?;
    let global = spaces.conf_map(
        &spaces.totals,
        spaces
            .total_elems
            .iter()
            .map(|c| automaton.global_apply(c))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter(),
    )?;

    // full patterns into sub-patterns; forced results out of sub-patterns
    let include_loc_in_sub = MonotoneMap::new(
        spaces.loc.clone(),
        spaces.sub.clone(),
        spaces
            .loc_elems
            .iter()
            .map(|elem| {
                spaces
                    .sub_elems
                    .iter()
                    .position(|s| s == elem)
                    .expect("full patterns are sub-patterns")
            })
            .collect(),
    )?;
    let project_sub = MonotoneMap::new(
        spaces.sub.clone(),
        spaces.conf.clone(),
        spaces
            .sub_elems
            .iter()
            .map(|(_, pattern)| spaces.conf_index(pattern))
            .collect(),
    )?;
    let mut forced_table = Vec::with_capacity(spaces.sub_elems.len());
    for (g, pattern) in &spaces.sub_elems {
        let slots = automaton.neighborhood_pattern(pattern, g)?;
        forced_table.push(spaces.conf_index(&automaton.placed_sublocal(g, &slots)?));
    }
    let forced =
        MonotoneMap::new(spaces.sub.clone(), spaces.conf.clone(), forced_table)?;

    let mut problems = vec![
        (
            "P1".to_string(),
            KanProblem::new(
                KanSide::Left,
                project_loc.clone(),
                placed_local.clone(),
                coarse,
            )?,
        ),
        (
            "P2".to_string(),
            KanProblem::new(
                KanSide::Right,
                include_totals.clone(),
                global,
                fine.clone(),
            )?,
        ),
        (
            "P3".to_string(),
            KanProblem::new(KanSide::Right, include_loc_in_sub, placed_local, forced.clone())?,
        ),
        (
            "P4".to_string(),
            KanProblem::new(KanSide::Left, project_sub, forced, fine)?,
        ),
    ];

    if states.len() >= 2 {
        for g in cells.iter() {
            let shift_totals = spaces.conf_map(
                &spaces.totals,
                spaces
                    .total_elems
                    .iter()
                    .map(|c| c.shift(g))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter(),
            )?;
            let shift_conf = spaces.conf_map(
                &spaces.conf,
                spaces
                    .configs
                    .iter()
                    .map(|c| c.shift(g))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter(),
            )?;
            problems.push((
                format!("P5@{g}"),
                KanProblem::new(
                    KanSide::Right,
                    include_totals.clone(),
                    shift_totals,
                    shift_conf,
                )?,
            ));
        }
    }

    Ok(problems)
}
