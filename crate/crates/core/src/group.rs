//! Finitely generated abelian groups as moduli vectors.
//!
//! A group is described by an ordered list of moduli: `0` stands for an
//! infinite cyclic factor and `m >= 2` for the cyclic group of order `m`
//! (`m = 1` is rejected as redundant). Elements are integer vectors with
//! every finite-modulus coordinate reduced into `[0, m)`, so structural
//! equality coincides with group equality.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("modulus 1 is forbidden (use 0 for an infinite factor, m >= 2 for a finite one)")]
    UnitModulus,
    #[error("element has {got} coordinates, group has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("group is not finite")]
    NotFinite,
}

/// A group of the form Z^a x Z/m_1 x ... x Z/m_k, fixed by its moduli.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroupSpec")]
pub struct GroupSpec {
    moduli: Vec<u64>,
}

#[derive(Deserialize)]
struct RawGroupSpec {
    moduli: Vec<u64>,
}

impl TryFrom<RawGroupSpec> for GroupSpec {
    type Error = GroupError;

    fn try_from(raw: RawGroupSpec) -> Result<Self, GroupError> {
        GroupSpec::new(raw.moduli)
    }
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self, GroupError> {
        if moduli.contains(&1) {
            return Err(GroupError::UnitModulus);
        }
        Ok(GroupSpec { moduli })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of coordinates of every element.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// True iff every factor is finite; rank 0 is the trivial group.
    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|&m| m >= 2)
    }

    /// Group order, when finite.
    pub fn order(&self) -> Option<u64> {
        if self.is_finite() {
            Some(self.moduli.iter().product())
        } else {
            None
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Canonicalizes a coordinate vector into an element of this group.
    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement, GroupError> {
        if coords.len() != self.rank() {
            return Err(GroupError::RankMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(GroupElement {
            coords: coords
                .into_iter()
                .zip(&self.moduli)
                .map(|(c, &m)| reduce(c, m))
                .collect(),
        })
    }

    pub fn conforms(&self, g: &GroupElement) -> Result<(), GroupError> {
        if g.coords.len() != self.rank() {
            return Err(GroupError::RankMismatch {
                expected: self.rank(),
                got: g.coords.len(),
            });
        }
        Ok(())
    }

    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.conforms(g)?;
        self.conforms(h)?;
        Ok(self.add_unchecked(g, h))
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.conforms(g)?;
        Ok(GroupElement {
            coords: g
                .coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| reduce(-c, m))
                .collect(),
        })
    }

    /// All elements of a finite group in canonical order.
    pub fn enumerate_elements(&self) -> Result<ElementSet, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::NotFinite);
        }
        let mut elements = BTreeSet::new();
        let mut coords = vec![0i64; self.rank()];
        loop {
            elements.insert(GroupElement {
                coords: coords.clone(),
            });
            // odometer over the moduli
            let mut axis = self.rank();
            loop {
                if axis == 0 {
                    return Ok(ElementSet { elements });
                }
                axis -= 1;
                coords[axis] += 1;
                if (coords[axis] as u64) < self.moduli[axis] {
                    break;
                }
                coords[axis] = 0;
            }
        }
    }

    /// Left translate: { g*s : s in set }. Cardinality is preserved.
    pub fn translate_set(&self, g: &GroupElement, set: &ElementSet) -> Result<ElementSet, GroupError> {
        self.conforms(g)?;
        let mut elements = BTreeSet::new();
        for s in set.iter() {
            self.conforms(s)?;
            elements.insert(self.add_unchecked(g, s));
        }
        Ok(ElementSet { elements })
    }

    /// Pointwise product { s*t : s in S, t in T }, deduplicated.
    pub fn set_product(&self, s: &ElementSet, t: &ElementSet) -> Result<ElementSet, GroupError> {
        let mut elements = BTreeSet::new();
        for a in s.iter() {
            self.conforms(a)?;
            for b in t.iter() {
                self.conforms(b)?;
                elements.insert(self.add_unchecked(a, b));
            }
        }
        Ok(ElementSet { elements })
    }

    /// All torsion elements: the coordinates on infinite axes are pinned
    /// to zero and the finite axes range over their full cyclic factors.
    pub fn torsion_elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.identity()];
        for (axis, &m) in self.moduli.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for e in &out {
                for v in 0..m as i64 {
                    let mut coords = e.coords.clone();
                    coords[axis] = v;
                    next.push(GroupElement { coords });
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub(crate) fn add_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement {
            coords: g
                .coords
                .iter()
                .zip(&h.coords)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| reduce(a + b, m))
                .collect(),
        }
    }
}

fn reduce(c: i64, m: u64) -> i64 {
    if m == 0 {
        c
    } else {
        c.rem_euclid(m as i64)
    }
}

/// A group element in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite set of elements with canonical (lexicographic) iteration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct ElementSet {
    elements: BTreeSet<GroupElement>,
}

impl ElementSet {
    pub fn new() -> Self {
        ElementSet::default()
    }

    pub fn from_elements(elements: impl IntoIterator<Item = GroupElement>) -> Self {
        ElementSet {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }

    pub fn insert(&mut self, g: GroupElement) -> bool {
        self.elements.insert(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            elements: self.elements.intersection(&other.elements).cloned().collect(),
        }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            elements: self.elements.union(&other.elements).cloned().collect(),
        }
    }
}

impl FromIterator<GroupElement> for ElementSet {
    fn from_iter<I: IntoIterator<Item = GroupElement>>(iter: I) -> Self {
        ElementSet::from_elements(iter)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}
