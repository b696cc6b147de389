//! Witness-carrying finite sets of group elements and of element pairs.
//!
//! [`GroupSet`] is an element of the semiring of subsets of `G` under union
//! and elementwise product; [`PairSet`] is the analogue over `G × G` with
//! the pair product `(x, y) ⋄ (z, t) = (xz, ty)`. Every stored element
//! carries one word (resp. word pair) spelling it. When several words spell
//! the same element the shortlex-smallest one is retained, so results do
//! not depend on iteration order.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;

use crate::error::SemiringError;
use crate::group::{GroupBackend, GroupElement};
use crate::word::Word;

/// Default per-set cardinality cap.
pub const DEFAULT_SET_CAP: usize = 4096;

/// A group element together with a word spelling it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessedElement {
    pub value: GroupElement,
    pub witness: Word,
}

/// A finite set of group elements, each with its retained witness.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupSet {
    elements: BTreeMap<GroupElement, Word>,
}

impl GroupSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{e}` witnessed by ε.
    pub fn unit(group: &GroupBackend) -> Self {
        let mut set = Self::new();
        set.insert(group.identity(), Word::empty());
        set
    }

    pub fn singleton(value: GroupElement, witness: Word) -> Self {
        let mut set = Self::new();
        set.insert(value, witness);
        set
    }

    pub fn from_words<'a>(
        group: &GroupBackend,
        words: impl IntoIterator<Item = &'a Word>,
    ) -> Result<Self, SemiringError> {
        let mut set = Self::new();
        for w in words {
            set.insert(group.canonicalize(w)?, w.clone());
        }
        Ok(set)
    }

    /// Inserts `value`, keeping the smaller of the old and new witness.
    /// Returns true if the element was not present before.
    pub fn insert(&mut self, value: GroupElement, witness: Word) -> bool {
        match self.elements.entry(value) {
            Entry::Vacant(slot) => {
                slot.insert(witness);
                true
            }
            Entry::Occupied(mut slot) => {
                if witness < *slot.get() {
                    slot.insert(witness);
                }
                false
            }
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, value: &GroupElement) -> bool {
        self.elements.contains_key(value)
    }

    pub fn witness(&self, value: &GroupElement) -> Option<&Word> {
        self.elements.get(value)
    }

    /// Iterates `(element, witness)` in canonical element order.
    pub fn iter(&self) -> btree_map::Iter<'_, GroupElement, Word> {
        self.elements.iter()
    }

    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.keys()
    }

    /// True iff the set is exactly `{e}`.
    pub fn is_unit(&self, group: &GroupBackend) -> bool {
        self.len() == 1 && self.contains(&group.identity())
    }

    /// Among non-identity elements, the one with the smallest witness.
    pub fn best_non_identity(&self, group: &GroupBackend) -> Option<WitnessedElement> {
        self.iter()
            .filter(|(value, _)| !group.is_identity(value))
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(value, witness)| WitnessedElement {
                value: value.clone(),
                witness: witness.clone(),
            })
    }

    /// The element with the smallest witness.
    pub fn best(&self) -> Option<WitnessedElement> {
        self.iter().min_by(|a, b| a.1.cmp(b.1)).map(|(value, witness)| WitnessedElement {
            value: value.clone(),
            witness: witness.clone(),
        })
    }

    /// Checks that every witness spells its element.
    pub fn witnesses_sound(&self, group: &GroupBackend) -> bool {
        self.iter()
            .all(|(value, witness)| group.canonicalize(witness).as_ref() == Ok(value))
    }
}

/// Witness word pair of a [`PairElement`]; ordered by total length, then
/// left word, then right word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WordPair {
    pub left: Word,
    pub right: Word,
}

impl WordPair {
    pub fn new(left: Word, right: Word) -> Self {
        Self { left, right }
    }

    pub fn total_len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// The word `left · right` this pair contributes to a derivation.
    pub fn joined(&self) -> Word {
        self.left.concat(&self.right)
    }
}

impl Ord for WordPair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_len()
            .cmp(&other.total_len())
            .then_with(|| self.left.cmp(&other.left))
            .then_with(|| self.right.cmp(&other.right))
    }
}

impl PartialOrd for WordPair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// An element `(x, y)` of `G × G` with its witness words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairElement {
    pub left: GroupElement,
    pub right: GroupElement,
    pub witness: WordPair,
}

/// A finite set of pairs of group elements with retained witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet {
    elements: BTreeMap<(GroupElement, GroupElement), WordPair>,
}

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{(e, e)}` witnessed by `(ε, ε)`.
    pub fn unit(group: &GroupBackend) -> Self {
        let mut set = Self::new();
        set.insert(group.identity(), group.identity(), WordPair::default());
        set
    }

    pub fn from_word_pairs<'a>(
        group: &GroupBackend,
        pairs: impl IntoIterator<Item = (&'a Word, &'a Word)>,
    ) -> Result<Self, SemiringError> {
        let mut set = Self::new();
        for (l, r) in pairs {
            set.insert(
                group.canonicalize(l)?,
                group.canonicalize(r)?,
                WordPair::new(l.clone(), r.clone()),
            );
        }
        Ok(set)
    }

    pub fn insert(&mut self, left: GroupElement, right: GroupElement, witness: WordPair) -> bool {
        match self.elements.entry((left, right)) {
            Entry::Vacant(slot) => {
                slot.insert(witness);
                true
            }
            Entry::Occupied(mut slot) => {
                if witness < *slot.get() {
                    slot.insert(witness);
                }
                false
            }
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, left: &GroupElement, right: &GroupElement) -> bool {
        self.elements.contains_key(&(left.clone(), right.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &GroupElement, &WordPair)> {
        self.elements.iter().map(|((l, r), w)| (l, r, w))
    }

    pub fn best(&self) -> Option<PairElement> {
        self.iter().min_by(|a, b| a.2.cmp(b.2)).map(|(l, r, w)| PairElement {
            left: l.clone(),
            right: r.clone(),
            witness: w.clone(),
        })
    }

    pub fn witnesses_sound(&self, group: &GroupBackend) -> bool {
        self.iter().all(|(l, r, w)| {
            group.canonicalize(&w.left).as_ref() == Ok(l) && group.canonicalize(&w.right).as_ref() == Ok(r)
        })
    }
}

/// Set operations over a fixed backend with a cardinality cap.
#[derive(Debug, Clone, Copy)]
pub struct SetAlgebra<'g> {
    group: &'g GroupBackend,
    cap: usize,
}

impl<'g> SetAlgebra<'g> {
    pub fn new(group: &'g GroupBackend, cap: usize) -> Self {
        Self { group, cap: cap.max(1) }
    }

    pub fn group(&self) -> &'g GroupBackend {
        self.group
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn guard(&self, len: usize) -> Result<(), SemiringError> {
        if len > self.cap {
            Err(SemiringError::CapExceeded { cardinality: len })
        } else {
            Ok(())
        }
    }

    fn put(&self, set: &mut GroupSet, value: GroupElement, witness: Word) -> Result<(), SemiringError> {
        debug_assert_eq!(self.group.canonicalize(&witness).as_ref(), Ok(&value));
        set.insert(value, witness);
        self.guard(set.len())
    }

    fn put_pair(
        &self,
        set: &mut PairSet,
        left: GroupElement,
        right: GroupElement,
        witness: WordPair,
    ) -> Result<(), SemiringError> {
        debug_assert_eq!(self.group.canonicalize(&witness.left).as_ref(), Ok(&left));
        debug_assert_eq!(self.group.canonicalize(&witness.right).as_ref(), Ok(&right));
        set.insert(left, right, witness);
        self.guard(set.len())
    }

    /// `X ∪ Y`.
    pub fn union(&self, x: &GroupSet, y: &GroupSet) -> Result<GroupSet, SemiringError> {
        let mut out = x.clone();
        for (value, witness) in y.iter() {
            out.insert(value.clone(), witness.clone());
        }
        self.guard(out.len())?;
        Ok(out)
    }

    /// `X ∪ Y` over pair sets.
    pub fn union_pairs(&self, x: &PairSet, y: &PairSet) -> Result<PairSet, SemiringError> {
        let mut out = x.clone();
        for (l, r, w) in y.iter() {
            out.insert(l.clone(), r.clone(), w.clone());
        }
        self.guard(out.len())?;
        Ok(out)
    }

    /// `X · Y = {xy}`.
    pub fn product(&self, x: &GroupSet, y: &GroupSet) -> Result<GroupSet, SemiringError> {
        let mut out = GroupSet::new();
        for (a, wa) in x.iter() {
            for (b, wb) in y.iter() {
                self.put(&mut out, self.group.multiply(a, b)?, wa.concat(wb))?;
            }
        }
        Ok(out)
    }

    /// `X ⋆ Y = {x y x⁻¹}`.
    pub fn star(&self, x: &GroupSet, y: &GroupSet) -> Result<GroupSet, SemiringError> {
        let mut out = GroupSet::new();
        for (a, wa) in x.iter() {
            let a_inv = self.group.invert(a)?;
            let wa_inv = wa.inverse();
            for (b, wb) in y.iter() {
                let value = self.group.multiply(&self.group.multiply(a, b)?, &a_inv)?;
                self.put(&mut out, value, Word::concat_all([wa, wb, &wa_inv]))?;
            }
        }
        Ok(out)
    }

    /// `X ⋄ Y = {(xz, ty) | (x, y) ∈ X, (z, t) ∈ Y}`; note the reversed
    /// order on the right component.
    pub fn diamond(&self, x: &PairSet, y: &PairSet) -> Result<PairSet, SemiringError> {
        let mut out = PairSet::new();
        for (xl, xr, xw) in x.iter() {
            for (yl, yr, yw) in y.iter() {
                let left = self.group.multiply(xl, yl)?;
                let right = self.group.multiply(yr, xr)?;
                let witness = WordPair::new(xw.left.concat(&yw.left), yw.right.concat(&xw.right));
                self.put_pair(&mut out, left, right, witness)?;
            }
        }
        Ok(out)
    }

    /// Left projection `{x | (x, y) ∈ P}`.
    pub fn proj_l(&self, p: &PairSet) -> GroupSet {
        let mut out = GroupSet::new();
        for (l, _, w) in p.iter() {
            out.insert(l.clone(), w.left.clone());
        }
        out
    }

    /// Right projection `{y | (x, y) ∈ P}`.
    pub fn proj_r(&self, p: &PairSet) -> GroupSet {
        let mut out = GroupSet::new();
        for (_, r, w) in p.iter() {
            out.insert(r.clone(), w.right.clone());
        }
        out
    }

    /// Product projection `{xy | (x, y) ∈ P}`.
    pub fn proj_d(&self, p: &PairSet) -> Result<GroupSet, SemiringError> {
        let mut out = GroupSet::new();
        for (l, r, w) in p.iter() {
            out.insert(self.group.multiply(l, r)?, w.joined());
        }
        Ok(out)
    }

    /// `⟨X, Y, Z⟩ = {x y z y⁻¹}` with all three factors chosen independently.
    pub fn triple_literal(&self, x: &GroupSet, y: &GroupSet, z: &GroupSet) -> Result<GroupSet, SemiringError> {
        let mut out = GroupSet::new();
        if x.is_empty() || y.is_empty() || z.is_empty() {
            return Ok(out);
        }
        for (b, wb) in y.iter() {
            let b_inv = self.group.invert(b)?;
            let wb_inv = wb.inverse();
            for (a, wa) in x.iter() {
                let ab = self.group.multiply(a, b)?;
                for (c, wc) in z.iter() {
                    let value = self.group.multiply(&self.group.multiply(&ab, c)?, &b_inv)?;
                    self.put(&mut out, value, Word::concat_all([wa, wb, wc, &wb_inv]))?;
                }
            }
        }
        Ok(out)
    }

    /// `{u v w v⁻¹ | (u, w) ∈ P, v ∈ V}`: `u` and `w` come from the same pair.
    pub fn triple_paired(&self, p: &PairSet, v: &GroupSet) -> Result<GroupSet, SemiringError> {
        let mut out = GroupSet::new();
        for (b, wb) in v.iter() {
            let b_inv = self.group.invert(b)?;
            let wb_inv = wb.inverse();
            for (u, w, pw) in p.iter() {
                let value = self
                    .group
                    .multiply(&self.group.multiply(&self.group.multiply(u, b)?, w)?, &b_inv)?;
                self.put(&mut out, value, Word::concat_all([&pw.left, wb, &pw.right, &wb_inv]))?;
            }
        }
        Ok(out)
    }
}
