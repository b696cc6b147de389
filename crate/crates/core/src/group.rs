//! Group backends with a decidable word problem.
//!
//! Every backend maps words over the symmetric alphabet to a canonical
//! form; two words are equal in the group exactly when their canonical
//! forms are identical.

use std::fmt;

use crate::error::GroupError;
use crate::word::{GeneratorAlphabet, Letter, Word};

/// Largest Cayley table whose associativity is checked exhaustively at
/// construction. Beyond it the check is skipped with a warning.
pub const DEFAULT_ASSOCIATIVITY_BOUND: usize = 64;

/// Canonical form of a group element. The variant always matches the
/// backend that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// Freely reduced word.
    Reduced(Vec<Letter>),
    /// Exponent sums, one per generator.
    Exponents(Vec<i64>),
    /// Residue modulo the cyclic order.
    Residue(u64),
    /// Row index into a Cayley table.
    Index(usize),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Reduced(w) if w.is_empty() => f.write_str("e"),
            GroupElement::Reduced(w) => f.write_str(&Word::from_letters(w.clone()).to_tokens()),
            GroupElement::Exponents(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
            GroupElement::Residue(r) => write!(f, "{r}"),
            GroupElement::Index(i) => write!(f, "#{i}"),
        }
    }
}

/// A finite group given by its multiplication table and the images of
/// the generators `x1..xm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    size: usize,
    identity: usize,
    // row-major, table[a * size + b] = a·b
    table: Vec<usize>,
    generator_images: Vec<usize>,
    inverses: Vec<usize>,
}

impl CayleyTable {
    pub fn new(
        identity: usize,
        rows: Vec<Vec<usize>>,
        generator_images: Vec<usize>,
    ) -> Result<Self, GroupError> {
        Self::with_associativity_bound(identity, rows, generator_images, DEFAULT_ASSOCIATIVITY_BOUND)
    }

    /// Validates the group axioms. Associativity is only checked when the
    /// table has at most `associativity_bound` elements.
    pub fn with_associativity_bound(
        identity: usize,
        rows: Vec<Vec<usize>>,
        generator_images: Vec<usize>,
        associativity_bound: usize,
    ) -> Result<Self, GroupError> {
        let size = rows.len();
        let invalid = |msg: String| Err(GroupError::InvalidCayley(msg));
        if size == 0 {
            return invalid("table is empty".into());
        }
        if identity >= size {
            return invalid(format!("identity {identity} is outside 0..{size}"));
        }
        if generator_images.is_empty() {
            return invalid("at least one generator image is required".into());
        }
        let mut table = Vec::with_capacity(size * size);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != size {
                return invalid(format!("row {a} has {} entries, expected {size}", row.len()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= size) {
                return invalid(format!("row {a} contains {bad}, outside 0..{size}"));
            }
            table.extend_from_slice(row);
        }
        if let Some(&bad) = generator_images.iter().find(|&&g| g >= size) {
            return invalid(format!("generator image {bad} is outside 0..{size}"));
        }

        let at = |a: usize, b: usize| table[a * size + b];
        for a in 0..size {
            if at(identity, a) != a || at(a, identity) != a {
                return invalid(format!("{identity} does not act as identity on {a}"));
            }
        }
        let mut seen = vec![false; size];
        for a in 0..size {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..size {
                let x = at(a, b);
                if seen[x] {
                    return invalid(format!("row {a} is not a permutation"));
                }
                seen[x] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..size {
                let x = at(b, a);
                if seen[x] {
                    return invalid(format!("column {a} is not a permutation"));
                }
                seen[x] = true;
            }
        }
        if size <= associativity_bound {
            for a in 0..size {
                for b in 0..size {
                    let ab = at(a, b);
                    for c in 0..size {
                        if at(ab, c) != at(a, at(b, c)) {
                            return invalid(format!("({a}·{b})·{c} != {a}·({b}·{c})"));
                        }
                    }
                }
            }
        } else {
            log::warn!(
                "Cayley table with {size} elements exceeds the associativity check bound \
                 {associativity_bound}; associativity not verified"
            );
        }

        // Latin square + identity: each row holds the identity exactly once.
        let inverses = (0..size)
            .map(|a| (0..size).find(|&b| at(a, b) == identity).expect("row is a permutation"))
            .collect();

        Ok(Self {
            size,
            identity,
            table,
            generator_images,
            inverses,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn rank(&self) -> usize {
        self.generator_images.len()
    }

    pub fn generator_images(&self) -> &[usize] {
        &self.generator_images
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    fn letter_image(&self, letter: Letter) -> usize {
        let image = self.generator_images[letter.unsigned_abs() as usize - 1];
        if letter > 0 {
            image
        } else {
            self.inverses[image]
        }
    }
}

/// A concrete group generated by `x1..xm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupBackend {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    Cyclic { order: u64 },
    Cayley(CayleyTable),
}

impl GroupBackend {
    pub fn free(rank: usize) -> Result<Self, GroupError> {
        GeneratorAlphabet::new(rank)?;
        Ok(GroupBackend::Free { rank })
    }

    pub fn free_abelian(rank: usize) -> Result<Self, GroupError> {
        GeneratorAlphabet::new(rank)?;
        Ok(GroupBackend::FreeAbelian { rank })
    }

    pub fn cyclic(order: u64) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidSpec("cyclic order must be at least 1".into()));
        }
        Ok(GroupBackend::Cyclic { order })
    }

    pub fn cayley(table: CayleyTable) -> Self {
        GroupBackend::Cayley(table)
    }

    /// Symmetric group on `points` points, generated by the transposition
    /// (0 1) and the cycle (0 1 .. points-1). Elements are indexed by the
    /// lexicographic rank of their one-line permutation; the identity is 0.
    pub fn symmetric(points: usize) -> Result<Self, GroupError> {
        if points < 2 {
            return Err(GroupError::InvalidSpec("symmetric group needs at least 2 points".into()));
        }
        let perms = permutations(points);
        let index_of = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        // (p·q)(x) = q(p(x)): apply the left factor first, matching words read left to right
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { p.iter().map(|&x| q[x]).collect() };
        let rows = perms
            .iter()
            .map(|p| perms.iter().map(|q| index_of(&compose(p, q))).collect())
            .collect();
        let mut transposition: Vec<usize> = (0..points).collect();
        transposition.swap(0, 1);
        let cycle: Vec<usize> = (0..points).map(|x| (x + 1) % points).collect();
        let table = CayleyTable::new(0, rows, vec![index_of(&transposition), index_of(&cycle)])?;
        Ok(GroupBackend::Cayley(table))
    }

    /// Number of generators `m`.
    pub fn rank(&self) -> usize {
        match self {
            GroupBackend::Free { rank } | GroupBackend::FreeAbelian { rank } => *rank,
            GroupBackend::Cyclic { .. } => 1,
            GroupBackend::Cayley(t) => t.rank(),
        }
    }

    pub fn alphabet(&self) -> GeneratorAlphabet {
        GeneratorAlphabet::new(self.rank()).expect("backends have positive rank")
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupBackend::Free { .. } | GroupBackend::FreeAbelian { .. } => None,
            GroupBackend::Cyclic { order } => Some(*order),
            GroupBackend::Cayley(t) => Some(t.size() as u64),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupBackend::Free { rank } => format!("F{rank}"),
            GroupBackend::FreeAbelian { rank } => format!("Z^{rank}"),
            GroupBackend::Cyclic { order } => format!("Z{order}"),
            GroupBackend::Cayley(t) => format!("Cayley[{}; rank {}]", t.size(), t.rank()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupBackend::Free { .. } => GroupElement::Reduced(Vec::new()),
            GroupBackend::FreeAbelian { rank } => GroupElement::Exponents(vec![0; *rank]),
            GroupBackend::Cyclic { .. } => GroupElement::Residue(0),
            GroupBackend::Cayley(t) => GroupElement::Index(t.identity()),
        }
    }

    /// Image of `word` in the group, in canonical form.
    pub fn canonicalize(&self, word: &Word) -> Result<GroupElement, GroupError> {
        self.alphabet().check_word(word)?;
        let letters = word.letters();
        Ok(match self {
            GroupBackend::Free { .. } => GroupElement::Reduced(free_reduce(letters.iter().copied())),
            GroupBackend::FreeAbelian { rank } => {
                let mut exps = vec![0i64; *rank];
                for &l in letters {
                    exps[l.unsigned_abs() as usize - 1] += i64::from(l.signum());
                }
                GroupElement::Exponents(exps)
            }
            GroupBackend::Cyclic { order } => {
                let up = letters.iter().filter(|&&l| l > 0).count() as u64 % order;
                let down = letters.iter().filter(|&&l| l < 0).count() as u64 % order;
                GroupElement::Residue((up + order - down) % order)
            }
            GroupBackend::Cayley(t) => GroupElement::Index(
                letters
                    .iter()
                    .fold(t.identity(), |acc, &l| t.mul(acc, t.letter_image(l))),
            ),
        })
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(match (self, a, b) {
            (GroupBackend::Free { .. }, GroupElement::Reduced(x), GroupElement::Reduced(y)) => {
                let mut out = x.clone();
                let mut rest = y.as_slice();
                while let (Some(&last), Some(&first)) = (out.last(), rest.first()) {
                    if last != -first {
                        break;
                    }
                    out.pop();
                    rest = &rest[1..];
                }
                out.extend_from_slice(rest);
                GroupElement::Reduced(out)
            }
            (GroupBackend::FreeAbelian { .. }, GroupElement::Exponents(x), GroupElement::Exponents(y)) => {
                GroupElement::Exponents(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupBackend::Cyclic { order }, GroupElement::Residue(x), GroupElement::Residue(y)) => {
                GroupElement::Residue((x + y) % order)
            }
            (GroupBackend::Cayley(t), GroupElement::Index(x), GroupElement::Index(y)) => {
                GroupElement::Index(t.mul(*x, *y))
            }
            _ => unreachable!("check_element matched the variants"),
        })
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(a)?;
        Ok(match (self, a) {
            (GroupBackend::Free { .. }, GroupElement::Reduced(x)) => {
                GroupElement::Reduced(x.iter().rev().map(|&l| -l).collect())
            }
            (GroupBackend::FreeAbelian { .. }, GroupElement::Exponents(x)) => {
                GroupElement::Exponents(x.iter().map(|p| -p).collect())
            }
            (GroupBackend::Cyclic { order }, GroupElement::Residue(x)) => {
                GroupElement::Residue((order - x) % order)
            }
            (GroupBackend::Cayley(t), GroupElement::Index(x)) => GroupElement::Index(t.inverse(*x)),
            _ => unreachable!("check_element matched the variants"),
        })
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        *a == self.identity()
    }

    /// Membership of `word` in the group language: does it spell the identity?
    pub fn word_in_group_language(&self, word: &Word) -> Result<bool, GroupError> {
        Ok(self.is_identity(&self.canonicalize(word)?))
    }

    /// A word spelling `element`, for the backends whose canonical form
    /// is itself word-like. Cayley elements have no canonical spelling.
    pub fn spell(&self, element: &GroupElement) -> Option<Word> {
        match element {
            GroupElement::Reduced(w) => Some(Word::from_letters(w.clone())),
            GroupElement::Exponents(v) => {
                let mut word = Word::empty();
                for (i, &e) in v.iter().enumerate() {
                    let letter = (i as Letter + 1) * e.signum() as Letter;
                    for _ in 0..e.unsigned_abs() {
                        word.push(letter);
                    }
                }
                Some(word)
            }
            GroupElement::Residue(r) => Some(Word::from_letters(vec![1; *r as usize])),
            GroupElement::Index(_) => None,
        }
    }

    /// Verifies that `a` is a well-formed canonical element of this backend.
    pub fn check_element(&self, a: &GroupElement) -> Result<(), GroupError> {
        let ok = match (self, a) {
            (GroupBackend::Free { rank }, GroupElement::Reduced(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
            }
            (GroupBackend::FreeAbelian { rank }, GroupElement::Exponents(v)) => v.len() == *rank,
            (GroupBackend::Cyclic { order }, GroupElement::Residue(r)) => r < order,
            (GroupBackend::Cayley(t), GroupElement::Index(i)) => *i < t.size(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::BackendMismatch(format!("{a:?} is not an element of {}", self.name())))
        }
    }
}

/// Stack-based free reduction: push each letter, pop when it cancels the top.
pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        if stack.last() == Some(&-l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

fn permutations(points: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; points], &mut out);
    out
}
