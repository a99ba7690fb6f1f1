//! Descendant sets.
//!
//! A word `d` descends from a set `X` when every coordinate of `d` is
//! copied from some member of `X`. Coordinatewise this is a product:
//! `desc(X) = S_1(X) × … × S_ℓ(X)` where `S_i(X)` collects the symbols the
//! members of `X` show at coordinate `i`. Everything here works on that
//! profile; descendant sets are only materialized on request.

use crate::code::{Code, Codeword, Symbol};
use crate::error::{Error, Result};

/// Default ceiling on the number of words any descendant enumeration may
/// produce.
pub const DEFAULT_DESCENDANT_CEILING: u128 = 1 << 24;

/// Per-coordinate symbol sets `S_i(X)`, each sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolProfile {
    sets: Vec<Vec<Symbol>>,
}

impl SymbolProfile {
    pub fn of<'a, I>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Codeword>,
    {
        let mut iter = words.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Domain("descendants of an empty set are undefined".into()))?;
        let mut sets: Vec<Vec<Symbol>> = first.symbols().iter().map(|&s| vec![s]).collect();
        for w in iter {
            if w.len() != sets.len() {
                return Err(Error::Dimension {
                    expected: sets.len(),
                    found: w.len(),
                });
            }
            for (set, &s) in sets.iter_mut().zip(w.symbols()) {
                if let Err(pos) = set.binary_search(&s) {
                    set.insert(pos, s);
                }
            }
        }
        Ok(SymbolProfile { sets })
    }

    pub fn word_len(&self) -> usize {
        self.sets.len()
    }

    pub fn coordinate(&self, i: usize) -> &[Symbol] {
        &self.sets[i]
    }

    /// `|desc(X)| = ∏ |S_i(X)|`, saturating.
    pub fn descendant_count(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    pub fn admits(&self, d: &Codeword) -> bool {
        d.len() == self.sets.len()
            && self
                .sets
                .iter()
                .zip(d.symbols())
                .all(|(set, s)| set.binary_search(s).is_ok())
    }

    /// Coordinatewise overlap, i.e. `desc(X) ∩ desc(Y) ≠ ∅`.
    pub fn overlaps(&self, other: &SymbolProfile) -> bool {
        self.first_common(other).is_some()
    }

    /// The lexicographically smallest word in both descendant sets.
    pub fn first_common(&self, other: &SymbolProfile) -> Option<Codeword> {
        if self.sets.len() != other.sets.len() {
            return None;
        }
        self.sets
            .iter()
            .zip(&other.sets)
            .map(|(a, b)| a.iter().find(|s| b.binary_search(s).is_ok()).copied())
            .collect::<Option<Vec<_>>>()
            .map(Codeword::from)
    }

    /// Lexicographic iterator over the product.
    pub fn descendants(&self) -> Descendants<'_> {
        Descendants {
            profile: self,
            next: self.count_as_u64().map(|_| 0),
            total: self.count_as_u64().unwrap_or(0),
        }
    }

    /// The `index`-th word of the product in lexicographic order.
    pub fn word_at(&self, mut index: u64) -> Codeword {
        let mut out = vec![0; self.sets.len()];
        for (slot, set) in out.iter_mut().zip(&self.sets).rev() {
            let radix = set.len() as u64;
            *slot = set[(index % radix) as usize];
            index /= radix;
        }
        Codeword::from(out)
    }

    fn count_as_u64(&self) -> Option<u64> {
        u64::try_from(self.descendant_count()).ok()
    }

    pub(crate) fn ensure_within(&self, ceiling: u128) -> Result<u64> {
        let size = self.descendant_count();
        if size > ceiling {
            return Err(Error::capacity("descendant enumeration", size, ceiling));
        }
        self.count_as_u64()
            .ok_or_else(|| Error::capacity("descendant enumeration", size, u64::MAX as u128))
    }
}

pub struct Descendants<'a> {
    profile: &'a SymbolProfile,
    next: Option<u64>,
    total: u64,
}

impl Iterator for Descendants<'_> {
    type Item = Codeword;

    fn next(&mut self) -> Option<Codeword> {
        let i = self.next?;
        if i >= self.total {
            self.next = None;
            return None;
        }
        self.next = Some(i + 1);
        Some(self.profile.word_at(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.next.map_or(0, |i| self.total.saturating_sub(i)) as usize;
        (left, Some(left))
    }
}

fn check_lengths(xs: &[Codeword], d: &Codeword) -> Result<()> {
    match xs.iter().find(|x| x.len() != d.len()) {
        Some(x) => Err(Error::Dimension {
            expected: d.len(),
            found: x.len(),
        }),
        None => Ok(()),
    }
}

pub fn is_descendant(xs: &[Codeword], d: &Codeword) -> Result<bool> {
    if xs.is_empty() {
        return Err(Error::Domain("descendants of an empty set are undefined".into()));
    }
    check_lengths(xs, d)?;
    Ok((0..d.len()).all(|i| xs.iter().any(|x| x.get(i) == d.get(i))))
}

/// `desc(X)` in lexicographic order, refusing to build more than `ceiling`
/// words.
pub fn enumerate_descendants(xs: &[Codeword], ceiling: u128) -> Result<Vec<Codeword>> {
    let profile = SymbolProfile::of(xs)?;
    profile.ensure_within(ceiling)?;
    Ok(profile.descendants().collect())
}

pub fn profiles_intersect(x0: &[Codeword], x1: &[Codeword]) -> Result<bool> {
    let a = SymbolProfile::of(x0)?;
    let b = SymbolProfile::of(x1)?;
    if a.word_len() != b.word_len() {
        return Err(Error::Dimension {
            expected: a.word_len(),
            found: b.word_len(),
        });
    }
    Ok(a.overlaps(&b))
}

/// Every word of `∏ S_i(C)`, the enumerable superset of `desc_t(C)` for any
/// `t`. Membership in `desc_t(C)` itself is decided by the verifiers'
/// parent-set search.
pub fn desc_t_candidates(code: &Code, t: usize, ceiling: u128) -> Result<CandidateSpace> {
    if t == 0 {
        return Err(Error::Parameter("coalition bound t must be at least 1".into()));
    }
    let profile = SymbolProfile::of(code.words())?;
    let total = profile.ensure_within(ceiling)?;
    Ok(CandidateSpace { profile, total })
}

/// Indexable candidate product; ranges of indices are independent work
/// units.
#[derive(Clone, Debug)]
pub struct CandidateSpace {
    profile: SymbolProfile,
    total: u64,
}

impl CandidateSpace {
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn get(&self, index: u64) -> Codeword {
        self.profile.word_at(index)
    }

    pub fn profile(&self) -> &SymbolProfile {
        &self.profile
    }

    pub fn iter(&self) -> Descendants<'_> {
        self.profile.descendants()
    }
}
