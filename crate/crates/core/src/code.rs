//! Alphabets, codewords, codes and their two-level (grouped) form.
//!
//! Symbols are always the canonical integers `0..q`. Inputs that use other
//! labels (say `1..=11`) go through [`Code::from_labels`], which maps the
//! distinct labels onto `0..q` preserving their order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u16;

/// Largest supported alphabet. All verifiers are exhaustive, so anything
/// bigger is out of reach anyway.
pub const MAX_ALPHABET: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    size: u32,
}

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::Parameter(format!(
                "alphabet size must be at least 2, got {size}"
            )));
        }
        if size > MAX_ALPHABET {
            return Err(Error::Parameter(format!(
                "alphabet size {size} exceeds the ceiling of {MAX_ALPHABET}"
            )));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        u32::from(symbol) < self.size
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        // size <= 2^16, so every symbol fits
        (0..self.size).map(|s| s as Symbol)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword(Box<[Symbol]>);

impl Codeword {
    pub fn new(symbols: impl Into<Box<[Symbol]>>) -> Self {
        Codeword(symbols.into())
    }

    /// Parses the compact notation used for small alphabets, one decimal
    /// digit per coordinate: `"1100"`.
    pub fn from_digits(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as Symbol)
                    .ok_or_else(|| Error::Domain(format!("'{c}' in \"{s}\" is not a digit")))
            })
            .collect::<Result<Vec<_>>>()?;
        if symbols.is_empty() {
            return Err(Error::Domain("empty codeword".into()));
        }
        Ok(Codeword(symbols.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Symbol {
        self.0[i]
    }

    pub fn with_first(&self, symbol: Symbol) -> Codeword {
        let mut symbols = self.0.clone();
        symbols[0] = symbol;
        Codeword(symbols)
    }
}

impl fmt::Display for Codeword {
    /// Digits run together when every symbol is below 10, otherwise the
    /// symbols are space-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in self.0.iter() {
                write!(f, "{s}")?;
            }
        } else {
            for (i, s) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword({self})")
    }
}

impl From<Vec<Symbol>> for Codeword {
    fn from(v: Vec<Symbol>) -> Self {
        Codeword(v.into())
    }
}

pub fn hamming_distance(x: &Codeword, y: &Codeword) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(distance(x.symbols(), y.symbols()))
}

#[inline]
pub(crate) fn distance(x: &[Symbol], y: &[Symbol]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// A set of distinct equal-length words over one alphabet.
///
/// Word order is whatever the caller supplied and is kept stable; every
/// enumeration in the crate indexes words in this order.
#[derive(Clone, Debug)]
pub struct Code {
    alphabet: Alphabet,
    length: usize,
    words: Vec<Codeword>,
    index: HashMap<Codeword, usize>,
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.length == other.length && self.words == other.words
    }
}

impl Eq for Code {}

impl Code {
    pub fn new(alphabet: Alphabet, length: usize, words: Vec<Codeword>) -> Result<Self> {
        if length == 0 {
            return Err(Error::Parameter("word length must be at least 1".into()));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if w.len() != length {
                return Err(Error::Dimension {
                    expected: length,
                    found: w.len(),
                });
            }
            if let Some(&s) = w.symbols().iter().find(|&&s| !alphabet.contains(s)) {
                return Err(Error::Symbol {
                    symbol: s.into(),
                    q: alphabet.size(),
                });
            }
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::DuplicateCodeword(w.clone()));
            }
        }
        Ok(Code {
            alphabet,
            length,
            words,
            index,
        })
    }

    /// Builds a code from words written with arbitrary integer labels. The
    /// distinct labels are mapped order-preservingly onto `0..k`; the
    /// alphabet size is `max(k, min_size)`. Returns the code and the sorted
    /// label table (position = canonical symbol).
    pub fn from_labels(words: &[Vec<u64>], min_size: u32) -> Result<(Code, Vec<u64>)> {
        let length = words.first().map_or(0, Vec::len);
        let labels: Vec<u64> = words
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let q = u32::try_from(labels.len())
            .ok()
            .filter(|&k| k <= MAX_ALPHABET)
            .ok_or_else(|| Error::Parameter(format!("{} distinct labels exceed the alphabet ceiling", labels.len())))?;
        let alphabet = Alphabet::new(q.max(min_size))?;
        let rank: HashMap<u64, Symbol> = labels.iter().enumerate().map(|(i, &l)| (l, i as Symbol)).collect();
        let canonical = words
            .iter()
            .map(|w| Codeword::from(w.iter().map(|l| rank[l]).collect::<Vec<_>>()))
            .collect();
        Ok((Code::new(alphabet, length, canonical)?, labels))
    }

    /// Convenience for tests and fixtures: every word in compact digit form.
    pub fn from_digit_words(q: u32, words: &[&str]) -> Result<Self> {
        let words = words
            .iter()
            .map(|w| Codeword::from_digits(w))
            .collect::<Result<Vec<_>>>()?;
        let length = words.first().map_or(0, Codeword::len);
        Code::new(Alphabet::new(q)?, length, words)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Word length ℓ.
    pub fn word_len(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Codeword> {
        self.words.iter()
    }

    pub fn contains(&self, w: &Codeword) -> bool {
        self.index.contains_key(w)
    }

    pub fn position(&self, w: &Codeword) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Rearranges coordinates so that coordinate `perm[j]` of each word
    /// becomes coordinate `j`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Code> {
        let mut seen = vec![false; self.length];
        if perm.len() != self.length {
            return Err(Error::Dimension {
                expected: self.length,
                found: perm.len(),
            });
        }
        for &p in perm {
            if p >= self.length || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parameter(format!(
                    "{perm:?} is not a permutation of 0..{}",
                    self.length
                )));
            }
        }
        let words = self
            .words
            .iter()
            .map(|w| Codeword::from(perm.iter().map(|&p| w.get(p)).collect::<Vec<_>>()))
            .collect();
        Code::new(self.alphabet, self.length, words)
    }

    pub(crate) fn check_word(&self, y: &Codeword) -> Result<()> {
        if y.len() != self.length {
            return Err(Error::Dimension {
                expected: self.length,
                found: y.len(),
            });
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Code {
    type Item = &'a Codeword;
    type IntoIter = std::slice::Iter<'a, Codeword>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

/// d_H(C, y) together with every codeword attaining it, in code order.
pub fn min_distance_to_code(code: &Code, y: &Codeword) -> Result<(usize, Vec<Codeword>)> {
    code.check_word(y)?;
    if code.is_empty() {
        return Err(Error::Domain("distance to an empty code is undefined".into()));
    }
    let dists: Vec<usize> = code.iter().map(|z| distance(z.symbols(), y.symbols())).collect();
    let min = *dists.iter().min().expect("non-empty");
    let nearest = code
        .iter()
        .zip(&dists)
        .filter(|(_, &d)| d == min)
        .map(|(z, _)| z.clone())
        .collect();
    Ok((min, nearest))
}

/// A code partitioned into `g` groups of exactly `p` codewords each.
///
/// Group indices are 1-based in every public accessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoLevelCode {
    base: Code,
    group_count: usize,
    group_size: usize,
    // 0-based group of each word of `base`, in base order
    assignment: Vec<usize>,
}

impl TwoLevelCode {
    /// `groups[i]` becomes group `i + 1`. Base word order is group order.
    pub fn from_groups(alphabet: Alphabet, length: usize, groups: Vec<Vec<Codeword>>) -> Result<Self> {
        let mut assignment = Vec::new();
        let mut words = Vec::new();
        for (g, members) in groups.into_iter().enumerate() {
            assignment.extend(std::iter::repeat_n(g + 1, members.len()));
            words.extend(members);
        }
        let base = Code::new(alphabet, length, words)?;
        TwoLevelCode::new(base, &assignment)
    }

    /// `assignment[i]` is the 1-based group of `base.words()[i]`.
    pub fn new(base: Code, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != base.len() {
            return Err(Error::Grouping(format!(
                "{} group indices for {} codewords",
                assignment.len(),
                base.len()
            )));
        }
        let group_count = assignment.iter().copied().max().unwrap_or(0);
        if group_count == 0 || assignment.contains(&0) {
            return Err(Error::Grouping("group indices start at 1".into()));
        }
        let mut sizes = vec![0usize; group_count];
        for &g in assignment {
            sizes[g - 1] += 1;
        }
        let group_size = sizes[0];
        if let Some((g, &s)) = sizes.iter().enumerate().find(|(_, &s)| s != group_size) {
            return Err(Error::Grouping(format!(
                "group {} has {s} members but group 1 has {group_size}",
                g + 1
            )));
        }
        Ok(TwoLevelCode {
            base,
            group_count,
            group_size,
            assignment: assignment.iter().map(|g| g - 1).collect(),
        })
    }

    pub fn base(&self) -> &Code {
        &self.base
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    /// 1-based group of the `i`-th base word.
    pub fn group_at(&self, i: usize) -> usize {
        self.assignment[i] + 1
    }

    pub(crate) fn slot_at(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// 𝒢(c), 1-based.
    pub fn group_of(&self, c: &Codeword) -> Option<usize> {
        self.base.position(c).map(|i| self.group_at(i))
    }

    /// 𝒢(X) as a sorted, deduplicated list of 1-based indices.
    pub fn group_indices<'a>(&self, xs: impl IntoIterator<Item = &'a Codeword>) -> Option<Vec<usize>> {
        let set: Option<BTreeSet<usize>> = xs.into_iter().map(|c| self.group_of(c)).collect();
        set.map(|s| s.into_iter().collect())
    }

    /// Members of group `g` (1-based), in base order.
    pub fn group(&self, g: usize) -> impl Iterator<Item = &Codeword> + '_ {
        self.base
            .iter()
            .zip(&self.assignment)
            .filter(move |(_, &s)| s + 1 == g)
            .map(|(w, _)| w)
    }

    pub fn groups(&self) -> Vec<Vec<Codeword>> {
        (1..=self.group_count)
            .map(|g| self.group(g).cloned().collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(s: &str) -> Codeword {
        Codeword::from_digits(s).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&cw("011"), &cw("206")).unwrap(), 3);
        assert_eq!(hamming_distance(&cw("1100"), &cw("1100")).unwrap(), 0);
        assert_eq!(hamming_distance(&cw("1100"), &cw("2102")).unwrap(), 2);
        assert!(matches!(
            hamming_distance(&cw("110"), &cw("1100")),
            Err(Error::Dimension { expected: 3, found: 4 })
        ));
    }

    #[test]
    fn nearest_codewords() {
        let c = Code::from_digit_words(
            9,
            &[
                "011", "022", "033", "044", "105", "206", "307", "408", "550", "660", "770", "880",
            ],
        )
        .unwrap();
        let (d, nearest) = min_distance_to_code(&c, &cw("000")).unwrap();
        assert_eq!(d, 2);
        assert!(nearest.contains(&cw("206")));
        // every word has exactly one zero-matching coordinate
        assert_eq!(nearest.len(), 12);

        let p = Code::from_digit_words(3, &["1100", "2102", "1122"]).unwrap();
        let (d, nearest) = min_distance_to_code(&p, &cw("1102")).unwrap();
        // 1122 differs from 1102 in one place too
        assert_eq!((d, nearest), (1, vec![cw("1100"), cw("2102"), cw("1122")]));
        let (d, nearest) = min_distance_to_code(&p, &cw("2102")).unwrap();
        assert_eq!((d, nearest), (0, vec![cw("2102")]));
    }

    #[test]
    fn empty_code_has_no_distance() {
        let c = Code::new(Alphabet::new(2).unwrap(), 2, vec![]).unwrap();
        assert!(matches!(min_distance_to_code(&c, &cw("01")), Err(Error::Domain(_))));
    }

    #[test]
    fn code_rejects_bad_words() {
        let a = Alphabet::new(2).unwrap();
        assert!(matches!(
            Code::new(a, 2, vec![cw("01"), cw("01")]),
            Err(Error::DuplicateCodeword(_))
        ));
        assert!(matches!(
            Code::new(a, 2, vec![cw("02")]),
            Err(Error::Symbol { symbol: 2, q: 2 })
        ));
        assert!(matches!(Code::new(a, 2, vec![cw("011")]), Err(Error::Dimension { .. })));
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(MAX_ALPHABET + 1).is_err());
    }

    #[test]
    fn labels_are_mapped_in_order() {
        let (code, labels) = Code::from_labels(&[vec![1, 11], vec![11, 5]], 0).unwrap();
        assert_eq!(labels, vec![1, 5, 11]);
        assert_eq!(code.words(), &[Codeword::from(vec![0, 2]), Codeword::from(vec![2, 1])]);
        assert_eq!(code.alphabet().size(), 3);
    }

    #[test]
    fn grouping_must_be_equal_sized() {
        let base = Code::from_digit_words(2, &["00", "01", "10", "11"]).unwrap();
        let two = TwoLevelCode::new(base.clone(), &[1, 2, 2, 1]).unwrap();
        assert_eq!((two.group_count(), two.group_size()), (2, 2));
        assert_eq!(two.group_of(&cw("11")), Some(1));
        assert_eq!(two.group_indices([&cw("11"), &cw("01"), &cw("00")]), Some(vec![1, 2]));
        assert_eq!(two.groups(), vec![vec![cw("00"), cw("11")], vec![cw("01"), cw("10")]]);
        assert!(TwoLevelCode::new(base.clone(), &[1, 1, 1, 2]).is_err());
        assert!(TwoLevelCode::new(base.clone(), &[0, 1, 1, 2]).is_err());
        assert!(TwoLevelCode::new(base, &[1, 1]).is_err());
    }

    #[test]
    fn permute_moves_coordinates() {
        let c = Code::from_digit_words(3, &["012", "120"]).unwrap();
        let p = c.permute_coordinates(&[2, 0, 1]).unwrap();
        assert_eq!(p.words(), &[cw("201"), cw("012")]);
        assert!(c.permute_coordinates(&[0, 0, 1]).is_err());
    }
}
