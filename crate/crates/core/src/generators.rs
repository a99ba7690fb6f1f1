//! Input codes: polynomial-evaluation frameproof codes over prime fields,
//! the same-size grouping by first symbol, and seeded random codes.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{Alphabet, Code, Codeword, Symbol, TwoLevelCode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u32,
}

impl PrimeField {
    pub fn new(modulus: u32) -> Result<Self> {
        let is_prime = modulus >= 2
            && (2..)
                .take_while(|d| d * d <= modulus)
                .all(|d| !modulus.is_multiple_of(d));
        if !is_prime {
            return Err(Error::Parameter(format!("{modulus} is not prime")));
        }
        // elements double as alphabet symbols
        Alphabet::new(modulus)?;
        Ok(PrimeField { modulus })
    }

    pub fn order(&self) -> u32 {
        self.modulus
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.modulus
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (!a.is_multiple_of(self.modulus)).then(|| self.pow(a, self.modulus - 2))
    }

    /// Horner evaluation; `coeffs[0]` is the leading coefficient.
    pub fn eval(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs.iter().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// `{(f(α_1), …, f(α_ℓ)) : deg f < ⌈ℓ/t⌉}` over `field`.
///
/// Polynomials are enumerated by coefficient vector, leading coefficient
/// first and the constant term varying fastest. `eval_points` defaults to
/// `0, 1, …, ℓ−1`.
pub fn gen_polynomial_fp_code(field: PrimeField, length: usize, t: usize, eval_points: Option<&[u32]>) -> Result<Code> {
    let q = field.order();
    if length < 3 {
        return Err(Error::Parameter(format!("length must be at least 3, got {length}")));
    }
    if t == 0 {
        return Err(Error::Parameter("t must be at least 1".into()));
    }
    if length as u64 > q as u64 {
        return Err(Error::Parameter(format!(
            "length {length} needs at least {length} distinct points but the field has {q}"
        )));
    }
    let points: Vec<u32> = match eval_points {
        Some(p) => p.to_vec(),
        None => (0..length as u32).collect(),
    };
    if points.len() != length {
        return Err(Error::Dimension {
            expected: length,
            found: points.len(),
        });
    }
    if let Some(&p) = points.iter().find(|&&p| p >= q) {
        return Err(Error::Parameter(format!("evaluation point {p} is not a field element")));
    }
    if points.iter().collect::<HashSet<_>>().len() != points.len() {
        return Err(Error::Parameter("evaluation points must be distinct".into()));
    }

    let degree_bound = length.div_ceil(t);
    let count = (q as u128)
        .checked_pow(degree_bound as u32)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| Error::capacity("polynomial code", u128::MAX, 1 << 24))?;
    let mut words = Vec::with_capacity(count as usize);
    let mut coeffs = vec![0u32; degree_bound];
    for _ in 0..count {
        let word: Vec<Symbol> = points.iter().map(|&a| field.eval(&coeffs, a) as Symbol).collect();
        words.push(Codeword::from(word));
        // odometer, constant term fastest
        for c in coeffs.iter_mut().rev() {
            *c += 1;
            if *c < q {
                break;
            }
            *c = 0;
        }
    }
    Code::new(Alphabet::new(q)?, length, words)
}

/// Groups codewords by their first symbol, one group per symbol in use,
/// ordered by symbol. Every class must have the same size.
pub fn partition_by_first_coordinate(code: &Code) -> Result<TwoLevelCode> {
    let mut classes: BTreeMap<Symbol, usize> = BTreeMap::new();
    for w in code {
        *classes.entry(w.get(0)).or_default() += 1;
    }
    let sizes: Vec<usize> = classes.values().copied().collect();
    if sizes.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Precondition(format!(
            "first-symbol classes have unequal sizes {sizes:?}; use the general construction instead"
        )));
    }
    let group: BTreeMap<Symbol, usize> = classes.keys().enumerate().map(|(i, &s)| (s, i + 1)).collect();
    let assignment: Vec<usize> = code.iter().map(|w| group[&w.get(0)]).collect();
    TwoLevelCode::new(code.clone(), &assignment)
}

/// `n` distinct words drawn uniformly from `Q^ℓ`, reproducible from `seed`.
pub fn gen_random_code(q: u32, length: usize, n: usize, seed: u64) -> Result<Code> {
    let alphabet = Alphabet::new(q)?;
    if length == 0 {
        return Err(Error::Parameter("word length must be at least 1".into()));
    }
    let space = (q as u128).checked_pow(length as u32);
    if space.is_some_and(|s| (n as u128) > s) {
        return Err(Error::Parameter(format!(
            "cannot draw {n} distinct words from a space of {}",
            space.unwrap()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let decode = |mut i: u128| {
        let mut w = vec![0 as Symbol; length];
        for s in w.iter_mut().rev() {
            *s = (i % q as u128) as Symbol;
            i /= q as u128;
        }
        Codeword::from(w)
    };
    let words: Vec<Codeword> = match space.and_then(|s| usize::try_from(s).ok()).filter(|&s| s <= 1 << 26) {
        Some(total) => index::sample(&mut rng, total, n)
            .into_iter()
            .map(|i| decode(i as u128))
            .collect(),
        None => {
            let mut seen = HashSet::with_capacity(n);
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let w = Codeword::from((0..length).map(|_| rng.gen_range(0..q) as Symbol).collect::<Vec<_>>());
                if seen.insert(w.clone()) {
                    out.push(w);
                }
            }
            out
        }
    };
    Code::new(alphabet, length, words)
}
