//! Exhaustive deciders for the frameproof (FP), secure-frameproof (SFP),
//! identifiable-parent (IPP) and traceability (TA) properties, for plain
//! codes and for two-level codes.
//!
//! All four scans enumerate coalitions by size and then lexicographically by
//! code position, so the first witness reported is deterministic. Work is
//! split across the rayon pool; run inside `ThreadPool::install` to bound
//! it.

mod kernel;
mod replay;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::code::{Code, TwoLevelCode};
use crate::descendant::{desc_t_candidates, SymbolProfile};
use crate::error::{Error, Result};
use crate::subsets::count_up_to;
use crate::verdict::{Verdict, Witness};

use kernel::Kernel;

/// Agreement masks are `u64`, whatever the limits say.
pub const MAX_VERIFIABLE_LENGTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Fp,
    Sfp,
    Ipp,
    Ta,
}

impl Property {
    pub const ALL: [Property; 4] = [Property::Fp, Property::Sfp, Property::Ipp, Property::Ta];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Fp => "FP",
            Property::Sfp => "SFP",
            Property::Ipp => "IPP",
            Property::Ta => "TA",
        })
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fp" => Ok(Property::Fp),
            "sfp" => Ok(Property::Sfp),
            "ipp" => Ok(Property::Ipp),
            "ta" => Ok(Property::Ta),
            other => Err(Error::Parameter(format!("unknown property '{other}'"))),
        }
    }
}

/// Desk-scale guard rails. The structural limits apply to the code and the
/// coalition bound; `max_enumeration` caps any single enumeration (coalition
/// lists, candidate products, descendant sets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_code_size: usize,
    pub max_threshold: usize,
    pub max_length: usize,
    pub max_enumeration: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_code_size: 64,
            max_threshold: 3,
            max_length: 8,
            max_enumeration: 1 << 24,
        }
    }
}

impl Limits {
    /// Drops the structural limits and keeps only the enumeration cap.
    pub fn relaxed(max_enumeration: u128) -> Self {
        Limits {
            max_code_size: usize::MAX,
            max_threshold: usize::MAX,
            max_length: MAX_VERIFIABLE_LENGTH,
            max_enumeration,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Verifier {
    limits: Limits,
}

impl Verifier {
    pub fn new(limits: Limits) -> Self {
        Verifier { limits }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Decides the one-level `t`-property. Coalition bounds above `|C|` are
    /// treated as `|C|`.
    pub fn check(&self, code: &Code, property: Property, t: usize) -> Result<Verdict> {
        let mut found = self.violations(code, property, t, 1)?;
        Ok(Verdict::from_witness(found.pop()))
    }

    /// Up to `limit` witnesses, in scan order.
    pub fn violations(&self, code: &Code, property: Property, t: usize, limit: usize) -> Result<Vec<Witness>> {
        let t = self.admit(code, property, t)?;
        Ok(run(&Kernel::codeword_level(code), code, property, t, limit))
    }

    /// Decides the two-level `(T, t)`-property: the `t`-property of the
    /// underlying code first, then the group condition at `big_t`.
    pub fn check_two_level(&self, code: &TwoLevelCode, property: Property, big_t: usize, t: usize) -> Result<Verdict> {
        let mut found = self.two_level_violations(code, property, big_t, t, 1)?;
        Ok(Verdict::from_witness(found.pop()))
    }

    /// Witnesses for the codeword clause if it fails, otherwise for the group
    /// clause.
    pub fn two_level_violations(
        &self,
        code: &TwoLevelCode,
        property: Property,
        big_t: usize,
        t: usize,
        limit: usize,
    ) -> Result<Vec<Witness>> {
        if big_t < t {
            return Err(Error::Parameter(format!(
                "group threshold T={big_t} is below the codeword threshold t={t}"
            )));
        }
        let base = code.base();
        let big_t = self.admit(base, property, big_t)?;
        let t = self.admit(base, property, t)?;
        let first = run(&Kernel::codeword_level(base), base, property, t, limit);
        if !first.is_empty() {
            return Ok(first);
        }
        Ok(run(&Kernel::group_level(code), base, property, big_t, limit))
    }

    fn admit(&self, code: &Code, property: Property, t: usize) -> Result<usize> {
        let lim = &self.limits;
        if t == 0 {
            return Err(Error::Parameter("coalition bound must be at least 1".into()));
        }
        if code.is_empty() {
            return Err(Error::Domain("cannot verify an empty code".into()));
        }
        let n = code.len();
        let len = code.word_len();
        if len > MAX_VERIFIABLE_LENGTH.min(lim.max_length) {
            return Err(Error::capacity(
                "word length",
                len as u128,
                MAX_VERIFIABLE_LENGTH.min(lim.max_length) as u128,
            ));
        }
        if n > lim.max_code_size {
            return Err(Error::capacity("code size", n as u128, lim.max_code_size as u128));
        }
        // coalitions larger than the code add nothing
        let t = t.min(n);
        if t > lim.max_threshold {
            return Err(Error::capacity("coalition bound", t as u128, lim.max_threshold as u128));
        }
        let coalitions = count_up_to(n, t);
        if coalitions > lim.max_enumeration {
            return Err(Error::capacity(
                "coalition enumeration",
                coalitions,
                lim.max_enumeration,
            ));
        }
        match property {
            Property::Ipp => {
                desc_t_candidates(code, t, lim.max_enumeration)?;
            }
            Property::Ta => {
                // largest desc(X) is bounded by both t^ℓ and the code's profile
                let per_coalition = SymbolProfile::of(code.words())?
                    .descendant_count()
                    .min((t as u128).saturating_pow(len as u32));
                if per_coalition > lim.max_enumeration {
                    return Err(Error::capacity(
                        "descendant enumeration",
                        per_coalition,
                        lim.max_enumeration,
                    ));
                }
            }
            Property::Fp | Property::Sfp => {}
        }
        Ok(t)
    }
}

fn run(kernel: &Kernel<'_>, code: &Code, property: Property, bound: usize, limit: usize) -> Vec<Witness> {
    match property {
        Property::Fp => kernel.frameproof(bound, limit),
        Property::Sfp => kernel.secure_frameproof(bound, limit),
        Property::Ipp => {
            let space = desc_t_candidates(code, bound, u128::MAX).expect("admitted");
            kernel.parent_property(&space, bound, limit)
        }
        Property::Ta => kernel.traceability(bound, limit),
    }
}

pub fn is_t_fp(code: &Code, t: usize) -> Result<Verdict> {
    Verifier::default().check(code, Property::Fp, t)
}

pub fn is_t_sfp(code: &Code, t: usize) -> Result<Verdict> {
    Verifier::default().check(code, Property::Sfp, t)
}

pub fn is_t_ipp(code: &Code, t: usize) -> Result<Verdict> {
    Verifier::default().check(code, Property::Ipp, t)
}

pub fn is_t_ta(code: &Code, t: usize) -> Result<Verdict> {
    Verifier::default().check(code, Property::Ta, t)
}

pub fn is_two_level_fp(code: &TwoLevelCode, big_t: usize, t: usize) -> Result<Verdict> {
    Verifier::default().check_two_level(code, Property::Fp, big_t, t)
}

pub fn is_two_level_sfp(code: &TwoLevelCode, big_t: usize, t: usize) -> Result<Verdict> {
    Verifier::default().check_two_level(code, Property::Sfp, big_t, t)
}

pub fn is_two_level_ipp(code: &TwoLevelCode, big_t: usize, t: usize) -> Result<Verdict> {
    Verifier::default().check_two_level(code, Property::Ipp, big_t, t)
}

pub fn is_two_level_ta(code: &TwoLevelCode, big_t: usize, t: usize) -> Result<Verdict> {
    Verifier::default().check_two_level(code, Property::Ta, big_t, t)
}
