//! Re-checks a witness against the raw definitions, using only set
//! membership, `is_descendant` and nearest-codeword search.

use std::collections::BTreeSet;

use crate::code::{min_distance_to_code, Code, Codeword, TwoLevelCode};
use crate::descendant::is_descendant;
use crate::verdict::Witness;

fn coalition_ok(code: &Code, xs: &[Codeword], bound: usize) -> bool {
    let distinct: BTreeSet<&Codeword> = xs.iter().collect();
    !xs.is_empty() && xs.len() <= bound && distinct.len() == xs.len() && xs.iter().all(|x| code.contains(x))
}

fn descends(xs: &[Codeword], d: &Codeword) -> bool {
    is_descendant(xs, d).unwrap_or(false)
}

fn nearest(code: &Code, x: &Codeword, z: &Codeword) -> bool {
    min_distance_to_code(code, x).is_ok_and(|(_, zs)| zs.contains(z))
}

fn groups_of(code: &TwoLevelCode, xs: &[Codeword]) -> Option<Vec<usize>> {
    code.group_indices(xs)
}

impl Witness {
    /// True when this codeword-level witness really violates the
    /// `t`-property of `code`.
    pub fn replays_on(&self, code: &Code, t: usize) -> bool {
        match self {
            Witness::Framed { coalition, framed } => {
                coalition_ok(code, coalition, t)
                    && code.contains(framed)
                    && !coalition.contains(framed)
                    && descends(coalition, framed)
            }
            Witness::SharedDescendant { left, right, shared } => {
                coalition_ok(code, left, t)
                    && coalition_ok(code, right, t)
                    && left.iter().all(|x| !right.contains(x))
                    && descends(left, shared)
                    && descends(right, shared)
            }
            Witness::NoCommonParent {
                descendant,
                parent_sets,
            } => {
                let Some((first, rest)) = parent_sets.split_first() else {
                    return false;
                };
                let mut common: BTreeSet<&Codeword> = first.iter().collect();
                for p in rest {
                    common.retain(|c| p.contains(c));
                }
                parent_sets
                    .iter()
                    .all(|p| coalition_ok(code, p, t) && descends(p, descendant))
                    && common.is_empty()
            }
            Witness::Untraceable {
                coalition,
                descendant,
                nearest: z,
            } => {
                coalition_ok(code, coalition, t)
                    && descends(coalition, descendant)
                    && nearest(code, descendant, z)
                    && !coalition.contains(z)
            }
            _ => false,
        }
    }

    /// True when this witness violates the `(T, t)`-property of `code`:
    /// codeword-level witnesses are replayed at `t` on the underlying code,
    /// group-level ones at `big_t` against the grouping.
    pub fn replays_on_two_level(&self, code: &TwoLevelCode, big_t: usize, t: usize) -> bool {
        let base = code.base();
        match self {
            Witness::GroupFramed {
                coalition,
                coalition_groups,
                framed,
                framed_group,
            } => {
                coalition_ok(base, coalition, big_t)
                    && groups_of(code, coalition).as_ref() == Some(coalition_groups)
                    && code.group_of(framed) == Some(*framed_group)
                    && !coalition_groups.contains(framed_group)
                    && descends(coalition, framed)
            }
            Witness::GroupSharedDescendant {
                left,
                left_groups,
                right,
                right_groups,
                shared,
            } => {
                coalition_ok(base, left, big_t)
                    && coalition_ok(base, right, big_t)
                    && groups_of(code, left).as_ref() == Some(left_groups)
                    && groups_of(code, right).as_ref() == Some(right_groups)
                    && left_groups.iter().all(|g| !right_groups.contains(g))
                    && descends(left, shared)
                    && descends(right, shared)
            }
            Witness::NoCommonGroup {
                descendant,
                parent_sets,
                parent_groups,
            } => {
                if parent_sets.is_empty() || parent_sets.len() != parent_groups.len() {
                    return false;
                }
                let mut common: BTreeSet<usize> = parent_groups[0].iter().copied().collect();
                for g in &parent_groups[1..] {
                    common.retain(|x| g.contains(x));
                }
                parent_sets.iter().zip(parent_groups).all(|(p, g)| {
                    coalition_ok(base, p, big_t) && descends(p, descendant) && groups_of(code, p).as_ref() == Some(g)
                }) && common.is_empty()
            }
            Witness::GroupUntraceable {
                coalition,
                coalition_groups,
                descendant,
                nearest: z,
                nearest_group,
            } => {
                coalition_ok(base, coalition, big_t)
                    && groups_of(code, coalition).as_ref() == Some(coalition_groups)
                    && descends(coalition, descendant)
                    && nearest(base, descendant, z)
                    && code.group_of(z) == Some(*nearest_group)
                    && !coalition_groups.contains(nearest_group)
            }
            codeword_level => codeword_level.replays_on(base, t),
        }
    }
}
