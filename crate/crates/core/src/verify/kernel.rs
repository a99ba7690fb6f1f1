//! Exhaustive scans shared by the one- and two-level deciders.
//!
//! Every word carries a label. At the codeword level the label is the
//! word's own index, so "label outside labels(X)" means "not in X". At the
//! group level the label is the word's group, and the same condition reads
//! "group not in 𝒢(X)". Each of the four properties is a single scan over
//! these labels.

use rayon::prelude::*;

use crate::code::{distance, Code, Codeword, TwoLevelCode};
use crate::descendant::{CandidateSpace, SymbolProfile};
use crate::subsets::{disjoint_sorted, intersect_sorted, subsets_up_to, Combinations};
use crate::verdict::Witness;

const CANDIDATES_PER_UNIT: u64 = 64;

pub(crate) struct Kernel<'a> {
    words: &'a [Codeword],
    word_len: usize,
    labels: Vec<u32>,
    grouped: bool,
}

impl<'a> Kernel<'a> {
    pub(crate) fn codeword_level(code: &'a Code) -> Self {
        Kernel {
            words: code.words(),
            word_len: code.word_len(),
            labels: (0..code.len() as u32).collect(),
            grouped: false,
        }
    }

    pub(crate) fn group_level(code: &'a TwoLevelCode) -> Self {
        let base = code.base();
        Kernel {
            words: base.words(),
            word_len: base.word_len(),
            labels: (0..base.len()).map(|i| code.slot_at(i) as u32).collect(),
            grouped: true,
        }
    }

    fn label_set(&self, members: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = members.iter().map(|&m| self.labels[m as usize]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn set(&self, members: &[u32]) -> Vec<Codeword> {
        members.iter().map(|&m| self.words[m as usize].clone()).collect()
    }

    fn groups(&self, labels: &[u32]) -> Vec<usize> {
        labels.iter().map(|&g| g as usize + 1).collect()
    }

    fn covers(&self, members: &[u32], target: &[u16]) -> bool {
        (0..self.word_len).all(|i| members.iter().any(|&m| self.words[m as usize].get(i) == target[i]))
    }

    fn full_mask(&self) -> u64 {
        if self.word_len == 64 {
            u64::MAX
        } else {
            (1u64 << self.word_len) - 1
        }
    }

    pub(crate) fn frameproof(&self, bound: usize, limit: usize) -> Vec<Witness> {
        let subsets = subsets_up_to(self.words.len(), bound);
        scan(&subsets, limit, |members, sink| {
            let labels = self.label_set(members);
            for (c, word) in self.words.iter().enumerate() {
                let label = self.labels[c];
                if labels.binary_search(&label).is_ok() || !self.covers(members, word.symbols()) {
                    continue;
                }
                let coalition = self.set(members);
                let framed = word.clone();
                sink.push(if self.grouped {
                    Witness::GroupFramed {
                        coalition,
                        coalition_groups: self.groups(&labels),
                        framed,
                        framed_group: label as usize + 1,
                    }
                } else {
                    Witness::Framed { coalition, framed }
                });
                if sink.full() {
                    return;
                }
            }
        })
    }

    pub(crate) fn secure_frameproof(&self, bound: usize, limit: usize) -> Vec<Witness> {
        let subsets = subsets_up_to(self.words.len(), bound);
        let prepared: Vec<(Vec<u32>, SymbolProfile)> = subsets
            .iter()
            .map(|s| {
                let profile =
                    SymbolProfile::of(s.iter().map(|&m| &self.words[m as usize])).expect("subsets are non-empty");
                (self.label_set(s), profile)
            })
            .collect();
        let units: Vec<usize> = (0..subsets.len()).collect();
        scan(&units, limit, |&i, sink| {
            let (left_labels, left_profile) = &prepared[i];
            for j in i + 1..subsets.len() {
                let (right_labels, right_profile) = &prepared[j];
                if !disjoint_sorted(left_labels, right_labels) {
                    continue;
                }
                let Some(shared) = left_profile.first_common(right_profile) else {
                    continue;
                };
                let left = self.set(&subsets[i]);
                let right = self.set(&subsets[j]);
                sink.push(if self.grouped {
                    Witness::GroupSharedDescendant {
                        left,
                        left_groups: self.groups(left_labels),
                        right,
                        right_groups: self.groups(right_labels),
                        shared,
                    }
                } else {
                    Witness::SharedDescendant { left, right, shared }
                });
                if sink.full() {
                    return;
                }
            }
        })
    }

    pub(crate) fn parent_property(&self, space: &CandidateSpace, bound: usize, limit: usize) -> Vec<Witness> {
        let units: Vec<(u64, u64)> = (0..space.len())
            .step_by(CANDIDATES_PER_UNIT as usize)
            .map(|start| (start, (start + CANDIDATES_PER_UNIT).min(space.len())))
            .collect();
        let full = self.full_mask();
        scan(&units, limit, |&(start, end), sink| {
            let mut masks = Vec::with_capacity(self.words.len());
            for idx in start..end {
                let x = space.get(idx);
                masks.clear();
                masks.extend(self.words.iter().enumerate().filter_map(|(c, w)| {
                    let m = agreement(w.symbols(), x.symbols());
                    (m != 0).then_some((c as u32, m))
                }));
                if let Some(w) = self.common_parent_failure(&x, &masks, full, bound) {
                    sink.push(w);
                    if sink.full() {
                        return;
                    }
                }
            }
        })
    }

    /// Intersects labels over every parent set of `x`, stopping as soon as
    /// the running intersection is empty. The sets that shrank it form the
    /// certificate.
    fn common_parent_failure(&self, x: &Codeword, useful: &[(u32, u64)], full: u64, bound: usize) -> Option<Witness> {
        let mut running: Option<Vec<u32>> = None;
        let mut certificate: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        for k in 1..=bound.min(useful.len()) {
            for combo in Combinations::new(useful.len(), k) {
                let mask = combo.iter().fold(0u64, |acc, &i| acc | useful[i as usize].1);
                if mask != full {
                    continue;
                }
                let members: Vec<u32> = combo.iter().map(|&i| useful[i as usize].0).collect();
                let labels = self.label_set(&members);
                let next = match &running {
                    None => labels.clone(),
                    Some(r) => intersect_sorted(r, &labels),
                };
                if running.as_ref().is_some_and(|r| r.len() == next.len()) {
                    continue;
                }
                certificate.push((members, labels));
                if next.is_empty() {
                    let parent_sets = certificate.iter().map(|(m, _)| self.set(m)).collect();
                    return Some(if self.grouped {
                        Witness::NoCommonGroup {
                            descendant: x.clone(),
                            parent_sets,
                            parent_groups: certificate.iter().map(|(_, l)| self.groups(l)).collect(),
                        }
                    } else {
                        Witness::NoCommonParent {
                            descendant: x.clone(),
                            parent_sets,
                        }
                    });
                }
                running = Some(next);
            }
        }
        None
    }

    pub(crate) fn traceability(&self, bound: usize, limit: usize) -> Vec<Witness> {
        let subsets = subsets_up_to(self.words.len(), bound);
        scan(&subsets, limit, |members, sink| {
            let labels = self.label_set(members);
            let profile =
                SymbolProfile::of(members.iter().map(|&m| &self.words[m as usize])).expect("subsets are non-empty");
            let mut dists = Vec::with_capacity(self.words.len());
            for x in profile.descendants() {
                dists.clear();
                dists.extend(self.words.iter().map(|z| distance(z.symbols(), x.symbols())));
                let min = *dists.iter().min().expect("code is non-empty");
                for (z, &d) in dists.iter().enumerate() {
                    let label = self.labels[z];
                    if d != min || labels.binary_search(&label).is_ok() {
                        continue;
                    }
                    let coalition = self.set(members);
                    let nearest = self.words[z].clone();
                    sink.push(if self.grouped {
                        Witness::GroupUntraceable {
                            coalition,
                            coalition_groups: self.groups(&labels),
                            descendant: x.clone(),
                            nearest,
                            nearest_group: label as usize + 1,
                        }
                    } else {
                        Witness::Untraceable {
                            coalition,
                            descendant: x.clone(),
                            nearest,
                        }
                    });
                    if sink.full() {
                        return;
                    }
                }
            }
        })
    }
}

/// Bit i set when the words agree at coordinate i.
#[inline]
fn agreement(a: &[u16], b: &[u16]) -> u64 {
    a.iter()
        .zip(b)
        .enumerate()
        .fold(0u64, |m, (i, (x, y))| if x == y { m | (1 << i) } else { m })
}

pub(crate) struct Sink {
    out: Vec<Witness>,
    limit: usize,
}

impl Sink {
    fn push(&mut self, w: Witness) {
        if self.out.len() < self.limit {
            self.out.push(w);
        }
    }

    fn full(&self) -> bool {
        self.out.len() >= self.limit
    }
}

/// Runs `visit` over independent work units in parallel and returns the
/// first `limit` witnesses in unit order. With `limit == 1` the scan stops
/// as soon as the earliest failing unit is known.
fn scan<U, F>(units: &[U], limit: usize, visit: F) -> Vec<Witness>
where
    U: Sync,
    F: Fn(&U, &mut Sink) + Sync,
{
    if limit == 0 {
        return Vec::new();
    }
    let run = |u: &U, limit: usize| {
        let mut sink = Sink { out: Vec::new(), limit };
        visit(u, &mut sink);
        sink.out
    };
    if limit == 1 {
        return units
            .par_iter()
            .find_map_first(|u| run(u, 1).pop())
            .into_iter()
            .collect();
    }
    let per_unit: Vec<Vec<Witness>> = units.par_iter().map(|u| run(u, limit)).collect();
    per_unit.into_iter().flatten().take(limit).collect()
}
