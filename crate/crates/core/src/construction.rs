//! Turning a code into a two-level code with `g ≤ q` groups.
//!
//! With `p = ⌈|C| / 2g⌉`, codewords are bucketed by first symbol into
//! classes `G_a` of size `g_a = α_a·p + β_a`. Then:
//!
//! 1. **Splitting.** Each class with `α_a > 0` yields `α_a` sets of `p`
//!    codewords, `v = Σ α_a` sets in all. If `v ≥ g` the first `g` sets are
//!    relabelled with symbols `0..g` and we are done. Otherwise `v − q_1`
//!    further symbols are reserved (`Q_2 ⊇ Q_1`, `|Q_2| = v`) and their
//!    classes discarded.
//! 2. **Amalgamating.** Whole classes outside `Q_2`, each smaller than `p`,
//!    are merged greedily into `g − v` sets of size in `[p, 2p − 2]`.
//! 3. **Replacing.** Split sets get pairwise distinct first symbols from
//!    `Q_2`; amalgamated sets are cut down to `p` codewords and keep their
//!    symbols.
//!
//! The groups then use pairwise disjoint sets of first symbols, and mapping
//! each new codeword back to its source changes at most the first
//! coordinate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{Code, Codeword, Symbol, TwoLevelCode};
use crate::descendant::{enumerate_descendants, SymbolProfile};
use crate::error::{Error, Result};

/// How the free choices of the construction are made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PickMode {
    /// Smallest classes are reserved, classes merge largest first, codewords
    /// are taken in lexicographic order, and every class keeps its own
    /// symbol for its first split set.
    Deterministic,
    /// Every choice drawn from a ChaCha8 stream seeded with the value.
    Seeded(u64),
    /// Reserved symbols and merges fixed by the caller; everything else as
    /// in `Deterministic`.
    Guided(GuidedPicks),
}

impl fmt::Display for PickMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PickMode::Deterministic => f.write_str("deterministic"),
            PickMode::Seeded(s) => write!(f, "seeded({s})"),
            PickMode::Guided(_) => f.write_str("guided"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GuidedPicks {
    /// Symbols whose classes are discarded to free them (`Q_2 \ Q_1`).
    pub discard: Vec<Symbol>,
    /// Classes merged into each amalgamated set, in group order.
    pub amalgamate: Vec<Vec<Symbol>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub symbol: Symbol,
    pub size: usize,
    pub alpha: usize,
    pub beta: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitRecord {
    pub source_symbol: Symbol,
    /// `None` for sets left unused after the `v ≥ g` shortcut.
    pub assigned_symbol: Option<Symbol>,
    pub members: Vec<Codeword>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscardRecord {
    pub symbol: Symbol,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamationRecord {
    pub classes: Vec<Symbol>,
    pub size_before_truncation: usize,
    pub kept: Vec<Codeword>,
    pub dropped: Vec<Codeword>,
}

/// Where eliminated codewords went. Sums to `|C| − g·p`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Eliminations {
    /// The `β_a` leftovers of split classes.
    pub remainders: usize,
    pub discarded_classes: usize,
    pub unused_split_sets: usize,
    pub unmerged_classes: usize,
    pub truncated: usize,
}

impl Eliminations {
    pub fn total(&self) -> usize {
        self.remainders + self.discarded_classes + self.unused_split_sets + self.unmerged_classes + self.truncated
    }
}

/// Audit trail of one run. Infeasible runs return the partial report
/// inside [`Error::Infeasible`] with `completed == false`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub mode: String,
    pub code_size: usize,
    pub alphabet_size: u32,
    pub group_count: usize,
    pub group_size: usize,
    /// Non-empty classes plus any empty class that was reserved.
    pub classes: Vec<ClassSummary>,
    pub q1: Vec<Symbol>,
    pub q1_count: usize,
    pub v: usize,
    pub shortcut: bool,
    pub q2: Vec<Symbol>,
    pub split_sets: Vec<SplitRecord>,
    pub discarded_classes: Vec<DiscardRecord>,
    pub amalgamated: Vec<AmalgamationRecord>,
    pub eliminations: Eliminations,
    pub eliminated_count: usize,
    pub groups: Vec<Vec<Codeword>>,
    pub completed: bool,
}

/// π on symbols, ψ on words (π applied to the first coordinate), and
/// φ = ψ restricted to the constructed code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolRemap {
    pi: Vec<Symbol>,
    phi: HashMap<Codeword, Codeword>,
}

impl SymbolRemap {
    pub fn identity(q: u32) -> Self {
        SymbolRemap {
            pi: (0..q).map(|s| s as Symbol).collect(),
            phi: HashMap::new(),
        }
    }

    pub fn pi(&self, a: Symbol) -> Result<Symbol> {
        self.pi.get(a as usize).copied().ok_or(Error::Symbol {
            symbol: a.into(),
            q: self.pi.len() as u32,
        })
    }

    pub fn pi_table(&self) -> &[Symbol] {
        &self.pi
    }

    pub fn apply_psi(&self, x: &Codeword) -> Result<Codeword> {
        if x.is_empty() {
            return Err(Error::Domain("empty word".into()));
        }
        if let Some(&s) = x.symbols().iter().find(|&&s| s as usize >= self.pi.len()) {
            return Err(Error::Symbol {
                symbol: s.into(),
                q: self.pi.len() as u32,
            });
        }
        Ok(x.with_first(self.pi[x.get(0) as usize]))
    }

    /// The source codeword of `c` when `c` belongs to the constructed code.
    pub fn phi(&self, c: &Codeword) -> Option<&Codeword> {
        self.phi.get(c)
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub code: TwoLevelCode,
    pub remap: SymbolRemap,
    pub report: ConstructionReport,
}

/// `ψ(desc(X)) ⊆ desc(ψ(X))`, checked by enumerating `desc(X)`.
pub fn check_lemma_containment(remap: &SymbolRemap, xs: &[Codeword], ceiling: u128) -> Result<bool> {
    let image: Vec<Codeword> = xs.iter().map(|x| remap.apply_psi(x)).collect::<Result<_>>()?;
    let target = SymbolProfile::of(&image)?;
    for d in enumerate_descendants(xs, ceiling)? {
        if !target.admits(&remap.apply_psi(&d)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Picker {
    mode: PickMode,
    rng: Option<ChaCha8Rng>,
}

impl Picker {
    fn order_class(&mut self, members: &mut [usize], words: &[Codeword]) {
        match &mut self.rng {
            Some(rng) => members.shuffle(rng),
            None => members.sort_by(|&a, &b| words[a].cmp(&words[b])),
        }
    }
}

pub fn construct_two_level(code: &Code, g: usize, mode: &PickMode) -> Result<Construction> {
    let q = code.alphabet().size();
    if g < 2 || g > q as usize {
        return Err(Error::Parameter(format!(
            "group count must satisfy 2 <= g <= q = {q}, got {g}"
        )));
    }
    if code.is_empty() {
        return Err(Error::Parameter("cannot construct from an empty code".into()));
    }
    let words = code.words();
    let n = code.len();
    let p = n.div_ceil(2 * g);
    let mut picker = Picker {
        mode: mode.clone(),
        rng: match mode {
            PickMode::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        },
    };

    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); q as usize];
    for (i, w) in words.iter().enumerate() {
        classes[w.get(0) as usize].push(i);
    }
    for members in classes.iter_mut() {
        picker.order_class(members, words);
    }
    let size = |a: Symbol| classes[a as usize].len();
    let alpha = |a: Symbol| size(a) / p;

    let q1: Vec<Symbol> = (0..q as usize).map(|a| a as Symbol).filter(|&a| alpha(a) > 0).collect();
    let v: usize = q1.iter().map(|&a| alpha(a)).sum();

    let mut report = ConstructionReport {
        mode: mode.to_string(),
        code_size: n,
        alphabet_size: q,
        group_count: g,
        group_size: p,
        classes: Vec::new(),
        q1: q1.clone(),
        q1_count: q1.len(),
        v,
        shortcut: v >= g,
        q2: Vec::new(),
        split_sets: Vec::new(),
        discarded_classes: Vec::new(),
        amalgamated: Vec::new(),
        eliminations: Eliminations::default(),
        eliminated_count: 0,
        groups: Vec::new(),
        completed: false,
    };

    // Step 1: splitting
    let mut split: Vec<(Symbol, Vec<usize>)> = Vec::with_capacity(v);
    for &a in &q1 {
        let members = &classes[a as usize];
        for k in 0..alpha(a) {
            split.push((a, members[k * p..(k + 1) * p].to_vec()));
        }
        report.eliminations.remainders += size(a) % p;
    }

    if n < g {
        report.classes = class_table(&classes, p, &[]);
        report.split_sets = split_records(&split, &[], words);
        return Err(Error::Infeasible {
            reason: format!("{n} codewords cannot fill {g} non-empty groups"),
            report: Box::new(report),
        });
    }

    let mut pi: Vec<Symbol> = (0..q).map(|s| s as Symbol).collect();
    let mut groups: Vec<Vec<Codeword>> = Vec::with_capacity(g);
    let mut preimages: Vec<Vec<usize>> = Vec::with_capacity(g);

    if v >= g {
        let assigned: Vec<Symbol> = (0..g as Symbol).collect();
        for (i, (source, members)) in split.iter().take(g).enumerate() {
            pi[i] = *source;
            groups.push(members.iter().map(|&m| words[m].with_first(i as Symbol)).collect());
            preimages.push(members.clone());
        }
        report.eliminations.unused_split_sets = (v - g) * p;
        report.eliminations.unmerged_classes = (0..q as usize)
            .map(|a| a as Symbol)
            .filter(|&a| alpha(a) == 0)
            .map(size)
            .sum();
        report.classes = class_table(&classes, p, &[]);
        report.split_sets = split_records(&split, &assigned, words);
        return finish(code, report, groups, preimages, pi, words);
    }

    let extras = reserve_symbols(&mut picker, &q1, v - q1.len(), q, &size)?;
    let mut q2: Vec<Symbol> = q1.iter().chain(&extras).copied().collect();
    q2.sort_unstable();
    report.q2 = q2.clone();
    report.classes = class_table(&classes, p, &extras);
    report.discarded_classes = extras
        .iter()
        .map(|&a| DiscardRecord {
            symbol: a,
            size: size(a),
        })
        .collect();
    report.eliminations.discarded_classes = extras.iter().map(|&a| size(a)).sum();

    // Step 2: amalgamating
    let needed = g - v;
    let leftover: Vec<Symbol> = (0..q as usize)
        .map(|a| a as Symbol)
        .filter(|a| q2.binary_search(a).is_err() && size(*a) > 0)
        .collect();
    let merges = match merge_classes(&mut picker, &leftover, needed, p, &size) {
        Ok(m) => m,
        Err((reason, partial)) => {
            report.split_sets = split_records(&split, &[], words);
            report.amalgamated = partial
                .iter()
                .map(|cls| AmalgamationRecord {
                    classes: cls.clone(),
                    size_before_truncation: cls.iter().map(|&a| size(a)).sum(),
                    kept: Vec::new(),
                    dropped: Vec::new(),
                })
                .collect();
            return Err(Error::Infeasible {
                reason,
                report: Box::new(report),
            });
        }
    };
    let merged: BTreeSet<Symbol> = merges.iter().flatten().copied().collect();
    report.eliminations.unmerged_classes = leftover.iter().filter(|a| !merged.contains(a)).map(|&a| size(a)).sum();

    // Step 3: replacing
    let assigned = assign_symbols(&mut picker, &split, &q2, &extras);
    for ((source, members), &symbol) in split.iter().zip(&assigned) {
        pi[symbol as usize] = *source;
        groups.push(members.iter().map(|&m| words[m].with_first(symbol)).collect());
        preimages.push(members.clone());
    }
    report.split_sets = split_records(&split, &assigned, words);
    for cls in &merges {
        let mut members: Vec<usize> = cls.iter().flat_map(|&a| classes[a as usize].iter().copied()).collect();
        picker.order_class(&mut members, words);
        let dropped = members.split_off(p);
        report.eliminations.truncated += dropped.len();
        report.amalgamated.push(AmalgamationRecord {
            classes: cls.clone(),
            size_before_truncation: members.len() + dropped.len(),
            kept: members.iter().map(|&m| words[m].clone()).collect(),
            dropped: dropped.iter().map(|&m| words[m].clone()).collect(),
        });
        groups.push(members.iter().map(|&m| words[m].clone()).collect());
        preimages.push(members);
    }
    finish(code, report, groups, preimages, pi, words)
}

fn finish(
    code: &Code,
    mut report: ConstructionReport,
    groups: Vec<Vec<Codeword>>,
    preimages: Vec<Vec<usize>>,
    pi: Vec<Symbol>,
    words: &[Codeword],
) -> Result<Construction> {
    let phi = groups
        .iter()
        .flatten()
        .zip(preimages.iter().flatten())
        .map(|(c, &m)| (c.clone(), words[m].clone()))
        .collect();
    report.eliminated_count = code.len() - report.group_count * report.group_size;
    debug_assert_eq!(report.eliminations.total(), report.eliminated_count);
    report.groups = groups.clone();
    report.completed = true;
    let built = TwoLevelCode::from_groups(code.alphabet(), code.word_len(), groups)?;
    Ok(Construction {
        code: built,
        remap: SymbolRemap { pi, phi },
        report,
    })
}

fn class_table(classes: &[Vec<usize>], p: usize, reserved: &[Symbol]) -> Vec<ClassSummary> {
    classes
        .iter()
        .enumerate()
        .filter(|(a, c)| !c.is_empty() || reserved.contains(&(*a as Symbol)))
        .map(|(a, c)| ClassSummary {
            symbol: a as Symbol,
            size: c.len(),
            alpha: c.len() / p,
            beta: c.len() % p,
        })
        .collect()
}

fn split_records(split: &[(Symbol, Vec<usize>)], assigned: &[Symbol], words: &[Codeword]) -> Vec<SplitRecord> {
    split
        .iter()
        .enumerate()
        .map(|(i, (source, members))| SplitRecord {
            source_symbol: *source,
            assigned_symbol: assigned.get(i).copied(),
            members: members.iter().map(|&m| words[m].clone()).collect(),
        })
        .collect()
}

/// Chooses `Q_2 \ Q_1`.
fn reserve_symbols(
    picker: &mut Picker,
    q1: &[Symbol],
    count: usize,
    q: u32,
    size: &dyn Fn(Symbol) -> usize,
) -> Result<Vec<Symbol>> {
    let mut pool: Vec<Symbol> = (0..q as usize)
        .map(|a| a as Symbol)
        .filter(|a| q1.binary_search(a).is_err())
        .collect();
    let mut chosen = match (&picker.mode, &mut picker.rng) {
        (PickMode::Guided(picks), _) => {
            let d = &picks.discard;
            let distinct: BTreeSet<_> = d.iter().collect();
            if d.len() != count || distinct.len() != count || d.iter().any(|a| pool.binary_search(a).is_err()) {
                return Err(Error::Parameter(format!(
                    "guided discard {d:?} must be {count} distinct symbols outside Q1 = {q1:?}"
                )));
            }
            d.clone()
        }
        (_, Some(rng)) => index::sample(rng, pool.len(), count)
            .into_iter()
            .map(|i| pool[i])
            .collect(),
        (_, None) => {
            pool.sort_by_key(|&a| (size(a), a));
            pool.truncate(count);
            pool
        }
    };
    chosen.sort_unstable();
    Ok(chosen)
}

/// Why merging stopped, with the sets completed so far.
type MergeFailure = (String, Vec<Vec<Symbol>>);

/// Greedy merge into `needed` sets of size in `[p, 2p − 2]`. On failure
/// returns the reason and the sets completed so far.
fn merge_classes(
    picker: &mut Picker,
    leftover: &[Symbol],
    needed: usize,
    p: usize,
    size: &dyn Fn(Symbol) -> usize,
) -> std::result::Result<Vec<Vec<Symbol>>, MergeFailure> {
    let window = p..=(2 * p).saturating_sub(2);
    if let PickMode::Guided(picks) = &picker.mode {
        let sets = &picks.amalgamate;
        let mut used = BTreeSet::new();
        for set in sets {
            let total: usize = set.iter().map(|&a| size(a)).sum();
            if set
                .iter()
                .any(|a| leftover.binary_search(a).is_err() || !used.insert(*a))
            {
                return Err((
                    format!("guided merge {set:?} uses a reserved, empty or repeated class"),
                    Vec::new(),
                ));
            }
            if !window.contains(&total) {
                return Err((
                    format!("guided merge {set:?} has size {total}, outside [{p}, {}]", 2 * p - 2),
                    Vec::new(),
                ));
            }
        }
        if sets.len() != needed {
            return Err((
                format!("guided picks give {} merged sets, {needed} needed", sets.len()),
                sets.clone(),
            ));
        }
        return Ok(sets.clone());
    }

    let mut order = leftover.to_vec();
    match &mut picker.rng {
        Some(rng) => order.shuffle(rng),
        None => order.sort_by_key(|&a| (std::cmp::Reverse(size(a)), a)),
    }
    let mut done: Vec<Vec<Symbol>> = Vec::with_capacity(needed);
    let mut current = Vec::new();
    let mut total = 0;
    for a in order {
        if done.len() == needed {
            break;
        }
        current.push(a);
        total += size(a);
        if total >= p {
            debug_assert!(window.contains(&total));
            done.push(std::mem::take(&mut current));
            total = 0;
        }
    }
    if done.len() < needed {
        return Err((
            format!(
                "leftover classes form only {} of the {needed} merged sets of size >= {p}",
                done.len()
            ),
            done,
        ));
    }
    Ok(done)
}

/// First symbol for each split set, in split order.
fn assign_symbols(
    picker: &mut Picker,
    split: &[(Symbol, Vec<usize>)],
    q2: &[Symbol],
    extras: &[Symbol],
) -> Vec<Symbol> {
    if let Some(rng) = &mut picker.rng {
        let mut symbols = q2.to_vec();
        symbols.shuffle(rng);
        return symbols;
    }
    let mut spare = extras.iter().copied();
    let mut seen = BTreeSet::new();
    split
        .iter()
        .map(|(source, _)| {
            if seen.insert(*source) {
                *source
            } else {
                spare.next().expect("v - q1 spare symbols")
            }
        })
        .collect()
}

impl fmt::Display for ConstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[Symbol]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        writeln!(f, "construction ({})", self.mode)?;
        writeln!(
            f,
            "  |C| = {}, q = {}, g = {}, p = {}",
            self.code_size, self.alphabet_size, self.group_count, self.group_size
        )?;
        writeln!(f, "  classes (symbol: size = alpha*p + beta):")?;
        for c in &self.classes {
            writeln!(
                f,
                "    {:>5}: {:>4} = {}*{} + {}",
                c.symbol, c.size, c.alpha, self.group_size, c.beta
            )?;
        }
        writeln!(
            f,
            "  Q1 = {{{}}}, q1 = {}, v = {}",
            list(&self.q1),
            self.q1_count,
            self.v
        )?;
        if self.shortcut {
            writeln!(
                f,
                "  v >= g: first {} split sets relabelled 0..{}",
                self.group_count, self.group_count
            )?;
        } else {
            writeln!(f, "  Q2 = {{{}}}", list(&self.q2))?;
        }
        writeln!(f, "  split sets:")?;
        for s in &self.split_sets {
            let to = s.assigned_symbol.map_or("unused".to_string(), |a| a.to_string());
            writeln!(
                f,
                "    class {} -> {} ({} codewords)",
                s.source_symbol,
                to,
                s.members.len()
            )?;
        }
        for d in &self.discarded_classes {
            writeln!(f, "  discarded class {} ({} codewords)", d.symbol, d.size)?;
        }
        for a in &self.amalgamated {
            writeln!(
                f,
                "  merged classes {{{}}}: {} codewords, {} dropped",
                list(&a.classes),
                a.size_before_truncation,
                a.dropped.len()
            )?;
        }
        let e = &self.eliminations;
        writeln!(
            f,
            "  eliminated {} = remainders {} + discarded {} + unused splits {} + unmerged {} + truncated {}",
            self.eliminated_count,
            e.remainders,
            e.discarded_classes,
            e.unused_split_sets,
            e.unmerged_classes,
            e.truncated
        )?;
        if self.completed {
            for (i, g) in self.groups.iter().enumerate() {
                let ws: Vec<String> = g.iter().map(ToString::to_string).collect();
                writeln!(f, "  group {}: {}", i + 1, ws.join(" | "))?;
            }
        } else {
            writeln!(f, "  (incomplete)")?;
        }
        Ok(())
    }
}
