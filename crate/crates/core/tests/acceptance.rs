//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twolevel_core::{
    check_lemma_containment, construct_two_level, enumerate_descendants, gen_polynomial_fp_code, gen_random_code,
    is_t_fp, is_t_ta, is_two_level_fp, partition_by_first_coordinate, profiles_intersect, Code, Codeword, PickMode,
    PrimeField, Property, Symbol, TwoLevelCode, Verifier, Witness,
};

type Outcome = Result<String, String>;

/// Name, check and time budget.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn cw(s: &str) -> Codeword {
    Codeword::from_digits(s).unwrap()
}

fn set(ws: &[&str]) -> BTreeSet<Codeword> {
    ws.iter().map(|w| cw(w)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn desc_reproduction() -> Outcome {
    let p: Vec<Codeword> = ["1100", "2102", "1122"].iter().map(|w| cw(w)).collect();
    let got: BTreeSet<Codeword> = enumerate_descendants(&p, 1 << 10)
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    let want = set(&["1100", "1102", "1120", "1122", "2100", "2102", "2120", "2122"]);
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("8 descendants, exact".into())
}

fn traceable_code() -> Code {
    Code::from_digit_words(
        9,
        &[
            "011", "022", "033", "044", "105", "206", "307", "408", "550", "660", "770", "880",
        ],
    )
    .unwrap()
}

fn relabelled_grouping() -> TwoLevelCode {
    let groups = [["011", "022"], ["833", "844"], ["105", "550"], ["206", "660"]]
        .iter()
        .map(|g| g.iter().map(|w| cw(w)).collect())
        .collect();
    TwoLevelCode::from_groups(traceable_code().alphabet(), 3, groups).unwrap()
}

fn traceable_code_holds() -> Outcome {
    let v = is_t_ta(&traceable_code(), 2).map_err(|e| e.to_string())?;
    ensure(v.is_holds(), || format!("verdict {v}"))?;
    Ok("2-TA holds".into())
}

fn grouping_fails_with_listed_witness() -> Outcome {
    let code = relabelled_grouping();
    let verifier = Verifier::default();
    let v = verifier
        .check_two_level(&code, Property::Ta, 3, 2)
        .map_err(|e| e.to_string())?;
    ensure(!v.is_holds(), || "two-level TA unexpectedly holds".into())?;
    let all = verifier
        .two_level_violations(&code, Property::Ta, 3, 2, usize::MAX)
        .map_err(|e| e.to_string())?;
    let coalition = set(&["011", "105", "550"]);
    let found = all.iter().any(|w| {
        matches!(w, Witness::GroupUntraceable { coalition: c, coalition_groups, descendant, nearest, nearest_group }
            if c.iter().cloned().collect::<BTreeSet<_>>() == coalition
                && coalition_groups == &[1, 3]
                && descendant == &cw("000")
                && nearest == &cw("206")
                && *nearest_group == 4)
    });
    ensure(found, || {
        format!("listed witness missing among {} violations", all.len())
    })?;
    Ok(format!("fails; listed witness among {} violations", all.len()))
}

fn construction_arithmetic() -> Outcome {
    let sizes = [4usize, 5, 10, 11, 17, 5, 2, 4, 18, 10, 5];
    let words = sizes
        .iter()
        .enumerate()
        .flat_map(|(a, &s)| {
            (0..s).map(move |k| Codeword::from(vec![a as Symbol, (k / 11) as Symbol, (k % 11) as Symbol]))
        })
        .collect();
    let code = Code::new(twolevel_core::Alphabet::new(11).unwrap(), 3, words).map_err(|e| e.to_string())?;
    let built = construct_two_level(&code, 9, &PickMode::Deterministic).map_err(|e| e.to_string())?;
    let r = &built.report;
    let got = (
        code.len(),
        r.group_size,
        r.v,
        r.q1_count,
        r.discarded_classes.len(),
        r.amalgamated
            .iter()
            .map(|a| a.size_before_truncation)
            .collect::<Vec<_>>(),
        built.code.group_count(),
        built.code.group_size(),
        r.eliminated_count,
    );
    ensure(got == (91, 6, 8, 5, 3, vec![10], 9, 6, 37), || format!("got {got:?}"))?;
    ensure(r.eliminated_count <= code.len().div_ceil(2), || {
        "too many eliminated".into()
    })?;
    Ok("p=6 v=8 q1=5, 3 discarded, merge of 10, 9x6, 37 eliminated".into())
}

/// Seeded random code with q ≤ 8, ℓ ≤ 5, |C| ≤ 60, plus a g in [2, q].
fn random_instance(rng: &mut ChaCha8Rng) -> (Code, usize) {
    let q = rng.gen_range(2..=8u32);
    let len = rng.gen_range(1..=5usize);
    let n = rng.gen_range(1..=60usize).min((q as usize).pow(len as u32));
    let code = gen_random_code(q, len, n, rng.gen()).unwrap();
    (code, rng.gen_range(2..=q as usize))
}

fn random_mode(rng: &mut ChaCha8Rng) -> PickMode {
    if rng.gen_bool(0.5) {
        PickMode::Deterministic
    } else {
        PickMode::Seeded(rng.gen())
    }
}

fn size_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let (mut checked, mut infeasible) = (0, 0);
    while checked < 250 {
        let (code, g) = random_instance(&mut rng);
        let mode = random_mode(&mut rng);
        let built = match construct_two_level(&code, g, &mode) {
            Ok(b) => b,
            Err(twolevel_core::Error::Infeasible { .. }) => {
                infeasible += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let n = code.len();
        let size = built.code.base().len();
        ensure(size == g * n.div_ceil(2 * g) && 2 * size >= n, || {
            format!("|C'|={size} for n={n}, g={g}")
        })?;
        let firsts: Vec<BTreeSet<Symbol>> = (1..=g)
            .map(|i| built.code.group(i).map(|w| w.get(0)).collect())
            .collect();
        for i in 0..g {
            for j in i + 1..g {
                ensure(firsts[i].is_disjoint(&firsts[j]), || {
                    format!("groups {i},{j} overlap for {code:?}")
                })?;
            }
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} constructions, {infeasible} infeasible instances skipped"
    ))
}

fn lemma_containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut draws = 0;
    while draws < 600 {
        let (code, g) = random_instance(&mut rng);
        let mode = random_mode(&mut rng);
        let Ok(built) = construct_two_level(&code, g, &mode) else {
            continue;
        };
        let words = built.code.base().words();
        for _ in 0..4 {
            let k = rng.gen_range(1..=words.len().min(4));
            let xs: Vec<Codeword> = words.choose_multiple(&mut rng, k).cloned().collect();
            let ok = check_lemma_containment(&built.remap, &xs, 1 << 16).map_err(|e| e.to_string())?;
            ensure(ok, || format!("containment fails for {xs:?}"))?;
            draws += 1;
        }
    }
    Ok(format!("{draws} draws"))
}

fn preservation() -> Outcome {
    let verifier = Verifier::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut summary = Vec::new();
    for prop in [Property::Fp, Property::Sfp, Property::Ipp] {
        for randomized in [false, true] {
            let mut bases = 0;
            let mut tries = 0;
            while bases < 60 {
                tries += 1;
                if tries > 200_000 {
                    return Err(format!("only {bases} usable {prop} bases found"));
                }
                let q = rng.gen_range(3..=6u32);
                let len = rng.gen_range(3..=4usize);
                let n = rng.gen_range(4..=24usize);
                let code = gen_random_code(q, len, n, rng.gen()).unwrap();
                if !verifier.check(&code, prop, 2).map_err(|e| e.to_string())?.is_holds() {
                    continue;
                }
                let g = rng.gen_range(2..=q as usize);
                let mode = if randomized {
                    PickMode::Seeded(rng.gen())
                } else {
                    PickMode::Deterministic
                };
                let Ok(built) = construct_two_level(&code, g, &mode) else {
                    continue;
                };
                let v = verifier
                    .check_two_level(&built.code, prop, 3, 2)
                    .map_err(|e| e.to_string())?;
                ensure(v.is_holds(), || {
                    format!("{prop} lost on {code:?} with g={g}, {mode}: {v}")
                })?;
                bases += 1;
            }
            summary.push(format!("{prop}/{}={bases}", if randomized { "seeded" } else { "det" }));
        }
    }
    Ok(summary.join(" "))
}

fn polynomial_code_and_grouping() -> Outcome {
    let code = gen_polynomial_fp_code(PrimeField::new(5).unwrap(), 4, 2, None).map_err(|e| e.to_string())?;
    ensure(code.len() == 25, || format!("{} codewords", code.len()))?;
    ensure(is_t_fp(&code, 2).map_err(|e| e.to_string())?.is_holds(), || {
        "not 2-FP".into()
    })?;
    let grouped = partition_by_first_coordinate(&code).map_err(|e| e.to_string())?;
    ensure((grouped.group_count(), grouped.group_size()) == (5, 5), || {
        "grouping is not 5x5".into()
    })?;
    let v = is_two_level_fp(&grouped, 3, 2).map_err(|e| e.to_string())?;
    ensure(v.is_holds(), || format!("two-level FP: {v}"))?;
    Ok("25 words, 2-FP, 5x5 grouping is (3,2)-FP".into())
}

fn random_grouping(code: &Code, g: usize, rng: &mut ChaCha8Rng) -> TwoLevelCode {
    let p = code.len() / g;
    let mut labels: Vec<usize> = (1..=g).flat_map(|i| std::iter::repeat_n(i, p)).collect();
    labels.shuffle(rng);
    TwoLevelCode::new(code.clone(), &labels).unwrap()
}

fn implication_lattices() -> Outcome {
    let verifier = Verifier::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let chain = [Property::Ta, Property::Ipp, Property::Sfp, Property::Fp];
    let check_chain = |holds: &[bool], what: &str| {
        // holds is ordered TA, IPP, SFP, FP
        ensure(holds.windows(2).all(|w| !w[0] || w[1]), || format!("{what}: {holds:?}"))
    };
    let mut codes = 0;
    let mut groupings = 0;
    while codes < 220 {
        let q = rng.gen_range(2..=4u32);
        let len = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=16usize).min((q as usize).pow(len as u32));
        let code = gen_random_code(q, len, n, rng.gen()).unwrap();
        let one: Vec<bool> = chain
            .iter()
            .map(|&p| verifier.check(&code, p, 2).map(|v| v.is_holds()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        check_chain(&one, &format!("one-level {code:?}"))?;
        codes += 1;

        let divisors: Vec<usize> = (2..=n).filter(|g| n % g == 0).collect();
        if divisors.is_empty() || groupings >= 150 {
            continue;
        }
        let g = *divisors.choose(&mut rng).unwrap();
        let two = random_grouping(&code, g, &mut rng);
        let both: Vec<bool> = chain
            .iter()
            .map(|&p| verifier.check_two_level(&two, p, 3, 2).map(|v| v.is_holds()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        check_chain(&both, &format!("two-level {:?}", two.groups()))?;
        for (b, o) in both.iter().zip(&one) {
            ensure(!b || *o, || {
                format!("two-level holds without one-level on {:?}", two.groups())
            })?;
        }
        groupings += 1;
    }
    ensure(groupings >= 100, || format!("only {groupings} groupings"))?;
    Ok(format!("{codes} codes, {groupings} groupings"))
}

/// Brute-force descendant sets as explicit word sets.
fn brute_desc(xs: &[Codeword]) -> BTreeSet<Codeword> {
    let len = xs[0].len();
    let mut out: BTreeSet<Vec<Symbol>> = [Vec::new()].into();
    for i in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                xs.iter().map(move |x| {
                    let mut w = prefix.clone();
                    w.push(x.get(i));
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Codeword::from).collect()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let (mut pairs, mut meeting) = (0, 0);
    while pairs < 1200 {
        let q = rng.gen_range(2..=5u16);
        let len = rng.gen_range(1..=5usize);
        let draw = |rng: &mut ChaCha8Rng| -> Vec<Codeword> {
            let k = rng.gen_range(1..=3);
            (0..k)
                .map(|_| Codeword::from((0..len).map(|_| rng.gen_range(0..q)).collect::<Vec<_>>()))
                .collect()
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let fast = profiles_intersect(&a, &b).map_err(|e| e.to_string())?;
        let slow = !brute_desc(&a).is_disjoint(&brute_desc(&b));
        ensure(fast == slow, || format!("{a:?} vs {b:?}: fast {fast}, brute {slow}"))?;
        meeting += slow as usize;
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, {meeting} intersecting"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "descendant set reproduction",
            desc_reproduction,
            Duration::from_millis(1),
        ),
        (
            "traceable code holds 2-TA",
            traceable_code_holds,
            Duration::from_secs(1),
        ),
        (
            "grouped code fails (3,2)-TA with listed witness",
            grouping_fails_with_listed_witness,
            Duration::from_secs(1),
        ),
        (
            "construction arithmetic on 91-word code",
            construction_arithmetic,
            Duration::from_secs(1),
        ),
        (
            "construction size bound and disjoint groups",
            size_bound,
            Duration::from_secs(30),
        ),
        (
            "relabelled descendants map into originals",
            lemma_containment,
            Duration::from_secs(60),
        ),
        (
            "FP/SFP/IPP preserved by construction",
            preservation,
            Duration::from_secs(600),
        ),
        (
            "polynomial FP code and its first-symbol grouping",
            polynomial_code_and_grouping,
            Duration::from_secs(30),
        ),
        (
            "implication chains at both levels",
            implication_lattices,
            Duration::from_secs(600),
        ),
        (
            "profile intersection matches brute force",
            oracle_equivalence,
            Duration::from_secs(30),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {elapsed:?}, budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} criterion {:>2}: {name} [{elapsed:.2?}] {detail}", i + 1);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
