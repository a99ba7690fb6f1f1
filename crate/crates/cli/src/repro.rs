//! Worked examples regenerated end to end and compared with embedded
//! expected outputs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};
use twolevel_core::{
    construct_two_level, enumerate_descendants, Alphabet, Code, Codeword, Construction, GuidedPicks, PickMode,
    Property, Symbol, Verifier, Witness,
};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// Descendant set of {1100, 2102, 1122}.
    #[value(name = "desc-example")]
    DescendantSet,
    /// Construction arithmetic on a 91-word code with g = 9.
    #[value(name = "example2")]
    ConstructionArithmetic,
    /// A 2-traceable code whose constructed grouping is not (3,2)-traceable.
    #[value(name = "example3")]
    GroupTracingFailure,
}

impl Example {
    fn expected(self) -> &'static str {
        match self {
            Example::DescendantSet => include_str!("../fixtures/repro/descendant_set.json"),
            Example::ConstructionArithmetic => include_str!("../fixtures/repro/construction_arithmetic.json"),
            Example::GroupTracingFailure => include_str!("../fixtures/repro/group_tracing_failure.json"),
        }
    }
}

/// One difference between expected and computed values, by JSON path.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Mismatch {
    pub path: String,
    pub expected: Value,
    pub computed: Value,
}

pub struct Outcome {
    pub computed: Value,
    pub mismatches: Vec<Mismatch>,
    /// Human-readable rendering of the run.
    pub text: String,
}

impl Outcome {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn run(example: Example) -> Result<Outcome, CliError> {
    let (computed, text) = match example {
        Example::DescendantSet => descendant_set()?,
        Example::ConstructionArithmetic => construction_arithmetic()?,
        Example::GroupTracingFailure => group_tracing_failure()?,
    };
    let expected: Value = serde_json::from_str(example.expected())?;
    let mut mismatches = Vec::new();
    diff("", &expected, &computed, &mut mismatches);
    Ok(Outcome {
        computed,
        mismatches,
        text,
    })
}

fn diff(path: &str, expected: &Value, computed: &Value, out: &mut Vec<Mismatch>) {
    match (expected, computed) {
        (Value::Object(e), Value::Object(c)) => {
            let keys: BTreeSet<&String> = e.keys().chain(c.keys()).collect();
            for k in keys {
                let sub = format!("{path}/{k}");
                match (e.get(k), c.get(k)) {
                    (Some(a), Some(b)) => diff(&sub, a, b, out),
                    (a, b) => out.push(Mismatch {
                        path: sub,
                        expected: a.cloned().unwrap_or(Value::Null),
                        computed: b.cloned().unwrap_or(Value::Null),
                    }),
                }
            }
        }
        (Value::Array(e), Value::Array(c)) if e.len() == c.len() => {
            for (i, (a, b)) in e.iter().zip(c).enumerate() {
                diff(&format!("{path}/{i}"), a, b, out);
            }
        }
        (a, b) if a != b => out.push(Mismatch {
            path: if path.is_empty() { "/".into() } else { path.into() },
            expected: a.clone(),
            computed: b.clone(),
        }),
        _ => {}
    }
}

fn words(ws: &[&str]) -> Vec<Codeword> {
    ws.iter()
        .map(|w| Codeword::from_digits(w).expect("fixture word"))
        .collect()
}

fn strings<'a>(ws: impl IntoIterator<Item = &'a Codeword>) -> Vec<String> {
    ws.into_iter().map(ToString::to_string).collect()
}

fn descendant_set() -> Result<(Value, String), CliError> {
    let parents = words(&["1100", "2102", "1122"]);
    let mut desc = enumerate_descendants(&parents, 1 << 10)?;
    desc.sort();
    let value = json!({
        "parents": strings(&parents),
        "descendants": strings(&desc),
    });
    let text = format!(
        "desc({{{}}}) =\n  {{{}}}\n",
        strings(&parents).join(", "),
        strings(&desc).join(", ")
    );
    Ok((value, text))
}

/// Class sizes of the 91-word example, for first symbols 0..=10.
pub const UNEVEN_CLASS_SIZES: [usize; 11] = [4, 5, 10, 11, 17, 5, 2, 4, 18, 10, 5];

/// Words `(a, k / 11, k % 11)` for `k` below the size of class `a`.
pub fn uneven_classes_code() -> Code {
    let words = UNEVEN_CLASS_SIZES
        .iter()
        .enumerate()
        .flat_map(|(a, &s)| {
            (0..s).map(move |k| Codeword::from(vec![a as Symbol, (k / 11) as Symbol, (k % 11) as Symbol]))
        })
        .collect();
    Code::new(Alphabet::new(11).expect("alphabet"), 3, words).expect("distinct words")
}

fn arithmetic(built: &Construction) -> Value {
    let r = &built.report;
    json!({
        "p": r.group_size,
        "v": r.v,
        "q1_count": r.q1_count,
        "discarded_count": r.discarded_classes.len(),
        "amalgamated_sizes": r.amalgamated.iter().map(|a| a.size_before_truncation).collect::<Vec<_>>(),
        "groups": built.code.group_count(),
        "group_size": built.code.group_size(),
        "eliminated": r.eliminated_count,
    })
}

fn construction_arithmetic() -> Result<(Value, String), CliError> {
    let code = uneven_classes_code();
    // hand picks: classes 1, 5, 10 reserved, {0, 6, 7} merged
    let picks = GuidedPicks {
        discard: vec![1, 5, 10],
        amalgamate: vec![vec![0, 6, 7]],
    };
    let by_hand = construct_two_level(&code, 9, &PickMode::Guided(picks))?;
    let det = construct_two_level(&code, 9, &PickMode::Deterministic)?;
    let r = &by_hand.report;
    let relabelled: Vec<[Symbol; 2]> = r
        .split_sets
        .iter()
        .filter_map(|s| {
            s.assigned_symbol
                .filter(|&a| a != s.source_symbol)
                .map(|a| [s.source_symbol, a])
        })
        .collect();
    let mut hand_value = arithmetic(&by_hand);
    let extra = json!({
        "q1": r.q1,
        "q2": r.q2,
        "discarded_classes": r.discarded_classes.iter().map(|d| d.symbol).collect::<Vec<_>>(),
        "amalgamated_classes": r.amalgamated.iter().map(|a| a.classes.clone()).collect::<Vec<_>>(),
        "relabelled_split_sets": relabelled,
    });
    hand_value
        .as_object_mut()
        .unwrap()
        .extend(extra.as_object().unwrap().clone());
    let value = json!({
        "code_size": code.len(),
        "class_sizes": UNEVEN_CLASS_SIZES,
        "hand_picks": hand_value,
        "deterministic": arithmetic(&det),
    });

    let mut text = String::new();
    let _ = writeln!(text, "{}", by_hand.report);
    let _ = writeln!(
        text,
        "group table ({} x {}):",
        by_hand.code.group_count(),
        by_hand.code.group_size()
    );
    for (i, g) in by_hand.code.groups().iter().enumerate() {
        let _ = writeln!(text, "  {:>2}: {}", i + 1, strings(g).join(" "));
    }
    let _ = writeln!(text, "\ndeterministic picks:\n{}", det.report);
    Ok((value, text))
}

fn group_tracing_failure() -> Result<(Value, String), CliError> {
    let code = Code::from_digit_words(
        9,
        &[
            "011", "022", "033", "044", "105", "206", "307", "408", "550", "660", "770", "880",
        ],
    )?;
    let picks = GuidedPicks {
        discard: vec![8],
        amalgamate: vec![vec![1, 5], vec![2, 6]],
    };
    let built = construct_two_level(&code, 4, &PickMode::Guided(picks))?;
    let verifier = Verifier::default();
    let base = verifier.check(&code, Property::Ta, 2)?;
    let two = verifier.check_two_level(&built.code, Property::Ta, 3, 2)?;
    let all = verifier.two_level_violations(&built.code, Property::Ta, 3, 2, usize::MAX)?;

    let listed: BTreeSet<Codeword> = words(&["011", "105", "550"]).into_iter().collect();
    let (z, x) = (Codeword::from_digits("206")?, Codeword::from_digits("000")?);
    let hit = all.iter().find(|w| {
        matches!(w, Witness::GroupUntraceable { coalition, descendant, nearest, .. }
            if coalition.iter().cloned().collect::<BTreeSet<_>>() == listed && descendant == &x && nearest == &z)
    });
    let witness = match hit {
        Some(Witness::GroupUntraceable {
            coalition,
            coalition_groups,
            descendant,
            nearest,
            nearest_group,
        }) => json!({
            "coalition": strings(coalition.iter().collect::<BTreeSet<_>>()),
            "coalition_groups": coalition_groups,
            "descendant": descendant.to_string(),
            "nearest": nearest.to_string(),
            "nearest_group": nearest_group,
        }),
        _ => Value::Null,
    };
    let value = json!({
        "code_size": code.len(),
        "code_is_2_ta": base.is_holds(),
        "p": built.report.group_size,
        "groups": built.code.groups().iter().map(strings).collect::<Vec<_>>(),
        "two_level_ta_3_2": two.is_holds(),
        "failing_clause": two.witness().map(|w| format!("{:?}", w.clause()).to_lowercase()),
        "group_clause_violations": all.len(),
        "listed_witness": witness,
    });

    let mut text = String::new();
    let _ = writeln!(text, "C (12 words, q = 9) is 2-TA: {}", base);
    let _ = writeln!(text, "grouped with p = {}:", built.report.group_size);
    for (i, g) in built.code.groups().iter().enumerate() {
        let _ = writeln!(text, "  group {}: {{{}}}", i + 1, strings(g).join(", "));
    }
    let _ = writeln!(text, "(3,2)-TA: {two}");
    let _ = writeln!(text, "{} violating (coalition, descendant, nearest) triples", all.len());
    if let Some(w) = hit {
        let _ = writeln!(text, "listed witness present: {w}");
    } else {
        let _ = writeln!(text, "listed witness absent");
    }
    Ok((value, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_matches_its_fixture() {
        for e in Example::value_variants() {
            let out = run(*e).unwrap();
            assert!(out.matches(), "{e:?}: {:?}", out.mismatches);
        }
    }

    #[test]
    fn diff_reports_paths() {
        let mut out = Vec::new();
        diff(
            "",
            &json!({"a": 1, "b": [1, 2], "c": {"d": true}}),
            &json!({"a": 1, "b": [1, 3], "c": {"d": false}, "e": 0}),
            &mut out,
        );
        let paths: Vec<&str> = out.iter().map(|m| m.path.as_str()).collect();
        assert_eq!(paths, vec!["/b/1", "/c/d", "/e"]);
        let mut top = Vec::new();
        diff("", &json!(1), &json!(2), &mut top);
        assert_eq!(top[0].path, "/");
    }

    #[test]
    fn uneven_classes_code_has_the_listed_class_sizes() {
        let code = uneven_classes_code();
        assert_eq!(code.len(), 91);
        for (a, &s) in UNEVEN_CLASS_SIZES.iter().enumerate() {
            assert_eq!(code.iter().filter(|w| w.get(0) as usize == a).count(), s);
        }
    }
}
