use std::fmt;

use serde::Serialize;

use crate::code::Codeword;

/// Which half of a two-level definition a witness breaks. One-level checks
/// only ever produce `Codeword` witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Codeword,
    Group,
}

/// A concrete counterexample. Group indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A coalition produces a codeword outside itself.
    Framed { coalition: Vec<Codeword>, framed: Codeword },
    /// Two disjoint coalitions share a descendant.
    SharedDescendant {
        left: Vec<Codeword>,
        right: Vec<Codeword>,
        shared: Codeword,
    },
    /// Parent sets of `descendant` with empty common intersection.
    NoCommonParent {
        descendant: Codeword,
        parent_sets: Vec<Vec<Codeword>>,
    },
    /// A nearest codeword to a descendant of the coalition lies outside it.
    Untraceable {
        coalition: Vec<Codeword>,
        descendant: Codeword,
        nearest: Codeword,
    },
    GroupFramed {
        coalition: Vec<Codeword>,
        coalition_groups: Vec<usize>,
        framed: Codeword,
        framed_group: usize,
    },
    GroupSharedDescendant {
        left: Vec<Codeword>,
        left_groups: Vec<usize>,
        right: Vec<Codeword>,
        right_groups: Vec<usize>,
        shared: Codeword,
    },
    NoCommonGroup {
        descendant: Codeword,
        parent_sets: Vec<Vec<Codeword>>,
        parent_groups: Vec<Vec<usize>>,
    },
    GroupUntraceable {
        coalition: Vec<Codeword>,
        coalition_groups: Vec<usize>,
        descendant: Codeword,
        nearest: Codeword,
        nearest_group: usize,
    },
}

impl Witness {
    pub fn clause(&self) -> Clause {
        match self {
            Witness::Framed { .. }
            | Witness::SharedDescendant { .. }
            | Witness::NoCommonParent { .. }
            | Witness::Untraceable { .. } => Clause::Codeword,
            _ => Clause::Group,
        }
    }
}

struct Set<'a>(&'a [Codeword]);

impl fmt::Display for Set<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

struct Groups<'a>(&'a [usize]);

impl fmt::Display for Groups<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Framed { coalition, framed } => {
                write!(f, "X={} frames z={framed}", Set(coalition))
            }
            Witness::SharedDescendant { left, right, shared } => write!(
                f,
                "disjoint X0={} and X1={} share descendant {shared}",
                Set(left),
                Set(right)
            ),
            Witness::NoCommonParent {
                descendant,
                parent_sets,
            } => {
                write!(f, "x={descendant} has parent sets")?;
                for p in parent_sets {
                    write!(f, " {}", Set(p))?;
                }
                f.write_str(" with empty intersection")
            }
            Witness::Untraceable {
                coalition,
                descendant,
                nearest,
            } => write!(f, "X={}, x={descendant}, nearest z={nearest} not in X", Set(coalition)),
            Witness::GroupFramed {
                coalition,
                coalition_groups,
                framed,
                framed_group,
            } => write!(
                f,
                "X={} (groups {}) frames z={framed} of group {framed_group}",
                Set(coalition),
                Groups(coalition_groups)
            ),
            Witness::GroupSharedDescendant {
                left,
                left_groups,
                right,
                right_groups,
                shared,
            } => write!(
                f,
                "X0={} (groups {}) and X1={} (groups {}) share descendant {shared}",
                Set(left),
                Groups(left_groups),
                Set(right),
                Groups(right_groups)
            ),
            Witness::NoCommonGroup {
                descendant,
                parent_sets,
                parent_groups,
            } => {
                write!(f, "x={descendant} has parent sets")?;
                for (p, g) in parent_sets.iter().zip(parent_groups) {
                    write!(f, " {} (groups {})", Set(p), Groups(g))?;
                }
                f.write_str(" with no common group")
            }
            Witness::GroupUntraceable {
                coalition,
                coalition_groups,
                descendant,
                nearest,
                nearest_group,
            } => write!(
                f,
                "U={}, x={descendant}, z={nearest}, G(z)={nearest_group} not in G(U)={}",
                Set(coalition),
                Groups(coalition_groups)
            ),
        }
    }
}

/// Outcome of a property check. A failing verdict always carries its
/// witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict { witness: None }
    }

    pub fn fails(witness: Witness) -> Self {
        Verdict { witness: Some(witness) }
    }

    pub fn from_witness(witness: Option<Witness>) -> Self {
        Verdict { witness }
    }

    pub fn is_holds(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn into_witness(self) -> Option<Witness> {
        self.witness
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            holds: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            clause: Option<Clause>,
            #[serde(skip_serializing_if = "Option::is_none")]
            witness: Option<&'a Witness>,
        }
        Repr {
            holds: self.is_holds(),
            clause: self.witness.as_ref().map(Witness::clause),
            witness: self.witness.as_ref(),
        }
        .serialize(serializer)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("holds"),
            Some(w) => {
                let clause = match w.clause() {
                    Clause::Codeword => "codeword level",
                    Clause::Group => "group level",
                };
                write!(f, "fails ({clause}): {w}")
            }
        }
    }
}
