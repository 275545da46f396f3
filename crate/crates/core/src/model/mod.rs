//! Concepts, axioms, knowledge bases and queries.

mod concept;
mod kb;
mod names;

pub use concept::Concept;
pub use kb::{Axiom, AxiomKind, KnowledgeBase, Query, Signature};
pub use names::{ConceptName, IndividualName, RoleName, BOT_SYMBOL, TOP_SYMBOL};

use indexmap::IndexSet;
use thiserror::Error;

/// Which models a query is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// All answer sets.
    Rational,
    /// The T-minimal answer sets.
    Tmin,
    /// The T-minimal answer sets that are also minimal on individual ranks.
    TminAbox,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Tmin => "tmin",
            Mode::TminAbox => "tmin_abox",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameKind {
    Concept,
    Role,
    Individual,
}

impl std::fmt::Display for NameKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NameKind::Concept => "concept",
            NameKind::Role => "role",
            NameKind::Individual => "individual",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("nested typicality in `{axiom}`")]
    NestedTypicality { axiom: String },
    #[error("typicality inside a concept product in `{axiom}`")]
    ExtendedConceptInProduct { axiom: String },
    #[error("undeclared {kind} `{name}` in `{axiom}`")]
    UnknownName {
        kind: NameKind,
        name: String,
        axiom: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn has_nested_typ(c: &Concept) -> bool {
    let mut nested = false;
    c.visit(&mut |n| {
        if let Concept::Typ(arg) = n {
            nested |= arg.contains_typ();
        }
    });
    nested
}

pub fn validate(kb: &KnowledgeBase) -> ValidationReport {
    let mut violations = vec![];
    for axiom in kb.axioms() {
        let text = || axiom.to_string();
        if axiom.concepts().into_iter().any(has_nested_typ) {
            violations.push(Violation::NestedTypicality { axiom: text() });
        }
        if let Axiom::ConceptProductLhs(c, d, _) | Axiom::ConceptProductRhs(_, c, d) = axiom {
            if c.contains_typ() || d.contains_typ() {
                violations.push(Violation::ExtendedConceptInProduct { axiom: text() });
            }
        }
        let sig = &kb.signature;
        let mut unknown = |kind, name: &dyn std::fmt::Display| {
            violations.push(Violation::UnknownName {
                kind,
                name: name.to_string(),
                axiom: text(),
            })
        };
        for n in axiom.concept_names() {
            if !sig.contains_concept(n) {
                unknown(NameKind::Concept, n);
            }
        }
        for r in axiom.roles() {
            if !sig.contains_role(r) {
                unknown(NameKind::Role, r);
            }
        }
        for a in axiom.individuals() {
            if !sig.contains_individual(a) {
                unknown(NameKind::Individual, a);
            }
        }
    }
    ValidationReport { violations }
}

/// Typicality arguments of a KB, optionally extended with a query's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypicalitySignature {
    pub concepts_ck: IndexSet<Concept>,
    pub concepts_tkq: IndexSet<Concept>,
    pub max_k: usize,
}

impl TypicalitySignature {
    /// The rank bound `n`.
    pub fn upper_bound(&self) -> usize {
        self.concepts_tkq.len()
    }
}

/// Collects the arguments of all `T(..)` occurrences in axiom order
/// (TBox, RBox, ABox), pre-order within each concept.
pub fn typicality_signature(kb: &KnowledgeBase, query: Option<&Query>) -> TypicalitySignature {
    let mut ck = IndexSet::new();
    for axiom in kb.axioms() {
        for c in axiom.concepts() {
            c.visit(&mut |n| {
                if let Concept::Typ(arg) = n {
                    ck.insert((**arg).clone());
                }
            });
        }
    }
    let mut tkq = ck.clone();
    if let Some(c) = query.and_then(Query::typ_concept) {
        tkq.insert(c);
    }
    TypicalitySignature {
        max_k: ck.len(),
        concepts_ck: ck,
        concepts_tkq: tkq,
    }
}

#[derive(Debug, Error)]
#[error("invalid knowledge base: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidKb(pub ValidationReport);

/// Validates and returns the violations as an error.
pub fn ensure_valid(kb: &KnowledgeBase) -> Result<(), InvalidKb> {
    let report = validate(kb);
    if report.is_ok() {
        Ok(())
    } else {
        Err(InvalidKb(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Concept {
        Concept::atom(n)
    }

    fn kb_with(axioms: Vec<Axiom>) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for ax in axioms {
            kb.push_declaring(ax);
        }
        kb
    }

    #[test]
    fn nested_typicality_is_reported() {
        let kb = kb_with(vec![Axiom::gci(Concept::typ(Concept::typ(a("Student"))), a("A"))]);
        let report = validate(&kb);
        assert!(matches!(
            report.violations.as_slice(),
            [Violation::NestedTypicality { .. }]
        ));
    }

    #[test]
    fn typicality_in_product_is_reported() {
        let kb = kb_with(vec![Axiom::ConceptProductLhs(Concept::typ(a("A")), a("D"), "R".into())]);
        let report = validate(&kb);
        assert!(matches!(
            report.violations.as_slice(),
            [Violation::ExtendedConceptInProduct { .. }]
        ));
    }

    #[test]
    fn undeclared_names_are_reported() {
        let mut kb = KnowledgeBase::new();
        kb.push(Axiom::ConceptAssertion(a("A"), "x".into()));
        let report = validate(&kb);
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn signature_counts_distinct_arguments() {
        let kb = kb_with(vec![
            Axiom::gci(Concept::typ(Concept::Top), a("A")),
            Axiom::gci(Concept::typ(a("C")), a("E")),
            Axiom::gci(Concept::typ(a("D")), a("E")),
            Axiom::gci(a("B"), Concept::typ(a("C"))),
        ]);
        let sig = typicality_signature(&kb, Some(&Query::typ("x", "C")));
        assert_eq!(sig.max_k, 3);
        assert_eq!(sig.upper_bound(), 3);
        assert_eq!(
            sig.concepts_ck.iter().cloned().collect::<Vec<_>>(),
            vec![Concept::Top, a("C"), a("D")]
        );
        let sig = typicality_signature(&kb, Some(&Query::typ("x", "Z")));
        assert_eq!(sig.upper_bound(), 4);
    }

    #[test]
    fn ordered_conjunctions_are_distinct_arguments() {
        let kb = kb_with(vec![
            Axiom::gci(Concept::typ(Concept::conj(a("A"), a("B"))), a("C")),
            Axiom::gci(Concept::typ(Concept::conj(a("B"), a("A"))), a("C")),
        ]);
        assert_eq!(typicality_signature(&kb, None).max_k, 2);
    }

    #[test]
    fn empty_kb_has_no_typicality() {
        let sig = typicality_signature(&KnowledgeBase::new(), None);
        assert_eq!(sig.upper_bound(), 0);
    }
}
