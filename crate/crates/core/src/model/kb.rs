use std::fmt;

use indexmap::IndexSet;
use serde::Serialize;

use super::concept::Concept;
use super::names::{ConceptName, IndividualName, RoleName};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    ConceptInclusion(Concept, Concept),
    RoleInclusion(RoleName, RoleName),
    /// `R o S [= T`
    RoleChain(RoleName, RoleName, RoleName),
    /// `R & S [= T`
    RoleConj(RoleName, RoleName, RoleName),
    /// `C x D [= R`
    ConceptProductLhs(Concept, Concept, RoleName),
    /// `R [= C x D`
    ConceptProductRhs(RoleName, Concept, Concept),
    ConceptAssertion(Concept, IndividualName),
    RoleAssertion(RoleName, IndividualName, IndividualName),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomKind {
    TBox,
    RBox,
    ABox,
}

impl Axiom {
    pub fn gci(lhs: Concept, rhs: Concept) -> Axiom {
        Axiom::ConceptInclusion(lhs, rhs)
    }

    pub fn kind(&self) -> AxiomKind {
        match self {
            Axiom::ConceptInclusion(..) => AxiomKind::TBox,
            Axiom::ConceptAssertion(..) | Axiom::RoleAssertion(..) => AxiomKind::ABox,
            _ => AxiomKind::RBox,
        }
    }

    /// The concepts occurring in the axiom, in textual order.
    pub fn concepts(&self) -> Vec<&Concept> {
        match self {
            Axiom::ConceptInclusion(l, r) => vec![l, r],
            Axiom::ConceptProductLhs(c, d, _) | Axiom::ConceptProductRhs(_, c, d) => vec![c, d],
            Axiom::ConceptAssertion(c, _) => vec![c],
            _ => vec![],
        }
    }

    pub fn roles(&self) -> Vec<&RoleName> {
        let mut roles = match self {
            Axiom::RoleInclusion(r, s) => vec![r, s],
            Axiom::RoleChain(r, s, t) | Axiom::RoleConj(r, s, t) => vec![r, s, t],
            Axiom::ConceptProductLhs(_, _, r) | Axiom::ConceptProductRhs(r, _, _) | Axiom::RoleAssertion(r, _, _) => {
                vec![r]
            }
            _ => vec![],
        };
        for c in self.concepts() {
            c.visit(&mut |n| {
                if let Concept::Exists(r, _) | Concept::SelfRestriction(r) = n {
                    roles.push(r);
                }
            });
        }
        roles
    }

    pub fn individuals(&self) -> Vec<&IndividualName> {
        let mut out = match self {
            Axiom::ConceptAssertion(_, a) => vec![a],
            Axiom::RoleAssertion(_, a, b) => vec![a, b],
            _ => vec![],
        };
        for c in self.concepts() {
            c.visit(&mut |n| {
                if let Concept::Nominal(a) = n {
                    out.push(a);
                }
            });
        }
        out
    }

    pub fn concept_names(&self) -> Vec<&ConceptName> {
        let mut out = vec![];
        for c in self.concepts() {
            c.visit(&mut |n| {
                if let Concept::Atom(a) = n {
                    out.push(a);
                }
            });
        }
        out
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::ConceptInclusion(l, r) => write!(f, "{l} [= {r}"),
            Axiom::RoleInclusion(r, s) => write!(f, "{r} [= {s}"),
            Axiom::RoleChain(r, s, t) => write!(f, "{r} o {s} [= {t}"),
            Axiom::RoleConj(r, s, t) => write!(f, "{r} & {s} [= {t}"),
            Axiom::ConceptProductLhs(c, d, r) => write!(f, "{c} x {d} [= {r}"),
            Axiom::ConceptProductRhs(r, c, d) => write!(f, "{r} [= {c} x {d}"),
            Axiom::ConceptAssertion(c, a) => write!(f, "{}({a})", c.display_unary()),
            Axiom::RoleAssertion(r, a, b) => write!(f, "{r}({a}, {b})"),
        }
    }
}

/// Declared names. ⊤ and ⊥ are implicit members and never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: IndexSet<ConceptName>,
    pub roles: IndexSet<RoleName>,
    pub individuals: IndexSet<IndividualName>,
}

impl Signature {
    pub fn contains_concept(&self, name: &ConceptName) -> bool {
        name.is_top() || name.is_bot() || self.concepts.contains(name)
    }

    pub fn contains_role(&self, name: &RoleName) -> bool {
        self.roles.contains(name)
    }

    pub fn contains_individual(&self, name: &IndividualName) -> bool {
        self.individuals.contains(name)
    }

    /// True if `symbol` is taken by a name of any kind.
    pub fn uses_symbol(&self, symbol: &str) -> bool {
        symbol == super::names::TOP_SYMBOL
            || symbol == super::names::BOT_SYMBOL
            || self.concepts.contains(&ConceptName::new(symbol))
            || self.roles.contains(&RoleName::new(symbol))
            || self.individuals.contains(&IndividualName::new(symbol))
    }

    pub fn declare_concept(&mut self, name: impl Into<ConceptName>) {
        let name = name.into();
        if !name.is_top() && !name.is_bot() {
            self.concepts.insert(name);
        }
    }

    pub fn declare_role(&mut self, name: impl Into<RoleName>) {
        self.roles.insert(name.into());
    }

    pub fn declare_individual(&mut self, name: impl Into<IndividualName>) {
        self.individuals.insert(name.into());
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub signature: Signature,
    pub tbox: Vec<Axiom>,
    pub rbox: Vec<Axiom>,
    pub abox: Vec<Axiom>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the axiom to the box matching its kind.
    pub fn push(&mut self, axiom: Axiom) {
        match axiom.kind() {
            AxiomKind::TBox => self.tbox.push(axiom),
            AxiomKind::RBox => self.rbox.push(axiom),
            AxiomKind::ABox => self.abox.push(axiom),
        }
    }

    /// Appends the axiom and declares every name it uses.
    pub fn push_declaring(&mut self, axiom: Axiom) {
        for n in axiom.concept_names() {
            self.signature.declare_concept(n.clone());
        }
        for r in axiom.roles() {
            self.signature.declare_role(r.clone());
        }
        for a in axiom.individuals() {
            self.signature.declare_individual(a.clone());
        }
        self.push(axiom);
    }

    /// TBox, then RBox, then ABox.
    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.iter().chain(&self.rbox).chain(&self.abox)
    }

    pub fn axiom_count(&self) -> usize {
        self.tbox.len() + self.rbox.len() + self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axiom_count() == 0
            && self.signature.concepts.is_empty()
            && self.signature.roles.is_empty()
            && self.signature.individuals.is_empty()
    }

    /// Total number of concept AST nodes over all axioms.
    pub fn concept_size(&self) -> usize {
        self.axioms().flat_map(|a| a.concepts()).map(Concept::size).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Query {
    Inst {
        individual: IndividualName,
        concept: ConceptName,
    },
    Typ {
        individual: IndividualName,
        concept: ConceptName,
    },
}

impl Query {
    pub fn inst(individual: &str, concept: &str) -> Query {
        Query::Inst {
            individual: individual.into(),
            concept: concept.into(),
        }
    }

    pub fn typ(individual: &str, concept: &str) -> Query {
        Query::Typ {
            individual: individual.into(),
            concept: concept.into(),
        }
    }

    pub fn individual(&self) -> &IndividualName {
        match self {
            Query::Inst { individual, .. } | Query::Typ { individual, .. } => individual,
        }
    }

    pub fn concept(&self) -> &ConceptName {
        match self {
            Query::Inst { concept, .. } | Query::Typ { concept, .. } => concept,
        }
    }

    /// The typicality argument introduced by the query, if any.
    pub fn typ_concept(&self) -> Option<Concept> {
        match self {
            Query::Typ { concept, .. } => Some(Concept::name(concept.clone())),
            Query::Inst { .. } => None,
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Inst { individual, concept } => write!(f, "{concept}({individual})"),
            Query::Typ { individual, concept } => write!(f, "T({concept})({individual})"),
        }
    }
}
