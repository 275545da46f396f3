//! Positive disjunctive logic programs, their reduction to typicality
//! knowledge bases, and a brute-force minimal-model oracle.

use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::minimal::{entails, Answer, EntailOptions, ReasonError};
use crate::model::{Axiom, Concept, KnowledgeBase, Mode, Query};

pub const DEFAULT_CAP: usize = 12;
const INDIVIDUAL: &str = "a";
const UNIVERSAL: &str = "U";

#[derive(Debug, Error)]
pub enum PdlpError {
    #[error("clause {clause} has no positive literal")]
    InvalidPdlp { clause: usize },
    #[error("{vars} variables exceed the brute-force cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Reason(#[from] ReasonError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pdlp {
    pub vars: Vec<String>,
    pub clauses: Vec<Vec<Literal>>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Pdlp {
    pub fn new(vars: Vec<String>, clauses: Vec<Vec<Literal>>) -> Result<Pdlp, PdlpError> {
        if let Some(j) = clauses.iter().position(|c| !c.iter().any(|l| l.positive)) {
            return Err(PdlpError::InvalidPdlp { clause: j + 1 });
        }
        Ok(Pdlp { vars, clauses })
    }

    /// One clause per line, literals separated by whitespace, `-` marks
    /// negation and `#` starts a comment. Variables are declared by use.
    pub fn parse(text: &str) -> Result<Pdlp, PdlpError> {
        let mut vars: Vec<String> = vec![];
        let mut clauses = vec![];
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            let mut clause = vec![];
            for tok in line.split_whitespace() {
                let (positive, name) = match tok.strip_prefix('-') {
                    Some(rest) => (false, rest),
                    None => (true, tok),
                };
                if !valid_ident(name) {
                    return Err(PdlpError::Parse {
                        line: i + 1,
                        message: format!("`{tok}` is not a literal"),
                    });
                }
                let var = match vars.iter().position(|v| v == name) {
                    Some(v) => v,
                    None => {
                        vars.push(name.to_string());
                        vars.len() - 1
                    }
                };
                clause.push(Literal { var, positive });
            }
            if !clause.is_empty() {
                clauses.push(clause);
            }
        }
        Pdlp::new(vars, clauses)
    }

    pub fn literal(&self, text: &str) -> Result<Literal, PdlpError> {
        let (positive, name) = match text.trim().strip_prefix('-') {
            Some(rest) => (false, rest),
            None => (true, text.trim()),
        };
        let var = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PdlpError::UnknownVariable(name.to_string()))?;
        Ok(Literal { var, positive })
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        (0..self.vars.len()).flat_map(|var| [true, false].map(|positive| Literal { var, positive }))
    }

    pub fn show_literal(&self, l: Literal) -> String {
        format!("{}{}", if l.positive { "" } else { "-" }, self.vars[l.var])
    }

    fn satisfied_by(&self, model: u32) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| (model >> l.var & 1 == 1) == l.positive))
    }

    /// The subset-minimal models, as bitmasks over the variables.
    pub fn minimal_models(&self, cap: usize) -> Result<Vec<u32>, PdlpError> {
        let n = self.vars.len();
        if n > cap || n > 31 {
            return Err(PdlpError::CapExceeded { vars: n, cap });
        }
        let models: Vec<u32> = (0..1u32 << n).filter(|&m| self.satisfied_by(m)).collect();
        Ok(models
            .iter()
            .copied()
            .filter(|&m| !models.iter().any(|&o| o != m && o & m == o))
            .collect())
    }
}

impl fmt::Display for Pdlp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            let lits: Vec<String> = c.iter().map(|&l| self.show_literal(l)).collect();
            writeln!(f, "{}", lits.join(" "))?;
        }
        Ok(())
    }
}

/// Whether every subset-minimal model satisfies `lit`.
pub fn min_entails_bruteforce(p: &Pdlp, lit: Literal, cap: usize) -> Result<bool, PdlpError> {
    Ok(p.minimal_models(cap)?
        .iter()
        .all(|m| (m >> lit.var & 1 == 1) == lit.positive))
}

/// The knowledge base of a program, with the query for each literal.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub kb: KnowledgeBase,
    vars: Vec<String>,
}

fn p_name(v: &str) -> String {
    format!("P_{v}")
}

fn n_name(v: &str) -> String {
    format!("N_{v}")
}

impl Reduction {
    /// `T(P_h)(a)` for `p_h`, `N_h(a)` for `-p_h`, where `N_h` names
    /// `Ex U.(T(Top) & P_h)`.
    pub fn query(&self, lit: Literal) -> Query {
        let v = &self.vars[lit.var];
        if lit.positive {
            Query::typ(INDIVIDUAL, &p_name(v))
        } else {
            Query::inst(INDIVIDUAL, &n_name(v))
        }
    }
}

pub fn reduce(p: &Pdlp) -> Reduction {
    let mut kb = KnowledgeBase::new();
    let a = || Concept::nominal(INDIVIDUAL);
    let pos = |v: &str| Concept::typ(Concept::atom(&p_name(v)));
    let neg = |v: &str| {
        Concept::exists(
            UNIVERSAL,
            Concept::conj(Concept::typ(Concept::Top), Concept::atom(&p_name(v))),
        )
    };
    kb.signature.declare_individual(INDIVIDUAL);
    kb.signature.declare_role(UNIVERSAL);
    for v in &p.vars {
        kb.signature.declare_concept(p_name(v).as_str());
    }
    for c in ["H", "D_S"] {
        kb.signature.declare_concept(c);
    }
    let d = |j: usize| Concept::atom(&format!("D_{}", j + 1));
    for j in 0..p.clauses.len() {
        kb.signature.declare_concept(format!("D_{}", j + 1).as_str());
    }
    for v in &p.vars {
        kb.signature.declare_concept(n_name(v).as_str());
    }
    kb.push(Axiom::ConceptProductLhs(Concept::Top, Concept::Top, UNIVERSAL.into()));
    kb.push(Axiom::gci(
        Concept::conj(Concept::typ(Concept::Top), Concept::atom("H")),
        Concept::Bot,
    ));
    for (j, clause) in p.clauses.iter().enumerate() {
        let c = |l: &Literal| {
            let v = &p.vars[l.var];
            if l.positive {
                pos(v)
            } else {
                neg(v)
            }
        };
        let c_bar = |l: &Literal| {
            let v = &p.vars[l.var];
            if l.positive {
                neg(v)
            } else {
                pos(v)
            }
        };
        for l in clause {
            kb.push(Axiom::gci(Concept::conj(a(), c(l)), d(j)));
        }
        let lhs = Concept::conj_all(std::iter::once(a()).chain([d(j)]).chain(clause.iter().map(c_bar)));
        kb.push(Axiom::gci(lhs, Concept::Bot));
    }
    let all_d = Concept::conj_all((0..p.clauses.len()).map(d));
    kb.push(Axiom::gci(
        Concept::conj_all(std::iter::once(a()).chain((0..p.clauses.len()).map(d))),
        Concept::atom("D_S"),
    ));
    if !p.clauses.is_empty() {
        kb.push(Axiom::gci(Concept::conj(a(), Concept::atom("D_S")), all_d));
    }
    for v in &p.vars {
        kb.push(Axiom::gci(neg(v), Concept::atom(&n_name(v))));
    }
    for v in &p.vars {
        kb.push(Axiom::ConceptAssertion(Concept::atom(&p_name(v)), INDIVIDUAL.into()));
    }
    kb.push(Axiom::ConceptAssertion(
        Concept::typ(Concept::atom("H")),
        INDIVIDUAL.into(),
    ));
    kb.push(Axiom::ConceptAssertion(Concept::atom("D_S"), INDIVIDUAL.into()));
    Reduction {
        kb,
        vars: p.vars.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub literal: String,
    pub bruteforce: bool,
    pub reasoner: Answer,
    pub agree: bool,
    /// Minimal models by variable names, reported on disagreement.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub minimal_models: Vec<Vec<String>>,
}

/// Runs both sides of the reduction on one literal.
pub fn cross_check(p: &Pdlp, lit: Literal, mode: Mode, opts: EntailOptions) -> Result<CrossCheck, PdlpError> {
    let expected = min_entails_bruteforce(p, lit, DEFAULT_CAP)?;
    let red = reduce(p);
    let verdict = entails(&red.kb, &red.query(lit), mode, opts)?;
    let agree = (verdict.answer == Answer::Entailed) == expected;
    let minimal_models = if agree {
        vec![]
    } else {
        p.minimal_models(DEFAULT_CAP)?
            .iter()
            .map(|m| {
                (0..p.vars.len())
                    .filter(|v| m >> v & 1 == 1)
                    .map(|v| p.vars[v].clone())
                    .collect()
            })
            .collect()
    };
    Ok(CrossCheck {
        literal: p.show_literal(lit),
        bruteforce: expected,
        reasoner: verdict.answer,
        agree,
        minimal_models,
    })
}

/// A random program with at most `max_vars` variables, all of which occur,
/// and `1..=max_clauses` clauses of one to three literals.
pub fn random_pdlp(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> Pdlp {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(1..=max_clauses);
    let vars: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let clauses = (0..m)
        .map(|_| {
            let len = rng.random_range(1..=3usize.min(n));
            let mut c: Vec<Literal> = (0..len)
                .map(|_| Literal {
                    var: rng.random_range(0..n),
                    positive: rng.random_bool(0.6),
                })
                .collect();
            if !c.iter().any(|l| l.positive) {
                let i = rng.random_range(0..c.len());
                c[i].positive = true;
            }
            c
        })
        .collect::<Vec<Vec<Literal>>>();
    compact(vars, clauses)
}

/// Drops variables that occur in no clause and renumbers the rest.
fn compact(vars: Vec<String>, mut clauses: Vec<Vec<Literal>>) -> Pdlp {
    let used: Vec<usize> = (0..vars.len())
        .filter(|&v| clauses.iter().flatten().any(|l| l.var == v))
        .collect();
    for l in clauses.iter_mut().flatten() {
        l.var = used.iter().position(|&u| u == l.var).expect("used");
    }
    Pdlp {
        vars: (1..=used.len()).map(|i| format!("p{i}")).collect(),
        clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn pdlp(text: &str) -> Pdlp {
        Pdlp::parse(text).unwrap()
    }

    #[test]
    fn parse_and_validate() {
        let p = pdlp("p q\n-p q # comment\n\n");
        assert_eq!(p.vars, vec!["p", "q"]);
        assert_eq!(p.clauses.len(), 2);
        assert_eq!(p.to_string(), "p q\n-p q\n");
        assert!(matches!(Pdlp::parse("-p"), Err(PdlpError::InvalidPdlp { clause: 1 })));
        assert!(matches!(Pdlp::parse("p 1x"), Err(PdlpError::Parse { line: 1, .. })));
    }

    #[test]
    fn bruteforce_examples() {
        let p = pdlp("p");
        assert!(min_entails_bruteforce(&p, p.literal("p").unwrap(), DEFAULT_CAP).unwrap());
        let p = pdlp("p q");
        assert!(!min_entails_bruteforce(&p, p.literal("p").unwrap(), DEFAULT_CAP).unwrap());
        assert!(!min_entails_bruteforce(&p, p.literal("-p").unwrap(), DEFAULT_CAP).unwrap());
        let p = pdlp("p q\n-p q");
        assert_eq!(p.minimal_models(DEFAULT_CAP).unwrap(), vec![0b10]);
        assert!(min_entails_bruteforce(&p, p.literal("q").unwrap(), DEFAULT_CAP).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let vars: Vec<String> = (0..13).map(|i| format!("v{i}")).collect();
        let p = pdlp(&vars.join(" "));
        assert!(matches!(
            p.minimal_models(DEFAULT_CAP),
            Err(PdlpError::CapExceeded { .. })
        ));
    }

    #[test]
    fn reduction_is_a_valid_kb() {
        let p = pdlp("p q\n-p q");
        let red = reduce(&p);
        crate::model::ensure_valid(&red.kb).unwrap();
        assert_eq!(red.query(p.literal("q").unwrap()).to_string(), "T(P_q)(a)");
        assert_eq!(red.query(p.literal("-p").unwrap()).to_string(), "N_p(a)");
    }

    #[test]
    fn small_programs_agree() {
        for text in ["p", "p q"] {
            let p = pdlp(text);
            for lit in p.literals().collect::<Vec<_>>() {
                for mode in [Mode::Tmin, Mode::TminAbox] {
                    let r = cross_check(&p, lit, mode, EntailOptions::default()).unwrap();
                    assert!(r.agree, "{text} / {}: {r:?}", r.literal);
                }
            }
        }
    }

    #[test]
    fn tmin_admits_an_undecided_variable() {
        // `a` at rank 2 with P_p at rank 1 makes p neither true nor false
        let p = pdlp("p q\n-p q");
        let lit = p.literal("-p").unwrap();
        let r = cross_check(&p, lit, Mode::Tmin, EntailOptions::default()).unwrap();
        assert!(r.bruteforce);
        assert_eq!(r.reasoner, Answer::NotEntailed);
        let r = cross_check(&p, lit, Mode::TminAbox, EntailOptions::default()).unwrap();
        assert!(r.agree);
    }

    #[test]
    fn random_programs_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_pdlp(&mut rng, 5, 6);
            assert!(Pdlp::new(p.vars.clone(), p.clauses.clone()).is_ok());
            assert!(p.vars.len() <= 5 && (1..=6).contains(&p.clauses.len()));
            for v in 0..p.vars.len() {
                assert!(p.clauses.iter().flatten().any(|l| l.var == v));
            }
        }
    }
}
