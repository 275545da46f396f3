//! Replicated copies of a knowledge base and the scaling table built on them.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::engine::{Budget, EngineError};
use crate::minimal::{entails, EntailOptions, ReasonError};
use crate::model::{Axiom, Concept, ConceptName, IndividualName, KnowledgeBase, Mode, Query, RoleName};

/// What gets copied in each replica.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    /// The assertions, over primed individuals.
    Abox,
    /// Every axiom, over primed names of all kinds.
    Kb,
}

impl Dimension {
    pub fn label(self) -> &'static str {
        match self {
            Dimension::Abox => "Replication of ABox",
            Dimension::Kb => "Replication of KB",
        }
    }
}

pub const MULTIPLIERS: [usize; 5] = [1, 2, 4, 6, 8];

fn prime(name: &str, i: usize) -> String {
    format!("{name}{}", "'".repeat(i))
}

struct Renamer {
    copy: usize,
    all_names: bool,
}

impl Renamer {
    fn ind(&self, a: &IndividualName) -> IndividualName {
        prime(a.as_str(), self.copy).into()
    }

    fn role(&self, r: &RoleName) -> RoleName {
        if self.all_names {
            prime(r.as_str(), self.copy).into()
        } else {
            r.clone()
        }
    }

    fn class(&self, c: &ConceptName) -> ConceptName {
        if self.all_names && !c.is_top() && !c.is_bot() {
            prime(c.as_str(), self.copy).into()
        } else {
            c.clone()
        }
    }

    fn concept(&self, c: &Concept) -> Concept {
        match c {
            Concept::Top | Concept::Bot => c.clone(),
            Concept::Atom(a) => Concept::Atom(self.class(a)),
            Concept::Nominal(a) => Concept::Nominal(self.ind(a)),
            Concept::Conj(l, r) => Concept::Conj(Box::new(self.concept(l)), Box::new(self.concept(r))),
            Concept::Exists(r, f) => Concept::Exists(self.role(r), Box::new(self.concept(f))),
            Concept::SelfRestriction(r) => Concept::SelfRestriction(self.role(r)),
            Concept::Typ(a) => Concept::Typ(Box::new(self.concept(a))),
        }
    }

    fn axiom(&self, ax: &Axiom) -> Axiom {
        match ax {
            Axiom::ConceptInclusion(c, d) => Axiom::ConceptInclusion(self.concept(c), self.concept(d)),
            Axiom::RoleInclusion(r, s) => Axiom::RoleInclusion(self.role(r), self.role(s)),
            Axiom::RoleChain(r, s, t) => Axiom::RoleChain(self.role(r), self.role(s), self.role(t)),
            Axiom::RoleConj(r, s, t) => Axiom::RoleConj(self.role(r), self.role(s), self.role(t)),
            Axiom::ConceptProductLhs(c, d, r) => {
                Axiom::ConceptProductLhs(self.concept(c), self.concept(d), self.role(r))
            }
            Axiom::ConceptProductRhs(r, c, d) => {
                Axiom::ConceptProductRhs(self.role(r), self.concept(c), self.concept(d))
            }
            Axiom::ConceptAssertion(c, a) => Axiom::ConceptAssertion(self.concept(c), self.ind(a)),
            Axiom::RoleAssertion(r, a, b) => Axiom::RoleAssertion(self.role(r), self.ind(a), self.ind(b)),
        }
    }
}

/// `kb` with `k - 1` extra copies; copy `i` primes names `i` times.
///
/// Nominals inside TBox axioms are primed only when the whole KB is copied.
pub fn replicate(kb: &KnowledgeBase, dim: Dimension, k: usize) -> KnowledgeBase {
    let mut out = kb.clone();
    for copy in 1..k {
        let r = Renamer {
            copy,
            all_names: dim == Dimension::Kb,
        };
        let copied: Vec<&Axiom> = match dim {
            Dimension::Abox => kb.abox.iter().collect(),
            Dimension::Kb => kb.axioms().collect(),
        };
        for ax in copied {
            out.push_declaring(r.axiom(ax));
        }
        if dim == Dimension::Kb {
            for c in &kb.signature.concepts {
                out.signature.declare_concept(r.class(c));
            }
            for role in &kb.signature.roles {
                out.signature.declare_role(r.role(role));
            }
        }
        for a in &kb.signature.individuals {
            out.signature.declare_individual(r.ind(a));
        }
    }
    out
}

/// One timing: `None` when the budget ran out.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub multiplier: usize,
    pub seconds: Option<f64>,
    pub answer: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchTable {
    pub query: String,
    pub multipliers: Vec<usize>,
    pub rows: Vec<Row>,
}

/// Times one `tmin_abox` check of `query` on the replicated KB.
/// `split` is passed on to [`EntailOptions`].
pub fn time_cell(
    kb: &KnowledgeBase,
    query: &Query,
    dim: Dimension,
    k: usize,
    budget: Duration,
    split: bool,
) -> Result<Cell, ReasonError> {
    let big = replicate(kb, dim, k);
    let start = Instant::now();
    let opts = EntailOptions {
        budget: Budget {
            max_nodes: None,
            deadline: Some(start + budget),
        },
        split,
        ..EntailOptions::default()
    };
    match entails(&big, query, Mode::TminAbox, opts) {
        Ok(v) => Ok(Cell {
            multiplier: k,
            seconds: Some(start.elapsed().as_secs_f64()),
            answer: Some(v.answer.to_string()),
        }),
        Err(ReasonError::Engine(EngineError::BudgetExceeded { .. })) => Ok(Cell {
            multiplier: k,
            seconds: None,
            answer: None,
        }),
        Err(e) => Err(e),
    }
}

/// The two-row scaling table. Once a cell of a row exceeds the budget the
/// larger multipliers of that row are marked without being run.
pub fn bench_table(
    kb: &KnowledgeBase,
    query: &Query,
    dims: &[Dimension],
    multipliers: &[usize],
    budget: Duration,
    split: bool,
) -> Result<BenchTable, ReasonError> {
    let mut rows = vec![];
    for &dim in dims {
        let mut cells = vec![];
        let mut exhausted = false;
        for &k in multipliers {
            let cell = if exhausted {
                Cell {
                    multiplier: k,
                    seconds: None,
                    answer: None,
                }
            } else {
                time_cell(kb, query, dim, k, budget, split)?
            };
            exhausted |= cell.seconds.is_none();
            cells.push(cell);
        }
        rows.push(Row {
            label: dim.label().to_string(),
            cells,
        });
    }
    Ok(BenchTable {
        query: query.to_string(),
        multipliers: multipliers.to_vec(),
        rows,
    })
}

impl fmt::Display for BenchTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = 20;
        write!(f, "{:<width$}", "")?;
        for k in &self.multipliers {
            write!(f, " {:>10}", format!("{k}x"))?;
        }
        writeln!(f)?;
        for row in &self.rows {
            write!(f, "{:<width$}", row.label)?;
            for c in &row.cells {
                match c.seconds {
                    Some(s) => write!(f, " {s:>10.3}")?,
                    None => write!(f, " {:>10}", "budget")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
