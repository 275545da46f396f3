//! Native answer-set computation for the typicality encoding.
//!
//! The facts of the program are compiled into rule indexes. An answer set
//! is fixed by its guess (ranks and auxiliary memberships); [`Search`]
//! explores guesses depth first and closes each partial guess under the
//! rules, pruning on clashes.

mod answer_set;
mod bits;
mod model;
mod program;
mod search;
mod state;

pub use answer_set::{saturate_guess, AnswerSet, Guess};
pub use model::{check_model, extract_model, ModelViolation, RankedModel};
pub use program::{ClassId, ConstId, Program, RoleId, TcId, MAX_UPPERBOUND};
pub use search::{Budget, Constraints, Escape, Order, Probe, Search, SearchStats};
pub use state::{Schedule, State};

use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::encode::{translate, EncodeError, Pred};
use crate::model::{KnowledgeBase, Query};
use crate::normalize::normalize;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("rank bound {bound} exceeds the supported maximum {max}")]
    RankBoundTooLarge { bound: u32, max: u32 },
    #[error("malformed program fact: {0}")]
    MalformedFact(String),
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Invalid(#[from] crate::model::InvalidKb),
}

/// Normalizes, translates and compiles a KB.
pub fn compile(kb: &KnowledgeBase, query: Option<&Query>) -> Result<Arc<Program>, EngineError> {
    crate::model::ensure_valid(kb)?;
    let nkb = normalize(kb);
    let facts = translate(&nkb, query)?;
    Ok(Arc::new(Program::compile(facts)?))
}

/// The atom a query asks for, as a probe on the program.
pub fn query_probe(p: &Program, q: &Query) -> Option<Probe> {
    let atom = crate::encode::query_atom(q);
    let x = p.const_id(&atom.args[0])?;
    match atom.pred {
        Pred::Typ => Some(Probe::Typ(x, p.tc_of(q.concept())?)),
        _ => Some(Probe::Inst(x, p.class_id(&atom.args[1])?)),
    }
}

/// All answer sets in canonical guess order, stopping after `limit`.
pub fn answer_sets(
    program: &Arc<Program>,
    limit: Option<usize>,
    budget: Budget,
) -> Result<Vec<AnswerSet>, EngineError> {
    let c = Constraints::unrestricted(program);
    let mut out = vec![];
    Search::new(program, &c, Order::Canonical, budget).for_each(&mut |a| {
        out.push(a);
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{Atom, Term};
    use crate::model::Concept;
    use crate::parser::parse_kb;
    use rand::SeedableRng;

    fn program(text: &str, q: Option<&Query>) -> Arc<Program> {
        compile(&parse_kb(text).unwrap(), q).unwrap()
    }

    /// Every complete guess, closed independently of the search.
    fn brute_force(p: &Arc<Program>) -> Vec<Guess> {
        let n = p.upperbound();
        let nt = p.tc_count();
        let nc = p.const_count();
        let mut out = vec![];
        for bits in 0..1u32 << nt {
            let aux: Vec<bool> = (0..nt).map(|k| bits >> k & 1 == 1).collect();
            let total = (n as u64 + 1).pow(nc as u32);
            for code in 0..total {
                let mut c = code;
                let mut ranks = vec![0; nc];
                for r in ranks.iter_mut().rev() {
                    *r = (c % (n as u64 + 1)) as u32;
                    c /= n as u64 + 1;
                }
                let g = Guess {
                    aux_inst: aux.clone(),
                    ranks,
                };
                if saturate_guess(p, &g, &mut Schedule::Fifo).is_some() {
                    out.push(g);
                }
            }
        }
        out.sort();
        out
    }

    const SMALL: &str = "class A, B, C. role R. individual a, b.
        tbox: T(A) [= B. B & C [= Bot. Ex R.A [= C.
        abox: A(a). R(b, a).";

    #[test]
    fn search_matches_exhaustive_guessing() {
        let p = program(SMALL, None);
        let found: Vec<Guess> = answer_sets(&p, None, Budget::default())
            .unwrap()
            .iter()
            .map(AnswerSet::guess)
            .collect();
        let mut sorted = found.clone();
        sorted.sort();
        assert_eq!(found, sorted, "canonical order");
        assert_eq!(found, brute_force(&p));
        assert!(!found.is_empty());
    }

    #[test]
    fn strict_consequences_hold_everywhere() {
        let p = program(SMALL, None);
        for a in answer_sets(&p, None, Budget::default()).unwrap() {
            assert!(a.holds_query(&Query::inst("b", "C")));
            assert!(!a.holds_query(&Query::inst("b", "B")));
        }
    }

    #[test]
    fn random_schedules_reach_the_same_closure() {
        let p = program(SMALL, None);
        for a in answer_sets(&p, None, Budget::default()).unwrap() {
            let g = a.guess();
            for seed in 0..5 {
                let mut sched = Schedule::Random(Box::new(rand_chacha::ChaCha8Rng::seed_from_u64(seed)));
                let b = saturate_guess(&p, &g, &mut sched).unwrap();
                assert_eq!(a.atoms(), b.atoms());
            }
        }
    }

    #[test]
    fn inconsistent_kb_has_no_answer_set() {
        let p = program("class A. individual a. tbox: A [= Bot. abox: A(a).", None);
        assert!(answer_sets(&p, None, Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn extracted_models_satisfy_the_kb() {
        let kb = parse_kb(
            "class A, B, C, D. role R, S. individual a, b.
             rbox: R [= S. R o R [= S. A x B [= R.
             tbox: A [= Ex R.B. T(B) [= Ex R.Self. {a} [= D.
             abox: A(a). B(b).",
        )
        .unwrap();
        let p = compile(&kb, None).unwrap();
        let sets = answer_sets(&p, Some(50), Budget::default()).unwrap();
        assert!(!sets.is_empty());
        for a in &sets {
            let m = extract_model(a);
            assert_eq!(check_model(&m, &kb), vec![]);
        }
    }

    #[test]
    fn atoms_round_trip_through_holds() {
        let p = program(SMALL, None);
        let a = answer_sets(&p, Some(1), Budget::default()).unwrap().remove(0);
        for atom in a.atoms() {
            assert!(a.holds(&atom), "{atom}");
        }
        assert!(!a.holds(&Atom::new(
            Pred::Inst,
            vec![Term::Ind("a".into()), Term::Concept("C".into())]
        )));
    }

    #[test]
    fn node_budget_is_enforced() {
        let p = program(SMALL, None);
        let err = answer_sets(
            &p,
            None,
            Budget {
                max_nodes: Some(2),
                deadline: None,
            },
        )
        .unwrap_err();
        assert!(matches!(err, EngineError::BudgetExceeded { .. }));
    }

    #[test]
    fn escapes_and_absent_probes_restrict_results() {
        let p = program(SMALL, Some(&Query::typ("a", "A")));
        let probe = query_probe(&p, &Query::typ("a", "A")).unwrap();
        let mut c = Constraints::unrestricted(&p);
        c.absent.push(probe);
        let found = Search::new(&p, &c, Order::Canonical, Budget::default());
        let mut n = 0;
        found
            .for_each(&mut |a| {
                assert!(!a.holds_query(&Query::typ("a", "A")));
                n += 1;
                ControlFlow::Continue(())
            })
            .unwrap();
        assert!(n > 0);
        let a_const = p.const_id(&Term::Ind("a".into())).unwrap();
        let mut c = Constraints::unrestricted(&p);
        c.escapes.push(Escape(vec![(a_const, 1)]));
        let first = Search::new(&p, &c, Order::Heuristic, Budget::default())
            .first()
            .unwrap()
            .unwrap();
        assert_eq!(first.rank(a_const), 0);
    }

    #[test]
    fn unsupported_rank_bound_is_rejected() {
        let mut text = String::from("class ");
        let names: Vec<String> = (0..130).map(|i| format!("A{i}")).collect();
        text += &names.join(", ");
        text += ". tbox: ";
        for n in &names {
            text += &format!("T({n}) [= Top. ");
        }
        let err = compile(&parse_kb(&text).unwrap(), None).unwrap_err();
        assert!(matches!(err, EngineError::RankBoundTooLarge { .. }));
        let _ = Concept::Top;
    }
}
