use std::sync::Arc;

use serde::Serialize;

use super::program::{ConstId, Program, TcId};
use super::state::{Schedule, State};
use crate::encode::{query_atom, Atom, Pred, Term};
use crate::model::Query;

/// The guessed part of an answer set: one membership choice per typicality
/// argument and one rank per constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Guess {
    pub aux_inst: Vec<bool>,
    pub ranks: Vec<u32>,
}

/// A stable model of the program, held as the saturated state of its guess.
#[derive(Clone, Debug)]
pub struct AnswerSet {
    program: Arc<Program>,
    state: State,
}

impl AnswerSet {
    pub(crate) fn new(program: Arc<Program>, state: State) -> AnswerSet {
        AnswerSet { program, state }
    }

    pub fn program(&self) -> &Arc<Program> {
        &self.program
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn guess(&self) -> Guess {
        let p = &*self.program;
        Guess {
            aux_inst: (0..p.tc_count())
                .map(|k| self.state.aux_inst(p, k) == Some(true))
                .collect(),
            ranks: (0..p.const_count()).map(|c| self.rank(c)).collect(),
        }
    }

    pub fn rank(&self, c: ConstId) -> u32 {
        self.state.rank(c).expect("answer sets rank every constant") as u32
    }

    pub fn aux_inst(&self, k: TcId) -> bool {
        self.state.aux_inst(&self.program, k) == Some(true)
    }

    /// Ranks of the listed typicality constants.
    pub fn tc_ranks(&self, ks: &[TcId]) -> Vec<u32> {
        ks.iter().map(|&k| self.rank(self.program.tc_const(k))).collect()
    }

    /// Ranks of all named individuals, in declaration order.
    pub fn named_ranks(&self) -> Vec<u32> {
        (0..self.program.named_count()).map(|c| self.rank(c)).collect()
    }

    pub fn holds(&self, atom: &Atom) -> bool {
        let p = &*self.program;
        let s = &self.state;
        let c = |t: &Term| p.const_id(t);
        let cl = |t: &Term| p.class_id(t);
        let num = |t: &Term| match t {
            Term::Num(n) => Some(*n),
            _ => None,
        };
        let tc = |t: &Term| match t {
            Term::Concept(n) => p.tc_of(n),
            _ => None,
        };
        let a = &atom.args;
        let r = (|| match (atom.pred, atom.negated) {
            (Pred::Inst, false) => Some(s.inst(c(&a[0])?, cl(&a[1])?)),
            (Pred::Inst, true) => Some(s.neg_inst(c(&a[0])?, tc(&a[1])?)),
            (Pred::Typ, false) => Some(s.typ(c(&a[0])?, tc(&a[1])?)),
            (Pred::Triple, false) => {
                let Term::Role(role) = &a[1] else { return None };
                Some(s.triple(p, c(&a[0])?, p.role_id(role)?, c(&a[2])?))
            }
            (Pred::SelfP, false) => {
                let Term::Role(role) = &a[1] else { return None };
                Some(s.self_role(c(&a[0])?, p.role_id(role)?))
            }
            (Pred::Rank, false) => Some(s.rank(c(&a[0])?).map(u32::from) == num(&a[1])),
            (Pred::BoxNeg, neg) => {
                let h = num(&a[0])?;
                let k = tc(&a[1])?;
                let mask = if neg { s.neg_box_mask(k) } else { s.box_mask(k) };
                Some(h < 128 && mask >> h & 1 == 1)
            }
            _ => None,
        })();
        r.unwrap_or(false)
    }

    pub fn holds_query(&self, q: &Query) -> bool {
        self.holds(&query_atom(q))
    }

    /// The derived atoms over `inst`, `typ`, `triple`, `self`, `rank` and
    /// `box_neg`, including strongly negated ones.
    pub fn atoms(&self) -> Vec<Atom> {
        let p = &*self.program;
        let s = &self.state;
        let mut out = vec![];
        let concept = |k: TcId| Term::Concept(p.facts.aux_tc[k].clone());
        for x in 0..p.const_count() {
            let t = p.const_term(x);
            for c in s.insts_of(x) {
                out.push(Atom::new(Pred::Inst, vec![t.clone(), p.class_term(c)]));
            }
            for k in s.neg_insts_of(x) {
                out.push(Atom::negative(Pred::Inst, vec![t.clone(), concept(k)]));
            }
            for k in s.typs_of(x) {
                out.push(Atom::new(Pred::Typ, vec![t.clone(), concept(k)]));
            }
            for (v, role) in p.facts.roles.iter().enumerate() {
                for y in s.successors(p, x, v) {
                    out.push(Atom::new(
                        Pred::Triple,
                        vec![t.clone(), Term::Role(role.clone()), p.const_term(y)],
                    ));
                }
                if s.self_role(x, v) {
                    out.push(Atom::new(Pred::SelfP, vec![t.clone(), Term::Role(role.clone())]));
                }
            }
            out.push(Atom::new(Pred::Rank, vec![t, Term::Num(self.rank(x))]));
        }
        for k in 0..p.tc_count() {
            for (mask, neg) in [(s.box_mask(k), false), (s.neg_box_mask(k), true)] {
                for h in (0..128u32).filter(|h| mask >> h & 1 == 1) {
                    let args = vec![Term::Num(h), concept(k)];
                    out.push(if neg {
                        Atom::negative(Pred::BoxNeg, args)
                    } else {
                        Atom::new(Pred::BoxNeg, args)
                    });
                }
            }
        }
        out.sort();
        out
    }
}

/// Closes a complete guess under the program. Returns `None` when the guess
/// is not the guess of an answer set.
pub fn saturate_guess(program: &Arc<Program>, guess: &Guess, schedule: &mut Schedule) -> Option<AnswerSet> {
    let p = &**program;
    if guess.aux_inst.len() != p.tc_count() || guess.ranks.len() != p.const_count() {
        return None;
    }
    if guess.ranks.iter().any(|&h| h > p.upperbound()) {
        return None;
    }
    let mut s = p.root().clone();
    for (k, &v) in guess.aux_inst.iter().enumerate() {
        if v {
            s.add_inst(p, p.tc_const(k), p.tc_class[k]);
        } else {
            s.add_neg_inst(p, p.tc_const(k), k);
        }
    }
    for (x, &h) in guess.ranks.iter().enumerate() {
        s.add_rank(p, x, h as u8);
    }
    s.saturate(p, schedule);
    let used = s.used_ranks();
    if s.is_conflict() || used & used.wrapping_add(1) != 0 {
        return None;
    }
    Some(AnswerSet::new(program.clone(), s))
}
