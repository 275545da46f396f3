//! Satisfiability, T-minimal fronts and the three entailment modes.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::encode::{Pred, Term};
use crate::engine::{
    compile, query_probe, AnswerSet, Budget, ConstId, Constraints, EngineError, Escape, Order, Program, Search, TcId,
};
use crate::model::{ConceptName, IndividualName, KnowledgeBase, Mode, Query};
use crate::split::split;

#[derive(Debug, Error)]
pub enum ReasonError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("no T-complete answer set")]
    NoTCompleteModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConceptRank {
    pub constant: String,
    pub concept: ConceptName,
    pub rank: u32,
    pub instance: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndividualRank {
    pub individual: IndividualName,
    pub rank: u32,
}

/// Ranks of the typicality constants and the named individuals of an
/// answer set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub concept_ranks: Vec<ConceptRank>,
    pub individual_ranks: Vec<IndividualRank>,
}

impl RankProfile {
    pub fn of(a: &AnswerSet) -> RankProfile {
        let p = a.program();
        RankProfile {
            concept_ranks: p
                .facts
                .aux_tc
                .iter()
                .enumerate()
                .map(|(k, c)| ConceptRank {
                    constant: Term::AuxTc(k).to_string(),
                    concept: c.clone(),
                    rank: a.rank(p.tc_const(k)),
                    instance: a.aux_inst(k),
                })
                .collect(),
            individual_ranks: p
                .facts
                .named
                .iter()
                .enumerate()
                .map(|(i, n)| IndividualRank {
                    individual: n.clone(),
                    rank: a.rank(i),
                })
                .collect(),
        }
    }

    pub fn concept_rank(&self, c: &str) -> Option<u32> {
        self.concept_ranks
            .iter()
            .find(|r| r.concept.as_str() == c)
            .map(|r| r.rank)
    }

    pub fn individual_rank(&self, a: &str) -> Option<u32> {
        self.individual_ranks
            .iter()
            .find(|r| r.individual.as_str() == a)
            .map(|r| r.rank)
    }
}

/// `k(C)=r` per typicality concept (`-` without an instance), then the
/// individual ranks.
impl std::fmt::Display for RankProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for c in &self.concept_ranks {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if c.instance {
                write!(f, "k({})={}", c.concept, c.rank)?;
            } else {
                write!(f, "k({})=-", c.concept)?;
            }
        }
        if !self.concept_ranks.is_empty() && !self.individual_ranks.is_empty() {
            f.write_str(" |")?;
        }
        for r in &self.individual_ranks {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}={}", r.individual, r.rank)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Entailed,
    NotEntailed,
    NoModel,
    NoTCompleteModel,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Entailed => "entailed",
            Answer::NotEntailed => "not entailed",
            Answer::NoModel => "no model",
            Answer::NoTCompleteModel => "no T-complete answer set",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub profile: RankProfile,
    /// Set on the answer set that lacks the query atom.
    pub falsifying: bool,
    /// `inst` and `typ` atoms over named individuals, for falsifying witnesses.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub query: Query,
    pub mode: Mode,
    pub answer: Answer,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Copy, Debug)]
pub struct EntailOptions {
    pub budget: Budget,
    pub witness_limit: usize,
    /// Reason on the part of the KB sharing names with the query.
    pub split: bool,
}

impl Default for EntailOptions {
    fn default() -> Self {
        EntailOptions {
            budget: Budget::default(),
            witness_limit: 3,
            split: true,
        }
    }
}

/// A Pareto-minimal rank vector together with one answer set realizing it.
#[derive(Clone, Debug)]
pub struct FrontMember {
    /// Ranks of the satisfiable typicality constants, in index order.
    pub tc_ranks: Vec<u32>,
    /// Ranks of the named individuals, for ABox fronts.
    pub named_ranks: Option<Vec<u32>>,
    pub representative: AnswerSet,
}

impl FrontMember {
    pub fn profile(&self) -> RankProfile {
        RankProfile::of(&self.representative)
    }
}

fn first(p: &Arc<Program>, c: &Constraints, budget: Budget) -> Result<Option<AnswerSet>, EngineError> {
    Search::new(p, c, Order::Heuristic, budget).first()
}

/// Some answer set, if the program has any.
pub fn any_answer_set(p: &Arc<Program>, budget: Budget) -> Result<Option<AnswerSet>, EngineError> {
    first(p, &Constraints::unrestricted(p), budget)
}

/// Typicality arguments with an instance in some answer set.
pub fn satisfiable_concepts(p: &Arc<Program>, budget: Budget) -> Result<BTreeSet<TcId>, EngineError> {
    let mut sat = BTreeSet::new();
    let mut unsat = BTreeSet::new();
    for k in 0..p.tc_count() {
        if sat.contains(&k) {
            continue;
        }
        let mut c = Constraints::unrestricted(p);
        c.aux[k] = Some(true);
        match first(p, &c, budget)? {
            Some(a) => sat.extend((0..p.tc_count()).filter(|&j| a.aux_inst(j))),
            None => {
                unsat.insert(k);
            }
        }
    }
    Ok(sat)
}

pub fn t_complete(a: &AnswerSet, sat: &BTreeSet<TcId>) -> bool {
    sat.iter().all(|&k| a.aux_inst(k))
}

/// Constraints selecting the T-complete answer sets.
fn complete_constraints(p: &Program, sat: &BTreeSet<TcId>) -> Constraints {
    let mut c = Constraints::unrestricted(p);
    for k in 0..p.tc_count() {
        c.aux[k] = Some(sat.contains(&k));
    }
    c
}

/// Pareto front of the answer sets allowed by `base`, projected on the
/// ranks of `dims`. Each found vector is lowered until no answer set
/// dominates it; later searches skip vectors at or above a front member.
fn pareto_front(
    p: &Arc<Program>,
    base: &Constraints,
    dims: &[ConstId],
    budget: Budget,
) -> Result<Vec<(Vec<u32>, AnswerSet)>, EngineError> {
    let escape = |v: &[u32]| Escape(dims.iter().zip(v).map(|(&d, &r)| (d, r as u8)).collect());
    let mut front: Vec<(Vec<u32>, AnswerSet)> = vec![];
    loop {
        let mut c = base.clone();
        c.escapes.extend(front.iter().map(|(v, _)| escape(v)));
        let Some(mut best) = first(p, &c, budget)? else { break };
        let mut v: Vec<u32> = dims.iter().map(|&d| best.rank(d)).collect();
        loop {
            let mut lower = c.clone();
            for (&d, &r) in dims.iter().zip(&v) {
                lower.cap_rank(d, r);
            }
            lower.escapes.push(escape(&v));
            match first(p, &lower, budget)? {
                Some(b) => {
                    v = dims.iter().map(|&d| b.rank(d)).collect();
                    best = b;
                }
                None => break,
            }
        }
        front.push((v, best));
    }
    front.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(front)
}

/// The T-minimal answer sets, one representative per rank vector of the
/// satisfiable typicality constants.
pub fn t_minimal_front(
    p: &Arc<Program>,
    sat: &BTreeSet<TcId>,
    budget: Budget,
) -> Result<Vec<FrontMember>, ReasonError> {
    let dims: Vec<ConstId> = sat.iter().map(|&k| p.tc_const(k)).collect();
    let front = pareto_front(p, &complete_constraints(p, sat), &dims, budget)?;
    if front.is_empty() {
        return Err(ReasonError::NoTCompleteModel);
    }
    Ok(front
        .into_iter()
        .map(|(tc_ranks, representative)| FrontMember {
            tc_ranks,
            named_ranks: None,
            representative,
        })
        .collect())
}

/// The T-minimal answer sets whose named-individual ranks are not
/// dominated by another T-minimal answer set.
pub fn abox_minimal_front(
    p: &Arc<Program>,
    sat: &BTreeSet<TcId>,
    front: &[FrontMember],
    budget: Budget,
) -> Result<Vec<FrontMember>, ReasonError> {
    let named: Vec<ConstId> = (0..p.named_count()).collect();
    let mut candidates = vec![];
    for f in front {
        let mut c = complete_constraints(p, sat);
        for (&k, &r) in sat.iter().zip(&f.tc_ranks) {
            c.fix_rank(p.tc_const(k), r);
        }
        for (v, a) in pareto_front(p, &c, &named, budget)? {
            candidates.push(FrontMember {
                tc_ranks: f.tc_ranks.clone(),
                named_ranks: Some(v),
                representative: a,
            });
        }
    }
    let dominated = |v: &[u32]| {
        candidates.iter().any(|o| {
            let w = o.named_ranks.as_deref().unwrap_or_default();
            w != v && w.iter().zip(v).all(|(a, b)| a <= b)
        })
    };
    let keep: Vec<bool> = candidates
        .iter()
        .map(|m| !dominated(m.named_ranks.as_deref().unwrap_or_default()))
        .collect();
    Ok(candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(m, k)| k.then_some(m))
        .collect())
}

/// Positive `inst` and `typ` atoms of named individuals and concept names.
pub fn named_atoms(a: &AnswerSet) -> Vec<String> {
    a.atoms()
        .into_iter()
        .filter(|at| {
            !at.negated
                && matches!(at.pred, Pred::Inst | Pred::Typ)
                && matches!(at.args[0], Term::Ind(_))
                && matches!(at.args[1], Term::Concept(_))
        })
        .map(|at| at.to_string())
        .collect()
}

fn falsifying(a: &AnswerSet) -> Witness {
    Witness {
        profile: RankProfile::of(a),
        falsifying: true,
        atoms: named_atoms(a),
    }
}

fn verdict(query: &Query, mode: Mode, answer: Answer, witnesses: Vec<Witness>) -> Verdict {
    Verdict {
        query: query.clone(),
        mode,
        answer,
        witnesses,
    }
}

/// Decides whether `query` follows from `kb` under `mode`.
///
/// With `opts.split`, parts of the KB over names disjoint from the query's
/// part are only checked for a model, and for a T-complete model under the
/// minimal semantics; witnesses then describe the query's part.
pub fn entails(kb: &KnowledgeBase, query: &Query, mode: Mode, opts: EntailOptions) -> Result<Verdict, ReasonError> {
    let parts = if opts.split { split(kb, query) } else { None };
    let Some((own, others)) = parts else {
        let p = compile(kb, Some(query))?;
        return entails_program(&p, query, mode, opts);
    };
    crate::model::ensure_valid(kb).map_err(EngineError::from)?;
    let others = others.iter().map(|k| compile(k, None)).collect::<Result<Vec<_>, _>>()?;
    for p in &others {
        if any_answer_set(p, opts.budget)?.is_none() {
            return Ok(verdict(query, mode, Answer::NoModel, vec![]));
        }
    }
    let v = entails_program(&compile(&own, Some(query))?, query, mode, opts)?;
    if mode == Mode::Rational || matches!(v.answer, Answer::NoModel | Answer::NoTCompleteModel) {
        return Ok(v);
    }
    for p in &others {
        let sat = satisfiable_concepts(p, opts.budget)?;
        if first(p, &complete_constraints(p, &sat), opts.budget)?.is_none() {
            return Ok(verdict(query, mode, Answer::NoTCompleteModel, vec![]));
        }
    }
    Ok(v)
}

/// As [`entails`], on a program compiled with the query.
pub fn entails_program(
    p: &Arc<Program>,
    query: &Query,
    mode: Mode,
    opts: EntailOptions,
) -> Result<Verdict, ReasonError> {
    let budget = opts.budget;
    let probe = query_probe(p, query).ok_or_else(|| {
        EngineError::Encode(crate::encode::EncodeError::UnknownQueryName {
            query: query.to_string(),
        })
    })?;
    if any_answer_set(p, budget)?.is_none() {
        return Ok(verdict(query, mode, Answer::NoModel, vec![]));
    }
    if mode == Mode::Rational {
        let mut c = Constraints::unrestricted(p);
        c.absent.push(probe);
        return Ok(match first(p, &c, budget)? {
            Some(a) => verdict(query, mode, Answer::NotEntailed, vec![falsifying(&a)]),
            None => verdict(query, mode, Answer::Entailed, vec![]),
        });
    }
    let sat = satisfiable_concepts(p, budget)?;
    let front = match t_minimal_front(p, &sat, budget) {
        Ok(f) => f,
        Err(ReasonError::NoTCompleteModel) => return Ok(verdict(query, mode, Answer::NoTCompleteModel, vec![])),
        Err(e) => return Err(e),
    };
    let members = if mode == Mode::TminAbox {
        abox_minimal_front(p, &sat, &front, budget)?
    } else {
        front
    };
    for m in &members {
        let mut c = complete_constraints(p, &sat);
        for (&k, &r) in sat.iter().zip(&m.tc_ranks) {
            c.fix_rank(p.tc_const(k), r);
        }
        if let Some(named) = &m.named_ranks {
            for (i, &r) in named.iter().enumerate() {
                c.fix_rank(i, r);
            }
        }
        c.absent.push(probe);
        if let Some(a) = first(p, &c, budget)? {
            return Ok(verdict(query, mode, Answer::NotEntailed, vec![falsifying(&a)]));
        }
    }
    let witnesses = members
        .iter()
        .take(opts.witness_limit)
        .map(|m| Witness {
            profile: m.profile(),
            falsifying: false,
            atoms: vec![],
        })
        .collect();
    Ok(verdict(query, mode, Answer::Entailed, witnesses))
}

/// Number of answer sets realizing a front member, up to `cap`.
pub fn count_realizations(
    p: &Arc<Program>,
    sat: &BTreeSet<TcId>,
    member: &FrontMember,
    cap: u64,
    budget: Budget,
) -> Result<Option<u64>, EngineError> {
    let mut c = complete_constraints(p, sat);
    for (&k, &r) in sat.iter().zip(&member.tc_ranks) {
        c.fix_rank(p.tc_const(k), r);
    }
    if let Some(named) = &member.named_ranks {
        for (i, &r) in named.iter().enumerate() {
            c.fix_rank(i, r);
        }
    }
    let mut n = 0u64;
    Search::new(p, &c, Order::Canonical, budget).for_each(&mut |_| {
        n += 1;
        if n > cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok((n <= cap).then_some(n))
}
