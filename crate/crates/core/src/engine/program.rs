use std::collections::HashMap;
use std::sync::OnceLock;

use super::state::State;
use super::EngineError;
use crate::encode::{Atom, Pred, ProgramFacts, Term};
use crate::model::{ConceptName, IndividualName, RoleName};

pub type ConstId = usize;
pub type ClassId = usize;
pub type RoleId = usize;
/// Index of a typicality argument (its `auxtc` constant).
pub type TcId = usize;

/// Largest supported rank bound: ranks `0..=n+1` must fit in a `u128`.
pub const MAX_UPPERBOUND: u32 = 126;

/// `Π_K` compiled into per-rule lookup tables.
///
/// Constants are numbered named individuals first, then `auxex`, then
/// `auxtc`. Classes are the concept names followed by one nominal class per
/// named individual.
#[derive(Debug)]
pub struct Program {
    pub facts: ProgramFacts,
    pub(crate) n: u8,
    pub(crate) n_named: usize,
    pub(crate) n_auxex: usize,
    pub(crate) n_consts: usize,
    pub(crate) n_classes: usize,
    pub(crate) n_roles: usize,
    pub(crate) nominal_base: ClassId,
    pub(crate) tops: Vec<ClassId>,
    pub(crate) bots: Vec<bool>,
    pub(crate) sub_class: Vec<Vec<ClassId>>,
    /// `subConj(y1, y2, z)` indexed on both conjuncts: `y -> (other, z)`.
    pub(crate) sub_conj: Vec<Vec<(ClassId, ClassId)>>,
    /// `subEx(v, y, z)` indexed on `y`: `(v, z)`.
    pub(crate) sub_ex_by_filler: Vec<Vec<(RoleId, ClassId)>>,
    /// `subEx(v, y, z)` indexed on `v`: `(y, z)`.
    pub(crate) sub_ex_by_role: Vec<Vec<(ClassId, ClassId)>>,
    /// `supEx(y, v, z, x')` indexed on `y`: `(v, z, x')`.
    pub(crate) sup_ex: Vec<Vec<(RoleId, ClassId, ConstId)>>,
    pub(crate) sub_self: Vec<Vec<ClassId>>,
    pub(crate) sup_self: Vec<Vec<RoleId>>,
    pub(crate) sub_role: Vec<Vec<RoleId>>,
    /// `subRChain(u, v, w)` indexed on `u`: `(v, w)`.
    pub(crate) chain_first: Vec<Vec<(RoleId, RoleId)>>,
    /// `subRChain(u, v, w)` indexed on `v`: `(u, w)`.
    pub(crate) chain_second: Vec<Vec<(RoleId, RoleId)>>,
    /// `subRConj(v1, v2, w)` indexed on both: `v -> (other, w)`.
    pub(crate) rconj: Vec<Vec<(RoleId, RoleId)>>,
    /// `subProd(y1, y2, w)` indexed on `y1`: `(y2, w)`.
    pub(crate) prod_first: Vec<Vec<(ClassId, RoleId)>>,
    /// `subProd(y1, y2, w)` indexed on `y2`: `(y1, w)`.
    pub(crate) prod_second: Vec<Vec<(ClassId, RoleId)>>,
    pub(crate) sup_prod: Vec<Vec<(ClassId, ClassId)>>,
    pub(crate) sup_typ: Vec<Vec<TcId>>,
    pub(crate) sub_typ: Vec<Vec<ClassId>>,
    pub(crate) tc_of_class: Vec<Option<TcId>>,
    pub(crate) tc_class: Vec<ClassId>,
    root: OnceLock<State>,
}

struct Ids {
    consts: HashMap<Term, ConstId>,
    concepts: HashMap<ConceptName, ClassId>,
    roles: HashMap<RoleName, RoleId>,
    nominal_base: ClassId,
    named: HashMap<IndividualName, ConstId>,
}

impl Ids {
    fn class(&self, t: &Term) -> Result<ClassId, EngineError> {
        match t {
            Term::Concept(c) => self.concepts.get(c).copied(),
            Term::Ind(a) => self.named.get(a).map(|d| self.nominal_base + d),
            _ => None,
        }
        .ok_or_else(|| EngineError::MalformedFact(format!("`{t}` is not a class")))
    }

    fn role(&self, t: &Term) -> Result<RoleId, EngineError> {
        match t {
            Term::Role(r) => self.roles.get(r).copied(),
            _ => None,
        }
        .ok_or_else(|| EngineError::MalformedFact(format!("`{t}` is not a role")))
    }

    fn constant(&self, t: &Term) -> Result<ConstId, EngineError> {
        self.consts
            .get(t)
            .copied()
            .ok_or_else(|| EngineError::MalformedFact(format!("`{t}` is not a constant")))
    }
}

impl Program {
    pub fn compile(facts: ProgramFacts) -> Result<Program, EngineError> {
        if facts.upperbound > MAX_UPPERBOUND {
            return Err(EngineError::RankBoundTooLarge {
                bound: facts.upperbound,
                max: MAX_UPPERBOUND,
            });
        }
        let consts = facts.constants();
        let n_named = facts.named.len();
        let n_auxex = facts.aux_supex.len();
        let n_roles = facts.roles.len();
        let nominal_base = facts.concepts.len();
        let n_classes = nominal_base + n_named;
        let ids = Ids {
            consts: consts.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect(),
            concepts: facts
                .concepts
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, c)| (c, i))
                .collect(),
            roles: facts.roles.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect(),
            nominal_base,
            named: facts.named.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect(),
        };
        let mut p = Program {
            n: facts.upperbound as u8,
            n_named,
            n_auxex,
            n_consts: consts.len(),
            n_classes,
            n_roles,
            nominal_base,
            tops: vec![],
            bots: vec![false; n_classes],
            sub_class: vec![vec![]; n_classes],
            sub_conj: vec![vec![]; n_classes],
            sub_ex_by_filler: vec![vec![]; n_classes],
            sub_ex_by_role: vec![vec![]; n_roles],
            sup_ex: vec![vec![]; n_classes],
            sub_self: vec![vec![]; n_roles],
            sup_self: vec![vec![]; n_classes],
            sub_role: vec![vec![]; n_roles],
            chain_first: vec![vec![]; n_roles],
            chain_second: vec![vec![]; n_roles],
            rconj: vec![vec![]; n_roles],
            prod_first: vec![vec![]; n_classes],
            prod_second: vec![vec![]; n_classes],
            sup_prod: vec![vec![]; n_roles],
            sup_typ: vec![vec![]; n_classes],
            sub_typ: vec![vec![]; facts.aux_tc.len()],
            tc_of_class: vec![None; n_classes],
            tc_class: vec![],
            root: OnceLock::new(),
            facts: ProgramFacts {
                facts: vec![],
                ..facts.clone()
            },
        };
        for (k, c) in facts.aux_tc.iter().enumerate() {
            let class = ids.class(&Term::Concept(c.clone()))?;
            p.tc_of_class[class] = Some(k);
            p.tc_class.push(class);
        }
        let tc = |p: &Program, t: &Term| -> Result<TcId, EngineError> {
            p.tc_of_class[ids.class(t)?]
                .ok_or_else(|| EngineError::MalformedFact(format!("`{t}` has no typicality constant")))
        };
        for Atom { pred, args, .. } in &facts.facts {
            match pred {
                Pred::Top => p.tops.push(ids.class(&args[0])?),
                Pred::Bot => p.bots[ids.class(&args[0])?] = true,
                Pred::SubClass => {
                    let (y, z) = (ids.class(&args[0])?, ids.class(&args[1])?);
                    p.sub_class[y].push(z);
                }
                Pred::SubConj => {
                    let (y1, y2, z) = (ids.class(&args[0])?, ids.class(&args[1])?, ids.class(&args[2])?);
                    p.sub_conj[y1].push((y2, z));
                    if y1 != y2 {
                        p.sub_conj[y2].push((y1, z));
                    }
                }
                Pred::SubEx => {
                    let (v, y, z) = (ids.role(&args[0])?, ids.class(&args[1])?, ids.class(&args[2])?);
                    p.sub_ex_by_filler[y].push((v, z));
                    p.sub_ex_by_role[v].push((y, z));
                }
                Pred::SupEx => {
                    let (y, v, z) = (ids.class(&args[0])?, ids.role(&args[1])?, ids.class(&args[2])?);
                    let x = ids.constant(&args[3])?;
                    p.sup_ex[y].push((v, z, x));
                }
                Pred::SubSelf => {
                    let (v, z) = (ids.role(&args[0])?, ids.class(&args[1])?);
                    p.sub_self[v].push(z);
                }
                Pred::SupSelf => {
                    let (y, v) = (ids.class(&args[0])?, ids.role(&args[1])?);
                    p.sup_self[y].push(v);
                }
                Pred::SubRole => {
                    let (v, w) = (ids.role(&args[0])?, ids.role(&args[1])?);
                    p.sub_role[v].push(w);
                }
                Pred::SubRChain => {
                    let (u, v, w) = (ids.role(&args[0])?, ids.role(&args[1])?, ids.role(&args[2])?);
                    p.chain_first[u].push((v, w));
                    p.chain_second[v].push((u, w));
                }
                Pred::SubRConj => {
                    let (v1, v2, w) = (ids.role(&args[0])?, ids.role(&args[1])?, ids.role(&args[2])?);
                    p.rconj[v1].push((v2, w));
                    if v1 != v2 {
                        p.rconj[v2].push((v1, w));
                    }
                }
                Pred::SubProd => {
                    let (y1, y2, w) = (ids.class(&args[0])?, ids.class(&args[1])?, ids.role(&args[2])?);
                    p.prod_first[y1].push((y2, w));
                    p.prod_second[y2].push((y1, w));
                }
                Pred::SupProd => {
                    let (v, z1, z2) = (ids.role(&args[0])?, ids.class(&args[1])?, ids.class(&args[2])?);
                    p.sup_prod[v].push((z1, z2));
                }
                Pred::SupTyp => {
                    let y = ids.class(&args[0])?;
                    let k = tc(&p, &args[1])?;
                    p.sup_typ[y].push(k);
                }
                Pred::SubTyp => {
                    let k = tc(&p, &args[0])?;
                    let z = ids.class(&args[1])?;
                    p.sub_typ[k].push(z);
                }
                Pred::Nom | Pred::Cls | Pred::Rol | Pred::Auxtc | Pred::Auxsupex | Pred::Upperbound => {}
                other => {
                    return Err(EngineError::MalformedFact(format!(
                        "unexpected fact predicate `{}`",
                        other.name()
                    )))
                }
            }
        }
        p.facts.facts = facts.facts;
        Ok(p)
    }

    /// The rank bound `n`.
    pub fn upperbound(&self) -> u32 {
        self.n as u32
    }

    pub fn const_count(&self) -> usize {
        self.n_consts
    }

    pub fn named_count(&self) -> usize {
        self.n_named
    }

    pub fn tc_count(&self) -> usize {
        self.tc_class.len()
    }

    pub fn tc_const(&self, k: TcId) -> ConstId {
        self.n_named + self.n_auxex + k
    }

    pub fn nominal_class(&self, d: ConstId) -> ClassId {
        self.nominal_base + d
    }

    pub fn is_named(&self, c: ConstId) -> bool {
        c < self.n_named
    }

    pub fn const_term(&self, c: ConstId) -> Term {
        if c < self.n_named {
            Term::Ind(self.facts.named[c].clone())
        } else if c < self.n_named + self.n_auxex {
            Term::AuxEx(c - self.n_named)
        } else {
            Term::AuxTc(c - self.n_named - self.n_auxex)
        }
    }

    pub fn const_id(&self, t: &Term) -> Option<ConstId> {
        match t {
            Term::Ind(a) => self.facts.named.iter().position(|b| b == a),
            Term::AuxEx(k) if *k < self.n_auxex => Some(self.n_named + k),
            Term::AuxTc(k) if *k < self.tc_count() => Some(self.tc_const(*k)),
            _ => None,
        }
    }

    /// Class term: a concept name or, for nominal classes, the individual.
    pub fn class_term(&self, c: ClassId) -> Term {
        if c < self.nominal_base {
            Term::Concept(self.facts.concepts[c].clone())
        } else {
            Term::Ind(self.facts.named[c - self.nominal_base].clone())
        }
    }

    pub fn class_id(&self, t: &Term) -> Option<ClassId> {
        match t {
            Term::Concept(c) => self.facts.concepts.iter().position(|d| d == c),
            Term::Ind(a) => self
                .facts
                .named
                .iter()
                .position(|b| b == a)
                .map(|d| self.nominal_base + d),
            _ => None,
        }
    }

    pub fn role_id(&self, r: &RoleName) -> Option<RoleId> {
        self.facts.roles.iter().position(|s| s == r)
    }

    pub fn tc_of(&self, c: &ConceptName) -> Option<TcId> {
        self.facts.aux_tc_index(c)
    }

    /// The saturated state before any guess.
    pub fn root(&self) -> &State {
        self.root.get_or_init(|| {
            let mut s = State::new(self);
            for d in 0..self.n_named {
                s.add_inst(self, d, self.nominal_class(d));
            }
            s.saturate(self, &mut super::Schedule::Fifo);
            s
        })
    }
}
