//! Shared test support: random normal-form knowledge bases, a SAT oracle
//! for ranked models over a fixed domain, and brute-force fronts.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use varisat::{ExtendFormula, Lit, Solver};

use typik_core::engine::{answer_sets, AnswerSet, Budget, Program};
use typik_core::minimal::satisfiable_concepts;
use typik_core::{Axiom, Concept, KnowledgeBase, Query};

/// Size limits for generated knowledge bases.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub concepts: usize,
    pub roles: usize,
    pub individuals: usize,
    pub t_concepts: usize,
    pub max_axioms: usize,
    pub max_assertions: usize,
}

pub const CORPUS: Shape = Shape {
    concepts: 4,
    roles: 2,
    individuals: 3,
    t_concepts: 2,
    max_axioms: 6,
    max_assertions: 4,
};

pub const SMALL: Shape = Shape {
    individuals: 2,
    t_concepts: 1,
    max_axioms: 5,
    max_assertions: 3,
    ..CORPUS
};

/// A random KB whose axioms all have a normal shape.
pub fn random_kb(rng: &mut impl Rng, s: &Shape) -> KnowledgeBase {
    let nc = rng.random_range(1..=s.concepts);
    let nr = rng.random_range(1..=s.roles);
    let ni = rng.random_range(1..=s.individuals);
    let concepts: Vec<String> = (0..nc).map(|i| format!("A{i}")).collect();
    let roles: Vec<String> = (0..nr).map(|i| format!("R{i}")).collect();
    let inds: Vec<String> = (0..ni).map(|i| format!("a{i}")).collect();
    let nt = rng.random_range(0..=s.t_concepts.min(nc));
    let typical: Vec<String> = concepts.choose_multiple(rng, nt).cloned().collect();
    let mut kb = KnowledgeBase::new();
    for c in &concepts {
        kb.signature.declare_concept(c.as_str());
    }
    for r in &roles {
        kb.signature.declare_role(r.as_str());
    }
    for a in &inds {
        kb.signature.declare_individual(a.as_str());
    }
    let pick = |rng: &mut dyn rand::RngCore, v: &[String]| v[rng.random_range(0..v.len())].clone();
    let n_axioms = rng.random_range(1..=s.max_axioms);
    for _ in 0..n_axioms {
        let c = |rng: &mut dyn rand::RngCore| Concept::atom(&pick(rng, &concepts));
        let r = |rng: &mut dyn rand::RngCore| pick(rng, &roles);
        let shapes = if typical.is_empty() { 15 } else { 19 };
        let ax = match rng.random_range(0..shapes) {
            0 | 1 => Axiom::gci(c(rng), c(rng)),
            2 => Axiom::gci(Concept::conj(c(rng), c(rng)), c(rng)),
            3 => Axiom::gci(c(rng), Concept::exists(&r(rng), c(rng))),
            4 => Axiom::gci(Concept::exists(&r(rng), c(rng)), c(rng)),
            5 => Axiom::gci(c(rng), Concept::Bot),
            6 => Axiom::gci(Concept::Top, c(rng)),
            7 => Axiom::gci(c(rng), Concept::nominal(&pick(rng, &inds))),
            8 => Axiom::gci(Concept::nominal(&pick(rng, &inds)), c(rng)),
            9 => Axiom::gci(Concept::self_restriction(&r(rng)), c(rng)),
            10 => Axiom::gci(c(rng), Concept::self_restriction(&r(rng))),
            11 => Axiom::RoleInclusion(r(rng).as_str().into(), r(rng).as_str().into()),
            12 => Axiom::RoleChain(r(rng).as_str().into(), r(rng).as_str().into(), r(rng).as_str().into()),
            13 => Axiom::RoleConj(r(rng).as_str().into(), r(rng).as_str().into(), r(rng).as_str().into()),
            14 => {
                if rng.random_bool(0.5) {
                    Axiom::ConceptProductLhs(c(rng), c(rng), r(rng).as_str().into())
                } else {
                    Axiom::ConceptProductRhs(r(rng).as_str().into(), c(rng), c(rng))
                }
            }
            15 | 16 => Axiom::gci(Concept::typ(Concept::atom(&pick(rng, &typical))), c(rng)),
            _ => Axiom::gci(c(rng), Concept::typ(Concept::atom(&pick(rng, &typical)))),
        };
        kb.push(ax);
    }
    for _ in 0..rng.random_range(0..=s.max_assertions) {
        let a = pick(rng, &inds);
        let ax = if rng.random_bool(0.6) {
            Axiom::ConceptAssertion(Concept::atom(&pick(rng, &concepts)), a.as_str().into())
        } else {
            Axiom::RoleAssertion(
                pick(rng, &roles).as_str().into(),
                a.as_str().into(),
                pick(rng, &inds).as_str().into(),
            )
        };
        kb.push(ax);
    }
    kb
}

/// An instance or typicality query over declared names.
pub fn random_query(rng: &mut impl Rng, kb: &KnowledgeBase) -> Query {
    let inds: Vec<_> = kb.signature.individuals.iter().collect();
    let concepts: Vec<_> = kb.signature.concepts.iter().collect();
    let a = inds[rng.random_range(0..inds.len())].as_str();
    let c = concepts[rng.random_range(0..concepts.len())].as_str();
    if rng.random_bool(0.5) {
        Query::inst(a, c)
    } else {
        Query::typ(a, c)
    }
}

/// Whether every role under a Self restriction on a left side is simple,
/// that is, not implied by a role chain.
pub fn self_roles_are_simple(kb: &KnowledgeBase) -> bool {
    let mut non_simple: BTreeSet<&str> = BTreeSet::new();
    loop {
        let before = non_simple.len();
        for ax in kb.axioms() {
            match ax {
                Axiom::RoleChain(_, _, t) => {
                    non_simple.insert(t.as_str());
                }
                Axiom::RoleInclusion(r, t) if non_simple.contains(r.as_str()) => {
                    non_simple.insert(t.as_str());
                }
                Axiom::RoleConj(r, s, t) if non_simple.contains(r.as_str()) || non_simple.contains(s.as_str()) => {
                    non_simple.insert(t.as_str());
                }
                _ => {}
            }
        }
        if non_simple.len() == before {
            break;
        }
    }
    fn self_roles<'a>(c: &'a Concept, out: &mut Vec<&'a str>) {
        match c {
            Concept::SelfRestriction(r) => out.push(r.as_str()),
            Concept::Conj(l, r) => {
                self_roles(l, out);
                self_roles(r, out);
            }
            Concept::Exists(_, f) | Concept::Typ(f) => self_roles(f, out),
            _ => {}
        }
    }
    let mut used = vec![];
    for ax in kb.axioms() {
        if let Axiom::ConceptInclusion(l, _) = ax {
            self_roles(l, &mut used);
        }
    }
    used.iter().all(|r| !non_simple.contains(r))
}

/// Number of typicality concepts occurring in `kb`.
pub fn t_concept_count(kb: &KnowledgeBase) -> usize {
    typik_core::model::typicality_signature(kb, None).max_k
}

/// SAT encoding of "some ranked model of `kb` has at most `size` elements
/// and ranks at most `n`". Evaluates the semantics directly.
pub struct ModelSat {
    solver: Solver<'static>,
    size: usize,
    n: usize,
    act: Vec<Lit>,
    /// `ge[e][k - 1]`: the rank of `e` is at least `k`.
    ge: Vec<Vec<Lit>>,
    atoms: HashMap<String, Vec<Lit>>,
    roles: HashMap<String, Vec<Lit>>,
    inds: HashMap<String, Vec<Lit>>,
    memo: HashMap<Concept, Vec<Lit>>,
    falsum: Lit,
}

impl ModelSat {
    pub fn new(kb: &KnowledgeBase, size: usize, n: usize) -> ModelSat {
        let mut solver = Solver::new();
        let falsum = solver.new_lit();
        solver.add_clause(&[!falsum]);
        let act: Vec<Lit> = (0..size).map(|_| solver.new_lit()).collect();
        // a domain is nonempty
        solver.add_clause(&[act[0]]);
        for e in 1..size {
            solver.add_clause(&[!act[e], act[e - 1]]);
        }
        let ge: Vec<Vec<Lit>> = (0..size).map(|_| (0..n).map(|_| solver.new_lit()).collect()).collect();
        for row in &ge {
            for k in 1..n {
                solver.add_clause(&[!row[k], row[k - 1]]);
            }
        }
        let mut s = ModelSat {
            solver,
            size,
            n,
            act,
            ge,
            atoms: HashMap::new(),
            roles: HashMap::new(),
            inds: HashMap::new(),
            memo: HashMap::new(),
            falsum,
        };
        for c in &kb.signature.concepts {
            s.atom(c.as_str());
        }
        for r in &kb.signature.roles {
            s.role(r.as_str());
        }
        for a in &kb.signature.individuals {
            s.ind(a.as_str());
        }
        for ax in kb.axioms() {
            s.axiom(ax);
        }
        s
    }

    pub fn satisfiable(mut self) -> bool {
        self.solver.solve().expect("solver")
    }

    fn fresh(&mut self) -> Lit {
        self.solver.new_lit()
    }

    fn atom(&mut self, a: &str) -> Vec<Lit> {
        if let Some(v) = self.atoms.get(a) {
            return v.clone();
        }
        let v: Vec<Lit> = (0..self.size).map(|_| self.fresh()).collect();
        for e in 0..self.size {
            self.solver.add_clause(&[!v[e], self.act[e]]);
        }
        self.atoms.insert(a.to_string(), v.clone());
        v
    }

    /// Row-major `size x size` pair literals.
    fn role(&mut self, r: &str) -> Vec<Lit> {
        if let Some(v) = self.roles.get(r) {
            return v.clone();
        }
        let n = self.size;
        let v: Vec<Lit> = (0..n * n).map(|_| self.fresh()).collect();
        for e in 0..n {
            for f in 0..n {
                self.solver.add_clause(&[!v[e * n + f], self.act[e]]);
                self.solver.add_clause(&[!v[e * n + f], self.act[f]]);
            }
        }
        self.roles.insert(r.to_string(), v.clone());
        v
    }

    /// Exactly one active element interprets the individual.
    fn ind(&mut self, a: &str) -> Vec<Lit> {
        if let Some(v) = self.inds.get(a) {
            return v.clone();
        }
        let v: Vec<Lit> = (0..self.size).map(|_| self.fresh()).collect();
        self.solver.add_clause(&v);
        for e in 0..self.size {
            self.solver.add_clause(&[!v[e], self.act[e]]);
            for f in e + 1..self.size {
                self.solver.add_clause(&[!v[e], !v[f]]);
            }
        }
        self.inds.insert(a.to_string(), v.clone());
        v
    }

    /// `z <-> x & y`
    fn and(&mut self, x: Lit, y: Lit) -> Lit {
        let z = self.fresh();
        self.solver.add_clause(&[!z, x]);
        self.solver.add_clause(&[!z, y]);
        self.solver.add_clause(&[z, !x, !y]);
        z
    }

    /// `z <-> OR xs`
    fn or(&mut self, xs: &[Lit]) -> Lit {
        let z = self.fresh();
        let mut big = vec![!z];
        big.extend_from_slice(xs);
        self.solver.add_clause(&big);
        for &x in xs {
            self.solver.add_clause(&[z, !x]);
        }
        z
    }

    /// rank(f) < rank(e)
    fn lower(&mut self, f: usize, e: usize) -> Lit {
        if self.n == 0 {
            return self.falsum;
        }
        let parts: Vec<Lit> = (0..self.n)
            .map(|k| {
                let (a, b) = (self.ge[e][k], !self.ge[f][k]);
                self.and(a, b)
            })
            .collect();
        self.or(&parts)
    }

    fn concept(&mut self, c: &Concept) -> Vec<Lit> {
        if let Some(v) = self.memo.get(c) {
            return v.clone();
        }
        let n = self.size;
        let v: Vec<Lit> = match c {
            Concept::Top => self.act.clone(),
            Concept::Bot => vec![self.falsum; n],
            Concept::Atom(a) => self.atom(a.as_str()),
            Concept::Nominal(a) => self.ind(a.as_str()),
            Concept::Conj(l, r) => {
                let (l, r) = (self.concept(l), self.concept(r));
                (0..n).map(|e| self.and(l[e], r[e])).collect()
            }
            Concept::Exists(role, filler) => {
                let (p, f) = (self.role(role.as_str()), self.concept(filler));
                (0..n)
                    .map(|e| {
                        let ws: Vec<Lit> = (0..n).map(|g| self.and(p[e * n + g], f[g])).collect();
                        self.or(&ws)
                    })
                    .collect()
            }
            Concept::SelfRestriction(role) => {
                let p = self.role(role.as_str());
                (0..n).map(|e| p[e * n + e]).collect()
            }
            Concept::Typ(arg) => {
                let x = self.concept(arg);
                (0..n)
                    .map(|e| {
                        // some lower element of the argument
                        let below: Vec<Lit> = (0..n)
                            .map(|f| {
                                let lt = self.lower(f, e);
                                self.and(x[f], lt)
                            })
                            .collect();
                        let beaten = self.or(&below);
                        self.and(x[e], !beaten)
                    })
                    .collect()
            }
        };
        self.memo.insert(c.clone(), v.clone());
        v
    }

    fn axiom(&mut self, ax: &Axiom) {
        let n = self.size;
        match ax {
            Axiom::ConceptInclusion(l, r) => {
                let (l, r) = (self.concept(l), self.concept(r));
                for e in 0..n {
                    self.solver.add_clause(&[!l[e], r[e]]);
                }
            }
            Axiom::RoleInclusion(r, s) => {
                let (r, s) = (self.role(r.as_str()), self.role(s.as_str()));
                for i in 0..n * n {
                    self.solver.add_clause(&[!r[i], s[i]]);
                }
            }
            Axiom::RoleChain(r, s, t) => {
                let (r, s, t) = (self.role(r.as_str()), self.role(s.as_str()), self.role(t.as_str()));
                for e in 0..n {
                    for f in 0..n {
                        for g in 0..n {
                            self.solver.add_clause(&[!r[e * n + f], !s[f * n + g], t[e * n + g]]);
                        }
                    }
                }
            }
            Axiom::RoleConj(r, s, t) => {
                let (r, s, t) = (self.role(r.as_str()), self.role(s.as_str()), self.role(t.as_str()));
                for i in 0..n * n {
                    self.solver.add_clause(&[!r[i], !s[i], t[i]]);
                }
            }
            Axiom::ConceptProductLhs(c, d, r) => {
                let (c, d, r) = (self.concept(c), self.concept(d), self.role(r.as_str()));
                for e in 0..n {
                    for f in 0..n {
                        self.solver.add_clause(&[!c[e], !d[f], r[e * n + f]]);
                    }
                }
            }
            Axiom::ConceptProductRhs(r, c, d) => {
                let (r, c, d) = (self.role(r.as_str()), self.concept(c), self.concept(d));
                for e in 0..n {
                    for f in 0..n {
                        self.solver.add_clause(&[!r[e * n + f], c[e]]);
                        self.solver.add_clause(&[!r[e * n + f], d[f]]);
                    }
                }
            }
            Axiom::ConceptAssertion(c, a) => {
                let (c, i) = (self.concept(c), self.ind(a.as_str()));
                for e in 0..n {
                    self.solver.add_clause(&[!i[e], c[e]]);
                }
            }
            Axiom::RoleAssertion(r, a, b) => {
                let (r, i, j) = (self.role(r.as_str()), self.ind(a.as_str()), self.ind(b.as_str()));
                for e in 0..n {
                    for f in 0..n {
                        self.solver.add_clause(&[!i[e], !j[f], r[e * n + f]]);
                    }
                }
            }
        }
    }
}

/// The domain an answer set's model can need: the named individuals plus
/// two copies of every auxiliary constant.
pub fn oracle_domain(p: &Program) -> usize {
    p.named_count() + 2 * (p.const_count() - p.named_count())
}

pub fn has_small_model(kb: &KnowledgeBase, p: &Program) -> bool {
    let n = p.upperbound() as usize;
    ModelSat::new(kb, oracle_domain(p).max(1), n).satisfiable()
}

pub fn all_answer_sets(p: &Arc<Program>) -> Vec<AnswerSet> {
    answer_sets(p, None, Budget::default()).expect("no budget")
}

fn pareto_min(vectors: &BTreeSet<Vec<u32>>) -> BTreeSet<Vec<u32>> {
    vectors
        .iter()
        .filter(|v| {
            !vectors
                .iter()
                .any(|w| w != *v && w.iter().zip(v.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect()
}

/// T-minimal and ABox-minimal answer sets by dominance over a full
/// enumeration. `None` when there is no T-complete answer set.
pub struct BruteFront {
    pub sat: BTreeSet<usize>,
    pub t_front: BTreeSet<Vec<u32>>,
    pub abox_front: BTreeSet<(Vec<u32>, Vec<u32>)>,
    pub t_minimal: Vec<AnswerSet>,
    pub abox_minimal: Vec<AnswerSet>,
}

pub fn brute_front(p: &Arc<Program>, all: &[AnswerSet]) -> Option<BruteFront> {
    // satisfiable: instance of the concept in some answer set
    let sat: BTreeSet<usize> = (0..p.tc_count())
        .filter(|&k| all.iter().any(|a| a.aux_inst(k)))
        .collect();
    debug_assert_eq!(sat, satisfiable_concepts(p, Budget::default()).unwrap());
    let dims: Vec<usize> = sat.iter().copied().collect();
    let complete: Vec<&AnswerSet> = all.iter().filter(|a| sat.iter().all(|&k| a.aux_inst(k))).collect();
    if complete.is_empty() {
        return None;
    }
    let vec_of = |a: &AnswerSet| dims.iter().map(|&k| a.rank(p.tc_const(k))).collect::<Vec<u32>>();
    let t_front = pareto_min(&complete.iter().map(|a| vec_of(a)).collect());
    let t_minimal: Vec<AnswerSet> = complete
        .iter()
        .filter(|a| t_front.contains(&vec_of(a)))
        .map(|a| (*a).clone())
        .collect();
    let named: BTreeSet<Vec<u32>> = t_minimal.iter().map(|a| a.named_ranks()).collect();
    let named_front = pareto_min(&named);
    let abox_minimal: Vec<AnswerSet> = t_minimal
        .iter()
        .filter(|a| named_front.contains(&a.named_ranks()))
        .cloned()
        .collect();
    let abox_front = abox_minimal.iter().map(|a| (vec_of(a), a.named_ranks())).collect();
    Some(BruteFront {
        sat,
        t_front,
        abox_front,
        t_minimal,
        abox_minimal,
    })
}
