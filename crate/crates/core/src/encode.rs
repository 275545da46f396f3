//! Translation of a normalized KB into the fact base of the logic program,
//! and export of the whole program as answer-set-programming text.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::model::{typicality_signature, ConceptName, IndividualName, Mode, Query, RoleName};
use crate::normalize::{classify, NormalShape, NormalizedKB};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Nom,
    Cls,
    Rol,
    Top,
    Bot,
    SubClass,
    SubConj,
    SubEx,
    SupEx,
    SubSelf,
    SupSelf,
    SubRole,
    SubRChain,
    SubRConj,
    SubProd,
    SupProd,
    SupTyp,
    SubTyp,
    Auxtc,
    Auxsupex,
    Upperbound,
    Inst,
    Typ,
    Triple,
    SelfP,
    Rank,
    BoxNeg,
    Possrank,
    SomeAt,
    Hasdiffrank,
    Ind,
    Occurs,
    Satisfiable,
    Unsatisfiable,
    InstS,
}

impl Pred {
    pub const ALL: [Pred; 35] = [
        Pred::Nom,
        Pred::Cls,
        Pred::Rol,
        Pred::Top,
        Pred::Bot,
        Pred::SubClass,
        Pred::SubConj,
        Pred::SubEx,
        Pred::SupEx,
        Pred::SubSelf,
        Pred::SupSelf,
        Pred::SubRole,
        Pred::SubRChain,
        Pred::SubRConj,
        Pred::SubProd,
        Pred::SupProd,
        Pred::SupTyp,
        Pred::SubTyp,
        Pred::Auxtc,
        Pred::Auxsupex,
        Pred::Upperbound,
        Pred::Inst,
        Pred::Typ,
        Pred::Triple,
        Pred::SelfP,
        Pred::Rank,
        Pred::BoxNeg,
        Pred::Possrank,
        Pred::SomeAt,
        Pred::Hasdiffrank,
        Pred::Ind,
        Pred::Occurs,
        Pred::Satisfiable,
        Pred::Unsatisfiable,
        Pred::InstS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pred::Nom => "nom",
            Pred::Cls => "cls",
            Pred::Rol => "rol",
            Pred::Top => "top",
            Pred::Bot => "bot",
            Pred::SubClass => "subClass",
            Pred::SubConj => "subConj",
            Pred::SubEx => "subEx",
            Pred::SupEx => "supEx",
            Pred::SubSelf => "subSelf",
            Pred::SupSelf => "supSelf",
            Pred::SubRole => "subRole",
            Pred::SubRChain => "subRChain",
            Pred::SubRConj => "subRConj",
            Pred::SubProd => "subProd",
            Pred::SupProd => "supProd",
            Pred::SupTyp => "supTyp",
            Pred::SubTyp => "subTyp",
            Pred::Auxtc => "auxtc",
            Pred::Auxsupex => "auxsupex",
            Pred::Upperbound => "upperbound",
            Pred::Inst => "inst",
            Pred::Typ => "typ",
            Pred::Triple => "triple",
            Pred::SelfP => "self",
            Pred::Rank => "rank",
            Pred::BoxNeg => "box_neg",
            Pred::Possrank => "possrank",
            Pred::SomeAt => "some_at",
            Pred::Hasdiffrank => "hasdiffrank",
            Pred::Ind => "ind",
            Pred::Occurs => "occurs",
            Pred::Satisfiable => "satisfiable",
            Pred::Unsatisfiable => "unsatisfiable",
            Pred::InstS => "inst_s",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Pred::Nom
            | Pred::Cls
            | Pred::Rol
            | Pred::Top
            | Pred::Bot
            | Pred::Auxsupex
            | Pred::Upperbound
            | Pred::Possrank
            | Pred::SomeAt
            | Pred::Ind
            | Pred::Occurs
            | Pred::Satisfiable
            | Pred::Unsatisfiable => 1,
            Pred::SubClass
            | Pred::SubSelf
            | Pred::SupSelf
            | Pred::SubRole
            | Pred::SupTyp
            | Pred::SubTyp
            | Pred::Auxtc
            | Pred::Inst
            | Pred::Typ
            | Pred::SelfP
            | Pred::Rank
            | Pred::BoxNeg
            | Pred::Hasdiffrank => 2,
            Pred::SubConj
            | Pred::SubEx
            | Pred::SubRChain
            | Pred::SubRConj
            | Pred::SubProd
            | Pred::SupProd
            | Pred::Triple
            | Pred::InstS => 3,
            Pred::SupEx => 4,
        }
    }

    pub fn from_name(name: &str) -> Option<Pred> {
        Pred::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// A program constant. Auxiliary constants are numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Ind(IndividualName),
    Concept(ConceptName),
    Role(RoleName),
    AuxEx(usize),
    AuxTc(usize),
    Num(u32),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Ind(a) => write!(f, "{a}"),
            Term::Concept(c) => write!(f, "{c}"),
            Term::Role(r) => write!(f, "{r}"),
            Term::AuxEx(k) => write!(f, "auxex_{}", k + 1),
            Term::AuxTc(k) => write!(f, "auxtc_{}", k + 1),
            Term::Num(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
    pub negated: bool,
}

impl Atom {
    pub fn new(pred: Pred, args: Vec<Term>) -> Atom {
        debug_assert_eq!(pred.arity(), args.len(), "arity of {}", pred.name());
        Atom {
            pred,
            args,
            negated: false,
        }
    }

    pub fn negative(pred: Pred, args: Vec<Term>) -> Atom {
        Atom {
            negated: true,
            ..Atom::new(pred, args)
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        write!(f, "{}(", self.pred.name())?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("axiom `{axiom}` is not in normal form")]
    NotNormalized { axiom: String },
    #[error("query `{query}` uses a name outside the signature")]
    UnknownQueryName { query: String },
}

/// The existential witness constant of an `A [= Ex R.B` axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxSupEx {
    pub source: ConceptName,
    pub role: RoleName,
    pub filler: ConceptName,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramFacts {
    pub facts: Vec<Atom>,
    pub named: Vec<IndividualName>,
    pub aux_supex: Vec<AuxSupEx>,
    /// The typicality argument of each `auxtc` constant.
    pub aux_tc: Vec<ConceptName>,
    pub upperbound: u32,
    pub concepts: Vec<ConceptName>,
    pub roles: Vec<RoleName>,
    pub query: Option<Query>,
}

impl ProgramFacts {
    /// Constants in id order: named individuals, then `auxex`, then `auxtc`.
    pub fn constants(&self) -> Vec<Term> {
        self.named
            .iter()
            .map(|a| Term::Ind(a.clone()))
            .chain((0..self.aux_supex.len()).map(Term::AuxEx))
            .chain((0..self.aux_tc.len()).map(Term::AuxTc))
            .collect()
    }

    pub fn aux_tc_index(&self, concept: &ConceptName) -> Option<usize> {
        self.aux_tc.iter().position(|c| c == concept)
    }
}

fn ind(a: &IndividualName) -> Term {
    Term::Ind(a.clone())
}

fn cls(c: &ConceptName) -> Term {
    Term::Concept(c.clone())
}

fn rol(r: &RoleName) -> Term {
    Term::Role(r.clone())
}

pub fn query_atom(query: &Query) -> Atom {
    match query {
        Query::Inst { individual, concept } => Atom::new(Pred::Inst, vec![ind(individual), cls(concept)]),
        Query::Typ { individual, concept } => Atom::new(Pred::Typ, vec![ind(individual), cls(concept)]),
    }
}

/// Builds `Π_K` for a normalized KB and an optional query.
pub fn translate(nkb: &NormalizedKB, query: Option<&Query>) -> Result<ProgramFacts, EncodeError> {
    let sig = &nkb.signature;
    if let Some(q) = query {
        if !sig.contains_individual(q.individual()) || !sig.contains_concept(q.concept()) {
            return Err(EncodeError::UnknownQueryName { query: q.to_string() });
        }
    }
    let named: Vec<IndividualName> = sig.individuals.iter().cloned().collect();
    let concepts: Vec<ConceptName> = [ConceptName::top(), ConceptName::bot()]
        .into_iter()
        .chain(sig.concepts.iter().cloned())
        .collect();
    let roles: Vec<RoleName> = sig.roles.iter().cloned().collect();

    let mut facts = vec![];
    facts.extend(named.iter().map(|a| Atom::new(Pred::Nom, vec![ind(a)])));
    facts.extend(concepts.iter().map(|c| Atom::new(Pred::Cls, vec![cls(c)])));
    facts.extend(roles.iter().map(|r| Atom::new(Pred::Rol, vec![rol(r)])));

    let mut aux_supex = vec![];
    for axiom in &nkb.axioms {
        use NormalShape as S;
        let shape = classify(axiom).ok_or_else(|| EncodeError::NotNormalized {
            axiom: axiom.to_string(),
        })?;
        let atom = match shape {
            S::Assert(c, a) => Atom::new(Pred::SubClass, vec![ind(&a), cls(&c)]),
            S::RoleAssert(r, a, b) => Atom::new(Pred::SupEx, vec![ind(&a), rol(&r), ind(&b), ind(&b)]),
            S::TopSub(c) => Atom::new(Pred::Top, vec![cls(&c)]),
            S::SubBot(a) => Atom::new(Pred::Bot, vec![cls(&a)]),
            S::NominalSub(a, c) => Atom::new(Pred::SubClass, vec![ind(&a), cls(&c)]),
            S::SubNominal(a, c) => Atom::new(Pred::SubClass, vec![cls(&a), ind(&c)]),
            S::Sub(a, c) => Atom::new(Pred::SubClass, vec![cls(&a), cls(&c)]),
            S::ConjSub(a, b, c) => Atom::new(Pred::SubConj, vec![cls(&a), cls(&b), cls(&c)]),
            S::SelfSub(r, c) => Atom::new(Pred::SubSelf, vec![rol(&r), cls(&c)]),
            S::SubSelf(a, r) => Atom::new(Pred::SupSelf, vec![cls(&a), rol(&r)]),
            S::ExistsSub(r, a, c) => Atom::new(Pred::SubEx, vec![rol(&r), cls(&a), cls(&c)]),
            S::SubExists(a, r, b) => {
                let k = aux_supex.len();
                aux_supex.push(AuxSupEx {
                    source: a.clone(),
                    role: r.clone(),
                    filler: b.clone(),
                });
                facts.push(Atom::new(Pred::SupEx, vec![cls(&a), rol(&r), cls(&b), Term::AuxEx(k)]));
                Atom::new(Pred::Auxsupex, vec![Term::AuxEx(k)])
            }
            S::RoleSub(r, s) => Atom::new(Pred::SubRole, vec![rol(&r), rol(&s)]),
            S::RoleChain(r, s, t) => Atom::new(Pred::SubRChain, vec![rol(&r), rol(&s), rol(&t)]),
            S::RoleConj(r, s, t) => Atom::new(Pred::SubRConj, vec![rol(&r), rol(&s), rol(&t)]),
            S::ProdSub(a, b, r) => Atom::new(Pred::SubProd, vec![cls(&a), cls(&b), rol(&r)]),
            S::SubProd(r, c, d) => Atom::new(Pred::SupProd, vec![rol(&r), cls(&c), cls(&d)]),
            S::SubTyp(a, b) => Atom::new(Pred::SupTyp, vec![cls(&a), cls(&b)]),
            S::TypSub(b, c) => Atom::new(Pred::SubTyp, vec![cls(&b), cls(&c)]),
        };
        facts.push(atom);
    }

    let tsig = typicality_signature(&nkb.as_kb(), query);
    let aux_tc: Vec<ConceptName> = tsig
        .concepts_tkq
        .iter()
        .map(|c| c.as_atomic().expect("normalized typicality argument"))
        .collect();
    for (k, c) in aux_tc.iter().enumerate() {
        facts.push(Atom::new(Pred::Auxtc, vec![Term::AuxTc(k), cls(c)]));
    }
    facts.push(Atom::new(Pred::Top, vec![cls(&ConceptName::top())]));
    let upperbound = aux_tc.len() as u32;
    facts.push(Atom::new(Pred::Upperbound, vec![Term::Num(upperbound)]));

    Ok(ProgramFacts {
        facts,
        named,
        aux_supex,
        aux_tc,
        upperbound,
        concepts,
        roles,
        query: query.cloned(),
    })
}

const INFERENCE_RULES: &[&str] = &[
    "inst(X,X) :- nom(X).",
    "self(X,V) :- nom(X), triple(X,V,X).",
    "inst(X,Z) :- top(Z), inst(X,Z1).",
    "inst(X,Z) :- subClass(Y,Z), inst(X,Y).",
    "inst(X,Z) :- subConj(Y1,Y2,Z), inst(X,Y1), inst(X,Y2).",
    "inst(X,Z) :- subEx(V,Y,Z), triple(X,V,X1), inst(X1,Y).",
    "inst(X,Z) :- subEx(V,Y,Z), self(X,V), inst(X,Y).",
    "triple(X,V,X1) :- supEx(Y,V,Z,X1), inst(X,Y).",
    "inst(X1,Z) :- supEx(Y,V,Z,X1), inst(X,Y).",
    "inst(X,Z) :- subSelf(V,Z), self(X,V).",
    "self(X,V) :- supSelf(Y,V), inst(X,Y).",
    "triple(X,W,X1) :- subRole(V,W), triple(X,V,X1).",
    "self(X,W) :- subRole(V,W), self(X,V).",
    "triple(X,W,X2) :- subRChain(U,V,W), triple(X,U,X1), triple(X1,V,X2).",
    "triple(X,W,X1) :- subRChain(U,V,W), self(X,U), triple(X,V,X1).",
    "triple(X,W,X1) :- subRChain(U,V,W), triple(X,U,X1), self(X1,V).",
    "triple(X,W,X) :- subRChain(U,V,W), self(X,U), self(X,V).",
    "triple(X,W,X1) :- subRConj(V1,V2,W), triple(X,V1,X1), triple(X,V2,X1).",
    "self(X,W) :- subRConj(V1,V2,W), self(X,V1), self(X,V2).",
    "triple(X,W,X1) :- subProd(Y1,Y2,W), inst(X,Y1), inst(X1,Y2).",
    "self(X,W) :- subProd(Y1,Y2,W), inst(X,Y1), inst(X,Y2).",
    "inst(X,Z1) :- supProd(V,Z1,Z2), triple(X,V,X1).",
    "inst(X,Z1) :- supProd(V,Z1,Z2), self(X,V).",
    "inst(X1,Z2) :- supProd(V,Z1,Z2), triple(X,V,X1).",
    "inst(X,Z2) :- supProd(V,Z1,Z2), self(X,V).",
    "inst(Y,Z) :- inst(X,Y), nom(Y), inst(X,Z).",
    "inst(X,Z) :- inst(X,Y), nom(Y), inst(Y,Z).",
    "triple(Z,U,Y) :- inst(X,Y), nom(Y), triple(Z,U,X).",
    "typ(X,Z) :- supTyp(Y,Z), inst(X,Y).",
    "inst(X,Z) :- subTyp(Y,Z), typ(X,Y).",
];

const RANK_RULES: &[&str] = &[
    "ind(X) :- nom(X).",
    "ind(X) :- auxsupex(X).",
    "ind(X) :- auxtc(X,C).",
    "possrank(0..N) :- upperbound(N).",
    "rank(X,K) :- ind(X), possrank(K), not hasdiffrank(X,K).",
    "hasdiffrank(X,K) :- possrank(K), rank(X,J), J != K.",
    "some_at(K) :- rank(X,K).",
    ":- some_at(K1), K1 = K+1, possrank(K), not some_at(K).",
    ":- -box_neg(K,Y), auxtc(AUXY,Y), rank(AUXY,H), K <= H.",
    "box_neg(K1,Y) :- box_neg(K,Y), possrank(K1), K1 = K-1.",
    "-inst(X,Y) :- box_neg(K,Y), rank(X,K1), K1 = K-1.",
    "-box_neg(K1,Y) :- auxtc(AUXY,Y), rank(AUXY,K), inst(AUXY,Y), K1 = K+1.",
    "-box_neg(K1,Y) :- -box_neg(K,Y), possrank(K1), K1 = K+1.",
    "box_neg(N,Y) :- auxtc(AUXY,Y), -inst(AUXY,Y), upperbound(N).",
    "rank(Y,H) :- nom(Y), inst(X,Y), rank(X,H).",
    "inst(X,Y) :- typ(X,Y).",
    "typ(X,Y) :- inst(X,Y), rank(X,K), box_neg(K,Y).",
    "box_neg(K,Y) :- typ(X,Y), rank(X,K).",
    "box_neg(K,Y) :- auxtc(AUXY,Y), rank(AUXY,K).",
    "inst(AUXY,Y) :- auxtc(AUXY,Y), inst(X,Y).",
    "-inst(AUXY,Y) :- auxtc(AUXY,Y), not inst(AUXY,Y).",
    "inst(AUXY,Y) :- auxtc(AUXY,Y), not -inst(AUXY,Y).",
];

const CONSTRAINT: &str = ":- bot(Z), inst(U,Z).";

const COMPLETENESS_RULES: &[&str] = &[
    "inst(X,Y) :- occurs(Y), auxtc(X,Y), satisfiable(Y).",
    "inst_s(Y,Y,Y) :- occurs(Y).",
];

/// Injective mapping from program terms to ASP constants.
struct AspNames {
    names: HashMap<Term, String>,
}

impl AspNames {
    fn new(facts: &ProgramFacts) -> AspNames {
        let mut used: HashSet<String> = HashSet::new();
        let mut names = HashMap::new();
        let claim = |base: String, used: &mut HashSet<String>| {
            let mut candidate = base.clone();
            let mut k = 2;
            while used.contains(&candidate) || candidate == "not" {
                candidate = format!("{base}_{k}");
                k += 1;
            }
            used.insert(candidate.clone());
            candidate
        };
        for k in 0..facts.aux_supex.len() {
            let t = Term::AuxEx(k);
            let n = claim(t.to_string(), &mut used);
            names.insert(t, n);
        }
        for k in 0..facts.aux_tc.len() {
            let t = Term::AuxTc(k);
            let n = claim(t.to_string(), &mut used);
            names.insert(t, n);
        }
        for a in &facts.named {
            let mut base = a.as_str().to_lowercase();
            if !base
                .trim_start_matches('_')
                .starts_with(|c: char| c.is_ascii_lowercase())
            {
                base = format!("i_{base}");
            }
            let n = claim(base, &mut used);
            names.insert(ind(a), n);
        }
        for c in &facts.concepts {
            let n = claim(format!("c_{c}"), &mut used);
            names.insert(cls(c), n);
        }
        for r in &facts.roles {
            let n = claim(format!("r_{r}"), &mut used);
            names.insert(rol(r), n);
        }
        AspNames { names }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Num(n) => n.to_string(),
            t => self.names[t].clone(),
        }
    }

    fn atom(&self, a: &Atom) -> String {
        let args: Vec<String> = a.args.iter().map(|t| self.term(t)).collect();
        format!(
            "{}{}({})",
            if a.negated { "-" } else { "" },
            a.pred.name(),
            args.join(",")
        )
    }
}

/// Renders the program as ASP text. `satisfiable` holds the indices of the
/// `auxtc` constants whose concept is satisfiable; it is used by the
/// minimal modes only.
pub fn emit_asp(facts: &ProgramFacts, mode: Mode, satisfiable: &BTreeSet<usize>) -> String {
    let names = AspNames::new(facts);
    let mut out = String::new();
    let _ = writeln!(out, "% typik program, mode {mode}");
    if let Some(q) = &facts.query {
        let _ = writeln!(out, "% query {q}, atom {}", names.atom(&query_atom(q)));
    }
    for (k, aux) in facts.aux_supex.iter().enumerate() {
        let _ = writeln!(
            out,
            "% {}: {} [= Ex {}.{}",
            names.term(&Term::AuxEx(k)),
            aux.source,
            aux.role,
            aux.filler
        );
    }
    for (k, c) in facts.aux_tc.iter().enumerate() {
        let _ = writeln!(out, "% {}: T({c})", names.term(&Term::AuxTc(k)));
    }
    let mut mapped: Vec<(String, String)> = facts
        .named
        .iter()
        .map(ind)
        .chain(facts.concepts.iter().map(cls))
        .chain(facts.roles.iter().map(rol))
        .map(|t| (names.term(&t), t.to_string()))
        .filter(|(n, s)| n != s)
        .collect();
    mapped.sort();
    for (n, s) in mapped {
        let _ = writeln!(out, "% {n}: {s}");
    }

    out.push_str("\n% input\n");
    for atom in &facts.facts {
        let _ = writeln!(out, "{}.", names.atom(atom));
    }
    let minimal = mode != Mode::Rational;
    if minimal {
        for (k, c) in facts.aux_tc.iter().enumerate() {
            let _ = writeln!(out, "occurs({}).", names.term(&cls(c)));
            if satisfiable.contains(&k) {
                let _ = writeln!(out, "satisfiable({}).", names.term(&cls(c)));
            }
        }
    }
    out.push_str("\n% inference rules\n");
    for rule in INFERENCE_RULES {
        let _ = writeln!(out, "{rule}");
    }
    out.push_str("\n% ranks and typicality\n");
    for rule in RANK_RULES {
        let _ = writeln!(out, "{rule}");
    }
    let _ = writeln!(out, "{CONSTRAINT}");
    if !minimal {
        return out;
    }
    out.push_str("\n% T-completeness\n");
    for rule in COMPLETENESS_RULES {
        let _ = writeln!(out, "{rule}");
    }

    let tbox: Vec<String> = (0..facts.aux_tc.len()).map(|k| format!("p_{}", k + 1)).collect();
    let abox: Vec<String> = if mode == Mode::TminAbox {
        facts
            .named
            .iter()
            .map(|a| format!("p_{}", names.term(&ind(a))))
            .collect()
    } else {
        vec![]
    };
    if tbox.is_empty() && abox.is_empty() {
        return out;
    }
    out.push_str("\n% preferences\n");
    for (k, p) in tbox.iter().enumerate() {
        let _ = writeln!(
            out,
            "#preference({p}, less(weight)){{ X,X :: rank({},X) : possrank(X) }}.",
            names.term(&Term::AuxTc(k))
        );
    }
    let list = |ps: &[String]| ps.iter().map(|p| format!("name({p})")).collect::<Vec<_>>().join("; ");
    if !tbox.is_empty() {
        let _ = writeln!(out, "#preference(p-tbox, pareto){{ {} }}.", list(&tbox));
    }
    if abox.is_empty() {
        let _ = writeln!(out, "#optimize(p-tbox).");
        return out;
    }
    for (a, p) in facts.named.iter().zip(&abox) {
        let _ = writeln!(
            out,
            "#preference({p}, less(weight)){{ X,X :: rank({},X) : possrank(X) }}.",
            names.term(&ind(a))
        );
    }
    let _ = writeln!(out, "#preference(p-abox, pareto){{ {} }}.", list(&abox));
    if tbox.is_empty() {
        let _ = writeln!(out, "#optimize(p-abox).");
    } else {
        let _ = writeln!(
            out,
            "#preference(p-lex, lexico){{ 2 :: name(p-tbox); 1 :: name(p-abox) }}."
        );
        let _ = writeln!(out, "#optimize(p-lex).");
    }
    out
}
