//! Structural transformation into normal form.
//!
//! Complex subconcepts are replaced by fresh names `_n0`, `_n1`, ... Names
//! standing for a typicality argument, for a nominal in a nested position, or
//! for a `T(..)` in a nested position are defined in both directions so that
//! their extension equals the concept they replace; `T` is not monotone in its
//! argument, so a one-way definition would change its meaning.

use std::collections::HashMap;

use indexmap::IndexMap;

use crate::model::{Axiom, Concept, ConceptName, IndividualName, KnowledgeBase, RoleName, Signature};

/// The normal-form axiom shapes. `A`, `B`, `C`, `D` positions hold concept
/// names, where ⊤ counts as a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalShape {
    /// `C(a)`
    Assert(ConceptName, IndividualName),
    /// `R(a, b)`
    RoleAssert(RoleName, IndividualName, IndividualName),
    /// `A [= Bot`
    SubBot(ConceptName),
    /// `Top [= C`
    TopSub(ConceptName),
    /// `A [= {c}`
    SubNominal(ConceptName, IndividualName),
    /// `A [= C`
    Sub(ConceptName, ConceptName),
    /// `A & B [= C`
    ConjSub(ConceptName, ConceptName, ConceptName),
    /// `Ex R.A [= C`
    ExistsSub(RoleName, ConceptName, ConceptName),
    /// `A [= Ex R.B`
    SubExists(ConceptName, RoleName, ConceptName),
    /// `{a} [= C`
    NominalSub(IndividualName, ConceptName),
    /// `Ex R.Self [= C`
    SelfSub(RoleName, ConceptName),
    /// `A [= Ex R.Self`
    SubSelf(ConceptName, RoleName),
    RoleSub(RoleName, RoleName),
    RoleChain(RoleName, RoleName, RoleName),
    RoleConj(RoleName, RoleName, RoleName),
    /// `A x B [= R`
    ProdSub(ConceptName, ConceptName, RoleName),
    /// `R [= C x D`
    SubProd(RoleName, ConceptName, ConceptName),
    /// `A [= T(B)`
    SubTyp(ConceptName, ConceptName),
    /// `T(B) [= C`
    TypSub(ConceptName, ConceptName),
}

fn typ_name(c: &Concept) -> Option<ConceptName> {
    match c {
        Concept::Typ(arg) => arg.as_atomic(),
        _ => None,
    }
}

/// The normal shape of an axiom, or `None` if it is not in normal form.
pub fn classify(axiom: &Axiom) -> Option<NormalShape> {
    use NormalShape as S;
    match axiom {
        Axiom::ConceptAssertion(c, a) => Some(S::Assert(c.as_atomic()?, a.clone())),
        Axiom::RoleAssertion(r, a, b) => Some(S::RoleAssert(r.clone(), a.clone(), b.clone())),
        Axiom::RoleInclusion(r, s) => Some(S::RoleSub(r.clone(), s.clone())),
        Axiom::RoleChain(r, s, t) => Some(S::RoleChain(r.clone(), s.clone(), t.clone())),
        Axiom::RoleConj(r, s, t) => Some(S::RoleConj(r.clone(), s.clone(), t.clone())),
        Axiom::ConceptProductLhs(c, d, r) => Some(S::ProdSub(c.as_atomic()?, d.as_atomic()?, r.clone())),
        Axiom::ConceptProductRhs(r, c, d) => Some(S::SubProd(r.clone(), c.as_atomic()?, d.as_atomic()?)),
        Axiom::ConceptInclusion(l, r) => {
            if let Some(a) = l.as_atomic() {
                return match r {
                    Concept::Bot => Some(S::SubBot(a)),
                    _ if l == &Concept::Top && r.is_atomic() => Some(S::TopSub(r.as_atomic()?)),
                    Concept::Atom(_) | Concept::Top => Some(S::Sub(a, r.as_atomic()?)),
                    Concept::Nominal(c) => Some(S::SubNominal(a, c.clone())),
                    Concept::Exists(role, f) => Some(S::SubExists(a, role.clone(), f.as_atomic()?)),
                    Concept::SelfRestriction(role) => Some(S::SubSelf(a, role.clone())),
                    Concept::Typ(_) => Some(S::SubTyp(a, typ_name(r)?)),
                    Concept::Conj(..) => None,
                };
            }
            let c = r.as_atomic()?;
            match l {
                Concept::Conj(x, y) => Some(S::ConjSub(x.as_atomic()?, y.as_atomic()?, c)),
                Concept::Exists(role, f) => Some(S::ExistsSub(role.clone(), f.as_atomic()?, c)),
                Concept::Nominal(a) => Some(S::NominalSub(a.clone(), c)),
                Concept::SelfRestriction(role) => Some(S::SelfSub(role.clone(), c)),
                Concept::Typ(_) => Some(S::TypSub(typ_name(l)?, c)),
                _ => None,
            }
        }
    }
}

pub fn is_normal(axiom: &Axiom) -> bool {
    classify(axiom).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedKB {
    /// Normal-form axioms in output order.
    pub axioms: Vec<Axiom>,
    /// Each fresh name with the concept it was introduced for.
    pub fresh_names: IndexMap<ConceptName, Concept>,
    /// The original signature extended with the fresh names.
    pub signature: Signature,
    pub base: KnowledgeBase,
}

impl NormalizedKB {
    pub fn as_kb(&self) -> KnowledgeBase {
        let mut kb = KnowledgeBase {
            signature: self.signature.clone(),
            ..KnowledgeBase::default()
        };
        for ax in &self.axioms {
            kb.push(ax.clone());
        }
        kb
    }

    /// The first fresh name introduced for `concept`.
    pub fn fresh_name_for(&self, concept: &Concept) -> Option<&ConceptName> {
        self.fresh_names.iter().find(|(_, c)| *c == concept).map(|(n, _)| n)
    }

    pub fn shapes(&self) -> impl Iterator<Item = (&Axiom, Option<NormalShape>)> {
        self.axioms.iter().map(|a| (a, classify(a)))
    }
}

struct Normalizer {
    signature: Signature,
    counter: usize,
    out: Vec<Axiom>,
    fresh: IndexMap<ConceptName, Concept>,
    exact: HashMap<Concept, ConceptName>,
}

fn name(n: &ConceptName) -> Concept {
    Concept::name(n.clone())
}

impl Normalizer {
    fn fresh(&mut self, origin: &Concept) -> ConceptName {
        loop {
            let symbol = format!("_n{}", self.counter);
            self.counter += 1;
            if !self.signature.uses_symbol(&symbol) {
                let n = ConceptName::new(symbol);
                self.signature.declare_concept(n.clone());
                self.fresh.insert(n.clone(), origin.clone());
                return n;
            }
        }
    }

    fn emit(&mut self, axiom: Axiom) {
        debug_assert!(is_normal(&axiom), "not normal: {axiom}");
        self.out.push(axiom);
    }

    /// A name with the same extension as `c`, memoized by structure.
    fn exact(&mut self, c: &Concept) -> ConceptName {
        if let Some(n) = c.as_atomic() {
            return n;
        }
        if let Some(n) = self.exact.get(c) {
            return n.clone();
        }
        let n = self.fresh(c);
        self.exact.insert(c.clone(), n.clone());
        self.sub_to_name(c, &n);
        self.name_to_sup(&n, c);
        n
    }

    /// A name `A` with `c [= A` emitted, for a nested left-hand position.
    fn name_lhs(&mut self, c: &Concept) -> ConceptName {
        match c {
            Concept::Atom(_) | Concept::Top => c.as_atomic().expect("atomic"),
            Concept::Nominal(_) | Concept::Typ(_) => self.exact(c),
            _ => {
                let n = self.fresh(c);
                self.sub_to_name(c, &n);
                n
            }
        }
    }

    /// A name `B` with `B [= c` emitted, for a nested right-hand position.
    fn name_rhs(&mut self, c: &Concept) -> ConceptName {
        match c {
            Concept::Atom(_) | Concept::Top => c.as_atomic().expect("atomic"),
            Concept::Nominal(_) | Concept::Typ(_) if !c.contains_bot() => self.exact(c),
            _ => {
                let n = self.fresh(c);
                self.name_to_sup(&n, c);
                n
            }
        }
    }

    fn typ_arg(&mut self, arg: &Concept) -> ConceptName {
        self.exact(arg)
    }

    /// Emits `c [= a`.
    fn sub_to_name(&mut self, c: &Concept, a: &ConceptName) {
        if c.contains_bot() {
            return;
        }
        let target = name(a);
        match c {
            Concept::Atom(_) | Concept::Top => self.emit(Axiom::gci(c.clone(), target)),
            Concept::Bot => {}
            Concept::Nominal(_) | Concept::SelfRestriction(_) => self.emit(Axiom::gci(c.clone(), target)),
            Concept::Conj(x, y) => {
                let x = self.name_lhs(x);
                let y = self.name_lhs(y);
                self.emit(Axiom::gci(Concept::conj(name(&x), name(&y)), target));
            }
            Concept::Exists(role, filler) => {
                let f = self.name_lhs(filler);
                self.emit(Axiom::gci(Concept::Exists(role.clone(), Box::new(name(&f))), target));
            }
            Concept::Typ(arg) => {
                let b = self.typ_arg(arg);
                self.emit(Axiom::gci(Concept::typ(name(&b)), target));
            }
        }
    }

    /// Emits `a [= d`.
    fn name_to_sup(&mut self, a: &ConceptName, d: &Concept) {
        let source = name(a);
        if d.contains_bot() {
            self.emit(Axiom::gci(source, Concept::Bot));
            return;
        }
        match d {
            Concept::Atom(_) | Concept::Top | Concept::Nominal(_) | Concept::SelfRestriction(_) => {
                self.emit(Axiom::gci(source, d.clone()))
            }
            Concept::Bot => unreachable!("handled above"),
            Concept::Conj(x, y) => {
                self.name_to_sup(a, x);
                self.name_to_sup(a, y);
            }
            Concept::Exists(role, filler) => {
                let b = self.name_rhs(filler);
                self.emit(Axiom::gci(source, Concept::Exists(role.clone(), Box::new(name(&b)))));
            }
            Concept::Typ(arg) => {
                let b = self.typ_arg(arg);
                self.emit(Axiom::gci(source, Concept::typ(name(&b))));
            }
        }
    }

    fn axiom(&mut self, axiom: &Axiom) {
        if is_normal(axiom) {
            self.out.push(axiom.clone());
            return;
        }
        match axiom {
            Axiom::ConceptInclusion(c, d) => {
                if c.contains_bot() {
                    return;
                }
                if let Some(a) = c.as_atomic() {
                    self.name_to_sup(&a, d);
                } else if let Some(b) = d.as_atomic() {
                    self.sub_to_name(c, &b);
                } else {
                    let link = self.fresh(d);
                    self.sub_to_name(c, &link);
                    self.name_to_sup(&link, d);
                }
            }
            Axiom::ConceptAssertion(c, a) => {
                let n = self.fresh(c);
                self.emit(Axiom::ConceptAssertion(name(&n), a.clone()));
                self.name_to_sup(&n, c);
            }
            Axiom::ConceptProductLhs(c, d, r) => {
                if c.contains_bot() || d.contains_bot() {
                    return;
                }
                let c = self.name_lhs(c);
                let d = self.name_lhs(d);
                self.emit(Axiom::ConceptProductLhs(name(&c), name(&d), r.clone()));
            }
            Axiom::ConceptProductRhs(r, c, d) => {
                let c = self.name_rhs(c);
                let d = self.name_rhs(d);
                self.emit(Axiom::ConceptProductRhs(r.clone(), name(&c), name(&d)));
            }
            Axiom::RoleAssertion(..) | Axiom::RoleInclusion(..) | Axiom::RoleChain(..) | Axiom::RoleConj(..) => {
                unreachable!("always normal")
            }
        }
    }
}

/// Normalizes a validated KB. Axioms already in normal form are kept as is.
pub fn normalize(kb: &KnowledgeBase) -> NormalizedKB {
    let mut n = Normalizer {
        signature: kb.signature.clone(),
        counter: 0,
        out: vec![],
        fresh: IndexMap::new(),
        exact: HashMap::new(),
    };
    for axiom in kb.axioms() {
        n.axiom(axiom);
    }
    NormalizedKB {
        axioms: n.out,
        fresh_names: n.fresh,
        signature: n.signature,
        base: kb.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_kb;

    fn norm(src: &str) -> NormalizedKB {
        normalize(&parse_kb(src).unwrap())
    }

    fn texts(nkb: &NormalizedKB) -> Vec<String> {
        nkb.axioms.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn normal_axiom_is_unchanged() {
        let nkb = norm("class Student, Young. tbox: T(Student) [= Young.");
        assert_eq!(texts(&nkb), vec!["T(Student) [= Young"]);
        assert!(nkb.fresh_names.is_empty());
    }

    #[test]
    fn typical_conjunction_assertion() {
        let nkb = norm("class Student, Italian. individual luigi. abox: T(Student & Italian)(luigi).");
        assert_eq!(
            texts(&nkb),
            vec![
                "_n0(luigi)",
                "Student & Italian [= _n1",
                "_n1 [= Student",
                "_n1 [= Italian",
                "_n0 [= T(_n1)",
            ]
        );
        assert_eq!(
            nkb.fresh_names[&ConceptName::new("_n1")].to_string(),
            "Student & Italian"
        );
    }

    #[test]
    fn nominal_filler_on_the_left() {
        let nkb = norm(
            "class Student. role friendOf. individual mary.
             tbox: Ex friendOf.{mary} [= T(Student).",
        );
        assert_eq!(
            texts(&nkb),
            vec![
                "{mary} [= _n1",
                "_n1 [= {mary}",
                "Ex friendOf._n1 [= _n0",
                "_n0 [= T(Student)",
            ]
        );
    }

    #[test]
    fn bottom_handling() {
        let nkb = norm("class A, B. role R. tbox: A & Bot [= B. A [= Ex R.Bot. Ex R.A [= Bot.");
        assert_eq!(texts(&nkb), vec!["A [= Bot", "Ex R.A [= _n0", "_n0 [= Bot"]);
    }

    #[test]
    fn typicality_in_nested_position_is_named_both_ways() {
        let nkb = norm("class A, B. role R. tbox: T(Top) & Ex R.T(Top) [= Bot.");
        let t = texts(&nkb);
        let typ_names: Vec<_> = nkb
            .fresh_names
            .iter()
            .filter(|(_, c)| **c == Concept::typ(Concept::Top))
            .collect();
        assert_eq!(typ_names.len(), 1, "memoized: {t:?}");
        let n = typ_names[0].0;
        assert!(t.contains(&format!("{n} [= T(Top)")));
        assert!(t.contains(&format!("T(Top) [= {n}")));
    }

    #[test]
    fn idempotent() {
        let nkb = norm(
            "class A, B, C. role R, S. individual a.
             tbox: A & Ex R.(B & T(C)) [= Ex S.(A & {a}). T(A & B) [= C & Ex R.Self.
             rbox: A & B x Ex R.C [= S. R [= A & B x C.
             abox: (A & Ex R.B)(a).",
        );
        for (ax, shape) in nkb.shapes() {
            assert!(shape.is_some(), "{ax}");
        }
        let kb = nkb.as_kb();
        let again = normalize(&kb);
        assert!(again.fresh_names.is_empty());
        assert_eq!(again.axioms, kb.axioms().cloned().collect::<Vec<_>>());
    }

    #[test]
    fn fresh_names_avoid_existing_symbols() {
        let nkb = norm("class _n0, A. individual a. abox: (A & _n0)(a).");
        assert!(nkb.fresh_names.keys().all(|n| n.as_str() != "_n0"));
    }

    #[test]
    fn classify_shapes() {
        let kb = parse_kb(
            "class A, B, C. role R, S. individual a.
             tbox: Top [= A. A [= Top. A [= Ex R.Self. Ex R.Self [= A. A [= {a}. Top [= Ex R.A.",
        )
        .unwrap();
        let shapes: Vec<_> = kb.tbox.iter().map(|a| classify(a).unwrap()).collect();
        assert!(matches!(shapes[0], NormalShape::TopSub(_)));
        assert!(matches!(shapes[1], NormalShape::Sub(_, _)));
        assert!(matches!(shapes[2], NormalShape::SubSelf(_, _)));
        assert!(matches!(shapes[3], NormalShape::SelfSub(_, _)));
        assert!(matches!(shapes[4], NormalShape::SubNominal(_, _)));
        assert!(matches!(shapes[5], NormalShape::SubExists(_, _, _)));
        let not_normal = parse_kb("class A, B. tbox: A [= A & B. T(A & B) [= A.").unwrap();
        assert!(not_normal.tbox.iter().all(|a| !is_normal(a)));
    }
}
