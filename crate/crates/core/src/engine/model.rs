use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::answer_set::AnswerSet;
use super::program::{ConstId, Program};
use crate::encode::Term;
use crate::model::{Axiom, Concept, ConceptName, IndividualName, KnowledgeBase, RoleName};

/// A finite ranked interpretation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RankedModel {
    /// Element labels, used only for display.
    pub domain: Vec<String>,
    pub concepts: BTreeMap<ConceptName, BTreeSet<usize>>,
    pub roles: BTreeMap<RoleName, BTreeSet<(usize, usize)>>,
    pub rank: Vec<u32>,
    pub individuals: BTreeMap<IndividualName, usize>,
}

impl RankedModel {
    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// Extension of `c` as a membership vector over the domain.
    pub fn eval(&self, c: &Concept) -> Vec<bool> {
        let n = self.len();
        match c {
            Concept::Top => vec![true; n],
            Concept::Bot => vec![false; n],
            Concept::Atom(a) => {
                let mut v = vec![false; n];
                if let Some(ext) = self.concepts.get(a) {
                    for &e in ext {
                        v[e] = true;
                    }
                }
                v
            }
            Concept::Nominal(a) => {
                let mut v = vec![false; n];
                if let Some(&e) = self.individuals.get(a) {
                    v[e] = true;
                }
                v
            }
            Concept::Conj(l, r) => {
                let (l, r) = (self.eval(l), self.eval(r));
                l.iter().zip(&r).map(|(a, b)| *a && *b).collect()
            }
            Concept::Exists(role, filler) => {
                let f = self.eval(filler);
                let mut v = vec![false; n];
                if let Some(pairs) = self.roles.get(role) {
                    for &(d, e) in pairs {
                        if f[e] {
                            v[d] = true;
                        }
                    }
                }
                v
            }
            Concept::SelfRestriction(role) => {
                let mut v = vec![false; n];
                if let Some(pairs) = self.roles.get(role) {
                    for &(d, e) in pairs {
                        if d == e {
                            v[d] = true;
                        }
                    }
                }
                v
            }
            Concept::Typ(arg) => {
                let ext = self.eval(arg);
                let min = (0..n).filter(|&e| ext[e]).map(|e| self.rank[e]).min();
                (0..n).map(|e| ext[e] && Some(self.rank[e]) == min).collect()
            }
        }
    }

    fn role(&self, r: &RoleName) -> BTreeSet<(usize, usize)> {
        self.roles.get(r).cloned().unwrap_or_default()
    }

    fn element(&self, a: &IndividualName) -> Result<usize, String> {
        self.individuals
            .get(a)
            .copied()
            .ok_or_else(|| format!("individual {a} is not interpreted"))
    }

    /// Checks one axiom; the error describes a counterexample.
    pub fn check_axiom(&self, axiom: &Axiom) -> Result<(), String> {
        let label = |e: usize| self.domain[e].clone();
        match axiom {
            Axiom::ConceptInclusion(c, d) => {
                let (l, r) = (self.eval(c), self.eval(d));
                match (0..self.len()).find(|&e| l[e] && !r[e]) {
                    Some(e) => Err(format!("{} is in the left side only", label(e))),
                    None => Ok(()),
                }
            }
            Axiom::RoleInclusion(r, s) => {
                let s = self.role(s);
                match self.role(r).into_iter().find(|p| !s.contains(p)) {
                    Some((d, e)) => Err(format!("({}, {}) is missing", label(d), label(e))),
                    None => Ok(()),
                }
            }
            Axiom::RoleChain(r, s, t) => {
                let (r, s, t) = (self.role(r), self.role(s), self.role(t));
                for &(d, e) in &r {
                    for &(_, f) in s.range((e, 0)..=(e, usize::MAX)) {
                        if !t.contains(&(d, f)) {
                            return Err(format!("({}, {}) is missing", label(d), label(f)));
                        }
                    }
                }
                Ok(())
            }
            Axiom::RoleConj(r, s, t) => {
                let (s, t) = (self.role(s), self.role(t));
                match self.role(r).into_iter().find(|p| s.contains(p) && !t.contains(p)) {
                    Some((d, e)) => Err(format!("({}, {}) is missing", label(d), label(e))),
                    None => Ok(()),
                }
            }
            Axiom::ConceptProductLhs(c, d, r) => {
                let (c, d, r) = (self.eval(c), self.eval(d), self.role(r));
                for x in (0..self.len()).filter(|&x| c[x]) {
                    for y in (0..self.len()).filter(|&y| d[y]) {
                        if !r.contains(&(x, y)) {
                            return Err(format!("({}, {}) is missing", label(x), label(y)));
                        }
                    }
                }
                Ok(())
            }
            Axiom::ConceptProductRhs(r, c, d) => {
                let (c, d) = (self.eval(c), self.eval(d));
                match self.role(r).into_iter().find(|&(x, y)| !c[x] || !d[y]) {
                    Some((x, y)) => Err(format!("({}, {}) is outside the product", label(x), label(y))),
                    None => Ok(()),
                }
            }
            Axiom::ConceptAssertion(c, a) => {
                let e = self.element(a)?;
                if self.eval(c)[e] {
                    Ok(())
                } else {
                    Err(format!("{a} is not an instance"))
                }
            }
            Axiom::RoleAssertion(r, a, b) => {
                let (d, e) = (self.element(a)?, self.element(b)?);
                if self.role(r).contains(&(d, e)) {
                    Ok(())
                } else {
                    Err(format!("({a}, {b}) is missing"))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelViolation {
    pub axiom: String,
    pub detail: String,
}

/// Axioms of `kb` that the model does not satisfy.
pub fn check_model(model: &RankedModel, kb: &KnowledgeBase) -> Vec<ModelViolation> {
    kb.axioms()
        .filter_map(|ax| {
            model.check_axiom(ax).err().map(|detail| ModelViolation {
                axiom: ax.to_string(),
                detail,
            })
        })
        .collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Builds the ranked model of an answer set.
///
/// Constants equal to a named individual are merged into it. Every other
/// auxiliary constant that is an instance of something becomes two domain
/// elements, so that self-loops on the constant turn into an edge between
/// distinct elements rather than a self-restriction.
pub fn extract_model(a: &AnswerSet) -> RankedModel {
    let p = &**a.program();
    let s = a.state();
    let nc = p.const_count();
    let mut parent: Vec<usize> = (0..nc).collect();
    for x in 0..nc {
        for c in s.insts_of(x).filter(|&c| c >= p.nominal_base) {
            let (rx, rd) = (find(&mut parent, x), find(&mut parent, c - p.nominal_base));
            if rx != rd {
                // keep the smaller id as root so that a named constant represents its class
                let (lo, hi) = (rx.min(rd), rx.max(rd));
                parent[hi] = lo;
            }
        }
    }
    // element -> representative constant
    let mut elems: Vec<ConstId> = vec![];
    let mut labels = vec![];
    let mut of_root = BTreeMap::new();
    let mut copies: BTreeMap<ConstId, [usize; 2]> = BTreeMap::new();
    for x in 0..p.named_count() {
        let r = find(&mut parent, x);
        if let std::collections::btree_map::Entry::Vacant(v) = of_root.entry(r) {
            v.insert(elems.len());
            elems.push(r);
            labels.push(p.const_term(r).to_string());
        }
    }
    for x in p.named_count()..nc {
        if find(&mut parent, x) != x || !s.has_any_inst(x) {
            continue;
        }
        let i = elems.len();
        for tag in ["w1", "w2"] {
            let suffix = if matches!(p.const_term(x), Term::AuxTc(_)) {
                tag.replace('w', "z")
            } else {
                tag.to_string()
            };
            elems.push(x);
            labels.push(format!("{}_{suffix}", p.const_term(x)));
        }
        copies.insert(x, [i, i + 1]);
    }
    let n = elems.len();
    let mut model = RankedModel {
        domain: labels,
        rank: elems.iter().map(|&c| a.rank(c)).collect(),
        ..Default::default()
    };
    for (i, name) in p.facts.named.iter().enumerate() {
        let r = find(&mut parent, i);
        model.individuals.insert(name.clone(), of_root[&r]);
    }
    for c in p.facts.concepts.iter().filter(|c| !c.is_top() && !c.is_bot()) {
        model.concepts.insert(c.clone(), BTreeSet::new());
    }
    for (e, &x) in elems.iter().enumerate() {
        for c in s.insts_of(x).filter(|&c| c < p.nominal_base) {
            let name = &p.facts.concepts[c];
            if !name.is_top() && !name.is_bot() {
                model.concepts.get_mut(name).expect("concept").insert(e);
            }
        }
    }
    let mut roles: Vec<BTreeSet<(usize, usize)>> = (0..p.facts.roles.len())
        .map(|v| {
            let mut pairs = BTreeSet::new();
            for d in 0..n {
                for e in 0..n {
                    let held = if d == e {
                        s.self_role(elems[d], v)
                    } else {
                        s.triple(p, elems[d], v, elems[e])
                    };
                    if held {
                        pairs.insert((d, e));
                    }
                }
            }
            pairs
        })
        .collect();
    close_roles(p, &mut roles);
    for (role, pairs) in p.facts.roles.iter().zip(roles) {
        model.roles.insert(role.clone(), pairs);
    }
    model
}

/// Closes the role relations under role inclusions, chains and conjunctions.
///
/// Splitting a constant into two elements turns a loop into a pair of
/// edges, whose composition under a chain is a loop again.
fn close_roles(p: &Program, roles: &mut [BTreeSet<(usize, usize)>]) {
    loop {
        let mut added = vec![];
        for v in 0..roles.len() {
            for &w in &p.sub_role[v] {
                added.extend(roles[v].difference(&roles[w]).map(|&pair| (w, pair)));
            }
            for &(v2, w) in &p.rconj[v] {
                added.extend(
                    roles[v]
                        .intersection(&roles[v2])
                        .filter(|pair| !roles[w].contains(pair))
                        .map(|&pair| (w, pair)),
                );
            }
            for &(v2, w) in &p.chain_first[v] {
                for &(d, e) in &roles[v] {
                    for &(_, f) in roles[v2].range((e, 0)..=(e, usize::MAX)) {
                        if !roles[w].contains(&(d, f)) {
                            added.push((w, (d, f)));
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            return;
        }
        for (w, pair) in added {
            roles[w].insert(pair);
        }
    }
}
