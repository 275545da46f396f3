//! Splitting a knowledge base into parts over disjoint signatures.
//!
//! Models of such parts combine by disjoint union, so a query only depends
//! on the part sharing its names, provided every other part has a model
//! (and, for the minimal semantics, a T-complete one).

use std::collections::HashMap;

use crate::model::{Axiom, Concept, KnowledgeBase, Query};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Sym<'a> {
    Concept(&'a str),
    Role(&'a str),
    Individual(&'a str),
}

/// Whether ⊤ occurs where it ranges over the elements of every part.
fn mentions_global_top(ax: &Axiom) -> bool {
    fn inner(c: &Concept) -> bool {
        match c {
            Concept::Top => true,
            Concept::Conj(l, r) => inner(l) || inner(r),
            Concept::Exists(_, f) => !matches!(**f, Concept::Top) && inner(f),
            Concept::Typ(a) => inner(a),
            _ => false,
        }
    }
    match ax {
        Axiom::ConceptInclusion(l, r) => inner(l) || (!matches!(r, Concept::Top) && inner(r)),
        _ => ax.concepts().into_iter().any(inner),
    }
}

fn symbols(ax: &Axiom) -> Vec<Sym<'_>> {
    let mut out: Vec<Sym> = ax
        .concept_names()
        .into_iter()
        .map(|c| Sym::Concept(c.as_str()))
        .collect();
    out.extend(ax.roles().into_iter().map(|r| Sym::Role(r.as_str())));
    out.extend(ax.individuals().into_iter().map(|a| Sym::Individual(a.as_str())));
    out
}

fn intern<'a>(s: Sym<'a>, ids: &mut HashMap<Sym<'a>, usize>) -> usize {
    let n = ids.len();
    *ids.entry(s).or_insert(n)
}

fn union(a: usize, b: usize, parent: &mut [usize]) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The part of `kb` connected to `query` and the remaining parts.
///
/// Returns `None` when the KB does not split: some axiom or the query uses
/// ⊤ globally, or everything is connected to the query.
pub fn split(kb: &KnowledgeBase, query: &Query) -> Option<(KnowledgeBase, Vec<KnowledgeBase>)> {
    let axioms: Vec<&Axiom> = kb.axioms().collect();
    let typical_top = matches!(query, Query::Typ { concept, .. } if concept.is_top());
    if typical_top || axioms.iter().any(|a| mentions_global_top(a)) {
        return None;
    }
    let mut ids: HashMap<Sym, usize> = HashMap::new();
    let q_ind = intern(Sym::Individual(query.individual().as_str()), &mut ids);
    let q_con = intern(Sym::Concept(query.concept().as_str()), &mut ids);
    let ax_syms: Vec<Vec<usize>> = axioms
        .iter()
        .map(|a| symbols(a).into_iter().map(|s| intern(s, &mut ids)).collect())
        .collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    union(q_ind, q_con, &mut parent);
    for syms in &ax_syms {
        for w in syms.windows(2) {
            union(w[0], w[1], &mut parent);
        }
    }
    let q_root = find(&mut parent, q_ind);
    let mut query_part = KnowledgeBase::new();
    let mut others: Vec<(usize, KnowledgeBase)> = vec![];
    for (ax, syms) in axioms.iter().zip(&ax_syms) {
        let root = match syms.first() {
            Some(&s) => find(&mut parent, s),
            // symbol-free axioms stay with the query
            None => q_root,
        };
        let part = if root == q_root {
            &mut query_part
        } else {
            match others.iter().position(|(r, _)| *r == root) {
                Some(i) => &mut others[i].1,
                None => {
                    others.push((root, KnowledgeBase::new()));
                    &mut others.last_mut().expect("pushed").1
                }
            }
        };
        part.push_declaring((*ax).clone());
    }
    if others.is_empty() {
        return None;
    }
    query_part.signature.declare_individual(query.individual().clone());
    if !query.concept().is_top() && !query.concept().is_bot() {
        query_part.signature.declare_concept(query.concept().clone());
    }
    Some((query_part, others.into_iter().map(|(_, kb)| kb).collect()))
}
