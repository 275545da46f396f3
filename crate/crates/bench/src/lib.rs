//! Inputs for the criterion benchmarks: the bundled examples with their
//! queries, and replicated copies of the first example.

use typik_core::replicate::{replicate, Dimension};
use typik_core::{fixtures, KnowledgeBase, Query};

/// A named knowledge base with the queries it is benchmarked on.
pub struct Workload {
    pub name: String,
    pub kb: KnowledgeBase,
    pub queries: Vec<Query>,
}

/// The examples that list queries.
pub fn examples() -> Vec<Workload> {
    fixtures::ALL
        .iter()
        .filter_map(|(file, _)| {
            let doc = fixtures::load(file)?;
            (!doc.queries.is_empty()).then(|| Workload {
                name: file.trim_end_matches(".tkb").to_string(),
                kb: doc.kb,
                queries: doc.queries,
            })
        })
        .collect()
}

/// The first example replicated `k` times along `dim`, with its first query.
pub fn replicated(dim: Dimension, k: usize) -> Workload {
    let doc = fixtures::ex1();
    Workload {
        name: format!("{}/{k}", dim.label()),
        kb: replicate(&doc.kb, dim, k),
        queries: doc.queries.into_iter().take(1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_with_queries_are_listed() {
        let names: Vec<String> = examples().into_iter().map(|w| w.name).collect();
        assert_eq!(names, ["ex1", "bob"]);
    }

    #[test]
    fn replication_grows_the_kb() {
        let one = replicated(Dimension::Kb, 1);
        let two = replicated(Dimension::Kb, 2);
        assert_eq!(two.kb.axiom_count(), 2 * one.kb.axiom_count());
        assert_eq!(two.queries.len(), 1);
    }
}
