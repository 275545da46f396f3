use std::ops::ControlFlow;
use std::sync::Arc;
use std::time::Instant;

use super::answer_set::AnswerSet;
use super::program::{ClassId, ConstId, Program, TcId};
use super::state::{Schedule, State};
use super::EngineError;

/// An atom that must not be derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Inst(ConstId, ClassId),
    Typ(ConstId, TcId),
}

impl Probe {
    fn holds(self, s: &State) -> bool {
        match self {
            Probe::Inst(x, c) => s.inst(x, c),
            Probe::Typ(x, k) => s.typ(x, k),
        }
    }
}

/// Requires `rank(c) < bound` for at least one listed pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Escape(pub Vec<(ConstId, u8)>);

/// Restrictions on which answer sets a search visits.
#[derive(Clone, Debug)]
pub struct Constraints {
    /// Allowed ranks per constant.
    pub domains: Vec<u128>,
    /// Forced value of `inst(aux_k, C_k)` per typicality argument.
    pub aux: Vec<Option<bool>>,
    pub absent: Vec<Probe>,
    pub escapes: Vec<Escape>,
}

impl Constraints {
    pub fn unrestricted(p: &Program) -> Constraints {
        let all = (2u128 << p.n) - 1;
        Constraints {
            domains: vec![all; p.const_count()],
            aux: vec![None; p.tc_count()],
            absent: vec![],
            escapes: vec![],
        }
    }

    /// Fixes the rank of `c`.
    pub fn fix_rank(&mut self, c: ConstId, h: u32) {
        self.domains[c] &= 1u128.checked_shl(h).unwrap_or(0);
    }

    /// Bounds the rank of `c` from above.
    pub fn cap_rank(&mut self, c: ConstId, h: u32) {
        self.domains[c] &= 1u128.checked_shl(h + 1).map_or(u128::MAX, |b| b - 1);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Lexicographic over the guess: auxiliary memberships (false first),
    /// then ranks in constant order.
    Canonical,
    /// Decides typicality constants first and defers unconstrained
    /// constants. Only the first answer set is meaningful.
    Heuristic,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub answer_sets: u64,
}

pub struct Search<'a> {
    program: &'a Arc<Program>,
    constraints: &'a Constraints,
    order: Order,
    budget: Budget,
    stats: SearchStats,
}

struct Node {
    state: State,
    domains: Vec<u128>,
}

enum Choice {
    Aux(TcId),
    Rank(ConstId, u128),
    Fill(Vec<ConstId>),
    Leaf,
}

fn highest(mask: u128) -> u32 {
    127 - mask.leading_zeros()
}

impl<'a> Search<'a> {
    pub fn new(program: &'a Arc<Program>, constraints: &'a Constraints, order: Order, budget: Budget) -> Self {
        Search {
            program,
            constraints,
            order,
            budget,
            stats: SearchStats::default(),
        }
    }

    pub fn first(mut self) -> Result<Option<AnswerSet>, EngineError> {
        let mut found = None;
        self.run(&mut |a| {
            found = Some(a);
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// Visits answer sets until the visitor breaks.
    pub fn for_each(mut self, visit: &mut dyn FnMut(AnswerSet) -> ControlFlow<()>) -> Result<SearchStats, EngineError> {
        self.run(visit)?;
        Ok(self.stats)
    }

    fn run(&mut self, visit: &mut dyn FnMut(AnswerSet) -> ControlFlow<()>) -> Result<(), EngineError> {
        let p = &**self.program;
        let mut state = p.root().clone();
        for (k, v) in self.constraints.aux.iter().enumerate() {
            match v {
                Some(true) => state.add_inst(p, p.tc_const(k), p.tc_class[k]),
                Some(false) => state.add_neg_inst(p, p.tc_const(k), k),
                None => {}
            }
        }
        let node = Node {
            state,
            domains: self.constraints.domains.clone(),
        };
        let _ = self.explore(node, visit)?;
        Ok(())
    }

    fn tick(&mut self) -> Result<(), EngineError> {
        self.stats.nodes += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.stats.nodes > max {
                return Err(EngineError::BudgetExceeded {
                    nodes: self.stats.nodes,
                });
            }
        }
        if let Some(deadline) = self.budget.deadline {
            if self.stats.nodes % 256 == 1 && Instant::now() > deadline {
                return Err(EngineError::BudgetExceeded {
                    nodes: self.stats.nodes,
                });
            }
        }
        Ok(())
    }

    fn explore(
        &mut self,
        mut node: Node,
        visit: &mut dyn FnMut(AnswerSet) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, EngineError> {
        self.tick()?;
        if !self.propagate(&mut node) {
            return Ok(ControlFlow::Continue(()));
        }
        let p = &**self.program;
        match self.choose(&node) {
            Choice::Leaf => {
                if self.is_leaf_valid(&node.state) {
                    self.stats.answer_sets += 1;
                    return Ok(visit(AnswerSet::new(self.program.clone(), node.state)));
                }
                Ok(ControlFlow::Continue(()))
            }
            Choice::Aux(k) => {
                let values = match self.order {
                    Order::Canonical => [false, true],
                    Order::Heuristic => [true, false],
                };
                for v in values {
                    let mut child = Node {
                        state: node.state.clone(),
                        domains: node.domains.clone(),
                    };
                    if v {
                        child.state.add_inst(p, p.tc_const(k), p.tc_class[k]);
                    } else {
                        child.state.add_neg_inst(p, p.tc_const(k), k);
                    }
                    if self.explore(child, visit)?.is_break() {
                        return Ok(ControlFlow::Break(()));
                    }
                }
                Ok(ControlFlow::Continue(()))
            }
            Choice::Rank(x, mut dom) => {
                while dom != 0 {
                    let h = dom.trailing_zeros() as u8;
                    dom &= dom - 1;
                    let mut child = Node {
                        state: node.state.clone(),
                        domains: node.domains.clone(),
                    };
                    child.state.add_rank(p, x, h);
                    if self.explore(child, visit)?.is_break() {
                        return Ok(ControlFlow::Break(()));
                    }
                }
                Ok(ControlFlow::Continue(()))
            }
            Choice::Fill(free) => {
                if let Some(filled) = self.fill(&node, &free) {
                    if self.explore(filled, visit)?.is_break() {
                        return Ok(ControlFlow::Break(()));
                    }
                    // the filled completion is not an answer set; search exhaustively
                }
                let x = free[0];
                let mut dom = self.filtered(&node, x);
                while dom != 0 {
                    let h = dom.trailing_zeros() as u8;
                    dom &= dom - 1;
                    let mut child = Node {
                        state: node.state.clone(),
                        domains: node.domains.clone(),
                    };
                    child.state.add_rank(p, x, h);
                    if self.explore(child, visit)?.is_break() {
                        return Ok(ControlFlow::Break(()));
                    }
                }
                Ok(ControlFlow::Continue(()))
            }
        }
    }

    /// Saturates and applies domain filtering until nothing changes.
    fn propagate(&self, node: &mut Node) -> bool {
        let p = &**self.program;
        loop {
            node.state.saturate(p, &mut Schedule::Fifo);
            if node.state.is_conflict() {
                return false;
            }
            let mut changed = false;
            for x in 0..p.const_count() {
                match node.state.rank(x) {
                    Some(h) => {
                        if node.domains[x] >> h & 1 == 0 {
                            return false;
                        }
                    }
                    None => {
                        let d = self.filtered(node, x);
                        if d == 0 {
                            return false;
                        }
                        node.domains[x] = d;
                        if d.is_power_of_two() {
                            node.state.add_rank(p, x, d.trailing_zeros() as u8);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let s = &node.state;
        if self.constraints.absent.iter().any(|pr| pr.holds(s)) {
            return false;
        }
        for (k, v) in self.constraints.aux.iter().enumerate() {
            if let Some(v) = v {
                if s.aux_inst(p, k) == Some(!v) {
                    return false;
                }
            }
        }
        for Escape(pairs) in &self.constraints.escapes {
            let open = pairs.iter().any(|&(c, bound)| {
                let min = match s.rank(c) {
                    Some(h) => h as u32,
                    None => node.domains[c].trailing_zeros(),
                };
                min < bound as u32
            });
            if !open {
                return false;
            }
        }
        let used = s.used_ranks();
        if used != 0 {
            let top = highest(used);
            let gaps = top + 1 - used.count_ones();
            let undecided = (0..p.const_count()).filter(|&x| s.rank(x).is_none()).count() as u32;
            if gaps > undecided {
                return false;
            }
        }
        true
    }

    /// Ranks still open for an undecided constant.
    fn filtered(&self, node: &Node, x: ConstId) -> u128 {
        let p = &**self.program;
        let s = &node.state;
        let mut d = node.domains[x];
        let at_least = |h: u8| !((1u128 << h) - 1);
        let below = |h: u8| (1u128 << h) - 1;
        for c in s.insts_of(x) {
            if let Some(k) = p.tc_of_class[c] {
                if let Some(m) = s.max_box(k) {
                    d &= at_least(m);
                }
            }
            if c >= p.nominal_base {
                if let Some(r) = s.rank(c - p.nominal_base) {
                    d &= 1u128 << r;
                }
            }
        }
        for k in s.typs_of(x) {
            if let Some(m) = s.min_neg_box(k) {
                d &= below(m);
            }
        }
        if p.tc_count() > 0 && x >= p.tc_const(0) {
            if let Some(m) = s.min_neg_box(x - p.tc_const(0)) {
                d &= below(m);
            }
        }
        d
    }

    fn choose(&self, node: &Node) -> Choice {
        let p = &**self.program;
        let s = &node.state;
        if let Some(k) = (0..p.tc_count()).find(|&k| s.aux_inst(p, k).is_none()) {
            return Choice::Aux(k);
        }
        let undecided = (0..p.const_count()).filter(|&x| s.rank(x).is_none());
        match self.order {
            Order::Canonical => match undecided.clone().next() {
                Some(x) => Choice::Rank(x, node.domains[x]),
                None => Choice::Leaf,
            },
            Order::Heuristic => {
                let tc_first = (0..p.tc_count()).map(|k| p.tc_const(k)).find(|&x| s.rank(x).is_none());
                if let Some(x) = tc_first {
                    return Choice::Rank(x, node.domains[x]);
                }
                let (bound, free): (Vec<_>, Vec<_>) = undecided.partition(|&x| s.has_any_inst(x));
                if let Some(x) = bound.into_iter().min_by_key(|&x| (node.domains[x].count_ones(), x)) {
                    return Choice::Rank(x, node.domains[x]);
                }
                if free.is_empty() {
                    Choice::Leaf
                } else {
                    Choice::Fill(free)
                }
            }
        }
    }

    /// Places constants without memberships into rank gaps, the rest at
    /// their lowest allowed rank.
    fn fill(&self, node: &Node, free: &[ConstId]) -> Option<Node> {
        let p = &**self.program;
        let mut child = Node {
            state: node.state.clone(),
            domains: node.domains.clone(),
        };
        let used = child.state.used_ranks();
        let mut gaps: Vec<u8> = if used == 0 {
            vec![]
        } else {
            (0..highest(used) as u8).filter(|h| used >> h & 1 == 0).collect()
        };
        for &x in free {
            let dom = node.domains[x];
            let h = match gaps.iter().position(|g| dom >> g & 1 == 1) {
                Some(i) => gaps.remove(i),
                None if dom != 0 => dom.trailing_zeros() as u8,
                None => return None,
            };
            child.state.add_rank(p, x, h);
        }
        Some(child)
    }

    fn is_leaf_valid(&self, s: &State) -> bool {
        let used = s.used_ranks();
        used & used.wrapping_add(1) == 0
    }
}
