use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::bits::BitMatrix;
use super::program::{ClassId, ConstId, Program, RoleId, TcId};

/// Order in which pending derivations are processed.
pub enum Schedule {
    Fifo,
    /// Pops a uniformly random pending derivation.
    Random(Box<ChaCha8Rng>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fact {
    Inst(ConstId, ClassId),
    NegInst(ConstId, TcId),
    Typ(ConstId, TcId),
    Triple(ConstId, RoleId, ConstId),
    SelfR(ConstId, RoleId),
    Rank(ConstId, u8),
    Box(TcId, u8),
    NegBox(TcId, u8),
}

/// Derived atoms of a partial guess, closed under the program rules once
/// [`State::saturate`] returns.
#[derive(Clone, Debug)]
pub struct State {
    inst: BitMatrix,
    inst_col: BitMatrix,
    neg_inst: BitMatrix,
    typ: BitMatrix,
    trip_out: BitMatrix,
    trip_in: BitMatrix,
    selfr: BitMatrix,
    rank: Vec<Option<u8>>,
    at_rank: Vec<Vec<ConstId>>,
    boxes: Vec<u128>,
    neg_boxes: Vec<u128>,
    conflict: bool,
    queue: VecDeque<Fact>,
}

fn highest(mask: u128) -> Option<u8> {
    (mask != 0).then(|| 127 - mask.leading_zeros() as u8)
}

fn lowest(mask: u128) -> Option<u8> {
    (mask != 0).then(|| mask.trailing_zeros() as u8)
}

impl State {
    pub(crate) fn new(p: &Program) -> State {
        let (nc, ncl, nr, ntc) = (p.n_consts, p.n_classes, p.n_roles, p.tc_count());
        State {
            inst: BitMatrix::new(nc, ncl),
            inst_col: BitMatrix::new(ncl, nc),
            neg_inst: BitMatrix::new(nc, ntc),
            typ: BitMatrix::new(nc, ntc),
            trip_out: BitMatrix::new(nr * nc, nc),
            trip_in: BitMatrix::new(nr * nc, nc),
            selfr: BitMatrix::new(nc, nr),
            rank: vec![None; nc],
            at_rank: vec![vec![]; p.n as usize + 1],
            boxes: vec![0; ntc],
            neg_boxes: vec![0; ntc],
            conflict: false,
            queue: VecDeque::new(),
        }
    }

    pub fn is_conflict(&self) -> bool {
        self.conflict
    }

    pub fn inst(&self, x: ConstId, c: ClassId) -> bool {
        self.inst.get(x, c)
    }

    pub fn insts_of(&self, x: ConstId) -> impl Iterator<Item = ClassId> + '_ {
        self.inst.row(x)
    }

    pub fn has_any_inst(&self, x: ConstId) -> bool {
        !self.inst.row_is_empty(x)
    }

    pub fn neg_inst(&self, x: ConstId, k: TcId) -> bool {
        self.neg_inst.get(x, k)
    }

    pub fn neg_insts_of(&self, x: ConstId) -> impl Iterator<Item = TcId> + '_ {
        self.neg_inst.row(x)
    }

    pub fn typ(&self, x: ConstId, k: TcId) -> bool {
        self.typ.get(x, k)
    }

    pub fn typs_of(&self, x: ConstId) -> impl Iterator<Item = TcId> + '_ {
        self.typ.row(x)
    }

    pub fn triple(&self, p: &Program, x: ConstId, v: RoleId, y: ConstId) -> bool {
        self.trip_out.get(v * p.n_consts + x, y)
    }

    pub fn successors<'a>(&'a self, p: &Program, x: ConstId, v: RoleId) -> impl Iterator<Item = ConstId> + 'a {
        self.trip_out.row(v * p.n_consts + x)
    }

    pub fn self_role(&self, x: ConstId, v: RoleId) -> bool {
        self.selfr.get(x, v)
    }

    pub fn rank(&self, x: ConstId) -> Option<u8> {
        self.rank[x]
    }

    pub fn box_mask(&self, k: TcId) -> u128 {
        self.boxes[k]
    }

    pub fn neg_box_mask(&self, k: TcId) -> u128 {
        self.neg_boxes[k]
    }

    /// Largest `h` with `box_neg(h, C_k)`.
    pub fn max_box(&self, k: TcId) -> Option<u8> {
        highest(self.boxes[k])
    }

    /// Smallest `h` with `-box_neg(h, C_k)`.
    pub fn min_neg_box(&self, k: TcId) -> Option<u8> {
        lowest(self.neg_boxes[k])
    }

    /// Whether `aux_k` is in `C_k`: `Some(true)`, `Some(false)` for the
    /// strong negation, `None` while undecided.
    pub fn aux_inst(&self, p: &Program, k: TcId) -> Option<bool> {
        let a = p.tc_const(k);
        if self.inst.get(a, p.tc_class[k]) {
            Some(true)
        } else if self.neg_inst.get(a, k) {
            Some(false)
        } else {
            None
        }
    }

    /// Bitmask of ranks taken by decided constants.
    pub fn used_ranks(&self) -> u128 {
        self.at_rank
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .fold(0, |m, (h, _)| m | 1u128 << h)
    }

    fn push(&mut self, f: Fact) {
        if !self.conflict {
            self.queue.push_back(f);
        }
    }

    pub(crate) fn add_inst(&mut self, p: &Program, x: ConstId, c: ClassId) {
        if self.inst.set(x, c) {
            self.inst_col.set(c, x);
            if p.bots[c] {
                self.conflict = true;
            }
            if let Some(k) = p.tc_of_class[c] {
                if self.neg_inst.get(x, k) {
                    self.conflict = true;
                }
            }
            self.push(Fact::Inst(x, c));
        }
    }

    pub(crate) fn add_neg_inst(&mut self, p: &Program, x: ConstId, k: TcId) {
        if self.neg_inst.set(x, k) {
            if self.inst.get(x, p.tc_class[k]) {
                self.conflict = true;
            }
            self.push(Fact::NegInst(x, k));
        }
    }

    fn add_typ(&mut self, x: ConstId, k: TcId) {
        if self.typ.set(x, k) {
            self.push(Fact::Typ(x, k));
        }
    }

    fn add_triple(&mut self, p: &Program, x: ConstId, v: RoleId, y: ConstId) {
        if self.trip_out.set(v * p.n_consts + x, y) {
            self.trip_in.set(v * p.n_consts + y, x);
            self.push(Fact::Triple(x, v, y));
        }
    }

    fn add_self(&mut self, x: ConstId, v: RoleId) {
        if self.selfr.set(x, v) {
            self.push(Fact::SelfR(x, v));
        }
    }

    pub(crate) fn add_rank(&mut self, p: &Program, x: ConstId, h: u8) {
        match self.rank[x] {
            Some(r) if r == h => {}
            Some(_) => self.conflict = true,
            None => {
                if h > p.n {
                    self.conflict = true;
                    return;
                }
                self.rank[x] = Some(h);
                self.at_rank[h as usize].push(x);
                self.push(Fact::Rank(x, h));
            }
        }
    }

    fn add_box(&mut self, k: TcId, h: u8) {
        let bit = 1u128 << h;
        if self.boxes[k] & bit == 0 {
            self.boxes[k] |= bit;
            if self.neg_boxes[k] & bit != 0 {
                self.conflict = true;
            }
            self.push(Fact::Box(k, h));
        }
    }

    fn add_neg_box(&mut self, p: &Program, k: TcId, h: u8) {
        let bit = 1u128 << h;
        if self.neg_boxes[k] & bit == 0 {
            self.neg_boxes[k] |= bit;
            if self.boxes[k] & bit != 0 {
                self.conflict = true;
            }
            if matches!(self.rank[p.tc_const(k)], Some(r) if h <= r) {
                self.conflict = true;
            }
            self.push(Fact::NegBox(k, h));
        }
    }

    /// Runs all pending derivations to a fixpoint or the first clash.
    pub fn saturate(&mut self, p: &Program, schedule: &mut Schedule) {
        loop {
            if self.conflict {
                self.queue.clear();
                return;
            }
            let next = match schedule {
                Schedule::Fifo => self.queue.pop_front(),
                Schedule::Random(rng) => {
                    if self.queue.is_empty() {
                        None
                    } else {
                        let i = rng.random_range(0..self.queue.len());
                        self.queue.swap_remove_back(i)
                    }
                }
            };
            match next {
                Some(f) => self.process(p, f),
                None => return,
            }
        }
    }

    fn process(&mut self, p: &Program, fact: Fact) {
        match fact {
            Fact::Inst(x, c) => self.on_inst(p, x, c),
            Fact::NegInst(x, k) => {
                if x == p.tc_const(k) {
                    self.add_box(k, p.n);
                }
            }
            Fact::Typ(x, k) => {
                self.add_inst(p, x, p.tc_class[k]);
                for &z in &p.sub_typ[k] {
                    self.add_inst(p, x, z);
                }
                if let Some(h) = self.rank[x] {
                    self.add_box(k, h);
                }
            }
            Fact::Triple(x, v, y) => self.on_triple(p, x, v, y),
            Fact::SelfR(x, v) => self.on_self(p, x, v),
            Fact::Rank(x, h) => self.on_rank(p, x, h),
            Fact::Box(k, h) => {
                if h >= 1 {
                    self.add_box(k, h - 1);
                    let below = self.at_rank[h as usize - 1].clone();
                    for x in below {
                        self.add_neg_inst(p, x, k);
                    }
                }
                let here = self.at_rank[h as usize].clone();
                for x in here {
                    if self.inst.get(x, p.tc_class[k]) {
                        self.add_typ(x, k);
                    }
                }
            }
            Fact::NegBox(k, h) => {
                if h < p.n {
                    self.add_neg_box(p, k, h + 1);
                }
            }
        }
    }

    fn on_inst(&mut self, p: &Program, x: ConstId, c: ClassId) {
        let nc = p.n_consts;
        for &z in &p.tops {
            self.add_inst(p, x, z);
        }
        for &z in &p.sub_class[c] {
            self.add_inst(p, x, z);
        }
        for &(o, z) in &p.sub_conj[c] {
            if self.inst.get(x, o) {
                self.add_inst(p, x, z);
            }
        }
        for &(v, z) in &p.sub_ex_by_filler[c] {
            let preds: Vec<_> = self.trip_in.row(v * nc + x).collect();
            for x0 in preds {
                self.add_inst(p, x0, z);
            }
            if self.selfr.get(x, v) {
                self.add_inst(p, x, z);
            }
        }
        for &(v, z, w) in &p.sup_ex[c] {
            self.add_triple(p, x, v, w);
            self.add_inst(p, w, z);
        }
        for &v in &p.sup_self[c] {
            self.add_self(x, v);
        }
        for &(y2, w) in &p.prod_first[c] {
            let others: Vec<_> = self.inst_col.row(y2).collect();
            for x1 in others {
                self.add_triple(p, x, w, x1);
            }
            if self.inst.get(x, y2) {
                self.add_self(x, w);
            }
        }
        for &(y1, w) in &p.prod_second[c] {
            let others: Vec<_> = self.inst_col.row(y1).collect();
            for x0 in others {
                self.add_triple(p, x0, w, x);
            }
            if self.inst.get(x, y1) {
                self.add_self(x, w);
            }
        }
        if c >= p.nominal_base {
            // x is equal to the named constant d
            let d = c - p.nominal_base;
            let xs: Vec<_> = self.inst.row(x).collect();
            for z in xs {
                self.add_inst(p, d, z);
            }
            let ds: Vec<_> = self.inst.row(d).collect();
            for z in ds {
                self.add_inst(p, x, z);
            }
            for u in 0..p.n_roles {
                let preds: Vec<_> = self.trip_in.row(u * nc + x).collect();
                for z in preds {
                    self.add_triple(p, z, u, d);
                }
            }
            if let Some(h) = self.rank[x] {
                self.add_rank(p, d, h);
            }
        }
        let noms: Vec<_> = self.inst.row_range(x, p.nominal_base..p.n_classes).collect();
        for nc_ in noms {
            self.add_inst(p, nc_ - p.nominal_base, c);
        }
        if p.is_named(x) {
            let equal: Vec<_> = self.inst_col.row(p.nominal_class(x)).collect();
            for x0 in equal {
                self.add_inst(p, x0, c);
            }
        }
        for &k in &p.sup_typ[c] {
            self.add_typ(x, k);
        }
        if let Some(k) = p.tc_of_class[c] {
            let aux = p.tc_const(k);
            self.add_inst(p, aux, c);
            if let Some(h) = self.rank[x] {
                if self.boxes[k] >> h & 1 == 1 {
                    self.add_typ(x, k);
                }
                if x == aux {
                    self.add_neg_box(p, k, h + 1);
                }
            }
        }
    }

    fn on_triple(&mut self, p: &Program, x: ConstId, v: RoleId, y: ConstId) {
        let nc = p.n_consts;
        if x == y && p.is_named(x) {
            self.add_self(x, v);
        }
        for &(f, z) in &p.sub_ex_by_role[v] {
            if self.inst.get(y, f) {
                self.add_inst(p, x, z);
            }
        }
        for &w in &p.sub_role[v] {
            self.add_triple(p, x, w, y);
        }
        for &(v2, w) in &p.chain_first[v] {
            let next: Vec<_> = self.trip_out.row(v2 * nc + y).collect();
            for x2 in next {
                self.add_triple(p, x, w, x2);
            }
            if self.selfr.get(y, v2) {
                self.add_triple(p, x, w, y);
            }
        }
        for &(u, w) in &p.chain_second[v] {
            let prev: Vec<_> = self.trip_in.row(u * nc + x).collect();
            for x0 in prev {
                self.add_triple(p, x0, w, y);
            }
            if self.selfr.get(x, u) {
                self.add_triple(p, x, w, y);
            }
        }
        for &(v2, w) in &p.rconj[v] {
            if self.trip_out.get(v2 * nc + x, y) {
                self.add_triple(p, x, w, y);
            }
        }
        for &(z1, z2) in &p.sup_prod[v] {
            self.add_inst(p, x, z1);
            self.add_inst(p, y, z2);
        }
        let noms: Vec<_> = self.inst.row_range(y, p.nominal_base..p.n_classes).collect();
        for c in noms {
            self.add_triple(p, x, v, c - p.nominal_base);
        }
    }

    fn on_self(&mut self, p: &Program, x: ConstId, v: RoleId) {
        let nc = p.n_consts;
        for &(f, z) in &p.sub_ex_by_role[v] {
            if self.inst.get(x, f) {
                self.add_inst(p, x, z);
            }
        }
        for &z in &p.sub_self[v] {
            self.add_inst(p, x, z);
        }
        for &w in &p.sub_role[v] {
            self.add_self(x, w);
        }
        for &(v2, w) in &p.chain_first[v] {
            let next: Vec<_> = self.trip_out.row(v2 * nc + x).collect();
            for x1 in next {
                self.add_triple(p, x, w, x1);
            }
            if self.selfr.get(x, v2) {
                self.add_triple(p, x, w, x);
            }
        }
        for &(u, w) in &p.chain_second[v] {
            let prev: Vec<_> = self.trip_in.row(u * nc + x).collect();
            for x0 in prev {
                self.add_triple(p, x0, w, x);
            }
            if self.selfr.get(x, u) {
                self.add_triple(p, x, w, x);
            }
        }
        for &(v2, w) in &p.rconj[v] {
            if self.selfr.get(x, v2) {
                self.add_self(x, w);
            }
        }
        for &(z1, z2) in &p.sup_prod[v] {
            self.add_inst(p, x, z1);
            self.add_inst(p, x, z2);
        }
    }

    fn on_rank(&mut self, p: &Program, x: ConstId, h: u8) {
        for k in 0..p.tc_count() {
            if self.boxes[k] >> (h + 1) & 1 == 1 {
                self.add_neg_inst(p, x, k);
            }
            if self.boxes[k] >> h & 1 == 1 && self.inst.get(x, p.tc_class[k]) {
                self.add_typ(x, k);
            }
        }
        let typs: Vec<_> = self.typ.row(x).collect();
        for k in typs {
            self.add_box(k, h);
        }
        let noms: Vec<_> = self.inst.row_range(x, p.nominal_base..p.n_classes).collect();
        for c in noms {
            self.add_rank(p, c - p.nominal_base, h);
        }
        if x >= p.tc_const(0) && p.tc_count() > 0 {
            let k = x - p.tc_const(0);
            self.add_box(k, h);
            if self.inst.get(x, p.tc_class[k]) {
                self.add_neg_box(p, k, h + 1);
            }
            if self.neg_boxes[k] & ((2u128 << h) - 1) != 0 {
                self.conflict = true;
            }
        }
    }
}
