//! Reason-set propagation over a hash-consed view of the formula.

use std::collections::HashMap;

use crate::formula::{Constraint, Formula, Rel};
use crate::poly::Sign;
use crate::ralg::{sign_at, RealAlgebraic};

pub(crate) type Reason = Vec<u32>;

/// A subsumption-free set of reasons.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ReasonSet(pub(crate) Vec<Reason>);

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

fn merge(a: &[u32], b: &[u32]) -> Reason {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

impl ReasonSet {
    pub(crate) fn unconditional() -> Self {
        ReasonSet(vec![Vec::new()])
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Inserts `r` unless subsumed; returns whether the set changed.
    pub(crate) fn insert(&mut self, r: Reason, budget: usize) -> bool {
        if self.0.iter().any(|e| is_subset(e, &r)) {
            return false;
        }
        if self.0.len() >= budget {
            return false;
        }
        self.0.retain(|e| !is_subset(&r, e));
        self.0.push(r);
        true
    }

    pub(crate) fn extend(&mut self, other: &ReasonSet, budget: usize) -> bool {
        let mut changed = false;
        for r in &other.0 {
            changed |= self.insert(r.clone(), budget);
        }
        changed
    }

    pub(crate) fn product(&self, other: &ReasonSet, budget: usize) -> ReasonSet {
        let mut out = ReasonSet::default();
        for a in &self.0 {
            for b in &other.0 {
                out.insert(merge(a, b), budget);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Ref {
    pub(crate) node: usize,
    pub(crate) neg: bool,
}

impl Ref {
    pub(crate) fn negate(self) -> Ref {
        Ref {
            node: self.node,
            neg: !self.neg,
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    /// Canonical atom with relation `=`, `<` or `>`.
    Atom(Constraint),
    /// Extended atoms never enter reasons.
    Opaque,
    Const(bool),
    And(Vec<Ref>),
    Or(Vec<Ref>),
}

#[derive(Clone, Debug)]
struct Node {
    kind: Kind,
    size: usize,
}

/// Formula graph plus the literal table.
pub(crate) struct Graph {
    nodes: Vec<Node>,
    memo: HashMap<Formula, Ref>,
    atoms: HashMap<Constraint, usize>,
    pub(crate) root: Ref,
    /// Preprocessing clauses, always true.
    clauses: Vec<usize>,
    pub(crate) literals: Vec<Constraint>,
    literal_ids: HashMap<Constraint, u32>,
}

/// Splits a constraint into a canonical atom and a polarity.
fn canonical(c: &Constraint) -> (Constraint, bool) {
    let (rel, pos) = match c.rel {
        Rel::Eq => (Rel::Eq, true),
        Rel::Ne => (Rel::Eq, false),
        Rel::Lt => (Rel::Lt, true),
        Rel::Ge => (Rel::Lt, false),
        Rel::Gt => (Rel::Gt, true),
        Rel::Le => (Rel::Gt, false),
    };
    (
        Constraint {
            poly: c.poly.clone(),
            rel,
        },
        pos,
    )
}

impl Graph {
    pub(crate) fn new(f: &Formula) -> Graph {
        let mut g = Graph {
            nodes: Vec::new(),
            memo: HashMap::new(),
            atoms: HashMap::new(),
            root: Ref { node: 0, neg: false },
            clauses: Vec::new(),
            literals: Vec::new(),
            literal_ids: HashMap::new(),
        };
        g.root = g.build(f);
        g.add_clauses();
        g
    }

    fn push(&mut self, kind: Kind, size: usize) -> usize {
        self.nodes.push(Node { kind, size });
        self.nodes.len() - 1
    }

    fn build(&mut self, f: &Formula) -> Ref {
        if let Formula::Atom(c) = f {
            let (atom, pos) = canonical(c);
            let node = match self.atoms.get(&atom) {
                Some(&n) => n,
                None => {
                    let n = self.push(Kind::Atom(atom.clone()), 1);
                    self.atoms.insert(atom, n);
                    n
                }
            };
            return Ref { node, neg: !pos };
        }
        if let Some(&r) = self.memo.get(f) {
            return r;
        }
        let r = match f {
            Formula::True => Ref {
                node: self.push(Kind::Const(true), 1),
                neg: false,
            },
            Formula::False => Ref {
                node: self.push(Kind::Const(false), 1),
                neg: false,
            },
            Formula::Not(b) => self.build(b).negate(),
            Formula::And(cs) | Formula::Or(cs) => {
                let children: Vec<Ref> = cs.iter().map(|c| self.build(c)).collect();
                let kind = if matches!(f, Formula::And(_)) {
                    Kind::And(children)
                } else {
                    Kind::Or(children)
                };
                Ref {
                    node: self.push(kind, f.size()),
                    neg: false,
                }
            }
            Formula::Root(_) => Ref {
                node: self.push(Kind::Opaque, 1),
                neg: false,
            },
            Formula::Atom(_) => unreachable!(),
            Formula::Exists(..) | Formula::Forall(..) => {
                panic!("implicants require a quantifier-free matrix")
            }
        };
        self.memo.insert(f.clone(), r);
        r
    }

    /// Mutual exclusion among `p<0`, `p=0`, `p>0` and trichotomy when all
    /// three occur.
    fn add_clauses(&mut self) {
        let mut by_poly: HashMap<_, Vec<(Rel, usize)>> = HashMap::new();
        let mut atoms: Vec<(&Constraint, &usize)> = self.atoms.iter().collect();
        atoms.sort();
        for (c, &n) in atoms {
            by_poly.entry(c.poly.clone()).or_default().push((c.rel, n));
        }
        let mut groups: Vec<_> = by_poly.into_iter().collect();
        groups.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, group) in groups {
            for i in 0..group.len() {
                for j in i + 1..group.len() {
                    let a = Ref { node: group[i].1, neg: true };
                    let b = Ref { node: group[j].1, neg: true };
                    let n = self.push(Kind::Or(vec![a, b]), 3);
                    self.clauses.push(n);
                }
            }
            if group.len() == 3 {
                let refs = group.iter().map(|(_, n)| Ref { node: *n, neg: false }).collect();
                let n = self.push(Kind::Or(refs), 4);
                self.clauses.push(n);
            }
        }
    }

    /// Looks up a subformula (or the negation of one).
    pub(crate) fn lookup(&self, f: &Formula) -> Option<Ref> {
        match f {
            Formula::Atom(c) => {
                let (atom, pos) = canonical(c);
                self.atoms.get(&atom).map(|&node| Ref { node, neg: !pos })
            }
            Formula::Not(b) => self.lookup(b).map(Ref::negate),
            _ => self.memo.get(f).copied(),
        }
    }

    fn literal(&mut self, c: Constraint) -> u32 {
        if let Some(&id) = self.literal_ids.get(&c) {
            return id;
        }
        let id = self.literals.len() as u32;
        self.literals.push(c.clone());
        self.literal_ids.insert(c, id);
        id
    }

    /// Sign-based truth of every atom of level at most `s.len()`.
    pub(crate) fn evaluate_atoms(&self, s: &[RealAlgebraic]) -> Vec<Option<bool>> {
        let mut out = vec![None; self.nodes.len()];
        for n in 0..self.nodes.len() {
            if let Kind::Atom(c) = &self.nodes[n].kind {
                if c.level() <= s.len() {
                    let sign: Sign = sign_at(&c.poly, s);
                    out[n] = Some(c.rel.holds(sign));
                }
            }
        }
        out
    }

    pub(crate) fn state(&mut self, truth: &[Option<bool>], budget: usize) -> State {
        let mut st = State {
            t: vec![ReasonSet::default(); self.nodes.len()],
            f: vec![ReasonSet::default(); self.nodes.len()],
            budget,
        };
        for n in 0..self.nodes.len() {
            match &self.nodes[n].kind {
                Kind::Atom(c) => match truth.get(n).copied().flatten() {
                    Some(true) => {
                        let id = self.literal(c.clone());
                        st.t[n].insert(vec![id], budget);
                    }
                    Some(false) => {
                        let id = self.literal(c.negate());
                        st.f[n].insert(vec![id], budget);
                    }
                    None => {}
                },
                Kind::Const(true) => {
                    st.t[n].insert(Vec::new(), budget);
                }
                Kind::Const(false) => {
                    st.f[n].insert(Vec::new(), budget);
                }
                _ => {}
            }
        }
        for &c in &self.clauses {
            st.t[c].insert(Vec::new(), budget);
        }
        st
    }

    /// Bottom-up evaluation only (no decisions, no propagation).
    pub(crate) fn evaluate_only(&self, st: &mut State) {
        for n in 0..self.nodes.len() {
            self.evaluate(n, st);
        }
    }

    fn evaluate(&self, n: usize, st: &mut State) -> bool {
        let budget = st.budget;
        match &self.nodes[n].kind {
            Kind::And(cs) => {
                let t = product_all(cs.iter().map(|c| st.get_t(*c)), budget);
                let mut fu = ReasonSet::default();
                for c in cs {
                    fu.extend(st.get_f(*c), budget);
                }
                let a = st.t[n].extend(&t, budget);
                let b = st.f[n].extend(&fu, budget);
                a | b
            }
            Kind::Or(cs) => {
                let f = product_all(cs.iter().map(|c| st.get_f(*c)), budget);
                let mut tu = ReasonSet::default();
                for c in cs {
                    tu.extend(st.get_t(*c), budget);
                }
                let a = st.f[n].extend(&f, budget);
                let b = st.t[n].extend(&tu, budget);
                a | b
            }
            _ => false,
        }
    }

    fn propagate(&self, n: usize, st: &mut State) -> bool {
        let budget = st.budget;
        let mut changed = false;
        match &self.nodes[n].kind {
            Kind::And(cs) => {
                let tn = st.t[n].clone();
                let fn_ = st.f[n].clone();
                for (j, c) in cs.iter().enumerate() {
                    if !tn.is_empty() {
                        changed |= st.get_t_mut(*c).extend(&tn, budget);
                    }
                    if !fn_.is_empty() {
                        let others = product_all(
                            cs.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, o)| st.get_t(*o)),
                            budget,
                        );
                        let add = fn_.product(&others, budget);
                        changed |= st.get_f_mut(*c).extend(&add, budget);
                    }
                }
            }
            Kind::Or(cs) => {
                let tn = st.t[n].clone();
                let fn_ = st.f[n].clone();
                for (j, c) in cs.iter().enumerate() {
                    if !fn_.is_empty() {
                        changed |= st.get_f_mut(*c).extend(&fn_, budget);
                    }
                    if !tn.is_empty() {
                        let others = product_all(
                            cs.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, o)| st.get_f(*o)),
                            budget,
                        );
                        let add = tn.product(&others, budget);
                        changed |= st.get_t_mut(*c).extend(&add, budget);
                    }
                }
            }
            _ => {}
        }
        changed
    }

    /// Runs evaluate/propagate to a fixed point after asserting `decisions`.
    pub(crate) fn fixpoint(&self, st: &mut State, decisions: &[Ref]) {
        for d in decisions {
            let budget = st.budget;
            st.get_t_mut(*d).insert(Vec::new(), budget);
        }
        loop {
            let mut changed = false;
            for n in 0..self.nodes.len() {
                changed |= self.evaluate(n, st);
                changed |= self.propagate(n, st);
            }
            if !changed {
                break;
            }
        }
    }

    /// `∪ T(ψ) × F(ψ)` over all nodes.
    pub(crate) fn conflicts(&self, st: &State) -> ReasonSet {
        let mut out = ReasonSet::default();
        for n in 0..self.nodes.len() {
            if !st.t[n].is_empty() && !st.f[n].is_empty() {
                let p = st.t[n].product(&st.f[n], st.budget);
                out.extend(&p, st.budget);
            }
        }
        out
    }

    /// The undecided node of least size, leftmost on ties.
    pub(crate) fn choose_undecided(&self, st: &State) -> Option<Ref> {
        let mut order = Vec::new();
        self.preorder(self.root.node, &mut order, &mut vec![false; self.nodes.len()]);
        order
            .into_iter()
            .filter(|&n| st.t[n].is_empty() && st.f[n].is_empty())
            .filter(|&n| !matches!(self.nodes[n].kind, Kind::Opaque))
            .enumerate()
            .min_by_key(|&(k, n)| (self.nodes[n].size, k))
            .map(|(_, node)| Ref { node, neg: false })
    }

    fn preorder(&self, n: usize, out: &mut Vec<usize>, seen: &mut Vec<bool>) {
        if seen[n] {
            return;
        }
        seen[n] = true;
        out.push(n);
        if let Kind::And(cs) | Kind::Or(cs) = &self.nodes[n].kind {
            for c in cs {
                self.preorder(c.node, out, seen);
            }
        }
    }
}

fn product_all<'a>(sets: impl Iterator<Item = &'a ReasonSet>, budget: usize) -> ReasonSet {
    let mut acc = ReasonSet::unconditional();
    for s in sets {
        if s.is_empty() {
            return ReasonSet::default();
        }
        acc = acc.product(s, budget);
    }
    acc
}

pub(crate) struct State {
    t: Vec<ReasonSet>,
    f: Vec<ReasonSet>,
    budget: usize,
}

impl State {
    pub(crate) fn get_t(&self, r: Ref) -> &ReasonSet {
        if r.neg {
            &self.f[r.node]
        } else {
            &self.t[r.node]
        }
    }

    pub(crate) fn get_f(&self, r: Ref) -> &ReasonSet {
        if r.neg {
            &self.t[r.node]
        } else {
            &self.f[r.node]
        }
    }

    fn get_t_mut(&mut self, r: Ref) -> &mut ReasonSet {
        if r.neg {
            &mut self.f[r.node]
        } else {
            &mut self.t[r.node]
        }
    }

    fn get_f_mut(&mut self, r: Ref) -> &mut ReasonSet {
        if r.neg {
            &mut self.t[r.node]
        } else {
            &mut self.f[r.node]
        }
    }
}

impl Clone for State {
    fn clone(&self) -> Self {
        State {
            t: self.t.clone(),
            f: self.f.clone(),
            budget: self.budget,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsumption() {
        let mut s = ReasonSet::default();
        assert!(s.insert(vec![1, 2], usize::MAX));
        assert!(!s.insert(vec![1, 2, 3], usize::MAX));
        assert!(s.insert(vec![2], usize::MAX));
        assert_eq!(s.0, vec![vec![2]]);
        assert_eq!(merge(&[1, 3], &[2, 3]), vec![1, 2, 3]);
    }
}
