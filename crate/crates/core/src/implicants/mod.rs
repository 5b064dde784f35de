//! Implicants: small conjunctions of the matrix's constraints that are true
//! at a sample and force the matrix's truth value there.

mod graph;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::formula::{evaluate_partial, Constraint, Formula, TruthValue3};
use crate::poly::{Polynomial, Rational};
use crate::ralg::RealAlgebraic;
use graph::{Graph, ReasonSet, Ref, State};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BooleanMode {
    Eval,
    #[default]
    Propagate,
    Explore,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SelectionMetric {
    Size,
    #[default]
    Sotd,
    ReverseSotd,
    Features,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImplicantError {
    #[error("no implicant candidates to select from")]
    NoCandidates,
}

/// A set of constraints, each true at the sample it was computed for.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Implicant(pub BTreeSet<Constraint>);

impl Implicant {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.0.iter()
    }

    /// Distinct polynomials of the literals.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        let set: BTreeSet<&Polynomial> = self.0.iter().map(|c| &c.poly).collect();
        set.into_iter().cloned().collect()
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and(self.0.iter().cloned().map(Formula::Atom))
    }

    pub fn sotd(&self) -> u64 {
        self.polynomials().iter().map(Polynomial::sum_of_total_degrees).sum()
    }

    fn features(&self) -> (Rational, Rational, u64) {
        let polys = self.polynomials();
        let mut per_poly = Rational::from_integer(0.into());
        let mut monomials = 0u64;
        let mut total = 0u64;
        for p in &polys {
            let n = p.num_terms() as u64;
            let s = p.sum_of_total_degrees();
            per_poly += Rational::new(BigInt::from(s), BigInt::from(n.max(1)));
            monomials += n;
            total += s;
        }
        let avg = Rational::new(BigInt::from(total), BigInt::from(monomials.max(1)));
        (per_poly, avg, total)
    }
}

impl fmt::Display for Implicant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

fn to_implicants(g: &Graph, set: &ReasonSet) -> Vec<Implicant> {
    let mut out: Vec<Implicant> = set
        .0
        .iter()
        .map(|r| Implicant(r.iter().map(|&id| g.literals[id as usize].clone()).collect()))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn prepare(phi: &Formula, s: &[RealAlgebraic], budget: usize) -> (Graph, State) {
    let mut g = Graph::new(phi);
    let truth = g.evaluate_atoms(s);
    let st = g.state(&truth, budget);
    (g, st)
}

fn budget_of(budget: Option<usize>) -> usize {
    budget.unwrap_or(usize::MAX)
}

/// Evaluation-only implicants: certificates of `phi[s]` being True when it
/// evaluates to True, or of being False when it evaluates to False.
pub fn implicants_eval(phi: &Formula, s: &[RealAlgebraic], budget: Option<usize>) -> Vec<Implicant> {
    let (g, mut st) = prepare(phi, s, budget_of(budget));
    g.evaluate_only(&mut st);
    let t = st.get_t(g.root);
    if !t.is_empty() {
        return to_implicants(&g, t);
    }
    to_implicants(&g, st.get_f(g.root))
}

fn decisions_of(g: &Graph, d: &[Formula]) -> Vec<Ref> {
    d.iter()
        .map(|f| g.lookup(f).expect("decision is not a subformula of the matrix"))
        .collect()
}

/// Reason propagation under the decisions `d`; returns `∪ T(ψ) × F(ψ)`.
pub fn implicants_propagate(
    phi: &Formula,
    d: &[Formula],
    s: &[RealAlgebraic],
    budget: Option<usize>,
) -> Vec<Implicant> {
    let (g, mut st) = prepare(phi, s, budget_of(budget));
    let decisions = decisions_of(&g, d);
    g.fixpoint(&mut st, &decisions);
    to_implicants(&g, &g.conflicts(&st))
}

/// Propagation plus case splitting on undecided subformulas.
pub fn implicants_explore(
    phi: &Formula,
    d: &[Formula],
    s: &[RealAlgebraic],
    budget: Option<usize>,
) -> Vec<Implicant> {
    let (g, st) = prepare(phi, s, budget_of(budget));
    let decisions = decisions_of(&g, d);
    to_implicants(&g, &explore(&g, &st, decisions))
}

fn explore(g: &Graph, base: &State, decisions: Vec<Ref>) -> ReasonSet {
    let mut st = base.clone();
    g.fixpoint(&mut st, &decisions);
    let c = g.conflicts(&st);
    if !c.is_empty() {
        return c;
    }
    let Some(psi) = g.choose_undecided(&st) else {
        return ReasonSet::default();
    };
    let mut with = decisions.clone();
    with.push(psi);
    let a = explore(g, base, with);
    if a.is_empty() {
        return a;
    }
    let mut without = decisions;
    without.push(psi.negate());
    let b = explore(g, base, without);
    a.product(&b, usize::MAX)
}

/// Picks one implicant by the metric; ties are broken by size and then by
/// the canonical literal order.
pub fn select_implicant(
    cands: &[Implicant],
    metric: SelectionMetric,
) -> Result<Implicant, ImplicantError> {
    let best = match metric {
        SelectionMetric::Size => cands.iter().min_by(|a, b| (a.len(), a).cmp(&(b.len(), b))),
        SelectionMetric::Sotd => cands
            .iter()
            .min_by(|a, b| (a.sotd(), a.len(), a).cmp(&(b.sotd(), b.len(), b))),
        SelectionMetric::ReverseSotd => cands.iter().min_by(|a, b| {
            b.sotd()
                .cmp(&a.sotd())
                .then(a.len().cmp(&b.len()))
                .then(a.cmp(b))
        }),
        SelectionMetric::Features => cands
            .iter()
            .min_by(|a, b| (a.features(), a.len(), a).cmp(&(b.features(), b.len(), b))),
    };
    best.cloned().ok_or(ImplicantError::NoCandidates)
}

/// Implicant search settings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ImplicantConfig {
    pub mode: BooleanMode,
    pub metric: SelectionMetric,
    pub budget: Option<usize>,
}

/// Outcome of [`decide_and_explain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explanation {
    pub value: TruthValue3,
    pub implicant: Option<Implicant>,
    /// Number of candidate implicants found.
    pub candidates: usize,
}

/// Decides `phi` at `s` and explains the decision with one implicant.
pub fn decide_and_explain(phi: &Formula, s: &[RealAlgebraic], cfg: &ImplicantConfig) -> Explanation {
    let undecided = Explanation {
        value: TruthValue3::Undef,
        implicant: None,
        candidates: 0,
    };
    let budget = budget_of(cfg.budget);
    let (g, st) = prepare(phi, s, budget);
    let (value, cands) = match cfg.mode {
        BooleanMode::Eval => {
            let mut st = st;
            g.evaluate_only(&mut st);
            if !st.get_t(g.root).is_empty() {
                (TruthValue3::True, to_implicants(&g, st.get_t(g.root)))
            } else if !st.get_f(g.root).is_empty() {
                (TruthValue3::False, to_implicants(&g, st.get_f(g.root)))
            } else {
                return undecided;
            }
        }
        BooleanMode::Propagate | BooleanMode::Explore => {
            let run = |d: Ref| {
                if cfg.mode == BooleanMode::Explore {
                    explore(&g, &st, vec![d])
                } else {
                    let mut st = st.clone();
                    g.fixpoint(&mut st, &[d]);
                    g.conflicts(&st)
                }
            };
            let sides: &[TruthValue3] = match evaluate_partial(phi, s) {
                TruthValue3::True => &[TruthValue3::True],
                TruthValue3::False => &[TruthValue3::False],
                TruthValue3::Undef => &[TruthValue3::False, TruthValue3::True],
            };
            let mut found = None;
            for &side in sides {
                let d = if side == TruthValue3::False {
                    g.root
                } else {
                    g.root.negate()
                };
                let c = run(d);
                if !c.is_empty() {
                    found = Some((side, to_implicants(&g, &c)));
                    break;
                }
            }
            match found {
                Some(f) => f,
                None => return undecided,
            }
        }
    };
    let implicant = select_implicant(&cands, cfg.metric).ok();
    Explanation {
        value,
        implicant,
        candidates: cands.len(),
    }
}
