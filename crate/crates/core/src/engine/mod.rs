//! The recursive covering engine: truth of sentences and quantifier
//! elimination over parameters.

mod sample;
mod tree;

use std::fmt;

use crate::cells::{
    characterize_cell, characterize_covering, cover_indices, get_enclosing_cell, CellError,
    CoefficientPolicy, ImplicitCell, Projection,
};
use crate::formula::{to_prenex, variable_order, Formula, OrderingHeuristic, Prenex, Quantifier};
use crate::implicants::{BooleanMode, ImplicantConfig, SelectionMetric};
use crate::poly::{Polynomial, Var};
use crate::ralg::{Interval, RealAlgebraic, SamplePoint};

pub use sample::sample_outside;
pub use tree::{encode_tree, simplify_tree, CoveringTree, Label};

/// A nullification that stopped the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub poly: Polynomial,
    /// The sample prefix over which `poly` vanishes, in variable order.
    pub sample: SamplePoint,
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is nullified over {}", self.poly, self.sample)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverResult {
    Sat,
    Unsat,
    Unknown(Unknown),
}

impl SolverResult {
    pub fn is_decided(&self) -> bool {
        !matches!(self, SolverResult::Unknown(_))
    }
}

impl fmt::Display for SolverResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverResult::Sat => write!(f, "sat"),
            SolverResult::Unsat => write!(f, "unsat"),
            SolverResult::Unknown(_) => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Check,
    Qe,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    pub mode: Mode,
    pub boolean: BooleanMode,
    pub metric: SelectionMetric,
    pub ordering: OrderingHeuristic,
    /// Cap on candidate implicants per reason set; `None` is unbounded.
    pub budget: Option<usize>,
    pub coefficients: CoefficientPolicy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub implicants_generated: u64,
    pub implicants_used: u64,
    pub cells_characterized: u64,
    pub samples_tried: u64,
    pub resultants_computed: u64,
}

impl Stats {
    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, u64); 5] {
        [
            ("implicants_generated", self.implicants_generated),
            ("implicants_used", self.implicants_used),
            ("cells_characterized", self.cells_characterized),
            ("samples_tried", self.samples_tried),
            ("resultants_computed", self.resultants_computed),
        ]
    }
}

/// Notable intermediate results, recorded when tracing is enabled.
#[derive(Clone, Debug)]
pub enum TraceEvent {
    /// A quantified level over `sample` finished with `value` and the
    /// projected cell.
    Returned {
        sample: SamplePoint,
        value: bool,
        cell: ImplicitCell,
    },
    /// A covering over `sample`, in covering order, about to be projected.
    Covering {
        sample: SamplePoint,
        intervals: Vec<Interval>,
    },
}

/// Overrides the sample choice: called with the prefix and the excluded
/// intervals; a returned value inside an excluded interval is ignored.
pub type SampleHook = Box<dyn FnMut(&SamplePoint, &[Interval]) -> Option<RealAlgebraic> + Send>;

/// Quantifier elimination output over the original variables.
#[derive(Clone, Debug)]
pub struct QeOutput {
    pub formula: Formula,
    pub tree: CoveringTree,
}

/// One search over a prenex formula.
pub struct Engine {
    cfg: EngineConfig,
    matrix: Formula,
    /// Quantifier per level; `None` for parameters.
    quantifiers: Vec<Option<Quantifier>>,
    /// `order[k]` is the original variable placed at level `k + 1`.
    order: Vec<Var>,
    params: usize,
    stats: Stats,
    projection: Projection,
    hook: Option<SampleHook>,
    trace: Option<Vec<TraceEvent>>,
}

type Step<T> = Result<T, CellError>;

impl Engine {
    /// Prepares `p` for the configured mode. In check mode free variables
    /// are existentially quantified; in QE mode they are parameters, kept in
    /// their original relative order.
    pub fn new(p: &Prenex, cfg: EngineConfig) -> Engine {
        let params = p.params();
        let mut order = variable_order(p, cfg.ordering);
        let k = match cfg.mode {
            Mode::Qe => {
                order[..params.len()].copy_from_slice(&params);
                params.len()
            }
            Mode::Check => 0,
        };
        let renumbered = p.renumber(&order);
        let quantifiers = order
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if j < k {
                    return None;
                }
                Some(
                    p.prefix
                        .iter()
                        .find(|(_, w)| w == v)
                        .map_or(Quantifier::Exists, |(q, _)| *q),
                )
            })
            .collect();
        Engine {
            cfg,
            matrix: renumbered.matrix,
            quantifiers,
            order,
            params: k,
            stats: Stats::default(),
            projection: Projection::new(cfg.coefficients),
            hook: None,
            trace: None,
        }
    }

    pub fn set_sample_hook(&mut self, hook: SampleHook) {
        self.hook = Some(hook);
    }

    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    /// Original variables in level order.
    pub fn variable_order(&self) -> &[Var] {
        &self.order
    }

    pub fn stats(&self) -> Stats {
        Stats {
            cells_characterized: self.projection.cells_characterized,
            resultants_computed: self.projection.resultants_computed,
            ..self.stats
        }
    }

    fn implicant_config(&self) -> ImplicantConfig {
        ImplicantConfig {
            mode: self.cfg.boolean,
            metric: self.cfg.metric,
            budget: self.cfg.budget,
        }
    }

    fn to_original(&self) -> impl Fn(Var) -> Var + '_ {
        move |v: Var| self.order[v.index() - 1]
    }

    fn unknown(&self, e: CellError) -> Unknown {
        match e {
            CellError::Nullified { poly, sample } => Unknown {
                poly: poly.rename(&self.to_original()),
                sample,
            },
            CellError::NotCovering => unreachable!("projection of an incomplete covering"),
        }
    }

    /// Decides the sentence; parameters are treated as existential.
    pub fn check(&mut self) -> SolverResult {
        if self.params > 0 {
            self.quantifiers.iter_mut().for_each(|q| {
                q.get_or_insert(Quantifier::Exists);
            });
            self.params = 0;
        }
        match self.recurse(&SamplePoint::new()) {
            Ok((true, _)) => SolverResult::Sat,
            Ok((false, _)) => SolverResult::Unsat,
            Err(e) => SolverResult::Unknown(self.unknown(e)),
        }
    }

    /// A formula over the parameters equivalent to the input.
    pub fn eliminate(&mut self) -> Result<QeOutput, Unknown> {
        if self.params == 0 {
            let value = match self.check() {
                SolverResult::Sat => true,
                SolverResult::Unsat => false,
                SolverResult::Unknown(u) => return Err(u),
            };
            let formula = if value { Formula::True } else { Formula::False };
            return Ok(QeOutput {
                formula,
                tree: CoveringTree::leaf(value),
            });
        }
        let (children, _) = self.parameter(&SamplePoint::new()).map_err(|e| self.unknown(e))?;
        let tree = simplify_tree(&CoveringTree::inner(children));
        let formula = encode_tree(&tree, false);
        let map = self.to_original();
        Ok(QeOutput {
            formula: formula.rename(&map),
            tree: tree.rename(&map),
        })
    }

    fn next_sample(&mut self, s: &SamplePoint, cells: &[ImplicitCell]) -> Option<RealAlgebraic> {
        let excluded: Vec<&Interval> = cells.iter().map(|c| &c.interval).collect();
        let forced = self.hook.as_mut().and_then(|h| {
            let owned: Vec<Interval> = excluded.iter().map(|i| (*i).clone()).collect();
            h(s, &owned)
        });
        let v = match forced {
            Some(v) if !excluded.iter().any(|i| i.contains(&v)) => Some(v),
            _ => sample_outside(&excluded),
        }?;
        assert!(
            !excluded.iter().any(|i| i.contains(&v)),
            "sample inside an excluded interval"
        );
        self.stats.samples_tried += 1;
        Some(v)
    }

    /// The matrix's truth value on a cell around `t`, by implicant if the
    /// matrix is decided at `t` and by recursion otherwise.
    fn value_around(&mut self, t: &SamplePoint) -> Step<Option<(bool, ImplicitCell)>> {
        match get_enclosing_cell(&self.matrix, t, &self.implicant_config())? {
            Some(e) => {
                self.stats.implicants_generated += e.candidates as u64;
                self.stats.implicants_used += 1;
                Ok(Some((e.value, e.cell)))
            }
            None => {
                assert!(t.level() < self.quantifiers.len(), "matrix undecided at a full sample");
                Ok(None)
            }
        }
    }

    fn record(&mut self, event: TraceEvent) {
        if let Some(t) = self.trace.as_mut() {
            t.push(event);
        }
    }

    fn covering(&mut self, s: &SamplePoint, cells: Vec<ImplicitCell>) -> Step<ImplicitCell> {
        if self.trace.is_some() {
            let order = cover_indices(&cells)?;
            let intervals = order.iter().map(|&k| cells[k].interval.clone()).collect();
            self.record(TraceEvent::Covering {
                sample: s.clone(),
                intervals,
            });
        }
        characterize_covering(cells, &mut self.projection)
    }

    /// Decides the quantified suffix over `s`; returns the value and a cell
    /// of level `s.level()` around `s` on which it holds.
    fn recurse(&mut self, s: &SamplePoint) -> Step<(bool, ImplicitCell)> {
        let q = self.quantifiers[s.level()].expect("quantified level");
        // exists stops at the first satisfying cell, forall at the first
        // falsifying one
        let early = q == Quantifier::Exists;
        let mut collected: Vec<ImplicitCell> = Vec::new();
        while let Some(v) = self.next_sample(s, &collected) {
            let t = s.extended(v);
            let (value, cell) = match self.value_around(&t)? {
                Some(r) => r,
                None => self.recurse(&t)?,
            };
            if value == early {
                let c = characterize_cell(&cell, &mut self.projection)?;
                self.record(TraceEvent::Returned {
                    sample: s.clone(),
                    value,
                    cell: c.clone(),
                });
                return Ok((value, c));
            }
            collected.push(cell);
        }
        let c = self.covering(s, collected)?;
        self.record(TraceEvent::Returned {
            sample: s.clone(),
            value: !early,
            cell: c.clone(),
        });
        Ok((!early, c))
    }

    /// Covers the parameter cylinder over `s` with cells of known truth
    /// value; returns the covering as tree nodes and its projection.
    fn parameter(&mut self, s: &SamplePoint) -> Step<(Vec<CoveringTree>, ImplicitCell)> {
        let mut cells: Vec<ImplicitCell> = Vec::new();
        let mut labels: Vec<Label> = Vec::new();
        while let Some(v) = self.next_sample(s, &cells) {
            let t = s.extended(v);
            let (label, cell) = match self.value_around(&t)? {
                Some((value, cell)) => (Label::Leaf(value), cell),
                None if t.level() < self.params => {
                    let (children, cell) = self.parameter(&t)?;
                    (Label::Inner(children), cell)
                }
                None => {
                    let (value, cell) = self.recurse(&t)?;
                    (Label::Leaf(value), cell)
                }
            };
            cells.push(cell);
            labels.push(label);
        }
        let order = cover_indices(&cells)?;
        let mut labels: Vec<Option<Label>> = labels.into_iter().map(Some).collect();
        let nodes = order
            .iter()
            .map(|&k| CoveringTree::for_cell(&cells[k], labels[k].take().unwrap()))
            .collect();
        let c = self.covering(s, cells)?;
        Ok((nodes, c))
    }
}

/// Decides a sentence; free variables are read existentially.
pub fn check_truth(f: &Formula, cfg: &EngineConfig) -> (SolverResult, Stats) {
    let mut e = Engine::new(&to_prenex(f), EngineConfig { mode: Mode::Check, ..*cfg });
    let r = e.check();
    (r, e.stats())
}

/// Eliminates the quantifiers of `f`; free variables are parameters.
pub fn eliminate_quantifiers(f: &Formula, cfg: &EngineConfig) -> (Result<QeOutput, Unknown>, Stats) {
    let mut e = Engine::new(&to_prenex(f), EngineConfig { mode: Mode::Qe, ..*cfg });
    let r = e.eliminate();
    (r, e.stats())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Rel;
    use crate::poly::testing::{c, x};

    fn exists(v: u32, f: Formula) -> Formula {
        Formula::Exists(Var(v), Box::new(f))
    }

    fn forall(v: u32, f: Formula) -> Formula {
        Formula::Forall(Var(v), Box::new(f))
    }

    fn check(f: &Formula) -> SolverResult {
        check_truth(f, &EngineConfig::default()).0
    }

    #[test]
    fn simple_sentences() {
        let sq = &x(1) * &x(1);
        assert_eq!(check(&exists(1, Formula::constraint(sq.clone(), Rel::Lt))), SolverResult::Unsat);
        assert_eq!(check(&forall(1, Formula::constraint(sq.clone(), Rel::Ge))), SolverResult::Sat);
        assert_eq!(check(&forall(1, Formula::constraint(x(1), Rel::Gt))), SolverResult::Unsat);
        let above = forall(1, exists(2, Formula::constraint(&x(2) - &x(1), Rel::Gt)));
        assert_eq!(check(&above), SolverResult::Sat);
        let pos = forall(1, Formula::constraint(&sq + &c(1), Rel::Gt));
        assert_eq!(check(&pos), SolverResult::Sat);
    }

    #[test]
    fn qe_without_parameters() {
        let f = exists(1, Formula::constraint(x(1), Rel::Gt));
        let (out, _) = eliminate_quantifiers(&f, &EngineConfig::default());
        assert_eq!(out.unwrap().formula, Formula::True);
    }

    #[test]
    fn qe_square_root() {
        // exists x2. x2^2 = x1
        let f = exists(2, Formula::constraint(&(&x(2) * &x(2)) - &x(1), Rel::Eq));
        let (out, stats) = eliminate_quantifiers(&f, &EngineConfig::default());
        let out = out.unwrap();
        for (v, expect) in [(-2, false), (0, true), (3, true)] {
            let s = [RealAlgebraic::from_int(v)];
            assert_eq!(
                crate::formula::evaluate_partial(&out.formula, &s),
                crate::formula::TruthValue3::from_bool(expect),
                "{} at {v}",
                out.formula
            );
        }
        assert!(stats.implicants_used <= stats.implicants_generated);
    }
}
