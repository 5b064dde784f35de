//! Sampling check of a quantifier elimination result: the output evaluated
//! at random parameter points must agree with deciding the instantiated
//! input.

use std::fmt;

use calc_core::engine::{check_truth, EngineConfig, SolverResult};
use calc_core::formula::{evaluate_partial, ExtendedAtom, Formula, IndexedRoot, Rel, TruthValue3};
use calc_core::poly::{Polynomial, Rational, Var};
use calc_core::ralg::{isolate_real_roots, RealAlgebraic};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A parameter point where input and output disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub point: Vec<(Var, Rational)>,
    /// Truth of the input at the point.
    pub input: bool,
    /// Truth of the output at the point; `Undef` if it could not be
    /// evaluated.
    pub output: TruthValue3,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub trials: usize,
    /// Points where deciding the input returned unknown.
    pub skipped: Vec<Vec<(Var, Rational)>>,
    pub failures: Vec<Disagreement>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} trials, {} failures, {} skipped",
            self.trials,
            self.failures.len(),
            self.skipped.len()
        )
    }
}

/// Renders a point with the given variable names.
pub fn show_point(point: &[(Var, Rational)], name: &dyn Fn(Var) -> String) -> String {
    let parts: Vec<String> = point.iter().map(|(v, r)| format!("{} = {}", name(*v), r)).collect();
    parts.join(", ")
}

/// Compares `output` with `input` at `trials` seeded parameter points. The
/// parameters are the free variables of `input`.
pub fn verify_qe(input: &Formula, output: &Formula, trials: usize, seed: u64, cfg: &EngineConfig) -> VerifyReport {
    let params: Vec<Var> = input.free_vars().into_iter().collect();
    let trials = if params.is_empty() { trials.min(1) } else { trials };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boundary = boundary_polynomials(output);
    // Variables other than parameters land above the sample and stay Undef.
    let outside = Var(params.len() as u32 + 1);
    let renamed = output.rename(&|v| params.iter().position(|w| *w == v).map_or(outside, |k| Var(k as u32 + 1)));
    let mut report = VerifyReport {
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let point = draw_point(&mut rng, &params, &boundary);
        let sample: Vec<RealAlgebraic> = point.iter().map(|(_, r)| RealAlgebraic::Rational(r.clone())).collect();
        let got = evaluate_partial(&renamed, &sample);
        let expected = match check_truth(&instantiate(input, &point), cfg).0 {
            SolverResult::Sat => true,
            SolverResult::Unsat => false,
            SolverResult::Unknown(_) => {
                report.skipped.push(point);
                continue;
            }
        };
        if got != TruthValue3::from_bool(expected) {
            report.failures.push(Disagreement {
                point,
                input: expected,
                output: got,
            });
        }
    }
    report
}

/// `f` with the parameters fixed to rational values.
fn instantiate(f: &Formula, point: &[(Var, Rational)]) -> Formula {
    let has_param_root = |f: &Formula| any_subformula(f, &|g| matches!(g, Formula::Root(a) if point.iter().any(|(v, _)| *v == a.var)));
    if has_param_root(f) {
        // Pin the parameters with equations; they are read existentially.
        let pins = point.iter().map(|(v, r)| {
            Formula::constraint(&Polynomial::var(*v) - &Polynomial::constant(r.clone()), Rel::Eq)
        });
        return Formula::and(pins.chain([f.clone()]));
    }
    substitute(f, point)
}

fn any_subformula(f: &Formula, pred: &dyn Fn(&Formula) -> bool) -> bool {
    pred(f) || f.children().iter().any(|g| any_subformula(g, pred))
}

fn substitute(f: &Formula, point: &[(Var, Rational)]) -> Formula {
    let sub = |f: &Formula| substitute(f, point);
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(c) => Formula::constraint(c.poly.substitute_all(point), c.rel),
        Formula::Root(a) => Formula::Root(ExtendedAtom {
            var: a.var,
            rel: a.rel,
            root: IndexedRoot {
                poly: a.root.poly.substitute_all(point),
                index: a.root.index,
            },
        }),
        Formula::Not(g) => Formula::not(sub(g)),
        Formula::And(c) => Formula::and(c.iter().map(sub)),
        Formula::Or(c) => Formula::or(c.iter().map(sub)),
        Formula::Exists(v, b) => Formula::Exists(*v, Box::new(sub(b))),
        Formula::Forall(v, b) => Formula::Forall(*v, Box::new(sub(b))),
    }
}

/// Polynomials of `f` whose roots delimit the regions where its truth may
/// change: constraint polynomials and the polynomials of root atoms.
fn boundary_polynomials(f: &Formula) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = f.polynomials().into_iter().cloned().collect();
    collect_root_polys(f, &mut out);
    out.sort();
    out.dedup();
    out
}

fn collect_root_polys(f: &Formula, out: &mut Vec<Polynomial>) {
    if let Formula::Root(a) = f {
        out.push(a.root.poly.clone());
    }
    for g in f.children() {
        collect_root_polys(g, out);
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// A rational of mixed magnitude: small integers, small fractions, large
/// and tiny values.
fn generic_value(rng: &mut impl Rng) -> Rational {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    match rng.gen_range(0..4) {
        0 => Rational::from_integer(rng.gen_range(-5i64..=5).into()),
        1 => Rational::new(rng.gen_range(-80i64..=80).into(), rng.gen_range(1i64..=16).into()),
        2 => Rational::from_integer(BigInt::from(sign * rng.gen_range(1i64..=9)) * pow10(rng.gen_range(1..=6))),
        _ => Rational::new(BigInt::from(sign * rng.gen_range(1i64..=9)), pow10(rng.gen_range(1..=6))),
    }
}

/// A rational at or just beside `r`, at distance below `2^-k`.
fn near(rng: &mut impl Rng, r: &RealAlgebraic) -> Rational {
    if let Some(q) = r.as_rational() {
        if rng.gen_bool(0.4) {
            return q.clone();
        }
    }
    let k = rng.gen_range(3..=40);
    let eps = Rational::new(BigInt::from(1), BigInt::from(1) << k);
    loop {
        let (lo, hi) = r.enclosure();
        if &hi - &lo < eps {
            return if rng.gen_bool(0.5) { lo - &eps } else { hi + &eps };
        }
        r.refine();
    }
}

fn draw_point(rng: &mut impl Rng, params: &[Var], boundary: &[Polynomial]) -> Vec<(Var, Rational)> {
    let mut point: Vec<(Var, Rational)> = Vec::with_capacity(params.len());
    for (k, v) in params.iter().enumerate() {
        let mut roots = Vec::new();
        if rng.gen_bool(0.6) {
            for p in boundary {
                if p.main_var() != Some(*v) || !p.vars().iter().all(|w| params[..=k].contains(w)) {
                    continue;
                }
                let q = p.substitute_all(&point);
                if q.is_constant() {
                    continue;
                }
                roots.extend(isolate_real_roots(&q).expect("non-zero univariate polynomial"));
            }
        }
        let value = match roots.choose(rng) {
            Some(r) => near(rng, r),
            None => generic_value(rng),
        };
        point.push((*v, value));
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Polynomial {
        Polynomial::var(Var(i))
    }

    fn c(n: i64) -> Polynomial {
        Polynomial::from_int(n)
    }

    fn disc() -> Formula {
        let p = &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))) - &c(1);
        Formula::Exists(Var(2), Box::new(Formula::constraint(p, Rel::Lt)))
    }

    #[test]
    fn correct_output_passes() {
        let out = Formula::and([
            Formula::constraint(&x(1) + &c(1), Rel::Gt),
            Formula::constraint(&x(1) - &c(1), Rel::Lt),
        ]);
        let r = verify_qe(&disc(), &out, 300, 1, &EngineConfig::default());
        assert!(r.passed(), "{r}");
        assert!(r.skipped.is_empty());
    }

    #[test]
    fn wrong_output_has_a_witness() {
        let out = Formula::constraint(&x(1) - &c(1), Rel::Lt);
        let r = verify_qe(&disc(), &out, 300, 1, &EngineConfig::default());
        assert!(!r.passed());
        for d in &r.failures {
            assert!(d.point[0].1 <= Rational::from_integer((-1).into()));
            assert!(!d.input);
        }
    }

    #[test]
    fn sentences_are_checked_once() {
        let sentence = Formula::Exists(Var(1), Box::new(disc()));
        let r = verify_qe(&sentence, &Formula::True, 50, 0, &EngineConfig::default());
        assert_eq!(r.trials, 1);
        assert!(r.passed());
        assert!(!verify_qe(&sentence, &Formula::False, 50, 0, &EngineConfig::default()).passed());
    }

    #[test]
    fn root_atoms_in_outputs() {
        let y2 = &(&x(1) * &x(1)) - &c(2);
        let out = Formula::and([
            Formula::Root(ExtendedAtom { var: Var(1), rel: Rel::Gt, root: IndexedRoot { poly: y2.clone(), index: 1 } }),
            Formula::Root(ExtendedAtom { var: Var(1), rel: Rel::Lt, root: IndexedRoot { poly: y2, index: 2 } }),
        ]);
        let p = &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))) - &c(2);
        let input = Formula::Exists(Var(2), Box::new(Formula::constraint(p, Rel::Lt)));
        assert!(verify_qe(&input, &out, 300, 5, &EngineConfig::default()).passed());
    }
}
