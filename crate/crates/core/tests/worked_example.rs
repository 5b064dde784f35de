use std::collections::VecDeque;

use calc_core::engine::{Engine, EngineConfig, SolverResult, TraceEvent};
use calc_core::formula::{to_prenex, Formula, Rel};
use calc_core::poly::{Polynomial, Rational, Var};
use calc_core::ralg::{isolate_real_roots, Bound, Interval, RealAlgebraic};

fn x(i: u32) -> Polynomial {
    Polynomial::var(Var(i))
}

fn q(n: i64, d: i64) -> Polynomial {
    Polynomial::constant(Rational::new(n.into(), d.into()))
}

fn r(n: i64, d: i64) -> RealAlgebraic {
    RealAlgebraic::Rational(Rational::new(n.into(), d.into()))
}

fn sentence() -> Formula {
    let d4 = &x(1) - &q(4, 1);
    let d4sq = &d4 * &d4;
    let c1 = &(&x(2) - &q(7, 2)) + &(&q(2, 1) * &d4sq);
    let a = &x(1) - &q(2, 1);
    let b = &x(2) - &q(2, 1);
    let c2 = &(&(&a * &a) + &(&b * &b)) - &q(1, 1);
    let c3 = &(&x(2) - &q(3, 1)) - &(&q(1, 4) * &d4sq);
    let m = Formula::and([
        Formula::constraint(c1, Rel::Gt),
        Formula::constraint(c2, Rel::Gt),
        Formula::constraint(c3, Rel::Lt),
    ]);
    Formula::Forall(Var(1), Box::new(Formula::Exists(Var(2), Box::new(m))))
}

fn endpoints() -> (RealAlgebraic, RealAlgebraic) {
    // 9 (x - 4)^2 - 2
    let d = &x(1) - &q(4, 1);
    let p = &(&q(9, 1) * &(&d * &d)) - &q(2, 1);
    let roots = isolate_real_roots(&p).unwrap();
    (roots[0].clone(), roots[1].clone())
}

#[test]
fn unforced_run_is_unsat() {
    let mut e = Engine::new(&to_prenex(&sentence()), EngineConfig::default());
    assert_eq!(e.check(), SolverResult::Unsat);
}

#[test]
fn forced_samples_reproduce_intervals() {
    let mut e = Engine::new(&to_prenex(&sentence()), EngineConfig::default());
    let mut first: VecDeque<RealAlgebraic> = [r(2, 1), r(16, 5), r(4, 1)].into();
    let mut second: VecDeque<RealAlgebraic> = [r(7, 2), r(11, 4), r(4, 1), r(2, 1)].into();
    e.set_sample_hook(Box::new(move |s, _| match s.level() {
        0 => first.pop_front(),
        _ => second.pop_front(),
    }));
    e.enable_trace();
    assert_eq!(e.check(), SolverResult::Unsat);
    let (lo, hi) = endpoints();
    let got: Vec<(bool, Interval)> = e
        .trace()
        .iter()
        .filter_map(|ev| match ev {
            TraceEvent::Returned { value, cell, .. } if cell.level() == 1 => Some((*value, cell.interval.clone())),
            _ => None,
        })
        .collect();
    let v = |a: RealAlgebraic| Bound::Value(a);
    assert_eq!(
        got,
        vec![
            (true, Interval::sector(v(r(1, 1)), v(r(3, 1)))),
            (true, Interval::sector(v(r(3, 1)), v(lo.clone()))),
            (false, Interval::sector(v(lo), v(hi))),
        ]
    );
}
