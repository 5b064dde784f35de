use calc_core::cells::{
    characterize_cell, characterize_covering, covers_real_line, get_enclosing_cell, indexed_root_formula, ImplicitCell,
    Projection,
};
use calc_core::formula::{evaluate_partial, to_nnf, to_prenex, Formula, Rel, TruthValue3};
use calc_core::implicants::{decide_and_explain, BooleanMode, ImplicantConfig};
use calc_core::poly::{Monomial, Polynomial, Rational};
use calc_core::ralg::{isolate_roots_at, pick_value_in, Bound, Interval, RealAlgebraic, RootsAt, SamplePoint};
use proptest::prelude::*;

fn poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -5i64..=5), 1..=max_terms).prop_map(
        |terms| {
            Polynomial::from_terms(
                terms
                    .into_iter()
                    .map(|(e, c)| (Monomial::from_exponents(e), Rational::from_integer(c.into()))),
            )
        },
    )
}

fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![
        Just(Rel::Lt),
        Just(Rel::Le),
        Just(Rel::Eq),
        Just(Rel::Ne),
        Just(Rel::Ge),
        Just(Rel::Gt)
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    let atom = (poly(2, 2, 3), rel()).prop_map(|(p, r)| Formula::constraint(p, r));
    atom.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::or),
            inner.prop_map(Formula::not),
        ]
    })
}

fn nnf_matrix() -> impl Strategy<Value = Formula> {
    formula().prop_map(|f| to_nnf(&f))
}

fn value(n: i64) -> RealAlgebraic {
    RealAlgebraic::Rational(Rational::new(n.into(), 4.into()))
}

fn point(a: i64, b: i64) -> SamplePoint {
    vec![value(a), value(b)].into()
}

/// Rationals inside `iv` drawn from `offsets`, plus the preferred value.
fn points_in(iv: &Interval, offsets: &[i64]) -> Vec<RealAlgebraic> {
    if let Interval::Section(v) = iv {
        return vec![v.clone()];
    }
    let mut out: Vec<RealAlgebraic> = offsets.iter().map(|k| value(*k)).filter(|v| iv.contains(v)).collect();
    out.push(pick_value_in(&iv.lower(), &iv.upper()).unwrap());
    out
}

/// The cell's interval at another prefix `r`, from its indexed root formula.
fn interval_at(c: &ImplicitCell, r: &[RealAlgebraic]) -> Option<Interval> {
    let f = indexed_root_formula(c);
    let atoms: Vec<Formula> = match f {
        Formula::True => return Some(Interval::whole()),
        Formula::And(a) => a,
        g => vec![g],
    };
    let mut lower = Bound::NegInfinity;
    let mut upper = Bound::PosInfinity;
    for a in atoms {
        let Formula::Root(a) = a else { unreachable!() };
        let RootsAt::Roots(roots) = isolate_roots_at(&a.root.poly, r) else {
            return None;
        };
        let v = roots.get(a.root.index - 1)?.clone();
        match a.rel {
            Rel::Gt => lower = lower.max(Bound::Value(v)),
            Rel::Lt => upper = upper.min(Bound::Value(v)),
            Rel::Eq => return Some(Interval::Section(v)),
            _ => unreachable!(),
        }
    }
    (lower < upper).then(|| Interval::sector(lower, upper))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nnf_and_prenex_preserve_truth(f in formula(), pts in prop::collection::vec((-12i64..12, -12i64..12), 5)) {
        let n = to_nnf(&f);
        let p = to_prenex(&f);
        prop_assert!(p.prefix.is_empty());
        for (a, b) in pts {
            let s = point(a, b);
            prop_assert_eq!(evaluate_partial(&f, &s), evaluate_partial(&n, &s));
            prop_assert_eq!(evaluate_partial(&f, &s), evaluate_partial(&p.matrix, &s));
        }
    }

    #[test]
    fn partial_evaluation_is_monotone(f in formula(), a in -12i64..12, b in -12i64..12) {
        let full = evaluate_partial(&f, &point(a, b));
        prop_assert!(full.is_decided());
        let part = evaluate_partial(&f, &[value(a)]);
        if part.is_decided() {
            prop_assert_eq!(part, full);
        }
    }

    #[test]
    fn implicants_are_sound(f in nnf_matrix(), a in -12i64..12, b in -12i64..12, others in prop::collection::vec((-12i64..12, -12i64..12), 20)) {
        for mode in [BooleanMode::Eval, BooleanMode::Propagate, BooleanMode::Explore] {
            let cfg = ImplicantConfig { mode, ..Default::default() };
            for s in [point(a, b).to_vec(), vec![value(a)]] {
                let e = decide_and_explain(&f, &s, &cfg);
                let Some(imp) = e.implicant else { continue };
                let expect = e.value;
                prop_assert!(expect.is_decided());
                let conj = imp.to_formula();
                prop_assert_eq!(evaluate_partial(&conj, &s), TruthValue3::True);
                for &(c, d) in &others {
                    let q = if s.len() == 1 { point(a, d) } else { point(c, d) };
                    if evaluate_partial(&conj, &q) == TruthValue3::True {
                        prop_assert_eq!(evaluate_partial(&f, &q), expect, "implicant {} at {}", imp, q);
                    }
                }
            }
        }
    }

    #[test]
    fn stronger_modes_decide_more(f in nnf_matrix(), a in -12i64..12) {
        let s = [value(a)];
        let decide = |mode| decide_and_explain(&f, &s, &ImplicantConfig { mode, ..Default::default() }).value;
        let (ev, pr, ex) = (decide(BooleanMode::Eval), decide(BooleanMode::Propagate), decide(BooleanMode::Explore));
        if ev.is_decided() {
            prop_assert_eq!(ev, pr);
        }
        if pr.is_decided() {
            prop_assert_eq!(pr, ex);
        }
    }

    #[test]
    fn enclosing_cells_are_truth_invariant(f in nnf_matrix(), a in -12i64..12, b in -12i64..12, offsets in prop::collection::vec(-60i64..60, 50)) {
        let s = point(a, b);
        let Ok(Some(e)) = get_enclosing_cell(&f, &s, &ImplicantConfig::default()) else {
            return Ok(());
        };
        let iv = &e.cell.interval;
        prop_assert!(iv.contains(&s[1]));
        for (_, roots) in e.cell.top_roots() {
            for r in roots {
                prop_assert!(iv.is_section() || !iv.contains(r));
            }
        }
        for y in points_in(iv, &offsets) {
            let q = [s[0].clone(), y];
            prop_assert_eq!(evaluate_partial(&f, &q), TruthValue3::from_bool(e.value));
        }
        let g = indexed_root_formula(&e.cell);
        prop_assert_eq!(evaluate_partial(&g, &s), TruthValue3::True);
        for k in [-100i64, -7, 0, 5, 100] {
            let q = [s[0].clone(), value(k)];
            prop_assert_eq!(evaluate_partial(&g, &q) == TruthValue3::True, iv.contains(&q[1]));
        }
    }

    #[test]
    fn characterized_cells_keep_their_structure(f in nnf_matrix(), a in -12i64..12, b in -12i64..12, offsets in prop::collection::vec(-60i64..60, 20)) {
        let s = point(a, b);
        let Ok(Some(e)) = get_enclosing_cell(&f, &s, &ImplicantConfig::default()) else {
            return Ok(());
        };
        let mut pr = Projection::default();
        let Ok(down) = characterize_cell(&e.cell, &mut pr) else {
            return Ok(());
        };
        prop_assert!(down.interval.contains(&s[0]));
        let shape = indexed_root_formula(&e.cell);
        for r in points_in(&down.interval, &offsets) {
            let iv = interval_at(&e.cell, std::slice::from_ref(&r));
            prop_assert!(iv.is_some(), "bounds of {} undefined at {}", e.cell, r);
            let iv = iv.unwrap();
            let y = match &iv {
                Interval::Section(v) => v.clone(),
                _ => pick_value_in(&iv.lower(), &iv.upper()).unwrap(),
            };
            let moved = ImplicitCell::new(e.cell.polys.clone(), vec![r.clone(), y.clone()].into()).unwrap();
            prop_assert_eq!(indexed_root_formula(&moved), shape.clone());
            prop_assert_eq!(evaluate_partial(&f, &[r, y]), TruthValue3::from_bool(e.value));
        }
    }

    #[test]
    fn characterized_coverings_stay_coverings(f in nnf_matrix(), a in -12i64..12, offsets in prop::collection::vec(-60i64..60, 20)) {
        let prefix: SamplePoint = vec![value(a)].into();
        let mut cells: Vec<ImplicitCell> = Vec::new();
        loop {
            let ivs: Vec<&Interval> = cells.iter().map(|c| &c.interval).collect();
            let Some(y) = calc_core::engine::sample_outside(&ivs) else { break };
            match get_enclosing_cell(&f, &prefix.extended(y), &ImplicantConfig::default()) {
                Ok(Some(e)) => cells.push(e.cell),
                _ => return Ok(()),
            }
        }
        let mut pr = Projection::default();
        let Ok(down) = characterize_covering(cells.clone(), &mut pr) else {
            return Ok(());
        };
        prop_assert!(down.interval.contains(&prefix[0]));
        for r in points_in(&down.interval, &offsets) {
            let moved: Vec<Interval> = cells
                .iter()
                .filter_map(|c| interval_at(c, std::slice::from_ref(&r)))
                .collect();
            prop_assert!(covers_real_line(moved.iter()), "covering breaks at {}", r);
        }
    }
}
