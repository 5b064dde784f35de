//! A naive sign-invariant CAD used as a test oracle: full projection
//! (coefficients down to the first nonzero constant one, discriminants,
//! pairwise resultants) followed by cell-by-cell lifting over one sample per
//! cell.
//!
//! Sample coordinates are independent algebraic numbers, so exact sign
//! tests cost grows with the product of their degrees. Cells whose sample
//! exceeds [`MAX_SAMPLE_DEGREE`] are declined.

use calc_core::formula::{evaluate_partial, to_prenex, Formula, Quantifier, TruthValue3};
use calc_core::poly::{discriminant, refine_basis, resultant, Polynomial, Var};
use calc_core::ralg::{isolate_roots_at, pick_value_in, Bound, RealAlgebraic, RootsAt};

/// Largest product of the degrees of a sample's coordinates, including the
/// candidate roots examined while lifting it.
pub const MAX_SAMPLE_DEGREE: usize = 64;

/// Truth of a sentence; free variables are read existentially. `None` when
/// a projection polynomial vanishes identically over some sample, or when a
/// sample needed for the answer exceeds [`MAX_SAMPLE_DEGREE`].
pub fn cad_decide(f: &Formula) -> Option<bool> {
    let p = to_prenex(f);
    let mut order = p.params();
    let mut quantifiers = vec![Quantifier::Exists; order.len()];
    for (q, v) in &p.prefix {
        order.push(*v);
        quantifiers.push(*q);
    }
    let p = p.renumber(&order);
    let n = order.len();
    let mut polys: Vec<Polynomial> = p.matrix.polynomials().into_iter().cloned().collect();
    let mut levels: Vec<Vec<Polynomial>> = vec![Vec::new(); n + 1];
    for k in (1..=n).rev() {
        let basis = refine_basis(polys.iter());
        let (top, rest): (Vec<_>, Vec<_>) = basis.into_iter().partition(|q| q.level() == k);
        polys = rest;
        polys.extend(project(&top, Var(k as u32)));
        levels[k] = top;
    }
    lift(&p.matrix, &quantifiers, &levels, &mut Vec::new())
}

fn project(top: &[Polynomial], x: Var) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for (i, p) in top.iter().enumerate() {
        for c in p.coefficients(x) {
            let constant = c.is_constant() && !c.is_zero();
            out.push(c);
            if constant {
                break;
            }
        }
        out.push(discriminant(p, x).expect("discriminant of a level polynomial"));
        for q in &top[i + 1..] {
            out.push(resultant(p, q, x).expect("resultant of level polynomials"));
        }
    }
    out.retain(|q| !q.is_constant());
    out
}

fn lift(
    matrix: &Formula,
    quantifiers: &[Quantifier],
    levels: &[Vec<Polynomial>],
    s: &mut Vec<RealAlgebraic>,
) -> Option<bool> {
    let k = s.len() + 1;
    if k > quantifiers.len() {
        return match evaluate_partial(matrix, s) {
            TruthValue3::True => Some(true),
            TruthValue3::False => Some(false),
            TruthValue3::Undef => None,
        };
    }
    let below: usize = s.iter().map(degree).product();
    let mut roots = Vec::new();
    for p in &levels[k] {
        // Candidate roots have degree up to `below * deg p`.
        if below > 1 && below * below * p.degree(Var(k as u32)) as usize > MAX_SAMPLE_DEGREE {
            return None;
        }
        match isolate_roots_at(p, s) {
            RootsAt::Roots(r) => roots.extend(r),
            RootsAt::Nullified => return None,
        }
    }
    roots.sort();
    roots.dedup();
    // Sectors first: their samples are rational and cheap to lift over.
    let mut samples = Vec::with_capacity(2 * roots.len() + 1);
    let mut lower = Bound::NegInfinity;
    for r in &roots {
        let upper = Bound::Value(r.clone());
        samples.push(pick_value_in(&lower, &upper).expect("sector between distinct roots"));
        lower = upper;
    }
    samples.push(pick_value_in(&lower, &Bound::PosInfinity).expect("unbounded sector"));
    samples.extend(roots);
    let exists = quantifiers[k - 1] == Quantifier::Exists;
    let mut undecided = false;
    for v in samples {
        if below * degree(&v) > MAX_SAMPLE_DEGREE {
            undecided = true;
            continue;
        }
        s.push(v);
        let r = lift(matrix, quantifiers, levels, s);
        s.pop();
        match r {
            Some(b) if b == exists => return Some(exists),
            Some(_) => {}
            None => undecided = true,
        }
    }
    (!undecided).then_some(!exists)
}

fn degree(a: &RealAlgebraic) -> usize {
    match a {
        RealAlgebraic::Rational(_) => 1,
        RealAlgebraic::Algebraic(r) => r.degree(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use calc_core::formula::Rel;

    fn x(i: u32) -> Polynomial {
        Polynomial::var(Var(i))
    }

    fn c(n: i64) -> Polynomial {
        Polynomial::from_int(n)
    }

    #[test]
    fn circle_sentences() {
        let circle = &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))) - &c(1);
        let inside = Formula::constraint(circle.clone(), Rel::Lt);
        let ey = Formula::Exists(Var(2), Box::new(inside.clone()));
        assert_eq!(cad_decide(&Formula::Forall(Var(1), Box::new(ey.clone()))), Some(false));
        assert_eq!(cad_decide(&Formula::Exists(Var(1), Box::new(ey))), Some(true));
        let on = Formula::constraint(circle, Rel::Eq);
        let f = Formula::Forall(Var(1), Box::new(Formula::Exists(Var(2), Box::new(on))));
        assert_eq!(cad_decide(&f), Some(false));
        let sq = Formula::constraint(&(&x(1) * &x(1)) + &c(1), Rel::Gt);
        assert_eq!(cad_decide(&Formula::Forall(Var(1), Box::new(sq))), Some(true));
    }

    #[test]
    fn free_variables_are_existential() {
        let f = Formula::constraint(&(&x(1) * &x(2)) - &c(1), Rel::Eq);
        assert_eq!(cad_decide(&f), Some(true));
        let g = Formula::and([
            Formula::constraint(&x(1) * &x(1), Rel::Lt),
            Formula::constraint(x(2), Rel::Gt),
        ]);
        assert_eq!(cad_decide(&g), Some(false));
    }

    #[test]
    fn nullification_is_reported() {
        // x1*x3 + x2 vanishes identically over (0, 0).
        let p = &(&x(1) * &x(3)) + &x(2);
        let matrix = Formula::or([Formula::constraint(p, Rel::Eq), Formula::constraint(x(2), Rel::Ne)]);
        let f = Formula::Forall(
            Var(1),
            Box::new(Formula::Forall(Var(2), Box::new(Formula::Exists(Var(3), Box::new(matrix))))),
        );
        assert_eq!(cad_decide(&f), None);
    }
}
