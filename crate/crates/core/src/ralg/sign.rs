//! Sign determination and root isolation over sample points whose
//! coordinates may be irrational.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::isolate::isolate_integer;
use super::number::{AlgebraicRoot, RealAlgebraic};
use super::upoly::primitive_integer;
use crate::poly::{cmp_q, max_q, min_q, prem, resultant_unchecked, Monomial, Polynomial, Rational, Sign, Var};

const FAST_ROUNDS: usize = 6;

#[derive(Clone, Debug)]
struct Iv {
    lo: Rational,
    hi: Rational,
}

impl Iv {
    fn point(r: Rational) -> Self {
        Iv { lo: r.clone(), hi: r }
    }

    fn add(&self, o: &Iv) -> Iv {
        Iv {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn mul(&self, o: &Iv) -> Iv {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min_by(|a, b| cmp_q(a, b)).unwrap().clone();
        let hi = c.iter().max_by(|a, b| cmp_q(a, b)).unwrap().clone();
        Iv { lo, hi }
    }

    fn scale(&self, k: &Rational) -> Iv {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if cmp_q(&a, &b) != Ordering::Greater {
            Iv { lo: a, hi: b }
        } else {
            Iv { lo: b, hi: a }
        }
    }

    fn pow(&self, e: u32) -> Iv {
        if e == 0 {
            return Iv::point(Rational::one());
        }
        if e % 2 == 0 && self.lo.is_negative() && self.hi.is_positive() {
            let m = max_q(self.lo.abs(), self.hi.abs());
            return Iv {
                lo: Rational::zero(),
                hi: num_traits::pow(m, e as usize),
            };
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if cmp_q(&a, &b) != Ordering::Greater {
            Iv { lo: a, hi: b }
        } else {
            Iv { lo: b, hi: a }
        }
    }

    fn sign(&self) -> Option<Sign> {
        if self.lo.is_positive() {
            Some(Sign::Positive)
        } else if self.hi.is_negative() {
            Some(Sign::Negative)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }
}

type AlgCoords = Vec<(Var, Arc<AlgebraicRoot>)>;

fn eval_box(p: &Polynomial, coords: &AlgCoords) -> Iv {
    let boxes: Vec<(usize, Iv)> = coords
        .iter()
        .map(|(v, a)| {
            let (lo, hi) = a.interval();
            (v.index(), Iv { lo, hi })
        })
        .collect();
    eval_boxes(p, &boxes)
}

fn eval_boxes(p: &Polynomial, boxes: &[(usize, Iv)]) -> Iv {
    let mut acc = Iv::point(Rational::zero());
    for (m, c) in p.terms() {
        let mut t = Iv::point(Rational::one());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let b = &boxes.iter().find(|(k, _)| *k == i + 1).expect("unassigned variable").1;
            t = t.mul(&b.pow(e));
        }
        acc = acc.add(&t.scale(c));
    }
    acc
}

/// Refines the coordinates until `p` over the box is about `wanted` wide.
/// Each coordinate's share of the width is measured with the others fixed
/// at their lower endpoints, and its interval shrinks by the factor its
/// share exceeds `wanted` by, at least halving and at most squaring.
fn sharpen(p: &Polynomial, coords: &AlgCoords, wanted: &Rational) {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let intervals: Vec<(usize, Iv)> = coords
        .iter()
        .map(|(v, a)| {
            let (lo, hi) = a.interval();
            (v.index(), Iv { lo, hi })
        })
        .collect();
    let share = wanted / Rational::from_integer(BigInt::from(4 * coords.len()));
    let mut refined = false;
    for (k, (_, a)) in coords.iter().enumerate() {
        let boxes: Vec<(usize, Iv)> = intervals
            .iter()
            .enumerate()
            .map(|(j, (v, b))| (*v, if j == k { b.clone() } else { Iv::point(b.lo.clone()) }))
            .collect();
        let iv = eval_boxes(p, &boxes);
        let spread = &iv.hi - &iv.lo;
        if cmp_q(&spread, &share) == Ordering::Less {
            continue;
        }
        let w = a.width();
        let factor = min_q(&share / &spread, half.clone());
        a.refine_below(&min_q(max_q(&w * &factor, &w * &w), &w * &half));
        refined = true;
    }
    if !refined {
        for (_, a) in coords {
            a.refine();
        }
    }
}

/// Halves the widest isolating interval among `coords`.
fn refine_widest(coords: &AlgCoords) {
    if let Some((_, a)) = coords.iter().max_by(|(_, a), (_, b)| cmp_q(&a.width(), &b.width())) {
        a.refine();
    }
}

/// Substitutes the rational coordinates of `s` and returns the algebraic
/// coordinates that still occur.
fn reduce(p: &Polynomial, s: &[RealAlgebraic]) -> (Polynomial, AlgCoords) {
    let mut q = p.clone();
    for v in p.vars() {
        if v.index() > s.len() {
            continue;
        }
        if let RealAlgebraic::Rational(r) = &s[v.index() - 1] {
            q = q.substitute(v, r);
        }
    }
    let coords = algebraic_coords(&q, s);
    (q, coords)
}

fn algebraic_coords(q: &Polynomial, s: &[RealAlgebraic]) -> AlgCoords {
    q.vars()
        .into_iter()
        .filter(|v| v.index() <= s.len())
        .filter_map(|v| match &s[v.index() - 1] {
            RealAlgebraic::Algebraic(a) => Some((v, a.clone())),
            RealAlgebraic::Rational(_) => None,
        })
        .collect()
}

/// Exact sign of `p(s)`; every variable of `p` must be assigned by `s`.
pub fn sign_at(p: &Polynomial, s: &[RealAlgebraic]) -> Sign {
    assert!(p.level() <= s.len(), "sample point does not assign all variables");
    let (q, coords) = reduce(p, s);
    sign_reduced(&q, &coords)
}

fn sign_reduced(q: &Polynomial, coords: &AlgCoords) -> Sign {
    if let Some(c) = q.as_constant() {
        return Sign::of(&c);
    }
    if coords.len() == 1 {
        let (v, a) = &coords[0];
        return sign_univariate(&q.to_univariate(*v), a);
    }
    for _ in 0..FAST_ROUNDS {
        if let Some(s) = eval_box(q, coords).sign() {
            return s;
        }
        refine_widest(coords);
    }
    let gap = zero_gap(q, coords);
    loop {
        let iv = eval_box(q, coords);
        if let Some(s) = iv.sign() {
            return s;
        }
        if cmp_q(&iv.lo, &-gap.clone()) == Ordering::Greater && cmp_q(&iv.hi, &gap) == Ordering::Less {
            return Sign::Zero;
        }
        sharpen(q, coords, &gap);
    }
}

/// A positive rational below `|q(coords)|` unless that value is zero.
///
/// Over all `N` conjugate tuples `t`, `L * prod (y - D q(t))` has integer
/// coefficients, where `D` clears the denominators of `q` and `L` is a power
/// product of the leading coefficients of the defining polynomials. Its
/// lowest nonzero coefficient bounds the product of the nonzero values
/// `D q(t)` from below by `1 / L`, and each factor is at most `M`, a bound of
/// `D q` over the Cauchy discs of the conjugates.
fn zero_gap(q: &Polynomial, coords: &AlgCoords) -> Rational {
    let den = q
        .terms()
        .map(|(_, c)| c.denom().clone())
        .fold(BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
    let n: usize = coords.iter().map(|(_, a)| a.degree()).product();
    let mut lead = BigInt::one();
    let mut cauchy = Vec::with_capacity(coords.len());
    for (v, a) in coords {
        let c = a.coefficients();
        let lc = c.last().expect("nonzero defining polynomial").abs();
        let top = c[..c.len() - 1].iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero);
        cauchy.push((v.index(), BigInt::one() + num_integer::Integer::div_ceil(&top, &lc)));
        lead *= num_traits::pow(lc, q.degree(*v) as usize * (n / a.degree()));
    }
    let mut m = BigInt::one();
    for (mono, c) in q.terms() {
        let mut t = (c * Rational::from_integer(den.clone())).to_integer().abs();
        for (i, &e) in mono.exponents().iter().enumerate() {
            if e > 0 {
                let b = &cauchy.iter().find(|(k, _)| *k == i + 1).expect("unassigned variable").1;
                t *= num_traits::pow(b.clone(), e as usize);
            }
        }
        m += t;
    }
    Rational::new(BigInt::one(), den * lead * num_traits::pow(m, n - 1))
}

fn sign_univariate(c: &[Rational], a: &AlgebraicRoot) -> Sign {
    let eval = |a: &AlgebraicRoot| {
        let (lo, hi) = a.interval();
        let x = Iv { lo, hi };
        let mut acc = Iv::point(Rational::zero());
        for k in c.iter().rev() {
            acc = acc.mul(&x).add(&Iv::point(k.clone()));
        }
        acc.sign()
    };
    for _ in 0..3 {
        if let Some(s) = eval(a) {
            return s;
        }
        a.refine();
    }
    if a.is_root_of(c) {
        return Sign::Zero;
    }
    loop {
        if let Some(s) = eval(a) {
            return s;
        }
        a.refine();
    }
}

/// Eliminates the algebraic coordinates from `q` by iterated resultants with
/// their defining polynomials. The result is determined up to a nonzero
/// constant factor.
fn norm(q: &Polynomial, coords: &AlgCoords) -> Polynomial {
    let defining: Vec<(Var, Polynomial)> = coords.iter().map(|(v, a)| (*v, a.defining_polynomial(*v))).collect();
    let mut r = q.clone();
    for (k, (v, d)) in defining.iter().enumerate().rev() {
        if !r.contains_var(*v) {
            continue;
        }
        // Remainders keep the values at every conjugate.
        for (w, e) in &defining[..=k] {
            if r.degree(*w) >= e.degree(*w) {
                r = prem(&r, e, *w);
            }
        }
        r = resultant_unchecked(d, &r, *v);
    }
    r
}

/// Result of isolating the roots of `p(s, x_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootsAt {
    Roots(Vec<RealAlgebraic>),
    Nullified,
}

impl RootsAt {
    pub fn roots(self) -> Option<Vec<RealAlgebraic>> {
        match self {
            RootsAt::Roots(r) => Some(r),
            RootsAt::Nullified => None,
        }
    }
}

/// Real roots of the univariate polynomial `p(s, x_i)` where `i` is the level
/// of `p` and `s` assigns at least `x_1..x_{i-1}`.
pub fn isolate_roots_at(p: &Polynomial, s: &[RealAlgebraic]) -> RootsAt {
    let i = p.level();
    if i == 0 {
        return if p.is_zero() {
            RootsAt::Nullified
        } else {
            RootsAt::Roots(Vec::new())
        };
    }
    let prefix = &s[..i - 1];
    let x = Var(i as u32);
    let (q, _) = reduce(p, prefix);
    let coeffs = q.coeffs_ascending(x);
    let Some(top) = (0..coeffs.len()).rev().find(|&k| {
        let coords = algebraic_coords(&coeffs[k], prefix);
        sign_reduced(&coeffs[k], &coords) != Sign::Zero
    }) else {
        return RootsAt::Nullified;
    };
    if top == 0 {
        return RootsAt::Roots(Vec::new());
    }
    let q = Polynomial::from_coeffs_ascending(x, &coeffs[..=top]);
    let coords = algebraic_coords(&q, prefix);
    if coords.is_empty() {
        return RootsAt::Roots(isolate_integer(&primitive_integer(&q.to_univariate(x))));
    }
    let mut m = norm(&q, &coords);
    if m.is_zero() {
        let y = Var(i as u32 + 1);
        let shifted = norm(&(&q + &Polynomial::var(y)), &coords);
        m = shifted
            .coeffs_ascending(y)
            .into_iter()
            .find(|c| !c.is_zero())
            .expect("norm is monic in y");
    }
    let candidates = isolate_integer(&primitive_integer(&m.to_univariate(x)));
    let mut roots = Vec::new();
    for k in 0..candidates.len() {
        // The interval isolates the candidate among the roots of m, which
        // include every root of q, so a sign change of q across it proves it.
        let (lo, hi) = isolating_interval(&candidates, k);
        let at = |r: &Rational| {
            let qr = q.substitute(x, r);
            sign_reduced(&qr, &algebraic_coords(&qr, prefix))
        };
        let (slo, shi) = (at(&lo), at(&hi));
        let zero = if slo != Sign::Zero && shi != Sign::Zero && slo != shi {
            true
        } else {
            match &candidates[k] {
                RealAlgebraic::Rational(r) => at(r) == Sign::Zero,
                RealAlgebraic::Algebraic(a) => {
                    let mut all = coords.clone();
                    all.push((x, a.clone()));
                    sign_reduced(&q, &all) == Sign::Zero
                }
            }
        };
        if zero {
            roots.push(candidates[k].clone());
        }
    }
    RootsAt::Roots(roots)
}

/// Rational `(lo, hi)` whose closure contains `roots[k]` and no other
/// element of `roots`.
fn isolating_interval(roots: &[RealAlgebraic], k: usize) -> (Rational, Rational) {
    let two = Rational::from_integer(BigInt::from(2));
    let mut eps = Rational::one();
    loop {
        let (lo, hi) = match &roots[k] {
            RealAlgebraic::Rational(r) => (r - &eps, r + &eps),
            RealAlgebraic::Algebraic(a) => a.interval(),
        };
        let mut clear = true;
        for (j, other) in roots.iter().enumerate() {
            if j == k {
                continue;
            }
            let (olo, ohi) = other.enclosure();
            if cmp_q(&olo, &hi) != Ordering::Greater && cmp_q(&ohi, &lo) != Ordering::Less {
                clear = false;
                if let RealAlgebraic::Algebraic(b) = other {
                    b.refine();
                }
            }
        }
        if clear {
            return (lo, hi);
        }
        match &roots[k] {
            RealAlgebraic::Rational(_) => eps = &eps / &two,
            RealAlgebraic::Algebraic(a) => a.refine(),
        }
    }
}

/// Outcome of substituting a sample point into a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialEval {
    /// Every variable was assigned.
    Sign(Sign),
    /// The substituted polynomial is identically zero.
    Nullified,
    /// Only rational coordinates were needed.
    Polynomial(Polynomial),
    /// Irrational coordinates remain; the rational ones are substituted.
    Algebraic(Polynomial),
}

pub fn eval_partial(p: &Polynomial, s: &[RealAlgebraic]) -> PartialEval {
    let j = s.len();
    if p.level() <= j {
        return PartialEval::Sign(sign_at(p, s));
    }
    let (q, coords) = reduce(p, s);
    if coords.is_empty() {
        return if q.is_zero() {
            PartialEval::Nullified
        } else {
            PartialEval::Polynomial(q)
        };
    }
    // Coefficients with respect to the unassigned variables.
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<(Monomial, Rational)>> =
        Default::default();
    for (m, c) in q.terms() {
        let exps = m.exponents();
        let free: Vec<u32> = exps.iter().skip(j).copied().collect();
        let bound: Vec<u32> = exps.iter().take(j).copied().collect();
        groups
            .entry(free)
            .or_default()
            .push((Monomial::from_exponents(bound), c.clone()));
    }
    let nullified = groups.into_values().all(|terms| {
        let c = Polynomial::from_terms(terms);
        sign_reduced(&c, &algebraic_coords(&c, s)) == Sign::Zero
    });
    if nullified {
        PartialEval::Nullified
    } else {
        PartialEval::Algebraic(q)
    }
}

impl RealAlgebraic {
    /// `-self`.
    pub fn neg(&self) -> RealAlgebraic {
        match self {
            RealAlgebraic::Rational(r) => RealAlgebraic::Rational(-r),
            RealAlgebraic::Algebraic(a) => {
                let poly: Vec<BigInt> = a
                    .coefficients()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                    .collect();
                let poly = primitive_integer(&super::upoly::to_rational(&poly));
                let (lo, hi) = a.interval();
                RealAlgebraic::algebraic(poly, -hi, -lo)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::{c, x};
    use crate::ralg::isolate_real_roots;

    fn sqrt2() -> RealAlgebraic {
        isolate_real_roots(&(&(&x(1) * &x(1)) - &c(2))).unwrap()[1].clone()
    }

    fn int(n: i64) -> RealAlgebraic {
        RealAlgebraic::from_int(n)
    }

    #[test]
    fn signs_at_root_two() {
        let s = [sqrt2()];
        assert_eq!(sign_at(&(&(&x(1) * &x(1)) - &c(2)), &s), Sign::Zero);
        assert_eq!(sign_at(&(&x(1) - &c(1)), &s), Sign::Positive);
        assert_eq!(sign_at(&(&x(1) * &x(2)), &[int(0), int(5)]), Sign::Zero);
    }

    #[test]
    fn zero_over_two_algebraic_coordinates() {
        // x1 = sqrt2, x2 = -sqrt2: x1 + x2 = 0 and x1 * x2 + 2 = 0
        let a = sqrt2();
        let b = a.neg();
        let s = [a, b];
        assert_eq!(sign_at(&(&x(1) + &x(2)), &s), Sign::Zero);
        assert_eq!(sign_at(&(&(&x(1) * &x(2)) + &c(2)), &s), Sign::Zero);
        assert_eq!(sign_at(&(&(&x(1) * &x(2)) + &c(1)), &s), Sign::Negative);
        assert_eq!(sign_at(&(&x(1) - &x(2)), &s), Sign::Positive);
    }

    #[test]
    fn roots_over_rational_and_algebraic_points() {
        let circle = &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))) - &c(2);
        let r = isolate_roots_at(&circle, &[int(0)]).roots().unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1], sqrt2());
        let r = isolate_roots_at(&(&x(2) + &c(1)), &[int(0)]).roots().unwrap();
        assert_eq!(r, vec![int(-1)]);
        assert_eq!(isolate_roots_at(&(&x(1) * &x(2)), &[int(0)]), RootsAt::Nullified);
        // at x1 = sqrt2 the circle touches x2 = 0 only
        let r = isolate_roots_at(&circle, &[sqrt2()]).roots().unwrap();
        assert_eq!(r, vec![int(0)]);
        // x2^2 - x1 at x1 = sqrt2 has roots +-2^(1/4)
        let p = &(&x(2) * &x(2)) - &x(1);
        let r = isolate_roots_at(&p, &[sqrt2()]).roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[1].to_f64() - 2f64.powf(0.25)).abs() < 1e-9);
    }

    #[test]
    fn nullification_over_algebraic_point() {
        let p = &(&(&x(1) * &x(1)) - &c(2)) * &x(2);
        assert_eq!(isolate_roots_at(&p, &[sqrt2()]), RootsAt::Nullified);
        assert_eq!(eval_partial(&p, &[sqrt2()]), PartialEval::Nullified);
    }

    #[test]
    fn partial_evaluation() {
        let circle = &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))) - &c(2);
        assert_eq!(
            eval_partial(&circle, &[int(0)]),
            PartialEval::Polynomial(&(&x(2) * &x(2)) - &c(2))
        );
        assert_eq!(eval_partial(&(&x(1) - &c(1)), &[int(1), int(5)]), PartialEval::Sign(Sign::Zero));
    }

    #[test]
    fn negation_of_algebraic() {
        let a = sqrt2();
        assert_eq!(a.neg().neg(), a);
        assert!(a.neg() < int(-1));
    }
}
