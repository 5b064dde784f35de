//! Descartes-rule bisection on dyadic subintervals of a power-of-two bound.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::number::{deflate, rational_root_in, RealAlgebraic};
use super::upoly::{
    affine_substitute, descartes_unit, root_bound_pow2, scale_half, square_free_part,
    taylor_shift_one, to_rational,
};
use super::RalgError;
use crate::poly::{Polynomial, Rational};

enum Found {
    Exact(Rational),
    Open(Rational, Rational),
}

fn descartes(p: &[BigInt], k: u64) -> Vec<Found> {
    let b = Rational::from_integer(BigInt::one() << k);
    let a = -b.clone();
    let w = &b + &b;
    let q0 = affine_substitute(p, &a, &w);
    let mut stack = vec![(q0, BigInt::zero(), 0u64)];
    let mut out = Vec::new();
    while let Some((q, c, d)) = stack.pop() {
        let v = descartes_unit(&q);
        if v == 0 {
            continue;
        }
        let scale = Rational::new(BigInt::one(), BigInt::one() << d);
        let at = |t: &BigInt| &a + &w * &scale * Rational::from_integer(t.clone());
        if v == 1 {
            out.push(Found::Open(at(&c), at(&(&c + 1))));
            continue;
        }
        let ql = scale_half(&q);
        let mut qr = ql.clone();
        taylor_shift_one(&mut qr);
        if qr[0].is_zero() {
            let two_c1 = BigInt::from(2) * &c + 1;
            out.push(Found::Exact(&a + &w * &scale * Rational::new(two_c1, BigInt::from(2))));
        }
        stack.push((ql, BigInt::from(2) * &c, d + 1));
        stack.push((qr, BigInt::from(2) * &c + 1, d + 1));
    }
    out
}

/// All distinct real roots of an integer polynomial, increasing.
pub(crate) fn isolate_integer(p: &[BigInt]) -> Vec<RealAlgebraic> {
    let p = square_free_part(&to_rational(p));
    if p.len() <= 1 {
        return Vec::new();
    }
    let k = root_bound_pow2(&p);
    let first = descartes(&p, k);
    let mut exact: Vec<Rational> = Vec::new();
    let mut opens: Vec<(Rational, Rational)> = Vec::new();
    for f in first {
        match f {
            Found::Exact(r) => exact.push(r),
            Found::Open(lo, hi) => opens.push((lo, hi)),
        }
    }
    let mut reduced = p.clone();
    if !exact.is_empty() {
        for r in &exact {
            reduced = deflate(&reduced, r);
        }
        opens.clear();
        if reduced.len() > 1 {
            for f in descartes(&reduced, k) {
                if let Found::Open(lo, hi) = f {
                    opens.push((lo, hi));
                }
            }
        }
    }
    let mut irrational = Vec::new();
    for (lo, hi) in opens {
        match rational_root_in(&reduced, &lo, &hi) {
            Some(r) => exact.push(r),
            None => irrational.push((lo, hi)),
        }
    }
    let mut defining = reduced;
    for r in &exact {
        if defining.len() > 1 && super::upoly::eval_int(&defining, r).is_zero() {
            defining = deflate(&defining, r);
        }
    }
    let mut roots: Vec<RealAlgebraic> = exact.into_iter().map(RealAlgebraic::Rational).collect();
    for (lo, hi) in irrational {
        roots.push(RealAlgebraic::algebraic(defining.clone(), lo, hi));
    }
    roots.sort_by(RealAlgebraic::compare);
    roots
}

/// All distinct real roots of a univariate polynomial, increasing; rational
/// roots come back in rational form.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<RealAlgebraic>, RalgError> {
    if p.is_zero() {
        return Err(RalgError::ZeroPolynomial);
    }
    let Some(v) = p.main_var() else {
        return Ok(Vec::new());
    };
    if p.vars().len() != 1 {
        return Err(RalgError::NotUnivariate(p.clone()));
    }
    Ok(isolate_integer(&super::upoly::primitive_integer(&p.to_univariate(v))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::{c, x};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn square_root_of_two() {
        let roots = isolate_real_roots(&(&(&x(1) * &x(1)) - &c(2))).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| !r.is_rational()));
        assert!((roots[0].to_f64() + 2f64.sqrt()).abs() < 1e-9);
        assert!((roots[1].to_f64() - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn no_real_roots_and_double_root() {
        assert!(isolate_real_roots(&(&(&x(1) * &x(1)) + &c(1))).unwrap().is_empty());
        let sq = &(&x(1) - &c(1)) * &(&x(1) - &c(1));
        let roots = isolate_real_roots(&sq).unwrap();
        assert_eq!(roots, vec![RealAlgebraic::from_int(1)]);
        assert!(roots[0].is_rational());
    }

    #[test]
    fn rational_roots_off_the_dyadic_grid() {
        // (3x - 1)(x + 2)(x^2 - 3)
        let roots = isolate_integer(&ints(&[6, -15, -11, 5, 3]));
        let f: Vec<f64> = roots.iter().map(RealAlgebraic::to_f64).collect();
        let expect = [-2.0, -(3f64.sqrt()), 1.0 / 3.0, 3f64.sqrt()];
        assert_eq!(f.len(), 4);
        for (a, b) in f.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(roots[0].is_rational() && roots[2].is_rational());
        assert_eq!(roots[2].as_rational(), Some(&Rational::new(1.into(), 3.into())));
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(isolate_real_roots(&Polynomial::zero()).is_err());
    }
}
