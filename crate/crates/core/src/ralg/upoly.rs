//! Dense univariate helpers over `Z` and `Q` used by root isolation and
//! algebraic-number refinement. Coefficients are stored ascending.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Rational, Sign};

pub(crate) fn trim_rat(c: &mut Vec<Rational>) {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

pub(crate) fn degree_rat(c: &[Rational]) -> usize {
    c.iter().rposition(|a| !a.is_zero()).unwrap_or(0)
}

/// Clears denominators and removes the integer content; the leading
/// coefficient is made positive.
pub(crate) fn primitive_integer(c: &[Rational]) -> Vec<BigInt> {
    let mut c = c.to_vec();
    trim_rat(&mut c);
    let den = c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let mut ints: Vec<BigInt> = c
        .iter()
        .map(|a| (a * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if !g.is_zero() && !g.is_one() {
        for a in &mut ints {
            *a /= &g;
        }
    }
    if ints.last().is_some_and(Signed::is_negative) {
        for a in &mut ints {
            *a = -a.clone();
        }
    }
    ints
}

pub(crate) fn to_rational(c: &[BigInt]) -> Vec<Rational> {
    c.iter().map(|a| Rational::from_integer(a.clone())).collect()
}

pub(crate) fn eval_int(c: &[BigInt], x: &Rational) -> Rational {
    // sum a_k n^k d^(deg-k), divided by d^deg
    let n = x.numer();
    let d = x.denom();
    let deg = c.len().saturating_sub(1);
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for a in c.iter().rev() {
        acc = acc * n + a * &dpow;
        dpow *= d;
    }
    Rational::new(acc, num_traits::pow(d.clone(), deg))
}

pub(crate) fn sign_int_at(c: &[BigInt], x: &Rational) -> Sign {
    Sign::of(&eval_int(c, x))
}

#[cfg(test)]
pub(crate) fn eval_rat(c: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for a in c.iter().rev() {
        acc = acc * x + a;
    }
    acc
}

pub(crate) fn derivative_rat(c: &[Rational]) -> Vec<Rational> {
    if c.len() <= 1 {
        return vec![Rational::zero()];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a * Rational::from_integer(BigInt::from(k)))
        .collect()
}

/// Polynomial division over `Q`: returns (quotient, remainder).
pub(crate) fn divrem_rat(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = degree_rat(b);
    let lb = b[db].clone();
    assert!(!lb.is_zero(), "division by zero polynomial");
    let mut r = a.to_vec();
    trim_rat(&mut r);
    let da = degree_rat(&r);
    if da < db || is_zero_rat(&r) {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); da - db + 1];
    for dr in (db..=da).rev() {
        let t = &r[dr] / &lb;
        if !t.is_zero() {
            for k in 0..=db {
                let sub = &t * &b[k];
                r[k + dr - db] -= sub;
            }
        }
        q[dr - db] = t;
    }
    r.truncate(db.max(1));
    if db == 0 {
        r[0] = Rational::zero();
    }
    trim_rat(&mut r);
    trim_rat(&mut q);
    (q, r)
}

pub(crate) fn is_zero_rat(c: &[Rational]) -> bool {
    c.iter().all(Zero::is_zero)
}

/// Monic gcd over `Q`.
pub(crate) fn gcd_rat(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim_rat(&mut a);
    trim_rat(&mut b);
    while !is_zero_rat(&b) {
        let (_, r) = divrem_rat(&a, &b);
        a = b;
        b = r;
        // keep coefficients small
        let ints = primitive_integer(&b);
        if !is_zero_rat(&b) {
            b = to_rational(&ints);
        }
    }
    if is_zero_rat(&a) {
        return a;
    }
    let lc = a[degree_rat(&a)].clone();
    a.iter().map(|x| x / &lc).collect()
}

/// Square-free part as a primitive integer polynomial.
pub(crate) fn square_free_part(c: &[Rational]) -> Vec<BigInt> {
    let g = gcd_rat(c, &derivative_rat(c));
    let q = if degree_rat(&g) == 0 {
        c.to_vec()
    } else {
        divrem_rat(c, &g).0
    };
    primitive_integer(&q)
}

/// `p(x + 1)` in place.
pub(crate) fn taylor_shift_one(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

/// `2^n p(x / 2)` where `n = deg p`.
pub(crate) fn scale_half(c: &[BigInt]) -> Vec<BigInt> {
    let n = c.len() - 1;
    c.iter()
        .enumerate()
        .map(|(k, a)| a << (n - k))
        .collect()
}

pub(crate) fn sign_variations(c: &[BigInt]) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for a in c {
        if a.is_zero() {
            continue;
        }
        let pos = a.is_positive();
        if let Some(l) = last {
            if l != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Descartes bound on the number of roots of `q` in the open unit interval.
pub(crate) fn descartes_unit(q: &[BigInt]) -> usize {
    let mut t: Vec<BigInt> = q.iter().rev().cloned().collect();
    taylor_shift_one(&mut t);
    sign_variations(&t)
}

/// `p(a + w x)` for rationals `a`, `w`, as a primitive integer polynomial.
pub(crate) fn affine_substitute(c: &[BigInt], a: &Rational, w: &Rational) -> Vec<BigInt> {
    // Horner in the polynomial ring: acc = acc * (a + w x) + c_k
    let mut acc: Vec<Rational> = vec![Rational::zero()];
    for ck in c.iter().rev() {
        let mut next = vec![Rational::zero(); acc.len() + 1];
        for (k, v) in acc.iter().enumerate() {
            next[k] += v * a;
            next[k + 1] += v * w;
        }
        next[0] += Rational::from_integer(ck.clone());
        acc = next;
    }
    primitive_integer(&acc)
}

/// Upper bound `2^k` on the absolute values of all complex roots.
pub(crate) fn root_bound_pow2(c: &[BigInt]) -> u64 {
    let n = c.len() - 1;
    let lc = c[n].abs();
    let max = c[..n]
        .iter()
        .map(|a| Rational::new(a.abs(), lc.clone()))
        .max()
        .unwrap_or_else(Rational::zero);
    let bound = max + Rational::one();
    let mut k = 0u64;
    let mut p = Rational::one();
    while p <= bound {
        p *= Rational::from_integer(BigInt::from(2));
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn integer_evaluation_matches_rational() {
        let p = ints(&[-2, 3, 0, 5]);
        let pr = to_rational(&p);
        for x in [r(1, 2), r(-7, 3), r(0, 1), r(5, 1)] {
            assert_eq!(eval_int(&p, &x), eval_rat(&pr, &x));
        }
    }

    #[test]
    fn gcd_and_square_free() {
        // (x-1)^2 (x+2)
        let p = to_rational(&ints(&[2, -3, 0, 1]));
        assert_eq!(square_free_part(&p), ints(&[-2, 1, 1]));
        let g = gcd_rat(&to_rational(&ints(&[-1, 0, 1])), &to_rational(&ints(&[-1, 1])));
        assert_eq!(g, to_rational(&ints(&[-1, 1])));
    }

    #[test]
    fn taylor_shift() {
        let mut p = ints(&[0, 0, 1]);
        taylor_shift_one(&mut p);
        assert_eq!(p, ints(&[1, 2, 1]));
    }

    #[test]
    fn division_with_remainder() {
        let (q, rem) = divrem_rat(&to_rational(&ints(&[-1, 0, 1])), &to_rational(&ints(&[1, 1])));
        assert_eq!(q, to_rational(&ints(&[-1, 1])));
        assert!(is_zero_rat(&rem));
    }
}
