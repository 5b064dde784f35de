use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::isolate::isolate_integer;
use super::upoly::{self, eval_int, gcd_rat, primitive_integer, sign_int_at, to_rational};
use crate::poly::{cmp_q, max_q, min_q, Polynomial, Rational, Sign, Var};

/// An irrational real root of a square-free integer polynomial together with
/// an isolating interval that is shrunk in place on demand.
pub struct AlgebraicRoot {
    poly: Vec<BigInt>,
    lower_sign: Sign,
    interval: Mutex<(Rational, Rational)>,
}

impl AlgebraicRoot {
    pub(crate) fn new(poly: Vec<BigInt>, lo: Rational, hi: Rational) -> Self {
        let lower_sign = sign_int_at(&poly, &lo);
        debug_assert!(lower_sign != Sign::Zero);
        debug_assert_eq!(sign_int_at(&poly, &hi), lower_sign.negate());
        AlgebraicRoot {
            poly,
            lower_sign,
            interval: Mutex::new((lo, hi)),
        }
    }

    /// Ascending integer coefficients of the defining polynomial.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn interval(&self) -> (Rational, Rational) {
        self.interval.lock().unwrap().clone()
    }

    pub fn width(&self) -> Rational {
        let g = self.interval.lock().unwrap();
        &g.1 - &g.0
    }

    /// Halves the isolating interval.
    pub fn refine(&self) {
        let mut g = self.interval.lock().unwrap();
        let mid = (&g.0 + &g.1) / Rational::from_integer(BigInt::from(2));
        if sign_int_at(&self.poly, &mid) == self.lower_sign {
            g.0 = mid;
        } else {
            g.1 = mid;
        }
    }

    /// Shrinks the isolating interval below `width`, by Newton steps where
    /// they can be confirmed and by bisection otherwise.
    pub fn refine_below(&self, width: &Rational) {
        loop {
            let (lo, hi) = self.interval();
            let w = &hi - &lo;
            if cmp_q(&w, width) == Ordering::Less {
                return;
            }
            if !self.newton_step(&lo, &hi, &w, width) {
                self.refine();
            }
        }
    }

    /// Replaces the interval by a bracket of half-width about `w^2` around
    /// the Newton iterate from the midpoint if the polynomial changes sign
    /// across it.
    fn newton_step(&self, lo: &Rational, hi: &Rational, w: &Rational, width: &Rational) -> bool {
        let two = Rational::from_integer(BigInt::from(2));
        let mid = (lo + hi) / &two;
        let derivative: Vec<BigInt> = self.poly.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect();
        let slope = eval_int(&derivative, &mid);
        if slope.is_zero() {
            return false;
        }
        let x = &mid - eval_int(&self.poly, &mid) / slope;
        let target = max_q(min_q(w * w, w / Rational::from_integer(BigInt::from(8))), width / &two / &two);
        // A power of two at most target, and x rounded to a grid of a
        // quarter of it, keep the endpoints dyadic and short.
        let k = (target.denom().bits() as i64 - target.numer().bits() as i64 + 1).max(0) as usize;
        let half = Rational::new(BigInt::one(), BigInt::one() << k);
        let scale = BigInt::one() << (k + 2);
        let x = Rational::new((x * Rational::from_integer(scale.clone())).floor().to_integer(), scale);
        let a = max_q(&x - &half, lo.clone());
        let b = min_q(&x + &half, hi.clone());
        if cmp_q(&(&b - &a), &(w / &two)) != Ordering::Less {
            return false;
        }
        let sa = if cmp_q(&a, lo) == Ordering::Equal { self.lower_sign } else { sign_int_at(&self.poly, &a) };
        let sb = if cmp_q(&b, hi) == Ordering::Equal { self.lower_sign.negate() } else { sign_int_at(&self.poly, &b) };
        if sa != self.lower_sign || sb != self.lower_sign.negate() {
            return false;
        }
        *self.interval.lock().unwrap() = (a, b);
        true
    }

    /// Narrows the interval using a rational `r` known not to be the root.
    fn cut_at(&self, r: &Rational) -> Ordering {
        let s = sign_int_at(&self.poly, r);
        let mut g = self.interval.lock().unwrap();
        if cmp_q(r, &g.0) != Ordering::Greater {
            return Ordering::Greater;
        }
        if cmp_q(r, &g.1) != Ordering::Less {
            return Ordering::Less;
        }
        if s == self.lower_sign {
            g.0 = r.clone();
            Ordering::Greater
        } else {
            g.1 = r.clone();
            Ordering::Less
        }
    }

    pub fn defining_polynomial(&self, v: Var) -> Polynomial {
        Polynomial::from_univariate(v, &to_rational(&self.poly))
    }

    /// Whether the root is a root of the univariate polynomial `q`.
    pub(crate) fn is_root_of(&self, q: &[Rational]) -> bool {
        let g = gcd_rat(q, &to_rational(&self.poly));
        if upoly::degree_rat(&g) == 0 {
            return false;
        }
        let (lo, hi) = self.interval();
        let g = primitive_integer(&g);
        sign_int_at(&g, &lo) != sign_int_at(&g, &hi)
    }
}

/// A real algebraic number, stored in rational form whenever possible.
#[derive(Clone)]
pub enum RealAlgebraic {
    Rational(Rational),
    Algebraic(Arc<AlgebraicRoot>),
}

impl RealAlgebraic {
    pub fn from_int(n: i64) -> Self {
        RealAlgebraic::Rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        RealAlgebraic::from_int(0)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealAlgebraic::Rational(r) => Some(r),
            RealAlgebraic::Algebraic(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, RealAlgebraic::Rational(_))
    }

    /// Closed rational enclosure `[lo, hi]`.
    pub fn enclosure(&self) -> (Rational, Rational) {
        match self {
            RealAlgebraic::Rational(r) => (r.clone(), r.clone()),
            RealAlgebraic::Algebraic(a) => a.interval(),
        }
    }

    pub fn refine(&self) {
        if let RealAlgebraic::Algebraic(a) = self {
            a.refine();
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealAlgebraic::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            RealAlgebraic::Algebraic(a) => {
                a.refine_below(&Rational::new(BigInt::one(), BigInt::from(1u64 << 50)));
                let (lo, hi) = a.interval();
                ((lo + hi) / Rational::from_integer(BigInt::from(2)))
                    .to_f64()
                    .unwrap_or(f64::NAN)
            }
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        match self {
            RealAlgebraic::Rational(r) => r.floor().to_integer(),
            RealAlgebraic::Algebraic(a) => loop {
                let (lo, hi) = a.interval();
                let f = lo.floor();
                if hi <= f.clone() + Rational::one() {
                    return f.to_integer();
                }
                a.refine();
            },
        }
    }

    pub fn ceil(&self) -> BigInt {
        match self {
            RealAlgebraic::Rational(r) => r.ceil().to_integer(),
            RealAlgebraic::Algebraic(_) => self.floor() + BigInt::one(),
        }
    }

    /// Defining polynomial in variable `v`; `v - r` for rationals.
    pub fn defining_polynomial(&self, v: Var) -> Polynomial {
        match self {
            RealAlgebraic::Rational(r) => {
                Polynomial::var(v) - Polynomial::constant(r.clone())
            }
            RealAlgebraic::Algebraic(a) => a.defining_polynomial(v),
        }
    }

    pub fn sign(&self) -> Sign {
        self.compare(&RealAlgebraic::zero()).into()
    }

    pub fn compare(&self, other: &RealAlgebraic) -> Ordering {
        match (self, other) {
            (RealAlgebraic::Rational(a), RealAlgebraic::Rational(b)) => cmp_q(a, b),
            (RealAlgebraic::Algebraic(a), RealAlgebraic::Rational(r)) => a.cut_at(r),
            (RealAlgebraic::Rational(r), RealAlgebraic::Algebraic(a)) => a.cut_at(r).reverse(),
            (RealAlgebraic::Algebraic(a), RealAlgebraic::Algebraic(b)) => compare_algebraic(a, b),
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            RealAlgebraic::Rational(a) => cmp_q(a, r),
            RealAlgebraic::Algebraic(a) => a.cut_at(r),
        }
    }
}

impl From<Ordering> for Sign {
    fn from(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

fn disjoint(a: &AlgebraicRoot, b: &AlgebraicRoot) -> Option<Ordering> {
    let (alo, ahi) = a.interval();
    let (blo, bhi) = b.interval();
    if cmp_q(&ahi, &blo) != Ordering::Greater {
        Some(Ordering::Less)
    } else if cmp_q(&bhi, &alo) != Ordering::Greater {
        Some(Ordering::Greater)
    } else {
        None
    }
}

fn compare_algebraic(a: &Arc<AlgebraicRoot>, b: &Arc<AlgebraicRoot>) -> Ordering {
    if Arc::ptr_eq(a, b) {
        return Ordering::Equal;
    }
    for _ in 0..4 {
        if let Some(o) = disjoint(a, b) {
            return o;
        }
        a.refine();
        b.refine();
    }
    if same_root(a, b) {
        return Ordering::Equal;
    }
    loop {
        if let Some(o) = disjoint(a, b) {
            return o;
        }
        a.refine();
        b.refine();
    }
}

fn same_root(a: &AlgebraicRoot, b: &AlgebraicRoot) -> bool {
    let g = gcd_rat(&to_rational(&a.poly), &to_rational(&b.poly));
    if upoly::degree_rat(&g) == 0 {
        return false;
    }
    let g = primitive_integer(&g);
    let (alo, ahi) = a.interval();
    let (blo, bhi) = b.interval();
    let changes = |lo: &Rational, hi: &Rational| sign_int_at(&g, lo) != sign_int_at(&g, hi);
    if !changes(&alo, &ahi) || !changes(&blo, &bhi) {
        return false;
    }
    // Both are roots of g; they coincide iff g has a single root in the hull.
    let lo = min_q(alo, blo);
    let hi = max_q(ahi, bhi);
    let roots = isolate_integer(&g);
    roots
        .iter()
        .filter(|r| r.cmp_rational(&lo) == Ordering::Greater && r.cmp_rational(&hi) == Ordering::Less)
        .count()
        == 1
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlgebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<Rational> for RealAlgebraic {
    fn from(r: Rational) -> Self {
        RealAlgebraic::Rational(r)
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealAlgebraic::Rational(r) => crate::poly::fmt_rational(r, f),
            RealAlgebraic::Algebraic(_) => write!(f, "~{:.6}", self.to_f64()),
        }
    }
}

impl fmt::Debug for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealAlgebraic::Rational(r) => write!(f, "{r}"),
            RealAlgebraic::Algebraic(a) => {
                let (lo, hi) = a.interval();
                let p = a.defining_polynomial(Var(1));
                write!(f, "root({p}, ({lo}, {hi}))")
            }
        }
    }
}

/// Value of `x` at the root as an exact rational if `x` is a polynomial with
/// a rational root inside the interval. Used to canonicalize isolated roots.
pub(crate) fn rational_root_in(poly: &[BigInt], lo: &Rational, hi: &Rational) -> Option<Rational> {
    let lc = poly.last().unwrap().abs();
    let step = Rational::new(BigInt::one(), lc.clone());
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let lower_sign = sign_int_at(poly, &lo);
    let two = Rational::from_integer(BigInt::from(2));
    while &hi - &lo >= step {
        let mid = (&lo + &hi) / &two;
        match sign_int_at(poly, &mid) {
            Sign::Zero => return Some(mid),
            s if s == lower_sign => lo = mid,
            _ => hi = mid,
        }
    }
    // At most one multiple of 1/lc lies strictly inside.
    let scaled = &lo * Rational::from_integer(lc.clone());
    let k = scaled.floor().to_integer() + BigInt::one();
    let cand = Rational::new(k, lc);
    if cand > lo && cand < hi && eval_int(poly, &cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

/// Divides out `(x - r)` from an integer polynomial, returning a primitive
/// integer polynomial.
pub(crate) fn deflate(poly: &[BigInt], r: &Rational) -> Vec<BigInt> {
    let lin = vec![-r.clone(), Rational::one()];
    let (q, rem) = upoly::divrem_rat(&to_rational(poly), &lin);
    debug_assert!(upoly::is_zero_rat(&rem));
    primitive_integer(&q)
}

impl RealAlgebraic {
    pub(crate) fn algebraic(poly: Vec<BigInt>, lo: Rational, hi: Rational) -> Self {
        RealAlgebraic::Algebraic(Arc::new(AlgebraicRoot::new(poly, lo, hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ralg::isolate_real_roots;

    fn x() -> Polynomial {
        Polynomial::var(Var(1))
    }

    #[test]
    fn refinement_keeps_the_root_bracketed() {
        let tiny = Rational::new(BigInt::one(), BigInt::one() << 4000usize);
        let p = &(&x() * &x()) - &Polynomial::from_int(2);
        let q = &(&(&x().pow(7) - &(&Polynomial::from_int(3) * &x().pow(4))) + &x()) - &Polynomial::from_int(1);
        for poly in [p, q] {
            for r in isolate_real_roots(&poly).unwrap() {
                let RealAlgebraic::Algebraic(a) = r else { continue };
                a.refine_below(&tiny);
                let (lo, hi) = a.interval();
                assert!(cmp_q(&(&hi - &lo), &tiny) == Ordering::Less);
                assert_eq!(sign_int_at(&a.poly, &lo), a.lower_sign);
                assert_eq!(sign_int_at(&a.poly, &hi), a.lower_sign.negate());
            }
        }
    }
}
