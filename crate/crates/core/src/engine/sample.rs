use num_traits::Signed;

use crate::cells::{gaps, Gap};
use crate::poly::Rational;
use crate::ralg::{pick_value_in, Bound, Interval, RealAlgebraic};

/// A value outside all `excluded` intervals, or `None` if they cover the
/// real line. Preference: 0, an integer below all intervals, an integer
/// above all intervals, the rational of least denominator in a gap, and an
/// irrational isolated gap point only when nothing else is left.
pub fn sample_outside(excluded: &[&Interval]) -> Option<RealAlgebraic> {
    let gaps = gaps(excluded.iter().copied());
    if gaps.is_empty() {
        return None;
    }
    let free = |v: &RealAlgebraic| gaps.iter().any(|g| g.contains(v));
    let zero = RealAlgebraic::zero();
    if free(&zero) {
        return Some(zero);
    }
    let lowest = excluded.iter().map(|i| i.lower()).min();
    if let Some(Bound::Value(l)) = lowest {
        let k = RealAlgebraic::Rational(Rational::from_integer(l.floor()));
        if free(&k) {
            return Some(k);
        }
        return Some(RealAlgebraic::Rational(Rational::from_integer(l.floor() - 1)));
    }
    let highest = excluded.iter().map(|i| i.upper()).max();
    if let Some(Bound::Value(u)) = highest {
        let k = RealAlgebraic::Rational(Rational::from_integer(u.ceil()));
        if free(&k) {
            return Some(k);
        }
        return Some(RealAlgebraic::Rational(Rational::from_integer(u.ceil() + 1)));
    }
    let key = |r: &Rational| (r.denom().clone(), r.numer().abs());
    let mut best: Option<Rational> = None;
    for g in &gaps {
        let cand = match g {
            Gap::Open(l, u) => pick_value_in(l, u).ok().and_then(|v| v.as_rational().cloned()),
            Gap::Point(v) => v.as_rational().cloned(),
        };
        if let Some(c) = cand {
            if best.as_ref().map_or(true, |b| key(&c) < key(b)) {
                best = Some(c);
            }
        }
    }
    if let Some(b) = best {
        return Some(RealAlgebraic::Rational(b));
    }
    gaps.into_iter().find_map(|g| match g {
        Gap::Point(v) => Some(v),
        Gap::Open(..) => None,
    })
}
