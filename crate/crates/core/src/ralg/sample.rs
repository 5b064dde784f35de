use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use num_traits::{One, Zero};

use super::number::RealAlgebraic;
use super::RalgError;
use crate::poly::Rational;

/// A point of `R^i`; coordinate `k` (0-based) assigns `x_{k+1}`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SamplePoint(Vec<RealAlgebraic>);

impl SamplePoint {
    pub fn new() -> Self {
        SamplePoint(Vec::new())
    }

    pub fn from_rationals(values: impl IntoIterator<Item = Rational>) -> Self {
        SamplePoint(values.into_iter().map(RealAlgebraic::Rational).collect())
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn prefix(&self, j: usize) -> SamplePoint {
        SamplePoint(self.0[..j].to_vec())
    }

    /// `s × v`.
    pub fn extended(&self, v: RealAlgebraic) -> SamplePoint {
        let mut c = self.0.clone();
        c.push(v);
        SamplePoint(c)
    }

    pub fn push(&mut self, v: RealAlgebraic) {
        self.0.push(v);
    }

    pub fn pop(&mut self) -> Option<RealAlgebraic> {
        self.0.pop()
    }

    pub fn last(&self) -> Option<&RealAlgebraic> {
        self.0.last()
    }
}

impl From<Vec<RealAlgebraic>> for SamplePoint {
    fn from(v: Vec<RealAlgebraic>) -> Self {
        SamplePoint(v)
    }
}

impl Deref for SamplePoint {
    type Target = [RealAlgebraic];

    fn deref(&self) -> &[RealAlgebraic] {
        &self.0
    }
}

impl fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// An interval endpoint on the extended real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    PosInfinity,
    Value(RealAlgebraic),
}

impl Bound {
    pub fn value(&self) -> Option<&RealAlgebraic> {
        match self {
            Bound::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Value(_))
    }

    /// Compares the bound with a real value.
    pub fn cmp_value(&self, v: &RealAlgebraic) -> Ordering {
        match self {
            Bound::NegInfinity => Ordering::Less,
            Bound::PosInfinity => Ordering::Greater,
            Bound::Value(b) => b.compare(v),
        }
    }

    fn neg(&self) -> Bound {
        match self {
            Bound::NegInfinity => Bound::PosInfinity,
            Bound::PosInfinity => Bound::NegInfinity,
            Bound::Value(v) => Bound::Value(v.neg()),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::NegInfinity, Bound::NegInfinity) | (Bound::PosInfinity, Bound::PosInfinity) => {
                Ordering::Equal
            }
            (Bound::NegInfinity, _) | (_, Bound::PosInfinity) => Ordering::Less,
            (_, Bound::NegInfinity) | (Bound::PosInfinity, _) => Ordering::Greater,
            (Bound::Value(a), Bound::Value(b)) => a.compare(b),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInfinity => write!(f, "-oo"),
            Bound::PosInfinity => write!(f, "oo"),
            Bound::Value(v) => write!(f, "{v}"),
        }
    }
}

/// An open sector `(lower, upper)` or a single point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interval {
    Sector { lower: Bound, upper: Bound },
    Section(RealAlgebraic),
}

impl Interval {
    pub fn whole() -> Self {
        Interval::Sector {
            lower: Bound::NegInfinity,
            upper: Bound::PosInfinity,
        }
    }

    pub fn sector(lower: Bound, upper: Bound) -> Self {
        debug_assert!(lower < upper, "empty sector");
        Interval::Sector { lower, upper }
    }

    pub fn lower(&self) -> Bound {
        match self {
            Interval::Sector { lower, .. } => lower.clone(),
            Interval::Section(v) => Bound::Value(v.clone()),
        }
    }

    pub fn upper(&self) -> Bound {
        match self {
            Interval::Sector { upper, .. } => upper.clone(),
            Interval::Section(v) => Bound::Value(v.clone()),
        }
    }

    pub fn is_section(&self) -> bool {
        matches!(self, Interval::Section(_))
    }

    pub fn contains(&self, v: &RealAlgebraic) -> bool {
        match self {
            Interval::Section(a) => a == v,
            Interval::Sector { lower, upper } => {
                lower.cmp_value(v) == Ordering::Less && upper.cmp_value(v) == Ordering::Greater
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Section(v) => write!(f, "[{v}, {v}]"),
            Interval::Sector { lower, upper } => write!(f, "({lower}, {upper})"),
        }
    }
}

/// Simplest rational in the open interval `(lo, hi)` with `lo >= 0`; `None`
/// stands for `+oo`.
fn simplest_between(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let n = lo.floor();
    let next = &n + Rational::one();
    if hi.map_or(true, |h| &next < h) {
        return next;
    }
    let h = hi.unwrap();
    let inner_lo = (h - &n).recip();
    let inner_hi = if lo == &n {
        None
    } else {
        Some((lo - &n).recip())
    };
    n + simplest_between(&inner_lo, inner_hi.as_ref()).recip()
}

fn simplest_nonnegative(lower: &RealAlgebraic, upper: &Bound) -> Rational {
    loop {
        let (lo, _) = lower.enclosure();
        if lo < Rational::zero() {
            lower.refine();
            continue;
        }
        let hi = upper.value().map(|u| u.enclosure().1);
        let s = simplest_between(&lo, hi.as_ref());
        let sv = RealAlgebraic::Rational(s.clone());
        if lower.compare(&sv) == Ordering::Less && upper.cmp_value(&sv) == Ordering::Greater {
            return s;
        }
        lower.refine();
        if let Some(u) = upper.value() {
            u.refine();
        }
    }
}

/// A rational strictly between the bounds, preferring 0, then the integer
/// of least magnitude, then the rational of least denominator.
pub fn pick_value_in(lower: &Bound, upper: &Bound) -> Result<RealAlgebraic, RalgError> {
    if lower >= upper {
        return Err(RalgError::EmptyRange(lower.clone(), upper.clone()));
    }
    let zero = RealAlgebraic::zero();
    if lower.cmp_value(&zero) == Ordering::Less && upper.cmp_value(&zero) == Ordering::Greater {
        return Ok(zero);
    }
    let r = match lower {
        Bound::Value(l) if l.compare(&zero) != Ordering::Less => simplest_nonnegative(l, upper),
        _ => {
            let Bound::Value(l) = upper.neg() else {
                unreachable!("upper bound is finite when the range excludes 0")
            };
            -simplest_nonnegative(&l, &lower.neg())
        }
    };
    Ok(RealAlgebraic::Rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::{c, x};
    use crate::ralg::isolate_real_roots;

    fn v(n: i64, d: i64) -> Bound {
        Bound::Value(RealAlgebraic::Rational(Rational::new(n.into(), d.into())))
    }

    fn sqrt2() -> RealAlgebraic {
        isolate_real_roots(&(&(&x(1) * &x(1)) - &c(2))).unwrap()[1].clone()
    }

    fn rat(n: i64, d: i64) -> RealAlgebraic {
        RealAlgebraic::Rational(Rational::new(n.into(), d.into()))
    }

    #[test]
    fn preferred_values() {
        assert_eq!(pick_value_in(&Bound::NegInfinity, &Bound::PosInfinity).unwrap(), rat(0, 1));
        assert_eq!(pick_value_in(&v(-1, 1), &Bound::Value(sqrt2())).unwrap(), rat(0, 1));
        assert_eq!(pick_value_in(&Bound::Value(sqrt2()), &v(2, 1)).unwrap(), rat(3, 2));
        assert_eq!(pick_value_in(&v(2, 1), &Bound::PosInfinity).unwrap(), rat(3, 1));
        assert_eq!(pick_value_in(&Bound::NegInfinity, &v(-7, 2)).unwrap(), rat(-4, 1));
        assert_eq!(pick_value_in(&v(1, 3), &v(1, 2)).unwrap(), rat(2, 5));
        assert_eq!(pick_value_in(&v(-1, 2), &v(-1, 3)).unwrap(), rat(-2, 5));
        assert_eq!(pick_value_in(&v(0, 1), &v(1, 1)).unwrap(), rat(1, 2));
        assert_eq!(pick_value_in(&v(0, 1), &v(1, 1000)).unwrap(), rat(1, 1001));
    }

    #[test]
    fn empty_range_is_an_error() {
        assert!(pick_value_in(&v(1, 1), &v(1, 1)).is_err());
        assert!(pick_value_in(&Bound::PosInfinity, &v(1, 1)).is_err());
    }

    #[test]
    fn interval_membership() {
        let i = Interval::sector(v(-1, 1), Bound::Value(sqrt2()));
        assert!(i.contains(&rat(7, 5)));
        assert!(!i.contains(&sqrt2()));
        assert!(Interval::Section(sqrt2()).contains(&sqrt2()));
    }
}
