//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are identified by their 1-based position in a global ordering
//! `x1 < x2 < ... < xn`. The *level* of a polynomial is the index of the
//! highest variable it mentions (0 for constants). Terms are kept in a
//! `BTreeMap` keyed by monomials ordered lexicographically with the highest
//! variable most significant, so structural equality is mathematical
//! equality and the last entry is the leading term.

mod algorithms;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) use algorithms::{prem, resultant_unchecked};
pub use algorithms::{
    coprime_basis, discriminant, div_exact, gcd, refine_basis, resultant, square_free_factors,
    PolyError,
};

pub type Rational = BigRational;

/// Orders rationals by cross-multiplication. The `Ord` of `Ratio` recurses
/// along the common continued fraction prefix, which is deep for the close
/// endpoints of refined intervals.
pub(crate) fn cmp_q(a: &Rational, b: &Rational) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub(crate) fn min_q(a: Rational, b: Rational) -> Rational {
    if cmp_q(&a, &b) == Ordering::Greater {
        b
    } else {
        a
    }
}

pub(crate) fn max_q(a: Rational, b: Rational) -> Rational {
    if cmp_q(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

/// A variable, identified by its 1-based index in the global ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed + Zero>(value: &T) -> Sign {
        if value.is_zero() {
            Sign::Zero
        } else if value.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// Exponent vector; entry `k` is the exponent of `x_{k+1}`. Trailing zeros
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(v: Var, exp: u32) -> Self {
        let mut exps = vec![0; v.index()];
        exps[v.index() - 1] = exp;
        Monomial::from_exponents(exps)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.get(v.index() - 1).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let exps = (0..len)
            .map(|k| self.0.get(k).copied().unwrap_or(0) + other.0.get(k).copied().unwrap_or(0))
            .collect();
        Monomial(exps)
    }

    fn with_exponent(&self, v: Var, exp: u32) -> Monomial {
        let mut exps = self.0.clone();
        if exps.len() < v.index() {
            exps.resize(v.index(), 0);
        }
        exps[v.index() - 1] = exp;
        Monomial::from_exponents(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::monomial(Rational::one(), Monomial::var(v, 1))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Index of the main variable; 0 for constants.
    pub fn level(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Monomial::level)
    }

    pub fn main_var(&self) -> Option<Var> {
        match self.level() {
            0 => None,
            l => Some(Var(l as u32)),
        }
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Variables occurring in the polynomial, ascending.
    pub fn vars(&self) -> Vec<Var> {
        let level = self.level();
        (1..=level as u32)
            .map(Var)
            .filter(|&v| self.contains_var(v))
            .collect()
    }

    /// `(level, deg_x(p))`.
    pub fn level_and_degree(&self, x: Var) -> (usize, u32) {
        (self.level(), self.degree(x))
    }

    /// Coefficient of the leading monomial in the canonical order.
    pub fn leading_coefficient(&self) -> Rational {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficients w.r.t. `v`, index `k` holding the coefficient of `v^k`.
    pub fn coeffs_ascending(&self, v: Var) -> Vec<Polynomial> {
        let deg = self.degree(v) as usize;
        let mut out = vec![Polynomial::zero(); deg + 1];
        if self.is_zero() {
            return vec![Polynomial::zero()];
        }
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            out[e].add_term(m.with_exponent(v, 0), c.clone());
        }
        out
    }

    /// Coefficients w.r.t. `x`, highest degree first.
    pub fn coefficients(&self, x: Var) -> Vec<Polynomial> {
        let mut c = self.coeffs_ascending(x);
        c.reverse();
        c
    }

    pub fn from_coeffs_ascending(v: Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                p.add_term(m.with_exponent(v, m.exponent(v) + k as u32), a.clone());
            }
        }
        p
    }

    /// Leading coefficient w.r.t. `v` (a polynomial not containing `v`).
    pub fn lc_in(&self, v: Var) -> Polynomial {
        self.coeffs_ascending(v).pop().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, v: Var, k: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.with_exponent(v, m.exponent(v) + k), a.clone()))
                .collect(),
        }
    }

    /// Partial derivative.
    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                p.add_term(
                    m.with_exponent(v, e - 1),
                    c * Rational::from_integer(BigInt::from(e)),
                );
            }
        }
        p
    }

    /// Substitutes a rational value for `v`.
    pub fn substitute(&self, v: Var, value: &Rational) -> Polynomial {
        let mut p = Polynomial::zero();
        let mut powers: Vec<Rational> = vec![Rational::one()];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            p.add_term(m.with_exponent(v, 0), c * &powers[e]);
        }
        p
    }

    /// Substitutes rational values for every variable in the map.
    pub fn substitute_all(&self, values: &[(Var, Rational)]) -> Polynomial {
        values
            .iter()
            .fold(self.clone(), |p, (v, r)| p.substitute(*v, r))
    }

    /// Evaluates at a full rational point; `point[k]` is the value of `x_{k+1}`.
    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[k].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Renames variables through `map` (old index - 1 -> new variable).
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut exps: Vec<u32> = Vec::new();
            for (k, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let nv = map(Var(k as u32 + 1));
                if exps.len() < nv.index() {
                    exps.resize(nv.index(), 0);
                }
                exps[nv.index() - 1] += e;
            }
            p.add_term(Monomial::from_exponents(exps), c.clone());
        }
        p
    }

    /// Rational content: positive rational `c` such that `p / c` has coprime
    /// integer coefficients.
    pub fn rational_content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rational::one()
        } else {
            Rational::new(num, den)
        }
    }

    /// Canonical representative up to a nonzero rational factor: coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut c = self.rational_content();
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    pub fn is_normalized(&self) -> bool {
        self.is_zero() || *self == self.normalized()
    }

    /// Sum of total degrees of all monomials.
    pub fn sum_of_total_degrees(&self) -> u64 {
        self.terms.keys().map(|m| m.total_degree() as u64).sum()
    }

    /// Integer coefficients of a univariate polynomial in `v`, ascending,
    /// after clearing denominators. Panics if other variables occur.
    pub fn to_univariate(&self, v: Var) -> Vec<Rational> {
        self.coeffs_ascending(v)
            .into_iter()
            .map(|c| c.as_constant().expect("polynomial is not univariate"))
            .collect()
    }

    pub fn from_univariate(v: Var, coeffs: &[Rational]) -> Polynomial {
        Polynomial::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(v, k as u32), c.clone())),
        )
    }
}

impl Ord for Polynomial {
    /// Deterministic total order: by level, then degree profile, then terms
    /// from the leading one downwards.
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| {
                let a = self.terms.iter().rev();
                let b = other.terms.iter().rev();
                a.cmp(b)
            })
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Infix rendering, leading term first, e.g. `x1^2 + x2^2 - 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            factors.reverse();
            if factors.is_empty() {
                fmt_rational(&abs, f)?;
            } else {
                if !abs.is_one() {
                    fmt_rational(&abs, f)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    pub fn x(i: u32) -> Polynomial {
        Polynomial::var(Var(i))
    }

    pub fn c(v: i64) -> Polynomial {
        Polynomial::from_int(v)
    }

    pub fn q(n: i64, d: i64) -> Polynomial {
        Polynomial::constant(Rational::new(n.into(), d.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;

    #[test]
    fn level_and_degree_examples() {
        assert_eq!(c(7).level_and_degree(Var(1)), (0, 0));
        let p = &(&x(1).pow(2) * &x(2)) - &c(1);
        assert_eq!(p.level_and_degree(Var(1)), (2, 2));
        let circle = &(&x(1).pow(2) + &x(2).pow(2)) - &c(2);
        assert_eq!(circle.level_and_degree(Var(2)), (2, 2));
    }

    #[test]
    fn coefficients_highest_first() {
        let p = &x(2).pow(2) + &(&x(1).pow(2) - &c(2));
        let cs = p.coefficients(Var(2));
        assert_eq!(cs, vec![c(1), c(0), &x(1).pow(2) - &c(2)]);
        let p = &(&x(1) * &x(2)) + &c(1);
        assert_eq!(p.coefficients(Var(2)), vec![x(1), c(1)]);
        assert_eq!(c(5).coefficients(Var(1)), vec![c(5)]);
    }

    #[test]
    fn derivative_examples() {
        let p = &x(2).pow(2) - &c(2);
        assert_eq!(p.derivative(Var(2)), &c(2) * &x(2));
        assert_eq!((&x(1) * &x(2)).derivative(Var(1)), x(2));
        assert!(c(7).derivative(Var(1)).is_zero());
    }

    #[test]
    fn normalization_is_canonical() {
        let p = &(&q(-3, 2) * &x(1)) + &c(3);
        let n = p.normalized();
        assert_eq!(n, &x(1) - &c(2));
        assert_eq!(n.normalized(), n);
    }

    #[test]
    fn monomial_order_puts_main_variable_first() {
        let p = &(&x(1).pow(5) + &x(2)) + &c(1);
        assert_eq!(p.leading_coefficient(), Rational::one());
        let (m, _) = p.terms().next_back().unwrap();
        assert_eq!(m.exponent(Var(2)), 1);
    }

    #[test]
    fn display_is_readable() {
        let p = &(&x(1).pow(2) + &x(2).pow(2)) - &c(2);
        assert_eq!(p.to_string(), "x2^2 + x1^2 - 2");
    }

    #[test]
    fn rename_permutes_variables() {
        let p = &x(1) + &(&c(2) * &x(2));
        let r = p.rename(&|v| if v == Var(1) { Var(2) } else { Var(1) });
        assert_eq!(r, &x(2) + &(&c(2) * &x(1)));
    }
}
