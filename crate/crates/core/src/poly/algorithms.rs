//! Exact division, gcd, subresultant resultants, discriminants and the
//! square-free coprime basis used by the projection.

use thiserror::Error;

use super::{Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable {0} does not occur in the polynomial")]
    VariableAbsent(Var),
    #[error("polynomial is constant in {0}; its discriminant is undefined")]
    ConstantInVariable(Var),
}

/// Pseudo-remainder `lc_v(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn prem(a: &Polynomial, b: &Polynomial, v: Var) -> Polynomial {
    let n = b.degree(v);
    if n == 0 {
        return Polynomial::zero();
    }
    let m = a.degree(v);
    if m < n {
        return a.clone();
    }
    let lcb = b.lc_in(v);
    let mut r = a.clone();
    let mut steps = m - n + 1;
    while !r.is_zero() && r.degree(v) >= n {
        let d = r.degree(v);
        let lcr = r.lc_in(v);
        r = &(&lcb * &r) - &(&lcr * &b.shift(v, d - n));
        steps -= 1;
    }
    if steps > 0 {
        r = &lcb.pow(steps) * &r;
    }
    r
}

/// Exact quotient `a / b` if `b` divides `a` in `Q[x1, ..., xn]`.
pub fn div_exact(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    if a.is_zero() {
        return Some(Polynomial::zero());
    }
    if let Some(c) = b.as_constant() {
        return Some(a.scale(&c.recip()));
    }
    let v = b.main_var().unwrap();
    let la = a.level();
    if la > v.index() {
        let w = Var(la as u32);
        let coeffs = a.coeffs_ascending(w);
        let mut out = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            out.push(div_exact(c, b)?);
        }
        return Some(Polynomial::from_coeffs_ascending(w, &out));
    }
    if la < v.index() {
        return None;
    }
    let n = b.degree(v);
    let lcb = b.lc_in(v);
    let mut r = a.clone();
    let mut q = Polynomial::zero();
    while !r.is_zero() {
        let d = r.degree(v);
        if d < n {
            return None;
        }
        let t = div_exact(&r.lc_in(v), &lcb)?.shift(v, d - n);
        r = &r - &(&t * b);
        q = &q + &t;
    }
    Some(q)
}

fn div(a: &Polynomial, b: &Polynomial) -> Polynomial {
    div_exact(a, b).expect("inexact polynomial division")
}

/// Content w.r.t. `v`: the gcd of the coefficients, normalized.
pub(crate) fn content(p: &Polynomial, v: Var) -> Polynomial {
    let mut g = Polynomial::zero();
    for c in p.coeffs_ascending(v).iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_constant() {
            return Polynomial::one();
        }
    }
    g
}

pub(crate) fn primitive_part(p: &Polynomial, v: Var) -> Polynomial {
    if p.is_zero() {
        return Polynomial::zero();
    }
    div(p, &content(p, v)).normalized()
}

/// Greatest common divisor, normalized (coprime integer coefficients,
/// positive leading coefficient). `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a == b {
        return a.normalized();
    }
    let (la, lb) = (a.level(), b.level());
    let v = Var(la.max(lb) as u32);
    if la < v.index() {
        return gcd(a, &content(b, v));
    }
    if lb < v.index() {
        return gcd(&content(a, v), b);
    }
    let (ca, cb) = (content(a, v), content(b, v));
    let gc = gcd(&ca, &cb);
    let mut r0 = div(a, &ca).normalized();
    let mut r1 = div(b, &cb).normalized();
    if r0.degree(v) < r1.degree(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let g = loop {
        let r = prem(&r0, &r1, v);
        if r.is_zero() {
            break r1;
        }
        if r.degree(v) == 0 {
            break Polynomial::one();
        }
        r0 = r1;
        r1 = primitive_part(&r, v);
    };
    (&gc * &primitive_part(&g, v)).normalized()
}

/// Resultant of `a` and `b` viewed as univariate polynomials in `x`,
/// computed by the subresultant pseudo-remainder sequence.
pub fn resultant(a: &Polynomial, b: &Polynomial, x: Var) -> Result<Polynomial, PolyError> {
    if !a.contains_var(x) || !b.contains_var(x) {
        return Err(PolyError::VariableAbsent(x));
    }
    Ok(resultant_unchecked(a, b, x))
}

pub(crate) fn resultant_unchecked(a: &Polynomial, b: &Polynomial, v: Var) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let (da, db) = (a.degree(v), b.degree(v));
    if da == 0 {
        return a.pow(db);
    }
    if db == 0 {
        return b.pow(da);
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            negate = true;
        }
    }
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let (da, db) = (a.degree(v), b.degree(v));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&a, &b, v);
        a = b;
        b = div(&r, &(&g * &h.pow(delta)));
        g = a.lc_in(v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => div(&g.pow(delta), &h.pow(delta - 1)),
        };
        if b.is_zero() {
            return Polynomial::zero();
        }
        if b.degree(v) == 0 {
            break;
        }
    }
    let da = a.degree(v);
    let res = div(&b.pow(da), &h.pow(da - 1));
    if negate {
        -res
    } else {
        res
    }
}

/// Discriminant of `p` in `x`. Degree-1 polynomials have discriminant 1.
pub fn discriminant(p: &Polynomial, x: Var) -> Result<Polynomial, PolyError> {
    let n = p.degree(x);
    match n {
        0 if !p.contains_var(x) => Err(PolyError::VariableAbsent(x)),
        0 => Err(PolyError::ConstantInVariable(x)),
        1 => Ok(Polynomial::one()),
        _ => {
            let r = resultant_unchecked(p, &p.derivative(x), x);
            let d = div(&r, &p.lc_in(x));
            Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
        }
    }
}

/// Square-free decomposition: normalized non-constant factors `f` with
/// multiplicities `e` such that `p = c * prod f^e`. Factors of different
/// levels come from the recursive content decomposition.
pub fn square_free_factors(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    square_free_into(p, &mut out);
    out
}

fn square_free_into(p: &Polynomial, out: &mut Vec<(Polynomial, u32)>) {
    let Some(v) = p.main_var() else {
        return;
    };
    let c = content(p, v);
    square_free_into(&c, out);
    let f = div(p, &c).normalized();
    yun(&f, v, out);
}

fn yun(f: &Polynomial, v: Var, out: &mut Vec<(Polynomial, u32)>) {
    let df = f.derivative(v);
    let a0 = gcd(f, &df);
    if a0.is_constant() {
        out.push((f.normalized(), 1));
        return;
    }
    let mut b = div(f, &a0);
    let mut c = div(&df, &a0);
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    loop {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = div(&b, &a);
        if b.is_constant() {
            break;
        }
        c = div(&d, &a);
        d = &c - &b.derivative(v);
        i += 1;
    }
}

/// Splits square-free polynomials into a pairwise coprime set by repeated
/// gcd extraction. Constants are dropped; output is sorted.
pub fn coprime_basis(polys: impl IntoIterator<Item = Polynomial>) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut queue: Vec<Polynomial> = polys.into_iter().map(|p| p.normalized()).collect();
    queue.reverse();
    'next: while let Some(g) = queue.pop() {
        if g.is_constant() || basis.contains(&g) {
            continue;
        }
        for k in 0..basis.len() {
            let h = gcd(&g, &basis[k]);
            if !h.is_constant() {
                let b = basis.swap_remove(k);
                for piece in [div(&g, &h), div(&b, &h), h] {
                    let piece = piece.normalized();
                    if !piece.is_constant() {
                        queue.push(piece);
                    }
                }
                continue 'next;
            }
        }
        basis.push(g);
    }
    basis.sort();
    basis
}

/// Pairwise coprime, square-free, normalized, non-constant polynomials such
/// that every input equals (up to a rational factor) a product of powers of
/// members of the result.
pub fn refine_basis<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Vec<Polynomial> {
    let mut factors = Vec::new();
    for p in polys {
        if p.is_constant() {
            continue;
        }
        for (f, _) in square_free_factors(p) {
            if !factors.contains(&f) {
                factors.push(f);
            }
        }
    }
    coprime_basis(factors)
}
