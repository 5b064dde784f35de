use std::collections::BTreeSet;
use std::fmt;

use super::Formula;
use crate::poly::Var;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Exists => write!(f, "∃"),
            Quantifier::Forall => write!(f, "∀"),
        }
    }
}

/// Pushes negations to the atoms. Constraint atoms absorb the negation by
/// flipping their relation; extended atoms keep an explicit `Not`.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, neg: bool) -> Formula {
    match f {
        Formula::True => {
            if neg {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::False => {
            if neg {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Atom(c) => Formula::Atom(if neg { c.negate() } else { c.clone() }),
        Formula::Root(_) => {
            if neg {
                Formula::Not(Box::new(f.clone()))
            } else {
                f.clone()
            }
        }
        Formula::Not(b) => nnf(b, !neg),
        Formula::And(cs) => {
            let parts = cs.iter().map(|c| nnf(c, neg));
            if neg {
                Formula::or(parts)
            } else {
                Formula::and(parts)
            }
        }
        Formula::Or(cs) => {
            let parts = cs.iter().map(|c| nnf(c, neg));
            if neg {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Exists(v, b) => {
            let body = Box::new(nnf(b, neg));
            if neg {
                Formula::Forall(*v, body)
            } else {
                Formula::Exists(*v, body)
            }
        }
        Formula::Forall(v, b) => {
            let body = Box::new(nnf(b, neg));
            if neg {
                Formula::Exists(*v, body)
            } else {
                Formula::Forall(*v, body)
            }
        }
    }
}

/// A quantifier prefix over a quantifier-free NNF matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prenex {
    pub prefix: Vec<(Quantifier, Var)>,
    pub matrix: Formula,
}

impl Prenex {
    /// Free variables, in increasing order.
    pub fn params(&self) -> Vec<Var> {
        let bound: BTreeSet<Var> = self.prefix.iter().map(|(_, v)| *v).collect();
        self.matrix
            .vars()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .collect()
    }

    pub fn to_formula(&self) -> Formula {
        let mut f = self.matrix.clone();
        for (q, v) in self.prefix.iter().rev() {
            f = match q {
                Quantifier::Exists => Formula::Exists(*v, Box::new(f)),
                Quantifier::Forall => Formula::Forall(*v, Box::new(f)),
            };
        }
        f
    }

    /// Renames variables so that `order[k]` becomes `x_{k+1}`.
    pub fn renumber(&self, order: &[Var]) -> Prenex {
        let map = |v: Var| {
            let k = order
                .iter()
                .position(|w| *w == v)
                .expect("variable missing from ordering");
            Var(k as u32 + 1)
        };
        Prenex {
            prefix: self.prefix.iter().map(|(q, v)| (*q, map(*v))).collect(),
            matrix: self.matrix.rename(&map),
        }
    }
}

/// Prenex form of `f`; bound variables clashing with others are renamed to
/// fresh indices above every variable of `f`.
pub fn to_prenex(f: &Formula) -> Prenex {
    let f = to_nnf(f);
    let mut next = f.max_level() as u32 + 1;
    let mut seen: BTreeSet<Var> = f.free_vars();
    let f = rename_apart(&f, &mut seen, &mut next);
    let (prefix, matrix) = pull(&f);
    Prenex { prefix, matrix }
}

fn rename_apart(f: &Formula, seen: &mut BTreeSet<Var>, next: &mut u32) -> Formula {
    match f {
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let body = if seen.contains(v) {
                let fresh = Var(*next);
                *next += 1;
                let old = *v;
                let renamed = substitute_var(b, old, fresh);
                seen.insert(fresh);
                (fresh, rename_apart(&renamed, seen, next))
            } else {
                seen.insert(*v);
                (*v, rename_apart(b, seen, next))
            };
            match f {
                Formula::Exists(..) => Formula::Exists(body.0, Box::new(body.1)),
                _ => Formula::Forall(body.0, Box::new(body.1)),
            }
        }
        Formula::And(cs) => Formula::And(cs.iter().map(|c| rename_apart(c, seen, next)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| rename_apart(c, seen, next)).collect()),
        Formula::Not(b) => Formula::Not(Box::new(rename_apart(b, seen, next))),
        _ => f.clone(),
    }
}

/// Replaces free occurrences of `old` by `new`.
fn substitute_var(f: &Formula, old: Var, new: Var) -> Formula {
    match f {
        Formula::Exists(v, _) | Formula::Forall(v, _) if *v == old => f.clone(),
        Formula::Exists(v, b) => Formula::Exists(*v, Box::new(substitute_var(b, old, new))),
        Formula::Forall(v, b) => Formula::Forall(*v, Box::new(substitute_var(b, old, new))),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| substitute_var(c, old, new)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| substitute_var(c, old, new)).collect()),
        Formula::Not(b) => Formula::Not(Box::new(substitute_var(b, old, new))),
        _ => f.rename(&|v| if v == old { new } else { v }),
    }
}

fn pull(f: &Formula) -> (Vec<(Quantifier, Var)>, Formula) {
    match f {
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let q = if matches!(f, Formula::Exists(..)) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let (mut p, m) = pull(b);
            p.insert(0, (q, *v));
            (p, m)
        }
        Formula::And(cs) | Formula::Or(cs) => {
            let mut prefix = Vec::new();
            let mut parts = Vec::new();
            for c in cs {
                let (p, m) = pull(c);
                prefix.extend(p);
                parts.push(m);
            }
            let m = if matches!(f, Formula::And(_)) {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            };
            (prefix, m)
        }
        _ => (Vec::new(), f.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Rel;
    use crate::poly::testing::{c, x};

    #[test]
    fn negation_is_pushed_to_atoms() {
        let a = Formula::constraint(x(1), Rel::Lt);
        let b = Formula::constraint(x(2), Rel::Eq);
        let f = Formula::not(Formula::and([a.clone(), b.clone()]));
        assert_eq!(
            to_nnf(&f),
            Formula::Or(vec![
                Formula::constraint(x(1), Rel::Ge),
                Formula::constraint(x(2), Rel::Ne)
            ])
        );
        assert_eq!(to_nnf(&Formula::not(Formula::not(a.clone()))), a);
        let q = Formula::not(Formula::Forall(Var(1), Box::new(Formula::constraint(x(1), Rel::Gt))));
        assert_eq!(
            to_nnf(&q),
            Formula::Exists(Var(1), Box::new(Formula::constraint(x(1), Rel::Le)))
        );
    }

    #[test]
    fn prenex_collects_prefix() {
        // (exists y. y > x) and x > 0 with x = x1, y = x2
        let f = Formula::and([
            Formula::Exists(Var(2), Box::new(Formula::constraint(&x(2) - &x(1), Rel::Gt))),
            Formula::constraint(x(1), Rel::Gt),
        ]);
        let p = to_prenex(&f);
        assert_eq!(p.prefix, vec![(Quantifier::Exists, Var(2))]);
        assert_eq!(p.params(), vec![Var(1)]);
        // not exists y. y^2 = x
        let g = Formula::not(Formula::Exists(
            Var(2),
            Box::new(Formula::constraint(&(&x(2) * &x(2)) - &x(1), Rel::Eq)),
        ));
        let p = to_prenex(&g);
        assert_eq!(p.prefix, vec![(Quantifier::Forall, Var(2))]);
        assert_eq!(p.matrix, Formula::constraint(&(&x(2) * &x(2)) - &x(1), Rel::Ne));
    }

    #[test]
    fn clashing_binders_are_renamed() {
        // (exists x1. x1 > 0) and x1 < 1
        let f = Formula::and([
            Formula::Exists(Var(1), Box::new(Formula::constraint(x(1), Rel::Gt))),
            Formula::constraint(&x(1) - &c(1), Rel::Lt),
        ]);
        let p = to_prenex(&f);
        assert_eq!(p.prefix, vec![(Quantifier::Exists, Var(2))]);
        assert_eq!(
            p.matrix,
            Formula::And(vec![
                Formula::constraint(x(2), Rel::Gt),
                Formula::constraint(&x(1) - &c(1), Rel::Lt)
            ])
        );
    }
}
