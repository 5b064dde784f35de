//! First-order formulas over polynomial constraints.

mod eval;
mod normal;
mod order;

use std::collections::BTreeSet;
use std::fmt;

use crate::poly::{Polynomial, Sign, Var};

pub use eval::{evaluate_partial, evaluate_root_atom, TruthValue3};
pub use normal::{to_nnf, to_prenex, Prenex, Quantifier};
pub use order::{variable_order, OrderingHeuristic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Rel {
    /// The relation of the negated atom.
    pub fn negate(self) -> Rel {
        match self {
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Ge => Rel::Lt,
            Rel::Gt => Rel::Le,
        }
    }

    /// The relation after multiplying both sides by a negative number.
    pub fn mirror(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Ge => Rel::Le,
            Rel::Gt => Rel::Lt,
            r => r,
        }
    }

    pub fn holds(self, s: Sign) -> bool {
        match self {
            Rel::Lt => s == Sign::Negative,
            Rel::Le => s != Sign::Positive,
            Rel::Eq => s == Sign::Zero,
            Rel::Ne => s != Sign::Zero,
            Rel::Ge => s != Sign::Negative,
            Rel::Gt => s == Sign::Positive,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }
}

/// `poly rel 0` with a normalized, non-constant polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub poly: Polynomial,
    pub rel: Rel,
}

impl Constraint {
    /// Normalizes `poly rel 0`; constant constraints fold to their truth value.
    pub fn new(poly: Polynomial, rel: Rel) -> Result<Constraint, bool> {
        if let Some(c) = poly.as_constant() {
            return Err(rel.holds(Sign::of(&c)));
        }
        let n = poly.normalized();
        let flipped = Sign::of(&poly.leading_coefficient()) == Sign::Negative;
        let rel = if flipped { rel.mirror() } else { rel };
        Ok(Constraint { poly: n, rel })
    }

    pub fn negate(&self) -> Constraint {
        Constraint {
            poly: self.poly.clone(),
            rel: self.rel.negate(),
        }
    }

    pub fn level(&self) -> usize {
        self.poly.level()
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.poly, self.rel.symbol())
    }
}

/// The `index`-th real root (1-based) of `poly` in its main variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexedRoot {
    pub poly: Polynomial,
    pub index: usize,
}

impl fmt::Display for IndexedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root({}, {})", self.poly, self.index)
    }
}

/// `var rel root`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtendedAtom {
    pub var: Var,
    pub rel: Rel,
    pub root: IndexedRoot,
}

impl fmt::Display for ExtendedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rel {
            Rel::Gt => write!(f, "{} < {}", self.root, self.var),
            Rel::Ge => write!(f, "{} <= {}", self.root, self.var),
            r => write!(f, "{} {} {}", self.var, r.symbol(), self.root),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Constraint),
    Root(ExtendedAtom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn constraint(poly: Polynomial, rel: Rel) -> Formula {
        match Constraint::new(poly, rel) {
            Ok(c) => Formula::Atom(c),
            Err(true) => Formula::True,
            Err(false) => Formula::False,
        }
    }

    /// Flattening conjunction with constant folding.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Flattening disjunction with constant folding.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or([Formula::not(a), b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and([
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        ])
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::iff(a, b))
    }

    pub fn children(&self) -> &[Formula] {
        match self {
            Formula::And(c) | Formula::Or(c) => c,
            Formula::Not(c) | Formula::Exists(_, c) | Formula::Forall(_, c) => {
                std::slice::from_ref(c)
            }
            _ => &[],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Formula::size).sum::<usize>()
    }

    /// Constraint atoms in left-to-right order.
    pub fn constraints(&self) -> Vec<&Constraint> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |f| {
            if let Formula::Atom(c) = f {
                out.push(c);
            }
        });
        out
    }

    /// Number of constraint and extended atoms.
    pub fn atom_count(&self) -> usize {
        let mut n = 0;
        self.visit_atoms(&mut |_| n += 1);
        n
    }

    fn visit_atoms<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        match self {
            Formula::Atom(_) | Formula::Root(_) => f(self),
            _ => {
                for c in self.children() {
                    c.visit_atoms(f);
                }
            }
        }
    }

    /// All polynomials of constraint and extended atoms.
    pub fn polynomials(&self) -> Vec<&Polynomial> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |f| match f {
            Formula::Atom(c) => out.push(&c.poly),
            Formula::Root(a) => out.push(&a.root.poly),
            _ => {}
        });
        out
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(c) => out.extend(c.poly.vars()),
            Formula::Root(a) => {
                out.insert(a.var);
                out.extend(a.root.poly.vars());
            }
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                out.insert(*v);
                b.collect_vars(out);
            }
            _ => {
                for c in self.children() {
                    c.collect_vars(out);
                }
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        match self {
            Formula::Atom(_) | Formula::Root(_) => self.vars(),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let mut s = b.free_vars();
                s.remove(v);
                s
            }
            _ => self
                .children()
                .iter()
                .flat_map(Formula::free_vars)
                .collect(),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => false,
            _ => self.children().iter().all(Formula::is_quantifier_free),
        }
    }

    pub fn max_level(&self) -> usize {
        self.vars().iter().map(|v| v.index()).max().unwrap_or(0)
    }

    /// Applies a variable renaming everywhere, including binders.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(c) => Formula::constraint(c.poly.rename(map), c.rel),
            Formula::Root(a) => Formula::Root(ExtendedAtom {
                var: map(a.var),
                rel: a.rel,
                root: IndexedRoot {
                    poly: a.root.poly.rename(map),
                    index: a.root.index,
                },
            }),
            Formula::Not(b) => Formula::Not(Box::new(b.rename(map))),
            Formula::And(c) => Formula::And(c.iter().map(|f| f.rename(map)).collect()),
            Formula::Or(c) => Formula::Or(c.iter().map(|f| f.rename(map)).collect()),
            Formula::Exists(v, b) => Formula::Exists(map(*v), Box::new(b.rename(map))),
            Formula::Forall(v, b) => Formula::Forall(map(*v), Box::new(b.rename(map))),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, parts: &[Formula], sep: &str| -> fmt::Result {
            for (k, p) in parts.iter().enumerate() {
                if k > 0 {
                    write!(f, " {sep} ")?;
                }
                if matches!(p, Formula::And(_) | Formula::Or(_)) {
                    write!(f, "({p})")?;
                } else {
                    write!(f, "{p}")?;
                }
            }
            Ok(())
        };
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(c) => write!(f, "{c}"),
            Formula::Root(a) => write!(f, "{a}"),
            Formula::Not(b) => match **b {
                Formula::Atom(_) | Formula::Root(_) | Formula::True | Formula::False => {
                    write!(f, "¬{b}")
                }
                _ => write!(f, "¬({b})"),
            },
            Formula::And(c) => join(f, c, "∧"),
            Formula::Or(c) => join(f, c, "∨"),
            Formula::Exists(v, b) => write!(f, "∃{v}. {b}"),
            Formula::Forall(v, b) => write!(f, "∀{v}. {b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::{c, x};

    #[test]
    fn constraints_are_normalized() {
        let f = Formula::constraint(&c(2) - &(&c(2) * &x(1)), Rel::Lt);
        assert_eq!(
            f,
            Formula::Atom(Constraint {
                poly: &x(1) - &c(1),
                rel: Rel::Gt
            })
        );
        assert_eq!(Formula::constraint(c(-1), Rel::Lt), Formula::True);
        assert_eq!(Formula::constraint(c(0), Rel::Ne), Formula::False);
    }

    #[test]
    fn connectives_flatten() {
        let a = Formula::constraint(x(1), Rel::Gt);
        let b = Formula::constraint(x(2), Rel::Gt);
        let f = Formula::and([a.clone(), Formula::and([b.clone(), Formula::True])]);
        assert_eq!(f, Formula::And(vec![a.clone(), b]));
        assert_eq!(Formula::or([a.clone(), Formula::True]), Formula::True);
        assert_eq!(Formula::not(Formula::not(a.clone())), a);
    }

    #[test]
    fn display_of_root_atoms() {
        let lower = ExtendedAtom {
            var: Var(2),
            rel: Rel::Gt,
            root: IndexedRoot {
                poly: &x(2) + &c(1),
                index: 1,
            },
        };
        assert_eq!(lower.to_string(), "root(x2 + 1, 1) < x2");
    }
}
