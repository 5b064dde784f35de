use std::cmp::Ordering;

use super::{ExtendedAtom, Formula, Rel};
use crate::poly::Sign;
use crate::ralg::{isolate_roots_at, sign_at, RealAlgebraic, RootsAt};

/// Kleene three-valued truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue3 {
    True,
    False,
    Undef,
}

impl TruthValue3 {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue3::True
        } else {
            TruthValue3::False
        }
    }

    pub fn negate(self) -> Self {
        match self {
            TruthValue3::True => TruthValue3::False,
            TruthValue3::False => TruthValue3::True,
            TruthValue3::Undef => TruthValue3::Undef,
        }
    }

    pub fn is_decided(self) -> bool {
        self != TruthValue3::Undef
    }
}

/// Truth of an extended atom at a sample assigning its variable; an
/// undefined root makes the atom false.
pub fn evaluate_root_atom(a: &ExtendedAtom, s: &[RealAlgebraic]) -> Option<bool> {
    let i = a.var.index();
    if i > s.len() {
        return None;
    }
    let roots = match isolate_roots_at(&a.root.poly, &s[..i - 1]) {
        RootsAt::Roots(r) => r,
        RootsAt::Nullified => return Some(false),
    };
    let Some(root) = roots.get(a.root.index - 1) else {
        return Some(false);
    };
    let sign: Sign = match s[i - 1].compare(root) {
        Ordering::Less => Sign::Negative,
        Ordering::Equal => Sign::Zero,
        Ordering::Greater => Sign::Positive,
    };
    Some(a.rel.holds(sign))
}

/// Evaluates a quantifier-free formula at `s`; atoms over unassigned
/// variables are `Undef`.
pub fn evaluate_partial(f: &Formula, s: &[RealAlgebraic]) -> TruthValue3 {
    match f {
        Formula::True => TruthValue3::True,
        Formula::False => TruthValue3::False,
        Formula::Atom(c) => {
            if c.level() > s.len() {
                TruthValue3::Undef
            } else {
                TruthValue3::from_bool(c.rel.holds(sign_at(&c.poly, s)))
            }
        }
        Formula::Root(a) => {
            if a.root.poly.level() > s.len() {
                return TruthValue3::Undef;
            }
            match evaluate_root_atom(a, s) {
                Some(b) => TruthValue3::from_bool(b),
                None => TruthValue3::Undef,
            }
        }
        Formula::Not(b) => evaluate_partial(b, s).negate(),
        Formula::And(cs) => {
            let mut undef = false;
            for c in cs {
                match evaluate_partial(c, s) {
                    TruthValue3::False => return TruthValue3::False,
                    TruthValue3::Undef => undef = true,
                    TruthValue3::True => {}
                }
            }
            if undef {
                TruthValue3::Undef
            } else {
                TruthValue3::True
            }
        }
        Formula::Or(cs) => {
            let mut undef = false;
            for c in cs {
                match evaluate_partial(c, s) {
                    TruthValue3::True => return TruthValue3::True,
                    TruthValue3::Undef => undef = true,
                    TruthValue3::False => {}
                }
            }
            if undef {
                TruthValue3::Undef
            } else {
                TruthValue3::False
            }
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            panic!("evaluate_partial expects a quantifier-free formula")
        }
    }
}

impl Rel {
    /// Whether a value `a` compared with `b` by `ord` satisfies `a rel b`.
    pub fn holds_ordering(self, ord: Ordering) -> bool {
        self.holds(match ord {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::{c, x};

    fn int(n: i64) -> RealAlgebraic {
        RealAlgebraic::from_int(n)
    }

    #[test]
    fn kleene_evaluation() {
        let f = Formula::constraint(&(&x(1) * &x(2)) - &c(1), Rel::Gt);
        assert_eq!(evaluate_partial(&f, &[int(0)]), TruthValue3::Undef);
        let g = Formula::and([
            Formula::constraint(x(1), Rel::Gt),
            Formula::constraint(&x(2) - &c(1), Rel::Lt),
        ]);
        assert_eq!(evaluate_partial(&g, &[int(-1)]), TruthValue3::False);
        let h = Formula::or([
            Formula::constraint(x(1), Rel::Gt),
            Formula::constraint(&x(2) - &c(1), Rel::Lt),
        ]);
        assert_eq!(evaluate_partial(&h, &[int(1)]), TruthValue3::True);
        assert_eq!(evaluate_partial(&h, &[int(-1), int(0)]), TruthValue3::True);
    }

    #[test]
    fn root_atoms() {
        use crate::formula::IndexedRoot;
        use crate::poly::Var;
        let circle = &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))) - &c(2);
        let below = ExtendedAtom {
            var: Var(2),
            rel: Rel::Lt,
            root: IndexedRoot {
                poly: circle,
                index: 2,
            },
        };
        assert_eq!(evaluate_root_atom(&below, &[int(0), int(1)]), Some(true));
        assert_eq!(evaluate_root_atom(&below, &[int(0), int(2)]), Some(false));
        // no second root over x1 = 2
        assert_eq!(evaluate_root_atom(&below, &[int(2), int(0)]), Some(false));
        assert_eq!(evaluate_root_atom(&below, &[int(0)]), None);
    }
}
