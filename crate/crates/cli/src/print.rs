//! SMT-LIB rendering of scripts, formulas and polynomials.

use calc_core::formula::{Formula, Rel};
use calc_core::poly::{Polynomial, Rational, Var};
use num_traits::{One, Signed};

use crate::parse::{Command, Script};

/// `s` as an SMT-LIB symbol, quoted when needed.
pub fn symbol(s: &str) -> String {
    let simple = !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if simple {
        s.to_string()
    } else {
        format!("|{s}|")
    }
}

/// A rational constant: `3`, `(- 3)`, `(/ 1 3)` or `(- (/ 1 3))`.
pub fn rational(r: &Rational) -> String {
    let abs = if r.is_integer() {
        r.numer().abs().to_string()
    } else {
        format!("(/ {} {})", r.numer().abs(), r.denom())
    };
    if r.is_negative() {
        format!("(- {abs})")
    } else {
        abs
    }
}

/// Canonical prefix form: terms in decreasing monomial order, each a
/// coefficient times repeated variable factors, highest variable first.
pub fn polynomial(p: &Polynomial, name: &dyn Fn(Var) -> String) -> String {
    let terms: Vec<String> = p
        .terms()
        .rev()
        .map(|(m, c)| {
            let mut factors = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate().rev() {
                for _ in 0..e {
                    factors.push(symbol(&name(Var(i as u32 + 1))));
                }
            }
            if factors.is_empty() {
                return rational(c);
            }
            if !c.is_one() {
                factors.insert(0, rational(c));
            }
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("(* {})", factors.join(" "))
            }
        })
        .collect();
    match terms.len() {
        0 => "0".to_string(),
        1 => terms.into_iter().next().unwrap(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

fn rel_symbol(r: Rel) -> &'static str {
    match r {
        Rel::Ne => "distinct",
        r => r.symbol(),
    }
}

/// A formula; extended atoms print as `(< x (root p j x))`.
pub fn formula(f: &Formula, name: &dyn Fn(Var) -> String) -> String {
    let list = |op: &str, parts: &[Formula]| {
        let inner: Vec<String> = parts.iter().map(|g| formula(g, name)).collect();
        format!("({op} {})", inner.join(" "))
    };
    match f {
        Formula::True => "true".to_string(),
        Formula::False => "false".to_string(),
        Formula::Atom(c) => format!("({} {} 0)", rel_symbol(c.rel), polynomial(&c.poly, name)),
        Formula::Root(a) => {
            let x = symbol(&name(a.var));
            format!(
                "({} {x} (root {} {} {x}))",
                rel_symbol(a.rel),
                polynomial(&a.root.poly, name),
                a.root.index
            )
        }
        Formula::Not(g) => format!("(not {})", formula(g, name)),
        Formula::And(c) => list("and", c),
        Formula::Or(c) => list("or", c),
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let q = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            format!("({q} (({} Real)) {})", symbol(&name(*v)), formula(b, name))
        }
    }
}

/// One command per line.
pub fn script(s: &Script) -> String {
    let name = |v: Var| s.name(v);
    let mut out = String::new();
    for c in &s.commands {
        let line = match c {
            Command::SetLogic(l) => format!("(set-logic {l})"),
            Command::SetOption(k, v) => format!("(set-option :{k} {v})"),
            Command::SetInfo(k, v) => format!("(set-info :{k} {v})"),
            Command::Declare(v) => format!("(declare-const {} Real)", symbol(&s.name(*v))),
            Command::Assert(f) => format!("(assert {})", formula(f, &name)),
            Command::CheckSat => "(check-sat)".to_string(),
            Command::EliminateQuantifiers => "(eliminate-quantifiers)".to_string(),
            Command::Exit => "(exit)".to_string(),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn x(i: u32) -> Polynomial {
        Polynomial::var(Var(i))
    }

    fn names(v: Var) -> String {
        ["x", "y"][v.index() - 1].to_string()
    }

    #[test]
    fn canonical_polynomials() {
        let p = &(&(&x(2) * &x(2)) + &(&x(1) * &Polynomial::from_int(-3))) + &Polynomial::constant(Rational::new(1.into(), 2.into()));
        assert_eq!(polynomial(&p, &names), "(+ (* y y) (* (- 3) x) (/ 1 2))");
        assert_eq!(polynomial(&(&x(1) * &x(2)), &names), "(* y x)");
        assert_eq!(polynomial(&Polynomial::zero(), &names), "0");
    }

    #[test]
    fn round_trip() {
        let text = "(set-logic NRA)\n(set-option :produce-models true)\n(set-info :ratio 0.05)\n(declare-fun x () Real)\n(declare-const |a b| Real)\n\
                    (assert (forall ((y Real)) (or (> (+ (* y y) x) 0) (not (distinct x (/ 1 3))))))\n\
                    (assert (< x (root (- (* x x) 2) 2 x)))\n(eliminate-quantifiers)\n";
        let s = parse(text).unwrap();
        let printed = script(&s);
        assert_eq!(parse(&printed).unwrap(), s);
        assert_eq!(script(&parse(&printed).unwrap()), printed);
    }
}
