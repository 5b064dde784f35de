//! The SMT-LIB subset: lexing, s-expressions and command interpretation.

use std::collections::HashMap;
use std::fmt;

use calc_core::formula::{ExtendedAtom, Formula, IndexedRoot, Rel};
use calc_core::poly::{Polynomial, Rational, Var};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// 1-based source location.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Unsupported,
    Sort,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::Syntax => write!(f, "syntax error"),
            ErrorKind::Unsupported => write!(f, "unsupported feature"),
            ErrorKind::Sort => write!(f, "sort error"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {kind}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

type Result<T> = std::result::Result<T, ParseError>;

fn error<T>(kind: ErrorKind, pos: Pos, message: impl Into<String>) -> Result<T> {
    Err(ParseError {
        kind,
        pos,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    SetLogic(String),
    /// Keyword without the colon, and the value as written.
    SetOption(String, String),
    SetInfo(String, String),
    Declare(Var),
    Assert(Formula),
    CheckSat,
    EliminateQuantifiers,
    Exit,
}

/// Which question a script asks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    CheckSat,
    EliminateQuantifiers,
}

/// A parsed script. `names[k]` is the source name of `Var(k + 1)`; bound
/// variables get their own indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub names: Vec<String>,
    pub commands: Vec<Command>,
}

impl Script {
    pub fn name(&self, v: Var) -> String {
        self.names
            .get(v.index().wrapping_sub(1))
            .cloned()
            .unwrap_or_else(|| v.to_string())
    }

    /// The first check-style command and the conjunction of the assertions
    /// before it.
    pub fn query(&self) -> Option<(Query, Formula)> {
        let mut asserted = Vec::new();
        for c in &self.commands {
            match c {
                Command::Assert(f) => asserted.push(f.clone()),
                Command::CheckSat => return Some((Query::CheckSat, Formula::and(asserted))),
                Command::EliminateQuantifiers => {
                    return Some((Query::EliminateQuantifiers, Formula::and(asserted)))
                }
                _ => {}
            }
        }
        None
    }

    /// Conjunction of all assertions.
    pub fn assertions(&self) -> Formula {
        Formula::and(self.commands.iter().filter_map(|c| match c {
            Command::Assert(f) => Some(f.clone()),
            _ => None,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Symbol(String),
    Keyword(String),
    Numeral(BigInt),
    /// Source text, e.g. `0.05`.
    Decimal(String),
    Str(String),
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

fn lex(text: &str) -> Result<Vec<(Token, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
        } else if c == ';' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
        } else if c == '(' {
            out.push((Token::Open, pos));
            advance(&mut i, &mut line, &mut col);
        } else if c == ')' {
            out.push((Token::Close, pos));
            advance(&mut i, &mut line, &mut col);
        } else if c == '|' {
            advance(&mut i, &mut line, &mut col);
            let mut s = String::new();
            while i < chars.len() && chars[i] != '|' {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            if i == chars.len() {
                return error(ErrorKind::Syntax, pos, "unterminated quoted symbol");
            }
            advance(&mut i, &mut line, &mut col);
            out.push((Token::Symbol(s), pos));
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let mut s = String::new();
            loop {
                if i == chars.len() {
                    return error(ErrorKind::Syntax, pos, "unterminated string literal");
                }
                if chars[i] == '"' {
                    advance(&mut i, &mut line, &mut col);
                    if i < chars.len() && chars[i] == '"' {
                        s.push('"');
                        advance(&mut i, &mut line, &mut col);
                        continue;
                    }
                    break;
                }
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            out.push((Token::Str(s), pos));
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            if i < chars.len() && chars[i] == '.' {
                advance(&mut i, &mut line, &mut col);
                let mut frac = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    frac.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                if frac.is_empty() {
                    return error(ErrorKind::Syntax, pos, "decimal without fractional digits");
                }
                out.push((Token::Decimal(format!("{digits}.{frac}")), pos));
            } else {
                out.push((Token::Numeral(digits.parse().unwrap()), pos));
            }
            if i < chars.len() && is_symbol_char(chars[i]) {
                return error(ErrorKind::Syntax, Pos { line, col }, "malformed numeral");
            }
        } else if c == ':' {
            advance(&mut i, &mut line, &mut col);
            let mut s = String::new();
            while i < chars.len() && is_symbol_char(chars[i]) {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            if s.is_empty() {
                return error(ErrorKind::Syntax, pos, "empty keyword");
            }
            out.push((Token::Keyword(s), pos));
        } else if is_symbol_char(c) {
            let mut s = String::new();
            while i < chars.len() && is_symbol_char(chars[i]) {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            out.push((Token::Symbol(s), pos));
        } else {
            return error(ErrorKind::Syntax, pos, format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    List(Vec<Sexp>, Pos),
    Leaf(Token, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::List(_, p) | Sexp::Leaf(_, p) => *p,
        }
    }

    fn symbol(&self) -> Option<&str> {
        match self {
            Sexp::Leaf(Token::Symbol(s), _) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::List(items, _) => {
                write!(f, "(")?;
                for (k, e) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Sexp::Leaf(t, _) => match t {
                Token::Symbol(s) => write!(f, "{}", crate::print::symbol(s)),
                Token::Keyword(s) => write!(f, ":{s}"),
                Token::Numeral(n) => write!(f, "{n}"),
                Token::Decimal(d) => write!(f, "{d}"),
                Token::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
                Token::Open | Token::Close => unreachable!(),
            },
        }
    }
}

fn read_sexps(tokens: Vec<(Token, Pos)>) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    for (t, pos) in tokens {
        match t {
            Token::Open => stack.push((Vec::new(), pos)),
            Token::Close => {
                let Some((items, open)) = stack.pop() else {
                    return error(ErrorKind::Syntax, pos, "unbalanced ')'");
                };
                let e = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
            t => {
                let e = Sexp::Leaf(t, pos);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => return error(ErrorKind::Syntax, pos, "expected '('"),
                }
            }
        }
    }
    if let Some((_, open)) = stack.pop() {
        return error(ErrorKind::Syntax, open, "unclosed '('");
    }
    Ok(top)
}

#[derive(Clone, Debug)]
enum Value {
    Real(Polynomial),
    /// An indexed root of a polynomial in the given variable.
    Root(IndexedRoot, Var),
    Bool(Formula),
}

#[derive(Clone, Debug)]
enum Binding {
    Var(Var),
    Let(Value),
}

#[derive(Default)]
struct Interp {
    script: Script,
    globals: HashMap<String, Var>,
    scope: Vec<(String, Binding)>,
    query_seen: bool,
}

/// Parses a script. Errors carry the line and column of the offending
/// expression.
pub fn parse(text: &str) -> Result<Script> {
    let sexps = read_sexps(lex(text)?)?;
    let mut it = Interp::default();
    for e in &sexps {
        it.command(e)?;
    }
    Ok(it.script)
}

fn literal(e: &Sexp) -> Option<Rational> {
    match e {
        Sexp::Leaf(Token::Numeral(n), _) => Some(Rational::from_integer(n.clone())),
        Sexp::Leaf(Token::Decimal(d), _) => {
            let (int, frac) = d.split_once('.').unwrap();
            let numer: BigInt = format!("{int}{frac}").parse().unwrap();
            Some(Rational::new(numer, num_traits::pow(BigInt::from(10), frac.len())))
        }
        Sexp::List(items, _) => match (items.first().and_then(Sexp::symbol), items.len()) {
            (Some("-"), 2) => literal(&items[1]).map(|r| -r),
            (Some("/"), 3) => {
                let (a, b) = (literal(&items[1])?, literal(&items[2])?);
                (!b.is_zero()).then(|| a / b)
            }
            _ => None,
        },
        _ => None,
    }
}

fn relation(op: &str) -> Option<Rel> {
    Some(match op {
        "<" => Rel::Lt,
        "<=" => Rel::Le,
        ">=" => Rel::Ge,
        ">" => Rel::Gt,
        _ => return None,
    })
}

impl Interp {
    fn lookup(&self, name: &str) -> Option<Binding> {
        if let Some((_, b)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return Some(b.clone());
        }
        self.globals.get(name).map(|v| Binding::Var(*v))
    }

    fn fresh(&mut self, name: &str) -> Var {
        self.script.names.push(name.to_string());
        Var(self.script.names.len() as u32)
    }

    fn expect_symbol<'a>(&self, e: &'a Sexp, what: &str) -> Result<&'a str> {
        e.symbol()
            .map_or_else(|| error(ErrorKind::Syntax, e.pos(), format!("expected {what}")), Ok)
    }

    fn expect_real_sort(&self, e: &Sexp) -> Result<()> {
        match e.symbol() {
            Some("Real") => Ok(()),
            Some(s) => error(ErrorKind::Sort, e.pos(), format!("sort {s} is not supported, only Real")),
            None => error(ErrorKind::Sort, e.pos(), "only the sort Real is supported"),
        }
    }

    fn arity(&self, items: &[Sexp], n: usize, pos: Pos) -> Result<()> {
        if items.len() != n + 1 {
            let head = items.first().and_then(Sexp::symbol).unwrap_or("command");
            return error(ErrorKind::Syntax, pos, format!("{head} expects {n} argument(s)"));
        }
        Ok(())
    }

    fn command(&mut self, e: &Sexp) -> Result<()> {
        let Sexp::List(items, pos) = e else {
            return error(ErrorKind::Syntax, e.pos(), "expected a command");
        };
        let pos = *pos;
        let Some(head) = items.first() else {
            return error(ErrorKind::Syntax, pos, "empty command");
        };
        let name = self.expect_symbol(head, "a command name")?;
        let cmd = match name {
            "set-logic" => {
                self.arity(items, 1, pos)?;
                let logic = self.expect_symbol(&items[1], "a logic name")?;
                if !matches!(logic, "NRA" | "QF_NRA") {
                    return error(ErrorKind::Unsupported, items[1].pos(), format!("logic {logic}"));
                }
                Command::SetLogic(logic.to_string())
            }
            "set-option" | "set-info" => {
                self.arity(items, 2, pos)?;
                let Sexp::Leaf(Token::Keyword(k), _) = &items[1] else {
                    return error(ErrorKind::Syntax, items[1].pos(), "expected a keyword");
                };
                let value = items[2].to_string();
                if name == "set-option" {
                    Command::SetOption(k.clone(), value)
                } else {
                    Command::SetInfo(k.clone(), value)
                }
            }
            "declare-const" | "declare-fun" => {
                let sort = if name == "declare-const" {
                    self.arity(items, 2, pos)?;
                    &items[2]
                } else {
                    self.arity(items, 3, pos)?;
                    match &items[2] {
                        Sexp::List(args, _) if args.is_empty() => {}
                        a => return error(ErrorKind::Unsupported, a.pos(), "function symbols with arguments"),
                    }
                    &items[3]
                };
                let v = self.expect_symbol(&items[1], "a variable name")?;
                if self.globals.contains_key(v) {
                    return error(ErrorKind::Syntax, items[1].pos(), format!("{v} is already declared"));
                }
                self.expect_real_sort(sort)?;
                let var = self.fresh(v);
                self.globals.insert(v.to_string(), var);
                Command::Declare(var)
            }
            "assert" => {
                self.arity(items, 1, pos)?;
                let f = self.boolean(&items[1])?;
                Command::Assert(f)
            }
            "check-sat" | "eliminate-quantifiers" => {
                self.arity(items, 0, pos)?;
                if self.query_seen {
                    return error(ErrorKind::Unsupported, pos, "more than one check-sat or eliminate-quantifiers");
                }
                self.query_seen = true;
                if name == "check-sat" {
                    Command::CheckSat
                } else {
                    Command::EliminateQuantifiers
                }
            }
            "exit" => {
                self.arity(items, 0, pos)?;
                Command::Exit
            }
            other => return error(ErrorKind::Unsupported, head.pos(), format!("command {other}")),
        };
        self.script.commands.push(cmd);
        Ok(())
    }

    fn real(&mut self, e: &Sexp) -> Result<Polynomial> {
        match self.term(e)? {
            Value::Real(p) => Ok(p),
            Value::Root(..) => error(ErrorKind::Sort, e.pos(), "root terms may only be compared with their variable"),
            Value::Bool(_) => error(ErrorKind::Sort, e.pos(), "expected a Real term, found a Bool term"),
        }
    }

    fn boolean(&mut self, e: &Sexp) -> Result<Formula> {
        match self.term(e)? {
            Value::Bool(f) => Ok(f),
            _ => error(ErrorKind::Sort, e.pos(), "expected a Bool term, found a Real term"),
        }
    }

    fn term(&mut self, e: &Sexp) -> Result<Value> {
        let (items, pos) = match e {
            Sexp::Leaf(Token::Numeral(_) | Token::Decimal(_), _) => {
                return Ok(Value::Real(Polynomial::constant(literal(e).unwrap())))
            }
            Sexp::Leaf(Token::Symbol(s), pos) => {
                return match s.as_str() {
                    "true" => Ok(Value::Bool(Formula::True)),
                    "false" => Ok(Value::Bool(Formula::False)),
                    _ => match self.lookup(s) {
                        Some(Binding::Var(v)) => Ok(Value::Real(Polynomial::var(v))),
                        Some(Binding::Let(v)) => Ok(v),
                        None => error(ErrorKind::Syntax, *pos, format!("undeclared symbol {s}")),
                    },
                }
            }
            Sexp::Leaf(_, pos) => return error(ErrorKind::Syntax, *pos, "expected a term"),
            Sexp::List(items, pos) => (items, *pos),
        };
        let Some(head) = items.first() else {
            return error(ErrorKind::Syntax, pos, "empty term");
        };
        let op = self.expect_symbol(head, "an operator")?;
        let args = &items[1..];
        match op {
            "exists" | "forall" => return self.quantifier(op == "exists", args, pos).map(Value::Bool),
            "let" => return self.let_binding(args, pos),
            "root" => return self.root(args, pos),
            "/" => {
                if args.len() != 2 {
                    return error(ErrorKind::Syntax, pos, "/ expects 2 arguments");
                }
                return match literal(e) {
                    Some(r) => Ok(Value::Real(Polynomial::constant(r))),
                    None if literal(&args[1]).is_some_and(|d| d.is_zero()) => {
                        error(ErrorKind::Syntax, pos, "division by zero")
                    }
                    None => error(
                        ErrorKind::Unsupported,
                        pos,
                        "division is only supported between numeric literals",
                    ),
                };
            }
            _ => {}
        }
        let values = args
            .iter()
            .map(|a| Ok((self.term(a)?, a.pos())))
            .collect::<Result<Vec<_>>>()?;
        let reals = |values: &[(Value, Pos)]| -> Result<Vec<Polynomial>> {
            values
                .iter()
                .map(|(v, p)| match v {
                    Value::Real(q) => Ok(q.clone()),
                    Value::Root(..) => error(ErrorKind::Sort, *p, "root terms may only be compared with their variable"),
                    Value::Bool(_) => error(ErrorKind::Sort, *p, "expected a Real term, found a Bool term"),
                })
                .collect()
        };
        let bools = |values: &[(Value, Pos)]| -> Result<Vec<Formula>> {
            values
                .iter()
                .map(|(v, p)| match v {
                    Value::Bool(f) => Ok(f.clone()),
                    _ => error(ErrorKind::Sort, *p, "expected a Bool term, found a Real term"),
                })
                .collect()
        };
        let at_least = |n: usize| -> Result<()> {
            if values.len() < n {
                return error(ErrorKind::Syntax, pos, format!("{op} expects at least {n} argument(s)"));
            }
            Ok(())
        };
        let value = match op {
            "+" => {
                at_least(1)?;
                Value::Real(reals(&values)?.iter().fold(Polynomial::zero(), |a, b| &a + b))
            }
            "*" => {
                at_least(1)?;
                Value::Real(reals(&values)?.iter().fold(Polynomial::one(), |a, b| &a * b))
            }
            "-" => {
                at_least(1)?;
                let r = reals(&values)?;
                if r.len() == 1 {
                    Value::Real(-&r[0])
                } else {
                    Value::Real(r[1..].iter().fold(r[0].clone(), |a, b| &a - b))
                }
            }
            "not" => {
                if values.len() != 1 {
                    return error(ErrorKind::Syntax, pos, "not expects 1 argument");
                }
                Value::Bool(Formula::not(bools(&values)?.pop().unwrap()))
            }
            "and" => Value::Bool(Formula::and(bools(&values)?)),
            "or" => Value::Bool(Formula::or(bools(&values)?)),
            "=>" => {
                at_least(2)?;
                let mut b = bools(&values)?;
                let last = b.pop().unwrap();
                Value::Bool(b.into_iter().rev().fold(last, |acc, a| Formula::implies(a, acc)))
            }
            "xor" => {
                at_least(2)?;
                let b = bools(&values)?;
                Value::Bool(b[1..].iter().fold(b[0].clone(), |acc, x| Formula::xor(acc, x.clone())))
            }
            "=" | "distinct" => {
                at_least(2)?;
                let eq = op == "=";
                if matches!(values[0].0, Value::Bool(_)) {
                    let b = bools(&values)?;
                    let pair = |a: &Formula, c: &Formula| {
                        let f = Formula::iff(a.clone(), c.clone());
                        if eq {
                            f
                        } else {
                            Formula::not(f)
                        }
                    };
                    Value::Bool(if eq { chain(&b, pair) } else { pairwise(&b, pair) })
                } else {
                    let rel = if eq { Rel::Eq } else { Rel::Ne };
                    Value::Bool(self.compare(rel, values, !eq)?)
                }
            }
            _ => match relation(op) {
                Some(rel) => {
                    at_least(2)?;
                    Value::Bool(self.compare(rel, values, false)?)
                }
                None => return error(ErrorKind::Unsupported, head.pos(), format!("operator {op}")),
            },
        };
        Ok(value)
    }

    /// A chained (or, for `distinct`, pairwise) comparison of Real terms;
    /// a root term may only face its own variable.
    fn compare(&self, rel: Rel, values: Vec<(Value, Pos)>, all_pairs: bool) -> Result<Formula> {
        if let Some((_, p)) = values.iter().find(|(v, _)| matches!(v, Value::Root(..))) {
            if values.len() != 2 {
                return error(ErrorKind::Unsupported, *p, "root terms in comparisons with more than two arguments");
            }
            let (atom, p) = match (&values[0], &values[1]) {
                ((Value::Real(lhs), _), (Value::Root(root, x), p)) => (root_atom(lhs, rel, root, *x), *p),
                ((Value::Root(root, x), p), (Value::Real(rhs), _)) => (root_atom(rhs, rel.mirror(), root, *x), *p),
                _ => (None, *p),
            };
            return atom.map_or_else(
                || error(ErrorKind::Unsupported, p, "root terms may only be compared with their variable"),
                |a| Ok(Formula::Root(a)),
            );
        }
        let mut polys = Vec::new();
        for (v, p) in values {
            match v {
                Value::Real(q) => polys.push(q),
                _ => return error(ErrorKind::Sort, p, "expected a Real term, found a Bool term"),
            }
        }
        let atom = |a: &Polynomial, b: &Polynomial| Formula::constraint(a - b, rel);
        Ok(if all_pairs { pairwise(&polys, atom) } else { chain(&polys, atom) })
    }

    fn bind_sorted_vars(&mut self, list: &Sexp) -> Result<Vec<Var>> {
        let Sexp::List(decls, pos) = list else {
            return error(ErrorKind::Syntax, list.pos(), "expected a list of sorted variables");
        };
        if decls.is_empty() {
            return error(ErrorKind::Syntax, *pos, "empty binder list");
        }
        let mut vars = Vec::new();
        for d in decls {
            let Sexp::List(pair, p) = d else {
                return error(ErrorKind::Syntax, d.pos(), "expected (name sort)");
            };
            if pair.len() != 2 {
                return error(ErrorKind::Syntax, *p, "expected (name sort)");
            }
            let name = self.expect_symbol(&pair[0], "a variable name")?.to_string();
            self.expect_real_sort(&pair[1])?;
            let v = self.fresh(&name);
            self.scope.push((name, Binding::Var(v)));
            vars.push(v);
        }
        Ok(vars)
    }

    fn quantifier(&mut self, exists: bool, args: &[Sexp], pos: Pos) -> Result<Formula> {
        if args.len() != 2 {
            return error(ErrorKind::Syntax, pos, "a binder expects a variable list and a body");
        }
        let depth = self.scope.len();
        let vars = self.bind_sorted_vars(&args[0])?;
        let body = self.boolean(&args[1]);
        self.scope.truncate(depth);
        let mut f = body?;
        for v in vars.into_iter().rev() {
            f = if exists {
                Formula::Exists(v, Box::new(f))
            } else {
                Formula::Forall(v, Box::new(f))
            };
        }
        Ok(f)
    }

    fn let_binding(&mut self, args: &[Sexp], pos: Pos) -> Result<Value> {
        if args.len() != 2 {
            return error(ErrorKind::Syntax, pos, "let expects bindings and a body");
        }
        let Sexp::List(binds, _) = &args[0] else {
            return error(ErrorKind::Syntax, args[0].pos(), "expected a list of bindings");
        };
        let mut values = Vec::new();
        for b in binds {
            let Sexp::List(pair, p) = b else {
                return error(ErrorKind::Syntax, b.pos(), "expected (name term)");
            };
            if pair.len() != 2 {
                return error(ErrorKind::Syntax, *p, "expected (name term)");
            }
            let name = self.expect_symbol(&pair[0], "a name")?.to_string();
            if self.lookup(&name).is_some() || values.iter().any(|(n, _)| *n == name) {
                return error(ErrorKind::Unsupported, pair[0].pos(), format!("let binding shadows {name}"));
            }
            let v = self.term(&pair[1])?;
            values.push((name, v));
        }
        let depth = self.scope.len();
        self.scope
            .extend(values.into_iter().map(|(n, v)| (n, Binding::Let(v))));
        let body = self.term(&args[1]);
        self.scope.truncate(depth);
        body
    }

    /// `(root p j x)`: the `j`-th real root of `p` in `x`, where `x` is the
    /// highest variable of `p`.
    fn root(&mut self, args: &[Sexp], pos: Pos) -> Result<Value> {
        if args.len() != 3 {
            return error(ErrorKind::Syntax, pos, "root expects a polynomial, an index and a variable");
        }
        let p = self.real(&args[0])?;
        let index = match &args[1] {
            Sexp::Leaf(Token::Numeral(n), _) if *n >= BigInt::one() => usize::try_from(n.clone()).ok(),
            _ => None,
        };
        let Some(index) = index else {
            return error(ErrorKind::Syntax, args[1].pos(), "root index must be a positive numeral");
        };
        let x = match self.real(&args[2])? {
            q if q.num_terms() == 1 && q.total_degree() == 1 && q.leading_coefficient().is_one() => {
                q.main_var().unwrap()
            }
            _ => return error(ErrorKind::Syntax, args[2].pos(), "expected a variable"),
        };
        if p.main_var() != Some(x) {
            return error(
                ErrorKind::Unsupported,
                args[0].pos(),
                "the root polynomial must contain its variable, and no variable introduced after it",
            );
        }
        Ok(Value::Root(IndexedRoot { poly: p, index }, x))
    }
}

fn root_atom(lhs: &Polynomial, rel: Rel, root: &IndexedRoot, x: Var) -> Option<ExtendedAtom> {
    (*lhs == Polynomial::var(x)).then(|| ExtendedAtom {
        var: x,
        rel,
        root: root.clone(),
    })
}

fn chain<T>(items: &[T], f: impl Fn(&T, &T) -> Formula) -> Formula {
    Formula::and(items.windows(2).map(|w| f(&w[0], &w[1])))
}

fn pairwise<T>(items: &[T], f: impl Fn(&T, &T) -> Formula) -> Formula {
    let mut parts = Vec::new();
    for (k, a) in items.iter().enumerate() {
        for b in &items[k + 1..] {
            parts.push(f(a, b));
        }
    }
    Formula::and(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_and_queries() {
        let s = parse("(declare-const x Real)(assert (> x 0))(check-sat)").unwrap();
        assert_eq!(s.commands.len(), 3);
        assert_eq!(s.names, vec!["x".to_string()]);
        assert_eq!(s.query().unwrap().0, Query::CheckSat);
    }

    #[test]
    fn qe_script_has_a_parameter() {
        let s = parse("(declare-fun x () Real)(assert (exists ((y Real)) (= (* y y) x)))(eliminate-quantifiers)").unwrap();
        let (q, f) = s.query().unwrap();
        assert_eq!(q, Query::EliminateQuantifiers);
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![Var(1)]);
    }

    #[test]
    fn division_by_a_variable_is_unsupported() {
        let e = parse("(declare-const x Real)\n(assert (/ x 2))").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Unsupported);
        assert_eq!(e.pos, Pos { line: 2, col: 9 });
        assert!(e.message.contains("division"));
    }

    #[test]
    fn decimals_are_exact() {
        let s = parse("(declare-const x Real)(assert (< x 0.1))").unwrap();
        let Command::Assert(f) = &s.commands[1] else { panic!() };
        let expected = Formula::constraint(
            &Polynomial::var(Var(1)) - &Polynomial::constant(Rational::new(1.into(), 10.into())),
            Rel::Lt,
        );
        assert_eq!(*f, expected);
    }

    #[test]
    fn literal_division() {
        let s = parse("(declare-const x Real)(assert (= x (/ 1 3)))").unwrap();
        let Command::Assert(f) = &s.commands[1] else { panic!() };
        let expected = Formula::constraint(&Polynomial::from_int(3) * &Polynomial::var(Var(1)) - Polynomial::one(), Rel::Eq);
        assert_eq!(*f, expected);
        assert_eq!(parse("(assert (= 1 (/ 1 0)))").unwrap_err().message, "division by zero");
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse("(declare-const x Int)").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Sort, Pos { line: 1, col: 18 }));
        let e = parse("(declare-const x Real)\n(assert (+ x 1))").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Sort, Pos { line: 2, col: 9 }));
        let e = parse("(assert (> y 0))").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Syntax, Pos { line: 1, col: 12 }));
        let e = parse("(assert true").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Syntax, Pos { line: 1, col: 1 }));
        let e = parse("(get-model)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Unsupported);
        let e = parse("(declare-const x Real)(assert (ite (> x 0) true false))").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Unsupported);
        let e = parse("(check-sat)(check-sat)").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Unsupported, Pos { line: 1, col: 12 }));
    }

    #[test]
    fn let_and_connectives() {
        let s = parse(
            "(declare-const x Real)(assert (let ((y (* x x)) (b (> x 1))) (=> b (xor (> y 1) (distinct x 2)))))",
        )
        .unwrap();
        assert!(matches!(s.commands[1], Command::Assert(_)));
        let e = parse("(declare-const x Real)(assert (let ((x 1)) (> x 0)))").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Unsupported);
    }

    #[test]
    fn root_atoms() {
        let s = parse("(declare-const x Real)(assert (< x (root (- (* x x) 2) 2 x)))").unwrap();
        let Command::Assert(Formula::Root(a)) = &s.commands[1] else { panic!() };
        assert_eq!((a.var, a.rel, a.root.index), (Var(1), Rel::Lt, 2));
        let s = parse("(declare-const x Real)(assert (< (root (- (* x x) 2) 1 x) x))").unwrap();
        let Command::Assert(Formula::Root(a)) = &s.commands[1] else { panic!() };
        assert_eq!(a.rel, Rel::Gt);
        let e = parse("(declare-const x Real)(declare-const y Real)(assert (< y (root (- x 2) 1 x)))").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Unsupported);
    }
}
