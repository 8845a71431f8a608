//! The term language over the residuated-lattice signature.
//!
//! Grammar (ASCII): variables `[a-z][a-z0-9]*` except the literals `e` and
//! `f`; infix `*` (fusion, left-associative), `->` (residual,
//! right-associative), `/\` (meet), `\/` (join); prefix `~` (negation);
//! postfix `^*` (star, `x→e`) and `^n` (fused power, `x^0 = e`); `|t|`
//! (absolute value, `t→t`); parentheses.  Binding, tightest first:
//! `~`, `^*`/`^n`, `*`, `/\`, `\/`, `->`.
//!
//! `f`, `^*`, `^n` and `|t|` are abbreviations and expand structurally, so a
//! parsed term is a tree over fusion, residual, meet, join, negation, `e`
//! and variables only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    E,
    Fuse(Box<Term>, Box<Term>),
    Resid(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Neg(Box<Term>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent {n} exceeds the carrier size {max}")]
    PowTooLarge { n: usize, max: usize },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("term uses negation but the algebra has no involution")]
    NoInvolution,
}

/// A variable assignment; keys are variable names.
pub type Assignment = BTreeMap<String, Elem>;

/// Outcome of an exhaustive equation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationVerdict {
    Holds,
    /// The first counterexample in lexicographic assignment order
    /// (variables sorted by name, elements by index), with both values.
    Fails {
        assignment: Assignment,
        lhs: Elem,
        rhs: Elem,
    },
}

impl EquationVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EquationVerdict::Holds)
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn fuse(a: Term, b: Term) -> Term {
        Term::Fuse(Box::new(a), Box::new(b))
    }

    pub fn resid(a: Term, b: Term) -> Term {
        Term::Resid(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    /// f = ¬e.
    pub fn f() -> Term {
        Term::neg(Term::E)
    }

    /// x* = x → e.
    pub fn star(a: Term) -> Term {
        Term::resid(a, Term::E)
    }

    /// |x| = x → x.
    pub fn abs(a: Term) -> Term {
        Term::resid(a.clone(), a)
    }

    /// x ↔ y = (x→y) ∧ (y→x).
    pub fn iff(a: Term, b: Term) -> Term {
        Term::meet(Term::resid(a.clone(), b.clone()), Term::resid(b, a))
    }

    /// xⁿ by iterated fusion, x⁰ = e.
    pub fn pow(a: Term, n: usize) -> Term {
        match n {
            0 => Term::E,
            _ => {
                let mut t = a.clone();
                for _ in 1..n {
                    t = Term::fuse(t, a.clone());
                }
                t
            }
        }
    }

    /// σ(x) = (x ∧ e)·(x* ∧ e)*.
    pub fn sigma(x: Term) -> Term {
        Term::fuse(
            Term::meet(x.clone(), Term::E),
            Term::star(Term::meet(Term::star(x), Term::E)),
        )
    }

    /// d′(x) = (f² → (x·f)) ∧ (f²·¬x).
    pub fn d_prime(x: Term) -> Term {
        let f2 = Term::pow(Term::f(), 2);
        Term::meet(
            Term::resid(f2.clone(), Term::fuse(x.clone(), Term::f())),
            Term::fuse(f2, Term::neg(x)),
        )
    }

    /// d(x) = d′(¬x).
    pub fn d(x: Term) -> Term {
        Term::d_prime(Term::neg(x))
    }

    /// σ′(x) = ¬σ(¬x).
    pub fn sigma_prime(x: Term) -> Term {
        Term::neg(Term::sigma(Term::neg(x)))
    }

    pub fn uses_negation(&self) -> bool {
        match self {
            Term::Var(_) | Term::E => false,
            Term::Neg(_) => true,
            Term::Fuse(a, b) | Term::Resid(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                a.uses_negation() || b.uses_negation()
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn walk(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(v) => {
                    out.insert(v.clone());
                }
                Term::E => {}
                Term::Neg(a) => walk(a, out),
                Term::Fuse(a, b) | Term::Resid(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<Term, TermError> {
        Parser::new(text, None).parse_full()
    }

    /// Like [`Term::parse`], but rejects `^n` exponents above `max_pow`.
    /// Powers cycle inside a finite monoid, so exponents beyond the carrier
    /// size of the intended algebra are almost certainly input mistakes.
    pub fn parse_bounded(text: &str, max_pow: usize) -> Result<Term, TermError> {
        Parser::new(text, Some(max_pow)).parse_full()
    }
}

/// Evaluates a term bottom-up over the operation tables of `a`.
pub fn eval(a: &FiniteAlgebra, t: &Term, asg: &Assignment) -> Result<Elem, TermError> {
    match t {
        Term::Var(v) => asg
            .get(v)
            .copied()
            .ok_or_else(|| TermError::UnboundVariable(v.clone())),
        Term::E => Ok(a.e()),
        Term::Fuse(x, y) => Ok(a.fuse(eval(a, x, asg)?, eval(a, y, asg)?)),
        Term::Resid(x, y) => Ok(a.resid(eval(a, x, asg)?, eval(a, y, asg)?)),
        Term::Meet(x, y) => Ok(a.meet(eval(a, x, asg)?, eval(a, y, asg)?)),
        Term::Join(x, y) => Ok(a.join(eval(a, x, asg)?, eval(a, y, asg)?)),
        Term::Neg(x) => {
            if !a.has_involution() {
                return Err(TermError::NoInvolution);
            }
            Ok(a.neg_of(eval(a, x, asg)?))
        }
    }
}

/// Checks `lhs = rhs` over every assignment to the free variables of both
/// sides.  Assignments are enumerated lexicographically (variables sorted by
/// name, each running over element indices in order), and the first failing
/// one is reported.
pub fn check_equation(
    a: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
) -> Result<EquationVerdict, TermError> {
    if (lhs.uses_negation() || rhs.uses_negation()) && !a.has_involution() {
        return Err(TermError::NoInvolution);
    }
    let vars: Vec<String> = lhs
        .free_vars()
        .union(&rhs.free_vars())
        .cloned()
        .collect();
    let n = a.size();
    let mut odo = vec![0usize; vars.len()];
    loop {
        let asg: Assignment = vars.iter().cloned().zip(odo.iter().copied()).collect();
        let l = eval(a, lhs, &asg)?;
        let r = eval(a, rhs, &asg)?;
        if l != r {
            return Ok(EquationVerdict::Fails {
                assignment: asg,
                lhs: l,
                rhs: r,
            });
        }
        // Advance the odometer; the last variable runs fastest.
        let mut i = vars.len();
        loop {
            if i == 0 {
                return Ok(EquationVerdict::Holds);
            }
            i -= 1;
            odo[i] += 1;
            if odo[i] < n {
                break;
            }
            odo[i] = 0;
        }
    }
}

/// Checks `lhs ≤ rhs` exhaustively, encoded as `lhs ∧ rhs = lhs`.
pub fn check_inequality(
    a: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
) -> Result<EquationVerdict, TermError> {
    check_equation(a, &Term::meet(lhs.clone(), rhs.clone()), lhs)
}

/// Splits an `lhs = rhs` string and parses both sides.
pub fn parse_equation(text: &str, max_pow: Option<usize>) -> Result<(Term, Term), TermError> {
    let pos = text.find('=').ok_or_else(|| TermError::Syntax {
        pos: text.len(),
        msg: "expected `lhs = rhs`".into(),
    })?;
    let (l, r) = (&text[..pos], &text[pos + 1..]);
    let parse = |s: &str| match max_pow {
        Some(m) => Term::parse_bounded(s, m),
        None => Term::parse(s),
    };
    Ok((parse(l)?, parse(r)?))
}

/// The named equations accepted by the command line.
///
/// * `sigma`: (x ∧ e)·(x* ∧ e)* = x
/// * `sigma-sm`: x = (x ∧ e)·¬(¬x ∧ f)
/// * `negcone`: x = (d(σx) ∧ σx) ∨ (d′(σ′x) ∧ σ′x) ∨ ((f² ∨ ¬(f²)) → σ′x)
/// * `gsm`: (x ∨ e)** = x ∨ e
/// * `semilinear`: e ∧ ((x→y) ∨ (y→x)) = e, i.e. e ≤ (x→y) ∨ (y→x)
pub fn named_equation(key: &str) -> Option<(Term, Term)> {
    let x = || Term::var("x");
    let y = || Term::var("y");
    match key {
        "sigma" => Some((Term::sigma(x()), x())),
        "sigma-sm" => Some((
            x(),
            Term::fuse(
                Term::meet(x(), Term::E),
                Term::neg(Term::meet(Term::neg(x()), Term::f())),
            ),
        )),
        "negcone" => {
            let f2 = Term::pow(Term::f(), 2);
            let rhs = Term::join(
                Term::join(
                    Term::meet(Term::d(Term::sigma(x())), Term::sigma(x())),
                    Term::meet(Term::d_prime(Term::sigma_prime(x())), Term::sigma_prime(x())),
                ),
                Term::resid(Term::join(f2.clone(), Term::neg(f2)), Term::sigma_prime(x())),
            );
            Some((x(), rhs))
        }
        "gsm" => {
            let lhs = Term::star(Term::star(Term::join(x(), Term::E)));
            Some((lhs, Term::join(x(), Term::E)))
        }
        "semilinear" => {
            let disj = Term::join(Term::resid(x(), y()), Term::resid(y(), x()));
            Some((Term::meet(Term::E, disj), Term::E))
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    max_pow: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, max_pow: Option<usize>) -> Parser<'a> {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            max_pow,
        }
    }

    fn parse_full(mut self) -> Result<Term, TermError> {
        let t = self.arrow()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(t)
    }

    fn err(&self, msg: &str) -> TermError {
        TermError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    // arrow := join ('->' arrow)?   (right-associative)
    fn arrow(&mut self) -> Result<Term, TermError> {
        let lhs = self.join()?;
        if self.eat("->") {
            let rhs = self.arrow()?;
            return Ok(Term::resid(lhs, rhs));
        }
        Ok(lhs)
    }

    fn join(&mut self) -> Result<Term, TermError> {
        let mut t = self.meet()?;
        while self.eat("\\/") {
            let rhs = self.meet()?;
            t = Term::join(t, rhs);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, TermError> {
        let mut t = self.fusion()?;
        while self.eat("/\\") {
            let rhs = self.fusion()?;
            t = Term::meet(t, rhs);
        }
        Ok(t)
    }

    fn fusion(&mut self) -> Result<Term, TermError> {
        let mut t = self.postfix()?;
        while self.eat("*") {
            let rhs = self.postfix()?;
            t = Term::fuse(t, rhs);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term, TermError> {
        let mut t = self.prefix()?;
        loop {
            self.skip_ws();
            if self.bytes[self.pos..].starts_with(b"^*") {
                self.pos += 2;
                t = Term::star(t);
            } else if self.bytes.get(self.pos) == Some(&b'^') {
                self.pos += 1;
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_digit())
                {
                    self.pos += 1;
                }
                if self.pos == start {
                    return Err(self.err("expected `*` or an exponent after `^`"));
                }
                let n: usize = std::str::from_utf8(&self.bytes[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err("exponent out of range"))?;
                if let Some(max) = self.max_pow {
                    if n > max {
                        return Err(TermError::PowTooLarge { n, max });
                    }
                }
                t = Term::pow(t, n);
            } else {
                return Ok(t);
            }
        }
    }

    fn prefix(&mut self) -> Result<Term, TermError> {
        if self.eat("~") {
            let t = self.prefix()?;
            return Ok(Term::neg(t));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.arrow()?;
                if !self.eat(")") {
                    return Err(self.err("expected `)`"));
                }
                Ok(t)
            }
            Some(b'|') => {
                self.pos += 1;
                let t = self.arrow()?;
                if !self.eat("|") {
                    return Err(self.err("expected closing `|`"));
                }
                Ok(Term::abs(t))
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                self.pos += 1;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match name {
                    "e" => Ok(Term::E),
                    "f" => Ok(Term::f()),
                    _ => Ok(Term::var(name)),
                }
            }
            _ => Err(self.err("expected a variable, `e`, `f`, `(`, `|` or `~`")),
        }
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

impl fmt::Display for Term {
    /// Prints with minimal parentheses; `parse(print(t)) = t`.  Only `f` is
    /// re-sugared; stars, powers and absolute values print expanded.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_prec(self, 0, out)
    }
}

fn prec(t: &Term) -> u8 {
    match t {
        Term::Resid(..) => 0,
        Term::Join(..) => 1,
        Term::Meet(..) => 2,
        Term::Fuse(..) => 3,
        Term::Neg(..) => 5,
        Term::Var(_) | Term::E => 6,
    }
}

fn print_prec(t: &Term, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Term::Neg(inner) = t {
        if **inner == Term::E {
            return out.write_str("f");
        }
    }
    let p = prec(t);
    let parens = p < min;
    if parens {
        out.write_str("(")?;
    }
    match t {
        Term::Var(v) => out.write_str(v)?,
        Term::E => out.write_str("e")?,
        Term::Resid(a, b) => {
            print_prec(a, 1, out)?;
            out.write_str(" -> ")?;
            print_prec(b, 0, out)?;
        }
        Term::Join(a, b) => {
            print_prec(a, 1, out)?;
            out.write_str(" \\/ ")?;
            print_prec(b, 2, out)?;
        }
        Term::Meet(a, b) => {
            print_prec(a, 2, out)?;
            out.write_str(" /\\ ")?;
            print_prec(b, 3, out)?;
        }
        Term::Fuse(a, b) => {
            print_prec(a, 3, out)?;
            out.write_str(" * ")?;
            print_prec(b, 4, out)?;
        }
        Term::Neg(a) => {
            out.write_str("~")?;
            print_prec(a, 5, out)?;
        }
    }
    if parens {
        out.write_str(")")?;
    }
    Ok(())
}
