//! One-variable kernel expressions: parsing, printing, exact evaluation.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr     := term (("+"|"-") term)* ;
//! term     := factor ("*" factor)* ;
//! factor   := rational | "r" | "-" factor | "(" expr ")" | call ;
//! call     := ("abs"|"min"|"max"|"pow"|"div"|"ifzero") "(" expr ("," expr)* ")" ;
//! rational := integer ("/" positive-integer)? .
//! ```
//!
//! Arities: `abs/1`, `min/2`, `max/2`, `pow/2` (second argument a
//! nonnegative integer literal), `div/2`, `ifzero/3`. `ifzero(c, a, b)`
//! evaluates `a` when `c = 0` and `b` otherwise, and only the selected
//! branch is evaluated, so guarded divisions are total. Evaluation is exact
//! over the rationals; there are no transcendental functions.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Rat};

/// Closed expression over one variable `r` with exact rational semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Lit(Rat),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Div(Box<Expr>, Box<Expr>),
    IfZero(Box<Expr>, Box<Expr>, Box<Expr>),
}

// AST builders are associated constructors taking operands by value, not
// operator-trait impls on references.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn lit(q: Rat) -> Expr {
        Expr::Lit(q)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Lit(rat::rat_int(n))
    }

    pub fn zero() -> Expr {
        Expr::Lit(Rat::zero())
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn abs_of(e: Expr) -> Expr {
        Expr::Abs(Box::new(e))
    }

    pub fn min_of(a: Expr, b: Expr) -> Expr {
        Expr::Min(Box::new(a), Box::new(b))
    }

    pub fn max_of(a: Expr, b: Expr) -> Expr {
        Expr::Max(Box::new(a), Box::new(b))
    }

    pub fn pow_of(e: Expr, k: u32) -> Expr {
        Expr::Pow(Box::new(e), k)
    }

    pub fn div_of(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn ifzero(c: Expr, a: Expr, b: Expr) -> Expr {
        Expr::IfZero(Box::new(c), Box::new(a), Box::new(b))
    }

    /// Exact value at `r`. Errors only on division by zero in an unguarded
    /// `div`; `ifzero` branches lazily.
    pub fn eval(&self, r: &Rat) -> Result<Rat> {
        match self {
            Expr::Lit(q) => Ok(q.clone()),
            Expr::Var => Ok(r.clone()),
            Expr::Neg(e) => Ok(-e.eval(r)?),
            Expr::Add(a, b) => Ok(a.eval(r)? + b.eval(r)?),
            Expr::Sub(a, b) => Ok(a.eval(r)? - b.eval(r)?),
            Expr::Mul(a, b) => Ok(a.eval(r)? * b.eval(r)?),
            Expr::Abs(e) => Ok(e.eval(r)?.abs()),
            Expr::Min(a, b) => Ok(rat::min(&a.eval(r)?, &b.eval(r)?)),
            Expr::Max(a, b) => Ok(rat::max(&a.eval(r)?, &b.eval(r)?)),
            Expr::Pow(e, k) => Ok(Pow::pow(&e.eval(r)?, *k)),
            Expr::Div(a, b) => {
                let d = b.eval(r)?;
                if d.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(a.eval(r)? / d)
                }
            }
            Expr::IfZero(c, a, b) => {
                if c.eval(r)?.is_zero() {
                    a.eval(r)
                } else {
                    b.eval(r)
                }
            }
        }
    }
}

// ---- lexer ----

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            ',' => {
                tokens.push((Token::Comma, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                tokens.push((Token::Num(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((Token::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Parse {
                    position: i,
                    message: alloc::format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(tokens)
}

// ---- parser ----

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: &str) -> Error {
        Error::Parse {
            position: self.position(),
            message: message.to_string(),
        }
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut left = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let right = self.term()?;
                    left = Expr::add(left, right);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let right = self.term()?;
                    left = Expr::sub(left, right);
                }
                _ => return Ok(left),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut left = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let right = self.factor()?;
            left = Expr::mul(left, right);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Token::Num(n)) => self.rational_tail(n),
            Some(Token::Minus) => {
                let inner = self.factor()?;
                // fold a negated literal so that `-3/2` is one constant
                Ok(match inner {
                    Expr::Lit(q) => Expr::Lit(-q),
                    other => Expr::neg(other),
                })
            }
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen, "expected `)`")?;
                Ok(e)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "r" => Ok(Expr::Var),
                "abs" | "min" | "max" | "pow" | "div" | "ifzero" => self.call(&name),
                _ => {
                    self.pos -= 1;
                    Err(self.err(&alloc::format!("unknown identifier `{name}`")))
                }
            },
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected a factor"))
            }
        }
    }

    fn rational_tail(&mut self, numer: BigInt) -> Result<Expr> {
        if self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            match self.bump() {
                Some(Token::Num(denom)) => {
                    if denom.is_zero() {
                        self.pos -= 1;
                        return Err(self.err("denominator must be a positive integer"));
                    }
                    Ok(Expr::Lit(Rat::new(numer, denom)))
                }
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    Err(self.err("expected a denominator after `/`"))
                }
            }
        } else {
            Ok(Expr::Lit(Rat::from_integer(numer)))
        }
    }

    fn call(&mut self, name: &str) -> Result<Expr> {
        self.expect(Token::LParen, "expected `(` after function name")?;
        let mut args = Vec::new();
        args.push(self.expr()?);
        while self.peek() == Some(&Token::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(Token::RParen, "expected `)` to close the argument list")?;
        let arity = match name {
            "abs" => 1,
            "ifzero" => 3,
            _ => 2,
        };
        if args.len() != arity {
            return Err(self.err(&alloc::format!(
                "`{name}` expects {arity} argument(s), got {}",
                args.len()
            )));
        }
        let mut it = args.into_iter();
        Ok(match name {
            "abs" => Expr::abs_of(it.next().unwrap()),
            "min" => {
                let a = it.next().unwrap();
                Expr::min_of(a, it.next().unwrap())
            }
            "max" => {
                let a = it.next().unwrap();
                Expr::max_of(a, it.next().unwrap())
            }
            "div" => {
                let a = it.next().unwrap();
                Expr::div_of(a, it.next().unwrap())
            }
            "ifzero" => {
                let c = it.next().unwrap();
                let a = it.next().unwrap();
                Expr::ifzero(c, a, it.next().unwrap())
            }
            "pow" => {
                let base = it.next().unwrap();
                let k = match it.next().unwrap() {
                    Expr::Lit(q) if q.is_integer() => {
                        if q.is_negative() {
                            return Err(self.err("negative exponent in `pow`"));
                        }
                        u32::try_from(q.to_integer())
                            .map_err(|_| self.err("exponent too large in `pow`"))?
                    }
                    _ => {
                        return Err(self.err(
                            "`pow` exponent must be a nonnegative integer literal",
                        ))
                    }
                };
                Expr::pow_of(base, k)
            }
            _ => unreachable!(),
        })
    }
}

/// Parses the expression grammar; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Expr> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(e)
}

// ---- printer ----

// Precedence levels: additive 1, multiplicative 2, prefix minus 3, atoms 4.
fn fmt_prec(e: &Expr, prec: u8, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
    let parens = |level: u8| prec > level;
    match e {
        Expr::Lit(q) => write!(f, "{q}"),
        Expr::Var => f.write_str("r"),
        Expr::Neg(inner) => {
            f.write_str("-")?;
            // a bare negated literal would re-parse as one folded constant
            if matches!(**inner, Expr::Lit(_)) {
                f.write_str("(")?;
                fmt_prec(inner, 1, f)?;
                f.write_str(")")
            } else {
                fmt_prec(inner, 3, f)
            }
        }
        Expr::Add(a, b) => {
            if parens(1) {
                f.write_str("(")?;
            }
            fmt_prec(a, 1, f)?;
            f.write_str(" + ")?;
            fmt_prec(b, 2, f)?;
            if parens(1) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Expr::Sub(a, b) => {
            if parens(1) {
                f.write_str("(")?;
            }
            fmt_prec(a, 1, f)?;
            f.write_str(" - ")?;
            fmt_prec(b, 2, f)?;
            if parens(1) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Expr::Mul(a, b) => {
            if parens(2) {
                f.write_str("(")?;
            }
            fmt_prec(a, 2, f)?;
            f.write_str(" * ")?;
            fmt_prec(b, 3, f)?;
            if parens(2) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Expr::Abs(a) => {
            f.write_str("abs(")?;
            fmt_prec(a, 1, f)?;
            f.write_str(")")
        }
        Expr::Min(a, b) => {
            f.write_str("min(")?;
            fmt_prec(a, 1, f)?;
            f.write_str(", ")?;
            fmt_prec(b, 1, f)?;
            f.write_str(")")
        }
        Expr::Max(a, b) => {
            f.write_str("max(")?;
            fmt_prec(a, 1, f)?;
            f.write_str(", ")?;
            fmt_prec(b, 1, f)?;
            f.write_str(")")
        }
        Expr::Pow(a, k) => {
            f.write_str("pow(")?;
            fmt_prec(a, 1, f)?;
            write!(f, ", {k})")
        }
        Expr::Div(a, b) => {
            f.write_str("div(")?;
            fmt_prec(a, 1, f)?;
            f.write_str(", ")?;
            fmt_prec(b, 1, f)?;
            f.write_str(")")
        }
        Expr::IfZero(c, a, b) => {
            f.write_str("ifzero(")?;
            fmt_prec(c, 1, f)?;
            f.write_str(", ")?;
            fmt_prec(a, 1, f)?;
            f.write_str(", ")?;
            fmt_prec(b, 1, f)?;
            f.write_str(")")
        }
    }
}

impl core::fmt::Display for Expr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        fmt_prec(self, 1, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn parses_positive_part() {
        let e = parse("max(r, 0)").unwrap();
        assert_eq!(e, Expr::max_of(Expr::var(), Expr::zero()));
        assert_eq!(e.eval(&rat_int(-3)).unwrap(), rat_int(0));
        assert_eq!(e.eval(&rat(5, 2)).unwrap(), rat(5, 2));
    }

    #[test]
    fn guarded_inverse_square_is_total() {
        let e = parse("ifzero(r, 0, div(1, pow(r,2)))").unwrap();
        assert_eq!(e.eval(&rat(1, 10)).unwrap(), rat_int(100));
        assert_eq!(e.eval(&rat_int(0)).unwrap(), rat_int(0));
        assert_eq!(e.eval(&rat(1, 1000)).unwrap(), rat_int(1_000_000));
    }

    #[test]
    fn unguarded_division_by_zero_errors() {
        let e = parse("div(1, r)").unwrap();
        assert_eq!(e.eval(&rat_int(0)), Err(Error::DivisionByZero));
        assert_eq!(e.eval(&rat_int(2)).unwrap(), rat(1, 2));
    }

    #[test]
    fn mixed_arithmetic() {
        let e = parse("3/2 * r - abs(r)").unwrap();
        assert_eq!(e.eval(&rat_int(2)).unwrap(), rat_int(1));
        assert_eq!(e.eval(&rat_int(-2)).unwrap(), rat_int(-5));
    }

    #[test]
    fn negative_literals_fold() {
        assert_eq!(parse("-3/2").unwrap(), Expr::lit(rat(-3, 2)));
        assert_eq!(parse("-r").unwrap(), Expr::neg(Expr::var()));
        assert_eq!(
            parse("-(r + 1)").unwrap(),
            Expr::neg(Expr::add(Expr::var(), Expr::int(1)))
        );
    }

    #[test]
    fn pow_exponent_must_be_nonnegative_integer() {
        assert!(matches!(parse("pow(r, -2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("pow(r, 1/2)"), Err(Error::Parse { .. })));
        assert!(parse("pow(r, 0)").is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("max(r") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse("min(r)").is_err()); // arity
        assert!(parse("r r").is_err()); // trailing input
        assert!(parse("1/0").is_err()); // zero denominator
        assert!(parse("foo(r)").is_err()); // unknown call
    }

    #[test]
    fn print_parse_round_trip_on_samples() {
        let samples = [
            "max(r, 0)",
            "ifzero(r, 0, div(1, pow(r, 2)))",
            "3/2 * r - abs(r)",
            "-(r + 1) * min(r, 2)",
            "r - -3",
            "-r * (r + 1/4)",
        ];
        for s in samples {
            let e = parse(s).unwrap();
            let printed = alloc::format!("{e}");
            let reparsed = parse(&printed).unwrap();
            assert_eq!(e, reparsed, "round trip failed for `{s}` -> `{printed}`");
        }
    }

    #[test]
    fn associativity_survives_printing() {
        // a - b + c groups left
        let e = parse("1 - r + 2").unwrap();
        assert_eq!(
            e,
            Expr::add(Expr::sub(Expr::int(1), Expr::var()), Expr::int(2))
        );
        let rt = parse(&alloc::format!("{e}")).unwrap();
        assert_eq!(e, rt);
        // forcing the other grouping needs parentheses, which print back
        let g = parse("1 - (r + 2)").unwrap();
        let rt2 = parse(&alloc::format!("{g}")).unwrap();
        assert_eq!(g, rt2);
        assert_ne!(e, g);
    }
}
