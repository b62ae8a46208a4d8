//! Polynomial expressions over named ring elements, e.g. `theta1*theta2 + 1/10*h^2`.

use super::model::{Model, RingElement};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Sym(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.char_indices().collect(),
            pos: 0,
            src,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |c| c.0)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.offset();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let n: u32 = digits.parse().map_err(|_| perr(start, "expected a nonnegative integer exponent"))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !f(c) {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = {
            self.skip_ws();
            self.offset()
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(perr(self.offset(), "expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut s = self.take_while(|c| c.is_ascii_digit() || c == '.');
                if self.chars.get(self.pos).is_some_and(|c| c.1 == '/') {
                    self.pos += 1;
                    let den = self.take_while(|c| c.is_ascii_digit());
                    s = format!("{s}/{den}");
                }
                parse_rational(&s).map(Expr::Num).map_err(|_| perr(start, format!("bad number `{s}`")))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '\'');
                Ok(Expr::Sym(name, start))
            }
            Some(c) => Err(perr(start, format!("unexpected `{c}`"))),
            None => Err(perr(start, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(perr(p.offset(), "trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Evaluates with symbols resolved by `lookup`.
    pub fn eval<F: Scalar>(
        &self,
        model: &Model<F>,
        lookup: &dyn Fn(&str) -> Option<RingElement<F>>,
    ) -> Result<RingElement<F>> {
        Ok(match self {
            Expr::Num(q) => RingElement::constant(model, F::from_rational(q)),
            Expr::Sym(name, _) => lookup(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?,
            Expr::Add(a, b) => a.eval(model, lookup)?.try_add(&b.eval(model, lookup)?)?,
            Expr::Sub(a, b) => a.eval(model, lookup)?.try_sub(&b.eval(model, lookup)?)?,
            Expr::Mul(a, b) => a.eval(model, lookup)?.try_mul(&b.eval(model, lookup)?)?,
            Expr::Neg(a) => -&a.eval(model, lookup)?,
            Expr::Pow(a, n) => a.eval(model, lookup)?.pow(*n as usize)?,
        })
    }
}

/// Parses and evaluates against basis names and labels of `model`.
pub fn eval_in<F: Scalar>(model: &Model<F>, src: &str) -> Result<RingElement<F>> {
    parse_expr(src)?.eval(model, &|name| RingElement::named(model, name).ok())
}

/// Parses a product of generators such as `xi^2*f` (or `1`) into exponents.
pub fn parse_monomial(src: &str, generators: &[String]) -> Result<Vec<u32>> {
    let mut exps = vec![0u32; generators.len()];
    let t = src.trim();
    if t == "1" {
        return Ok(exps);
    }
    let mut offset = src.len() - src.trim_start().len();
    for factor in t.split('*') {
        let (name, power) = match factor.split_once('^') {
            Some((n, k)) => {
                let k: u32 = k
                    .trim()
                    .parse()
                    .map_err(|_| perr(offset, format!("bad exponent in `{factor}`")))?;
                (n.trim(), k)
            }
            None => (factor.trim(), 1),
        };
        let idx = generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| perr(offset, format!("unknown generator `{name}`")))?;
        exps[idx] += power;
        offset += factor.len() + 1;
    }
    Ok(exps)
}

/// `xi^2*f` style text for an exponent vector; `1` for the empty monomial.
pub fn monomial_text(exps: &[u32], generators: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(generators)
        .filter(|(e, _)| **e > 0)
        .map(|(e, g)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
