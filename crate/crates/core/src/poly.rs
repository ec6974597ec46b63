//! Multivariate polynomials over the rationals with weighted generators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{rat, Rat};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

pub fn monomial_weight(m: &[u32], weights: &[u32]) -> u32 {
    m.iter().zip(weights).map(|(e, w)| e * w).sum()
}

/// Graded order: lower weight first, then exponent vectors in descending
/// lexicographic order (so `X^6` precedes `X^4 Y`).
pub fn graded_cmp(a: &[u32], b: &[u32], weights: &[u32]) -> Ordering {
    monomial_weight(a, weights).cmp(&monomial_weight(b, weights)).then_with(|| b.cmp(a))
}

/// All monomials of total weight at most `max_weight`, in graded order.
pub fn monomials_up_to(weights: &[u32], max_weight: u32) -> Vec<Monomial> {
    fn go(weights: &[u32], budget: u32, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        let i = prefix.len();
        if i == weights.len() {
            out.push(prefix.clone());
            return;
        }
        let mut e = 0;
        loop {
            prefix.push(e);
            go(weights, budget - e * weights[i], prefix, out);
            prefix.pop();
            if (e + 1) * weights[i] > budget {
                break;
            }
            e += 1;
        }
    }
    assert!(weights.iter().all(|&w| w > 0), "generator weights must be positive");
    let mut out = Vec::new();
    go(weights, max_weight, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| graded_cmp(a, b, weights));
    out
}

pub fn render_monomial(m: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Poly::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::monomial(m, Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut p = Poly::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        assert_eq!(m.len(), self.nvars, "monomial arity mismatch");
        let v = self.terms.get(&m).cloned().unwrap_or_else(Rat::zero) + c;
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn top_weight(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|m| monomial_weight(m, weights)).max()
    }

    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        let mut ws = self.terms.keys().map(|m| monomial_weight(m, weights));
        match ws.next() {
            None => true,
            Some(w0) => ws.all(|w| w == w0),
        }
    }

    /// Evaluates at a point with rational coordinates.
    pub fn eval_at(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(m) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Renders terms by descending weight, ties in descending lexicographic order.
    pub fn render(&self, names: &[String], weights: &[u32]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut mons: Vec<&Monomial> = self.terms.keys().collect();
        mons.sort_by(|a, b| monomial_weight(b, weights).cmp(&monomial_weight(a, weights)).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for (k, m) in mons.into_iter().enumerate() {
            let c = &self.terms[m];
            let neg = c < &Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(m, names);
            if mono == "1" {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }

    /// Parses integer-coefficient polynomial syntax: `+ - * ^` and parentheses.
    pub fn parse(src: &str, names: &[String]) -> Result<Poly> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0, names, src };
        let poly = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(poly)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let m: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(m, x * y);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&rat(-1))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| Error::Parse(format!("integer too large at column {}", start + 1)))?;
            out.push((start, Tok::Int(n)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} at column {}", i + 1)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    names: &'a [String],
    src: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let col = self.tokens.get(self.pos).map_or(self.src.chars().count(), |t| t.0);
        Error::Parse(format!("{msg} at column {} in {:?}", col + 1, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') { -&self.term()? } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.error("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                let v = i64::try_from(v).map_err(|_| self.error("integer too large"))?;
                Ok(Poly::constant(n, rat(v)))
            }
            Some(Tok::Ident(name)) => {
                let i = self
                    .names
                    .iter()
                    .position(|x| *x == name)
                    .ok_or_else(|| self.error(&format!("unknown generator {name:?}")))?;
                self.pos += 1;
                Ok(Poly::var(n, i))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(p)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn enumerates_weighted_monomials() {
        let ms = monomials_up_to(&[2, 3], 5);
        let n = names(&["Y", "Z"]);
        let rendered: Vec<String> = ms.iter().map(|m| render_monomial(m, &n)).collect();
        assert_eq!(rendered, vec!["1", "Y", "Z", "Y^2", "Y*Z"]);

        let ms = monomials_up_to(&[1, 2, 3], 6);
        let n = names(&["X", "Y", "Z"]);
        let w6: Vec<String> =
            ms.iter().filter(|m| monomial_weight(m, &[1, 2, 3]) == 6).map(|m| render_monomial(m, &n)).collect();
        assert_eq!(w6, vec!["X^6", "X^4*Y", "X^3*Z", "X^2*Y^2", "X*Y*Z", "Y^3", "Z^2"]);

        assert_eq!(monomials_up_to(&[1], 3).len(), 4);
    }

    #[test]
    fn parse_and_render_round_trip() {
        let n = names(&["X", "Y", "Z"]);
        let p = Poly::parse("X*Y*Z - Y^3 - Z^2", &n).unwrap();
        assert_eq!(p.render(&n, &[1, 2, 3]), "X*Y*Z - Y^3 - Z^2");
        let q = Poly::parse(&p.render(&n, &[1, 2, 3]), &n).unwrap();
        assert_eq!(p, q);
        assert!(p.is_homogeneous(&[1, 2, 3]));
        assert_eq!(p.top_weight(&[1, 2, 3]), Some(6));
    }

    #[test]
    fn parse_handles_parentheses_and_constants() {
        let n = names(&["T"]);
        let p = Poly::parse("(T + 1)^2 - 2*T", &n).unwrap();
        assert_eq!(p, &Poly::var(1, 0).pow(2) + &Poly::one(1));
        assert_eq!(p.eval_at(&[rat(3)]), rat(10));
    }

    #[test]
    fn parse_errors_name_the_problem() {
        let n = names(&["Y"]);
        let e = Poly::parse("Y + Q", &n).unwrap_err();
        assert!(e.to_string().contains("unknown generator"));
        assert!(Poly::parse("Y^", &n).is_err());
        assert!(Poly::parse("Y $ 2", &n).is_err());
    }

    #[test]
    fn inhomogeneous_relation_is_detected() {
        let n = names(&["Y", "Z"]);
        let p = Poly::parse("Y*Z - Y^3 - Z^2", &n).unwrap();
        assert!(!p.is_homogeneous(&[2, 3]));
        assert_eq!(p.render(&n, &[2, 3]), "-Y^3 - Z^2 + Y*Z");
    }
}
