//! Rational functions of one variable in partial-fraction form:
//! a polynomial part plus pole parts `(x - q)^-b` at finitely many points.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::Rat;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// `x^a`
    Pow(u32),
    /// `(x - q)^-b` with `b >= 1`
    Pole(Rat, u32),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatFun {
    terms: BTreeMap<Term, Rat>,
}

fn binom(n: u32, k: u32) -> Rat {
    Rat::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

fn ipow(x: &Rat, e: i64) -> Rat {
    if e >= 0 {
        Pow::pow(x, e as u64)
    } else {
        Pow::pow(x.recip(), (-e) as u64)
    }
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun::default()
    }

    pub fn constant(c: Rat) -> Self {
        RatFun::term(Term::Pow(0), c)
    }

    pub fn one() -> Self {
        RatFun::constant(Rat::one())
    }

    pub fn term(t: Term, c: Rat) -> Self {
        let mut f = RatFun::zero();
        f.add_term(t, c);
        f
    }

    pub fn x_pow(a: u32) -> Self {
        RatFun::term(Term::Pow(a), Rat::one())
    }

    pub fn pole(q: Rat, b: u32) -> Self {
        assert!(b >= 1, "pole order starts at 1");
        RatFun::term(Term::Pole(q, b), Rat::one())
    }

    /// Polynomial from coefficients in increasing degree.
    pub fn poly(coeffs: &[Rat]) -> Self {
        let mut f = RatFun::zero();
        for (a, c) in coeffs.iter().enumerate() {
            f.add_term(Term::Pow(a as u32), c.clone());
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &Term) -> Rat {
        self.terms.get(t).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, t: Term, c: Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.coeff(&t) + c;
        if v.is_zero() {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, v);
        }
    }

    pub fn add_scaled(&mut self, other: &RatFun, c: &Rat) {
        for (t, x) in &other.terms {
            self.add_term(t.clone(), x * c);
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        let mut out = RatFun::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        let mut out = RatFun::zero();
        for (s, x) in &self.terms {
            for (t, y) in &other.terms {
                out.add_scaled(&term_product(s, t), &(x * y));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> RatFun {
        let mut out = RatFun::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn poly_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(|t| match t {
                Term::Pow(a) => Some(*a),
                Term::Pole(..) => None,
            })
            .max()
    }

    pub fn pole_order(&self, q: &Rat) -> u32 {
        self.terms
            .keys()
            .filter_map(|t| match t {
                Term::Pole(p, b) if p == q => Some(*b),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn check_regular(&self, q: &Rat) -> Result<()> {
        if self.pole_order(q) > 0 {
            return Err(Error::Invalid(format!("function has a pole at {q}")));
        }
        Ok(())
    }

    pub fn eval(&self, q: &Rat) -> Result<Rat> {
        self.check_regular(q)?;
        Ok(self.terms.iter().map(|(t, c)| c * term_value(t, q)).sum())
    }

    pub fn deriv_at(&self, q: &Rat) -> Result<Rat> {
        self.check_regular(q)?;
        Ok(self.terms.iter().map(|(t, c)| c * term_deriv(t, q)).sum())
    }

    pub fn render(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (t, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let base = match t {
                Term::Pow(0) => String::new(),
                Term::Pow(1) => var.to_string(),
                Term::Pow(e) => format!("{var}^{e}"),
                Term::Pole(q, b) => {
                    let shift = if q.is_zero() {
                        var.to_string()
                    } else if q < &Rat::zero() {
                        format!("({var}+{})", -q.clone())
                    } else {
                        format!("({var}-{q})")
                    };
                    format!("{shift}^-{b}")
                }
            };
            match (base.is_empty(), a.is_one()) {
                (true, _) => out.push_str(&a.to_string()),
                (false, true) => out.push_str(&base),
                (false, false) => out.push_str(&format!("{a}*{base}")),
            }
        }
        out
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// Value of a basis term at a point where it is regular.
pub fn term_value(t: &Term, q: &Rat) -> Rat {
    match t {
        Term::Pow(a) => Pow::pow(q, *a as u64),
        Term::Pole(p, b) => ipow(&(q - p), -(*b as i64)),
    }
}

/// Derivative of a basis term at a point where it is regular.
pub fn term_deriv(t: &Term, q: &Rat) -> Rat {
    match t {
        Term::Pow(0) => Rat::zero(),
        Term::Pow(a) => Rat::from_integer((*a).into()) * Pow::pow(q, (*a - 1) as u64),
        Term::Pole(p, b) => -Rat::from_integer((*b).into()) * ipow(&(q - p), -(*b as i64) - 1),
    }
}

fn term_product(s: &Term, t: &Term) -> RatFun {
    match (s, t) {
        (Term::Pow(a), Term::Pow(b)) => RatFun::x_pow(a + b),
        (Term::Pow(a), Term::Pole(q, b)) | (Term::Pole(q, b), Term::Pow(a)) => {
            // x^a = sum_i C(a,i) q^(a-i) (x-q)^i
            let mut out = RatFun::zero();
            for i in 0..=*a {
                let c = binom(*a, i) * Pow::pow(q, (a - i) as u64);
                if i < *b {
                    out.add_term(Term::Pole(q.clone(), b - i), c);
                } else {
                    let e = i - b;
                    for j in 0..=e {
                        let d = binom(e, j) * Pow::pow(&-q.clone(), (e - j) as u64);
                        out.add_term(Term::Pow(j), &c * d);
                    }
                }
            }
            out
        }
        (Term::Pole(q, b), Term::Pole(r, c)) if q == r => RatFun::pole(q.clone(), b + c),
        (Term::Pole(q, b), Term::Pole(r, c)) => {
            let mut out = RatFun::zero();
            let sign = |n: u32| if n.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
            // Taylor coefficients of (x-r)^-c at q and of (x-q)^-b at r.
            for i in 1..=*b {
                let n = b - i;
                let t = sign(n) * binom(c + n - 1, n) * ipow(&(q - r), -((c + n) as i64));
                out.add_term(Term::Pole(q.clone(), i), t);
            }
            for j in 1..=*c {
                let n = c - j;
                let s = sign(n) * binom(b + n - 1, n) * ipow(&(r - q), -((b + n) as i64));
                out.add_term(Term::Pole(r.clone(), j), s);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{rat, rat_frac};
    use proptest::prelude::*;

    fn y() -> RatFun {
        RatFun::pole(rat(-1), 1).sub(&RatFun::pole(rat(-1), 2))
    }

    fn z() -> RatFun {
        let mut f = RatFun::pole(rat(-1), 1);
        f.add_term(Term::Pole(rat(-1), 2), rat(-2));
        f.add_term(Term::Pole(rat(-1), 3), rat(1));
        f
    }

    #[test]
    fn nodal_cubic_relation_holds_exactly() {
        let lhs = y().mul(&z());
        let rhs = y().pow(3).add(&z().pow(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn generators_match_closed_forms() {
        // Y = x/(1+x)^2 and Z = x^2/(1+x)^3, checked pointwise.
        for q in [rat(2), rat_frac(1, 3), rat(-5)] {
            let d = &q + rat(1);
            assert_eq!(y().eval(&q).unwrap(), &q / (&d * &d));
            assert_eq!(z().eval(&q).unwrap(), &q * &q / (&d * &d * &d));
        }
    }

    #[test]
    fn evaluation_rejects_poles() {
        assert!(y().eval(&rat(-1)).is_err());
        assert_eq!(RatFun::x_pow(2).deriv_at(&rat(3)).unwrap(), rat(6));
    }

    fn arb_fun() -> impl Strategy<Value = RatFun> {
        let term = (0u32..3, 0u32..4, -3i64..4).prop_map(|(kind, e, c)| match kind {
            0 => RatFun::term(Term::Pow(e), rat(c)),
            1 => RatFun::term(Term::Pole(rat(-1), e + 1), rat(c)),
            _ => RatFun::term(Term::Pole(rat(2), e + 1), rat(c)),
        });
        proptest::collection::vec(term, 0..4).prop_map(|ts| ts.iter().fold(RatFun::zero(), |acc, t| acc.add(t)))
    }

    proptest! {
        #[test]
        fn product_matches_pointwise_values(f in arb_fun(), g in arb_fun(), n in 3i64..9) {
            let q = rat_frac(n, 7);
            let lhs = f.mul(&g).eval(&q).unwrap();
            prop_assert_eq!(lhs, f.eval(&q).unwrap() * g.eval(&q).unwrap());
        }

        #[test]
        fn product_is_commutative(f in arb_fun(), g in arb_fun()) {
            prop_assert_eq!(f.mul(&g), g.mul(&f));
        }
    }
}
