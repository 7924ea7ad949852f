//! Exact sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a canonical map from [`Monomial`] to nonzero rational
//! coefficient, so structural equality is polynomial equality. The
//! variables are the pencil parameters `s`, `t`, `l` (for lambda) and the
//! independent coordinates of a generic so(2N) element.

mod monomial;
mod sqrt;
mod var;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use monomial::Monomial;
pub use sqrt::NotASquare;
pub use var::{Coord, Quadrant, VarId};

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Coefficient domain.
pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Per-variable degree caps on the pencil variables, used to truncate
/// products during coefficient extraction. Degrees never decrease under
/// multiplication, so a term over a cap can be dropped as soon as it
/// appears.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DegreeBounds {
    pub s: Option<u32>,
    pub t: Option<u32>,
    pub lambda: Option<u32>,
}

impl DegreeBounds {
    pub fn none() -> Self {
        Self::default()
    }

    /// Caps that keep exactly the terms that can still reach
    /// `s^s t^t l^lambda`.
    pub fn exact(s: u32, t: u32, lambda: u32) -> Self {
        DegreeBounds {
            s: Some(s),
            t: Some(t),
            lambda: Some(lambda),
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.s.is_none() && self.t.is_none() && self.lambda.is_none()
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        let ok = |cap: Option<u32>, v| cap.is_none_or(|c| m.exponent(v) <= c);
        ok(self.s, VarId::S) && ok(self.t, VarId::T) && ok(self.lambda, VarId::Lambda)
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Q::one(), Monomial::var(v))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: VarId) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Variables that occur, ascending.
    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Q, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// Product with terms exceeding `bounds` discarded.
    pub fn mul_truncated(&self, other: &Poly, bounds: &DegreeBounds) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !bounds.is_unbounded() && !bounds.admits(&m) {
                    continue;
                }
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// `self += factor * other`, in place.
    pub fn add_scaled(&mut self, other: &Poly, factor: &Q) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * factor);
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// The polynomial `q_e` (free of `v`) with `self = sum_e q_e v^e`.
    pub fn coeff_of(&self, v: VarId, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (rest, k) = m.without(v);
            if k == e {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// All nonzero `q_e`, keyed by `e`.
    pub fn coefficients_in(&self, v: VarId) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, k) = m.without(v);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Minimal exponent of `v`; `None` stands for `+inf` (zero polynomial).
    pub fn valuation(&self, v: VarId) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(v)).min()
    }

    /// Drops every term containing a variable rejected by `keep`; that is,
    /// substitutes zero for those variables.
    pub fn restrict(&self, keep: impl Fn(VarId) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.vars().all(&keep))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact evaluation over the rationals.
    pub fn eval(&self, assign: impl Fn(VarId) -> Option<Q>) -> Result<Q> {
        let mut cache: HashMap<VarId, Q> = HashMap::new();
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.pairs() {
                let val = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = assign(v).ok_or(Error::MissingAssignment(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                term *= num_traits::pow(val, e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Evaluation in `F_p`. Coefficients with denominators divisible by `p`
    /// are reported as a configuration error.
    pub fn eval_mod(&self, field: &PrimeField, assign: impl Fn(VarId) -> Option<u64>) -> Result<u64> {
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let mut term = field
                .from_rational(c)
                .ok_or_else(|| Error::Config(format!("coefficient {c} not invertible mod p")))?;
            for &(v, e) in m.pairs() {
                let x = assign(v).ok_or(Error::MissingAssignment(v))?;
                term = field.mul(term, field.pow(x, e as u64));
            }
            total = field.add(total, term);
        }
        Ok(total)
    }

    /// Substitutes polynomials for variables; unmapped variables are kept.
    pub fn substitute(&self, map: impl Fn(VarId) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for &(v, e) in m.pairs() {
                let factor = map(v).unwrap_or_else(|| Poly::var(v));
                term = &term * &factor.pow(e);
            }
            out = &out + &term;
        }
        out
    }

    /// Exact quotient `self / d` when `d` divides `self`, computed by
    /// leading-term division in graded-lex order.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut quotient = Poly::zero();
        while let Some((rm, rc)) = r.leading_term() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            r.add_scaled(&d.mul_monomial(&c, &m), &-Q::one());
            quotient.add_term(m, c);
        }
        Some(quotient)
    }

    /// Sign of the leading coefficient: `1`, `-1`, or `0` for zero.
    pub fn leading_sign(&self) -> i32 {
        match self.leading_term() {
            None => 0,
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
        }
    }

    /// `self` or `-self`, whichever has a positive leading coefficient.
    pub fn normalized(&self) -> Poly {
        if self.leading_sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Rational `c` with `self = c * other`, if one exists.
    pub fn ratio_to(&self, other: &Poly) -> Option<Q> {
        if self.is_zero() && other.is_zero() {
            return Some(Q::one());
        }
        let (m, c) = other.leading_term()?;
        let r = self.coefficient(m) / c;
        if r.is_zero() {
            return None;
        }
        (other.scale(&r) == *self).then_some(r)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Poly {
    /// Serialised in the canonical text format.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
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
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_truncated(rhs, &DegreeBounds::none())
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(VarId::a(1, 1))
    }
    fn y() -> Poly {
        Poly::var(VarId::a(1, 2))
    }

    #[test]
    fn ring_identities() {
        assert_eq!(&(&x() + &y()) * &(&x() - &y()), &(&x() * &x()) - &(&y() * &y()));
        assert!((&x() - &x()).is_zero());
        assert!(x().scale(&q(0)).is_zero());
    }

    #[test]
    fn coeff_of_reads_off() {
        let s = Poly::var(VarId::S);
        let t = Poly::var(VarId::T);
        let p = &(&(&s * &s) * &t) + &(&s * &t);
        assert_eq!(p.coeff_of(VarId::S, 2), t);
        let l3 = Poly::var(VarId::Lambda).pow(3);
        assert_eq!(l3.coeff_of(VarId::T, 0), l3);
    }

    #[test]
    fn valuation_cases() {
        let t = Poly::var(VarId::T);
        let p = &(&t.pow(2) * &x()) + &(&t.pow(3) * &y());
        assert_eq!(p.valuation(VarId::T), Some(2));
        assert_eq!(Poly::zero().valuation(VarId::T), None);
    }

    #[test]
    fn eval_rational() {
        let p = &x().pow(2) + &Poly::one();
        assert_eq!(p.eval(|_| Some(q(2))).unwrap(), q(5));
        assert_eq!(Poly::zero().eval(|_| None).unwrap(), q(0));
        assert!(matches!(p.eval(|_| None), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn display_format() {
        let p = &(&x().pow(2) - &(&x() * &y()).scale(&q(2))) + &Poly::int(3);
        assert_eq!(p.to_string(), "A[1,1]^2 - 2*A[1,1]*A[1,2] + 3");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!((-x()).to_string(), "-A[1,1]");
    }

    #[test]
    fn exact_division() {
        let a = &x() + &y();
        let b = &x() - &Poly::int(2);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b), Some(a));
        assert_eq!((&p + &Poly::one()).div_exact(&b), None);
    }

    #[test]
    fn truncated_product_drops_high_t() {
        let t = Poly::var(VarId::T);
        let p = &t + &Poly::one();
        let b = DegreeBounds {
            t: Some(1),
            ..Default::default()
        };
        assert_eq!(p.mul_truncated(&p, &b), &t.scale(&q(2)) + &Poly::one());
    }
}
