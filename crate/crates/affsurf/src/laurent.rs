//! Exact Laurent polynomials with rational coefficients in one or two
//! variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent monoid of a Laurent ring.
pub trait Exponent: Ord + Copy + fmt::Debug {
    fn origin() -> Self;
    fn plus(self, other: Self) -> Self;
}

impl Exponent for i64 {
    fn origin() -> Self {
        0
    }
    fn plus(self, other: Self) -> Self {
        self + other
    }
}

impl Exponent for (i64, i64) {
    fn origin() -> Self {
        (0, 0)
    }
    fn plus(self, other: Self) -> Self {
        (self.0 + other.0, self.1 + other.1)
    }
}

/// Finite sum of `c * v^e`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<E: Exponent> {
    terms: BTreeMap<E, BigRational>,
}

pub type LaurentPoly1 = Laurent<i64>;
pub type LaurentPoly2 = Laurent<(i64, i64)>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl<E: Exponent> Laurent<E> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, E::origin())
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn monomial(c: BigRational, e: E) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (E, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: E, c: BigRational) {
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: E) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&E, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x * c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// The single term of a monomial, if this is one.
    pub fn as_monomial(&self) -> Option<(E, BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c.clone()))
        } else {
            None
        }
    }

    /// `p(self)` for a polynomial with ascending coefficients, by Horner.
    pub fn compose(&self, ascending: &[BigRational]) -> Self {
        ascending.iter().rev().fold(Self::zero(), |acc, c| &(&acc * self) + &Self::constant(c.clone()))
    }
}

impl<E: Exponent> Add for &Laurent<E> {
    type Output = Laurent<E>;
    fn add(self, rhs: &Laurent<E>) -> Laurent<E> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<E: Exponent> Sub for &Laurent<E> {
    type Output = Laurent<E>;
    fn sub(self, rhs: &Laurent<E>) -> Laurent<E> {
        self + &(-rhs)
    }
}

impl<E: Exponent> Neg for &Laurent<E> {
    type Output = Laurent<E>;
    fn neg(self) -> Laurent<E> {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl<E: Exponent> Mul for &Laurent<E> {
    type Output = Laurent<E>;
    fn mul(self, rhs: &Laurent<E>) -> Laurent<E> {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.plus(*e2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<E: Exponent> $tr for Laurent<E> {
            type Output = Laurent<E>;
            fn $m(self, rhs: Laurent<E>) -> Laurent<E> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl LaurentPoly1 {
    pub fn t() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `p(1/t)`.
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (-e, c.clone())))
    }

    /// Unit multiple `±t^k p` with exponents centred on 0 (when the span is
    /// even) and positive leading coefficient.
    pub fn normalize_unit(&self) -> Self {
        let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) else { return self.clone() };
        let shift = -(lo + hi).div_euclid(2);
        let lead = self.coeff(hi);
        let sign = if lead.is_negative() { -BigRational::one() } else { BigRational::one() };
        Self::from_terms(self.terms.iter().map(|(e, c)| (e + shift, c * &sign)))
    }

    /// Symmetric under `t -> 1/t`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_variable()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let p = if *e >= 0 { pow_rat(x, *e as u32) } else { pow_rat(x, (-e) as u32).recip() };
            acc + c * p
        })
    }
}

fn pow_rat(x: &BigRational, n: u32) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, _| acc * x)
}

impl LaurentPoly2 {
    /// The variable `v_i`, `i` in {1, 2}.
    pub fn var(i: usize) -> Self {
        let e = if i == 1 { (1, 0) } else { (0, 1) };
        Self::monomial(BigRational::one(), e)
    }

    /// `c * v1^a * v2^b`.
    pub fn mono(c: i64, a: i64, b: i64) -> Self {
        Self::monomial(rat(c), (a, b))
    }

    /// Partial derivative by `v_i`.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(&(a, b), c)| {
            let k = if i == 1 { a } else { b };
            if k == 0 {
                return None;
            }
            let e = if i == 1 { (a - 1, b) } else { (a, b - 1) };
            Some((e, c * rat(k)))
        }))
    }
}

fn fmt_coeff(f: &mut fmt::Formatter<'_>, c: &BigRational, first: bool, has_var: bool) -> fmt::Result {
    let neg = c.is_negative();
    if !first {
        f.write_str(if neg { " - " } else { " + " })?;
    } else if neg {
        f.write_str("-")?;
    }
    let a = c.abs();
    if !(has_var && a.is_one()) {
        write!(f, "{a}")?;
        if has_var {
            f.write_str("*")?;
        }
    }
    Ok(())
}

fn fmt_power(name: &str, k: i64) -> String {
    match k {
        1 => name.to_string(),
        k if k < 0 => format!("{name}^({k})"),
        k => format!("{name}^{k}"),
    }
}

impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            fmt_coeff(f, c, i == 0, *e != 0)?;
            if *e != 0 {
                f.write_str(&fmt_power("t", *e))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = [(*a, "v1"), (*b, "v2")]
                .iter()
                .filter(|(k, _)| *k != 0)
                .map(|(k, n)| fmt_power(n, *k))
                .collect();
            fmt_coeff(f, c, i == 0, !vars.is_empty())?;
            f.write_str(&vars.join("*"))?;
        }
        Ok(())
    }
}

impl<E: Exponent> fmt::Debug for Laurent<E>
where
    Laurent<E>: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let t = LaurentPoly1::t();
        let p = &t + &LaurentPoly1::one();
        let q = &t - &LaurentPoly1::one();
        assert_eq!((&p * &q).to_string(), "t^2 - 1");
        assert!((&p - &p).is_zero());
        assert_eq!(p.pow(3).coeff(1), rat(3));
        let inv = t.invert_variable();
        assert_eq!(&t * &inv, LaurentPoly1::one());
    }

    #[test]
    fn normalization() {
        // -t^3 + 3 t^2 - t  ~  t - 3 + t^-1
        let p = LaurentPoly1::from_terms([(3, rat(-1)), (2, rat(3)), (1, rat(-1))]);
        let n = p.normalize_unit();
        assert_eq!(n.to_string(), "t - 3 + t^(-1)");
        assert!(n.is_symmetric());
        assert_eq!(n.eval(&rat(1)), rat(-1));
    }

    #[test]
    fn two_variables() {
        let v1 = LaurentPoly2::var(1);
        let v2 = LaurentPoly2::var(2);
        let p = &(&v1 * &v2) + &LaurentPoly2::mono(2, -1, 0);
        assert_eq!(p.derivative(1), &v2 + &LaurentPoly2::mono(-2, -2, 0));
        assert_eq!(p.derivative(2), v1.clone());
        let sq = v1.compose(&[rat(1), rat(0), rat(1)]);
        assert_eq!(sq, &v1.pow(2) + &LaurentPoly2::one());
        assert_eq!(LaurentPoly2::mono(-3, 1, -2).to_string(), "-3*v1*v2^(-2)");
    }
}
