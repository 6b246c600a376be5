//! The ordered tower `Q(a0)(a1)…(a{m-1})`, each `aj` a positive infinitesimal
//! over the field generated by the variables before it.
//!
//! An element is stored as a reduced rational function in the variables. The
//! sign of a polynomial is the sign of its dominant coefficient, where an
//! exponent vector `e` dominates `e'` if, scanning from the top variable
//! downward, the first coordinate where they differ has `e_j < e'_j`. The sign
//! of a quotient is the product of the signs; because canonical denominators
//! have dominant coefficient 1, the sign is read off the numerator.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::expr::{parse_rational_function, ParseError};
use crate::poly::{write_rational_function, DivisionByZero, Monomial, Poly, Rational, RationalFunction};

pub use crate::poly::Monomial as ExponentVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerLimits {
    pub max_height: usize,
    pub max_degree: u32,
}

impl Default for TowerLimits {
    fn default() -> Self {
        TowerLimits { max_height: 8, max_degree: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("tower height {height} exceeds the limit {max}")]
    HeightLimit { height: usize, max: usize },
    #[error("degree {degree} exceeds the limit {max}")]
    DegreeLimit { degree: u32, max: u32 },
    #[error("zero has no leading term")]
    ZeroLeadingTerm,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl From<DivisionByZero> for FieldError {
    fn from(_: DivisionByZero) -> Self {
        FieldError::DivisionByZero
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ExponentVector {
    /// Dominance in the tower: a lower power of a more deeply nested variable
    /// wins. `e.dominates(e')` iff `e` is strictly more dominant.
    pub fn dominates(&self, other: &ExponentVector) -> bool {
        self < other
    }
}

/// Dominant monomial of a quotient: exponents may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTerm {
    pub exponents: Vec<i64>,
    pub coefficient: Rational,
}

impl LeadingTerm {
    /// Strictly positive weight: the first nonzero exponent, scanning from
    /// the top variable down, is positive.
    pub fn is_infinitesimal(&self) -> bool {
        self.exponents.iter().rev().find(|&&e| e != 0).is_some_and(|&e| e > 0)
    }
}

#[derive(Clone, Debug)]
pub struct FieldElement {
    value: RationalFunction,
    height: usize,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

pub fn variable_name(j: usize) -> String {
    format!("a{j}")
}

fn variable_index(name: &str, max_height: usize) -> Option<usize> {
    let digits = name.strip_prefix('a')?;
    if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    let j: usize = digits.parse().ok()?;
    (j < max_height).then_some(j)
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement { value: RationalFunction::zero(), height: 0 }
    }

    pub fn one() -> Self {
        FieldElement { value: RationalFunction::one(), height: 0 }
    }

    pub fn from_rational(q: Rational) -> Self {
        FieldElement { value: RationalFunction::constant(q), height: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement::from_rational(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        FieldElement::from_rational(Rational::new(n.into(), d.into()))
    }

    /// The infinitesimal `aj`.
    pub fn alpha(j: usize) -> Self {
        FieldElement { value: RationalFunction::var(j), height: j + 1 }
    }

    /// Wraps a rational function, checking it against `limits`. The recorded
    /// height is at least `height` and covers every variable present.
    pub fn from_rational_function(
        value: RationalFunction,
        height: usize,
        limits: &TowerLimits,
    ) -> Result<Self, FieldError> {
        let height = height.max(value.top_var().map_or(0, |v| v + 1));
        check_limits(&value, height, limits)?;
        Ok(FieldElement { value, height })
    }

    pub fn parse_with(src: &str, limits: &TowerLimits) -> Result<Self, FieldError> {
        let max = limits.max_height;
        let value = parse_rational_function(src, &|name| variable_index(name, max)).map_err(|e| match e {
            ParseError::UnknownVariable(name) => match variable_index(&name, usize::MAX) {
                Some(j) => FieldError::HeightLimit { height: j + 1, max },
                None => FieldError::Parse(ParseError::UnknownVariable(name)),
            },
            other => FieldError::Parse(other),
        })?;
        FieldElement::from_rational_function(value, 0, limits)
    }

    pub fn value(&self) -> &RationalFunction {
        &self.value
    }

    pub fn numerator(&self) -> &Poly {
        self.value.num()
    }

    pub fn denominator(&self) -> &Poly {
        self.value.den()
    }

    /// Number of adjoined infinitesimals the element is considered to live over.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn arithmetic(op: ArithOp, a: &Self, b: &Self, limits: &TowerLimits) -> Result<Self, FieldError> {
        let value = match op {
            ArithOp::Add => &a.value + &b.value,
            ArithOp::Sub => &a.value - &b.value,
            ArithOp::Mul => &a.value * &b.value,
            ArithOp::Div => a.value.checked_div(&b.value)?,
        };
        FieldElement::from_rational_function(value, a.height.max(b.height), limits)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        FieldElement::arithmetic(ArithOp::Div, self, rhs, &TowerLimits::default())
    }

    pub fn invert(&self) -> Result<Self, FieldError> {
        Ok(FieldElement { value: self.value.recip()?, height: self.height })
    }

    /// `Greater` for positive, `Less` for negative, `Equal` for zero.
    pub fn sign(&self) -> Ordering {
        match self.value.num().dominant_term() {
            None => Ordering::Equal,
            Some((_, c)) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        // both denominators are positive, so sign(a - b) = sign(pa*qb - pb*qa)
        let (a, b) = (&self.value, &other.value);
        let cross = &(a.num() * b.den()) - &(b.num() * a.den());
        cross.dominant_term().map_or(Ordering::Equal, |(_, c)| {
            if c.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn leading_term(&self) -> Result<LeadingTerm, FieldError> {
        let (nm, nc) = self.value.num().dominant_term().ok_or(FieldError::ZeroLeadingTerm)?;
        let (dm, dc) = self.value.den().dominant_term().expect("nonzero denominator");
        let width = self.height.max(nm.width()).max(dm.width());
        let exponents = (0..width)
            .map(|j| nm.exponent(j) as i64 - dm.exponent(j) as i64)
            .collect();
        Ok(LeadingTerm { exponents, coefficient: nc / dc })
    }

    pub fn is_infinitesimal(&self) -> Result<bool, FieldError> {
        Ok(self.leading_term()?.is_infinitesimal())
    }

    /// Most dominant monomial of the numerator.
    pub fn dominant_exponent(&self) -> Option<&ExponentVector> {
        self.value.num().dominant_term().map(|(m, _)| m)
    }
}

fn check_limits(value: &RationalFunction, height: usize, limits: &TowerLimits) -> Result<(), FieldError> {
    if height > limits.max_height {
        return Err(FieldError::HeightLimit { height, max: limits.max_height });
    }
    let degree = value.num().total_degree().max(value.den().total_degree());
    if degree > limits.max_degree {
        return Err(FieldError::DegreeLimit { degree, max: limits.max_degree });
    }
    Ok(())
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational_function(f, &self.value, &variable_name)
    }
}

impl FromStr for FieldElement {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldElement::parse_with(s, &TowerLimits::default())
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

// Operator forms use the default limits and panic past them, like integer
// overflow; use `FieldElement::arithmetic` for the checked path.
macro_rules! binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                FieldElement::arithmetic($op, self, rhs, &TowerLimits::default())
                    .unwrap_or_else(|e| panic!("field arithmetic failed: {e}"))
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, ArithOp::Add);
binop!(Sub, sub, ArithOp::Sub);
binop!(Mul, mul, ArithOp::Mul);
binop!(Div, div, ArithOp::Div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { value: -&self.value, height: self.height }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement::zero()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::one()
    }
}

/// Builds `c * a0^e0 * a1^e1 * …` directly.
pub fn monomial_element(exponents: &[u32], c: Rational) -> FieldElement {
    let m = Monomial::new(exponents.to_vec());
    let height = m.width();
    FieldElement {
        value: RationalFunction::from_poly(Poly::monomial(m, c)),
        height,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse_and_difference_of_squares() {
        assert!((fe("a0") + fe("-a0")).is_zero());
        assert_eq!(fe("(1+a0)") * fe("(1-a0)"), fe("1 - a0^2"));
    }

    #[test]
    fn reciprocal_of_one_plus_a1_is_canonical() {
        let r = FieldElement::one() / fe("1 + a1");
        assert_eq!(r.denominator(), fe("1 + a1").numerator());
        assert!(r.denominator().dominant_term().unwrap().1.is_positive());
        assert_eq!(&r * &fe("1 + a1"), FieldElement::one());
    }

    #[test]
    fn canonical_denominator_has_unit_dominant_coefficient() {
        let r = fe("(2*a0 + 4)/(-6*a0 + 2)");
        assert!(r.denominator().dominant_term().unwrap().1.is_one());
        assert_eq!(r, fe("(a0 + 2)/(1 - 3*a0)"));
    }

    #[test]
    fn sign_rule_uses_lowest_degree_coefficient() {
        assert_eq!(fe("3*a0 - a0^2").sign(), Ordering::Greater);
        assert_eq!(fe("-a0 + 1000*a0^2").sign(), Ordering::Less);
        assert_eq!(fe("a0").compare(&fe("1/1000")), Ordering::Less);
        // a0^100 is past the default degree limit of 32
        let roomy = TowerLimits { max_degree: 128, ..TowerLimits::default() };
        let a0_100 = FieldElement::parse_with("a0^100", &roomy).unwrap();
        assert_eq!(fe("a1").compare(&a0_100), Ordering::Less);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(FieldElement::one().invert().unwrap(), FieldElement::one());
        let inv = fe("a0").invert().unwrap();
        assert_eq!(inv.compare(&FieldElement::from_int(1000)), Ordering::Greater);
        assert_eq!(fe("(1+a0)/(1-a0)").invert().unwrap(), fe("(1-a0)/(1+a0)"));
        assert_eq!(FieldElement::zero().invert(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = FieldElement::arithmetic(ArithOp::Div, &fe("a0"), &fe("a1 - a1"), &TowerLimits::default());
        assert_eq!(r, Err(FieldError::DivisionByZero));
    }

    #[test]
    fn leading_terms() {
        let lt = fe("3*a0 - a0^2").leading_term().unwrap();
        assert_eq!(lt.exponents, vec![1]);
        assert_eq!(lt.coefficient, Rational::from_integer(3.into()));
        assert!(!fe("1 + a0").is_infinitesimal().unwrap());
        assert!(fe("a1/a0").is_infinitesimal().unwrap());
        assert!(!fe("a0/a1").is_infinitesimal().unwrap());
        assert_eq!(FieldElement::zero().leading_term(), Err(FieldError::ZeroLeadingTerm));
    }

    #[test]
    fn limits_are_enforced() {
        assert_eq!(fe("a7").height(), 8);
        assert_eq!("a8".parse::<FieldElement>(), Err(FieldError::HeightLimit { height: 9, max: 8 }));
        assert!(matches!("a0^33".parse::<FieldElement>(), Err(FieldError::DegreeLimit { .. })));
        let tight = TowerLimits { max_height: 2, max_degree: 4 };
        assert!(FieldElement::parse_with("a2", &tight).is_err());
        let big = fe("a0^20");
        assert!(FieldElement::arithmetic(ArithOp::Mul, &big, &big, &TowerLimits::default()).is_err());
    }

    #[test]
    fn heights_coerce_to_the_maximum() {
        let s = fe("a0") + fe("a2");
        assert_eq!(s.height(), 3);
        assert_eq!(fe("1 + a0 - a0"), FieldElement::one());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3*a0 - a0^2", "(1 - a0)/(1 + a0)", "-1/2", "a1/a0", "(3/2*a0)/(1 + a1^2)"] {
            let e = fe(s);
            assert_eq!(fe(&e.to_string()), e, "{s} -> {e}");
        }
        assert_eq!(fe("a0^2*3 + a0*3").to_string(), "3*a0 + 3*a0^2");
    }
}
