//! Numeric substitution oracle for the tower order.
//!
//! Picks rationals `ε_0 ≫ ε_1 ≫ ...`, one variable at a time, small enough
//! that every polynomial involved takes at the point the sign it has in the
//! tower, then compares the exact values. It shares no code with
//! `FieldElement::compare`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::field::FieldElement;
use crate::poly::{Monomial, Poly, Rational};

/// Largest `ε ≤ 1/2` with `ε ≤ m / (2 S)` for every group, where `m` and `S`
/// are the smallest and the total absolute coefficient of a univariate
/// polynomial. Below it the lowest-degree term decides the sign.
fn safe_epsilon(groups: impl Iterator<Item = Vec<Rational>>) -> Rational {
    let mut eps = Rational::new(1.into(), 2.into());
    for coeffs in groups {
        let abs: Vec<Rational> = coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.abs()).collect();
        let Some(min) = abs.iter().min().cloned() else { continue };
        let total: Rational = abs.iter().sum();
        let bound = min / (total * Rational::from_integer(2.into()));
        if bound < eps {
            eps = bound;
        }
    }
    eps
}

/// Coefficients of `p` in variable `j`, grouped by the exponents of the
/// higher variables.
fn groups_in(p: &Poly, j: usize) -> Vec<Vec<Rational>> {
    let mut by_key: BTreeMap<Vec<u32>, BTreeMap<u32, Rational>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key = m.exponents().iter().skip(j + 1).copied().collect();
        let slot = by_key.entry(key).or_default().entry(m.exponent(j)).or_insert_with(Rational::zero);
        *slot += c;
    }
    by_key.into_values().map(|g| g.into_values().collect()).collect()
}

fn substitute(p: &Poly, j: usize, value: &Rational) -> Poly {
    Poly::from_terms(p.terms().map(|(m, c)| {
        let mut e = m.exponents().to_vec();
        let k = e.get(j).copied().unwrap_or(0);
        if j < e.len() {
            e[j] = 0;
        }
        (Monomial::new(e), c * num_traits::pow(value.clone(), k as usize))
    }))
}

/// A rational point at which every polynomial in `polys` has its tower sign.
pub fn infinitesimal_point(polys: &[Poly]) -> Vec<Rational> {
    let height = polys.iter().filter_map(|p| p.top_var()).max().map_or(0, |v| v + 1);
    let mut current = polys.to_vec();
    let mut point = Vec::with_capacity(height);
    for j in 0..height {
        let eps = safe_epsilon(current.iter().flat_map(|p| groups_in(p, j)));
        current = current.iter().map(|p| substitute(p, j, &eps)).collect();
        point.push(eps);
    }
    point
}

/// Order of `a` and `b` read off at an infinitesimal point.
pub fn substitution_compare(a: &FieldElement, b: &FieldElement) -> Ordering {
    let cross = &(a.numerator() * b.denominator()) - &(b.numerator() * a.denominator());
    let polys = [a.numerator().clone(), a.denominator().clone(), b.numerator().clone(), b.denominator().clone(), cross];
    let point = infinitesimal_point(&polys);
    let pad = |v: &[Rational]| {
        let mut v = v.to_vec();
        v.resize(v.len().max(1), Rational::one());
        v
    };
    let pt = pad(&point);
    let va = a.value().eval(&pt).expect("denominator keeps its sign");
    let vb = b.value().eval(&pt).expect("denominator keeps its sign");
    va.cmp(&vb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn agrees_on_hand_examples() {
        assert_eq!(substitution_compare(&fe("1000*a0"), &fe("1")), Ordering::Less);
        assert_eq!(substitution_compare(&fe("a1"), &fe("a0^5")), Ordering::Less);
        assert_eq!(substitution_compare(&fe("a0 - a0^2"), &fe("0")), Ordering::Greater);
        assert_eq!(substitution_compare(&fe("1/(a1 - a0)"), &fe("0")), Ordering::Less);
        assert_eq!(substitution_compare(&fe("3/7"), &fe("3/7")), Ordering::Equal);
    }
}
