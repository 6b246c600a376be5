//! Sequences of rationals that agree with a rational function of the index
//! from some point on. Modulo the cofinite filter such sequences form an
//! ordered ring in which every comparison is decided by the tails, so the
//! choice of ultrafilter never matters here.
//!
//! Each coordinate carries the metric `min(|a - b|, 1)` on `Q`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::expr::{parse_rational, parse_rational_function, ParseError};
use crate::poly::{write_rational_function, Poly, Rational, RationalFunction};

/// Longest prefix this module will materialize.
pub const MAX_PREFIX: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RpError {
    #[error("tail must be a rational function of n alone")]
    NotUnivariate,
    #[error("tail denominator vanishes at index {0}, beyond the prefix")]
    PoleBeyondPrefix(usize),
    #[error("closed form needs a prefix longer than {MAX_PREFIX}")]
    ThresholdTooLarge,
    #[error("no instances given")]
    NoInstances,
    #[error("cut indices must be strictly increasing")]
    CutsNotIncreasing,
    #[error("{instances} instances need {} or {instances} cuts, got {cuts}", .instances.saturating_sub(1))]
    CutCount { instances: usize, cuts: usize },
    #[error("radius of instance {0} is not positive")]
    NonPositiveRadius(usize),
    #[error("balls are not nested at instance {0}: d(g_{{n+1}}, g_n) + eps_{{n+1}} > eps_n")]
    NotNested(usize),
    #[error("certificate failed at instance {0}")]
    CertificateFailed(usize),
    #[error("forbidden ball {0} swallows the current ball")]
    Infeasible(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A sequence `x_0, x_1, ...` given by an explicit prefix and a rational
/// function of `n` for all later indices. Structural equality compares the
/// representation; [`compare_ev`] decides cofinite equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventualSeq {
    prefix: Vec<Rational>,
    tail: RationalFunction,
}

/// Elements of the ordered reduced power of `Q` (radii, distances).
pub type StarValue = EventualSeq;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Smallest `t` such that no real root of `p` is `>= t` (Cauchy bound).
fn root_bound(p: &Poly) -> Result<usize, RpError> {
    let d = p.degree_in(0);
    if d == 0 {
        return Ok(0);
    }
    let lead = p.lex_leading_term().expect("nonzero").1.abs();
    let m = p
        .terms()
        .filter(|(mono, _)| mono.exponent(0) < d)
        .map(|(_, c)| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    let b: BigInt = (m + Rational::one()).floor().to_integer() + 1;
    b.to_usize().filter(|&b| b <= MAX_PREFIX).ok_or(RpError::ThresholdTooLarge)
}

/// Sign of `f(n)` for all sufficiently large `n`.
pub fn eventual_sign(f: &RationalFunction) -> Ordering {
    let lead = |p: &Poly| p.lex_leading_term().map(|(_, c)| c.is_positive());
    match (lead(f.num()), lead(f.den())) {
        (None, _) => Ordering::Equal,
        (Some(a), Some(b)) if a == b => Ordering::Greater,
        _ => Ordering::Less,
    }
}

/// Index from which `f(i)` has its eventual sign at every integer `i`.
fn sign_threshold(f: &RationalFunction) -> Result<usize, RpError> {
    Ok(root_bound(f.num())?.max(root_bound(f.den())?))
}

impl EventualSeq {
    pub fn new(prefix: Vec<Rational>, tail: RationalFunction) -> Result<Self, RpError> {
        if tail.top_var().is_some_and(|v| v > 0) {
            return Err(RpError::NotUnivariate);
        }
        let bound = root_bound(tail.den())?;
        let start = prefix.len();
        for i in start..bound {
            if tail.den().eval(&[q(i as i64)]).is_zero() {
                return Err(RpError::PoleBeyondPrefix(i));
            }
        }
        Ok(EventualSeq { prefix, tail })
    }

    /// Sequence following `tail` everywhere it is defined; indices where the
    /// denominator vanishes hold 0.
    pub fn from_tail(tail: RationalFunction) -> Result<Self, RpError> {
        if tail.top_var().is_some_and(|v| v > 0) {
            return Err(RpError::NotUnivariate);
        }
        let bound = root_bound(tail.den())?;
        let last_pole = (0..bound).rev().find(|&i| tail.den().eval(&[q(i as i64)]).is_zero());
        let len = last_pole.map_or(0, |i| i + 1);
        let prefix = (0..len).map(|i| tail.eval(&[q(i as i64)]).unwrap_or_else(|_| Rational::zero())).collect();
        Ok(EventualSeq { prefix, tail })
    }

    pub fn constant(c: Rational) -> Self {
        EventualSeq { prefix: Vec::new(), tail: RationalFunction::constant(c) }
    }

    pub fn zero() -> Self {
        EventualSeq::constant(Rational::zero())
    }

    pub fn one() -> Self {
        EventualSeq::constant(Rational::one())
    }

    /// The identity sequence `i ↦ i`.
    pub fn index() -> Self {
        EventualSeq { prefix: Vec::new(), tail: RationalFunction::var(0) }
    }

    /// Parses a tail expression in the variable `n`.
    pub fn parse_tail(src: &str) -> Result<Self, RpError> {
        let tail = parse_rational_function(src, &|s| (s == "n").then_some(0))?;
        EventualSeq::from_tail(tail)
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail(&self) -> &RationalFunction {
        &self.tail
    }

    pub fn at(&self, i: usize) -> Rational {
        match self.prefix.get(i) {
            Some(v) => v.clone(),
            None => self.tail.eval(&[q(i as i64)]).expect("no pole beyond the prefix"),
        }
    }

    /// Replaces the first entries with `values`.
    pub fn with_prefix(&self, values: Vec<Rational>) -> Result<Self, RpError> {
        let mut prefix = values;
        for i in prefix.len()..self.prefix.len() {
            prefix.push(self.prefix[i].clone());
        }
        EventualSeq::new(prefix, self.tail.clone())
    }

    fn zip(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational, tail: RationalFunction) -> Self {
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (0..len).map(|i| op(&self.at(i), &other.at(i))).collect();
        EventualSeq { prefix, tail }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b, &self.tail + &other.tail)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b, &self.tail - &other.tail)
    }

    pub fn neg(&self) -> Self {
        EventualSeq {
            prefix: self.prefix.iter().map(|v| -v).collect(),
            tail: -&self.tail,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let k = RationalFunction::constant(c.clone());
        EventualSeq {
            prefix: self.prefix.iter().map(|v| v * c).collect(),
            tail: &self.tail * &k,
        }
    }

    /// Pointwise map that agrees with `tail` from the index `from` onwards.
    fn materialize(&self, from: usize, op: impl Fn(Rational) -> Rational, tail: RationalFunction) -> Self {
        let len = from.max(self.prefix.len());
        let prefix = (0..len).map(|i| op(self.at(i))).collect();
        EventualSeq { prefix, tail }
    }

    pub fn abs(&self) -> Result<Self, RpError> {
        let from = sign_threshold(&self.tail)?;
        let tail = if eventual_sign(&self.tail) == Ordering::Less { -&self.tail } else { self.tail.clone() };
        Ok(self.materialize(from, |v| v.abs(), tail))
    }

    /// Pointwise `min(x_i, 1)`.
    pub fn cap_one(&self) -> Result<Self, RpError> {
        let over = &self.tail - &RationalFunction::one();
        let from = sign_threshold(&over)?;
        let tail = if eventual_sign(&over) == Ordering::Less { self.tail.clone() } else { RationalFunction::one() };
        let one = Rational::one();
        Ok(self.materialize(from, |v| if v > one { one.clone() } else { v }, tail))
    }

    pub fn sign(&self) -> Ordering {
        eventual_sign(&self.tail)
    }
}

impl fmt::Display for EventualSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        if !self.prefix.is_empty() {
            write!(f, "; ")?;
        }
        write_rational_function(f, &self.tail, &|_| "n".to_string())?;
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct RawSeq {
    #[serde(default)]
    prefix: Vec<RawRational>,
    tail: String,
}

impl Serialize for EventualSeq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct T<'a>(&'a RationalFunction);
        impl fmt::Display for T<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_rational_function(f, self.0, &|_| "n".to_string())
            }
        }
        RawSeq {
            prefix: self.prefix.iter().map(|v| RawRational::Text(v.to_string())).collect(),
            tail: T(&self.tail).to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EventualSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawSeq::deserialize(d)?;
        let prefix = raw
            .prefix
            .into_iter()
            .map(|r| match r {
                RawRational::Int(n) => Ok(q(n)),
                RawRational::Text(s) => parse_rational(&s),
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let tail = parse_rational_function(&raw.tail, &|s| (s == "n").then_some(0)).map_err(D::Error::custom)?;
        EventualSeq::new(prefix, tail).map_err(D::Error::custom)
    }
}

/// Order of the reduced power: `Equal` iff the sequences agree cofinitely,
/// otherwise the eventual sign of `x - y`.
pub fn compare_ev(x: &StarValue, y: &StarValue) -> Ordering {
    eventual_sign(&(&x.tail - &y.tail))
}

/// Coordinatewise `min(|x_i - y_i|, 1)`.
pub fn star_metric(x: &EventualSeq, y: &EventualSeq) -> Result<StarValue, RpError> {
    x.sub(y).abs()?.cap_one()
}

/// `true` iff `x` lies in the open ball of radius `r` about `center`.
pub fn in_open_ball(x: &EventualSeq, center: &EventualSeq, r: &StarValue) -> Result<bool, RpError> {
    Ok(compare_ev(&star_metric(x, center)?, r) == Ordering::Less)
}

/// Outcome of checking `d(h, g_n) < eps_n` for one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallCertificate {
    pub instance: usize,
    pub distance: StarValue,
    pub radius: StarValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interleaved {
    pub h: EventualSeq,
    pub certificates: Vec<BallCertificate>,
}

/// Glues the centers of a nested chain of balls along the cut indices.
///
/// With `N` instances and `N - 1` cuts, instance `k` (1-based) supplies the
/// indices in `[t_{k-1}, t_k)` with `t_0 = 0`, and the last instance supplies
/// everything from the final cut on. With `N` cuts, instance `k` supplies
/// `[t_k, t_{k+1})` and the indices below `t_1` come from the first instance.
/// Instance numbers in errors and certificates are 1-based.
pub fn interleave(instances: &[(EventualSeq, StarValue)], cuts: &[usize]) -> Result<Interleaved, RpError> {
    let n = instances.len();
    if n == 0 {
        return Err(RpError::NoInstances);
    }
    if cuts.len() + 1 != n && cuts.len() != n {
        return Err(RpError::CutCount { instances: n, cuts: cuts.len() });
    }
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RpError::CutsNotIncreasing);
    }
    for (k, (_, eps)) in instances.iter().enumerate() {
        if eps.sign() != Ordering::Greater {
            return Err(RpError::NonPositiveRadius(k + 1));
        }
    }
    for k in 0..n - 1 {
        let (g, eps) = &instances[k];
        let (g_next, eps_next) = &instances[k + 1];
        let lhs = star_metric(g_next, g)?.add(eps_next);
        if compare_ev(&lhs, eps) == Ordering::Greater {
            return Err(RpError::NotNested(k + 1));
        }
    }

    let offset = if cuts.len() == n { 1 } else { 0 };
    let owner = |i: usize| cuts.iter().take_while(|&&t| t <= i).count().saturating_sub(offset);
    let last = &instances[n - 1].0;
    let len = cuts.last().copied().unwrap_or(0).max(last.prefix.len());
    let prefix = (0..len).map(|i| instances[owner(i)].0.at(i)).collect();
    let h = EventualSeq { prefix, tail: last.tail.clone() };

    let mut certificates = Vec::with_capacity(n);
    for (k, (g, eps)) in instances.iter().enumerate() {
        let distance = star_metric(&h, g)?;
        if compare_ev(&distance, eps) != Ordering::Less {
            return Err(RpError::CertificateFailed(k + 1));
        }
        certificates.push(BallCertificate { instance: k + 1, distance, radius: eps.clone() });
    }
    Ok(Interleaved { h, certificates })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub center: EventualSeq,
    pub radius: StarValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaireWitness {
    pub h: EventualSeq,
    /// Centers and radii of the nested chain, starting with the given ball.
    pub chain: Vec<Ball>,
    pub distance_to_center: StarValue,
    /// `d(h, c_j)` for each forbidden ball, each strictly above `r_j`.
    pub forbidden_distances: Vec<StarValue>,
}

/// Finds a point of the open ball `open` outside every closed ball in
/// `forbidden` by shrinking a nested chain of balls and interleaving their
/// centers.
pub fn baire_witness(open: &Ball, forbidden: &[Ball]) -> Result<BaireWitness, RpError> {
    if open.radius.sign() != Ordering::Greater {
        return Err(RpError::NonPositiveRadius(0));
    }
    let one = EventualSeq::one();
    let mut rho = if compare_ev(&open.radius, &one) == Ordering::Greater { one } else { open.radius.clone() };
    let mut g = open.center.clone();
    let mut chain = vec![Ball { center: g.clone(), radius: rho.clone() }];

    for (j, f) in forbidden.iter().enumerate() {
        let d = star_metric(&g, &f.center)?;
        if compare_ev(&d, &f.radius.add(&rho)) != Ordering::Less {
            // the current ball already misses F_j
            rho = rho.scale(&Rational::new(1.into(), 2.into()));
        } else {
            if compare_ev(&f.radius, &rho) != Ordering::Less {
                return Err(RpError::Infeasible(j + 1));
            }
            let next = rho.sub(&f.radius).scale(&Rational::new(1.into(), 3.into()));
            let step = rho.sub(&next);
            let away = if g.sub(&f.center).sign() == Ordering::Less { step.neg() } else { step };
            g = g.add(&away);
            rho = next;
        }
        chain.push(Ball { center: g.clone(), radius: rho.clone() });
    }

    let instances: Vec<_> = chain.iter().map(|b| (b.center.clone(), b.radius.clone())).collect();
    let cuts: Vec<usize> = (1..instances.len()).collect();
    let h = interleave(&instances, &cuts)?.h;

    let distance_to_center = star_metric(&h, &open.center)?;
    if compare_ev(&distance_to_center, &open.radius) != Ordering::Less {
        return Err(RpError::CertificateFailed(0));
    }
    let mut forbidden_distances = Vec::with_capacity(forbidden.len());
    for (j, f) in forbidden.iter().enumerate() {
        let d = star_metric(&h, &f.center)?;
        if compare_ev(&d, &f.radius) != Ordering::Greater {
            return Err(RpError::CertificateFailed(j + 1));
        }
        forbidden_distances.push(d);
    }
    Ok(BaireWitness { h, chain, distance_to_center, forbidden_distances })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> EventualSeq {
        EventualSeq::parse_tail(s).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn c(n: i64, d: i64) -> EventualSeq {
        EventualSeq::constant(r(n, d))
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(compare_ev(&seq("1/n"), &seq("2/n")), Ordering::Less);
        assert_eq!(compare_ev(&seq("n^2 - 5"), &seq("n^2 - 5")), Ordering::Equal);
        assert_eq!(compare_ev(&seq("1/n"), &c(1, 1000)), Ordering::Less);
        assert_eq!(compare_ev(&seq("1/n"), &EventualSeq::zero()), Ordering::Greater);
    }

    #[test]
    fn prefix_does_not_affect_order() {
        let x = seq("1/n").with_prefix(vec![r(100, 1); 5]).unwrap();
        assert_eq!(compare_ev(&x, &seq("1/n")), Ordering::Equal);
    }

    #[test]
    fn poles_must_lie_in_the_prefix() {
        let tail = parse_rational_function("1/(n - 3)", &|s| (s == "n").then_some(0)).unwrap();
        assert_eq!(EventualSeq::new(vec![], tail.clone()), Err(RpError::PoleBeyondPrefix(3)));
        let x = EventualSeq::from_tail(tail).unwrap();
        assert_eq!(x.prefix().len(), 4);
        assert_eq!(x.at(5), r(1, 2));
        // a non-integer root is not a pole
        assert!(EventualSeq::parse_tail("1/(2*n - 21)").unwrap().prefix().is_empty());
    }

    #[test]
    fn metric_examples() {
        let x = seq("1/n");
        assert!(star_metric(&x, &x).unwrap().sign() == Ordering::Equal);
        let d = star_metric(&x, &seq("2/n")).unwrap();
        assert_eq!(compare_ev(&d, &x), Ordering::Equal);
        assert_eq!(d.at(5), r(1, 5));
        let cap = star_metric(&EventualSeq::index(), &EventualSeq::zero()).unwrap();
        assert_eq!(compare_ev(&cap, &EventualSeq::one()), Ordering::Equal);
        assert_eq!(cap.at(0), r(0, 1));
    }

    #[test]
    fn metric_materializes_sign_changes() {
        // 7 - n changes sign at 7; abs must be exact on every index
        let d = star_metric(&seq("7 - n"), &EventualSeq::zero()).unwrap();
        for i in 0..20 {
            let exact = (r(7, 1) - r(i, 1)).abs().min(r(1, 1));
            assert_eq!(d.at(i as usize), exact, "index {i}");
        }
    }

    #[test]
    fn json_round_trip() {
        let x: EventualSeq = serde_json::from_str(r#"{"prefix":[1,"1/2"],"tail":"1/n"}"#).unwrap();
        assert_eq!(x.at(1), r(1, 2));
        assert_eq!(x.at(4), r(1, 4));
        let back: EventualSeq = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<EventualSeq>(r#"{"tail":"1/(n-3)"}"#).is_err());
        assert!(serde_json::from_str::<EventualSeq>(r#"{"tail":"m"}"#).is_err());
    }

    #[test]
    fn single_instance_returns_its_center() {
        let g = seq("1/n");
        let out = interleave(&[(g.clone(), c(1, 2))], &[]).unwrap();
        assert_eq!(out.h, g);
    }

    #[test]
    fn cut_splits_two_instances() {
        let g1 = EventualSeq::zero();
        let g2 = c(1, 8);
        let out = interleave(&[(g1, c(1, 2)), (g2, c(1, 4))], &[5]).unwrap();
        for i in 0..5 {
            assert_eq!(out.h.at(i), r(0, 1));
        }
        for i in 5..12 {
            assert_eq!(out.h.at(i), r(1, 8));
        }
    }

    fn geometric(n: i64) -> EventualSeq {
        // g_{n,i} = sum_{m=1}^{min(n,i)} 2^-m
        let partial = |k: i64| Rational::one() - r(1, 1 << k);
        let prefix = (0..n).map(partial).collect();
        EventualSeq::new(prefix, RationalFunction::constant(partial(n))).unwrap()
    }

    #[test]
    fn geometric_partial_sums_interleave() {
        let instances: Vec<_> = (1..=20).map(|n| (geometric(n), c(4, 1 << n))).collect();
        let cuts: Vec<usize> = (1..20).map(|k| 3 * k).collect();
        let out = interleave(&instances, &cuts).unwrap();
        assert_eq!(out.certificates.len(), 20);
        for (n, (g, eps)) in instances.iter().enumerate() {
            assert!(in_open_ball(&out.h, g, eps).unwrap(), "instance {}", n + 1);
        }
    }

    #[test]
    fn nesting_violation_names_the_instance() {
        let inst = vec![(EventualSeq::zero(), c(1, 2)), (EventualSeq::zero(), c(1, 4)), (c(1, 2), c(1, 8))];
        assert_eq!(interleave(&inst, &[1, 2]), Err(RpError::NotNested(2)));
        assert_eq!(interleave(&inst, &[2, 1]), Err(RpError::CutsNotIncreasing));
        assert!(matches!(interleave(&inst, &[]), Err(RpError::CutCount { .. })));
    }

    #[test]
    fn baire_without_forbidden_balls_returns_center() {
        let open = Ball { center: seq("1/n"), radius: c(1, 1) };
        assert_eq!(baire_witness(&open, &[]).unwrap().h, open.center);
    }

    #[test]
    fn baire_avoids_a_centered_ball() {
        let open = Ball { center: EventualSeq::zero(), radius: c(1, 1) };
        let f = Ball { center: EventualSeq::zero(), radius: c(1, 4) };
        let w = baire_witness(&open, &[f]).unwrap();
        let d = star_metric(&w.h, &EventualSeq::zero()).unwrap();
        assert_eq!(compare_ev(&d, &c(1, 4)), Ordering::Greater);
        assert_eq!(compare_ev(&d, &c(1, 1)), Ordering::Less);
    }

    #[test]
    fn baire_avoids_a_halving_chain() {
        let open = Ball { center: EventualSeq::zero(), radius: c(1, 1) };
        let forbidden: Vec<_> = (1..=5)
            .map(|j| Ball { center: c(1, 1 << (j + 2)), radius: c(1, 1 << (j + 1)) })
            .collect();
        let w = baire_witness(&open, &forbidden).unwrap();
        for (f, d) in forbidden.iter().zip(&w.forbidden_distances) {
            assert_eq!(compare_ev(d, &f.radius), Ordering::Greater);
        }
    }

    #[test]
    fn baire_reports_infeasible_step() {
        let open = Ball { center: EventualSeq::zero(), radius: c(1, 2) };
        let f = Ball { center: EventualSeq::zero(), radius: c(1, 1) };
        assert_eq!(baire_witness(&open, &[f]).unwrap_err(), RpError::Infeasible(1));
    }

    #[test]
    fn infinitesimal_radii_work() {
        let open = Ball { center: EventualSeq::zero(), radius: seq("1/n") };
        let f = Ball { center: EventualSeq::zero(), radius: seq("1/n^2") };
        let w = baire_witness(&open, &[f]).unwrap();
        assert_eq!(compare_ev(&w.distance_to_center, &seq("1/n")), Ordering::Less);
    }
}
