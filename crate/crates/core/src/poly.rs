//! Sparse multivariate polynomials with exact rational coefficients, their
//! gcd, and reduced rational functions built on top of them.
//!
//! Monomials are ordered lexicographically with the highest-indexed variable
//! compared first. Under that order the *smallest* monomial of a polynomial is
//! its dominant term in the infinitesimal tower (lowest power of the most
//! deeply nested variable), and the *largest* is the usual lex-leading term
//! used by division and pseudo-remainders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Exponent vector, trailing zeros trimmed so that equal monomials compare
/// equal regardless of how many variables the ambient ring has.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(j: usize, e: u32) -> Self {
        let mut v = vec![0; j + 1];
        v[j] = e;
        Monomial::new(v)
    }

    pub fn exponent(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of variables up to and including the last one present.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::new((0..n).map(|j| self.exponent(j) + other.exponent(j)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (j, &e) in other.0.iter().enumerate() {
            out[j] = out[j].checked_sub(e)?;
        }
        Some(Monomial::new(out))
    }

    fn without_var(&self, v: usize) -> (u32, Monomial) {
        let e = self.exponent(v);
        if e == 0 {
            return (0, self.clone());
        }
        let mut out = self.0.clone();
        out[v] = 0;
        (e, Monomial::new(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for j in (0..n).rev() {
            match self.exponent(j).cmp(&other.exponent(j)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(Monomial::one(), c)
    }

    pub fn var(j: usize) -> Self {
        Poly::monomial(Monomial::var(j, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial is a constant (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Index of the highest variable that occurs, `None` for constants.
    pub fn top_var(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::width).max().filter(|&w| w > 0).map(|w| w - 1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Smallest monomial: the dominant term in the infinitesimal tower.
    pub fn dominant_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    /// Largest monomial in lex order.
    pub fn lex_leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluate at a point; missing coordinates are taken as zero.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let x = point.get(j).cloned().unwrap_or_else(Rational::zero);
                    t *= num_traits::pow(x, e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.lex_leading_term()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.lex_leading_term() {
            let m = rm.div(dm)?;
            let c = rc / dc;
            r = &r - &d.mul_term(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Split off the rational content: returns `(c, p)` with `self = c * p`,
    /// `p` having coprime integer coefficients and positive lex-leading
    /// coefficient.
    pub fn primitive(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), Poly::zero());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.lex_leading_term().unwrap().1.is_negative() {
            content = -content;
        }
        if content.is_one() {
            return (content, self.clone());
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    fn to_univariate(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.without_var(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Coefficients in `x_v`, reduced mod [`IMAGE_PRIME`], after
    /// substituting `point` for every other variable. `None` if a
    /// denominator vanishes mod the prime.
    fn image_in(&self, v: usize, point: &[u64]) -> Option<Vec<u64>> {
        let mut out = vec![0u64; self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut t = reduce(c)?;
            for (j, &e) in m.exponents().iter().enumerate() {
                if j != v && e > 0 {
                    t = mul_mod(t, pow_mod(point[j], e as u64));
                }
            }
            let slot = &mut out[m.exponent(v) as usize];
            *slot = add_mod(*slot, t);
        }
        Some(out)
    }

    fn from_univariate(coeffs: &[Poly], v: usize) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(v, e as u32);
            for (m, a) in &c.terms {
                p.add_term(m.mul(&shift), a.clone());
            }
        }
        p
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut acc, other) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &other.terms {
            acc.add_term(m.clone(), c.clone());
        }
        acc
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut acc = self.clone();
        for (m, c) in &rhs.terms {
            acc.add_term(m.clone(), -c);
        }
        acc
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

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        let mut acc = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                acc.add_term(m.mul(n), a * b);
            }
        }
        acc
    }
}

/// Greatest common divisor, normalized by [`Poly::primitive`].
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive().1;
    }
    if b.is_zero() || a == b {
        return a.primitive().1;
    }
    let (va, vb) = match (a.top_var(), b.top_var()) {
        (Some(va), Some(vb)) => (va, vb),
        _ => return Poly::one(),
    };
    if certainly_coprime(a, b) {
        return Poly::one();
    }
    if va > vb {
        return gcd(&content_in(&a.to_univariate(va)), b);
    }
    if vb > va {
        return gcd(a, &content_in(&b.to_univariate(vb)));
    }
    let v = va;
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = content_in(&ua);
    let cb = content_in(&ub);
    let c = gcd(&ca, &cb);
    let pa = divide_coeffs(&ua, &ca);
    let pb = divide_coeffs(&ub, &cb);
    match image_gcd_degree(&pa, &pb, v) {
        Some(0) => return c.primitive().1,
        Some(d) if d == udeg(&pb) || d == udeg(&pa) => {
            // the image bound is attained only if the smaller side divides
            let (big, small) = if d == udeg(&pb) { (&pa, &pb) } else { (&pb, &pa) };
            let small_poly = Poly::from_univariate(small, v);
            if Poly::from_univariate(big, v).div_exact(&small_poly).is_some() {
                return (&c * &small_poly).primitive().1;
            }
        }
        _ => {}
    }
    let g = primitive_prs(pa, pb);
    (&c * &Poly::from_univariate(&g, v)).primitive().1
}

/// Degree bounds for gcds come from images mod this prime: if `g` divides
/// `a` and the leading coefficient of `a` in `x_v` survives the reduction,
/// the image of `g` keeps its full degree in `x_v` and divides the image of
/// `a`.
const IMAGE_PRIME: u64 = (1 << 61) - 1;

fn add_mod(a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % IMAGE_PRIME as u128) as u64
}

fn sub_mod(a: u64, b: u64) -> u64 {
    add_mod(a, IMAGE_PRIME - b)
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % IMAGE_PRIME as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, IMAGE_PRIME - 2)
}

fn reduce(q: &Rational) -> Option<u64> {
    let p = BigInt::from(IMAGE_PRIME);
    let to_u64 = |x: &BigInt| u64::try_from(x.mod_floor(&p)).expect("reduced below the prime");
    let d = to_u64(q.denom());
    (d != 0).then(|| mul_mod(to_u64(q.numer()), inv_mod(d)))
}

fn image_point(width: usize, attempt: u64) -> Vec<u64> {
    (0..width as u64).map(|j| 1_000_003 + 7_919 * j + 104_729 * attempt).collect()
}

/// `true` when, for every variable, the images of `a` and `b` in that
/// variable alone have a constant gcd with leading coefficients intact; the
/// gcd then has degree zero in every variable.
fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
    let width = a.top_var().max(b.top_var()).map_or(0, |v| v + 1);
    let point = image_point(width, 0);
    (0..width).all(|j| {
        if a.degree_in(j) == 0 || b.degree_in(j) == 0 {
            return true;
        }
        match (a.image_in(j, &point), b.image_in(j, &point)) {
            (Some(ia), Some(ib)) if ia.last() != Some(&0) && ib.last() != Some(&0) => univariate_gcd_degree(ia, ib) == 0,
            _ => false,
        }
    })
}

/// Upper bound on the degree in `x_v` of the gcd of `a` and `b` (given as
/// coefficient lists in `x_v`), or `None` if no tried image keeps the
/// leading coefficients.
fn image_gcd_degree(a: &[Poly], b: &[Poly], v: usize) -> Option<usize> {
    let (a, b) = (Poly::from_univariate(a, v), Poly::from_univariate(b, v));
    (0..4).find_map(|attempt| {
        let point = image_point(v + 1, attempt);
        match (a.image_in(v, &point), b.image_in(v, &point)) {
            (Some(ia), Some(ib)) if ia.last() != Some(&0) && ib.last() != Some(&0) => Some(univariate_gcd_degree(ia, ib)),
            _ => None,
        }
    })
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let strip = |p: &mut Vec<u64>| {
        while p.last() == Some(&0) {
            p.pop();
        }
    };
    strip(&mut a);
    strip(&mut b);
    while !b.is_empty() {
        let lead_inv = inv_mod(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().expect("nonempty"), lead_inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = sub_mod(a[i + shift], mul_mod(f, bc));
            }
            a.pop();
            strip(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn content_in(coeffs: &[Poly]) -> Poly {
    let mut acc = Poly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn divide_coeffs(coeffs: &[Poly], d: &Poly) -> Vec<Poly> {
    coeffs
        .iter()
        .map(|c| c.div_exact(d).expect("content divides every coefficient"))
        .collect()
}

fn trim(coeffs: &mut Vec<Poly>) {
    while coeffs.len() > 1 && coeffs.last().is_some_and(Poly::is_zero) {
        coeffs.pop();
    }
}

fn udeg(coeffs: &[Poly]) -> usize {
    coeffs.len().saturating_sub(1)
}

fn uzero(coeffs: &[Poly]) -> bool {
    coeffs.iter().all(Poly::is_zero)
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = udeg(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while !uzero(&r) && udeg(&r) >= db {
        let dr = udeg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = lb * c;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = &lr * bc;
            r[i + shift] = &r[i + shift] - &t;
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        trim(&mut r);
    }
    r
}

/// Primitive pseudo-remainder sequence on primitive inputs; returns the
/// primitive gcd.
fn primitive_prs(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if udeg(&a) < udeg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if uzero(&b) {
            return a;
        }
        if udeg(&b) == 0 {
            return vec![Poly::one()];
        }
        let r = prem(&a, &b);
        if uzero(&r) {
            return b;
        }
        if udeg(&r) == 0 {
            return vec![Poly::one()];
        }
        let cr = content_in(&r);
        let mut next = divide_coeffs(&r, &cr);
        // clear the rational content to keep coefficient growth in check
        let q = rational_content(&next);
        if !q.is_one() {
            let inv = q.recip();
            next = next.iter().map(|c| c.scale(&inv)).collect();
        }
        a = b;
        b = next;
    }
}

fn rational_content(coeffs: &[Poly]) -> Rational {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in coeffs.iter().flat_map(|p| p.terms.values()) {
        den_lcm = den_lcm.lcm(c.denom());
        num_gcd = num_gcd.gcd(c.numer());
    }
    if num_gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(num_gcd, den_lcm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("division by zero")]
pub struct DivisionByZero;

/// A reduced quotient of polynomials. Canonical: numerator and denominator
/// are coprime and the denominator's dominant coefficient is 1, so structural
/// equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, DivisionByZero> {
        if den.is_zero() {
            return Err(DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        if den.is_constant() {
            return Ok(RationalFunction::from_coprime(num, den));
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            return Ok(RationalFunction::from_coprime(num, den));
        }
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        Ok(RationalFunction::from_coprime(num, den))
    }

    /// Scale an already-coprime pair into canonical form.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        let lead = den.dominant_term().expect("nonzero denominator").1.clone();
        if lead.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lead.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn var(j: usize) -> Self {
        RationalFunction::from_poly(Poly::var(j))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    pub fn top_var(&self) -> Option<usize> {
        self.num.top_var().max(self.den.top_var())
    }

    pub fn recip(&self) -> Result<Self, DivisionByZero> {
        if self.is_zero() {
            return Err(DivisionByZero);
        }
        Ok(RationalFunction::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, DivisionByZero> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, DivisionByZero> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction::from_coprime(base.num.pow(k), base.den.pow(k)))
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, DivisionByZero> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return RationalFunction::new(num, self.den.clone()).expect("nonzero denominator");
        }
        if self.den.is_constant() || rhs.den.is_constant() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            if self.den.is_constant() && rhs.den.is_constant() {
                return RationalFunction::from_coprime(num, den);
            }
            return RationalFunction::new(num, den).expect("nonzero denominator");
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            // coprime denominators over reduced fractions: the sum is reduced
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            if num.is_zero() {
                return RationalFunction::zero();
            }
            return RationalFunction::from_coprime(num, den);
        }
        let bd = self.den.div_exact(&g).expect("gcd divides");
        let dd = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &dd) + &(&rhs.num * &bd);
        let den = &(&bd * &dd) * &g;
        RationalFunction::new(num, den).expect("nonzero denominator")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction::from_coprime(&self.num * &rhs.num, &self.den * &rhs.den);
        }
        // cross-cancel: (a/b)(c/d) with g1 = gcd(a, d), g2 = gcd(c, b)
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::from_coprime(&a * &c, &b * &d)
    }
}

/// Writes a polynomial with variables named by `name`; terms appear in the
/// monomial order (dominant term first).
pub(crate) fn write_poly(
    f: &mut fmt::Formatter<'_>,
    p: &Poly,
    name: &dyn Fn(usize) -> String,
) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        match (i, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(abs.to_string());
        }
        for (j, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(name(j)),
                _ => factors.push(format!("{}^{}", name(j), e)),
            }
        }
        write!(f, "{}", factors.join("*"))?;
    }
    Ok(())
}

pub(crate) fn write_rational_function(
    f: &mut fmt::Formatter<'_>,
    r: &RationalFunction,
    name: &dyn Fn(usize) -> String,
) -> fmt::Result {
    struct P<'a>(&'a Poly, &'a dyn Fn(usize) -> String);
    impl fmt::Display for P<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_poly(f, self.0, self.1)
        }
    }
    if r.den.is_one() {
        return write_poly(f, &r.num, name);
    }
    let wrap = |s: String| {
        if s.contains([' ', '*', '/', '^']) || s.starts_with('-') {
            format!("({s})")
        } else {
            s
        }
    };
    let n = wrap(P(&r.num, name).to_string());
    let d = wrap(P(&r.den, name).to_string());
    write!(f, "{n}/{d}")
}

/// Serializes a rational as its `p/q` string.
pub(crate) fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn x(j: usize) -> Poly {
        Poly::var(j)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(q(n))
    }

    #[test]
    fn monomial_order_is_lex_from_top_variable() {
        let a = Monomial::new(vec![5, 0]);
        let b = Monomial::new(vec![0, 1]);
        assert!(a < b);
        assert!(Monomial::one() < a);
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::var(0, 1));
    }

    #[test]
    fn exact_division_and_failure() {
        let p = &(&x(0) + &c(1)) * &(&x(1) - &x(0));
        let d = &x(0) + &c(1);
        assert_eq!(p.div_exact(&d).unwrap(), &x(1) - &x(0));
        assert!(p.div_exact(&(&x(0) + &c(2))).is_none());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = &(&x(0) * &x(1)) + &c(3);
        let a = &f * &(&x(0) - &c(1));
        let b = &f * &(&x(1).pow(2) + &x(0));
        let g = gcd(&a, &b);
        assert_eq!(g, f.primitive().1);
        assert!(gcd(&(&x(0) + &c(1)), &(&x(0) - &c(1))).is_one());
    }

    #[test]
    fn gcd_with_univariate_content() {
        // (a0 + 1) is the content of both in a1
        let a = &(&x(0) + &c(1)) * &(&x(1) + &c(2));
        let b = &(&x(0) + &c(1)) * &x(1);
        assert_eq!(gcd(&a, &b), &x(0) + &c(1));
    }

    #[test]
    fn rational_function_is_reduced() {
        let num = &x(0).pow(2) - &c(1);
        let den = &x(0) - &c(1);
        let r = RationalFunction::new(num, den).unwrap();
        assert_eq!(r, RationalFunction::from_poly(&x(0) + &c(1)));
    }
}
