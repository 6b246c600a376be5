//! Bases of entourages of the diagonal indexed by sequences of naturals.
//!
//! For a metric space with a cover of its non-isolated points by finite sets
//! `K_0, K_1, ...`, the entourage of `α` is
//! `U_α ∪ Δ` with `U_α = ⋃_n { (x, y) : max(d(x, k), d(y, k)) < 2^-α(n) for some k ∈ K_n }`,
//! the open `2^-α(n)`-neighbourhood of the diagonal copy of `K_n` under the
//! max metric on the square. The compacts and `α` are both indexed from 0.
//!
//! For a countable space with a neighbourhood base `i_x` at every point the
//! entourage of `f` is `⋃_x i_x(f(x)) × i_x(f(x))`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_rational, ParseError};
use crate::order_lab::FnSeq;
use crate::poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniformityError {
    #[error("alpha is undefined at compact {0} and has no tail")]
    AlphaTooShort(usize),
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
    #[error("metric axiom fails: {0}")]
    NotAMetric(String),
    #[error("distance matrix must be {0}x{0}")]
    Shape(usize),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("radius at point {0} must be positive")]
    NonPositiveRadius(usize),
    #[error("base at point {0} is not monotone")]
    NotMonotone(usize),
    #[error("base at point {point} does not contain the point at index {index}")]
    MissingPoint { point: usize, index: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A finite metric space with exact rational distances and a cover of its
/// limit points by finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpace {
    names: Vec<String>,
    dist: Vec<Vec<Rational>>,
    compacts: Vec<Vec<usize>>,
}

impl MetricSpace {
    /// Validates symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality on all triples.
    pub fn new(names: Vec<String>, dist: Vec<Vec<Rational>>, compacts: Vec<Vec<usize>>) -> Result<Self, UniformityError> {
        let n = names.len();
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(UniformityError::Shape(n));
        }
        if let Some(&bad) = compacts.iter().flatten().find(|&&p| p >= n) {
            return Err(UniformityError::PointOutOfRange(bad));
        }
        let space = MetricSpace { names, dist, compacts };
        space.validate()?;
        Ok(space)
    }

    fn validate(&self) -> Result<(), UniformityError> {
        let n = self.len();
        let d = &self.dist;
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(UniformityError::NotAMetric(format!("d({0}, {0}) != 0", self.names[i])));
            }
            for j in 0..n {
                if d[i][j] != d[j][i] {
                    return Err(UniformityError::NotAMetric(format!("asymmetric at {}, {}", self.names[i], self.names[j])));
                }
                if i != j && !d[i][j].is_positive() {
                    return Err(UniformityError::NotAMetric(format!("d({}, {}) <= 0", self.names[i], self.names[j])));
                }
                for k in 0..n {
                    if d[i][k] > &d[i][j] + &d[j][k] {
                        return Err(UniformityError::NotAMetric(format!(
                            "triangle fails at {}, {}, {}",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `{0} ∪ {1/n : 1 ≤ n ≤ n_max}` with the usual distance; point 0 is the
    /// limit, point `n` is `1/n`, and the cover is `[{0}]`.
    pub fn convergent_sequence(n_max: usize) -> Self {
        let value = |i: usize| if i == 0 { Rational::zero() } else { Rational::new(1.into(), (i as i64).into()) };
        let names = (0..=n_max).map(|i| if i == 0 { "0".to_string() } else { format!("1/{i}") }).collect();
        let dist = (0..=n_max).map(|i| (0..=n_max).map(|j| (value(i) - value(j)).abs()).collect()).collect();
        MetricSpace { names, dist, compacts: vec![vec![0]] }
    }

    /// `spines` copies of `{1/j : 1 ≤ j ≤ length}` glued at a common centre;
    /// distances add across spines. The centre is point 0 and the cover is
    /// `[{0}]`.
    pub fn fan(spines: usize, length: usize) -> Self {
        let mut names = vec!["c".to_string()];
        let mut coords = vec![(usize::MAX, Rational::zero())];
        for s in 0..spines {
            for j in 1..=length {
                names.push(format!("s{s}:1/{j}"));
                coords.push((s, Rational::new(1.into(), (j as i64).into())));
            }
        }
        let dist = coords
            .iter()
            .map(|(s, a)| {
                coords
                    .iter()
                    .map(|(t, b)| if s == t || a.is_zero() || b.is_zero() { (a - b).abs() } else { a + b })
                    .collect()
            })
            .collect();
        MetricSpace { names, dist, compacts: vec![vec![0]] }
    }

    pub fn with_compacts(mut self, compacts: Vec<Vec<usize>>) -> Result<Self, UniformityError> {
        if let Some(&bad) = compacts.iter().flatten().find(|&&p| p >= self.len()) {
            return Err(UniformityError::PointOutOfRange(bad));
        }
        self.compacts = compacts;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn compacts(&self) -> &[Vec<usize>] {
        &self.compacts
    }

    fn check_point(&self, i: usize) -> Result<(), UniformityError> {
        if i >= self.len() {
            return Err(UniformityError::PointOutOfRange(i));
        }
        Ok(())
    }
}

/// Space presentations accepted in JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    ConvergentSequence {
        n_max: usize,
        #[serde(default)]
        compacts: Option<Vec<Vec<usize>>>,
    },
    Fan { spines: usize, length: usize },
    Explicit { points: Vec<String>, distances: Vec<Vec<String>>, compacts: Vec<Vec<String>> },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<MetricSpace, UniformityError> {
        match self {
            SpaceSpec::ConvergentSequence { n_max, compacts } => {
                let s = MetricSpace::convergent_sequence(*n_max);
                match compacts {
                    Some(c) => s.with_compacts(c.clone()),
                    None => Ok(s),
                }
            }
            SpaceSpec::Fan { spines, length } => Ok(MetricSpace::fan(*spines, *length)),
            SpaceSpec::Explicit { points, distances, compacts } => {
                let dist = distances
                    .iter()
                    .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let idx = |s: &String| points.iter().position(|p| p == s).ok_or_else(|| UniformityError::UnknownPoint(s.clone()));
                let compacts = compacts
                    .iter()
                    .map(|k| k.iter().map(idx).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                MetricSpace::new(points.clone(), dist, compacts)
            }
        }
    }
}

/// A relation on the points `0..n`, stored as a bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Entourage {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for Entourage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl Entourage {
    pub fn empty(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        Entourage { n, words_per_row, bits: vec![0; n * words_per_row] }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut e = Entourage::empty(n);
        for i in 0..n {
            e.insert(i, i);
        }
        e
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut e = Entourage::empty(n);
        for (x, y) in pairs {
            e.insert(x, y);
        }
        e
    }

    /// `{ (x, y) : d(x, y) < r }`.
    pub fn metric_ball(space: &MetricSpace, r: &Rational) -> Self {
        let n = space.len();
        Entourage::from_pairs(n, (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| space.d(x, y) < r))
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.bits[x * self.words_per_row + y / 64] |= 1 << (y % 64);
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.words_per_row + y / 64] & (1 << (y % 64)) != 0
    }

    /// Adds `s × s`.
    pub fn insert_square(&mut self, s: &[usize]) {
        for &x in s {
            for &y in s {
                self.insert(x, y);
            }
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| (0..self.n).map(move |y| (x, y))).filter(|&(x, y)| self.contains(x, y))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_subset(&self, other: &Entourage) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Entourage) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    /// `{ (x, z) : (x, y) ∈ self, (y, z) ∈ other for some y }`.
    pub fn compose(&self, other: &Entourage) -> Entourage {
        let mut out = Entourage::empty(self.n);
        for x in 0..self.n {
            let row = &mut out.bits[x * self.words_per_row..(x + 1) * self.words_per_row];
            for y in 0..self.n {
                if self.contains(x, y) {
                    let src = &other.bits[y * self.words_per_row..(y + 1) * self.words_per_row];
                    for (a, b) in row.iter_mut().zip(src) {
                        *a |= b;
                    }
                }
            }
        }
        out
    }
}

/// Largest `a` with `m < 2^-a`, `None` if `m ≥ 1`, `u64::MAX` if `m = 0`.
fn dyadic_level(m: &Rational) -> Option<u64> {
    if m.is_zero() {
        return Some(u64::MAX);
    }
    if *m >= Rational::one() {
        return None;
    }
    // m = p/q < 2^-a  ⟺  p·2^a < q
    let (p, qd) = (m.numer(), m.denom());
    let mut a = 0u64;
    while p * (BigInt::one() << (a + 1)) < *qd {
        a += 1;
    }
    Some(a)
}

fn alpha_at(alpha: &FnSeq, n: usize) -> Result<u64, UniformityError> {
    alpha.at(n).ok_or(UniformityError::AlphaTooShort(n))
}

/// Per-pair distances to the diagonal copies of the compacts, reduced to the
/// dyadic levels that decide membership: `(x, y) ∈ U_α` iff
/// `α(n) ≤ level[n](x, y)` for some `n`.
pub struct PairProfiles {
    n: usize,
    /// `levels[n][x * points + y]`.
    levels: Vec<Vec<Option<u64>>>,
}

impl PairProfiles {
    pub fn new(space: &MetricSpace) -> Self {
        let n = space.len();
        let levels = space
            .compacts()
            .iter()
            .map(|k| {
                let mut row = vec![None; n * n];
                for x in 0..n {
                    for y in 0..n {
                        let m = k.iter().map(|&c| space.d(x, c).max(space.d(y, c)).clone()).min();
                        row[x * n + y] = m.and_then(|m| dyadic_level(&m));
                    }
                }
                row
            })
            .collect();
        PairProfiles { n, levels }
    }

    pub fn member(&self, alpha: &FnSeq, x: usize, y: usize) -> Result<bool, UniformityError> {
        if x == y {
            return Ok(true);
        }
        for (k, row) in self.levels.iter().enumerate() {
            let a = alpha_at(alpha, k)?;
            if row[x * self.n + y].is_some_and(|l| a <= l) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `U_α ∪ Δ` as an explicit entourage.
    pub fn entourage(&self, alpha: &FnSeq) -> Result<Entourage, UniformityError> {
        let mut e = Entourage::diagonal(self.n);
        for (k, row) in self.levels.iter().enumerate() {
            let a = alpha_at(alpha, k)?;
            for (i, l) in row.iter().enumerate() {
                if l.is_some_and(|l| a <= l) {
                    e.insert(i / self.n, i % self.n);
                }
            }
        }
        Ok(e)
    }
}

/// `(x, y) ∈ U_α ∪ Δ`.
pub fn u_alpha_member(space: &MetricSpace, alpha: &FnSeq, x: usize, y: usize) -> Result<bool, UniformityError> {
    space.check_point(x)?;
    space.check_point(y)?;
    if x == y {
        return Ok(true);
    }
    for (n, k) in space.compacts().iter().enumerate() {
        let a = alpha_at(alpha, n)?;
        let hit = k.iter().any(|&c| {
            let m = space.d(x, c).max(space.d(y, c));
            dyadic_level(m).is_some_and(|l| a <= l)
        });
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `α ≤ α'` pointwise implies `U_α' ∪ Δ ⊆ U_α ∪ Δ`, checked on all pairs.
pub fn base_monotone_check(profiles: &PairProfiles, alpha: &FnSeq, alpha2: &FnSeq) -> Result<bool, UniformityError> {
    if !alpha.le(alpha2) {
        return Ok(true);
    }
    Ok(profiles.entourage(alpha2)?.is_subset(&profiles.entourage(alpha)?))
}

/// Open neighbourhood of the diagonal given by a radius at every point:
/// `O = Δ ∪ ⋃_x B(x, r_x) × B(x, r_x)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadiusNeighbourhood {
    #[serde(with = "rational_vec")]
    pub radii: Vec<Rational>,
}

mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|q| q.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

impl RadiusNeighbourhood {
    pub fn entourage(&self, space: &MetricSpace) -> Result<Entourage, UniformityError> {
        if self.radii.len() != space.len() {
            return Err(UniformityError::Shape(space.len()));
        }
        let n = space.len();
        let mut e = Entourage::diagonal(n);
        for (x, r) in self.radii.iter().enumerate() {
            if !r.is_positive() {
                return Err(UniformityError::NonPositiveRadius(x));
            }
            let ball: Vec<usize> = (0..n).filter(|&y| space.d(x, y) < r).collect();
            e.insert_square(&ball);
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CofinalSearch {
    Found { alpha: FnSeq, pairs_audited: usize },
    FailureUpTo { resolution: u64 },
}

/// Looks for `α` with `U_α ∪ Δ ⊆ O`: `α(n)` is the least `a ≤ resolution`
/// with `2^-a ≤ min_{k ∈ K_n} r_k`. The result is audited on every pair.
pub fn cofinal_search(
    space: &MetricSpace,
    profiles: &PairProfiles,
    o: &RadiusNeighbourhood,
    resolution: u64,
) -> Result<CofinalSearch, UniformityError> {
    let target = o.entourage(space)?;
    let mut values = Vec::with_capacity(space.compacts().len());
    for k in space.compacts() {
        let Some(min_r) = k.iter().map(|&c| &o.radii[c]).min() else {
            values.push(0);
            continue;
        };
        let a = (0..=resolution).find(|&a| Rational::new(1.into(), BigInt::one() << a) <= *min_r);
        match a {
            Some(a) => values.push(a),
            None => return Ok(CofinalSearch::FailureUpTo { resolution }),
        }
    }
    let alpha = FnSeq::finite(values);
    let got = profiles.entourage(&alpha)?;
    if !got.is_subset(&target) {
        return Ok(CofinalSearch::FailureUpTo { resolution });
    }
    Ok(CofinalSearch::Found { alpha, pairs_audited: space.len() * space.len() })
}

/// Finds `α''` with `(U_α'' ∪ Δ) ∘ (U_α'' ∪ Δ) ⊆ U_α ∪ Δ`, trying `α + j`
/// pointwise and then the constant `max α + j` for `j = 0..=max_shift`.
pub fn composition_search(profiles: &PairProfiles, alpha: &FnSeq, max_shift: u64) -> Result<Option<FnSeq>, UniformityError> {
    let target = profiles.entourage(alpha)?;
    let top = alpha.values.iter().copied().chain(alpha.tail).max().unwrap_or(0);
    for j in 0..=max_shift {
        let shifted = FnSeq::new(alpha.values.iter().map(|v| v + j).collect(), alpha.tail.map(|t| t + j));
        let flat = FnSeq::new(vec![top + j; alpha.values.len()], alpha.tail.map(|_| top + j));
        for cand in [shifted, flat] {
            let e = profiles.entourage(&cand)?;
            if e.compose(&e).is_subset(&target) {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

/// Neighbourhood base at one point of a countable space, indexed by the
/// first coordinate `k` of a sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointBase {
    /// `{x}` for every index: an isolated point.
    Principal,
    /// `{x} ∪ { m : m ≥ k + start }` among `members`, a convergent sequence
    /// listed in order.
    TailFrom { members: Vec<usize> },
    /// `sets[min(k, len - 1)]`, each containing the point, decreasing.
    Explicit { sets: Vec<BTreeSet<usize>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountableSpace {
    pub points: usize,
    pub bases: Vec<PointBase>,
}

impl CountableSpace {
    /// Points `0..n_max` converging to the point `n_max`, which is the only
    /// non-isolated point.
    pub fn convergent_sequence(n_max: usize) -> Self {
        let mut bases = vec![PointBase::Principal; n_max];
        bases.push(PointBase::TailFrom { members: (0..n_max).collect() });
        CountableSpace { points: n_max + 1, bases }
    }

    pub fn validate(&self) -> Result<(), UniformityError> {
        if self.bases.len() != self.points {
            return Err(UniformityError::Shape(self.points));
        }
        for (x, b) in self.bases.iter().enumerate() {
            match b {
                PointBase::Principal => {}
                PointBase::TailFrom { members } => {
                    if let Some(&m) = members.iter().find(|&&m| m >= self.points) {
                        return Err(UniformityError::PointOutOfRange(m));
                    }
                }
                PointBase::Explicit { sets } => {
                    for (i, s) in sets.iter().enumerate() {
                        if !s.contains(&x) {
                            return Err(UniformityError::MissingPoint { point: x, index: i });
                        }
                        if let Some(&m) = s.iter().find(|&&m| m >= self.points) {
                            return Err(UniformityError::PointOutOfRange(m));
                        }
                        if i > 0 && !s.is_subset(&sets[i - 1]) {
                            return Err(UniformityError::NotMonotone(x));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `i_x(k)`.
    pub fn neighbourhood(&self, x: usize, k: u64) -> Vec<usize> {
        match &self.bases[x] {
            PointBase::Principal => vec![x],
            PointBase::TailFrom { members } => {
                let skip = usize::try_from(k).unwrap_or(usize::MAX).min(members.len());
                std::iter::once(x).chain(members[skip..].iter().copied()).collect()
            }
            PointBase::Explicit { sets } => {
                if sets.is_empty() {
                    return vec![x];
                }
                let i = usize::try_from(k).unwrap_or(usize::MAX).min(sets.len() - 1);
                sets[i].iter().copied().collect()
            }
        }
    }
}

/// `i(f) = ⋃_x i_x(f(x)) × i_x(f(x))`, reading the first coordinate of each
/// `f(x)` (missing values count as 0).
pub fn countable_base(space: &CountableSpace, f: &[FnSeq]) -> Result<Entourage, UniformityError> {
    space.validate()?;
    if f.len() != space.points {
        return Err(UniformityError::Shape(space.points));
    }
    let mut e = Entourage::empty(space.points);
    for (x, fx) in f.iter().enumerate() {
        e.insert_square(&space.neighbourhood(x, fx.at(0).unwrap_or(0)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn dyadic_levels() {
        assert_eq!(dyadic_level(&r(1, 16)), Some(3));
        assert_eq!(dyadic_level(&r(1, 17)), Some(4));
        assert_eq!(dyadic_level(&r(1, 1)), None);
        assert_eq!(dyadic_level(&r(0, 1)), Some(u64::MAX));
        assert_eq!(dyadic_level(&r(3, 4)), Some(0));
    }

    #[test]
    fn u_alpha_examples() {
        let s = MetricSpace::convergent_sequence(40);
        let alpha = FnSeq::finite(vec![3]);
        assert!(u_alpha_member(&s, &alpha, 7, 7).unwrap());
        assert!(u_alpha_member(&s, &alpha, 16, 32).unwrap());
        assert!(!u_alpha_member(&s, &alpha, 1, 2).unwrap());
        assert!(!u_alpha_member(&s, &alpha, 8, 9).unwrap());
        assert_eq!(u_alpha_member(&s, &FnSeq::finite(vec![]), 1, 2), Err(UniformityError::AlphaTooShort(0)));
        let p = PairProfiles::new(&s);
        for x in 0..=40 {
            for y in 0..=40 {
                assert_eq!(p.member(&alpha, x, y).unwrap(), u_alpha_member(&s, &alpha, x, y).unwrap());
            }
        }
    }

    #[test]
    fn constructed_spaces_are_metric() {
        MetricSpace::convergent_sequence(12).validate().unwrap();
        MetricSpace::fan(3, 4).validate().unwrap();
        let bad = MetricSpace::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![vec![r(0, 1), r(1, 1), r(5, 1)], vec![r(1, 1), r(0, 1), r(1, 1)], vec![r(5, 1), r(1, 1), r(0, 1)]],
            vec![],
        );
        assert!(matches!(bad, Err(UniformityError::NotAMetric(_))));
    }

    #[test]
    fn uniform_radius_search() {
        let s = MetricSpace::convergent_sequence(100);
        let p = PairProfiles::new(&s);
        let o = RadiusNeighbourhood { radii: vec![r(1, 10); 101] };
        let CofinalSearch::Found { alpha, .. } = cofinal_search(&s, &p, &o, 64).unwrap() else {
            panic!("search failed")
        };
        assert_eq!(alpha, FnSeq::finite(vec![4]));
        assert!(p.entourage(&alpha).unwrap().is_subset(&o.entourage(&s).unwrap()));
    }

    #[test]
    fn isolated_points_with_tiny_radii_do_not_matter() {
        let s = MetricSpace::convergent_sequence(30);
        let p = PairProfiles::new(&s);
        let mut radii = vec![r(1, 4); 31];
        radii[3] = r(1, 1000);
        let o = RadiusNeighbourhood { radii };
        assert!(matches!(cofinal_search(&s, &p, &o, 64).unwrap(), CofinalSearch::Found { .. }));
    }

    #[test]
    fn composition_exists() {
        let s = MetricSpace::convergent_sequence(50);
        let p = PairProfiles::new(&s);
        let alpha = FnSeq::finite(vec![2]);
        let found = composition_search(&p, &alpha, 4).unwrap().expect("composition witness");
        let e = p.entourage(&found).unwrap();
        assert!(e.compose(&e).is_subset(&p.entourage(&alpha).unwrap()));
    }

    #[test]
    fn countable_base_examples() {
        let single = CountableSpace { points: 1, bases: vec![PointBase::Principal] };
        assert_eq!(countable_base(&single, &[FnSeq::finite(vec![9])]).unwrap(), Entourage::diagonal(1));

        let sp = CountableSpace::convergent_sequence(10);
        let mut f = vec![FnSeq::finite(vec![0]); 11];
        f[10] = FnSeq::finite(vec![4]);
        let e = countable_base(&sp, &f).unwrap();
        for m in 0..10 {
            for m2 in 0..10 {
                assert_eq!(e.contains(m, m2), m == m2 || (m >= 4 && m2 >= 4), "{m} {m2}");
            }
        }
        assert!(e.contains(10, 7) && !e.contains(10, 3));
        assert!(e.is_reflexive() && e.is_symmetric());
    }

    #[test]
    fn explicit_space_from_json() {
        let spec: SpaceSpec = serde_json::from_str(
            r#"{"kind":"explicit","points":["x","y"],"distances":[["0","1/2"],["1/2","0"]],"compacts":[["x"]]}"#,
        )
        .unwrap();
        let s = spec.build().unwrap();
        assert_eq!(s.d(0, 1), &r(1, 2));
        assert!(u_alpha_member(&s, &FnSeq::finite(vec![0]), 0, 1).unwrap());
        assert!(!u_alpha_member(&s, &FnSeq::finite(vec![1]), 0, 1).unwrap());
    }

    #[test]
    fn entourage_relations() {
        let s = MetricSpace::convergent_sequence(8);
        let e = Entourage::metric_ball(&s, &r(1, 5));
        assert!(e.is_reflexive() && e.is_symmetric());
        assert!(Entourage::diagonal(9).is_subset(&e));
        assert!(e.is_subset(&e.compose(&e)));
    }
}
