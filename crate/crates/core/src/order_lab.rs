//! Finite directed-set machinery: monotone and cofinal maps between finite
//! posets, intersections over finite index sets, almost disjoint prefix sets
//! of eventually periodic branches, the chain-valued map built from a Tukey
//! map, the diagonal witness and box neighbourhoods.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation is not antisymmetric: {0} and {1}")]
    NotAntisymmetric(String, String),
    #[error("relation is not reflexive at {0}")]
    NotReflexive(String),
    #[error("relation is not transitive: {0} ≤ {1} ≤ {2}")]
    NotTransitive(String, String, String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("map is undefined at {0:?}")]
    PartialMap(String),
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("unknown index {0:?}")]
    UnknownIndex(String),
    #[error("depth {depth} is below the disambiguation bound {bound}")]
    DepthTooSmall { depth: usize, bound: usize },
    #[error("depth {0} exceeds the supported maximum of 62")]
    DepthTooLarge(usize),
    #[error("branch period must be nonempty")]
    EmptyPeriod,
    #[error("branches are not pairwise distinct")]
    DuplicateBranch,
    #[error("sequence {index} is undefined at coordinate {coord}")]
    Undefined { index: usize, coord: usize },
    #[error("box radius index is zero at coordinate {0}")]
    ZeroIndex(usize),
    #[error("invalid bit string {0:?}")]
    BadBits(String),
}

/// A finite partial order on `0..n`, stored as its full relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Reflexive and transitive closure of `pairs`, rejected unless the
    /// result is antisymmetric.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(OrderError::UnknownElement(a.max(b).to_string()));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        FinitePoset::from_matrix((0..n).map(|i| i.to_string()).collect(), leq)
    }

    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, OrderError> {
        let m = (0..n).map(|i| (0..n).map(|j| leq(i, j)).collect()).collect();
        FinitePoset::from_matrix((0..n).map(|i| i.to_string()).collect(), m)
    }

    /// Validates reflexivity, antisymmetry and transitivity of `leq`.
    pub fn from_matrix(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, OrderError> {
        let n = labels.len();
        assert!(leq.len() == n && leq.iter().all(|r| r.len() == n), "relation matrix shape");
        for i in 0..n {
            if !leq[i][i] {
                return Err(OrderError::NotReflexive(labels[i].clone()));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(OrderError::NotAntisymmetric(labels[i].clone(), labels[j].clone()));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        let l = |x: usize| labels[x].clone();
                        return Err(OrderError::NotTransitive(l(i), l(j), l(k)));
                    }
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn chain(n: usize) -> Self {
        FinitePoset::from_fn(n, |i, j| i <= j).expect("a chain is a partial order")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, OrderError> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(OrderError::DuplicateElement(l.clone()));
            }
        }
        assert_eq!(labels.len(), self.labels.len(), "label count");
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Serialized form: `{"elements": [...], "order": [[a, b], ...]}` where the
/// order lists generating pairs `a ≤ b`.
#[derive(Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

impl TryFrom<PosetJson> for FinitePoset {
    type Error = OrderError;
    fn try_from(j: PosetJson) -> Result<Self, OrderError> {
        let idx = |s: &str| j.elements.iter().position(|e| e == s).ok_or_else(|| OrderError::UnknownElement(s.into()));
        let pairs = j.order.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>, OrderError>>()?;
        FinitePoset::from_pairs(j.elements.len(), &pairs)?.with_labels(j.elements.clone())
    }
}

impl From<&FinitePoset> for PosetJson {
    fn from(p: &FinitePoset) -> Self {
        let n = p.len();
        let order = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && p.le(i, j))
            .map(|(i, j)| (p.labels[i].clone(), p.labels[j].clone()))
            .collect();
        PosetJson { elements: p.labels.clone(), order }
    }
}

fn total(f: &[Option<usize>], d: &FinitePoset, e: &FinitePoset) -> Result<Vec<usize>, OrderError> {
    if f.len() != d.len() {
        return Err(OrderError::PartialMap(d.label(f.len().min(d.len().saturating_sub(1))).to_string()));
    }
    f.iter()
        .enumerate()
        .map(|(i, v)| match v {
            Some(j) if *j < e.len() => Ok(*j),
            Some(j) => Err(OrderError::UnknownElement(j.to_string())),
            None => Err(OrderError::PartialMap(d.label(i).to_string())),
        })
        .collect()
}

/// `x ≤ y ⟹ f(x) ≤ f(y)` for all `x, y` in `d`.
pub fn check_monotone(f: &[Option<usize>], d: &FinitePoset, e: &FinitePoset) -> Result<bool, OrderError> {
    let f = total(f, d, e)?;
    Ok((0..d.len()).all(|x| (0..d.len()).all(|y| !d.le(x, y) || e.le(f[x], f[y]))))
}

/// Every element of `e` lies below some `f(x)`.
pub fn check_cofinal(f: &[Option<usize>], d: &FinitePoset, e: &FinitePoset) -> Result<bool, OrderError> {
    let f = total(f, d, e)?;
    Ok((0..e.len()).all(|t| f.iter().any(|&y| e.le(t, y))))
}

/// `⋂_{κ ∈ S} V(κ)`.
pub fn semilattice_extend<K: Ord + fmt::Debug, T: Ord + Clone>(
    v: &BTreeMap<K, BTreeSet<T>>,
    s: &BTreeSet<K>,
) -> Result<BTreeSet<T>, OrderError> {
    let mut it = s.iter();
    let first = it.next().ok_or(OrderError::EmptyIndexSet)?;
    let get = |k: &K| v.get(k).ok_or_else(|| OrderError::UnknownIndex(format!("{k:?}")));
    let mut acc = get(first)?.clone();
    for k in it {
        let other = get(k)?;
        acc.retain(|x| other.contains(x));
    }
    Ok(acc)
}

/// An eventually periodic infinite bit sequence, kept with a primitive
/// period and the shortest preperiod so that equal branches compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    preperiod: Vec<bool>,
    period: Vec<bool>,
}

fn parse_bits(s: &str) -> Result<Vec<bool>, OrderError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(OrderError::BadBits(s.to_string())),
        })
        .collect()
}

impl Branch {
    pub fn new(mut preperiod: Vec<bool>, mut period: Vec<bool>) -> Result<Self, OrderError> {
        if period.is_empty() {
            return Err(OrderError::EmptyPeriod);
        }
        let p = period.len();
        if let Some(d) = (1..=p).find(|&d| p.is_multiple_of(d) && (0..p).all(|i| period[i] == period[i % d])) {
            period.truncate(d);
        }
        while preperiod.last() == period.last() && !preperiod.is_empty() {
            preperiod.pop();
            period.rotate_right(1);
        }
        Ok(Branch { preperiod, period })
    }

    /// Parses `pre(period)`, e.g. `01(10)` or `(0)`.
    pub fn parse(s: &str) -> Result<Self, OrderError> {
        let s = s.trim();
        let (pre, rest) = s.split_once('(').ok_or_else(|| OrderError::BadBits(s.to_string()))?;
        let per = rest.strip_suffix(')').ok_or_else(|| OrderError::BadBits(s.to_string()))?;
        Branch::new(parse_bits(pre)?, parse_bits(per)?)
    }

    pub fn preperiod(&self) -> &[bool] {
        &self.preperiod
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn bit(&self, i: usize) -> bool {
        match self.preperiod.get(i) {
            Some(&b) => b,
            None => self.period[(i - self.preperiod.len()) % self.period.len()],
        }
    }

    /// Code of the prefix of length `len`: the binary number `1 b_0 ... b_{len-1}`
    /// minus one. Prefixes of length `0, 1, 2, ...` get codes in
    /// `[0, 1), [1, 3), [3, 7), ...`.
    pub fn prefix_code(&self, len: usize) -> u64 {
        (0..len).fold(1u64, |acc, i| (acc << 1) | u64::from(self.bit(i))) - 1
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "{}({})", bits(&self.preperiod), bits(&self.period))
    }
}

impl Serialize for Branch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Branch::parse(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Depth from which distinct branches of the family have distinct prefixes:
/// longest preperiod plus the lcm of the periods plus the longest period.
pub fn disambiguation_bound<'a>(branches: impl IntoIterator<Item = &'a Branch>) -> usize {
    let (mut pre, mut l, mut per) = (0, 1, 0);
    for b in branches {
        pre = pre.max(b.preperiod.len());
        let p = b.period.len();
        l = l / gcd(l, p) * p;
        per = per.max(p);
    }
    pre + l + per
}

/// Join of the indicator functions of the prefix-code sets of `s`, restricted
/// to prefixes of length at most `depth`, as the set of codes where it is 1.
pub fn ad_join(s: &[Branch], depth: usize) -> Result<BTreeSet<u64>, OrderError> {
    let distinct: BTreeSet<&Branch> = s.iter().collect();
    if distinct.len() != s.len() {
        return Err(OrderError::DuplicateBranch);
    }
    let bound = disambiguation_bound(s);
    if depth < bound {
        return Err(OrderError::DepthTooSmall { depth, bound });
    }
    if depth > 62 {
        return Err(OrderError::DepthTooLarge(depth));
    }
    Ok(s.iter().flat_map(|b| (0..=depth).map(move |l| b.prefix_code(l))).collect())
}

/// Decides `join(S) ≤ join(T)` on the infinite prefix sets by checking, at a
/// depth past the disambiguation bound of `S ∪ T`, that every branch of `S`
/// has its deep prefix inside `join(T)`.
pub fn ad_compare(s: &[Branch], t: &[Branch], depth: usize) -> Result<bool, OrderError> {
    let bound = disambiguation_bound(s.iter().chain(t));
    if depth < bound {
        return Err(OrderError::DepthTooSmall { depth, bound });
    }
    let jt = ad_join(t, depth)?;
    Ok(s.iter().all(|r| jt.contains(&r.prefix_code(depth))))
}

/// Element of `ω^ω` truncated to finitely many coordinates, optionally
/// continued by a constant tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FnSeq {
    pub values: Vec<u64>,
    #[serde(default)]
    pub tail: Option<u64>,
}

impl FnSeq {
    pub fn new(values: Vec<u64>, tail: Option<u64>) -> Self {
        FnSeq { values, tail }
    }

    pub fn finite(values: Vec<u64>) -> Self {
        FnSeq { values, tail: None }
    }

    pub fn at(&self, i: usize) -> Option<u64> {
        self.values.get(i).copied().or(self.tail)
    }

    /// Number of explicitly stored coordinates, or `None` for an infinite
    /// domain.
    fn domain(&self) -> Option<usize> {
        self.tail.is_none().then_some(self.values.len())
    }

    /// Pointwise `≤` on the common domain.
    pub fn le(&self, other: &FnSeq) -> bool {
        let n = self.values.len().max(other.values.len());
        let finite_ok = (0..n).all(|i| match (self.at(i), other.at(i)) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        });
        let tail_ok = match (self.tail, other.tail) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
        finite_ok && tail_ok
    }

    /// Pointwise maximum on the common domain.
    pub fn join(&self, other: &FnSeq) -> FnSeq {
        let n = match (self.domain(), other.domain()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => self.values.len().max(other.values.len()),
        };
        let values = (0..n).map(|i| self.at(i).unwrap_or(0).max(other.at(i).unwrap_or(0))).collect();
        let tail = match (self.tail, other.tail) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        FnSeq { values, tail }
    }
}

/// The chain-valued map `f(x) = min(1 + max{η : g(η) ≤ x}, τ - 1)`, or `0`
/// when no `g(η)` lies below `x`. `g` lists `g(0), ..., g(τ - 1)`.
pub fn tukey_to_monotone(g: &[usize], d: &FinitePoset) -> Result<Vec<usize>, OrderError> {
    if let Some(&bad) = g.iter().find(|&&x| x >= d.len()) {
        return Err(OrderError::UnknownElement(bad.to_string()));
    }
    let tau = g.len();
    Ok((0..d.len())
        .map(|x| match (0..tau).rev().find(|&eta| d.le(g[eta], x)) {
            Some(eta) => (eta + 1).min(tau.saturating_sub(1)),
            None => 0,
        })
        .collect())
}

/// Unboundedness certificate of `g` on the truncated chain: no later value
/// lies below an earlier one, `g(η') ≰ g(η)` for `η < η'` and `η ≤ τ - 3`.
/// It holds exactly when `tukey_to_monotone` reaches every level `1..τ`.
pub fn tukey_certificate(g: &[usize], d: &FinitePoset) -> bool {
    let tau = g.len();
    (0..tau.saturating_sub(2)).all(|eta| (eta + 1..tau).all(|later| !d.le(g[later], g[eta])))
}

/// `true` iff `f` takes every value `1, ..., τ - 1`.
pub fn reaches_every_level(f: &[usize], tau: usize) -> bool {
    let hit: BTreeSet<usize> = f.iter().copied().collect();
    (1..tau).all(|l| hit.contains(&l))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalWitness {
    pub z: FnSeq,
    /// `(β, z(β), a_β(β))` for every `β`: `z(β) > a_β(β)`, so `z ≰ a_β`.
    pub escapes: Vec<(usize, u64, u64)>,
}

/// `z(x) = a_x(x) + 1` on the coordinates `0..τ`, `τ = a.len()`.
pub fn diagonal_witness(a: &[FnSeq]) -> Result<DiagonalWitness, OrderError> {
    let mut z = Vec::with_capacity(a.len());
    let mut escapes = Vec::with_capacity(a.len());
    for (beta, s) in a.iter().enumerate() {
        let v = s.at(beta).ok_or(OrderError::Undefined { index: beta, coord: beta })?;
        z.push(v + 1);
        escapes.push((beta, v + 1, v));
    }
    Ok(DiagonalWitness { z: FnSeq::finite(z), escapes })
}

/// `x ∈ □_f ⟺ |x_β| < 1/f(β)` at every coordinate where both are defined.
/// Coordinates of `x` missing from the domain of `f` are unconstrained.
pub fn box_member(f: &FnSeq, x: &BTreeMap<usize, Rational>) -> Result<bool, OrderError> {
    for (i, &v) in f.values.iter().enumerate() {
        if v == 0 {
            return Err(OrderError::ZeroIndex(i));
        }
    }
    if f.tail == Some(0) {
        return Err(OrderError::ZeroIndex(f.values.len()));
    }
    Ok(x.iter().all(|(&beta, xb)| match f.at(beta) {
        Some(k) => xb.abs() * Rational::from_integer(k.into()) < Rational::one(),
        None => true,
    }))
}

/// The family `f_k = base + k·e_β`, `k = 0, 1, 2, ...`, unbounded at `β`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoxFamily {
    pub base: FnSeq,
    pub beta: usize,
}

impl BoxFamily {
    pub fn member(&self, k: u64) -> FnSeq {
        let mut f = self.base.clone();
        while f.values.len() <= self.beta {
            f.values.push(f.tail.unwrap_or(1));
        }
        f.values[self.beta] += k;
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxCertificate {
    pub beta: usize,
    pub bound: u64,
    /// Family member `f_k` with `f_k(β) ≥ bound`.
    pub k: u64,
    pub index_at_beta: u64,
    /// `1/f_k(β)`, at most `1/bound`: every `x ∈ □_{f_k}` has `|x_β|` below it.
    #[serde(serialize_with = "crate::poly::serialize_rational")]
    pub radius: Rational,
}

/// Exhibits the member of the family that forces `|x_β| < 1/bound` on its
/// box, the finite form of `x ∈ ⋂ □_f ⟹ x_β = 0`.
pub fn box_unbounded_cert(family: &BoxFamily, bound: u64) -> Result<BoxCertificate, OrderError> {
    let start = family.member(0).at(family.beta).ok_or(OrderError::Undefined { index: 0, coord: family.beta })?;
    if start == 0 {
        return Err(OrderError::ZeroIndex(family.beta));
    }
    let k = bound.saturating_sub(start);
    let index_at_beta = start + k;
    let radius = Rational::new(1.into(), index_at_beta.into());
    debug_assert!(radius <= Rational::new(1.into(), bound.max(1).into()) || bound == 0);
    Ok(BoxCertificate { beta: family.beta, bound, k, index_at_beta, radius })
}

/// All posets on at most `max_n` elements up to isomorphism, each given with
/// a natural labelling (`i ≤ j` only if `i ≤ j` as integers).
pub fn all_posets(max_n: usize) -> Vec<FinitePoset> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        let perms = permutations(n);
        for mask in 0u32..(1 << pairs.len()) {
            let mut leq = vec![vec![false; n]; n];
            for (i, row) in leq.iter_mut().enumerate() {
                row[i] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    leq[i][j] = true;
                }
            }
            let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(leq[i][j] && leq[j][k]) || leq[i][k])));
            if !transitive {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| (0..n).flat_map(|i| (0..n).map(|j| leq[p[i]][p[j]]).collect::<Vec<_>>()).collect::<Vec<_>>())
                .max()
                .expect("at least one permutation");
            if seen.insert(canon) {
                out.push(FinitePoset::from_matrix((0..n).map(|i| i.to_string()).collect(), leq).expect("valid order"));
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Rational vectors with entries in `grid` at coordinates `0..dim`.
pub fn rational_grid(dim: usize, grid: &[Rational]) -> Vec<BTreeMap<usize, Rational>> {
    let mut out = vec![BTreeMap::new()];
    for beta in 0..dim {
        let mut next = Vec::with_capacity(out.len() * grid.len());
        for x in &out {
            for g in grid {
                let mut y = x.clone();
                if !g.is_zero() {
                    y.insert(beta, g.clone());
                }
                next.push(y);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn subsets_poset(k: usize) -> FinitePoset {
        FinitePoset::from_fn(1 << k, |a, b| a & b == a).unwrap()
    }

    #[test]
    fn validation_rejects_cycles() {
        assert!(FinitePoset::from_pairs(2, &[(0, 1), (1, 0)]).is_err());
        let p = FinitePoset::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.le(0, 2));
    }

    #[test]
    fn identity_and_constant_maps() {
        let p = subsets_poset(2);
        let id: Vec<Option<usize>> = (0..4).map(Some).collect();
        assert!(check_monotone(&id, &p, &p).unwrap() && check_cofinal(&id, &p, &p).unwrap());
        let c = FinitePoset::chain(3);
        let konst = vec![Some(1); 3];
        assert!(check_monotone(&konst, &c, &c).unwrap());
        assert!(!check_cofinal(&konst, &c, &c).unwrap());
        assert!(matches!(check_monotone(&[Some(0), None, Some(1)], &c, &c), Err(OrderError::PartialMap(_))));
    }

    #[test]
    fn semilattice_examples() {
        let v: BTreeMap<u8, BTreeSet<u8>> = [(1, [1, 2].into()), (2, [2, 3].into())].into();
        assert_eq!(semilattice_extend(&v, &[1].into()).unwrap(), [1, 2].into());
        assert_eq!(semilattice_extend(&v, &[1, 2].into()).unwrap(), [2].into());
        assert_eq!(semilattice_extend(&v, &BTreeSet::new()), Err(OrderError::EmptyIndexSet));
    }

    #[test]
    fn semilattice_map_is_monotone_and_cofinal() {
        let v: BTreeMap<usize, BTreeSet<u8>> = [(0, [1, 2, 3].into()), (1, [2, 3, 4].into()), (2, [3, 5].into())].into();
        let index_sets: Vec<BTreeSet<usize>> =
            (1u32..8).map(|m| (0..3).filter(|i| m & (1 << i) != 0).collect()).collect();
        let images: Vec<BTreeSet<u8>> = index_sets.iter().map(|s| semilattice_extend(&v, s).unwrap()).collect();
        let family: Vec<BTreeSet<u8>> = images.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let d = FinitePoset::from_fn(7, |a, b| index_sets[a].is_subset(&index_sets[b])).unwrap();
        let e = FinitePoset::from_fn(family.len(), |a, b| family[a].is_superset(&family[b])).unwrap();
        let f: Vec<Option<usize>> = images.iter().map(|s| family.iter().position(|t| t == s)).collect();
        assert!(check_monotone(&f, &d, &e).unwrap());
        assert!(check_cofinal(&f, &d, &e).unwrap());
    }

    #[test]
    fn branch_canonical_form() {
        assert_eq!(Branch::parse("0(0)").unwrap(), Branch::parse("(0)").unwrap());
        assert_eq!(Branch::parse("1(0101)").unwrap(), Branch::parse("(10)").unwrap());
        assert_eq!(Branch::parse("(10)").unwrap().to_string(), "(10)");
        assert!(Branch::parse("01()").is_err());
        let b = Branch::parse("1(0)").unwrap();
        assert_eq!((b.prefix_code(0), b.prefix_code(1), b.prefix_code(2)), (0, 2, 5));
    }

    #[test]
    fn ad_join_examples() {
        let zeros = Branch::parse("(0)").unwrap();
        let ones = Branch::parse("(1)").unwrap();
        let alt = Branch::parse("(01)").unwrap();
        let d = 6;
        assert!(ad_compare(std::slice::from_ref(&zeros), &[zeros.clone(), ones.clone()], d).unwrap());
        assert!(!ad_compare(std::slice::from_ref(&zeros), std::slice::from_ref(&ones), d).unwrap());
        assert!(!ad_compare(std::slice::from_ref(&ones), std::slice::from_ref(&zeros), d).unwrap());
        assert!(!ad_compare(&[zeros.clone(), alt.clone()], &[zeros.clone(), ones.clone()], d).unwrap());
        let js = ad_join(std::slice::from_ref(&zeros), d).unwrap();
        let jt = ad_join(&[ones], d).unwrap();
        assert_eq!(js.intersection(&jt).count(), 1);
        assert!(matches!(ad_join(&[zeros, alt], 2), Err(OrderError::DepthTooSmall { .. })));
    }

    #[test]
    fn tukey_examples() {
        let c = FinitePoset::chain(4);
        let g: Vec<usize> = (0..4).collect();
        let f = tukey_to_monotone(&g, &c).unwrap();
        assert_eq!(f, vec![1, 2, 3, 3]);
        assert!(reaches_every_level(&f, 4));

        let d = subsets_poset(4);
        let g: Vec<usize> = (0..5).map(|eta| (1 << eta) - 1).collect();
        let f = tukey_to_monotone(&g, &d).unwrap();
        let fo: Vec<Option<usize>> = f.iter().map(|&v| Some(v)).collect();
        assert!(check_monotone(&fo, &d, &FinitePoset::chain(5)).unwrap());
        assert!(tukey_certificate(&g, &d) && reaches_every_level(&f, 5));
        for (a, &v) in f.iter().enumerate() {
            let prefix = (0..4).take_while(|i| a & (1 << i) != 0).count();
            assert_eq!(v, (prefix + 1).min(4));
        }

        let f = tukey_to_monotone(&[2; 4], &d).unwrap();
        assert_eq!(f.iter().collect::<BTreeSet<_>>().len(), 2);
        assert!(!reaches_every_level(&f, 4) && !tukey_certificate(&[2; 4], &d));
    }

    #[test]
    fn poset_counts_up_to_isomorphism() {
        let counts: Vec<usize> = (0..=5).map(|n| all_posets(5).iter().filter(|p| p.len() == n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn diagonal_examples() {
        let a = [FnSeq::finite(vec![0, 1]), FnSeq::finite(vec![2, 0])];
        let w = diagonal_witness(&a).unwrap();
        assert_eq!(w.z, FnSeq::finite(vec![1, 1]));
        assert!(!w.z.le(&a[0]) && !w.z.le(&a[1]));
        let zeros = vec![FnSeq::finite(vec![0; 3]); 3];
        assert_eq!(diagonal_witness(&zeros).unwrap().z, FnSeq::finite(vec![1; 3]));
        assert_eq!(diagonal_witness(&[FnSeq::finite(vec![5])]).unwrap().z, FnSeq::finite(vec![6]));
    }

    #[test]
    fn box_examples() {
        let f = FnSeq::finite(vec![1, 2, 4]);
        let x: BTreeMap<usize, Rational> = [(1, r(2, 5)), (2, r(1, 10))].into();
        assert!(box_member(&f, &x).unwrap());
        let y: BTreeMap<usize, Rational> = [(2, r(1, 4))].into();
        assert!(!box_member(&f, &y).unwrap());
        assert_eq!(box_member(&FnSeq::finite(vec![0]), &x), Err(OrderError::ZeroIndex(0)));
        let fam = BoxFamily { base: FnSeq::finite(vec![1, 1]), beta: 0 };
        let cert = box_unbounded_cert(&fam, 1000).unwrap();
        assert_eq!(cert.radius, r(1, 1000));
        let fk = fam.member(cert.k);
        assert!(!box_member(&fk, &[(0, r(1, 1000))].into()).unwrap());
        assert!(box_member(&fk, &[(0, r(1, 1001))].into()).unwrap());
    }

    #[test]
    fn fnseq_order_and_join() {
        let a = FnSeq::new(vec![1, 2], Some(0));
        let b = FnSeq::new(vec![1, 3, 4], Some(2));
        assert!(a.le(&b) && !b.le(&a));
        assert_eq!(a.join(&b), FnSeq::new(vec![1, 3, 4], Some(2)));
        assert!(r(0, 1).is_zero());
    }
}
