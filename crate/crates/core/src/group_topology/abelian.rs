use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::sym::{sym_member, v_phi, SymAnswer};
use super::words::{PhiMap, ReducedWord, SubsetSpec};
use super::GroupError;

/// Element of the free abelian group: integer coefficients per generator,
/// trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct AbelianWord(Vec<i64>);

impl AbelianWord {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        AbelianWord(coeffs)
    }

    pub fn zero() -> Self {
        AbelianWord(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        let mut v = vec![0; g + 1];
        v[g] = 1;
        AbelianWord(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let at = |v: &Vec<i64>, i: usize| v.get(i).copied().unwrap_or(0);
        AbelianWord::new((0..n).map(|i| at(&self.0, i) + at(&o.0, i)).collect())
    }

    pub fn neg(&self) -> Self {
        AbelianWord(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// Image of a free-group word under abelianization.
    pub fn abelianize(w: &ReducedWord) -> Self {
        let mut v = vec![0i64; w.rank_used()];
        for &l in w.letters() {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        AbelianWord::new(v)
    }
}

impl fmt::Display for AbelianWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for AbelianWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbelianWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(AbelianWord::new(Vec::deserialize(d)?))
    }
}

pub type AbelianSet = BTreeSet<AbelianWord>;

/// Abelian image of `i(V)`: `{ y - x, x - y : (x, y) ∈ V }`.
pub fn i_of_entourage_abelian(pairs: impl IntoIterator<Item = (usize, usize)>) -> AbelianSet {
    let mut out = AbelianSet::new();
    for (x, y) in pairs {
        let d = AbelianWord::generator(y).sub(&AbelianWord::generator(x));
        out.insert(d.neg());
        out.insert(d);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum SumAnswer {
    /// `summands[n]` is the term taken from `±V_{n+1}`, or `None` if omitted.
    Yes { summands: Vec<Option<AbelianWord>> },
    NoUpTo { horizon: usize },
}

impl SumAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, SumAnswer::Yes { .. })
    }
}

/// Decides `w = v_1 + ... + v_N` with each `v_n ∈ V_n ∪ -V_n` or omitted,
/// by dynamic programming over reachable partial sums.
pub fn abelian_sum_member(w: &AbelianWord, vs: &[AbelianSet], horizon: usize) -> SumAnswer {
    let n = horizon.min(vs.len());
    let norms: Vec<u64> = vs[..n].iter().map(|v| v.iter().map(AbelianWord::l1_norm).max().unwrap_or(0)).collect();
    // layers[k]: partial sum after k sets -> (previous partial sum, summand)
    type Layer = HashMap<AbelianWord, (AbelianWord, Option<AbelianWord>)>;
    let mut layers: Vec<Layer> = Vec::with_capacity(n + 1);
    layers.push([(AbelianWord::zero(), (AbelianWord::zero(), None))].into());
    for k in 0..n {
        let budget: u64 = norms[k + 1..].iter().sum();
        let mut next = Layer::new();
        for s in layers[k].keys() {
            let mut push = |t: AbelianWord, v: Option<AbelianWord>| {
                if w.sub(&t).l1_norm() <= budget {
                    next.entry(t).or_insert_with(|| (s.clone(), v));
                }
            };
            push(s.clone(), None);
            for v in &vs[k] {
                push(s.add(v), Some(v.clone()));
                push(s.sub(v), Some(v.neg()));
            }
        }
        layers.push(next);
    }
    if !layers[n].contains_key(w) {
        return SumAnswer::NoUpTo { horizon: n };
    }
    let mut summands = vec![None; n];
    let mut cur = w.clone();
    for k in (1..=n).rev() {
        let (prev, v) = layers[k][&cur].clone();
        summands[k - 1] = v;
        cur = prev;
    }
    SumAnswer::Yes { summands }
}

/// Membership in the truncated small-invariant-neighbourhood base element
/// built from `V_1, ..., V_N` in the free group: the symmetric product of
/// the conjugation unions over `support`.
pub fn sin_base_member(
    w: &ReducedWord,
    vs: &[SubsetSpec],
    horizon: usize,
    support: &SubsetSpec,
) -> Result<SymAnswer, GroupError> {
    let bs: Vec<SubsetSpec> = vs.iter().map(|v| v_phi(&PhiMap::constant(v.clone()), support)).collect();
    sym_member(w, &bs, horizon)
}

/// Abelian counterpart: conjugation is trivial and the orders of summands
/// collapse.
pub fn sin_base_member_abelian(w: &AbelianWord, vs: &[AbelianSet], horizon: usize) -> SumAnswer {
    abelian_sum_member(w, vs, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn av(v: &[i64]) -> AbelianWord {
        AbelianWord::new(v.to_vec())
    }

    #[test]
    fn sin_examples() {
        let v1 = i_of_entourage_abelian([(0, 0), (1, 1), (0, 1), (1, 0)]);
        assert!(sin_base_member_abelian(&av(&[1, -1]), &[v1], 1).is_yes());
        let v1: AbelianSet = [av(&[1, -1])].into();
        assert_eq!(sin_base_member_abelian(&av(&[2]), std::slice::from_ref(&v1), 1), SumAnswer::NoUpTo { horizon: 1 });
        assert!(sin_base_member_abelian(&AbelianWord::zero(), &[v1], 0).is_yes());
    }

    #[test]
    fn certificate_sums_to_target() {
        let v1: AbelianSet = [av(&[1, -1])].into();
        let v2: AbelianSet = [av(&[0, 1, -1])].into();
        let ans = abelian_sum_member(&av(&[-1, 0, 1]), &[v1, v2], 2);
        let SumAnswer::Yes { summands } = ans else { panic!("expected a decomposition") };
        let total = summands.iter().flatten().fold(AbelianWord::zero(), |a, v| a.add(v));
        assert_eq!(total, av(&[-1, 0, 1]));
    }

    #[test]
    fn abelianization_of_commutator_is_zero() {
        let w: ReducedWord = "a b a^-1 b^-1".parse().unwrap();
        assert!(AbelianWord::abelianize(&w).is_zero());
        assert_eq!(AbelianWord::abelianize(&"b b a^-1".parse().unwrap()), av(&[-1, 2]));
    }

    #[test]
    fn free_sin_member_uses_conjugates() {
        let s = |v: &[&str]| v.iter().map(|x| x.parse::<ReducedWord>().unwrap()).collect::<SubsetSpec>();
        let vs = [s(&["a"])];
        let target: ReducedWord = "b^-1 a^-1 b".parse().unwrap();
        assert!(sin_base_member(&target, &vs, 1, &s(&["e", "b"])).unwrap().is_yes());
        assert!(!sin_base_member(&target, &vs, 1, &s(&["e"])).unwrap().is_yes());
    }
}
