use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::words::{inverse_set, PhiMap, ReducedWord, SubsetSpec};
use super::GroupError;

/// Largest number of factors accepted by the product enumerations.
pub const FACTOR_CAP: usize = 8;

fn check_cap(n: usize) -> Result<(), GroupError> {
    if n > FACTOR_CAP {
        return Err(GroupError::CapExceeded { len: n, cap: FACTOR_CAP });
    }
    Ok(())
}

/// `{ b_1 ⋯ b_n : b_i ∈ B_i }` for the sets in the given order.
pub fn product_set(bs: &[SubsetSpec]) -> Result<SubsetSpec, GroupError> {
    check_cap(bs.len())?;
    let mut acc: SubsetSpec = [ReducedWord::identity()].into();
    for b in bs {
        acc = acc.iter().flat_map(|p| b.iter().map(move |x| p.mul(x))).collect();
    }
    Ok(acc)
}

/// Answer of a truncated membership query. `Yes` is definitive; `NoUpTo`
/// only excludes factorizations with at most `horizon` factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum SymAnswer {
    Yes {
        n: usize,
        /// `σ(1), ..., σ(n)`, 1-based.
        permutation: Vec<usize>,
        factors: Vec<ReducedWord>,
    },
    NoUpTo { horizon: usize },
}

impl SymAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, SymAnswer::Yes { .. })
    }
}

fn max_len(b: &SubsetSpec) -> usize {
    b.iter().map(ReducedWord::len).max().unwrap_or(0)
}

/// Membership of `w` in `⋃_{n ≤ N} ⋃_σ B_σ(1) ⋯ B_σ(n)`; the empty product
/// (`n = 0`) contributes the identity. Nonempty factorizations are tried
/// first, shortest `n` first.
pub fn sym_member(w: &ReducedWord, bs: &[SubsetSpec], horizon: usize) -> Result<SymAnswer, GroupError> {
    check_cap(horizon)?;
    let horizon = horizon.min(bs.len());
    let lens: Vec<usize> = bs.iter().map(max_len).collect();
    for n in 1..=horizon {
        let full = (1u32 << n) - 1;
        let mut dead: HashSet<(u32, ReducedWord)> = HashSet::new();
        let mut path = Vec::with_capacity(n);
        if search(w.clone(), 0, full, bs, &lens, &mut dead, &mut path) {
            let (permutation, factors) = path.into_iter().map(|(i, b)| (i + 1, b)).unzip();
            return Ok(SymAnswer::Yes { n, permutation, factors });
        }
    }
    if w.is_identity() {
        return Ok(SymAnswer::Yes { n: 0, permutation: vec![], factors: vec![] });
    }
    Ok(SymAnswer::NoUpTo { horizon })
}

/// Depth-first search for `rest = b_i ⋯` using the sets outside `used`,
/// remembering failed `(used, rest)` states.
fn search(
    rest: ReducedWord,
    used: u32,
    full: u32,
    bs: &[SubsetSpec],
    lens: &[usize],
    dead: &mut HashSet<(u32, ReducedWord)>,
    path: &mut Vec<(usize, ReducedWord)>,
) -> bool {
    if used == full {
        return rest.is_identity();
    }
    let budget: usize = (0..lens.len()).filter(|&i| full & !used & (1 << i) != 0).map(|i| lens[i]).sum();
    if rest.len() > budget || dead.contains(&(used, rest.clone())) {
        return false;
    }
    for i in 0..bs.len() {
        let bit = 1u32 << i;
        if full & bit == 0 || used & bit != 0 {
            continue;
        }
        for b in &bs[i] {
            path.push((i, b.clone()));
            if search(b.inverse().mul(&rest), used | bit, full, bs, lens, dead, path) {
                return true;
            }
            path.pop();
        }
    }
    dead.insert((used, rest));
    false
}

/// Checks a `Yes` certificate against the sets independently of the search.
pub fn verify_factorization(w: &ReducedWord, bs: &[SubsetSpec], answer: &SymAnswer) -> bool {
    let SymAnswer::Yes { n, permutation, factors } = answer else {
        return false;
    };
    let mut sorted = permutation.clone();
    sorted.sort_unstable();
    if *n > bs.len() || sorted != (1..=*n).collect::<Vec<_>>() || factors.len() != *n {
        return false;
    }
    let in_sets = permutation.iter().zip(factors).all(|(&i, f)| bs[i - 1].contains(f));
    let product = factors.iter().fold(ReducedWord::identity(), |acc, f| acc.mul(f));
    in_sets && product == *w
}

/// All members of length at most `max_len` of the symmetric product of the
/// first `horizon` sets, including the identity.
pub fn sym_set(bs: &[SubsetSpec], horizon: usize, max_len: usize) -> Result<SubsetSpec, GroupError> {
    check_cap(horizon)?;
    let n = horizon.min(bs.len());
    let lens: Vec<usize> = bs[..n].iter().map(self::max_len).collect();
    let all = (1u32 << n) - 1;
    // states[mask]: products, in any order, of one element from each set in mask
    let mut states: HashMap<u32, HashSet<ReducedWord>> = HashMap::new();
    states.insert(0, [ReducedWord::identity()].into());
    let mut masks: Vec<u32> = (0..=all).collect();
    masks.sort_by_key(|m| m.count_ones());
    for &mask in &masks {
        let Some(cur) = states.get(&mask).cloned() else { continue };
        for i in 0..n {
            let bit = 1u32 << i;
            if mask & bit != 0 {
                continue;
            }
            let next = mask | bit;
            let budget = max_len + (0..n).filter(|&j| all & !next & (1 << j) != 0).map(|j| lens[j]).sum::<usize>();
            let entry = states.entry(next).or_default();
            for q in &cur {
                for b in &bs[i] {
                    let p = q.mul(b);
                    if p.len() <= budget {
                        entry.insert(p);
                    }
                }
            }
        }
    }
    let mut out: SubsetSpec = [ReducedWord::identity()].into();
    for k in 1..=n {
        if let Some(s) = states.get(&((1u32 << k) - 1)) {
            out.extend(s.iter().filter(|w| w.len() <= max_len).cloned());
        }
    }
    Ok(out)
}

/// `⋃_{g ∈ support} g⁻¹ (Φ(g) ∪ Φ(g)⁻¹) g`.
pub fn v_phi(phi: &PhiMap, support: &SubsetSpec) -> SubsetSpec {
    let mut out = SubsetSpec::new();
    for g in support {
        let s = phi.eval(g);
        let gi = g.inverse();
        for w in s.iter().chain(inverse_set(s).iter()) {
            out.insert(gi.mul(w).mul(g));
        }
    }
    out
}

/// `{ x⁻¹y : (x, y) ∈ V } ∪ { xy⁻¹ : (x, y) ∈ V }` with points as generators.
pub fn i_of_entourage(pairs: impl IntoIterator<Item = (usize, usize)>) -> SubsetSpec {
    let mut out = SubsetSpec::new();
    for (x, y) in pairs {
        let (gx, gy) = (ReducedWord::generator(x), ReducedWord::generator(y));
        out.insert(gx.inverse().mul(&gy));
        out.insert(gx.mul(&gy.inverse()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    fn set(v: &[&str]) -> SubsetSpec {
        v.iter().map(|x| w(x)).collect()
    }

    #[test]
    fn product_set_examples() {
        assert_eq!(product_set(&[set(&["a"]), set(&["b"])]).unwrap(), set(&["a b"]));
        assert_eq!(product_set(&[set(&["a b"]), set(&["b^-1"])]).unwrap(), set(&["a"]));
        let pm = set(&["a", "a^-1"]);
        assert_eq!(product_set(&[pm.clone(), pm]).unwrap(), set(&["a a", "e", "a^-1 a^-1"]));
        assert!(matches!(product_set(&vec![set(&["a"]); 9]), Err(GroupError::CapExceeded { .. })));
    }

    #[test]
    fn sym_member_examples() {
        let bs = [set(&["a"]), set(&["b"])];
        let ans = sym_member(&w("b a"), &bs, 2).unwrap();
        assert_eq!(ans, SymAnswer::Yes { n: 2, permutation: vec![2, 1], factors: vec![w("b"), w("a")] });
        assert!(verify_factorization(&w("b a"), &bs, &ans));

        let bs = [set(&["e", "a"])];
        let ans = sym_member(&w("e"), &bs, 1).unwrap();
        assert_eq!(ans, SymAnswer::Yes { n: 1, permutation: vec![1], factors: vec![w("e")] });

        let bs = [set(&["a"]), set(&["a"])];
        assert_eq!(sym_member(&w("a a a"), &bs, 2).unwrap(), SymAnswer::NoUpTo { horizon: 2 });
        assert!(sym_member(&w("e"), &bs, 0).unwrap().is_yes());
    }

    #[test]
    fn sym_set_agrees_with_member_queries() {
        let bs = [set(&["a", "b^-1"]), set(&["b a"]), set(&["a^-1", "b"])];
        let s = sym_set(&bs, 3, 4).unwrap();
        for x in super::super::words::all_words(2, 4) {
            let ans = sym_member(&x, &bs, 3).unwrap();
            assert_eq!(s.contains(&x), ans.is_yes(), "{x}");
            if ans.is_yes() {
                assert!(verify_factorization(&x, &bs, &ans));
            }
        }
    }

    #[test]
    fn v_phi_examples() {
        let sq = PhiMap::constant(set(&["a a"]));
        assert_eq!(v_phi(&sq, &set(&["e", "a"])), set(&["a a", "a^-1 a^-1"]));
        assert_eq!(v_phi(&PhiMap::constant(set(&["e"])), &set(&["a", "b"])), set(&["e"]));
        let phi = PhiMap::constant(set(&["a"]));
        assert_eq!(
            v_phi(&phi, &set(&["e", "b"])),
            set(&["b^-1 a b", "b^-1 a^-1 b", "a", "a^-1"])
        );
    }

    #[test]
    fn i_of_entourage_examples() {
        assert_eq!(i_of_entourage([(0, 0), (1, 1)]), set(&["e"]));
        let v = i_of_entourage([(0, 0), (1, 1), (0, 1), (1, 0)]);
        assert_eq!(v, set(&["e", "a^-1 b", "b^-1 a", "a b^-1", "b a^-1"]));
    }
}
