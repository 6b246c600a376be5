//! Exact checks of the containment lemmas for the neighbourhoods
//! `sym⟨V_{Φ_n}⟩` on finite truncations of the free group, plus the random
//! configurations the property suites draw from.
//!
//! Every check returns the number of containment instances it verified, or a
//! description of the first counterexample.

use rand::seq::SliceRandom;
use rand::Rng;

use super::sym::{sym_set, v_phi};
use super::words::{all_words, PhiMap, ReducedWord, SubsetSpec};

type Check = Result<usize, String>;

/// Random word of length at most `max_len` over `rank` generators.
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> ReducedWord {
    let len = rng.gen_range(0..=max_len);
    let mut letters = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(1..=rank as i32);
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    ReducedWord::from_letters(&letters)
}

pub fn random_subset<R: Rng>(rng: &mut R, rank: usize, max_size: usize, max_len: usize) -> SubsetSpec {
    let size = rng.gen_range(1..=max_size);
    (0..size).map(|_| random_word(rng, rank, max_len)).collect()
}

/// Conjugator set: the identity plus up to `max_size - 1` short words.
pub fn random_support<R: Rng>(rng: &mut R, rank: usize, max_size: usize) -> SubsetSpec {
    let mut s: SubsetSpec = [ReducedWord::identity()].into();
    let extra = rng.gen_range(0..max_size);
    while s.len() < extra + 1 {
        s.insert(random_word(rng, rank, 1));
    }
    s
}

pub fn random_phi<R: Rng>(rng: &mut R, rank: usize, keys: &[ReducedWord]) -> PhiMap {
    let mut phi = PhiMap::constant(random_subset(rng, rank, 3, 2));
    for k in keys {
        if rng.gen_bool(0.5) {
            phi.exceptions.insert(k.clone(), random_subset(rng, rank, 3, 2));
        }
    }
    phi
}

/// `Φ_1 ⊇ Φ_2 ⊇ ... ⊇ Φ_n` pointwise, built from the last map outwards by
/// adding elements.
pub fn random_monotone_phis<R: Rng>(rng: &mut R, rank: usize, n: usize, keys: &[ReducedWord]) -> Vec<PhiMap> {
    let small = |rng: &mut R| {
        let mut s = random_subset(rng, rank, 2, 2);
        while s.len() > 1 && rng.gen_bool(0.5) {
            let first = s.iter().next().cloned().expect("nonempty");
            s.remove(&first);
        }
        s
    };
    let mut last = PhiMap::constant(small(rng));
    for k in keys {
        if rng.gen_bool(0.5) {
            last.exceptions.insert(k.clone(), small(rng));
        }
    }
    let mut out = vec![last];
    for _ in 1..n {
        let prev = out.last().expect("nonempty");
        let grow = |s: &SubsetSpec, rng: &mut R| {
            let mut s = s.clone();
            if s.len() < 3 && rng.gen_bool(0.4) {
                s.insert(random_word(rng, rank, 2));
            }
            s
        };
        let default = grow(&prev.default, rng);
        let mut exceptions = std::collections::BTreeMap::new();
        for (k, v) in &prev.exceptions {
            let grown = if rng.gen_bool(0.5) { grow(v, rng) } else { v.clone() };
            exceptions.insert(k.clone(), grown);
        }
        out.push(PhiMap { default, exceptions });
    }
    out.reverse();
    out
}

fn v_sets(phis: &[PhiMap], support: &SubsetSpec) -> Vec<SubsetSpec> {
    phis.iter().map(|p| v_phi(p, support)).collect()
}

/// `w ∈ sym⟨V_{Φ_n}⟩ ⟺ w⁻¹ ∈ sym⟨V_{Φ_n}⟩` for all words up to `max_len`.
pub fn check_symmetry(phis: &[PhiMap], support: &SubsetSpec, horizon: usize, max_len: usize) -> Check {
    let s = sym_set(&v_sets(phis, support), horizon, max_len).map_err(|e| e.to_string())?;
    for w in &s {
        if !s.contains(&w.inverse()) {
            return Err(format!("{w} is a member but its inverse is not"));
        }
    }
    Ok(s.len())
}

/// For pointwise decreasing `Φ_n`: `u, v ∈ sym_N⟨V_{Φ_{2n}}⟩` implies
/// `uv ∈ sym_{2N}⟨V_{Φ_n}⟩`. Needs `2 * horizon` maps.
pub fn check_squaring(phis: &[PhiMap], support: &SubsetSpec, horizon: usize, max_len: usize) -> Check {
    if phis.len() < 2 * horizon {
        return Err(format!("need {} maps, got {}", 2 * horizon, phis.len()));
    }
    if let Some(n) = (1..phis.len()).find(|&n| !phis[n].le(&phis[n - 1])) {
        return Err(format!("maps are not pointwise decreasing at {}", n + 1));
    }
    let all = v_sets(&phis[..2 * horizon], support);
    let even: Vec<SubsetSpec> = all.iter().skip(1).step_by(2).cloned().collect();
    let u = sym_set(&even, horizon, max_len).map_err(|e| e.to_string())?;
    let target = sym_set(&all, 2 * horizon, 2 * max_len).map_err(|e| e.to_string())?;
    let mut cases = 0;
    for x in &u {
        for y in &u {
            let p = x.mul(y);
            if !target.contains(&p) {
                return Err(format!("({x}) * ({y}) = {p} escapes"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// `h⁻¹ sym⟨V_{Φ^h_n}⟩ h ⊆ sym⟨V_{Φ_n}⟩`, where the left side uses the
/// conjugators `support` and the right side their translates `support · h`.
pub fn check_conjugation(
    phis: &[PhiMap],
    h: &ReducedWord,
    support: &SubsetSpec,
    horizon: usize,
    max_len: usize,
) -> Check {
    let translated: Vec<PhiMap> = phis.iter().map(|p| p.right_translate(h)).collect();
    let shifted: SubsetSpec = support.iter().map(|g| g.mul(h)).collect();
    let lhs = sym_set(&v_sets(&translated, support), horizon, max_len).map_err(|e| e.to_string())?;
    let rhs = sym_set(&v_sets(phis, &shifted), horizon, max_len + 2 * h.len()).map_err(|e| e.to_string())?;
    for u in &lhs {
        let c = u.conjugate_by(h);
        if !rhs.contains(&c) {
            return Err(format!("h = {h}: conjugate of {u} is {c}, not a member"));
        }
    }
    Ok(lhs.len())
}

/// Decreasing chain `V_n = { w : |w| ≤ r_n, exponent sums ≡ 0 mod m_n }`.
#[derive(Clone, Debug)]
pub struct BallChain {
    pub radii: Vec<usize>,
    /// Per level, one modulus per generator.
    pub moduli: Vec<Vec<i64>>,
}

impl BallChain {
    pub fn random<R: Rng>(rng: &mut R, rank: usize, levels: usize) -> Self {
        let mut radii = vec![rng.gen_range(4..=8)];
        let mut moduli = vec![vec![1i64; rank]];
        for _ in 1..levels {
            radii.push(*radii.last().expect("nonempty") / 2);
            let prev = moduli.last().expect("nonempty").clone();
            moduli.push(prev.iter().map(|m| m * [1, 1, 2, 3].choose(rng).copied().expect("nonempty")).collect());
        }
        BallChain { radii, moduli }
    }

    pub fn contains(&self, n: usize, w: &ReducedWord) -> bool {
        w.len() <= self.radii[n]
            && self.moduli[n].iter().enumerate().all(|(g, &m)| w.exponent_sum(g).rem_euclid(m) == 0)
    }

    pub fn level(&self, n: usize, rank: usize) -> SubsetSpec {
        all_words(rank, self.radii[n]).into_iter().filter(|w| self.contains(n, w)).collect()
    }
}

/// Verifies `V_n⁻¹ = V_n` and `V_{n+1}² ⊆ V_n`, then
/// `sym⟨V_n⟩_{n = k+2}^{k+1+horizon} ⊆ V_k` on words up to `max_len`.
pub fn check_birkhoff_kakutani(chain: &BallChain, rank: usize, k: usize, horizon: usize, max_len: usize) -> Check {
    let levels = chain.radii.len();
    let mut cases = 0;
    for n in 1..levels {
        let v = chain.level(n, rank);
        for x in &v {
            if !chain.contains(n, &x.inverse()) {
                return Err(format!("level {n} is not symmetric at {x}"));
            }
            for y in &v {
                if !chain.contains(n - 1, &x.mul(y)) {
                    return Err(format!("level {n} squared escapes level {} at ({x})({y})", n - 1));
                }
                cases += 1;
            }
        }
    }
    let top = (k + 2 + horizon).min(levels);
    if k + 2 >= top {
        return Ok(cases);
    }
    let bs: Vec<SubsetSpec> = (k + 2..top).map(|n| chain.level(n, rank)).collect();
    let s = sym_set(&bs, bs.len(), max_len).map_err(|e| e.to_string())?;
    for w in &s {
        if !chain.contains(k, w) {
            return Err(format!("{w} lies in the symmetric product but not in level {k}"));
        }
        cases += 1;
    }
    Ok(cases)
}

/// A filter base on words indexed by pairs `(φ(0), φ(1))`:
/// `V_n(φ) = { w : |w| ≤ max(c_n - φ(0), 0), exponent sum of a ≡ 0 mod p_n^φ(1) }`.
/// Larger indices give smaller sets.
#[derive(Clone, Debug)]
pub struct FilterPresentation {
    pub caps: Vec<usize>,
    pub primes: Vec<i64>,
}

impl FilterPresentation {
    pub fn random<R: Rng>(rng: &mut R, count: usize) -> Self {
        FilterPresentation {
            caps: (0..count).map(|_| rng.gen_range(2..=6)).collect(),
            primes: (0..count).map(|_| *[2, 3].choose(rng).expect("nonempty")).collect(),
        }
    }

    fn member(&self, n: usize, phi: &[u32; 2], w: &ReducedWord) -> bool {
        let cap = self.caps[n].saturating_sub(phi[0] as usize);
        let modulus = self.primes[n].pow(phi[1].min(8));
        w.len() <= cap && w.exponent_sum(0).rem_euclid(modulus) == 0
    }

    /// Membership in `V(f) = ⋃_n V_n(f_n)`.
    pub fn union_member(&self, f: &[[u32; 2]], w: &ReducedWord) -> bool {
        (0..self.caps.len()).any(|n| self.member(n, &f[n], w))
    }
}

/// `f ≤ g` pointwise implies `V(g) ⊆ V(f)` on every word up to `max_len`.
pub fn check_filter_base_monotone(p: &FilterPresentation, f: &[[u32; 2]], g: &[[u32; 2]], max_len: usize) -> Check {
    let le = f.iter().zip(g).all(|(a, b)| a[0] <= b[0] && a[1] <= b[1]);
    if !le {
        return Err("index pair is not ordered".into());
    }
    let words = all_words(2, max_len);
    for w in &words {
        if p.union_member(g, w) && !p.union_member(f, w) {
            return Err(format!("{w} is in V(g) but not in V(f)"));
        }
    }
    Ok(words.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monotone_generator_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let keys: Vec<ReducedWord> = ["a", "b"].iter().map(|s| s.parse().unwrap()).collect();
        for _ in 0..50 {
            let phis = random_monotone_phis(&mut rng, 2, 4, &keys);
            for n in 1..phis.len() {
                assert!(phis[n].le(&phis[n - 1]));
            }
        }
    }

    #[test]
    fn lemmas_hold_on_a_few_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let support = random_support(&mut rng, 2, 3);
            let keys: Vec<ReducedWord> = support.iter().cloned().collect();
            let phis: Vec<PhiMap> = (0..4).map(|_| random_phi(&mut rng, 2, &keys)).collect();
            check_symmetry(&phis, &support, 4, 6).unwrap();
            let h = random_word(&mut rng, 2, 2);
            check_conjugation(&phis, &h, &support, 4, 6).unwrap();
            let mono = random_monotone_phis(&mut rng, 2, 4, &keys);
            check_squaring(&mono, &support, 2, 6).unwrap();
            let chain = BallChain::random(&mut rng, 2, 5);
            check_birkhoff_kakutani(&chain, 2, 0, 3, 6).unwrap();
        }
    }

    #[test]
    fn squaring_check_detects_non_monotone_maps() {
        let s = |v: &[&str]| v.iter().map(|x| x.parse::<ReducedWord>().unwrap()).collect::<SubsetSpec>();
        let phis = vec![PhiMap::constant(s(&["a"])), PhiMap::constant(s(&["b"]))];
        assert!(check_squaring(&phis, &s(&["e"]), 1, 4).is_err());
    }
}
