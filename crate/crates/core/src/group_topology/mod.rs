//! Neighbourhoods of the identity in free and free abelian groups given by
//! symmetric products of conjugation unions, with truncated but exact
//! membership tests. A `Yes` answer is definitive; a `NoUpTo` answer only
//! rules out factorizations with at most `n` factors.

mod abelian;
pub mod lemmas;
mod sym;
mod words;

use thiserror::Error;

pub use abelian::{
    abelian_sum_member, i_of_entourage_abelian, sin_base_member, sin_base_member_abelian, AbelianSet, AbelianWord,
    SumAnswer,
};
pub use sym::{
    i_of_entourage, product_set, sym_member, sym_set, v_phi, verify_factorization, SymAnswer, FACTOR_CAP,
};
pub use words::{
    all_words, conjugate_set, inverse_set, reduce, Alphabet, Letter, PhiMap, ReducedWord, SubsetSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("{len} factors exceed the cap of {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("map {0} of the first sequence is not pointwise below the second")]
    OrderViolated(usize),
    #[error("sequences have different lengths: {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("{0}")]
    Parse(String),
}

/// Checks that `sym⟨V_{Φ_n}⟩ ⊆ sym⟨V_{Ψ_n}⟩` on every sampled word: each
/// word accepted under `phis` must be accepted under `psis` at the same
/// horizon. Requires `Φ_n ≤ Ψ_n` pointwise.
pub fn rd_monotone_check(
    phis: &[PhiMap],
    psis: &[PhiMap],
    samples: &[ReducedWord],
    horizon: usize,
    support: &SubsetSpec,
) -> Result<bool, GroupError> {
    if phis.len() != psis.len() {
        return Err(GroupError::LengthMismatch(phis.len(), psis.len()));
    }
    if let Some(n) = phis.iter().zip(psis).position(|(a, b)| !a.le(b)) {
        return Err(GroupError::OrderViolated(n + 1));
    }
    let small: Vec<SubsetSpec> = phis.iter().map(|p| v_phi(p, support)).collect();
    let large: Vec<SubsetSpec> = psis.iter().map(|p| v_phi(p, support)).collect();
    for w in samples {
        if sym_member(w, &small, horizon)?.is_yes() && !sym_member(w, &large, horizon)?.is_yes() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[&str]) -> SubsetSpec {
        v.iter().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn monotone_check_examples() {
        let support = set(&["e", "b"]);
        let words = all_words(2, 6);
        let phi = vec![PhiMap::constant(set(&["a"])); 2];
        assert!(rd_monotone_check(&phi, &phi, &words, 2, &support).unwrap());

        let psi = vec![PhiMap::constant(set(&["a", "a a"])); 2];
        assert!(rd_monotone_check(&phi, &psi, &words, 2, &support).unwrap());

        let mut bumped = phi.clone();
        bumped[0].exceptions.insert("b".parse().unwrap(), set(&["a", "b"]));
        assert!(rd_monotone_check(&phi, &bumped, &words, 2, &support).unwrap());

        assert_eq!(rd_monotone_check(&psi, &phi, &words, 2, &support), Err(GroupError::OrderViolated(1)));
    }
}
