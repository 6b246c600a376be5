//! Fixed inputs shared by the benchmarks.

use omegabase::group_topology::{all_words, v_phi, PhiMap, SubsetSpec};
use omegabase::FieldElement;

/// A pair of tower elements of height 3 with nontrivial denominators.
pub fn field_pair() -> (FieldElement, FieldElement) {
    let a = "(a0 + a1^2 - 3/7*a2) / (1 + a0*a1 - a2^2)".parse().expect("literal");
    let b = "(2 - a0^3 + a1*a2) / (a1 + 5*a0^2*a2 - 1)".parse().expect("literal");
    (a, b)
}

/// Neighbourhood factors `V_Φ` for a constant `Φ` conjugated over a support.
pub fn sym_factors() -> Vec<SubsetSpec> {
    let set = |ws: &[&str]| ws.iter().map(|w| w.parse().expect("word")).collect::<SubsetSpec>();
    let support = set(&["e", "a", "b^-1"]);
    [["a b"].as_slice(), &["b", "a^-1 b"], &["a a"]]
        .iter()
        .map(|ws| v_phi(&PhiMap::constant(set(ws)), &support))
        .collect()
}

pub fn sample_words() -> Vec<omegabase::ReducedWord> {
    all_words(2, 4)
}
