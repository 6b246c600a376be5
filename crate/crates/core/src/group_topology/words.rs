use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GroupError;

/// A letter is `±(g + 1)` for generator id `g`; negative means inverse.
pub type Letter = i32;

/// A freely reduced word. Ordered shortlex, with `a < a⁻¹ < b < b⁻¹ < ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ReducedWord(Vec<Letter>);

fn letter_key(l: Letter) -> i32 {
    2 * (l.abs() - 1) + i32::from(l < 0)
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().map(|&l| letter_key(l)).cmp(other.0.iter().map(|&l| letter_key(l))))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Free reduction of a raw letter sequence over generators `0..rank`.
pub fn reduce(raw: &[(usize, bool)], rank: usize) -> Result<ReducedWord, GroupError> {
    let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
    for &(g, inverse) in raw {
        if g >= rank {
            return Err(GroupError::UnknownGenerator(g.to_string()));
        }
        let l = (g as Letter + 1) * if inverse { -1 } else { 1 };
        push_letter(&mut out, l);
    }
    Ok(ReducedWord(out))
}

fn push_letter(v: &mut Vec<Letter>, l: Letter) {
    if v.last() == Some(&-l) {
        v.pop();
    } else {
        v.push(l);
    }
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        ReducedWord(vec![g as Letter + 1])
    }

    /// Builds a word from letters, reducing as it goes.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            push_letter(&mut out, l);
        }
        ReducedWord(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        ReducedWord(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut cancel = 0;
        while cancel < self.0.len().min(rhs.0.len()) && self.0[self.0.len() - 1 - cancel] == -rhs.0[cancel] {
            cancel += 1;
        }
        let mut v = Vec::with_capacity(self.0.len() + rhs.0.len() - 2 * cancel);
        v.extend_from_slice(&self.0[..self.0.len() - cancel]);
        v.extend_from_slice(&rhs.0[cancel..]);
        ReducedWord(v)
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.inverse().mul(self).mul(g)
    }

    /// Largest generator id used, plus one.
    pub fn rank_used(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        let id = g as Letter + 1;
        self.0.iter().map(|&l| if l == id { 1 } else if l == -id { -1 } else { 0 }).sum()
    }

    pub fn parse_with(src: &str, alphabet: &Alphabet) -> Result<Self, GroupError> {
        let mut out = Vec::new();
        for tok in src.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| GroupError::Parse(format!("bad exponent in {tok:?}")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let l = match alphabet.id(name) {
                Some(g) => g as Letter + 1,
                None if name == "e" || name == "1" => continue,
                None => return Err(GroupError::UnknownGenerator(name.to_string())),
            };
            if exp.unsigned_abs() > 1 << 16 {
                return Err(GroupError::Parse(format!("exponent too large in {tok:?}")));
            }
            for _ in 0..exp.unsigned_abs() {
                push_letter(&mut out, if exp < 0 { -l } else { l });
            }
        }
        Ok(ReducedWord(out))
    }

    pub fn display_with<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        struct D<'a>(&'a ReducedWord, &'a Alphabet);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_identity() {
                    return write!(f, "e");
                }
                for (i, &l) in self.0 .0.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", self.1.name(l.unsigned_abs() as usize - 1))?;
                    if l < 0 {
                        write!(f, "^-1")?;
                    }
                }
                Ok(())
            }
        }
        D(self, alphabet)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&Alphabet::default()))
    }
}

impl std::str::FromStr for ReducedWord {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReducedWord::parse_with(s, &Alphabet::default())
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generator names. The default names generators `a, b, c, d, f, g, ...`
/// (skipping `e`, which denotes the identity) and then `x25, x26, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct Alphabet {
    names: Option<Vec<String>>,
}

const DEFAULT_LETTERS: &str = "abcdfghijklmnopqrstuvwxyz";


impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Self, GroupError> {
        let mut seen = BTreeSet::new();
        for n in &names {
            let ok = !n.is_empty()
                && n != "e"
                && n != "1"
                && n.chars().all(|c| c.is_alphanumeric() || c == '_')
                && seen.insert(n.as_str());
            if !ok {
                return Err(GroupError::Parse(format!("invalid generator name {n:?}")));
            }
        }
        Ok(Alphabet { names: Some(names) })
    }

    pub fn name(&self, g: usize) -> String {
        match &self.names {
            Some(v) => v.get(g).cloned().unwrap_or_else(|| format!("x{g}")),
            None => DEFAULT_LETTERS.chars().nth(g).map_or_else(|| format!("x{g}"), String::from),
        }
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        match &self.names {
            Some(v) => v.iter().position(|n| n == name),
            None => {
                let mut cs = name.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => DEFAULT_LETTERS.find(c),
                    _ => name.strip_prefix('x')?.parse().ok().filter(|&g: &usize| g >= DEFAULT_LETTERS.len()),
                }
            }
        }
    }
}

/// A finite set of words.
pub type SubsetSpec = BTreeSet<ReducedWord>;

pub fn inverse_set(s: &SubsetSpec) -> SubsetSpec {
    s.iter().map(ReducedWord::inverse).collect()
}

/// `{ g⁻¹ w g : w ∈ s }`.
pub fn conjugate_set(s: &SubsetSpec, g: &ReducedWord) -> SubsetSpec {
    let gi = g.inverse();
    s.iter().map(|w| gi.mul(w).mul(g)).collect()
}

/// All reduced words of length at most `max_len` over `rank` generators, in
/// shortlex order.
pub fn all_words(rank: usize, max_len: usize) -> Vec<ReducedWord> {
    let mut out = vec![ReducedWord::identity()];
    let mut layer = vec![ReducedWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..rank as Letter {
                for l in [g + 1, -(g + 1)] {
                    if w.0.last() != Some(&-l) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(ReducedWord(v));
                    }
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A map from the group to finite sets, given by a default value and
/// finitely many exceptions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiMap {
    pub default: SubsetSpec,
    #[serde(default)]
    pub exceptions: BTreeMap<ReducedWord, SubsetSpec>,
}

impl PhiMap {
    pub fn constant(s: SubsetSpec) -> Self {
        PhiMap { default: s, exceptions: BTreeMap::new() }
    }

    pub fn eval(&self, g: &ReducedWord) -> &SubsetSpec {
        self.exceptions.get(g).unwrap_or(&self.default)
    }

    /// Pointwise inclusion `Φ(g) ⊆ Ψ(g)` for every `g`. Decided on the
    /// defaults and on every exception point of either map.
    pub fn le(&self, other: &PhiMap) -> bool {
        self.default.is_subset(&other.default)
            && self
                .exceptions
                .keys()
                .chain(other.exceptions.keys())
                .all(|k| self.eval(k).is_subset(other.eval(k)))
    }

    /// `Φ^h(g) = Φ(gh)`.
    pub fn right_translate(&self, h: &ReducedWord) -> PhiMap {
        let hi = h.inverse();
        PhiMap {
            default: self.default.clone(),
            exceptions: self.exceptions.iter().map(|(k, v)| (k.mul(&hi), v.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce(&[(0, false), (1, false), (1, true)], 2).unwrap(), w("a"));
        assert_eq!(reduce(&[], 2).unwrap(), ReducedWord::identity());
        assert_eq!(reduce(&[(0, true), (0, false), (0, false), (1, false)], 2).unwrap(), w("a b"));
        assert!(matches!(reduce(&[(2, false)], 2), Err(GroupError::UnknownGenerator(_))));
    }

    #[test]
    fn reduction_is_idempotent() {
        for x in all_words(2, 4) {
            assert_eq!(ReducedWord::from_letters(x.letters()), x);
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for x in all_words(3, 3) {
            assert_eq!(w(&x.to_string()), x);
        }
        assert_eq!(w("a b^-1 b"), w("a"));
        assert_eq!(w("e"), ReducedWord::identity());
        assert_eq!(w(""), ReducedWord::identity());
        assert_eq!(w("a^3"), w("a a a"));
        assert!("q1".parse::<ReducedWord>().is_err());
        assert_eq!(w("x30").letters(), &[31]);
    }

    #[test]
    fn custom_alphabet() {
        let al = Alphabet::new(vec!["x".into(), "y".into()]).unwrap();
        let u = ReducedWord::parse_with("x^-1 y", &al).unwrap();
        assert_eq!(u.display_with(&al).to_string(), "x^-1 y");
        assert!(ReducedWord::parse_with("a", &al).is_err());
        assert!(Alphabet::new(vec!["x".into(), "x".into()]).is_err());
    }

    #[test]
    fn group_laws_on_small_words() {
        let ws = all_words(2, 3);
        assert_eq!(ws.len(), 1 + 4 + 12 + 36);
        for x in &ws {
            assert!(x.mul(&x.inverse()).is_identity());
            for y in ws.iter().take(20) {
                assert_eq!(x.mul(y).inverse(), y.inverse().mul(&x.inverse()));
            }
        }
    }

    #[test]
    fn phi_map_order_and_translate() {
        let s = |v: &[&str]| v.iter().map(|x| w(x)).collect::<SubsetSpec>();
        let phi = PhiMap::constant(s(&["a"]));
        let mut psi = PhiMap::constant(s(&["a", "a a"]));
        assert!(phi.le(&psi) && !psi.le(&phi));
        psi.exceptions.insert(w("b"), s(&["b"]));
        assert!(!phi.le(&psi));
        let t = psi.right_translate(&w("b"));
        assert_eq!(t.eval(&ReducedWord::identity()), &s(&["b"]));
    }
}
