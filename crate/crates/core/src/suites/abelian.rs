use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Ctx, Show};
use crate::group_topology::{
    abelian_sum_member, i_of_entourage, i_of_entourage_abelian, sin_base_member, sin_base_member_abelian, AbelianSet,
    AbelianWord, ReducedWord, SubsetSpec, SumAnswer,
};
use crate::poly::Rational;

const POINTS: usize = 5;

fn point_diff(x: usize, y: usize) -> AbelianWord {
    AbelianWord::generator(x).sub(&AbelianWord::generator(y))
}

/// Every sum `v_1 + ... + v_k` with `v_n ∈ V_n ∪ -V_n` or omitted.
fn brute_sums(vs: &[AbelianSet]) -> BTreeSet<AbelianWord> {
    let mut acc: BTreeSet<AbelianWord> = [AbelianWord::zero()].into();
    for v in vs {
        let mut next = acc.clone();
        for s in &acc {
            for x in v {
                next.insert(s.add(x));
                next.insert(s.sub(x));
            }
        }
        acc = next;
    }
    acc
}

fn random_pairs<R: Rng>(rng: &mut R, max: usize) -> Vec<(usize, usize)> {
    (0..rng.gen_range(1..=max)).map(|_| (rng.gen_range(0..POINTS), rng.gen_range(0..POINTS))).collect()
}

fn check_answer(w: &AbelianWord, vs: &[AbelianSet], ans: &SumAnswer, expected: bool) -> Result<(), String> {
    match ans {
        SumAnswer::Yes { summands } => {
            if !expected {
                return Err(format!("{w} accepted but no sum reaches it"));
            }
            let mut total = AbelianWord::zero();
            for (n, s) in summands.iter().enumerate() {
                if let Some(s) = s {
                    if !vs[n].contains(s) && !vs[n].contains(&s.neg()) {
                        return Err(format!("summand {s} is not in ±V_{}", n + 1));
                    }
                    total = total.add(s);
                }
            }
            if total != *w {
                return Err(format!("summands add up to {total}, not {w}"));
            }
            Ok(())
        }
        SumAnswer::NoUpTo { .. } if expected => Err(format!("{w} rejected but a sum reaches it")),
        SumAnswer::NoUpTo { .. } => Ok(()),
    }
}

pub(super) fn run(ctx: &mut Ctx) {
    // Generating entourage of a 5-point space on the rational line.
    for _ in 0..ctx.count(100) {
        let mut pos: Vec<Rational> = Vec::new();
        while pos.len() < POINTS {
            let p = Rational::new(ctx.rng.gen_range(-20..=20).into(), ctx.rng.gen_range(1..=4).into());
            if !pos.contains(&p) {
                pos.push(p);
            }
        }
        let d = |x: usize, y: usize| num_traits::Signed::abs(&(&pos[x] - &pos[y]));
        let radius = Rational::new(ctx.rng.gen_range(1..=40).into(), 4.into());
        let v: Vec<(usize, usize)> =
            (0..POINTS).flat_map(|x| (0..POINTS).map(move |y| (x, y))).filter(|&(x, y)| d(x, y) < radius).collect();
        let va = i_of_entourage_abelian(v.iter().copied());
        let vf = i_of_entourage(v.iter().copied());
        let support: SubsetSpec = [ReducedWord::identity()].into();
        let pos_s: Vec<String> = pos.iter().map(|p| p.to_string()).collect();
        for x in 0..POINTS {
            for y in 0..POINTS {
                if x == y {
                    continue;
                }
                let inside = v.contains(&(x, y));
                let abelian = sin_base_member_abelian(&point_diff(x, y), std::slice::from_ref(&va), 1).is_yes();
                let word = ReducedWord::generator(x).mul(&ReducedWord::generator(y).inverse());
                let free = sin_base_member(&word, std::slice::from_ref(&vf), 1, &support).map(|a| a.is_yes());
                ctx.expect(
                    Show(|f| write!(f, "sin points={pos_s:?} r={radius} pair=({x},{y})")),
                    abelian == inside && free == Ok(inside),
                    || format!("in entourage: {inside}, abelian: {abelian}, free: {free:?}"),
                );
            }
        }
    }

    // Dynamic programme against enumeration of all sums of at most 4 terms.
    for _ in 0..ctx.count(50) {
        let n = ctx.rng.gen_range(1..=4);
        let pairs: Vec<Vec<(usize, usize)>> = (0..n).map(|_| random_pairs(&mut ctx.rng, 3)).collect();
        let vs: Vec<AbelianSet> = pairs.iter().map(|p| i_of_entourage_abelian(p.iter().copied())).collect();
        let reach = brute_sums(&vs);
        let mut targets: Vec<AbelianWord> = reach.iter().cloned().collect();
        targets.shuffle(&mut ctx.rng);
        targets.truncate(60);
        for _ in 0..60 {
            let coeffs: Vec<i64> = (0..POINTS).map(|_| ctx.rng.gen_range(-2..=2)).collect();
            targets.push(AbelianWord::new(coeffs));
        }
        for w in &targets {
            let ans = abelian_sum_member(w, &vs, n);
            let outcome = check_answer(w, &vs, &ans, reach.contains(w));
            ctx.check(Show(|f| write!(f, "sum-dp entourages={pairs:?} target={w}")), outcome);
        }
    }
}
