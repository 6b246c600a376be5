use num_bigint::BigInt;
use rand::Rng;

use super::{Ctx, Show};
use crate::order_lab::FnSeq;
use crate::poly::Rational;
use crate::uniformity::{
    composition_search, cofinal_search, countable_base, u_alpha_member, CofinalSearch, CountableSpace, MetricSpace,
    PairProfiles, RadiusNeighbourhood,
};

const N_MAX: usize = 100;
const MAX_ENTRY: u64 = 6;

/// All sequences of the given length with entries in `0..=MAX_ENTRY`.
fn all_alphas(len: usize) -> Vec<FnSeq> {
    let base = MAX_ENTRY + 1;
    (0..base.pow(len as u32))
        .map(|mut c| {
            FnSeq::finite(
                (0..len)
                    .map(|_| {
                        let v = c % base;
                        c /= base;
                        v
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Plain evaluation of the definition with exact dyadic radii.
fn oracle_member(space: &MetricSpace, alpha: &FnSeq, x: usize, y: usize) -> bool {
    x == y
        || space.compacts().iter().enumerate().any(|(n, k)| {
            let radius = Rational::new(1.into(), BigInt::from(1) << alpha.at(n).expect("defined"));
            k.iter().any(|&c| space.d(x, c) < &radius && space.d(y, c) < &radius)
        })
}

fn monotone(ctx: &mut Ctx) {
    for len in 1..=4usize {
        let compacts: Vec<Vec<usize>> =
            (0..len).map(|n| if n == 0 { vec![0] } else { vec![0, ctx.rng.gen_range(1..=N_MAX)] }).collect();
        let space = MetricSpace::convergent_sequence(N_MAX).with_compacts(compacts.clone()).expect("in range");
        let profiles = PairProfiles::new(&space);
        let alphas = all_alphas(len);
        let entourages: Vec<_> = alphas.iter().map(|a| profiles.entourage(a).expect("full length")).collect();
        for (i, a) in alphas.iter().enumerate() {
            for (j, b) in alphas.iter().enumerate() {
                if !a.le(b) {
                    continue;
                }
                let ok = entourages[j].is_subset(&entourages[i]);
                ctx.expect(
                    Show(|f| write!(f, "monotone compacts={compacts:?} alpha={:?} alpha'={:?}", a.values, b.values)),
                    ok,
                    || "a pair of the larger index escapes the smaller".into(),
                );
            }
        }

        for _ in 0..ctx.count(500) {
            let a = &alphas[ctx.rng.gen_range(0..alphas.len())];
            let (x, y) = (ctx.rng.gen_range(0..=N_MAX), ctx.rng.gen_range(0..=N_MAX));
            let want = oracle_member(&space, a, x, y);
            let direct = u_alpha_member(&space, a, x, y);
            let cached = profiles.member(a, x, y);
            ctx.expect(
                Show(|f| write!(f, "membership compacts={compacts:?} alpha={:?} pair=({x},{y})", a.values)),
                direct == Ok(want) && cached == Ok(want),
                || format!("definition says {want}, direct {direct:?}, cached {cached:?}"),
            );
        }
    }
}

fn random_radius<R: Rng>(rng: &mut R) -> Rational {
    match rng.gen_range(0..10) {
        0 => Rational::new(1.into(), 1_000_000.into()),
        1 => Rational::new(rng.gen_range(1..=3).into(), 1.into()),
        _ => Rational::new(rng.gen_range(1..=5).into(), rng.gen_range(2..=300).into()),
    }
}

fn cofinal(ctx: &mut Ctx) {
    let space = MetricSpace::convergent_sequence(N_MAX);
    let profiles = PairProfiles::new(&space);
    for _ in 0..ctx.count(50) {
        let mut radii: Vec<Rational> = (0..=N_MAX).map(|_| random_radius(&mut ctx.rng)).collect();
        // the limit point always gets a genuine neighbourhood
        radii[0] = Rational::new(1.into(), ctx.rng.gen_range(1..=300).into());
        let o = RadiusNeighbourhood { radii };
        let radii_s: Vec<String> = o.radii.iter().map(|r| r.to_string()).collect();
        let outcome = cofinal_search(&space, &profiles, &o, 64).map_err(|e| e.to_string()).and_then(|res| {
            let CofinalSearch::Found { alpha, .. } = res else {
                return Err("search failed within resolution 64".into());
            };
            let target = o.entourage(&space).map_err(|e| e.to_string())?;
            for x in 0..=N_MAX {
                for y in 0..=N_MAX {
                    if oracle_member(&space, &alpha, x, y) && !target.contains(x, y) {
                        return Err(format!("pair ({x},{y}) is in U_alpha but not in O"));
                    }
                }
            }
            let witness = composition_search(&profiles, &alpha, 4).map_err(|e| e.to_string())?;
            if witness.is_none() {
                return Err("no alpha'' with U∘U ⊆ U_alpha".into());
            }
            Ok(())
        });
        ctx.check(Show(|f| write!(f, "cofinal radii={radii_s:?}")), outcome);
    }
}

fn countable(ctx: &mut Ctx) {
    const M: usize = 50;
    let space = CountableSpace::convergent_sequence(M);
    let base = |top: u64| {
        let mut f = vec![FnSeq::finite(vec![0]); M + 1];
        f[M] = FnSeq::finite(vec![top]);
        countable_base(&space, &f).expect("valid space")
    };
    let all: Vec<_> = (0..=M as u64 + 1).map(base).collect();
    for (a, ea) in all.iter().enumerate() {
        let shape = (0..M).all(|m| (0..M).all(|m2| ea.contains(m, m2) == (m == m2 || (m >= a && m2 >= a))));
        ctx.expect(Show(|f| write!(f, "countable-shape top={a}")), shape && ea.is_reflexive() && ea.is_symmetric(), || {
            "entourage differs from the tail square plus the diagonal".into()
        });
        for (b, eb) in all.iter().enumerate().skip(a) {
            ctx.expect(Show(|f| write!(f, "countable-monotone f={a} f'={b}")), eb.is_subset(ea), || {
                "larger index gives a larger entourage".into()
            });
        }
    }
}

pub(super) fn run(ctx: &mut Ctx) {
    monotone(ctx);
    cofinal(ctx);
    countable(ctx);
}
