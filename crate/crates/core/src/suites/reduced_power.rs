use std::cmp::Ordering;

use num_traits::{One, Signed};
use rand::Rng;

use super::{Ctx, Show};
use crate::poly::{Monomial, Poly, Rational, RationalFunction};
use crate::reduced_power::{
    baire_witness, compare_ev, in_open_ball, interleave, star_metric, Ball, EventualSeq, RpError,
};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    r(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// Tail `p(n) / q(n)` with `deg p ≤ 2` and `q` free of roots at `n ≥ 0`.
fn random_seq<R: Rng>(rng: &mut R) -> EventualSeq {
    let num = Poly::from_terms((0..3).map(|e| (Monomial::var(0, e), small_rational(rng))));
    let c = Rational::from_integer(rng.gen_range(1..=5).into());
    let den = match rng.gen_range(0..3) {
        0 => Poly::one(),
        1 => Poly::from_terms([(Monomial::var(0, 1), Rational::one()), (Monomial::one(), c)]),
        _ => Poly::from_terms([(Monomial::var(0, 2), Rational::one()), (Monomial::one(), c)]),
    };
    let tail = RationalFunction::new(num, den).expect("nonzero denominator");
    let prefix = (0..rng.gen_range(0..=3)).map(|_| small_rational(rng)).collect();
    EventualSeq::new(prefix, tail).expect("no poles at n >= 0")
}

fn metric_axioms(x: &EventualSeq, y: &EventualSeq, z: &EventualSeq) -> Result<(), String> {
    let e = |err: RpError| err.to_string();
    let d = |a: &EventualSeq, b: &EventualSeq| star_metric(a, b).map_err(e);
    let zero = EventualSeq::zero();
    let dxy = d(x, y)?;
    if compare_ev(&d(x, x)?, &zero) != Ordering::Equal {
        return Err("d(x, x) != 0".into());
    }
    if compare_ev(&dxy, &d(y, x)?) != Ordering::Equal {
        return Err("d(x, y) != d(y, x)".into());
    }
    if compare_ev(&dxy, &zero) == Ordering::Less || compare_ev(&dxy, &EventualSeq::one()) == Ordering::Greater {
        return Err("d(x, y) outside [0, 1]".into());
    }
    if (compare_ev(&dxy, &zero) == Ordering::Equal) != (compare_ev(x, y) == Ordering::Equal) {
        return Err("d(x, y) = 0 disagrees with cofinite equality".into());
    }
    if compare_ev(&d(x, z)?, &dxy.add(&d(y, z)?)) == Ordering::Greater {
        return Err("triangle inequality fails".into());
    }
    if compare_ev(&d(&x.add(z), &y.add(z))?, &dxy) != Ordering::Equal {
        return Err("metric is not translation invariant".into());
    }
    // pointwise oracle: d_i = min(|x_i - y_i|, 1) at every index shown
    for i in 0..12 {
        let want = (x.at(i) - y.at(i)).abs().min(Rational::one());
        if dxy.at(i) != want {
            return Err(format!("d(x, y) at index {i} is {}, expected {want}", dxy.at(i)));
        }
    }
    Ok(())
}

/// `g_n` is the sequence of partial sums of `2^-m` stopped at `m = n`.
fn geometric(n: i64) -> EventualSeq {
    let partial = |k: i64| Rational::one() - r(1, 1 << k);
    EventualSeq::new((0..n).map(partial).collect(), RationalFunction::constant(partial(n))).expect("constant tail")
}

pub(super) fn run(ctx: &mut Ctx) {
    for _ in 0..ctx.count(1_000) {
        let x = random_seq(&mut ctx.rng);
        let y = if ctx.rng.gen_bool(0.1) { x.with_prefix(vec![r(9, 1)]).expect("prefix") } else { random_seq(&mut ctx.rng) };
        let z = random_seq(&mut ctx.rng);
        let outcome = metric_axioms(&x, &y, &z);
        ctx.check(Show(|f| write!(f, "metric x={x} y={y} z={z}")), outcome);
    }

    let instances: Vec<_> =
        (1..=20).map(|n| (geometric(n), EventualSeq::constant(r(4, 1 << n)))).collect();
    let cuts: Vec<usize> = (1..20).map(|k| 3 * k).collect();
    match interleave(&instances, &cuts) {
        Ok(out) => {
            for (n, (g, eps)) in instances.iter().enumerate() {
                let ok = in_open_ball(&out.h, g, eps).unwrap_or(false);
                ctx.expect(Show(|f| write!(f, "interleave geometric n={}", n + 1)), ok, || {
                    format!("d(h, g_{}) is not below 2^-{}", n + 1, n - 1)
                });
            }
        }
        Err(err) => ctx.check("interleave geometric", Err(err.to_string())),
    }

    for _ in 0..ctx.count(100) {
        let center = random_seq(&mut ctx.rng);
        let radius = if ctx.rng.gen_bool(0.5) {
            EventualSeq::constant(r(1, ctx.rng.gen_range(1..=4)))
        } else {
            EventualSeq::parse_tail(&format!("1/({} * n + 1)", ctx.rng.gen_range(1..=3))).expect("tail")
        };
        let forbidden: Vec<Ball> = (0..ctx.rng.gen_range(1..=6u32))
            .map(|j| {
                let c = if ctx.rng.gen_bool(0.5) { center.clone() } else { random_seq(&mut ctx.rng) };
                Ball { center: c, radius: radius.scale(&r(1, 4i64.pow(j + 1))) }
            })
            .collect();
        let open = Ball { center, radius };
        let outcome = baire_witness(&open, &forbidden).map_err(|e| e.to_string()).and_then(|w| {
            let inside = in_open_ball(&w.h, &open.center, &open.radius).map_err(|e| e.to_string())?;
            let outside = forbidden.iter().all(|b| {
                star_metric(&w.h, &b.center).is_ok_and(|d| compare_ev(&d, &b.radius) == Ordering::Greater)
            });
            if inside && outside {
                Ok(())
            } else {
                Err("witness misses the open ball or hits a forbidden ball".into())
            }
        });
        let radii: Vec<String> = forbidden.iter().map(|b| format!("{}@{}", b.radius, b.center)).collect();
        ctx.check(Show(|f| write!(f, "baire open={}@{} forbidden={radii:?}", open.radius, open.center)), outcome);
    }
}
