use rand::Rng;

use super::{Ctx, Show};
use crate::field::FieldElement;
use crate::matrix::{ball_member, shrink_radius, Matrix};

fn fe(s: &str) -> FieldElement {
    s.parse().expect("literal")
}

/// A positive radius: rational, infinitesimal, or above 1 (clamped).
fn random_radius<R: Rng>(rng: &mut R) -> FieldElement {
    const RADII: &[&str] = &["1", "1/3", "5", "7/2", "a0", "a0^2/7", "3*a0 - a0^2", "a1", "a0*a1", "a1/(1 + a0)", "a2^2 + a1"];
    fe(RADII[rng.gen_range(0..RADII.len())])
}

/// A factor `t` with `|t| < 1`, sometimes infinitesimally close to 1 or 0.
fn random_unit<R: Rng>(rng: &mut R) -> FieldElement {
    let m = rng.gen_range(2..=9i64);
    let k = rng.gen_range(-(m - 1)..m);
    let t = FieldElement::ratio(k, m);
    match rng.gen_range(0..4) {
        0 => &FieldElement::one() - &FieldElement::alpha(0),
        1 => &t * &FieldElement::alpha(rng.gen_range(0..2)),
        _ => t,
    }
}

/// A member of `B_δ`: `I + E` with every `|E_ij| < δ`.
fn random_member<R: Rng>(rng: &mut R, n: usize, delta: &FieldElement) -> Matrix {
    let mut a = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let dev = delta * &random_unit(rng);
            let v = if i == j { &FieldElement::one() + &dev } else { dev };
            a.set(i, j, v);
        }
    }
    a
}

fn soundness(a: &Matrix, b: &Matrix, delta: &FieldElement, eps: &FieldElement) -> Result<(), String> {
    let e = |x: crate::matrix::MatrixError| x.to_string();
    if !ball_member(a, delta).map_err(e)? || !ball_member(b, delta).map_err(e)? {
        return Err("sample is not inside the small ball".into());
    }
    if !ball_member(&a.mul(b).map_err(e)?, eps).map_err(e)? {
        return Err("product leaves the ball".into());
    }
    if !ball_member(&a.inverse().map_err(e)?, eps).map_err(e)? {
        return Err("inverse leaves the ball".into());
    }
    Ok(())
}

pub(super) fn run(ctx: &mut Ctx) {
    for n in [2usize, 3] {
        for _ in 0..ctx.count(1_000) {
            let eps = random_radius(&mut ctx.rng);
            let delta = match shrink_radius(&eps, n) {
                Ok(d) => d,
                Err(err) => {
                    ctx.check(Show(|f| write!(f, "shrink n={n} eps={eps}")), Err(err.to_string()));
                    continue;
                }
            };
            let a = random_member(&mut ctx.rng, n, &delta);
            let b = random_member(&mut ctx.rng, n, &delta);
            let outcome = soundness(&a, &b, &delta, &eps);
            ctx.check(Show(|f| write!(f, "shrink n={n} eps={eps} A={:?} B={:?}", a.rows(), b.rows())), outcome);
        }
    }

    // Linear order of the base: the smaller radius gives the smaller ball.
    for _ in 0..ctx.count(200) {
        let e1 = random_radius(&mut ctx.rng);
        let e2 = random_radius(&mut ctx.rng);
        let (small, large) = if e1 <= e2 { (&e1, &e2) } else { (&e2, &e1) };
        let a = random_member(&mut ctx.rng, 2, small);
        let ok = ball_member(&a, large).unwrap_or(false);
        ctx.expect(Show(|f| write!(f, "order eps={e1} eps'={e2} A={:?}", a.rows())), ok, || {
            "member of the smaller ball escapes the larger".into()
        });
    }

    // Conjugation by a fixed invertible matrix: some ε/k works on samples.
    let c = Matrix::from_rows(vec![vec![fe("2"), fe("1")], vec![fe("a0"), fe("1")]]).expect("square");
    let c_inv = c.inverse().expect("invertible");
    for _ in 0..ctx.count(100) {
        let eps = random_radius(&mut ctx.rng);
        let samples: Vec<u64> = (0..5).map(|_| ctx.rng.gen()).collect();
        let found = (0..=6u32).map(|e| 1i64 << e).find(|&k| {
            let delta = &eps / &FieldElement::from_int(k);
            samples.iter().all(|&s| {
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(s);
                let a = random_member(&mut rng, 2, &delta);
                let conj = c_inv.mul(&a).and_then(|x| x.mul(&c)).expect("2x2");
                ball_member(&conj, &eps).unwrap_or(false)
            })
        });
        ctx.expect(Show(|f| write!(f, "conjugation eps={eps} samples={samples:?}")), found.is_some(), || {
            "no eps/k with k = 2^j <= 64 works".into()
        });
    }
}
