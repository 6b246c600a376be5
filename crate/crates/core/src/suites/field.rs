use std::cmp::Ordering;

use rand::Rng;

use super::oracle::substitution_compare;
use super::{Ctx, Show};
use crate::field::{FieldElement, TowerLimits};
use crate::poly::{Monomial, Poly, Rational, RationalFunction};

fn random_poly<R: Rng>(rng: &mut R, height: usize, max_degree: u32) -> Poly {
    loop {
        let terms = rng.gen_range(1..=3);
        let p = Poly::from_terms((0..terms).map(|_| {
            let mut left = rng.gen_range(0..=max_degree);
            let exps: Vec<u32> = (0..height)
                .map(|_| {
                    let e = rng.gen_range(0..=left);
                    left -= e;
                    e
                })
                .collect();
            let mut num = rng.gen_range(1..=6i64);
            if rng.gen_bool(0.5) {
                num = -num;
            }
            (Monomial::new(exps), Rational::new(num.into(), rng.gen_range(1..=3i64).into()))
        }));
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random element over `a0, ..., a(h-1)` with `h ≤ max_height` and numerator
/// and denominator of total degree at most `max_degree`.
pub fn random_element<R: Rng>(rng: &mut R, max_height: usize, max_degree: u32) -> FieldElement {
    let height = rng.gen_range(0..=max_height);
    let num = if rng.gen_bool(0.1) { Poly::zero() } else { random_poly(rng, height, max_degree) };
    let den = if rng.gen_bool(0.5) { Poly::one() } else { random_poly(rng, height, max_degree) };
    let value = RationalFunction::new(num, den).expect("nonzero denominator");
    FieldElement::from_rational_function(value, height, &TowerLimits::default()).expect("within limits")
}

fn same(what: &str, x: &FieldElement, y: &FieldElement) -> Result<(), String> {
    if x == y {
        Ok(())
    } else {
        Err(format!("{what}: {x} != {y}"))
    }
}

fn axioms(a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Result<(), String> {
    let zero = FieldElement::zero();
    let one = FieldElement::one();
    same("a+b = b+a", &(a + b), &(b + a))?;
    same("ab = ba", &(a * b), &(b * a))?;
    same("(a+b)+c = a+(b+c)", &(&(a + b) + c), &(a + &(b + c)))?;
    same("(ab)c = a(bc)", &(&(a * b) * c), &(a * &(b * c)))?;
    same("a(b+c) = ab+ac", &(a * &(b + c)), &(&(a * b) + &(a * c)))?;
    same("a+0 = a", &(a + &zero), a)?;
    same("a*1 = a", &(a * &one), a)?;
    same("a+(-a) = 0", &(a + &-a), &zero)?;
    same("a-b = a+(-b)", &(a - b), &(a + &-b))?;
    if !a.is_zero() {
        let inv = a.invert().map_err(|e| e.to_string())?;
        same("a*a^-1 = 1", &(a * &inv), &one)?;
        same("(b/a)*a = b", &(&b.checked_div(a).map_err(|e| e.to_string())? * a), b)?;
    }

    let ab = a.compare(b);
    if ab != b.compare(a).reverse() {
        return Err("compare is not antisymmetric".into());
    }
    if (ab == Ordering::Equal) != (a == b) {
        return Err("compare Equal disagrees with equality".into());
    }
    if ab != (a - b).sign() {
        return Err("compare disagrees with the sign of a-b".into());
    }
    if ab != (a + c).compare(&(b + c)) {
        return Err("order is not translation invariant".into());
    }
    if a.sign() == Ordering::Greater && b.sign() == Ordering::Greater && (a * b).sign() != Ordering::Greater {
        return Err("product of positives is not positive".into());
    }
    if a <= b && b <= c && a > c {
        return Err("order is not transitive".into());
    }
    if a.abs().sign() == Ordering::Less || (a.abs() != *a && a.abs() != -a) {
        return Err("abs is wrong".into());
    }
    Ok(())
}

pub(super) fn run(ctx: &mut Ctx) {
    for _ in 0..ctx.count(10_000) {
        let a = random_element(&mut ctx.rng, 3, 4);
        let b = random_element(&mut ctx.rng, 3, 4);
        let c = random_element(&mut ctx.rng, 3, 4);
        let outcome = axioms(&a, &b, &c);
        ctx.check(Show(|f| write!(f, "axioms a={a} b={b} c={c}")), outcome);
    }

    // Each variable is below every positive element of the field before it.
    let one = FieldElement::one();
    let alphas: Vec<FieldElement> = (0..3).map(FieldElement::alpha).collect();
    for n in 1..=ctx.count(10_000) as i64 {
        let k = FieldElement::from_int(n);
        let ok = &k * &alphas[0] < one && &k * &alphas[1] < alphas[0] && &k * &alphas[2] < alphas[1];
        ctx.expect(Show(|f| write!(f, "archimedean n={n}")), ok, || format!("{n}*a0 < 1 or a chain link fails"));
    }

    for _ in 0..ctx.count(1_000) {
        let a = random_element(&mut ctx.rng, 3, 4);
        let b = if ctx.rng.gen_bool(0.1) { a.clone() } else { random_element(&mut ctx.rng, 3, 4) };
        let (got, want) = (a.compare(&b), substitution_compare(&a, &b));
        ctx.expect(Show(|f| write!(f, "oracle a={a} b={b}")), got == want, || {
            format!("compare says {got:?}, substitution says {want:?}")
        });
    }
}
