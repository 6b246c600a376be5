use std::collections::BTreeSet;

use num_traits::Signed;
use rand::Rng;

use super::{Ctx, Show};
use crate::order_lab::{
    ad_compare, ad_join, all_posets, box_member, box_unbounded_cert, check_cofinal, check_monotone,
    diagonal_witness, disambiguation_bound, rational_grid, reaches_every_level, tukey_certificate, tukey_to_monotone,
    Branch, BoxFamily, FinitePoset, FnSeq,
};
use crate::poly::Rational;

fn random_branch<R: Rng>(rng: &mut R) -> Branch {
    let bits = |rng: &mut R, n: usize| (0..n).map(|_| rng.gen_bool(0.5)).collect::<Vec<bool>>();
    let pre = rng.gen_range(0..=3);
    let per = rng.gen_range(1..=3);
    let (a, b) = (bits(rng, pre), bits(rng, per));
    Branch::new(a, b).expect("nonempty period")
}

fn subset(family: &[Branch], mask: u32) -> Vec<Branch> {
    family.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, b)| b.clone()).collect()
}

fn almost_disjoint(ctx: &mut Ctx) {
    for _ in 0..ctx.count(5) {
        let mut family: Vec<Branch> = Vec::new();
        while family.len() < 6 {
            let b = random_branch(&mut ctx.rng);
            if !family.contains(&b) {
                family.push(b);
            }
        }
        let names: Vec<String> = family.iter().map(|b| b.to_string()).collect();
        let depth = disambiguation_bound(&family);

        // distinct branches already differ before the bound, bit by bit
        let separated = family.iter().enumerate().all(|(i, x)| {
            family[i + 1..].iter().all(|y| (0..depth).any(|k| x.bit(k) != y.bit(k)))
        });
        ctx.expect(Show(|f| write!(f, "ad-separation family={names:?} depth={depth}")), separated, || {
            "two branches share a prefix up to the bound".into()
        });

        let joins: Vec<Option<BTreeSet<u64>>> = (0..64u32).map(|m| ad_join(&subset(&family, m), depth).ok()).collect();
        for s in 0..64u32 {
            for t in 0..64u32 {
                let included = s & !t == 0;
                let cmp = ad_compare(&subset(&family, s), &subset(&family, t), depth);
                let sets = match (&joins[s as usize], &joins[t as usize]) {
                    (Some(a), Some(b)) => Some(a.is_subset(b)),
                    _ => None,
                };
                ctx.expect(
                    Show(|f| write!(f, "ad-embed family={names:?} S={s:06b} T={t:06b}")),
                    cmp == Ok(included) && sets == Some(included),
                    || format!("S ⊆ T is {included}, compare gives {cmp:?}, prefix sets give {sets:?}"),
                );
            }
        }
    }
}

fn tukey(ctx: &mut Ctx) {
    for (p, d) in all_posets(5).iter().enumerate() {
        let n = d.len();
        if n == 0 {
            continue;
        }
        for tau in 1..=5usize {
            let chain = FinitePoset::chain(tau);
            let total = n.pow(tau as u32);
            for code in 0..total {
                let mut c = code;
                let g: Vec<usize> = (0..tau)
                    .map(|_| {
                        let v = c % n;
                        c /= n;
                        v
                    })
                    .collect();
                let outcome = tukey_to_monotone(&g, d).map_err(|e| e.to_string()).and_then(|f| {
                    let fo: Vec<Option<usize>> = f.iter().map(|&v| Some(v)).collect();
                    let mono = check_monotone(&fo, d, &chain).map_err(|e| e.to_string())?;
                    let cofinal = check_cofinal(&fo, d, &chain).map_err(|e| e.to_string())?;
                    let cert = tukey_certificate(&g, d);
                    if !mono {
                        return Err(format!("f = {f:?} is not monotone"));
                    }
                    if cert != reaches_every_level(&f, tau) {
                        return Err(format!("certificate {cert} but f = {f:?}"));
                    }
                    if cert && !cofinal {
                        return Err(format!("certificate holds but f = {f:?} is not cofinal"));
                    }
                    Ok(())
                });
                ctx.check(Show(|f| write!(f, "tukey poset#{p} n={n} tau={tau} g={g:?}")), outcome);
            }
        }
    }
}

fn diagonal(ctx: &mut Ctx) {
    for tau in 1..=6usize {
        for code in 0..10u64.pow(tau as u32) {
            let mut c = code;
            let a: Vec<FnSeq> = (0..tau)
                .map(|beta| {
                    let diag = c % 10;
                    c /= 10;
                    let mut v: Vec<u64> = (0..tau).map(|_| ctx.rng.gen_range(0..=9)).collect();
                    v[beta] = diag;
                    FnSeq::finite(v)
                })
                .collect();
            let outcome = diagonal_witness(&a).map_err(|e| e.to_string()).and_then(|w| {
                for (beta, s) in a.iter().enumerate() {
                    if w.z.le(s) {
                        return Err(format!("z = {:?} lies below a_{beta}", w.z.values));
                    }
                    let (b, zb, ab) = w.escapes[beta];
                    if b != beta || w.z.at(beta) != Some(zb) || s.at(beta) != Some(ab) || zb <= ab || zb > 10 {
                        return Err(format!("escape record {beta} is wrong"));
                    }
                }
                Ok(())
            });
            ctx.check(Show(|f| write!(f, "diagonal tau={tau} diag={code}")), outcome);
        }
    }
}

fn boxes(ctx: &mut Ctx) {
    let mut grid: Vec<Rational> = vec![Rational::from_integer(0.into())];
    for k in 1..=5i64 {
        grid.push(Rational::new(1.into(), k.into()));
        grid.push(Rational::new((-1).into(), k.into()));
    }
    let points = rational_grid(3, &grid);
    let all_f: Vec<FnSeq> = (0..64u64).map(|c| FnSeq::finite(vec![1 + c % 4, 1 + c / 4 % 4, 1 + c / 16])).collect();
    let members: Vec<Vec<bool>> = all_f
        .iter()
        .map(|f| points.iter().map(|x| box_member(f, x).expect("positive indices")).collect())
        .collect();
    for (i, f) in all_f.iter().enumerate() {
        for (j, g) in all_f.iter().enumerate() {
            if !f.le(g) {
                continue;
            }
            let escape = (0..points.len()).find(|&p| members[j][p] && !members[i][p]);
            ctx.expect(Show(|s| write!(s, "box f={:?} g={:?}", f.values, g.values)), escape.is_none(), || {
                format!("grid point {:?} is in the box of g but not of f", escape.map(|p| &points[p]))
            });
        }
    }

    for _ in 0..ctx.count(100) {
        let base = all_f[ctx.rng.gen_range(0..64)].clone();
        let beta = ctx.rng.gen_range(0..3);
        let bound = ctx.rng.gen_range(1..=12u64);
        let family = BoxFamily { base: base.clone(), beta };
        let outcome = box_unbounded_cert(&family, bound).map_err(|e| e.to_string()).and_then(|c| {
            let fk = family.member(c.k);
            if fk.at(beta) != Some(c.index_at_beta) || c.index_at_beta < bound {
                return Err("certificate member does not reach the bound".into());
            }
            if &c.radius * Rational::from_integer(bound.into()) > Rational::from_integer(1.into()) {
                return Err("radius exceeds 1/bound".into());
            }
            let bad = points.iter().find(|x| {
                box_member(&fk, x).unwrap_or(false) && x.get(&beta).is_some_and(|v| v.abs() >= c.radius)
            });
            match bad {
                Some(x) => Err(format!("grid point {x:?} escapes the radius")),
                None => Ok(()),
            }
        });
        ctx.check(Show(|f| write!(f, "box-cert base={:?} beta={beta} bound={bound}", base.values)), outcome);
    }
}

pub(super) fn run(ctx: &mut Ctx) {
    almost_disjoint(ctx);
    tukey(ctx);
    diagonal(ctx);
    boxes(ctx);
}
