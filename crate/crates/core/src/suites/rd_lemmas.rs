use rand::Rng;

use super::{Ctx, Show};
use crate::group_topology::lemmas::{
    check_birkhoff_kakutani, check_conjugation, check_filter_base_monotone, check_squaring, check_symmetry,
    random_monotone_phis, random_phi, random_subset, random_support, random_word, BallChain, FilterPresentation,
};
use crate::group_topology::{
    product_set, rd_monotone_check, sym_member, sym_set, v_phi, verify_factorization, PhiMap, ReducedWord,
    SubsetSpec,
};

const RANK: usize = 2;
const MAX_LEN: usize = 6;
const FACTORS: usize = 4;

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn unit(c: Result<usize, String>) -> Result<(), String> {
    c.map(|_| ())
}

/// Every ordering of every initial segment `B_1, ..., B_k`, multiplied out.
fn brute_sym(bs: &[SubsetSpec], max_len: usize) -> SubsetSpec {
    fn orderings(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in orderings(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = SubsetSpec::new();
    for k in 0..=bs.len() {
        for order in orderings(k) {
            let seq: Vec<SubsetSpec> = order.iter().map(|&i| bs[i].clone()).collect();
            out.extend(product_set(&seq).expect("within cap").into_iter().filter(|w| w.len() <= max_len));
        }
    }
    out
}

/// A copy of `phis` with a few sets enlarged, so `phis ≤ result` pointwise.
fn enlarge<R: Rng>(rng: &mut R, phis: &[PhiMap]) -> Vec<PhiMap> {
    phis.iter()
        .map(|p| {
            let mut q = p.clone();
            if rng.gen_bool(0.5) {
                q.default.insert(random_word(rng, RANK, 2));
            }
            for v in q.exceptions.values_mut() {
                if rng.gen_bool(0.3) {
                    v.insert(random_word(rng, RANK, 2));
                }
            }
            q
        })
        .collect()
}

pub(super) fn run(ctx: &mut Ctx) {
    let configs = ctx.count(200);
    for _ in 0..configs {
        let rng = &mut ctx.rng;
        let support = random_support(rng, RANK, 3);
        let keys: Vec<ReducedWord> = support.iter().cloned().collect();
        let phis: Vec<PhiMap> = (0..FACTORS).map(|_| random_phi(rng, RANK, &keys)).collect();
        let mono = random_monotone_phis(rng, RANK, FACTORS, &keys);
        let h = random_word(rng, RANK, 2);
        let chain = BallChain::random(rng, RANK, 6);
        let k = rng.gen_range(0..=1);
        let pres = FilterPresentation::random(rng, 3);
        let f: Vec<[u32; 2]> = (0..3).map(|_| [rng.gen_range(0..3), rng.gen_range(0..3)]).collect();
        let g: Vec<[u32; 2]> = f.iter().map(|x| [x[0] + rng.gen_range(0..3), x[1] + rng.gen_range(0..2)]).collect();
        let bigger = enlarge(rng, &phis);
        let samples: Vec<ReducedWord> = (0..40).map(|_| random_word(rng, RANK, MAX_LEN)).collect();
        let extra: Vec<ReducedWord> = (0..20).map(|_| random_word(rng, RANK, MAX_LEN)).collect();
        let bs: Vec<SubsetSpec> = (0..3).map(|_| random_subset(rng, RANK, 3, 2)).collect();

        let (sp, ph) = (json(&support), json(&phis));
        let outcome = unit(check_symmetry(&phis, &support, FACTORS, MAX_LEN));
        ctx.check(Show(|fm| write!(fm, "symmetry support={sp} phis={ph}")), outcome);

        let outcome = unit(check_squaring(&mono, &support, FACTORS / 2, MAX_LEN));
        ctx.check(Show(|fm| write!(fm, "squaring support={sp} phis={}", json(&mono))), outcome);

        let outcome = unit(check_conjugation(&phis, &h, &support, FACTORS, MAX_LEN));
        ctx.check(Show(|fm| write!(fm, "conjugation h={h} support={sp} phis={ph}")), outcome);

        let outcome = unit(check_birkhoff_kakutani(&chain, RANK, k, 3, MAX_LEN));
        ctx.check(Show(|fm| write!(fm, "birkhoff-kakutani k={k} chain={chain:?}")), outcome);

        let outcome = unit(check_filter_base_monotone(&pres, &f, &g, MAX_LEN));
        ctx.check(Show(|fm| write!(fm, "filter-base {pres:?} f={f:?} g={g:?}")), outcome);

        let outcome = match rd_monotone_check(&phis, &bigger, &samples, FACTORS, &support) {
            Ok(true) => Ok(()),
            Ok(false) => Err("a member under the smaller maps is missing under the larger".into()),
            Err(e) => Err(e.to_string()),
        };
        ctx.check(Show(|fm| write!(fm, "monotone phis={ph} larger={} support={sp}", json(&bigger))), outcome);

        // symmetric product: subset DP and DFS against plain enumeration
        let fast = sym_set(&bs, bs.len(), MAX_LEN).map_err(|e| e.to_string());
        let slow = brute_sym(&bs, MAX_LEN);
        let outcome = fast.and_then(|fast| {
            if fast != slow {
                return Err(format!("sym_set has {} words, enumeration has {}", fast.len(), slow.len()));
            }
            for w in slow.iter().chain(&extra) {
                let ans = sym_member(w, &bs, bs.len()).map_err(|e| e.to_string())?;
                if ans.is_yes() != slow.contains(w) || (ans.is_yes() && !verify_factorization(w, &bs, &ans)) {
                    return Err(format!("sym_member is wrong on {w}"));
                }
            }
            Ok(())
        });
        ctx.check(Show(|fm| write!(fm, "sym-oracle sets={} extra={}", json(&bs), json(&extra))), outcome);

        let vs: Vec<SubsetSpec> = phis.iter().map(|p| v_phi(p, &support)).collect();
        let ok = vs.iter().all(|v| v.iter().all(|w| v.contains(&w.inverse())));
        ctx.expect(Show(|fm| write!(fm, "vphi inverse-closed support={sp} phis={ph}")), ok, || {
            "conjugation union is not closed under inverses".into()
        });
    }
}
