use criterion::{black_box, criterion_group, criterion_main, Criterion};

use omegabase::group_topology::sym_member;
use omegabase::order_lab::FnSeq;
use omegabase::poly::{gcd, Poly};
use omegabase::uniformity::{u_alpha_member, MetricSpace, PairProfiles};
use omegabase_bench::{field_pair, sample_words, sym_factors};

fn field(c: &mut Criterion) {
    let (a, b) = field_pair();
    c.bench_function("field/mul", |bn| bn.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("field/div", |bn| bn.iter(|| black_box(&a).checked_div(black_box(&b)).unwrap()));
    c.bench_function("field/compare", |bn| bn.iter(|| black_box(&a).compare(black_box(&b))));
}

fn poly_gcd(c: &mut Criterion) {
    let (a, b) = field_pair();
    let common = a.numerator().clone();
    let p = &common * b.numerator();
    let q = &common * b.denominator();
    c.bench_function("poly/gcd_common_factor", |bn| bn.iter(|| gcd(black_box(&p), black_box(&q))));
    let coprime: (Poly, Poly) = (b.numerator().clone(), b.denominator().clone());
    c.bench_function("poly/gcd_coprime", |bn| bn.iter(|| gcd(black_box(&coprime.0), black_box(&coprime.1))));
}

fn sym(c: &mut Criterion) {
    let bs = sym_factors();
    let words = sample_words();
    c.bench_function("group/sym_member_words_len4", |bn| {
        bn.iter(|| words.iter().filter(|w| sym_member(w, &bs, 3).unwrap().is_yes()).count())
    });
}

fn u_alpha(c: &mut Criterion) {
    let space = MetricSpace::convergent_sequence(100);
    let alpha = FnSeq::finite(vec![4]);
    c.bench_function("uniformity/u_alpha_member_all_pairs", |bn| {
        bn.iter(|| {
            let n = space.len();
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| u_alpha_member(&space, &alpha, x, y).unwrap()).count()
        })
    });
    c.bench_function("uniformity/profiles_entourage", |bn| {
        bn.iter(|| PairProfiles::new(black_box(&space)).entourage(&alpha).unwrap().len())
    });
}

criterion_group!(benches, field, poly_gcd, sym, u_alpha);
criterion_main!(benches);
