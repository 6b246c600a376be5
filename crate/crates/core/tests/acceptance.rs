//! Acceptance criteria, run at full scale. Runs without the libtest harness
//! so the per-criterion lines are always printed; exits nonzero if any
//! criterion fails.

use std::cmp::Ordering;

use num_traits::{One, Signed};
use omegabase::poly::RationalFunction;
use omegabase::reduced_power::{compare_ev, in_open_ball, interleave, star_metric};
use omegabase::suites::{reports_json, run_suite};
use omegabase::{EventualSeq, Rational, SuiteConfig, SuiteReport};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(name: &str, seed: u64, min_cases: u64) -> (Outcome, Option<SuiteReport>) {
    let cfg = SuiteConfig::new(seed, 1.0).expect("valid config");
    match run_suite(name, cfg, false) {
        Ok(rep) => {
            let ok = rep.passed() && rep.cases >= min_cases;
            let mut detail = format!("{} cases, {} failures", rep.cases, rep.failure_count);
            if let Some(f) = rep.failures.first() {
                detail += &format!("; first: {} ({})", f.detail, f.repro);
            }
            (Outcome { ok, detail }, Some(rep))
        }
        Err(e) => (Outcome { ok: false, detail: e.to_string() }, None),
    }
}

/// The interleaving instance recomputed outside the suite: `g_n` are the
/// partial sums of `2^-m`, `ε_n = 2^(2-n)`, and each distance is also
/// checked pointwise on a window past the last cut.
fn interleaving_instance() -> Outcome {
    let partial = |k: i64| Rational::one() - r(1, 1 << k);
    let g: Vec<EventualSeq> = (1..=20)
        .map(|n| EventualSeq::new((0..n).map(partial).collect(), RationalFunction::constant(partial(n))).unwrap())
        .collect();
    let eps: Vec<EventualSeq> = (1..=20i64).map(|n| EventualSeq::constant(r(4, 1 << n))).collect();
    let instances: Vec<_> = g.iter().cloned().zip(eps.iter().cloned()).collect();
    let cuts: Vec<usize> = (1..20).map(|k| 3 * k).collect();
    let out = match interleave(&instances, &cuts) {
        Ok(out) => out,
        Err(e) => return Outcome { ok: false, detail: e.to_string() },
    };
    for (n, (gn, en)) in g.iter().zip(&eps).enumerate() {
        let d = star_metric(&out.h, gn).unwrap();
        let exact = compare_ev(&d, en) == Ordering::Less && in_open_ball(&out.h, gn, en).unwrap();
        let window = (100..140).all(|i| (out.h.at(i) - gn.at(i)).abs() < en.at(i));
        if !exact || !window {
            return Outcome { ok: false, detail: format!("d(h, g_{}) is not below eps_{}", n + 1, n + 1) };
        }
    }
    Outcome { ok: true, detail: "h within eps_n of g_n for n = 1..20".into() }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome { ok: a.ok && b.ok, detail: format!("{}; {}", a.detail, b.detail) }
}

fn main() {
    // (criterion, suite, seed, cases required by the criterion)
    let plan: [(&str, &str, u64, u64); 7] = [
        ("1 field axioms, non-archimedean, oracle", "field-axioms", 1, 10_000 + 10_000 + 1_000),
        ("2 matrix shrink_radius soundness", "matrix", 1, 2 * 1_000),
        ("3 reduced power metric and interleaving", "reduced-power", 1, 1_000 + 20),
        ("4 Roelcke-Dierolf lemmas", "rd-lemmas", 7, 4 * 200),
        ("5 abelian SIN base", "abelian-sin", 1, 1),
        ("6 order certificates", "order", 1, 1),
        ("7 uniformity monotone and cofinal", "uniformity", 1, 50),
    ];
    let mut lines = Vec::new();
    let mut first_run = Vec::new();
    for (label, name, seed, min_cases) in plan {
        let (mut outcome, rep) = suite(name, seed, min_cases);
        if name == "reduced-power" {
            outcome = both(outcome, interleaving_instance());
        }
        lines.push((label.to_string(), outcome));
        first_run.extend(rep.map(|rep| (name, seed, rep)));
    }

    let mut mismatched = Vec::new();
    for (name, seed, rep) in &first_run {
        let again = run_suite(name, SuiteConfig::new(*seed, 1.0).unwrap(), false).unwrap();
        if reports_json(std::slice::from_ref(rep)) != reports_json(&[again]) {
            mismatched.push(*name);
        }
    }
    let det = Outcome {
        ok: mismatched.is_empty() && first_run.len() == 7,
        detail: if mismatched.is_empty() {
            format!("{} suites re-run byte-identical", first_run.len())
        } else {
            format!("reports differ: {mismatched:?}")
        },
    };
    lines.push(("8 determinism".to_string(), det));

    for (label, o) in &lines {
        println!("criterion {label}: {} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed = lines.iter().filter(|(_, o)| !o.ok).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
