//! Seeded property suites over every module, with deterministic reports.
//!
//! Each suite draws all of its randomness from a ChaCha stream seeded by the
//! suite seed, so the list of cases (and its digest) depends only on the seed
//! and the scale. Wall time is measured separately and only attached on
//! request.

mod abelian;
mod field;
mod matrix;
pub mod oracle;
mod order;
mod reduced_power;
mod rd_lemmas;
mod uniformity;

use std::fmt::{self, Display, Write as _};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use field::random_element;

/// Suite names in report order.
pub const SUITES: &[&str] =
    &["abelian-sin", "field-axioms", "matrix", "order", "rd-lemmas", "reduced-power", "uniformity"];

/// Failures kept verbatim per report; the rest are only counted.
const MAX_LISTED_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite {name:?}; available suites: {}", SUITES.join(", "))]
    UnknownSuite { name: String },
    #[error("scale must be a positive finite number, got {0}")]
    BadScale(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Multiplies every sampled case count; exhaustive enumerations ignore it.
    pub scale: f64,
}

impl SuiteConfig {
    pub fn new(seed: u64, scale: f64) -> Result<Self, SuiteError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(SuiteError::BadScale(scale.to_string()));
        }
        Ok(SuiteConfig { seed, scale })
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, scale: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case: u64,
    pub input: String,
    pub detail: String,
    pub repro: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub scale: f64,
    pub cases: u64,
    /// SHA-256 over the inputs of every case, in order.
    pub case_digest: String,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Case recorder handed to each suite.
pub(crate) struct Ctx {
    suite: &'static str,
    cfg: SuiteConfig,
    cases: u64,
    hasher: Sha256,
    failures: Vec<Failure>,
    failure_count: u64,
    pub rng: ChaCha8Rng,
}

impl Ctx {
    fn new(suite: &'static str, cfg: SuiteConfig) -> Self {
        Ctx {
            suite,
            cfg,
            cases: 0,
            hasher: Sha256::new(),
            failures: Vec::new(),
            failure_count: 0,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        }
    }

    /// Sampled count at the configured scale, at least 1.
    pub fn count(&self, base: usize) -> usize {
        ((base as f64 * self.cfg.scale).ceil() as usize).max(1)
    }

    /// Records one case and its outcome.
    pub fn check(&mut self, input: impl Display, outcome: Result<(), String>) {
        let input = input.to_string();
        self.hasher.update(input.as_bytes());
        self.hasher.update(b"\n");
        self.cases += 1;
        if let Err(detail) = outcome {
            self.failure_count += 1;
            if self.failures.len() < MAX_LISTED_FAILURES {
                let repro = format!(
                    "omegabase suite {} --seed {} --scale {}  # case {}: {}",
                    self.suite, self.cfg.seed, self.cfg.scale, self.cases, input
                );
                self.failures.push(Failure { case: self.cases, input, detail, repro });
            }
        }
    }

    /// `check` for a boolean property.
    pub fn expect(&mut self, input: impl Display, ok: bool, detail: impl FnOnce() -> String) {
        self.check(input, if ok { Ok(()) } else { Err(detail()) });
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite.to_string(),
            seed: self.cfg.seed,
            scale: self.cfg.scale,
            cases: self.cases,
            case_digest: format!("{:x}", self.hasher.finalize()),
            failure_count: self.failure_count,
            failures: self.failures,
            wall_time_ms: None,
        }
    }
}

fn lookup(name: &str) -> Result<(&'static str, fn(&mut Ctx)), SuiteError> {
    let run: fn(&mut Ctx) = match name {
        "abelian-sin" => abelian::run,
        "field-axioms" => field::run,
        "matrix" => matrix::run,
        "order" => order::run,
        "rd-lemmas" => rd_lemmas::run,
        "reduced-power" => reduced_power::run,
        "uniformity" => uniformity::run,
        _ => return Err(SuiteError::UnknownSuite { name: name.to_string() }),
    };
    let name = SUITES.iter().find(|s| **s == name).expect("listed");
    Ok((name, run))
}

/// Runs one suite. With `timings` the wall time is attached, which makes the
/// report no longer reproducible byte for byte.
pub fn run_suite(name: &str, cfg: SuiteConfig, timings: bool) -> Result<SuiteReport, SuiteError> {
    let (name, run) = lookup(name)?;
    let start = Instant::now();
    let mut ctx = Ctx::new(name, cfg);
    run(&mut ctx);
    let mut report = ctx.finish();
    if timings {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs the named suites on separate threads; reports come back sorted by
/// suite name. Every name is validated before anything runs.
pub fn run_suites(names: &[&str], cfg: SuiteConfig, timings: bool) -> Result<Vec<SuiteReport>, SuiteError> {
    for n in names {
        lookup(n)?;
    }
    let mut reports: Vec<SuiteReport> = std::thread::scope(|s| {
        let handles: Vec<_> = names.iter().map(|n| s.spawn(move || run_suite(n, cfg, timings))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect::<Result<_, _>>()
    })?;
    reports.sort_by(|a, b| a.suite.cmp(&b.suite));
    Ok(reports)
}

/// Pretty JSON array of the reports, newline terminated.
pub fn reports_json(reports: &[SuiteReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

/// One row per suite, then the listed failures with their reproduction
/// commands.
pub fn markdown_table(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    out.push_str("| suite | status | cases | failures | seed | scale | digest |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for r in reports {
        let status = if r.passed() { "🟢 pass" } else { "🔴 fail" };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | `{}` |",
            r.suite,
            status,
            r.cases,
            r.failure_count,
            r.seed,
            r.scale,
            &r.case_digest[..12.min(r.case_digest.len())]
        );
    }
    let failing: Vec<&SuiteReport> = reports.iter().filter(|r| !r.passed()).collect();
    if !failing.is_empty() {
        out.push_str("\n## Failures\n");
        for r in failing {
            for f in &r.failures {
                let _ = writeln!(out, "- `{}` case {}: {}\n  - repro: `{}`", r.suite, f.case, f.detail, f.repro);
            }
            let hidden = r.failure_count - r.failures.len() as u64;
            if hidden > 0 {
                let _ = writeln!(out, "- `{}`: {hidden} more not listed", r.suite);
            }
        }
    }
    out
}

/// `Display` adapter for closures, used to build case inputs lazily.
pub(crate) struct Show<F: Fn(&mut fmt::Formatter<'_>) -> fmt::Result>(pub F);

impl<F: Fn(&mut fmt::Formatter<'_>) -> fmt::Result> Display for Show<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (self.0)(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(suite: &str, failures: u64) -> SuiteReport {
        let mut ctx = Ctx::new("matrix", SuiteConfig::default());
        for i in 0..3 {
            ctx.check(i, if (i as u64) < failures { Err("boom".into()) } else { Ok(()) });
        }
        let mut r = ctx.finish();
        r.suite = suite.into();
        r
    }

    #[test]
    fn unknown_suite_lists_the_available_ones() {
        let err = run_suite("nonexistent", SuiteConfig::default(), false).unwrap_err();
        let msg = err.to_string();
        for s in SUITES {
            assert!(msg.contains(s), "{msg}");
        }
        assert!(run_suites(&["matrix", "nope"], SuiteConfig::default(), false).is_err());
    }

    #[test]
    fn empty_failures_serialize_as_array() {
        let json = reports_json(&[report("a", 0)]);
        assert!(json.contains("\"failures\": []"), "{json}");
        assert!(!json.contains("null") && !json.contains("wall_time_ms"));
    }

    #[test]
    fn markdown_rows_and_failures() {
        let md = markdown_table(&[report("a", 0)]);
        assert_eq!(md.lines().count(), 3);
        assert!(md.contains("🟢 pass"));
        let md = markdown_table(&[report("a", 0), report("b", 2)]);
        assert!(md.contains("🔴 fail") && md.contains("repro: `omegabase suite matrix --seed 1"));
    }

    #[test]
    fn bad_scale_is_rejected() {
        assert!(SuiteConfig::new(1, 0.0).is_err());
        assert!(SuiteConfig::new(1, f64::NAN).is_err());
    }
}
