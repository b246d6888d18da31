//! Runner for the acceptance suite in `tests/acceptance.rs`.
//!
//! Each criterion is a plain function returning an [`Outcome`] and a time
//! budget. The runner prints one `[PASS]`/`[FAIL]` line per criterion and
//! reports whether all of them passed. A criterion that overruns its budget
//! fails even when its check passed.

use std::time::{Duration, Instant};

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

pub fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

pub struct Criterion {
    pub name: &'static str,
    pub check: fn() -> Outcome,
    pub budget: Duration,
}

impl Criterion {
    pub fn new(name: &'static str, check: fn() -> Outcome, budget_secs: u64) -> Self {
        Self {
            name,
            check,
            budget: Duration::from_secs(budget_secs),
        }
    }
}

/// What the command line asks for. Libtest-style flags are accepted and
/// ignored so that `cargo test` can pass its usual arguments.
#[derive(Debug, Default, PartialEq)]
pub struct Invocation {
    pub list: bool,
    pub filters: Vec<String>,
}

impl Invocation {
    pub fn parse<I: IntoIterator<Item = String>>(args: I) -> Self {
        let mut inv = Invocation::default();
        let mut it = args.into_iter();
        while let Some(a) = it.next() {
            match a.as_str() {
                "--list" => inv.list = true,
                "--test-threads" | "--skip" | "--format" | "--color" | "--logfile" => {
                    it.next();
                }
                f if !f.starts_with('-') => inv.filters.push(a),
                _ => {}
            }
        }
        inv
    }

    pub fn selects(&self, name: &str) -> bool {
        self.filters.is_empty() || self.filters.iter().any(|f| name.contains(f.as_str()))
    }
}

/// Runs the selected criteria, writing the report to `out`. Returns true when
/// every selected criterion passed.
pub fn run_suite(criteria: &[Criterion], inv: &Invocation, out: &mut impl std::io::Write) -> std::io::Result<bool> {
    if inv.list {
        for c in criteria {
            writeln!(out, "{}: test", c.name)?;
        }
        return Ok(true);
    }
    let (mut ran, mut failed) = (0, 0);
    for (k, c) in criteria.iter().enumerate() {
        if !inv.selects(c.name) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = result.pass && in_time;
        if !pass {
            failed += 1;
        }
        writeln!(
            out,
            "[{}] {:>2} {}: {} ({:.1}s of {}s{})",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            c.name,
            result.detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            if in_time { "" } else { ", over time" }
        )?;
        out.flush()?;
    }
    writeln!(out, "acceptance: {} of {} criteria passed", ran - failed, ran)?;
    Ok(failed == 0)
}
