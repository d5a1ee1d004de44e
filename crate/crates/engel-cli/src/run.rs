//! Command dispatch. Exit codes: 0 success / all checks pass, 1 a check
//! failed (the report carries a witness), 2 input or parse error, 3 a
//! capacity cap was exceeded.

use std::fmt::Write as _;

use engel_core::group::{Group, GroupError};
use engel_core::verify::{self, CheckKind};
use engel_core::{engel, series, ExampleParams, DEFAULT_SET_ANALYSIS_CAP, HARD_CAP_CEILING};

use crate::defs;
use crate::registry::{self, Built};
use crate::report::{self, ReportDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Clone)]
pub enum Command {
    Engel { name: String },
    Series { name: String },
    Verify { what: CheckKind, target: String },
    VerifyExample { primes: Vec<u64>, exps: Vec<u32> },
}

#[derive(Debug, Clone)]
pub struct Options {
    pub defs_text: Option<String>,
    pub json: bool,
    pub max_order: Option<usize>,
}

pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

fn failure(exit_code: i32, message: String) -> Outcome {
    Outcome {
        exit_code,
        output: message,
    }
}

fn exit_for(err: &GroupError) -> i32 {
    match err {
        GroupError::CapExceeded { .. }
        | GroupError::Infinite { .. }
        | GroupError::ClosureDiverged { .. } => EXIT_CAPACITY,
        _ => EXIT_INPUT_ERROR,
    }
}

fn set_cap(opts: &Options) -> usize {
    opts.max_order
        .map(|c| c.min(HARD_CAP_CEILING))
        .unwrap_or(DEFAULT_SET_ANALYSIS_CAP)
}

/// Resolve a name against the definition file (if any), then the built-in
/// catalog.
fn resolve(name: &str, opts: &Options) -> Result<Built, Outcome> {
    let mut reg = registry::Registry::default();
    if let Some(text) = &opts.defs_text {
        let parsed = defs::parse_definitions(text)
            .map_err(|e| failure(EXIT_INPUT_ERROR, format!("error: {e}\n")))?;
        reg = registry::build(&parsed, opts.max_order).map_err(|e| {
            let code = e.group_error().map(exit_for).unwrap_or(EXIT_INPUT_ERROR);
            failure(code, format!("error: {e}\n"))
        })?;
    }
    if let Some(found) = reg.lookup(name) {
        return Ok(found.clone());
    }
    for entry in verify::catalog() {
        if entry.name == name {
            let group = match opts.max_order {
                Some(c) => entry.group.with_enumeration_cap(c.min(HARD_CAP_CEILING)),
                None => entry.group,
            };
            return Ok(Built::Finite(group));
        }
    }
    Err(failure(
        EXIT_INPUT_ERROR,
        format!("error: unknown group `{name}` (not in the definition file or catalog)\n"),
    ))
}

fn finite_or_fail(name: &str, built: Built) -> Result<Group, Outcome> {
    match built {
        Built::Finite(g) => Ok(g),
        Built::Symbolic(_) => Err(failure(
            EXIT_CAPACITY,
            format!("error: `{name}` is the symbolic infinite engine; use `verify-example`\n"),
        )),
    }
}

pub fn run(command: Command, opts: &Options) -> Outcome {
    match run_inner(command, opts) {
        Ok(outcome) => outcome,
        Err(outcome) => outcome,
    }
}

fn run_inner(command: Command, opts: &Options) -> Result<Outcome, Outcome> {
    let cap = set_cap(opts);
    match command {
        Command::Engel { name } => {
            let group = finite_or_fail(&name, resolve(&name, opts)?)?;
            let cls = engel::classify(&group, cap)
                .map_err(|e| failure(exit_for(&e), format!("error: {e}\n")))?;
            let mut doc = ReportDoc::new(&name, Some(group.order() as u64));
            doc.engel = Some(report::engel_json(&group, &cls));
            Ok(render(&[doc], opts, EXIT_OK))
        }
        Command::Series { name } => {
            let group = finite_or_fail(&name, resolve(&name, opts)?)?;
            let sr = series::series_report(&group, cap)
                .map_err(|e| failure(exit_for(&e), format!("error: {e}\n")))?;
            let mut doc = ReportDoc::new(&name, Some(group.order() as u64));
            doc.series = Some(report::series_json(&sr));
            Ok(render(&[doc], opts, EXIT_OK))
        }
        Command::Verify { what, target } => {
            let mut grouped: Vec<(String, Option<u64>, Vec<verify::CheckReport>)> = Vec::new();
            if target == "catalog" {
                for entry in verify::catalog() {
                    let group = match opts.max_order {
                        Some(c) => entry.group.with_enumeration_cap(c.min(HARD_CAP_CEILING)),
                        None => entry.group.clone(),
                    };
                    let mut reports = Vec::new();
                    verify::run_checks_for_group(&entry.name, &group, what, cap, &mut reports)
                        .map_err(|e| failure(exit_for(&e), format!("error: {e}\n")))?;
                    grouped.push((entry.name.clone(), Some(group.order() as u64), reports));
                }
            } else {
                let group = finite_or_fail(&target, resolve(&target, opts)?)?;
                let mut reports = Vec::new();
                verify::run_checks_for_group(&target, &group, what, cap, &mut reports)
                    .map_err(|e| failure(exit_for(&e), format!("error: {e}\n")))?;
                grouped.push((target.clone(), Some(group.order() as u64), reports));
            }
            let all_passed = grouped
                .iter()
                .flat_map(|(_, _, rs)| rs.iter())
                .all(|r| r.passed);
            let docs = report::docs_from_checks(&grouped);
            let code = if all_passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            Ok(render(&docs, opts, code))
        }
        Command::VerifyExample { primes, exps } => {
            if primes.len() != exps.len() {
                return Err(failure(
                    EXIT_INPUT_ERROR,
                    "error: --primes and --exps must have the same length\n".into(),
                ));
            }
            let components: Vec<(u64, u32)> = primes.into_iter().zip(exps).collect();
            let params = ExampleParams::new(components)
                .map_err(|e| failure(EXIT_INPUT_ERROR, format!("error: {e}\n")))?;
            let check = verify::check_example(&params, cap)
                .map_err(|e| failure(exit_for(&e), format!("error: {e}\n")))?;
            let mut doc = ReportDoc::new("example", None);
            doc.checks = Some(vec![report::check_json(&check)]);
            let code = if check.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            let mut outcome = render(&[doc], opts, code);
            if !opts.json {
                // append the detail lines in text mode
                let mut extra = String::new();
                for d in &check.details {
                    let _ = writeln!(extra, "  {d}");
                }
                outcome.output.push_str(&extra);
            }
            Ok(outcome)
        }
    }
}

fn render(docs: &[ReportDoc], opts: &Options, exit_code: i32) -> Outcome {
    let output = if opts.json {
        report::render_json(docs)
    } else {
        report::render_text(docs)
    };
    Outcome { exit_code, output }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options {
            defs_text: None,
            json: false,
            max_order: None,
        }
    }

    #[test]
    fn engel_s3_report() {
        let out = run(Command::Engel { name: "S3".into() }, &opts());
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(
            out.output.contains("left Engel set     (  3)"),
            "{}",
            out.output
        );
        assert!(
            out.output.contains("right Engel set    (  1)"),
            "{}",
            out.output
        );
    }

    #[test]
    fn engel_s3_json_shape() {
        let mut o = opts();
        o.json = true;
        let out = run(Command::Engel { name: "S3".into() }, &o);
        assert_eq!(out.exit_code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
        assert_eq!(v["group"]["name"], "S3");
        assert_eq!(v["group"]["order"], 6);
        assert_eq!(v["engel"]["left"].as_array().unwrap().len(), 3);
        assert_eq!(v["engel"]["right"].as_array().unwrap().len(), 1);
        assert_eq!(v["engel"]["bounded_right"]["()"], 1);
    }

    #[test]
    fn unknown_group_is_exit_2() {
        let out = run(
            Command::Series {
                name: "NoSuchGroup".into(),
            },
            &opts(),
        );
        assert_eq!(out.exit_code, EXIT_INPUT_ERROR);
        assert!(out.output.contains("unknown group"));
    }

    #[test]
    fn defs_file_takes_priority() {
        let mut o = opts();
        o.defs_text = Some("group S3 = cyclic 7".into());
        let out = run(Command::Engel { name: "S3".into() }, &o);
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.output.contains("order 7"), "{}", out.output);
    }

    #[test]
    fn parse_error_is_exit_2_with_position() {
        let mut o = opts();
        o.defs_text = Some("group X = perm 3 gens (1 4)".into());
        let out = run(Command::Engel { name: "X".into() }, &o);
        assert_eq!(out.exit_code, EXIT_INPUT_ERROR);
        assert!(out.output.contains("line 1"), "{}", out.output);
        assert!(out.output.contains("column"), "{}", out.output);
    }

    #[test]
    fn cap_exceeded_is_exit_3() {
        let mut o = opts();
        o.max_order = Some(10);
        let out = run(Command::Engel { name: "S4".into() }, &o);
        assert_eq!(out.exit_code, EXIT_CAPACITY, "{}", out.output);
    }

    #[test]
    fn series_on_symbolic_engine_is_rejected() {
        let mut o = opts();
        o.defs_text = Some("group EX = example primes=[3,5] exps=[2,3] N=2".into());
        let out = run(Command::Series { name: "EX".into() }, &o);
        assert_eq!(out.exit_code, EXIT_CAPACITY);
        assert!(out.output.contains("verify-example"));
    }

    #[test]
    fn verify_single_group() {
        let out = run(
            Command::Verify {
                what: CheckKind::Baer,
                target: "S3".into(),
            },
            &opts(),
        );
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.output.contains("[pass] baer"), "{}", out.output);
    }
}
