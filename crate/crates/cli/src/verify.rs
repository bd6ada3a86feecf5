use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::Result;
use gramlab::verify::Analysis;
use gramlab::{format_number, run_suite, ReportRow, Status, VerificationReport, VerifierConfig};

use crate::output::{csv_writer, emit, finish, json, read_sequence};
use crate::{Format, VerifyArgs};

pub fn config(args: &VerifyArgs) -> VerifierConfig {
    let mut cfg = VerifierConfig {
        ps: args.p.clone(),
        trials: args.trials,
        seed: args.seed,
        suite: args.suite,
        ..Default::default()
    };
    if let Some(tol) = args.tol {
        cfg.tol_identity = tol;
        cfg.tol_ineq = tol;
    }
    if let Some(cap) = args.cond_cap {
        cfg.cond_cap = cap;
    }
    cfg
}

pub fn render_text(report: &VerificationReport) -> String {
    let f = &report.fingerprint;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n = {}  delta_min = {}  cond(G) = {}",
        f.n,
        format_number(f.delta_min),
        format_number(f.cond_g)
    );
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{:<7} {:<36} {:>24}  {}",
            c.status.to_string(),
            c.name,
            format_number(c.value),
            c.detail
        );
    }
    let fails = report.failures().count();
    let _ = writeln!(
        s,
        "{}: {} checks, {} failed",
        if fails == 0 { "PASS" } else { "FAIL" },
        report.checks.len(),
        fails
    );
    s
}

/// One row per check; `const_band` rows also carry the norms their ratio is built from.
pub fn report_rows(report: &VerificationReport, a: &Analysis) -> Vec<ReportRow> {
    report
        .checks
        .iter()
        .map(|c| {
            let band = c.name.starts_with("const_band");
            let (schatten, lp) = match (band, c.p) {
                (true, Some(p)) => (a.summary.schatten_value(p), Some(a.sqrt_gap_norm(p))),
                _ => (None, None),
            };
            let ratio = match (schatten, lp) {
                (Some(s), Some(l)) if l > 0.0 => Some(s / l),
                _ => None,
            };
            ReportRow {
                n: report.fingerprint.n,
                delta_min: report.fingerprint.delta_min,
                p: c.p.map(|p| p.to_string()),
                schatten_norm: schatten,
                lp_norm: lp,
                ratio,
                check: c.name.clone(),
                status: c.status.to_string(),
                residual: (c.status != Status::Skipped).then_some(c.value),
            }
        })
        .collect()
}

pub fn run(args: &VerifyArgs) -> Result<ExitCode> {
    let seq = read_sequence(&args.file)?;
    let cfg = config(args);
    let report = run_suite(&seq, &cfg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &args.out {
        let bytes = match args.format {
            Format::Json => json(&report)?,
            Format::Csv => {
                let a = Analysis::new(&seq, &cfg.ps)?;
                let mut w = csv_writer();
                w.write_record(ReportRow::HEADER)?;
                for r in report_rows(&report, &a) {
                    w.write_record(r.to_record())?;
                }
                finish(w)?
            }
        };
        emit(Some(path), &bytes)?;
    }
    emit(None, render_text(&report).as_bytes())?;
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
