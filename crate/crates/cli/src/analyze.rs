use anyhow::Result;
use gramlab::interpolation::interpolation_estimates;
use gramlab::verify::Analysis;
use gramlab::{format_number, Exponent};
use serde::Serialize;

use crate::output::{csv_writer, emit, finish, json, read_sequence};
use crate::{AnalyzeArgs, Format};

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub quantity: &'static str,
    pub index: Option<usize>,
    pub p: Option<String>,
    pub value: f64,
}

fn row(quantity: &'static str, value: f64) -> Row {
    Row {
        quantity,
        index: None,
        p: None,
        value,
    }
}

fn indexed(quantity: &'static str, index: usize, value: f64) -> Row {
    Row {
        quantity,
        index: Some(index),
        p: None,
        value,
    }
}

fn at_p(quantity: &'static str, p: Exponent, value: f64) -> Row {
    Row {
        quantity,
        index: None,
        p: Some(p.to_string()),
        value,
    }
}

pub fn rows(a: &Analysis, ps: &[Exponent], trials: usize, seed: u64) -> Vec<Row> {
    let n = a.n();
    let s = &a.summary;
    let mut out = vec![row("n", n as f64), row("delta_min", a.profile.delta_min)];
    for j in 0..n {
        out.push(indexed("delta", j, a.profile.delta[j]));
    }
    for j in 0..n {
        out.push(indexed("log_delta", j, a.profile.log_delta[j]));
    }
    for j in 0..n {
        out.push(indexed(
            "one_minus_delta_sq",
            j,
            a.profile.one_minus_delta_sq(j),
        ));
    }
    out.push(row(
        "sum_one_minus_delta_sq",
        (0..n).map(|j| a.profile.one_minus_delta_sq(j)).sum(),
    ));
    for &p in ps {
        let schatten = s.schatten_value(p).unwrap_or(f64::NAN);
        let lp = a.sqrt_gap_norm(p);
        out.push(at_p("schatten_norm", p, schatten));
        out.push(at_p("lp_norm_sqrt_one_minus_delta", p, lp));
        out.push(at_p(
            "lp_norm_sqrt_one_minus_delta_sq",
            p,
            a.delta_sq_norm(p),
        ));
        out.push(at_p(
            "ratio",
            p,
            if lp > 0.0 { schatten / lp } else { f64::NAN },
        ));
    }
    for (k, &sv) in s.sv_gmi.iter().enumerate() {
        out.push(indexed("singular_value", k + 1, sv));
    }
    out.push(row("op_norm_g_minus_i", s.op_norm_gmi));
    out.push(row("norm_g", s.norm_g));
    out.push(row("inv_norm_g", s.inv_norm_g));
    out.push(row("cond_g", s.cond_g));
    match interpolation_estimates(&a.seq, s, trials, seed) {
        Ok(e) => {
            out.push(row("m_lower_search", e.m_lower_search));
            out.push(row("m_lower_gram", e.m_lower_gram));
            out.push(row("m_upper_ss", e.m_upper_ss));
            out.push(row("m_upper_earl", e.m_upper_earl));
        }
        Err(e) => eprintln!("warning: interpolation estimates unavailable: {e}"),
    }
    out
}

pub fn run(args: &AnalyzeArgs) -> Result<()> {
    let seq = read_sequence(&args.file)?;
    let a = Analysis::new(&seq, &args.p)?;
    let rows = rows(&a, &args.p, args.trials, args.seed);
    let bytes = match args.format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["quantity", "index", "p", "value"])?;
            for r in &rows {
                w.write_record([
                    r.quantity.to_string(),
                    r.index.map(|i| i.to_string()).unwrap_or_default(),
                    r.p.clone().unwrap_or_default(),
                    format_number(r.value),
                ])?;
            }
            finish(w)?
        }
    };
    emit(args.out.as_deref(), &bytes)
}
