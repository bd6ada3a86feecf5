use anyhow::{bail, Context, Result};
use gramlab::verify::Analysis;
use gramlab::{format_number, generate, sort_by_delta, tail_chain, Exponent};
use rayon::prelude::*;

use crate::generate::spec_from;
use crate::output::{csv_writer, emit, finish};
use crate::{Family, SweepArgs};

pub fn parse_count_range(s: &str) -> Result<(usize, usize)> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .with_context(|| format!("bad count `{t}`"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let c = parse(s)?;
            (c, c)
        }
    };
    if lo == 0 || lo > hi {
        bail!("count range `{s}` must satisfy 1 <= lo <= hi");
    }
    Ok((lo, hi))
}

struct Instance {
    sigma: f64,
    param: Option<f64>,
    count: usize,
}

fn instances(args: &SweepArgs) -> Result<Vec<Instance>> {
    let params: Vec<Option<f64>> = match args.family {
        Family::Geometric => {
            if !args.q.is_empty() || !args.gamma.is_empty() {
                bail!("--q and --gamma do not apply to the geometric family");
            }
            vec![None]
        }
        Family::Supergeometric if !args.q.is_empty() => args.q.iter().copied().map(Some).collect(),
        Family::Supergeometric => bail!("--q is required for the supergeometric family"),
        Family::RatioProfile if !args.gamma.is_empty() => {
            args.gamma.iter().copied().map(Some).collect()
        }
        Family::RatioProfile => bail!("--gamma is required for the ratio-profile family"),
        Family::Explicit => bail!("sweeps need a parametric family"),
    };
    let (lo, hi) = parse_count_range(&args.count)?;
    let mut sigmas = args.sigma.clone();
    let mut params = params;
    sigmas.sort_by(f64::total_cmp);
    sigmas.dedup();
    params.sort_by(|a, b| a.unwrap_or(0.0).total_cmp(&b.unwrap_or(0.0)));
    params.dedup();
    let mut out = Vec::new();
    for &sigma in &sigmas {
        for &param in &params {
            for count in lo..=hi {
                out.push(Instance {
                    sigma,
                    param,
                    count,
                });
            }
        }
    }
    Ok(out)
}

fn header(head: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "family",
        "sigma",
        "param",
        "count",
        "n",
        "delta_min",
        "p",
        "schatten_norm",
        "lp_norm",
        "ratio",
        "sum_one_minus_delta_sq",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for k in 0..head {
        h.push(format!("tail_norm_{k}"));
        h.push(format!("tail_earl_{k}"));
    }
    h
}

fn instance_rows(
    family: Family,
    inst: &Instance,
    ps: &[Exponent],
    head: usize,
) -> Result<Vec<Vec<String>>> {
    let (q, gamma) = match family {
        Family::Supergeometric => (inst.param, None),
        Family::RatioProfile => (None, inst.param),
        _ => (None, None),
    };
    let spec = spec_from(family, Some(inst.sigma), q, gamma, Some(inst.count), &[])?;
    let seq = generate(&spec)?;
    let a = Analysis::new(&seq, ps)?;
    let sum: f64 = (0..a.n()).map(|j| a.profile.one_minus_delta_sq(j)).sum();
    let chain = if seq.len() >= 3 {
        Some(tail_chain(&sort_by_delta(&seq)?)?)
    } else {
        None
    };

    let name = match family {
        Family::Geometric => "geometric",
        Family::Supergeometric => "supergeometric",
        Family::RatioProfile => "ratio-profile",
        Family::Explicit => "explicit",
    };
    let mut rows = Vec::with_capacity(ps.len());
    for &p in ps {
        let schatten = a.summary.schatten_value(p).unwrap_or(f64::NAN);
        let lp = a.sqrt_gap_norm(p);
        let ratio = if lp > 0.0 {
            format_number(schatten / lp)
        } else {
            String::new()
        };
        let mut r = vec![
            name.to_string(),
            format_number(inst.sigma),
            inst.param.map(format_number).unwrap_or_default(),
            inst.count.to_string(),
            a.n().to_string(),
            format_number(a.profile.delta_min),
            p.to_string(),
            format_number(schatten),
            format_number(lp),
            ratio,
            format_number(sum),
        ];
        for k in 0..head {
            match chain.as_ref().and_then(|c| c.rows.get(k)) {
                Some(row) => {
                    r.push(format_number(row.tail_op_norm));
                    r.push(format_number(row.earl_tail_bound));
                }
                None => r.extend([String::new(), String::new()]),
            }
        }
        rows.push(r);
    }
    Ok(rows)
}

pub fn run(args: &SweepArgs) -> Result<()> {
    for s in &args.sigma {
        if !(*s > 0.0 && *s < 1.0) {
            bail!("sigma must lie in (0, 1), got {s}");
        }
    }
    let instances = instances(args)?;
    let computed = instances
        .par_iter()
        .map(|inst| instance_rows(args.family, inst, &args.p, args.tail_head))
        .collect::<Result<Vec<_>>>()?;
    let mut w = csv_writer();
    w.write_record(header(args.tail_head))?;
    for rows in computed {
        for r in rows {
            w.write_record(&r)?;
        }
    }
    emit(args.out.as_deref(), &finish(w)?)
}
