use anyhow::{anyhow, bail, Context, Result};
use gramlab::{generate, ComplexRecord, GeneratorSpec, PointRecord, SequenceFile};

use crate::output::{emit, json};
use crate::{Family, GenerateArgs};

fn parse_point(s: &str) -> Result<PointRecord> {
    let s = s.trim();
    let (re, im) = match s.split_once(':') {
        Some((re, im)) => (re.trim().parse::<f64>()?, im.trim().parse::<f64>()?),
        None => (s.parse::<f64>()?, 0.0),
    };
    Ok(PointRecord {
        re,
        im,
        log_defect: None,
        arg: None,
    })
}

fn rotation(phases: &[f64]) -> Option<Vec<ComplexRecord>> {
    if phases.is_empty() {
        return None;
    }
    Some(
        phases
            .iter()
            .map(|t| ComplexRecord {
                re: t.cos(),
                im: t.sin(),
            })
            .collect(),
    )
}

pub fn spec_from(
    family: Family,
    sigma: Option<f64>,
    q: Option<f64>,
    gamma: Option<f64>,
    count: Option<usize>,
    phases: &[f64],
) -> Result<GeneratorSpec> {
    let need = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| anyhow!("--{name} is required for this family"))
    };
    let count = || count.ok_or_else(|| anyhow!("--count is required for this family"));
    Ok(match family {
        Family::Geometric => GeneratorSpec::Geometric {
            sigma: need("sigma", sigma)?,
            count: count()?,
            rotation: rotation(phases),
        },
        Family::Supergeometric => GeneratorSpec::Supergeometric {
            sigma: need("sigma", sigma)?,
            q: need("q", q)?,
            count: count()?,
            rotation: rotation(phases),
        },
        Family::RatioProfile => GeneratorSpec::RatioProfile {
            sigma: need("sigma", sigma)?,
            gamma: need("gamma", gamma)?,
            count: count()?,
            rotation: rotation(phases),
        },
        Family::Explicit => bail!("explicit points are given with --points"),
    })
}

pub fn run(args: &GenerateArgs) -> Result<()> {
    let spec = if args.family == Family::Explicit {
        if !args.phases.is_empty() {
            bail!("--phases does not apply to explicit points");
        }
        let points = args
            .points
            .iter()
            .map(|s| parse_point(s).with_context(|| format!("bad point `{s}`")))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSpec::Explicit { points }
    } else {
        if !args.points.is_empty() {
            bail!("--points only applies to the explicit family");
        }
        spec_from(
            args.family,
            args.sigma,
            args.q,
            args.gamma,
            args.count,
            &args.phases,
        )?
    };
    let seq = generate(&spec)?;
    emit(
        args.out.as_deref(),
        &json(&SequenceFile::from_sequence(&seq))?,
    )
}
