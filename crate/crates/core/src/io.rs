//! File schema for sequences and the flat report row used by CSV output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{generate, DiskPoint, GeneratorSpec, PointSequence};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

/// A stored point. `log_defect` (`ln(1 - |z|)`) and `arg` are written only
/// when `re`/`im` do not determine the point exactly, which happens close to
/// the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub re: f64,
    pub im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_defect: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arg: Option<f64>,
}

impl PointRecord {
    pub fn from_point(p: &DiskPoint) -> Self {
        if p.is_cartesian_exact() {
            Self {
                re: p.re(),
                im: p.im(),
                log_defect: None,
                arg: None,
            }
        } else {
            Self {
                re: p.re(),
                im: p.im(),
                log_defect: Some(p.log_defect()),
                arg: Some(p.arg()),
            }
        }
    }

    pub fn to_point(&self, index: usize) -> Result<DiskPoint> {
        let outside = || Error::NotInDisk {
            index,
            modulus: self.re.hypot(self.im),
        };
        match (self.log_defect, self.arg) {
            (None, None) => DiskPoint::new(self.re, self.im).ok_or_else(outside),
            (Some(ld), Some(arg)) => {
                if !(self.re.hypot(self.im) <= 1.0) {
                    return Err(outside());
                }
                let p = DiskPoint::from_parts(self.re, self.im, ld, arg).ok_or_else(outside)?;
                let drift = (p.to_complex()
                    - DiskPoint::from_log_defect(ld, arg).unwrap().to_complex())
                .norm();
                if drift > 1e-12 {
                    return Err(Error::InvalidFile(format!(
                        "point {index}: re/im disagree with log_defect/arg by {drift:e}"
                    )));
                }
                Ok(p)
            }
            _ => Err(Error::InvalidFile(format!(
                "point {index}: log_defect and arg must be given together"
            ))),
        }
    }
}

/// On-disk sequence: either explicit points or a generator description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
}

impl SequenceFile {
    pub fn from_sequence(seq: &PointSequence) -> Self {
        Self {
            points: Some(seq.points().iter().map(PointRecord::from_point).collect()),
            generator: None,
        }
    }

    pub fn from_generator(spec: GeneratorSpec) -> Self {
        Self {
            points: None,
            generator: Some(spec),
        }
    }

    pub fn to_sequence(&self) -> Result<PointSequence> {
        match (&self.points, &self.generator) {
            (Some(points), None) => {
                let pts = points
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r.to_point(i))
                    .collect::<Result<Vec<_>>>()?;
                PointSequence::new(pts)
            }
            (None, Some(spec)) => generate(spec),
            _ => Err(Error::InvalidFile(
                "exactly one of `points` or `generator` must be present".into(),
            )),
        }
    }
}

/// Renders a number with 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// One flat CSV record of a verification or sweep report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub delta_min: f64,
    pub p: Option<String>,
    pub schatten_norm: Option<f64>,
    pub lp_norm: Option<f64>,
    pub ratio: Option<f64>,
    pub check: String,
    pub status: String,
    pub residual: Option<f64>,
}

impl ReportRow {
    pub const HEADER: [&'static str; 9] = [
        "n",
        "delta_min",
        "p",
        "schatten_norm",
        "lp_norm",
        "ratio",
        "check",
        "status",
        "residual",
    ];

    pub fn to_record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(format_number).unwrap_or_default();
        vec![
            self.n.to_string(),
            format_number(self.delta_min),
            self.p.clone().unwrap_or_default(),
            opt(self.schatten_norm),
            opt(self.lp_norm),
            opt(self.ratio),
            self.check.clone(),
            self.status.clone(),
            opt(self.residual),
        ]
    }
}
