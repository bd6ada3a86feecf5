use serde::{Deserialize, Serialize};

use super::{DiskPoint, PointSequence};
use crate::error::{Error, Result};
use crate::io::{ComplexRecord, PointRecord};

/// Parameters of a test-sequence family.
///
/// Radii are produced through `ln(1 - r)` so that families converging to the
/// circle very fast stay representable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// `alpha_k = 1 - sigma^k`.
    Geometric {
        sigma: f64,
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<Vec<ComplexRecord>>,
    },
    /// `alpha_k = 1 - sigma^(q^k)`.
    Supergeometric {
        sigma: f64,
        q: f64,
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<Vec<ComplexRecord>>,
    },
    /// `r_1 = sigma`, `1 - r_{k+1} = (1 - r_k) (k + 1)^(-gamma)`.
    RatioProfile {
        sigma: f64,
        gamma: f64,
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<Vec<ComplexRecord>>,
    },
    Explicit {
        points: Vec<PointRecord>,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("sigma must lie in (0, 1), got {sigma}")))
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        Err(invalid("count must be positive"))
    } else {
        Ok(())
    }
}

fn phases(rotation: &Option<Vec<ComplexRecord>>, count: usize) -> Result<Vec<f64>> {
    match rotation {
        None => Ok(vec![0.0; count]),
        Some(list) => {
            if list.len() != count {
                return Err(invalid(format!(
                    "rotation has {} phases for {count} points",
                    list.len()
                )));
            }
            list.iter()
                .enumerate()
                .map(|(k, u)| {
                    let m = u.re.hypot(u.im);
                    if (m - 1.0).abs() > 1e-12 {
                        Err(invalid(format!("rotation phase {k} has modulus {m}")))
                    } else {
                        Ok(u.im.atan2(u.re))
                    }
                })
                .collect()
        }
    }
}

fn from_log_defects(log_defects: &[f64], angles: &[f64]) -> Result<PointSequence> {
    let points = log_defects
        .iter()
        .zip(angles)
        .enumerate()
        .map(|(k, (&ld, &angle))| {
            DiskPoint::from_log_defect(ld, angle)
                .ok_or_else(|| invalid(format!("point {k} leaves the disk (ln(1 - r) = {ld})")))
        })
        .collect::<Result<Vec<_>>>()?;
    PointSequence::new(points).map_err(|e| invalid(format!("generated points collide: {e}")))
}

/// Builds the sequence described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<PointSequence> {
    match spec {
        GeneratorSpec::Geometric {
            sigma,
            count,
            rotation,
        } => {
            check_sigma(*sigma)?;
            check_count(*count)?;
            let ln_sigma = sigma.ln();
            let lds: Vec<f64> = (1..=*count).map(|k| k as f64 * ln_sigma).collect();
            from_log_defects(&lds, &phases(rotation, *count)?)
        }
        GeneratorSpec::Supergeometric {
            sigma,
            q,
            count,
            rotation,
        } => {
            check_sigma(*sigma)?;
            check_count(*count)?;
            if !(q.is_finite() && *q > 1.0) {
                return Err(invalid(format!("q must exceed 1, got {q}")));
            }
            let ln_sigma = sigma.ln();
            let lds: Vec<f64> = (1..=*count).map(|k| q.powi(k as i32) * ln_sigma).collect();
            from_log_defects(&lds, &phases(rotation, *count)?)
        }
        GeneratorSpec::RatioProfile {
            sigma,
            gamma,
            count,
            rotation,
        } => {
            check_sigma(*sigma)?;
            check_count(*count)?;
            if !(gamma.is_finite() && *gamma > 0.0) {
                return Err(invalid(format!("gamma must be positive, got {gamma}")));
            }
            let mut lds = Vec::with_capacity(*count);
            let mut ld = (-sigma).ln_1p();
            for k in 1..=*count {
                lds.push(ld);
                ld -= gamma * ((k + 1) as f64).ln();
            }
            from_log_defects(&lds, &phases(rotation, *count)?)
        }
        GeneratorSpec::Explicit { points } => {
            let pts = points
                .iter()
                .enumerate()
                .map(|(i, r)| r.to_point(i))
                .collect::<Result<Vec<_>>>()?;
            PointSequence::new(pts).map_err(|e| invalid(format!("explicit points collide: {e}")))
        }
    }
}

/// Draws up to `n` points with `delta_min >= min_delta`, one at a time:
/// radius from `ln(1 - r)` uniform on `[-depth, 0)`, uniform angle, and a
/// candidate is dropped whenever it would push the separation below the floor.
/// Stops early if `n * 64` candidates have been rejected.
pub fn random_separated<R: rand::Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    min_delta: f64,
    depth: f64,
) -> Result<PointSequence> {
    if !(min_delta > 0.0 && min_delta < 1.0) || !(depth > 0.0 && depth.is_finite()) {
        return Err(invalid(
            "random_separated needs 0 < min_delta < 1 and depth > 0",
        ));
    }
    let mut seq = PointSequence::empty();
    let mut rejected = 0;
    while seq.len() < n && rejected < 64 * n {
        let ld = -rng.random_range(0.0..depth);
        let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let Some(p) = DiskPoint::from_log_defect(ld, angle) else {
            rejected += 1;
            continue;
        };
        match seq.with_point(p) {
            Ok(next) if super::separation_profile(&next)?.delta_min >= min_delta => seq = next,
            _ => rejected += 1,
        }
    }
    Ok(seq)
}
