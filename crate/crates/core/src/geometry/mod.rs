//! Disk geometry: the pseudohyperbolic metric, Blaschke factors and the
//! separation profile of a finite sequence.

mod generate;
mod point;

pub use generate::{generate, random_separated, GeneratorSpec};
pub use point::DiskPoint;

pub(crate) use point::{blaschke_factor_polar, normalized_kernel_product, PairSeparation};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pairs closer than this in the pseudohyperbolic metric are treated as the same point.
pub const DUPLICATE_THRESHOLD: f64 = 1e-14;

/// Pairs closer than this are reported as a conditioning hazard.
pub const NEAR_DUPLICATE_WARNING: f64 = 1e-6;

/// `|(a - b) / (1 - conj(b) a)|`.
pub fn pseudo_dist(a: &DiskPoint, b: &DiskPoint) -> f64 {
    PairSeparation::new(a, b).rho()
}

/// `1 - rho(a, b)^2`, accurate when `rho` is close to 1.
pub fn one_minus_pseudo_dist_sq(a: &DiskPoint, b: &DiskPoint) -> f64 {
    PairSeparation::new(a, b).one_minus_rho_sq()
}

/// The unnormalized automorphism factor `(zero - z) / (1 - conj(zero) z)`.
pub fn blaschke_factor(zero: &DiskPoint, z: &DiskPoint) -> Complex64 {
    blaschke_factor_polar(zero, z).to_complex()
}

/// An ordered list of pairwise distinct points of the disk.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSequence {
    points: Vec<DiskPoint>,
}

impl PointSequence {
    pub fn new(points: Vec<DiskPoint>) -> Result<Self> {
        for (i, a) in points.iter().enumerate() {
            for (j, b) in points.iter().enumerate().skip(i + 1) {
                let distance = pseudo_dist(a, b);
                if distance < DUPLICATE_THRESHOLD {
                    return Err(Error::DuplicatePoints {
                        first: i,
                        second: j,
                        distance,
                    });
                }
            }
        }
        Ok(Self { points })
    }

    pub fn from_cartesian(coords: &[(f64, f64)]) -> Result<Self> {
        let points = coords
            .iter()
            .enumerate()
            .map(|(index, &(re, im))| {
                DiskPoint::new(re, im).ok_or(Error::NotInDisk {
                    index,
                    modulus: re.hypot(im),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    /// Real points on the diameter.
    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        let coords: Vec<_> = xs.iter().map(|&x| (x, 0.0)).collect();
        Self::from_cartesian(&coords)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DiskPoint] {
        &self.points
    }

    pub fn get(&self, index: usize) -> Option<&DiskPoint> {
        self.points.get(index)
    }

    /// The subsequence left after dropping the first `skip` points.
    pub fn tail(&self, skip: usize) -> Self {
        Self {
            points: self.points[skip.min(self.len())..].to_vec(),
        }
    }

    /// The first `len` points.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            points: self.points[..len.min(self.len())].to_vec(),
        }
    }

    /// Reorders the points: entry `k` of the result is `self[order[k]]`.
    ///
    /// Panics if `order` is not a permutation of `0..len`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len(), "permutation length mismatch");
        let mut seen = vec![false; self.len()];
        let points = order
            .iter()
            .map(|&k| {
                assert!(!std::mem::replace(&mut seen[k], true), "index {k} repeated");
                self.points[k]
            })
            .collect();
        Self { points }
    }

    /// Multiplies every point by `exp(i * angle)`.
    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p.rotated(angle)).collect(),
        }
    }

    /// Appends a point, rejecting duplicates.
    pub fn with_point(&self, point: DiskPoint) -> Result<Self> {
        let mut points = self.points.clone();
        points.push(point);
        Self::new(points)
    }

    /// The closest pair as `(i, j, rho)`, if there are at least two points.
    pub fn closest_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, a) in self.points.iter().enumerate() {
            for (j, b) in self.points.iter().enumerate().skip(i + 1) {
                let d = pseudo_dist(a, b);
                if best.is_none_or(|(_, _, m)| d < m) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }
}

/// Per-point separation data `delta_j = |B_j(alpha_j)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationProfile {
    pub log_delta: Vec<f64>,
    pub delta: Vec<f64>,
    pub b_values: Vec<Complex64>,
    pub delta_min: f64,
}

impl SeparationProfile {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// `1 - delta_j^2`, accurate for `delta_j` near 1.
    pub fn one_minus_delta_sq(&self, j: usize) -> f64 {
        -(2.0 * self.log_delta[j]).exp_m1()
    }

    /// `1 - delta_j`.
    pub fn one_minus_delta(&self, j: usize) -> f64 {
        -self.log_delta[j].exp_m1()
    }

    /// `ln delta_min`; zero for sequences with fewer than two points.
    pub fn log_delta_min(&self) -> f64 {
        self.log_delta.iter().copied().fold(0.0, f64::min)
    }
}

/// Computes `delta_j`, `ln delta_j` and `B_j(alpha_j)` for every point.
///
/// Moduli are accumulated as sums of `ln rho`; the phases of `B_j(alpha_j)`
/// come from the individual factors.
pub fn separation_profile(seq: &PointSequence) -> Result<SeparationProfile> {
    let n = seq.len();
    let pts = seq.points();
    let mut log_delta = vec![0.0; n];
    let mut log_b = vec![0.0; n];
    let mut arg_b = vec![0.0; n];
    for j in 0..n {
        for k in 0..n {
            if k == j {
                continue;
            }
            let ln_rho = PairSeparation::new(&pts[j], &pts[k]).ln_rho();
            if ln_rho == f64::NEG_INFINITY {
                let (first, second) = (j.min(k), j.max(k));
                return Err(Error::DuplicatePoints {
                    first,
                    second,
                    distance: 0.0,
                });
            }
            log_delta[j] += ln_rho;
            let factor = blaschke_factor_polar(&pts[k], &pts[j]);
            log_b[j] += factor.ln_modulus;
            arg_b[j] += factor.arg;
        }
    }
    let delta: Vec<f64> = log_delta.iter().map(|l| l.exp()).collect();
    let b_values = log_b
        .iter()
        .zip(&arg_b)
        .map(|(&l, &a)| Complex64::from_polar(l.exp(), a))
        .collect();
    let delta_min = delta.iter().copied().fold(1.0, f64::min);
    Ok(SeparationProfile {
        log_delta,
        delta,
        b_values,
        delta_min,
    })
}

/// Stable reordering of the points by nondecreasing `delta_j`.
pub fn sort_by_delta(seq: &PointSequence) -> Result<PointSequence> {
    let profile = separation_profile(seq)?;
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by(|&a, &b| profile.log_delta[a].total_cmp(&profile.log_delta[b]));
    Ok(seq.permuted(&order))
}

/// `C(delta) = -ln(delta^2) / (1 - delta^2)`, the comparison constant between
/// `1 - x` and `-ln x` on `[delta^2, 1]`; equals 1 at `delta = 1`.
pub fn log_band_constant(log_delta: f64) -> f64 {
    let x = 2.0 * log_delta;
    if x == 0.0 {
        1.0
    } else {
        x / x.exp_m1()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reals(xs: &[f64]) -> PointSequence {
        PointSequence::from_reals(xs).unwrap()
    }

    fn p(x: f64) -> DiskPoint {
        DiskPoint::new(x, 0.0).unwrap()
    }

    #[test]
    fn pseudo_dist_examples() {
        assert_relative_eq!(pseudo_dist(&p(0.0), &p(0.5)), 0.5, epsilon = 1e-15);
        // (0.75 - 0.5) / (1 - 0.375) = 0.4
        assert_relative_eq!(pseudo_dist(&p(0.5), &p(0.75)), 0.4, epsilon = 1e-15);
        assert_eq!(pseudo_dist(&p(0.3), &p(0.3)), 0.0);
    }

    #[test]
    fn blaschke_factor_examples() {
        let f = blaschke_factor(&p(0.5), &p(0.0));
        assert!((f - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let f = blaschke_factor(&p(0.0), &p(0.5));
        assert!((f - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(blaschke_factor(&p(0.2), &p(0.2)).norm(), 0.0);
    }

    #[test]
    fn profile_of_three_reals() {
        let prof = separation_profile(&reals(&[0.0, 0.5, 0.75])).unwrap();
        for (got, want) in prof.delta.iter().zip([0.375, 0.2, 0.3]) {
            assert_relative_eq!(*got, want, max_relative = 1e-14);
        }
        assert_relative_eq!(prof.delta_min, 0.2, max_relative = 1e-14);
    }

    #[test]
    fn profile_singleton_and_pair() {
        let prof = separation_profile(&reals(&[0.3])).unwrap();
        assert_eq!(prof.delta, vec![1.0]);
        assert_eq!(prof.delta_min, 1.0);

        let prof = separation_profile(&reals(&[0.0, 0.5])).unwrap();
        assert!((prof.b_values[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((prof.b_values[1] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert_relative_eq!(prof.delta[0], 0.5, max_relative = 1e-15);
        assert_relative_eq!(prof.delta[1], 0.5, max_relative = 1e-15);
    }

    #[test]
    fn empty_profile() {
        let prof = separation_profile(&PointSequence::empty()).unwrap();
        assert!(prof.is_empty());
        assert_eq!(prof.delta_min, 1.0);
    }

    #[test]
    fn sorting_by_delta() {
        let seq = reals(&[0.0, 0.5, 0.75]);
        let sorted = sort_by_delta(&seq).unwrap();
        let xs: Vec<f64> = sorted.points().iter().map(|p| p.re()).collect();
        assert_eq!(xs, vec![0.5, 0.75, 0.0]);
        assert_eq!(sort_by_delta(&sorted).unwrap(), sorted);
        assert!(sort_by_delta(&PointSequence::empty()).unwrap().is_empty());
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = PointSequence::from_reals(&[0.1, 0.4, 0.1]).unwrap_err();
        assert!(matches!(
            err,
            Error::DuplicatePoints {
                first: 0,
                second: 2,
                ..
            }
        ));
    }

    #[test]
    fn outside_points_name_their_index() {
        let err = PointSequence::from_cartesian(&[(0.1, 0.0), (0.8, 0.8)]).unwrap_err();
        assert!(matches!(err, Error::NotInDisk { index: 1, .. }));
    }

    #[test]
    fn band_constant_values() {
        assert_eq!(log_band_constant(0.0), 1.0);
        let c = log_band_constant(0.2f64.ln());
        assert_relative_eq!(c, -(0.04f64.ln()) / 0.96, max_relative = 1e-14);
        assert!((c - 3.3530).abs() < 1e-4);
    }
}
