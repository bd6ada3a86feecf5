//! Spectra, operator and Schatten norms of `G - I`, and the truncation chain
//! bounding the singular values of `G - I` by tails of the sequence.

mod eigen;

pub use eigen::{hermitian_eigs, max_residual, CMatrix, HermitianEigen};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{separation_profile, PointSequence};
use crate::gram::{build_gram, GramMatrix};
use crate::interpolation::earl_bound_minus_one;

/// A Schatten exponent: a real `p` or the distinguished value `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinity => None,
        }
    }

    pub fn is_at_least(self, q: f64) -> bool {
        match self {
            Exponent::Finite(p) => p >= q,
            Exponent::Infinity => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "Inf" | "∞" => Ok(Exponent::Infinity),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|p| p.is_finite() && *p > 0.0)
                .map(Exponent::Finite)
                .ok_or_else(|| format!("invalid exponent `{s}`")),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(sum |x|^p)^(1/p)`, or `max |x|` for `p = inf`, computed with scaling.
pub fn lp_norm(xs: &[f64], p: Exponent) -> f64 {
    let top = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    match p {
        Exponent::Infinity => top,
        Exponent::Finite(p) => {
            if top == 0.0 {
                return 0.0;
            }
            let s: f64 = xs.iter().map(|x| (x.abs() / top).powf(p)).sum();
            top * s.powf(1.0 / p)
        }
    }
}

/// `sum |x|^p` (finite `p`).
pub fn power_sum(xs: &[f64], p: f64) -> f64 {
    xs.iter().map(|x| x.abs().powf(p)).sum()
}

/// Schatten-`p` norm of a Hermitian matrix, from its eigenvalues.
pub fn schatten_norm(h: &CMatrix, p: Exponent) -> Result<f64> {
    if let Exponent::Finite(q) = p {
        if q < 1.0 {
            return Err(Error::InvalidP(q));
        }
    }
    let eig = HermitianEigen::values_only(h)?;
    Ok(lp_norm(&eig.values, p))
}

/// `sum_n ||H e_n||^p` over the standard basis.
pub fn zhu_column_sum(h: &CMatrix, p: f64) -> f64 {
    h.column_iter()
        .map(|col| col.norm_squared().powf(0.5 * p))
        .sum()
}

/// `||H e_n||` for every column.
pub fn column_norms(h: &CMatrix) -> Vec<f64> {
    h.column_iter().map(|col| col.norm()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SchattenEntry {
    pub p: Exponent,
    pub value: f64,
}

/// Spectral data of `G` and `G - I`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    /// Eigenvalues of `G`, ascending.
    pub eigs_g: Vec<f64>,
    /// Singular values of `G - I`, nonincreasing (`|lambda - 1|`).
    pub sv_gmi: Vec<f64>,
    pub op_norm_gmi: f64,
    /// `||G||`.
    pub norm_g: f64,
    /// `||G^{-1}|| = 1 / lambda_min`.
    pub inv_norm_g: f64,
    pub schatten: Vec<SchattenEntry>,
    pub cond_g: f64,
}

impl SpectralSummary {
    pub fn from_eigenvalues(eigs_g: Vec<f64>, ps: &[Exponent]) -> Result<Self> {
        for p in ps {
            if let Exponent::Finite(q) = p {
                if *q < 1.0 {
                    return Err(Error::InvalidP(*q));
                }
            }
        }
        let mut sv_gmi: Vec<f64> = eigs_g.iter().map(|l| (l - 1.0).abs()).collect();
        sv_gmi.sort_by(|a, b| b.total_cmp(a));
        let op_norm_gmi = sv_gmi.first().copied().unwrap_or(0.0);
        let (norm_g, inv_norm_g, cond_g) = match (eigs_g.first(), eigs_g.last()) {
            (Some(&lo), Some(&hi)) => {
                let inv = if lo > 0.0 { 1.0 / lo } else { f64::INFINITY };
                (hi, inv, hi * inv)
            }
            _ => (0.0, 0.0, 1.0),
        };
        let schatten = ps
            .iter()
            .map(|&p| SchattenEntry {
                p,
                value: lp_norm(&sv_gmi, p),
            })
            .collect();
        Ok(Self {
            eigs_g,
            sv_gmi,
            op_norm_gmi,
            norm_g,
            inv_norm_g,
            schatten,
            cond_g,
        })
    }

    pub fn schatten_value(&self, p: Exponent) -> Option<f64> {
        self.schatten.iter().find(|e| e.p == p).map(|e| e.value)
    }

    /// 1-based singular value `lambda_k` of `G - I`.
    pub fn singular_value(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.sv_gmi.get(i).copied())
    }
}

/// `G - I`.
pub fn gram_minus_identity(g: &GramMatrix) -> CMatrix {
    let n = g.dim();
    g.matrix() - CMatrix::identity(n, n)
}

pub fn spectral_summary(seq: &PointSequence, ps: &[Exponent]) -> Result<SpectralSummary> {
    let g = build_gram(seq)?;
    let eig = HermitianEigen::values_only(g.matrix())?;
    SpectralSummary::from_eigenvalues(eig.values, ps)
}

/// One step of the truncation chain: the first `removed` points are dropped.
#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub removed: usize,
    /// `lambda_{2N+1}` of `G - I`, when `2N + 1 <= n`.
    pub lambda_2n1: Option<f64>,
    /// `||G_tail - I||`.
    pub tail_op_norm: f64,
    /// `||G_tail^{-1}|| - 1`.
    pub tail_inv_bound: f64,
    /// `M(delta_tail)^2 - 1` with the Earl form of `M`.
    pub earl_tail_bound: f64,
    pub tail_delta_min: f64,
    pub tail_cond: f64,
}

impl TailRow {
    /// Smallest slack of the three chain inequalities (negative means violated).
    pub fn min_slack(&self) -> f64 {
        let mut slack = (self.tail_inv_bound - self.tail_op_norm)
            .min(self.earl_tail_bound - self.tail_inv_bound);
        if let Some(l) = self.lambda_2n1 {
            slack = slack.min(self.tail_op_norm - l);
        }
        slack
    }

    /// True when every inequality holds with relative slack `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        let le = |a: f64, b: f64| a <= b + tol * b.abs().max(1.0);
        self.lambda_2n1.is_none_or(|l| le(l, self.tail_op_norm))
            && le(self.tail_op_norm, self.tail_inv_bound)
            && le(self.tail_inv_bound, self.earl_tail_bound)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TailChain {
    pub rows: Vec<TailRow>,
    /// Singular values of the full `G - I`, nonincreasing.
    pub singular_values: Vec<f64>,
}

impl TailChain {
    pub fn earl_column(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.earl_tail_bound).collect()
    }
}

/// For `N = 0..=n-2`: `lambda_{2N+1} <= ||T_N - I|| <= ||T_N^{-1}|| - 1 <= M(delta(T_N))^2 - 1`,
/// where `T_N` is the Gram matrix of the points after the first `N`.
///
/// The sequence is expected to be ordered by nondecreasing `delta_j`.
pub fn tail_chain(seq: &PointSequence) -> Result<TailChain> {
    let n = seq.len();
    if n < 3 {
        return Err(Error::TooShort { len: n, min: 3 });
    }
    let g = build_gram(seq)?;
    let full = HermitianEigen::values_only(g.matrix())?;
    let summary = SpectralSummary::from_eigenvalues(full.values, &[])?;
    let mut rows = Vec::with_capacity(n - 1);
    for removed in 0..=n - 2 {
        let tail = g.truncate(removed)?;
        let eig = HermitianEigen::values_only(tail.matrix())?;
        let s = SpectralSummary::from_eigenvalues(eig.values, &[])?;
        let profile = separation_profile(&seq.tail(removed))?;
        let log_delta = profile.log_delta_min();
        let earl = earl_bound_minus_one(log_delta)?;
        rows.push(TailRow {
            removed,
            lambda_2n1: summary.singular_value(2 * removed + 1),
            tail_op_norm: s.op_norm_gmi,
            tail_inv_bound: s.inv_norm_g - 1.0,
            earl_tail_bound: earl * (earl + 2.0),
            tail_delta_min: profile.delta_min,
            tail_cond: s.cond_g,
        });
    }
    Ok(TailChain {
        rows,
        singular_values: summary.sv_gmi,
    })
}

/// The explicit rank-`<= 2N` matrix sharing the first `N` rows and columns of `H`.
pub fn leading_cross(h: &CMatrix, n_lead: usize) -> CMatrix {
    let n = h.nrows();
    CMatrix::from_fn(n, n, |i, j| {
        if i < n_lead || j < n_lead {
            h[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, sort_by_delta, GeneratorSpec};
    use approx::assert_relative_eq;

    fn reals(xs: &[f64]) -> PointSequence {
        PointSequence::from_reals(xs).unwrap()
    }

    const H: f64 = 0.866_025_403_784_438_6;

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
        assert!("-1".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }

    #[test]
    fn schatten_of_pair() {
        let g = build_gram(&reals(&[0.0, 0.5])).unwrap();
        let gmi = gram_minus_identity(&g);
        assert_relative_eq!(
            schatten_norm(&gmi, Exponent::Finite(2.0)).unwrap(),
            1.5f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            schatten_norm(&gmi, Exponent::Infinity).unwrap(),
            H,
            max_relative = 1e-14
        );
        assert_eq!(
            schatten_norm(&CMatrix::zeros(3, 3), Exponent::Finite(3.0)).unwrap(),
            0.0
        );
        assert!(matches!(
            schatten_norm(&gmi, Exponent::Finite(0.5)),
            Err(Error::InvalidP(_))
        ));
    }

    #[test]
    fn column_sums_of_pair() {
        let g = build_gram(&reals(&[0.0, 0.5])).unwrap();
        let gmi = gram_minus_identity(&g);
        assert_relative_eq!(zhu_column_sum(&gmi, 2.0), 1.5, max_relative = 1e-14);
        assert_relative_eq!(zhu_column_sum(&gmi, 4.0), 1.125, max_relative = 1e-14);
        assert_eq!(zhu_column_sum(&CMatrix::zeros(2, 2), 3.0), 0.0);
    }

    #[test]
    fn summary_of_pair_and_singleton() {
        let s = spectral_summary(
            &reals(&[0.0, 0.5]),
            &[Exponent::Finite(2.0), Exponent::Infinity],
        )
        .unwrap();
        assert_relative_eq!(s.op_norm_gmi, H, max_relative = 1e-14);
        assert_relative_eq!(s.inv_norm_g, 1.0 / (1.0 - H), max_relative = 1e-13);
        assert_relative_eq!(s.inv_norm_g, 7.464_101_615_137_754, max_relative = 1e-13);
        assert_eq!(s.schatten_value(Exponent::Infinity), Some(s.op_norm_gmi));

        let s = spectral_summary(&reals(&[0.3]), &[Exponent::Finite(2.0)]).unwrap();
        assert_eq!(s.sv_gmi, vec![0.0]);
        assert_eq!(s.inv_norm_g, 1.0);
    }

    #[test]
    fn summary_frobenius_matches_offdiagonal_sum() {
        let seq = reals(&[0.0, 0.5, 0.75]);
        let s = spectral_summary(&seq, &[Exponent::Finite(2.0)]).unwrap();
        // oracle: twice the sum of (1 - rho^2) over unordered pairs
        let oracle = 2.0 * ((1.0 - 0.25) + (1.0 - 0.5625) + (1.0 - 0.16));
        assert_relative_eq!(
            s.schatten_value(Exponent::Finite(2.0)).unwrap().powi(2),
            oracle,
            max_relative = 1e-13
        );
    }

    #[test]
    fn tail_chain_needs_three_points() {
        assert!(matches!(
            tail_chain(&reals(&[0.1, 0.2])),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn tail_chain_three_points() {
        let seq = sort_by_delta(&reals(&[0.0, 0.5, 0.75])).unwrap();
        let chain = tail_chain(&seq).unwrap();
        assert_eq!(chain.rows.len(), 2);
        for row in &chain.rows {
            assert!(row.holds(1e-10), "{row:?}");
        }
        assert!(chain.rows[1].lambda_2n1.is_some());
    }

    #[test]
    fn supergeometric_chain_decreases() {
        let spec = GeneratorSpec::Supergeometric {
            sigma: 0.5,
            q: 2.0,
            count: 8,
            rotation: None,
        };
        let seq = sort_by_delta(&generate(&spec).unwrap()).unwrap();
        let chain = tail_chain(&seq).unwrap();
        for w in chain.rows.windows(2) {
            assert!(w[1].tail_op_norm <= w[0].tail_op_norm);
            assert!(w[1].earl_tail_bound <= w[0].earl_tail_bound);
        }
        assert!(chain.rows.iter().all(|r| r.holds(1e-10)));
    }

    #[test]
    fn rank_cross_bound() {
        let seq = reals(&[0.1, -0.4, 0.6, 0.2, -0.8, 0.9]);
        let g = build_gram(&seq).unwrap();
        let gmi = gram_minus_identity(&g);
        let s = spectral_summary(&seq, &[]).unwrap();
        for lead in 0..3 {
            let rest = &gmi - leading_cross(&gmi, lead);
            let bound = schatten_norm(&rest, Exponent::Infinity).unwrap();
            assert!(s.singular_value(2 * lead + 1).unwrap() <= bound + 1e-10);
        }
    }

    #[test]
    fn lp_norms() {
        assert_eq!(lp_norm(&[], Exponent::Finite(2.0)), 0.0);
        assert_relative_eq!(lp_norm(&[3.0, 4.0], Exponent::Finite(2.0)), 5.0);
        assert_eq!(lp_norm(&[3.0, -4.0], Exponent::Infinity), 4.0);
    }
}
