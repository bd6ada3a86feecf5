//! Nevanlinna–Pick feasibility, minimal interpolation norms, and the bounds
//! on the interpolation constant coming from Earl's estimate and from the
//! norms of `G` and `G^{-1}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{separation_profile, PointSequence};
use crate::gram::{build_gram, GramMatrix};
use crate::spectral::{CMatrix, HermitianEigen, SpectralSummary};

/// Relative tolerance of the positive semidefiniteness test.
pub const PSD_TOLERANCE: f64 = 1e-10;

pub const DEFAULT_BISECTION_TOL: f64 = 1e-8;

/// Sign patterns are enumerated exhaustively up to this many nodes.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Largest ratio between the bisection bracket and `max |w|`.
const MAX_BRACKET_RATIO: f64 = 1e6;

/// Interpolation data `f(z_i) = w_i`.
#[derive(Debug, Clone)]
pub struct PickProblem {
    nodes: PointSequence,
    targets: Vec<Complex64>,
    gram: GramMatrix,
}

impl PickProblem {
    pub fn new(nodes: PointSequence, targets: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != targets.len() {
            return Err(Error::LengthMismatch {
                nodes: nodes.len(),
                targets: targets.len(),
            });
        }
        let gram = build_gram(&nodes)?;
        Ok(Self {
            nodes,
            targets,
            gram,
        })
    }

    fn with_gram(gram: &GramMatrix, nodes: &PointSequence, targets: Vec<Complex64>) -> Self {
        Self {
            nodes: nodes.clone(),
            targets,
            gram: gram.clone(),
        }
    }

    pub fn nodes(&self) -> &PointSequence {
        &self.nodes
    }

    pub fn targets(&self) -> &[Complex64] {
        &self.targets
    }

    pub fn max_target(&self) -> f64 {
        self.targets.iter().fold(0.0, |m, w| m.max(w.norm()))
    }

    /// The Pick matrix `[(t^2 - w_i conj(w_j)) / (1 - z_i conj(z_j))]` scaled on
    /// both sides by `diag(sqrt(1 - |z_i|^2))`, i.e. `(t^2 - w_i conj(w_j)) G_ij`.
    /// The congruence keeps the inertia and keeps entries bounded near the circle.
    pub fn scaled_pick_matrix(&self, t: f64) -> CMatrix {
        let n = self.targets.len();
        let t2 = t * t;
        CMatrix::from_fn(n, n, |i, j| {
            (Complex64::new(t2, 0.0) - self.targets[i] * self.targets[j].conj())
                * self.gram.get(i, j)
        })
    }
}

/// True iff data of `prob` admit an interpolant with sup norm at most `t`.
pub fn pick_feasible(prob: &PickProblem, t: f64) -> bool {
    if prob.targets.is_empty() {
        return true;
    }
    let Ok(eig) = HermitianEigen::values_only(&prob.scaled_pick_matrix(t)) else {
        return false;
    };
    let positive: f64 = eig.values.iter().filter(|l| **l > 0.0).sum();
    eig.min() >= -PSD_TOLERANCE * positive
}

/// Smallest feasible norm, to absolute `tol`, by bisection.
///
/// The returned value is the lower end of the final bracket, the largest norm
/// found infeasible (or `max |w|` when that is already feasible).
pub fn min_norm(prob: &PickProblem, tol: f64) -> Result<f64> {
    let lo0 = prob.max_target();
    if pick_feasible(prob, lo0) {
        return Ok(lo0);
    }
    let mut lo = lo0;
    let mut hi = 2.0 * lo0;
    while !pick_feasible(prob, hi) {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_BRACKET_RATIO * lo0 {
            return Err(Error::NoConvergence("Pick bracket doubling"));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pick_feasible(prob, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

fn sign_pattern(n: usize, bits: u64) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            if k > 0 && (bits >> (k - 1)) & 1 == 1 {
                -1.0
            } else {
                1.0
            }
        })
        .map(|s| Complex64::new(s, 0.0))
        .collect()
}

/// A lower bound on the interpolation constant of `seq`: the largest minimal
/// norm over unimodular data. All `±1` patterns are tried when
/// `n <= EXHAUSTIVE_LIMIT` (the first sign is fixed, since a global sign
/// does not change the minimal norm), followed by `trials` seeded random
/// unimodular vectors.
pub fn interp_constant_lower(seq: &PointSequence, trials: usize, seed: u64) -> Result<f64> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::TooShort { len: 0, min: 1 });
    }
    let gram = build_gram(seq)?;
    let mut candidates: Vec<Vec<Complex64>> = Vec::new();
    if n <= EXHAUSTIVE_LIMIT {
        candidates.extend((0..1u64 << (n - 1)).map(|bits| sign_pattern(n, bits)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v = (0..n)
            .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        candidates.push(v);
    }
    let norms = candidates
        .into_par_iter()
        .map(|targets| {
            min_norm(
                &PickProblem::with_gram(&gram, seq, targets),
                DEFAULT_BISECTION_TOL,
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(norms.into_iter().fold(1.0, f64::max))
}

/// `((1 + sqrt(1 - delta^2)) / delta)^2`.
pub fn earl_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidDelta(delta));
    }
    Ok(earl_bound_minus_one(delta.ln())? + 1.0)
}

/// `earl_bound(delta) - 1` from `ln delta`, accurate as `delta -> 1`:
/// with `s = sqrt(1 - delta^2)` it equals `2 s (1 + s) / delta^2`.
pub fn earl_bound_minus_one(log_delta: f64) -> Result<f64> {
    if !(log_delta <= 0.0) || log_delta == f64::NEG_INFINITY {
        return Err(Error::InvalidDelta(log_delta.exp()));
    }
    let gap = -(2.0 * log_delta).exp_m1();
    let s = if gap > 0.0 { gap.sqrt() } else { 0.0 };
    Ok(2.0 * s * (1.0 + s) * (-2.0 * log_delta).exp())
}

/// `(max(sqrt ||G||, sqrt ||G^{-1}||), sqrt(||G|| ||G^{-1}||))`.
pub fn ss_bounds(summary: &SpectralSummary) -> (f64, f64) {
    if summary.eigs_g.is_empty() {
        return (1.0, 1.0);
    }
    let (a, b) = (summary.norm_g, summary.inv_norm_g);
    (a.sqrt().max(b.sqrt()), (a * b).sqrt())
}

/// Lower and upper estimates of the interpolation constant of one sequence.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InterpolationEstimates {
    pub m_lower_search: f64,
    pub m_lower_gram: f64,
    pub m_upper_ss: f64,
    pub m_upper_earl: f64,
}

pub fn interpolation_estimates(
    seq: &PointSequence,
    summary: &SpectralSummary,
    trials: usize,
    seed: u64,
) -> Result<InterpolationEstimates> {
    let profile = separation_profile(seq)?;
    let (m_lower_gram, m_upper_ss) = ss_bounds(summary);
    let m_lower_search = if seq.is_empty() {
        1.0
    } else {
        interp_constant_lower(seq, trials, seed)?
    };
    Ok(InterpolationEstimates {
        m_lower_search,
        m_lower_gram,
        m_upper_ss,
        m_upper_earl: earl_bound_minus_one(profile.log_delta_min())? + 1.0,
    })
}
