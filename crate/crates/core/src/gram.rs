//! The Gram matrix of normalized Szegő kernels and the diagonal corrector
//! `D = diag(1 / B_j(alpha_j))` linking `G^{-1}` to the transpose of `G`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{normalized_kernel_product, separation_profile, PointSequence};
use crate::spectral::{CMatrix, HermitianEigen};

/// Condition number beyond which the exact identities are not testable.
pub const DEFAULT_COND_CAP: f64 = 1e12;

/// `G_ij = <g_j, g_i>`; Hermitian with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: CMatrix,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// The lower right corner left after deleting the first `skip` rows and columns.
    pub fn truncate(&self, skip: usize) -> Result<GramMatrix> {
        let n = self.dim();
        if skip > n {
            return Err(Error::IndexOutOfRange {
                index: skip,
                dim: n,
            });
        }
        let m = n - skip;
        Ok(GramMatrix {
            entries: self.entries.view((skip, skip), (m, m)).into_owned(),
        })
    }
}

/// `sqrt(1-|a_i|^2) sqrt(1-|a_j|^2) / (1 - conj(a_j) a_i)`; exactly 1 on the diagonal.
pub fn gram_entry(seq: &PointSequence, i: usize, j: usize) -> Result<Complex64> {
    let n = seq.len();
    for index in [i, j] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, dim: n });
        }
    }
    if i == j {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let pts = seq.points();
    Ok(normalized_kernel_product(&pts[i], &pts[j]))
}

/// Builds `G` from the upper triangle and mirrors conjugates below.
pub fn build_gram(seq: &PointSequence) -> Result<GramMatrix> {
    let n = seq.len();
    let pts = seq.points();
    let mut entries = CMatrix::identity(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let z = normalized_kernel_product(&pts[i], &pts[j]);
            entries[(i, j)] = z;
            entries[(j, i)] = z.conj();
        }
    }
    Ok(GramMatrix { entries })
}

/// `D_jj = 1 / B_j(alpha_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCorrector {
    pub entries: Vec<Complex64>,
}

impl DiagonalCorrector {
    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.entries.clone()))
    }
}

pub fn build_corrector(seq: &PointSequence) -> Result<DiagonalCorrector> {
    let profile = separation_profile(seq)?;
    let entries = profile
        .b_values
        .iter()
        .map(|b| Complex64::from_polar(1.0 / b.norm(), -b.arg()))
        .collect();
    Ok(DiagonalCorrector { entries })
}

/// Inverse and condition number of `G`, refusing matrices beyond `cond_cap`.
pub fn checked_inverse(g: &GramMatrix, cond_cap: f64) -> Result<(CMatrix, f64)> {
    let eig = HermitianEigen::new(g.matrix())?;
    let cond = eig.condition_number();
    if !(cond <= cond_cap) || eig.min() <= 0.0 {
        return Err(Error::IllConditioned {
            cond,
            cap: cond_cap,
        });
    }
    Ok((eig.inverse(), cond))
}

fn relative(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `||G^{-1} - D* G^t D||_F / ||G^{-1}||_F` (plain transpose).
pub fn koosis_residual(seq: &PointSequence) -> Result<f64> {
    koosis_residual_capped(seq, DEFAULT_COND_CAP)
}

pub fn koosis_residual_capped(seq: &PointSequence, cond_cap: f64) -> Result<f64> {
    if seq.is_empty() {
        return Ok(0.0);
    }
    let g = build_gram(seq)?;
    let d = build_corrector(seq)?.to_matrix();
    let (inv, _) = checked_inverse(&g, cond_cap)?;
    let rhs = d.adjoint() * g.matrix().transpose() * &d;
    Ok(relative((&inv - rhs).norm(), inv.norm()))
}

/// Residual of `G^{-1} - I = D*(G^t - I)D + (D*D - I)`, relative to
/// `||G^{-1} - I||_F + ||D*D - I||_F`.
pub fn eqc1_residual(seq: &PointSequence) -> Result<f64> {
    eqc1_residual_capped(seq, DEFAULT_COND_CAP)
}

pub fn eqc1_residual_capped(seq: &PointSequence, cond_cap: f64) -> Result<f64> {
    let n = seq.len();
    if n == 0 {
        return Ok(0.0);
    }
    let g = build_gram(seq)?;
    let d = build_corrector(seq)?.to_matrix();
    let (inv, _) = checked_inverse(&g, cond_cap)?;
    let id = CMatrix::identity(n, n);
    let lhs = inv - &id;
    let correction = d.adjoint() * &d - &id;
    let rhs = d.adjoint() * (g.matrix().transpose() - &id) * &d + &correction;
    Ok(relative(
        (&lhs - rhs).norm(),
        lhs.norm() + correction.norm(),
    ))
}

/// `||(G - I) e_n||^2 = sum_{j != n} |G_jn|^2`.
pub fn column_deficiency(g: &GramMatrix, n: usize) -> Result<f64> {
    let dim = g.dim();
    if n >= dim {
        return Err(Error::IndexOutOfRange { index: n, dim });
    }
    Ok((0..dim)
        .filter(|&j| j != n)
        .map(|j| g.get(j, n).norm_sqr())
        .sum())
}
