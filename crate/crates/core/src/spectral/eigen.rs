//! Dense complex Hermitian eigensolver.
//!
//! Householder reduction to a Hermitian tridiagonal matrix, a diagonal
//! unitary that makes the off-diagonal real, then implicit-shift QL on the
//! real symmetric tridiagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues (ascending) and, optionally, orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Option<CMatrix>,
}

impl HermitianEigen {
    /// Full decomposition with eigenvectors.
    pub fn new(m: &CMatrix) -> Result<Self> {
        decompose(m, true)
    }

    /// Eigenvalues only.
    pub fn values_only(m: &CMatrix) -> Result<Self> {
        decompose(m, false)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    /// `V f(L) V*`. Panics if the decomposition was computed without vectors.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let v = self
            .vectors
            .as_ref()
            .expect("eigenvectors were not computed");
        let n = self.values.len();
        let mut scaled = v.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * v.adjoint()
    }

    pub fn inverse(&self) -> CMatrix {
        self.apply_fn(|l| 1.0 / l)
    }

    /// `max |lambda| / min |lambda|`.
    pub fn condition_number(&self) -> f64 {
        if self.values.is_empty() {
            return 1.0;
        }
        let hi = self.values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        let lo = self
            .values
            .iter()
            .fold(f64::INFINITY, |m, l| m.min(l.abs()));
        hi / lo
    }
}

/// Eigenvalues of a Hermitian matrix, ascending, with the residual of every
/// eigenpair checked against `tol * ||M||_F`.
pub fn hermitian_eigs(m: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    let eig = HermitianEigen::new(m)?;
    let scale = m.norm().max(f64::MIN_POSITIVE);
    if max_residual(m, &eig) > tol * scale {
        return Err(Error::NoConvergence(
            "Hermitian eigensolver (residual check)",
        ));
    }
    Ok(eig.values)
}

/// `max_k ||M v_k - lambda_k v_k||`.
pub fn max_residual(m: &CMatrix, eig: &HermitianEigen) -> f64 {
    let Some(v) = eig.vectors.as_ref() else {
        return f64::NAN;
    };
    let mv = m * v;
    let mut worst = 0.0f64;
    for (k, &lambda) in eig.values.iter().enumerate() {
        let r = (mv.column(k) - v.column(k) * Complex64::new(lambda, 0.0)).norm();
        worst = worst.max(r);
    }
    worst
}

fn decompose(m: &CMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: want_vectors.then(|| CMatrix::zeros(0, 0)),
        });
    }
    let mut a = m.clone();
    let mut q = want_vectors.then(|| CMatrix::identity(n, n));
    tridiagonalize(&mut a, q.as_mut());

    let mut diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    // phases making the subdiagonal real and nonnegative
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    for k in 0..n - 1 {
        let e = a[(k + 1, k)];
        let r = e.norm();
        off[k] = r;
        phase[k + 1] = if r > 0.0 {
            phase[k] * (e / r)
        } else {
            phase[k]
        };
    }

    let mut z = want_vectors.then(|| DMatrix::<f64>::identity(n, n));
    tridiagonal_ql(&mut diag, &mut off, z.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();

    let vectors = match (q, z) {
        (Some(q), Some(z)) => {
            // eigenvectors of the input: Q * diag(phase) * Z
            let mut qd = q;
            for j in 0..n {
                for i in 0..n {
                    qd[(i, j)] *= phase[j];
                }
            }
            let zc = CMatrix::from_fn(n, n, |i, j| Complex64::new(z[(i, order[j])], 0.0));
            Some(qd * zc)
        }
        _ => None,
    };
    Ok(HermitianEigen { values, vectors })
}

/// Reduces `a` in place so that only its main and first sub/super diagonals
/// are nonzero; accumulates the unitary into `q` when given.
fn tridiagonalize(a: &mut CMatrix, mut q: Option<&mut CMatrix>) {
    let n = a.nrows();
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let alpha = (start..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let tail = (start + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if alpha == 0.0 || tail == 0.0 {
            continue;
        }
        let x0 = a[(start, k)];
        let dir = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -dir * alpha;
        for i in start..n {
            u[i] = a[(i, k)];
        }
        u[start] -= beta;
        let unorm2: f64 = (start..n).map(|i| u[i].norm_sqr()).sum();
        let tau = 2.0 / unorm2;

        // p = tau * S u, with S the trailing block
        for i in start..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in start..n {
                acc += a[(i, j)] * u[j];
            }
            w[i] = acc * tau;
        }
        let mut upu = Complex64::new(0.0, 0.0);
        for i in start..n {
            upu += u[i].conj() * w[i];
        }
        let half = 0.5 * tau * upu.re;
        for i in start..n {
            w[i] -= u[i] * half;
        }
        // S <- S - u w* - w u*
        for j in start..n {
            let wj = w[j].conj();
            let uj = u[j].conj();
            for i in start..n {
                a[(i, j)] -= u[i] * wj + w[i] * uj;
            }
        }
        a[(start, k)] = beta;
        a[(k, start)] = beta.conj();
        for i in start + 1..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
            a[(k, i)] = Complex64::new(0.0, 0.0);
        }

        if let Some(q) = q.as_deref_mut() {
            // Q <- Q (I - tau u u*)
            for r in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in start..n {
                    acc += q[(r, i)] * u[i];
                }
                acc *= tau;
                for i in start..n {
                    q[(r, i)] -= acc * u[i].conj();
                }
            }
        }
    }
}

/// Implicit-shift QL on the symmetric tridiagonal with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i + 1`; the last entry is unused).
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut DMatrix<f64>>) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::NoConvergence("tridiagonal QL iteration"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * f;
                        z[(k, i)] = c * z[(k, i)] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
