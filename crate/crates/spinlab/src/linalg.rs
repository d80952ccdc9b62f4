//! Dense and matrix-free linear algebra helpers: Hermitian eigenvalues,
//! spectral norms, matrix exponentials and polar re-unitarization.

use crate::error::{Error, Result};
use crate::kron;
use crate::rng;
use crate::C64;
use nalgebra::DMatrix;

/// Dimension up to which Hermitian operator norms use a dense eigensolve;
/// larger operators go through Lanczos.
pub const DENSE_NORM_CAP: usize = 256;

/// Dimension cap for dense eigensolves (torus modes, group elements).
pub const DENSE_EIGEN_CAP: usize = 4096;

/// Materialize a linear operator column by column.
pub fn materialize(dim: usize, mut apply: impl FnMut(&[C64]) -> Vec<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(dim, dim);
    let mut e = vec![kron::ZERO; dim];
    for j in 0..dim {
        e.fill(kron::ZERO);
        e[j] = kron::ONE;
        let col = apply(&e);
        for i in 0..dim {
            m[(i, j)] = col[i];
        }
    }
    m
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let dim = m.nrows();
    if dim > DENSE_EIGEN_CAP {
        return Err(Error::DenseCapExceeded { dim, cap: DENSE_EIGEN_CAP });
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(ev)
}

/// Largest |entry| of a complex matrix.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Frobenius norm of a complex matrix.
pub fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius norm of a real matrix.
pub fn frobenius_real(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Spectral norm of a dense Hermitian matrix.
pub fn spectral_norm_dense(m: &DMatrix<C64>) -> Result<f64> {
    let ev = hermitian_eigenvalues(m)?;
    Ok(ev.iter().fold(0.0f64, |acc, &x| acc.max(x.abs())))
}

/// Spectral norm of a Hermitian operator given matrix-free.
///
/// Lanczos with full reorthogonalization and a deterministic seeded start.
/// Extreme Ritz values approach the true extremes from inside the spectrum,
/// so the returned norm never overshoots. Non-convergence within `max_iter`
/// is a hard error, never a silent estimate.
pub fn spectral_norm_lanczos(
    dim: usize,
    mut apply: impl FnMut(&[C64]) -> Vec<C64>,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    if dim == 0 {
        return Ok(0.0);
    }
    if dim == 1 {
        let out = apply(&[kron::ONE]);
        return Ok(out[0].re.abs());
    }

    let steps_cap = dim.min(max_iter);
    let mut r = rng::derived(seed, "lanczos", 0);
    let mut basis: Vec<Vec<C64>> = vec![rng::unit_spinor(&mut r, dim)];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last = (f64::INFINITY, f64::NEG_INFINITY);
    let mut stable = 0usize;

    for step in 0..steps_cap {
        let v = basis.last().expect("non-empty basis").clone();
        let mut w = apply(&v);
        let alpha = kron::inner(&w, &v).re;
        alphas.push(alpha);
        // Full reorthogonalization, twice for good measure.
        for _ in 0..2 {
            for u in &basis {
                let c = kron::inner(&w, u);
                kron::axpy(&mut w, -c, u);
            }
        }
        let beta = kron::norm(&w);

        let check_now = step % 4 == 3 || beta < 1e-14 || step + 1 == steps_cap;
        if check_now {
            let (lo, hi) = tridiagonal_extremes(&alphas, &betas);
            if (lo - last.0).abs() <= tol * (1.0 + lo.abs())
                && (hi - last.1).abs() <= tol * (1.0 + hi.abs())
            {
                stable += 1;
            } else {
                stable = 0;
            }
            last = (lo, hi);
            if stable >= 2 {
                return Ok(lo.abs().max(hi.abs()));
            }
        }

        if basis.len() == dim {
            break;
        }
        if beta < 1e-14 {
            // Invariant subspace found; restart in its orthogonal complement.
            let mut fresh = rng::unit_spinor(&mut r, dim);
            for _ in 0..2 {
                for u in &basis {
                    let c = kron::inner(&fresh, u);
                    kron::axpy(&mut fresh, -c, u);
                }
            }
            let nrm = kron::norm(&fresh);
            if nrm < 1e-10 {
                break; // space exhausted
            }
            kron::scale(&mut fresh, C64::new(1.0 / nrm, 0.0));
            betas.push(0.0);
            basis.push(fresh);
        } else {
            kron::scale(&mut w, C64::new(1.0 / beta, 0.0));
            betas.push(beta);
            basis.push(w);
        }
    }

    // Basis spans an invariant chain of the whole space (or cap reached):
    // the tridiagonal eigenvalues are as good as they will get.
    if basis.len() >= dim || alphas.len() >= steps_cap {
        let (lo, hi) = tridiagonal_extremes(&alphas, &betas);
        if basis.len() >= dim {
            return Ok(lo.abs().max(hi.abs()));
        }
    }
    Err(Error::EigenConvergence { iterations: steps_cap })
}

fn tridiagonal_extremes(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let ev = t.symmetric_eigen().eigenvalues;
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Hermitian operator norm with automatic dense/iterative selection.
pub fn hermitian_operator_norm(
    dim: usize,
    mut apply: impl FnMut(&[C64]) -> Vec<C64>,
    seed: u64,
) -> Result<f64> {
    if dim <= DENSE_NORM_CAP {
        let m = materialize(dim, &mut apply);
        spectral_norm_dense(&m)
    } else {
        spectral_norm_lanczos(dim, apply, seed, 1e-10, 10_000)
    }
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn matrix_exp(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let norm = max_abs(a) * n as f64;
    let s = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
    let b = a / C64::new(2f64.powi(s as i32), 0.0);
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = DMatrix::<C64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &b / C64::new(k as f64, 0.0);
        sum += &term;
        if max_abs(&term) < 1e-20 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Distance from unitarity, max |U^H U − I|.
pub fn unitarity_drift(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - DMatrix::<C64>::identity(n, n)))
}

/// Project onto the unitary polar factor by Newton iteration when the drift
/// exceeds the tolerance.
pub fn unitarize(u: DMatrix<C64>, tol: f64) -> DMatrix<C64> {
    let mut x = u;
    for _ in 0..8 {
        if unitarity_drift(&x) <= tol {
            break;
        }
        let inv_h = x
            .clone()
            .try_inverse()
            .expect("polar iteration of a near-unitary matrix")
            .adjoint();
        x = (x + inv_h) * C64::new(0.5, 0.0);
    }
    x
}
