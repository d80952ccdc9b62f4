//! Flat-torus realization of the twisted Dirac operator.
//!
//! On the torus of side 2π with trivialized bundles and constant so(r)-valued
//! connection coefficients θ_j, every covariant operator acts mode by mode:
//! on the Fourier mode ξ ∈ ℤⁿ the covariant derivative in direction j is the
//! matrix iξ_j + θ̂_j with θ̂_j = ½ Σ_{k<l} ⟨θ_j f_k, f_l⟩ κ_{r*}^m(f_k f_l)
//! acting on the twist slots, the Dirac operator is
//! D(ξ) = Σ_j κ(e_j)·(iξ_j + θ̂_j), Hermitian with real spectrum, and the
//! connection Laplacian is Δ^θ(ξ) = −Σ_j (iξ_j + θ̂_j)².
//!
//! Constant coefficients make the auxiliary curvature a plain commutator,
//! Θ(e_i, e_j) = [θ_i, θ_j], read off in components as
//! Θ_kl(e_i, e_j) = ⟨[θ_i, θ_j] f_k, f_l⟩. With that bookkeeping
//! D(ξ)² − Δ^θ(ξ) = ½Θ̃^m exactly (the scalar curvature term vanishes on the
//! flat torus), which is the mode-wise content of the twisted
//! Schrödinger–Lichnerowicz formula and the main thing this module verifies.

use crate::curvature::{theta_tilde_apply_raw, AuxCurvature};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pairs;
use crate::rng;
use crate::spin::SpinAlgebraElement;
use crate::twist::{kappa_r_m_raw, TwistSignature, TwistedSpace};
use crate::C64;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Constant connection coefficients: one antisymmetric r×r matrix per frame
/// direction.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantConnection {
    sig: TwistSignature,
    theta: Vec<DMatrix<f64>>,
}

impl ConstantConnection {
    pub fn zero(sig: TwistSignature) -> Self {
        Self { sig, theta: vec![DMatrix::zeros(sig.r, sig.r); sig.n] }
    }

    pub fn new(sig: TwistSignature, theta: Vec<DMatrix<f64>>) -> Result<Self> {
        if theta.len() != sig.n {
            return Err(Error::DimensionMismatch { expected: sig.n, found: theta.len() });
        }
        for m in &theta {
            if m.nrows() != sig.r || m.ncols() != sig.r {
                return Err(Error::DimensionMismatch { expected: sig.r, found: m.nrows() });
            }
            for k in 0..sig.r {
                for l in 0..sig.r {
                    if (m[(k, l)] + m[(l, k)]).abs() > 1e-12 {
                        return Err(Error::NotAntisymmetric(format!("θ entry ({k},{l})")));
                    }
                }
            }
        }
        Ok(Self { sig, theta })
    }

    pub fn random(sig: TwistSignature, seed: u64) -> Self {
        let mut r = rng::derived(seed, "constant-connection", 0);
        let theta = (0..sig.n).map(|_| rng::antisymmetric(&mut r, sig.r)).collect();
        Self { sig, theta }
    }

    pub fn sig(&self) -> TwistSignature {
        self.sig
    }

    pub fn theta(&self, j: usize) -> &DMatrix<f64> {
        &self.theta[j]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.theta
    }
}

/// Θ_kl(e_i, e_j) = ⟨[θ_i, θ_j] f_k, f_l⟩; dθ = 0 for constant coefficients.
pub fn aux_curvature_of(conn: &ConstantConnection) -> AuxCurvature {
    let sig = conn.sig();
    let n = sig.n;
    let comms: Vec<Vec<DMatrix<f64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = conn.theta(i);
                    let b = conn.theta(j);
                    a * b - b * a
                })
                .collect()
        })
        .collect();
    let mats = pairs::pairs(sig.r)
        .map(|(k, l)| {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    // ⟨A f_k, f_l⟩ is the (l, k) entry.
                    m[(i, j)] = comms[i][j][(l, k)];
                }
            }
            m
        })
        .collect();
    AuxCurvature::from_matrices(sig, mats).expect("commutators are antisymmetric in (i,j)")
}

/// ½ Σ_{k<l} ⟨θ_j f_k, f_l⟩ κ_{r*}^m(f_k f_l) as a spin(r) element.
fn twist_symbol_element(conn: &ConstantConnection, j: usize) -> SpinAlgebraElement {
    let sig = conn.sig();
    let coeffs = pairs::pairs(sig.r)
        .map(|(k, l)| 0.5 * conn.theta(j)[(l, k)])
        .collect();
    SpinAlgebraElement::from_coeffs(sig.r, coeffs).expect("pair count matches")
}

/// Per-connection dense symbol tables, built once and reused across modes.
pub struct SymbolTables {
    dim: usize,
    /// κ(e_j) dense.
    base: Vec<DMatrix<C64>>,
    /// θ̂_j dense (twist part of the symbol).
    twist: Vec<DMatrix<C64>>,
    /// κ(e_j)·θ̂_j products.
    base_twist: Vec<DMatrix<C64>>,
    /// Σ_j θ̂_j² (for the Laplacian).
    twist_sq_sum: DMatrix<C64>,
    /// ½Θ̃^m dense.
    half_theta_tilde: DMatrix<C64>,
}

impl SymbolTables {
    pub fn new(space: &TwistedSpace, conn: &ConstantConnection) -> Result<Self> {
        let sig = space.sig();
        if conn.sig() != sig {
            return Err(Error::DimensionMismatch { expected: sig.n, found: conn.sig().n });
        }
        let dim = sig.dim();
        if dim > linalg::DENSE_EIGEN_CAP {
            return Err(Error::DenseCapExceeded { dim, cap: linalg::DENSE_EIGEN_CAP });
        }
        let base: Vec<DMatrix<C64>> = (0..sig.n)
            .map(|j| {
                linalg::materialize(dim, |v| {
                    let mut t = v.to_vec();
                    space.apply_base_generator(j, &mut t);
                    t
                })
            })
            .collect();
        let twist: Vec<DMatrix<C64>> = (0..sig.n)
            .map(|j| {
                let xi = twist_symbol_element(conn, j);
                linalg::materialize(dim, |v| kappa_r_m_raw(space, &xi, v).expect("rank matches"))
            })
            .collect();
        let base_twist = base.iter().zip(&twist).map(|(b, t)| b * t).collect();
        let mut twist_sq_sum = DMatrix::<C64>::zeros(dim, dim);
        for t in &twist {
            twist_sq_sum += t * t;
        }
        let theta = aux_curvature_of(conn);
        let half_theta_tilde = linalg::materialize(dim, |v| {
            theta_tilde_apply_raw(space, &theta, v).expect("signature matches")
        }) * C64::new(0.5, 0.0);
        Ok(Self { dim, base, twist, base_twist, twist_sq_sum, half_theta_tilde })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// D(ξ) = Σ_j κ(e_j)(iξ_j + θ̂_j).
    pub fn dirac(&self, xi: &[i64]) -> DMatrix<C64> {
        let mut d = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (j, (b, bt)) in self.base.iter().zip(&self.base_twist).enumerate() {
            d += b * C64::new(0.0, xi[j] as f64);
            d += bt;
        }
        d
    }

    /// Δ^θ(ξ) = −Σ_j (iξ_j + θ̂_j)² = ‖ξ‖² − Σ_j (2iξ_j θ̂_j + θ̂_j²).
    pub fn laplacian(&self, xi: &[i64]) -> DMatrix<C64> {
        let norm_sqr: f64 = xi.iter().map(|&x| (x * x) as f64).sum();
        let mut l = DMatrix::<C64>::identity(self.dim, self.dim) * C64::new(norm_sqr, 0.0);
        for (j, t) in self.twist.iter().enumerate() {
            l -= t * C64::new(0.0, 2.0 * xi[j] as f64);
        }
        l -= &self.twist_sq_sum;
        l
    }

    /// ‖D(ξ)² − Δ^θ(ξ) − ½Θ̃^m‖_F (scalar curvature is zero on the torus).
    pub fn sl_residual(&self, xi: &[i64]) -> f64 {
        let d = self.dirac(xi);
        let diff = &d * &d - self.laplacian(xi) - &self.half_theta_tilde;
        linalg::frobenius(&diff)
    }

    /// Residual of the mode-independent bracket identity
    /// Σ_{j<k} κ(e_j)κ(e_k)[θ̂_j, θ̂_k] = ½Θ̃^m.
    pub fn bracket_residual(&self) -> f64 {
        let mut acc = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (j, k) in pairs::pairs(self.base.len()) {
            let comm = &self.twist[j] * &self.twist[k] - &self.twist[k] * &self.twist[j];
            acc += &self.base[j] * &self.base[k] * comm;
        }
        linalg::frobenius(&(acc - &self.half_theta_tilde))
    }
}

/// D(ξ) for a single mode.
pub fn dirac_symbol(space: &TwistedSpace, conn: &ConstantConnection, xi: &[i64]) -> Result<DMatrix<C64>> {
    if xi.len() != space.sig().n {
        return Err(Error::DimensionMismatch { expected: space.sig().n, found: xi.len() });
    }
    Ok(SymbolTables::new(space, conn)?.dirac(xi))
}

/// ‖D(ξ)² − Δ^θ(ξ) − ½Θ̃^m‖ for a single mode.
pub fn sl_residual(space: &TwistedSpace, conn: &ConstantConnection, xi: &[i64]) -> Result<f64> {
    if xi.len() != space.sig().n {
        return Err(Error::DimensionMismatch { expected: space.sig().n, found: xi.len() });
    }
    Ok(SymbolTables::new(space, conn)?.sl_residual(xi))
}

/// All integer modes with ‖ξ‖_∞ ≤ radius, in odometer order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ModeLattice {
    pub n: usize,
    pub radius: i64,
}

impl ModeLattice {
    pub fn new(n: usize, radius: i64) -> Result<Self> {
        if radius < 0 {
            return Err(Error::InvalidInput(format!("negative mode radius {radius}")));
        }
        Ok(Self { n, radius })
    }

    pub fn len(&self) -> usize {
        (2 * self.radius as usize + 1).pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn modes(&self) -> Vec<Vec<i64>> {
        let side = 2 * self.radius + 1;
        (0..self.len())
            .map(|mut q| {
                let mut xi = vec![0i64; self.n];
                for slot in (0..self.n).rev() {
                    xi[slot] = (q as i64 % side) - self.radius;
                    q /= side as usize;
                }
                xi
            })
            .collect()
    }
}

/// One eigenvalue of one mode.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectrumEntry {
    pub mode: Vec<i64>,
    pub index: usize,
    pub eigenvalue: f64,
}

/// Eigenvalues of D(ξ) over the lattice, merged deterministically: sorted by
/// eigenvalue with (mode, index) as tie-breakers.
pub fn truncated_spectrum(
    space: &TwistedSpace,
    conn: &ConstantConnection,
    lattice: &ModeLattice,
) -> Result<Vec<SpectrumEntry>> {
    if lattice.n != space.sig().n {
        return Err(Error::DimensionMismatch { expected: space.sig().n, found: lattice.n });
    }
    let tables = SymbolTables::new(space, conn)?;
    let modes = lattice.modes();
    let per_mode: Vec<Vec<SpectrumEntry>> = modes
        .par_iter()
        .map(|xi| {
            let ev = linalg::hermitian_eigenvalues(&tables.dirac(xi))?;
            Ok(ev
                .into_iter()
                .enumerate()
                .map(|(index, eigenvalue)| SpectrumEntry { mode: xi.clone(), index, eigenvalue })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut merged: Vec<SpectrumEntry> = per_mode.into_iter().flatten().collect();
    merged.sort_by(|a, b| {
        a.eigenvalue
            .partial_cmp(&b.eigenvalue)
            .expect("finite eigenvalues")
            .then_with(|| a.mode.cmp(&b.mode))
            .then_with(|| a.index.cmp(&b.index))
    });
    Ok(merged)
}
