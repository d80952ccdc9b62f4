//! Algebraic curvature data and the fiberwise curvature identities.
//!
//! An [`AlgebraicCurvature`] is a symmetric operator on Λ²ℝⁿ satisfying the
//! first Bianchi identity. The pairing is normalized so that the identity
//! operator is the round sphere: op = Id corresponds to the tensor
//! R(X, Y)Z = ⟨Y, Z⟩X − ⟨X, Z⟩Y, hence Ric = (n−1)·Id and scalar n(n−1).
//! Components are recovered as ⟨R(e_a, e_b)e_i, e_j⟩ = −op[(a,b),(i,j)] in
//! the lexicographic pair basis; Ricci is contracted as
//! Ric_ab = Σ_i ⟨R(e_a, e_i)e_i, e_b⟩, the convention under which the
//! contraction identity below holds with the −½ Ric term.
//!
//! The fiberwise curvature action on a twisted spinor is
//!
//! ```text
//!   R^θ(X,Y)φ = ½ Σ_{i<j} Ω_ij(X,Y) e_i e_j·φ + ½ Σ_{k<l} Θ_kl(X,Y) κ_{r*}^m(f_k f_l)·φ
//! ```
//!
//! and contracts to the Ricci identity
//! Σ_i e_i·R^θ(X,e_i)φ = −½Ric(X)·φ + ½Σ(X⌟Θ_kl)·κ_{r*}^m(f_k f_l)·φ and the
//! scalar identity Σ_{ij} e_i e_j·R^θ(e_i,e_j)φ = (R/2)φ + ΣΘ_kl·κ_{r*}^m(f_k f_l)φ.
//! Both require the first Bianchi identity; unprojected operators are kept
//! around as negative controls.

use crate::clifford::ExteriorForm;
use crate::error::{Error, Result};
use crate::forms::{hat, ThreeForm, TwoFormPacket};
use crate::kron;
use crate::linalg;
use crate::pairs;
use crate::rng;
use crate::spin::SpinAlgebraElement;
use crate::twist::{base_form, base_vector_mul, kappa_r_m_raw, TwistSignature, TwistedSpace, TwistedSpinor};
use crate::C64;
use nalgebra::DMatrix;

/// A symmetric operator on Λ²ℝⁿ; see the module docs for the pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicCurvature {
    n: usize,
    op: DMatrix<f64>,
    tensor: Vec<f64>,
}

impl AlgebraicCurvature {
    /// Wrap a symmetric Λ² operator (symmetry enforced exactly by averaging).
    pub fn from_operator(n: usize, op: DMatrix<f64>) -> Result<Self> {
        let count = pairs::pair_count(n);
        if op.nrows() != count || op.ncols() != count {
            return Err(Error::DimensionMismatch { expected: count, found: op.nrows() });
        }
        let max_asym = (0..count)
            .flat_map(|u| (0..count).map(move |v| (u, v)))
            .map(|(u, v)| (op[(u, v)] - op[(v, u)]).abs())
            .fold(0.0f64, f64::max);
        if max_asym > 1e-12 {
            return Err(Error::NotSymmetric(format!("pair-symmetry defect {max_asym:.3e}")));
        }
        let op = (&op + op.transpose()) * 0.5;
        let tensor = expand_tensor(n, &op);
        Ok(Self { n, op, tensor })
    }

    /// The identity operator on Λ² (the round-sphere curvature).
    pub fn identity(n: usize) -> Self {
        let count = pairs::pair_count(n);
        Self::from_operator(n, DMatrix::identity(count, count)).expect("identity is symmetric")
    }

    /// Deterministic random symmetric operator, Bianchi-projected.
    pub fn random(n: usize, seed: u64) -> Self {
        Self::random_unprojected(n, seed).bianchi_project()
    }

    /// Deterministic random symmetric operator with no Bianchi projection;
    /// useful as a negative control.
    pub fn random_unprojected(n: usize, seed: u64) -> Self {
        let mut r = rng::derived(seed, "algebraic-curvature", 0);
        let op = rng::symmetric(&mut r, pairs::pair_count(n));
        Self::from_operator(n, op).expect("construction is symmetric")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn operator(&self) -> &DMatrix<f64> {
        &self.op
    }

    /// ⟨R(e_a, e_b)e_i, e_j⟩.
    pub fn tensor(&self, a: usize, b: usize, i: usize, j: usize) -> f64 {
        let n = self.n;
        self.tensor[((a * n + b) * n + i) * n + j]
    }

    /// Cyclic sum over the first three slots; zero iff first Bianchi holds.
    pub fn bianchi_cyclic(&self, a: usize, b: usize, i: usize, j: usize) -> f64 {
        self.tensor(a, b, i, j) + self.tensor(b, i, a, j) + self.tensor(i, a, b, j)
    }

    /// Largest cyclic-sum entry.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        worst = worst.max(self.bianchi_cyclic(a, b, i, j).abs());
                    }
                }
            }
        }
        worst
    }

    /// Remove the fully antisymmetric component: T ↦ T − cyc(T)/3. The
    /// result satisfies the first Bianchi identity and the map is idempotent.
    pub fn bianchi_project(&self) -> Self {
        let n = self.n;
        let count = pairs::pair_count(n);
        let mut op = DMatrix::zeros(count, count);
        for (u, (a, b)) in pairs::pairs(n).enumerate() {
            for (v, (i, j)) in pairs::pairs(n).enumerate() {
                let projected = self.tensor(a, b, i, j) - self.bianchi_cyclic(a, b, i, j) / 3.0;
                op[(u, v)] = -projected;
            }
        }
        let op = (&op + op.transpose()) * 0.5;
        let tensor = expand_tensor(n, &op);
        Self { n, op, tensor }
    }

    /// Ric_ab = Σ_i ⟨R(e_a, e_i)e_i, e_b⟩.
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut ric = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                ric[(a, b)] = (0..n).map(|i| self.tensor(a, i, i, b)).sum();
            }
        }
        ric
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// The 2-form Ω(X, Y) as an antisymmetric matrix over (i, j).
    pub fn two_form(&self, x: &[f64], y: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.n;
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len().min(y.len()) });
        }
        let mut w = DMatrix::zeros(n, n);
        for a in 0..n {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                let c = x[a] * y[b];
                if c == 0.0 {
                    continue;
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let t = c * self.tensor(a, b, i, j);
                        w[(i, j)] += t;
                        w[(j, i)] -= t;
                    }
                }
            }
        }
        Ok(w)
    }
}

fn expand_tensor(n: usize, op: &DMatrix<f64>) -> Vec<f64> {
    let mut t = vec![0.0; n * n * n * n];
    for (u, (a, b)) in pairs::pairs(n).enumerate() {
        for (v, (i, j)) in pairs::pairs(n).enumerate() {
            let val = -op[(u, v)];
            let mut put = |a: usize, b: usize, i: usize, j: usize, v: f64| {
                t[((a * n + b) * n + i) * n + j] = v;
            };
            put(a, b, i, j, val);
            put(b, a, i, j, -val);
            put(a, b, j, i, -val);
            put(b, a, j, i, val);
        }
    }
    t
}

/// The so(r)-valued curvature of the auxiliary connection: one antisymmetric
/// n×n matrix Θ_kl over the frame slots per twist plane k < l.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxCurvature {
    sig: TwistSignature,
    mats: Vec<DMatrix<f64>>,
}

impl AuxCurvature {
    pub fn zero(sig: TwistSignature) -> Self {
        Self { sig, mats: vec![DMatrix::zeros(sig.n, sig.n); pairs::pair_count(sig.r)] }
    }

    pub fn from_matrices(sig: TwistSignature, mats: Vec<DMatrix<f64>>) -> Result<Self> {
        if mats.len() != pairs::pair_count(sig.r) {
            return Err(Error::DimensionMismatch {
                expected: pairs::pair_count(sig.r),
                found: mats.len(),
            });
        }
        for m in &mats {
            if m.nrows() != sig.n || m.ncols() != sig.n {
                return Err(Error::DimensionMismatch { expected: sig.n, found: m.nrows() });
            }
            for i in 0..sig.n {
                for j in 0..sig.n {
                    if (m[(i, j)] + m[(j, i)]).abs() > 1e-12 {
                        return Err(Error::NotAntisymmetric(format!("Θ entry ({i},{j})")));
                    }
                }
            }
        }
        Ok(Self { sig, mats })
    }

    pub fn random(sig: TwistSignature, seed: u64) -> Self {
        let mut r = rng::derived(seed, "aux-curvature", 0);
        let mats = (0..pairs::pair_count(sig.r)).map(|_| rng::antisymmetric(&mut r, sig.n)).collect();
        Self { sig, mats }
    }

    /// Reinterpret a Riemann operator as the auxiliary curvature of the
    /// diagonal twist r = n: Θ_kl(e_i, e_j) = ⟨R(e_i, e_j)e_k, e_l⟩.
    pub fn from_riemann(sig: TwistSignature, omega: &AlgebraicCurvature) -> Result<Self> {
        if sig.r != omega.n() || sig.n != omega.n() {
            return Err(Error::DimensionMismatch { expected: omega.n(), found: sig.r });
        }
        let n = sig.n;
        let mats = pairs::pairs(n)
            .map(|(k, l)| {
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = omega.tensor(i, j, k, l);
                    }
                }
                m
            })
            .collect();
        Self::from_matrices(sig, mats)
    }

    pub fn sig(&self) -> TwistSignature {
        self.sig
    }

    /// The same curvature packet on a different tensor power.
    pub fn with_power(&self, m: usize) -> Result<Self> {
        let sig = TwistSignature::new(self.sig.n, self.sig.r, m)?;
        Ok(Self { sig, mats: self.mats.clone() })
    }

    pub fn matrix(&self, k: usize, l: usize) -> &DMatrix<f64> {
        debug_assert!(k < l);
        &self.mats[pairs::pair_index(self.sig.r, k, l)]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.mats
    }

    pub fn entry(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering;
        match k.cmp(&l) {
            Ordering::Less => self.mats[pairs::pair_index(self.sig.r, k, l)][(i, j)],
            Ordering::Greater => -self.mats[pairs::pair_index(self.sig.r, l, k)][(i, j)],
            Ordering::Equal => 0.0,
        }
    }

    /// (X ⌟ Θ_kl) as a vector: component j is Σ_a x_a Θ_kl(e_a, e_j).
    pub fn interior(&self, k: usize, l: usize, x: &[f64]) -> Vec<f64> {
        let n = self.sig.n;
        (0..n)
            .map(|j| (0..n).map(|a| x[a] * self.entry(k, l, a, j)).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.iter().all(|x| *x == 0.0))
    }
}

/// R^θ(X, Y)φ, the fiberwise curvature action.
pub fn curvature_action(
    space: &TwistedSpace,
    omega: &AlgebraicCurvature,
    theta: &AuxCurvature,
    x: &[f64],
    y: &[f64],
    phi: &TwistedSpinor,
) -> Result<TwistedSpinor> {
    let sig = space.sig();
    if omega.n() != sig.n || theta.sig() != sig || phi.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.n, found: omega.n() });
    }
    // Base part: ½ Σ_{i<j} Ω_ij(X,Y) e_i e_j.
    let w = omega.two_form(x, y)?;
    let mut terms = Vec::new();
    for (i, j) in pairs::pairs(sig.n) {
        let c = 0.5 * w[(i, j)];
        if c != 0.0 {
            terms.push((vec![i, j], c));
        }
    }
    let base = base_form(space, &ExteriorForm::new(sig.n, terms)?, phi)?;

    // Twist part: ½ Σ_{k<l} Θ_kl(X,Y) κ_{r*}^m(f_k f_l).
    let mut coeffs = vec![0.0; pairs::pair_count(sig.r)];
    for (idx, (k, l)) in pairs::pairs(sig.r).enumerate() {
        let mat = &self_matrix(theta, idx);
        let mut v = 0.0;
        for a in 0..sig.n {
            for b in 0..sig.n {
                v += x[a] * y[b] * mat[(a, b)];
            }
        }
        let _ = (k, l);
        coeffs[idx] = 0.5 * v;
    }
    let xi = SpinAlgebraElement::from_coeffs(sig.r, coeffs)?;
    let twist_coords = kappa_r_m_raw(space, &xi, phi.coords())?;

    let mut out = base;
    kron::axpy(out.coords_mut(), kron::ONE, &twist_coords);
    Ok(out)
}

fn self_matrix<'t>(theta: &'t AuxCurvature, idx: usize) -> &'t DMatrix<f64> {
    &theta.matrices()[idx]
}

/// ‖Σᵢ e_i·R^θ(X, e_i)φ + ½Ric(X)·φ − ½Σ(X⌟Θ_kl)·κ_{r*}^m(f_k f_l)·φ‖.
pub fn ricci_identity_residual(
    space: &TwistedSpace,
    omega: &AlgebraicCurvature,
    theta: &AuxCurvature,
    x: &[f64],
    phi: &TwistedSpinor,
) -> Result<f64> {
    let sig = space.sig();
    let n = sig.n;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let mut acc = vec![kron::ZERO; sig.dim()];
    for i in 0..n {
        let mut e_i = vec![0.0; n];
        e_i[i] = 1.0;
        let mut term = curvature_action(space, omega, theta, x, &e_i, phi)?;
        space.apply_base_generator(i, term.coords_mut());
        kron::axpy(&mut acc, kron::ONE, term.coords());
    }

    // +½ Ric(X)·φ
    let ric = omega.ricci();
    let ric_x: Vec<f64> = (0..n).map(|j| (0..n).map(|a| x[a] * ric[(a, j)]).sum()).collect();
    let ric_term = base_vector_mul(space, &ric_x, phi)?;
    kron::axpy(&mut acc, C64::new(0.5, 0.0), ric_term.coords());

    // −½ Σ (X⌟Θ_kl)·κ(f_k f_l)·φ
    for (k, l) in pairs::pairs(sig.r) {
        let xi = SpinAlgebraElement::pair(sig.r, k, l, 1.0)?;
        let twisted = kappa_r_m_raw(space, &xi, phi.coords())?;
        let interior = theta.interior(k, l, x);
        let contracted =
            base_vector_mul(space, &interior, &TwistedSpinor::from_coords(sig, twisted)?)?;
        kron::axpy(&mut acc, C64::new(-0.5, 0.0), contracted.coords());
    }

    Ok(kron::norm(&acc))
}

/// ‖Σ_{i,j} e_i e_j·R^θ(e_i,e_j)φ − (R/2)φ − ΣΘ_kl·κ_{r*}^m(f_k f_l)φ‖.
pub fn scalar_identity_residual(
    space: &TwistedSpace,
    omega: &AlgebraicCurvature,
    theta: &AuxCurvature,
    phi: &TwistedSpinor,
) -> Result<f64> {
    let sig = space.sig();
    let n = sig.n;
    let mut acc = vec![kron::ZERO; sig.dim()];
    // Σ over i ≠ j equals twice the i < j part by antisymmetry of R^θ.
    for (i, j) in pairs::pairs(n) {
        let mut e_i = vec![0.0; n];
        e_i[i] = 1.0;
        let mut e_j = vec![0.0; n];
        e_j[j] = 1.0;
        let mut term = curvature_action(space, omega, theta, &e_i, &e_j, phi)?;
        space.apply_base_generator(j, term.coords_mut());
        space.apply_base_generator(i, term.coords_mut());
        kron::axpy(&mut acc, C64::new(2.0, 0.0), term.coords());
    }

    // −(R/2) φ
    let scalar = omega.scalar();
    kron::axpy(&mut acc, C64::new(-0.5 * scalar, 0.0), phi.coords());

    // −Σ Θ_kl·κ(f_k f_l)φ with Θ_kl acting as a 2-form on the base.
    for (idx, (k, l)) in pairs::pairs(sig.r).enumerate() {
        let xi = SpinAlgebraElement::pair(sig.r, k, l, 1.0)?;
        let twisted = TwistedSpinor::from_coords(sig, kappa_r_m_raw(space, &xi, phi.coords())?)?;
        let form = ExteriorForm::from_antisymmetric(&theta.matrices()[idx])?;
        let acted = base_form(space, &form, &twisted)?;
        kron::axpy(&mut acc, C64::new(-1.0, 0.0), acted.coords());
    }

    Ok(kron::norm(&acc))
}

/// Θ̃^m = Σ_{k<l} μ_n(Θ_kl) ∘ κ_{r*}^m(f_k f_l) applied to raw coordinates.
pub fn theta_tilde_apply_raw(
    space: &TwistedSpace,
    theta: &AuxCurvature,
    v: &[C64],
) -> Result<Vec<C64>> {
    let sig = space.sig();
    let mut out = vec![kron::ZERO; v.len()];
    for (idx, (k, l)) in pairs::pairs(sig.r).enumerate() {
        let xi = SpinAlgebraElement::pair(sig.r, k, l, 1.0)?;
        let twisted = kappa_r_m_raw(space, &xi, v)?;
        let form = ExteriorForm::from_antisymmetric(&theta.matrices()[idx])?;
        let acted = crate::clifford::apply_form(space.base_rep(), &form, &twisted, sig.base_offset())?;
        kron::axpy(&mut out, kron::ONE, &acted);
    }
    Ok(out)
}

pub fn theta_tilde_apply(
    space: &TwistedSpace,
    theta: &AuxCurvature,
    phi: &TwistedSpinor,
) -> Result<TwistedSpinor> {
    TwistedSpinor::from_coords(space.sig(), theta_tilde_apply_raw(space, theta, phi.coords())?)
}

/// Spectral norm of the Hermitian operator Θ̃^m.
pub fn theta_tilde_norm(space: &TwistedSpace, theta: &AuxCurvature, seed: u64) -> Result<f64> {
    let dim = space.dim();
    let mut failed = None;
    let norm = linalg::hermitian_operator_norm(dim, |v| {
        theta_tilde_apply_raw(space, theta, v).unwrap_or_else(|e| {
            failed = Some(e);
            vec![kron::ZERO; dim]
        })
    }, seed);
    match failed {
        Some(e) => Err(e),
        None => norm,
    }
}

/// ⟨Θ, η⟩₀ = Σ_{k<l} Σ_{i<j} Θ_kl(e_i,e_j) η_kl(e_i,e_j) and
/// ⟨Θ̂, η̂⟩₁ = Σ_{k<l} tr(Θ̂_kl η̂_kl^T). The two differ by a factor of −2 up
/// to the hat transposition: tr(Â B̂ᵀ) = 2 Σ_{i<j} A_ij B_ij.
pub fn pairings(theta: &AuxCurvature, packet: &TwoFormPacket) -> Result<(f64, f64)> {
    let sig = theta.sig();
    if packet.sig().n != sig.n || packet.sig().r != sig.r {
        return Err(Error::DimensionMismatch { expected: sig.n, found: packet.sig().n });
    }
    let mut pair0 = 0.0;
    let mut pair1 = 0.0;
    for (idx, _) in pairs::pairs(sig.r).enumerate() {
        let t = &theta.matrices()[idx];
        let e = &packet.matrices()[idx];
        for i in 0..sig.n {
            for j in i + 1..sig.n {
                pair0 += t[(i, j)] * e[(i, j)];
            }
        }
        pair1 += (hat(t) * hat(e).transpose()).trace();
    }
    Ok((pair0, pair1))
}

/// Both composition orders of the Ricci reconstruction from a 2-form packet,
/// their disagreement, and the scalar trace. For data coming from a genuine
/// parallel spinor the two orders agree.
#[derive(Clone, Debug)]
pub struct RicciReconstruction {
    /// (1/|φ|²) Σ_{k<l} η̂_kl ∘ Θ̂_kl (+ Killing shift when applicable)
    pub eta_theta: DMatrix<f64>,
    /// (1/|φ|²) Σ_{k<l} Θ̂_kl ∘ η̂_kl (+ Killing shift when applicable)
    pub theta_eta: DMatrix<f64>,
    /// ‖eta_theta − theta_eta‖_F
    pub asymmetry: f64,
    /// Trace of `theta_eta`: the scalar-curvature reconstruction.
    pub scalar: f64,
    /// ⟨Θ̂, η̂⟩₁ / |φ|², reported next to `scalar`; for the packet part the
    /// relation scalar_packet = −pair1/|φ|² holds identically.
    pub pair1_normalized: f64,
}

/// Ricci reconstruction for a parallel spinor:
/// Ric = (1/|φ|²) Σ η̂_kl ∘ Θ̂_kl = (1/|φ|²) Σ Θ̂_kl ∘ η̂_kl.
pub fn ricci_from_parallel(
    space: &TwistedSpace,
    theta: &AuxCurvature,
    phi: &TwistedSpinor,
) -> Result<RicciReconstruction> {
    reconstruction_with_shift(space, theta, phi, 0.0)
}

/// Ricci reconstruction for a real Killing spinor with constant μ:
/// Ric = 4(n−1)μ² Id + (1/|φ|²) Σ Θ̂_kl ∘ η̂_kl, with scalar trace
/// 4n(n−1)μ² + (1/|φ|²) Σ tr(Θ̂_kl ∘ η̂_kl).
pub fn ricci_from_killing(
    space: &TwistedSpace,
    theta: &AuxCurvature,
    phi: &TwistedSpinor,
    mu: f64,
) -> Result<RicciReconstruction> {
    let n = space.sig().n as f64;
    reconstruction_with_shift(space, theta, phi, 4.0 * (n - 1.0) * mu * mu)
}

fn reconstruction_with_shift(
    space: &TwistedSpace,
    theta: &AuxCurvature,
    phi: &TwistedSpinor,
    shift: f64,
) -> Result<RicciReconstruction> {
    let sig = space.sig();
    if theta.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.n, found: theta.sig().n });
    }
    let norm_sqr = phi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroSpinor);
    }
    let packet = crate::forms::eta_forms(space, phi)?;
    let n = sig.n;
    let mut eta_theta = DMatrix::zeros(n, n);
    let mut theta_eta = DMatrix::zeros(n, n);
    let mut pair1 = 0.0;
    for (idx, _) in pairs::pairs(sig.r).enumerate() {
        let th = hat(&theta.matrices()[idx]);
        let et = hat(&packet.matrices()[idx]);
        eta_theta += &et * &th;
        theta_eta += &th * &et;
        pair1 += (&th * et.transpose()).trace();
    }
    eta_theta /= norm_sqr;
    theta_eta /= norm_sqr;
    for i in 0..n {
        eta_theta[(i, i)] += shift;
        theta_eta[(i, i)] += shift;
    }
    let asymmetry = linalg::frobenius_real(&(&eta_theta - &theta_eta));
    let scalar = theta_eta.trace();
    Ok(RicciReconstruction {
        eta_theta,
        theta_eta,
        asymmetry,
        scalar,
        pair1_normalized: pair1 / norm_sqr,
    })
}

/// Antisymmetrized covariant derivative data for a symmetric endomorphism:
/// one vector d∇E(e_i, e_j) ∈ ℝⁿ per pair i < j.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoDerivative {
    n: usize,
    vecs: Vec<Vec<f64>>,
}

impl EndoDerivative {
    pub fn zero(n: usize) -> Self {
        Self { n, vecs: vec![vec![0.0; n]; pairs::pair_count(n)] }
    }

    pub fn from_vectors(n: usize, vecs: Vec<Vec<f64>>) -> Result<Self> {
        if vecs.len() != pairs::pair_count(n) {
            return Err(Error::DimensionMismatch {
                expected: pairs::pair_count(n),
                found: vecs.len(),
            });
        }
        if let Some(bad) = vecs.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(Self { n, vecs })
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut r = rng::derived(seed, "endo-derivative", 0);
        let vecs = (0..pairs::pair_count(n)).map(|_| rng::vector(&mut r, n)).collect();
        Self { n, vecs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// d∇E(e_i, e_j), antisymmetric in (i, j).
    pub fn value(&self, i: usize, j: usize) -> Vec<f64> {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.vecs[pairs::pair_index(self.n, i, j)].clone(),
            Ordering::Greater => {
                self.vecs[pairs::pair_index(self.n, j, i)].iter().map(|x| -x).collect()
            }
            Ordering::Equal => vec![0.0; self.n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vecs.iter().all(|v| v.iter().all(|x| *x == 0.0))
    }
}

/// A symmetric endomorphism of ℝⁿ with optional derivative data.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricEndo {
    n: usize,
    e: DMatrix<f64>,
    de: Option<EndoDerivative>,
}

impl SymmetricEndo {
    pub fn new(e: DMatrix<f64>, de: Option<EndoDerivative>) -> Result<Self> {
        let n = e.nrows();
        if e.ncols() != n {
            return Err(Error::NotSymmetric("matrix not square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if (e[(i, j)] - e[(j, i)]).abs() > 1e-12 {
                    return Err(Error::NotSymmetric(format!("entry ({i},{j})")));
                }
            }
        }
        if let Some(d) = &de {
            if d.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: d.n() });
            }
        }
        Ok(Self { n, e, de })
    }

    pub fn scaled_identity(n: usize, mu: f64) -> Self {
        Self { n, e: DMatrix::identity(n, n) * mu, de: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.e
    }

    pub fn derivative(&self) -> Option<&EndoDerivative> {
        self.de.as_ref()
    }
}

/// ((⌟d∇E) ⊛ (⌟ν))_{ts} = Σ_{i,j} ⟨d∇E(e_s, e_i), e_j⟩ ν(e_t, e_i, e_j).
pub fn circ_ast(de: &EndoDerivative, nu: &ThreeForm) -> Result<DMatrix<f64>> {
    let n = de.n();
    if nu.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: nu.n() });
    }
    let mut out = DMatrix::zeros(n, n);
    for s in 0..n {
        // Matrix (j, i) ↦ ⟨d∇E(e_s, e_i), e_j⟩ assembled once per s.
        let cols: Vec<Vec<f64>> = (0..n).map(|i| de.value(s, i)).collect();
        for t in 0..n {
            let mut acc = 0.0;
            for (i, col) in cols.iter().enumerate() {
                for (j, dej) in col.iter().enumerate() {
                    acc += dej * nu.get(t, i, j);
                }
            }
            out[(t, s)] = acc;
        }
    }
    Ok(out)
}

/// Ricci and scalar reconstruction for a generalized Killing spinor with
/// symmetric endomorphism E (∇_X φ = −E(X)·φ):
///
/// ```text
///   Ric = −4E² + 4 tr(E) E − 2(⌟d∇E ⊛ ⌟ν^φ)ᵀ/|φ|² + Σ Θ̂_kl ∘ η̂_kl/|φ|²
/// ```
///
/// which collapses to the Killing form at E = μ·Id, d∇E = 0 and to the
/// parallel form at E = 0.
pub fn ricci_generalized_killing(
    space: &TwistedSpace,
    endo: &SymmetricEndo,
    phi: &TwistedSpinor,
    theta: &AuxCurvature,
) -> Result<(DMatrix<f64>, f64)> {
    let sig = space.sig();
    if endo.n() != sig.n {
        return Err(Error::DimensionMismatch { expected: sig.n, found: endo.n() });
    }
    let norm_sqr = phi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroSpinor);
    }
    let e = endo.matrix();
    let tr = e.trace();
    let mut ric = e * e * (-4.0) + e * (4.0 * tr);

    if let Some(de) = endo.derivative() {
        if !de.is_zero() {
            let nu = crate::forms::nu_form(space, phi)?;
            let ca = circ_ast(de, &nu)?;
            ric -= ca.transpose() * (2.0 / norm_sqr);
        }
    }

    let packet_part = ricci_from_parallel(space, theta, phi)?;
    ric += &packet_part.theta_eta;
    let scalar = ric.trace();
    Ok((ric, scalar))
}
