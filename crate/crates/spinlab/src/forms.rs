//! Tensors attached to a twisted spinor: the 2-form packet η_{kl}^φ, the
//! 3-form ν^φ, fiberwise Killing vector components, and the energy-momentum
//! bilinear Q_φ with its endomorphism ℓ^φ.
//!
//! η_{kl}^φ(X, Y) = Re⟨(X∧Y)·κ_{r*}^m(f_k f_l)·φ, φ⟩ is real and
//! antisymmetric both in (X, Y) and in the twist plane (k, l); the hat of a
//! 2-form is the endomorphism X ↦ (X⌟η)^♯, whose matrix is the transpose of
//! the coefficient matrix. Compositions like η̂∘Θ̂ are insensitive to that
//! transposition since both factors flip together.

use crate::error::{Error, Result};
use crate::kron;
use crate::pairs;
use crate::spin::SpinAlgebraElement;
use crate::twist::{kappa_r_m_raw, TwistSignature, TwistedSpace, TwistedSpinor};
use crate::C64;
use nalgebra::DMatrix;

/// The collection {η_{kl}} of antisymmetric n×n matrices, one per twist
/// plane k < l, with packet antisymmetry η_{lk} = −η_{kl} and η_{kk} = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoFormPacket {
    sig: TwistSignature,
    mats: Vec<DMatrix<f64>>,
}

impl TwoFormPacket {
    pub fn zero(sig: TwistSignature) -> Self {
        let count = pairs::pair_count(sig.r);
        Self { sig, mats: vec![DMatrix::zeros(sig.n, sig.n); count] }
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
                        return Err(Error::NotAntisymmetric(format!("entry ({i},{j})")));
                    }
                }
            }
        }
        Ok(Self { sig, mats })
    }

    pub fn sig(&self) -> TwistSignature {
        self.sig
    }

    /// The matrix for the plane (k, l), k < l.
    pub fn matrix(&self, k: usize, l: usize) -> &DMatrix<f64> {
        debug_assert!(k < l);
        &self.mats[pairs::pair_index(self.sig.r, k, l)]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.mats
    }

    /// η_{kl}(e_i, e_j) for any k, l (packet antisymmetry built in).
    pub fn entry(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering;
        match k.cmp(&l) {
            Ordering::Less => self.mats[pairs::pair_index(self.sig.r, k, l)][(i, j)],
            Ordering::Greater => -self.mats[pairs::pair_index(self.sig.r, l, k)][(i, j)],
            Ordering::Equal => 0.0,
        }
    }

    /// Linear extension f_k f_l ↦ η_{kl} evaluated on ξ ∈ spin(r):
    /// Σ_{k<l} ξ_{kl} η_{kl}.
    pub fn contract(&self, xi: &SpinAlgebraElement) -> Result<DMatrix<f64>> {
        if xi.n() != self.sig.r {
            return Err(Error::DimensionMismatch { expected: self.sig.r, found: xi.n() });
        }
        let mut out = DMatrix::zeros(self.sig.n, self.sig.n);
        for (idx, _) in pairs::pairs(self.sig.r).enumerate() {
            let c = xi.coeffs()[idx];
            if c != 0.0 {
                out += &self.mats[idx] * c;
            }
        }
        Ok(out)
    }
}

/// Endomorphism X ↦ (X⌟ξ)^♯ of a 2-form, as a matrix: the transpose of the
/// antisymmetric coefficient matrix.
pub fn hat(two_form: &DMatrix<f64>) -> DMatrix<f64> {
    two_form.transpose()
}

/// The 2-form packet of a spinor:
/// η_{kl}(e_i, e_j) = Re⟨e_i e_j · κ_{r*}^m(f_k f_l)·φ, φ⟩.
pub fn eta_forms(space: &TwistedSpace, phi: &TwistedSpinor) -> Result<TwoFormPacket> {
    let sig = space.sig();
    if phi.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.dim(), found: phi.coords().len() });
    }
    // Precompute e_i·φ once; then Re⟨e_i e_j ψ, φ⟩ = −Re⟨e_j ψ, e_i φ⟩.
    let base_images: Vec<Vec<C64>> = (0..sig.n)
        .map(|i| {
            let mut t = phi.coords().to_vec();
            space.apply_base_generator(i, &mut t);
            t
        })
        .collect();

    let mut mats = Vec::with_capacity(pairs::pair_count(sig.r));
    for (k, l) in pairs::pairs(sig.r) {
        let xi = SpinAlgebraElement::pair(sig.r, k, l, 1.0)?;
        let psi = kappa_r_m_raw(space, &xi, phi.coords())?;
        let mut mat = DMatrix::zeros(sig.n, sig.n);
        for j in 0..sig.n {
            let mut ej_psi = psi.clone();
            space.apply_base_generator(j, &mut ej_psi);
            for i in 0..j {
                let v = -kron::inner(&ej_psi, &base_images[i]).re;
                mat[(i, j)] = v;
                mat[(j, i)] = -v;
            }
        }
        mats.push(mat);
    }
    TwoFormPacket::from_matrices(sig, mats)
}

/// A fully antisymmetric 3-tensor, stored dense over all index triples.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm {
    n: usize,
    values: Vec<f64>,
}

impl ThreeForm {
    pub fn zero(n: usize) -> Self {
        Self { n, values: vec![0.0; n * n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, t: usize, i: usize, j: usize) -> f64 {
        self.values[(t * self.n + i) * self.n + j]
    }

    fn set(&mut self, t: usize, i: usize, j: usize, v: f64) {
        self.values[(t * self.n + i) * self.n + j] = v;
    }

    /// Largest violation of total antisymmetry over all triples.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for t in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = self.get(t, i, j);
                    worst = worst.max((v + self.get(i, t, j)).abs());
                    worst = worst.max((v + self.get(t, j, i)).abs());
                    if t == i || i == j || t == j {
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
        worst
    }
}

/// ν^φ(e_t, e_i, e_j) = Re⟨e_t·e_i·e_j·φ, φ⟩ over all triples.
pub fn nu_form(space: &TwistedSpace, phi: &TwistedSpinor) -> Result<ThreeForm> {
    let sig = space.sig();
    if phi.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.dim(), found: phi.coords().len() });
    }
    let n = sig.n;
    // Re⟨e_t e_i e_j φ, φ⟩ = −Re⟨e_i e_j φ, e_t φ⟩.
    let base_images: Vec<Vec<C64>> = (0..n)
        .map(|t| {
            let mut v = phi.coords().to_vec();
            space.apply_base_generator(t, &mut v);
            v
        })
        .collect();
    let mut out = ThreeForm::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut eij = base_images[j].clone();
            space.apply_base_generator(i, &mut eij);
            for t in 0..n {
                let v = -kron::inner(&eij, &base_images[t]).re;
                out.set(t, i, j, v);
            }
        }
    }
    Ok(out)
}

/// Fiberwise components of the vector field attached to a spinor: the raw
/// pairings ⟨e_i·φ, φ⟩ (purely imaginary by skew-symmetry) and their
/// imaginary parts. Which of the two deserves the name is a modeling choice,
/// so both are returned.
pub fn killing_vector_components(
    space: &TwistedSpace,
    phi: &TwistedSpinor,
) -> Result<(Vec<C64>, Vec<f64>)> {
    let sig = space.sig();
    if phi.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.dim(), found: phi.coords().len() });
    }
    let mut raw = Vec::with_capacity(sig.n);
    for i in 0..sig.n {
        let mut v = phi.coords().to_vec();
        space.apply_base_generator(i, &mut v);
        raw.push(kron::inner(&v, phi.coords()));
    }
    let imag = raw.iter().map(|c| c.im).collect();
    Ok((raw, imag))
}

/// The energy-momentum bilinear of a spinor with supplied covariant
/// derivatives: Q(e_i, e_j) = ½ Re⟨e_i·∇_j φ + e_j·∇_i φ, φ⟩ / |φ|².
#[derive(Clone, Debug, PartialEq)]
pub struct EMForm {
    n: usize,
    q: DMatrix<f64>,
}

impl EMForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// ℓ^φ(e_i) = (e_i ⌟ Q)^♯, the i-th row of Q as a vector.
    pub fn ell(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|j| self.q[(i, j)]).collect()
    }

    /// |ℓ^φ|² = Σ_{ij} Q_{ij}².
    pub fn ell_norm_sqr(&self) -> f64 {
        self.q.iter().map(|x| x * x).sum()
    }

    pub fn trace(&self) -> f64 {
        self.q.trace()
    }
}

pub fn em_tensor(
    space: &TwistedSpace,
    phi: &TwistedSpinor,
    derivs: &[TwistedSpinor],
) -> Result<EMForm> {
    let sig = space.sig();
    if derivs.len() != sig.n {
        return Err(Error::DimensionMismatch { expected: sig.n, found: derivs.len() });
    }
    let norm_sqr = phi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroSpinor);
    }
    let n = sig.n;
    // Re⟨e_i · ∇_j φ, φ⟩ for all (i, j).
    let mut pair = DMatrix::zeros(n, n);
    for j in 0..n {
        if derivs[j].sig() != sig {
            return Err(Error::DimensionMismatch {
                expected: sig.dim(),
                found: derivs[j].coords().len(),
            });
        }
        for i in 0..n {
            let mut v = derivs[j].coords().to_vec();
            space.apply_base_generator(i, &mut v);
            pair[(i, j)] = kron::inner(&v, phi.coords()).re;
        }
    }
    let q = (&pair + pair.transpose()) * (0.5 / norm_sqr);
    Ok(EMForm { n, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::ExteriorForm;
    use crate::rng;
    use crate::twist::base_form;
    use approx::assert_abs_diff_eq;

    fn space(n: usize, r: usize, m: usize) -> TwistedSpace {
        TwistedSpace::new(TwistSignature::new(n, r, m).unwrap()).unwrap()
    }

    fn random_phi(sp: &TwistedSpace, seed: u64) -> TwistedSpinor {
        let mut r = rng::derived(seed, "forms-phi", 0);
        TwistedSpinor::from_coords(sp.sig(), rng::unit_spinor(&mut r, sp.dim())).unwrap()
    }

    #[test]
    fn zero_spinor_gives_zero_packet() {
        let sp = space(3, 3, 1);
        let packet = eta_forms(&sp, &TwistedSpinor::zero(sp.sig())).unwrap();
        for m in packet.matrices() {
            assert_eq!(m.iter().map(|x| x.abs()).fold(0.0, f64::max), 0.0);
        }
    }

    #[test]
    fn eta_matches_direct_definition() {
        let sp = space(4, 3, 2);
        let phi = random_phi(&sp, 31);
        let packet = eta_forms(&sp, &phi).unwrap();
        for (k, l) in pairs::pairs(3) {
            let xi = SpinAlgebraElement::pair(3, k, l, 1.0).unwrap();
            let psi = crate::twist::kappa_r_m(&sp, &xi, &phi).unwrap();
            for (i, j) in pairs::pairs(4) {
                let w = ExteriorForm::wedge_pair(4, i, j, 1.0).unwrap();
                let direct = base_form(&sp, &w, &psi).unwrap().inner(&phi);
                assert_abs_diff_eq!(packet.entry(k, l, i, j), direct.re, epsilon = 1e-12);
                // The full pairing is real: its imaginary part vanishes.
                assert!(direct.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eta_linearity_in_the_twist_plane() {
        let sp = space(3, 4, 1);
        let phi = random_phi(&sp, 33);
        let packet = eta_forms(&sp, &phi).unwrap();
        let mut r = rng::derived(34, "eta-linear", 0);
        let coeffs = rng::vector(&mut r, pairs::pair_count(4));
        let xi = SpinAlgebraElement::from_coeffs(4, coeffs).unwrap();
        let combined = packet.contract(&xi).unwrap();
        let psi = crate::twist::kappa_r_m(&sp, &xi, &phi).unwrap();
        for (i, j) in pairs::pairs(3) {
            let w = ExteriorForm::wedge_pair(3, i, j, 1.0).unwrap();
            let direct = base_form(&sp, &w, &psi).unwrap().inner(&phi).re;
            assert_abs_diff_eq!(combined[(i, j)], direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn nu_is_totally_antisymmetric_and_zero_on_repeats() {
        let sp = space(5, 2, 1);
        let phi = random_phi(&sp, 35);
        let nu = nu_form(&sp, &phi).unwrap();
        assert!(nu.antisymmetry_defect() < 1e-12);
        let zero = nu_form(&sp, &TwistedSpinor::zero(sp.sig())).unwrap();
        assert_eq!(zero.antisymmetry_defect(), 0.0);
    }

    #[test]
    fn killing_components_are_purely_imaginary() {
        let sp = space(4, 2, 2);
        let phi = random_phi(&sp, 37);
        let (raw, imag) = killing_vector_components(&sp, &phi).unwrap();
        for (c, im) in raw.iter().zip(&imag) {
            assert!(c.re.abs() < 1e-13);
            assert_eq!(c.im, *im);
        }
        let (zero_raw, _) = killing_vector_components(&sp, &TwistedSpinor::zero(sp.sig())).unwrap();
        assert!(zero_raw.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn em_tensor_of_killing_type_derivatives() {
        // ∇_i φ = μ e_i·φ gives Q = −μ·Id and trace −nμ.
        let sp = space(3, 3, 1);
        let phi = random_phi(&sp, 39);
        let mu = 0.7;
        let derivs: Vec<TwistedSpinor> = (0..3)
            .map(|i| {
                let mut x = vec![0.0; 3];
                x[i] = mu;
                crate::twist::base_vector_mul(&sp, &x, &phi).unwrap()
            })
            .collect();
        let em = em_tensor(&sp, &phi, &derivs).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { -mu } else { 0.0 };
                assert_abs_diff_eq!(em.q()[(i, j)], expected, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(em.trace(), -3.0 * mu, epsilon = 1e-12);
    }

    #[test]
    fn em_tensor_zero_derivs_and_zero_spinor() {
        let sp = space(2, 2, 1);
        let phi = random_phi(&sp, 41);
        let derivs = vec![TwistedSpinor::zero(sp.sig()); 2];
        let em = em_tensor(&sp, &phi, &derivs).unwrap();
        assert_eq!(em.ell_norm_sqr(), 0.0);
        assert!(matches!(
            em_tensor(&sp, &TwistedSpinor::zero(sp.sig()), &derivs),
            Err(Error::ZeroSpinor)
        ));
    }

    #[test]
    fn ell_contraction_consistency() {
        // Σ_j Q_ij² = |ℓ(e_i)|² row by row.
        let sp = space(4, 3, 1);
        let phi = random_phi(&sp, 43);
        let mut r = rng::derived(44, "em-derivs", 0);
        let derivs: Vec<TwistedSpinor> = (0..4)
            .map(|_| {
                TwistedSpinor::from_coords(sp.sig(), rng::complex_vector(&mut r, sp.dim())).unwrap()
            })
            .collect();
        let em = em_tensor(&sp, &phi, &derivs).unwrap();
        let mut total = 0.0;
        for i in 0..4 {
            let row: f64 = em.ell(i).iter().map(|x| x * x).sum();
            let direct: f64 = (0..4).map(|j| em.q()[(i, j)].powi(2)).sum();
            assert_abs_diff_eq!(row, direct, epsilon = 1e-14);
            total += row;
        }
        assert_abs_diff_eq!(total, em.ell_norm_sqr(), epsilon = 1e-13);
    }

    #[test]
    fn hat_is_transposition() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.5, -1.5, 0.0]);
        let h = hat(&m);
        assert_eq!(h[(0, 1)], -1.5);
        assert_eq!(h[(1, 0)], 1.5);
    }
}
