//! Twisted spinor spaces Δ_n ⊗ Δ_r^{⊗m}.
//!
//! Coordinates are laid out with the base Δ_n slowest and the twist factors
//! 1…m following, each in its own ε-basis, so the whole space is bit-indexed
//! and every operator is a chain of single-bit 2×2 kernels. Base Clifford
//! actions therefore touch large contiguous blocks while twist-factor
//! actions run strided through the vector.
//!
//! The spin(r) action on the tensor power follows the Leibniz rule
//! κ_{r*}^m(f_k f_l)(φ₁⊗…⊗φ_m) = Σ_a φ₁⊗…⊗(f_k f_l·φ_a)⊗…⊗φ_m.

use crate::clifford::{apply_form, CliffordRep, ExteriorForm};
use crate::error::{Error, Result};
use crate::kron::{self, ZERO};
use crate::spin::SpinAlgebraElement;
use crate::C64;

/// Default cap on the total complex dimension, 2^20.
pub const DEFAULT_DIM_CAP: u128 = 1 << 20;

/// The shape (n, r, m) of a twisted spinor space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TwistSignature {
    pub n: usize,
    pub r: usize,
    pub m: usize,
}

impl TwistSignature {
    pub fn new(n: usize, r: usize, m: usize) -> Result<Self> {
        Self::with_cap(n, r, m, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(n: usize, r: usize, m: usize, cap: u128) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        if r < 2 {
            return Err(Error::InvalidRank(r));
        }
        if m == 0 {
            return Err(Error::InvalidPower(m));
        }
        let bits = (n / 2) as u128 + (m as u128) * (r / 2) as u128;
        let dim: u128 = 1u128.checked_shl(bits as u32).ok_or(Error::DimensionCapExceeded {
            dim: u128::MAX,
            cap,
        })?;
        if dim > cap {
            return Err(Error::DimensionCapExceeded { dim, cap });
        }
        Ok(Self { n, r, m })
    }

    pub fn base_bits(&self) -> usize {
        self.n / 2
    }

    pub fn twist_bits(&self) -> usize {
        self.r / 2
    }

    pub fn total_bits(&self) -> usize {
        self.base_bits() + self.m * self.twist_bits()
    }

    pub fn dim(&self) -> usize {
        1 << self.total_bits()
    }

    /// Bit offset of twist factor `a` (0-based); factor m−1 is fastest.
    pub fn factor_offset(&self, a: usize) -> usize {
        (self.m - 1 - a) * self.twist_bits()
    }

    /// Bit offset of the base Δ_n slot.
    pub fn base_offset(&self) -> usize {
        self.m * self.twist_bits()
    }
}

/// A twisted spinor space together with its base and twist representation
/// tables. Build once, share read-only.
#[derive(Clone, Debug)]
pub struct TwistedSpace {
    sig: TwistSignature,
    base: CliffordRep,
    twist: CliffordRep,
}

impl TwistedSpace {
    pub fn new(sig: TwistSignature) -> Result<Self> {
        Ok(Self { sig, base: CliffordRep::new(sig.n)?, twist: CliffordRep::new(sig.r)? })
    }

    pub fn sig(&self) -> TwistSignature {
        self.sig
    }

    pub fn base_rep(&self) -> &CliffordRep {
        &self.base
    }

    pub fn twist_rep(&self) -> &CliffordRep {
        &self.twist
    }

    pub fn dim(&self) -> usize {
        self.sig.dim()
    }

    /// Apply the base generator κ(e_p) in place.
    pub fn apply_base_generator(&self, p: usize, v: &mut [C64]) {
        self.base.apply_generator(p, v, self.sig.base_offset());
    }

    /// Apply the twist generator κ(f_k) on factor `a` in place.
    pub fn apply_twist_generator(&self, a: usize, k: usize, v: &mut [C64]) {
        self.twist.apply_generator(k, v, self.sig.factor_offset(a));
    }
}

/// An element of Δ_n ⊗ Δ_r^{⊗m}.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSpinor {
    sig: TwistSignature,
    coords: Vec<C64>,
}

impl TwistedSpinor {
    pub fn zero(sig: TwistSignature) -> Self {
        Self { sig, coords: vec![ZERO; sig.dim()] }
    }

    pub fn from_coords(sig: TwistSignature, coords: Vec<C64>) -> Result<Self> {
        if coords.len() != sig.dim() {
            return Err(Error::DimensionMismatch { expected: sig.dim(), found: coords.len() });
        }
        Ok(Self { sig, coords })
    }

    /// Product basis element: base index and one ε-basis index per factor.
    pub fn basis(sig: TwistSignature, base_index: usize, factor_indices: &[usize]) -> Result<Self> {
        if factor_indices.len() != sig.m {
            return Err(Error::DimensionMismatch { expected: sig.m, found: factor_indices.len() });
        }
        if base_index >= 1 << sig.base_bits() {
            return Err(Error::IndexOutOfRange { index: base_index, n: 1 << sig.base_bits() });
        }
        let mut idx = base_index;
        for &f in factor_indices {
            if f >= 1 << sig.twist_bits() {
                return Err(Error::IndexOutOfRange { index: f, n: 1 << sig.twist_bits() });
            }
            idx = (idx << sig.twist_bits()) | f;
        }
        let mut s = Self::zero(sig);
        s.coords[idx] = kron::ONE;
        Ok(s)
    }

    pub fn sig(&self) -> TwistSignature {
        self.sig
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [C64] {
        &mut self.coords
    }

    pub fn inner(&self, other: &Self) -> C64 {
        kron::inner(&self.coords, &other.coords)
    }

    pub fn norm_sqr(&self) -> f64 {
        kron::norm_sqr(&self.coords)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// μ_r^a: an exterior form on ℝ^r acting on the a-th twist factor only.
pub fn mu_r_a(
    space: &TwistedSpace,
    a: usize,
    beta: &ExteriorForm,
    phi: &TwistedSpinor,
) -> Result<TwistedSpinor> {
    let sig = space.sig();
    if a >= sig.m {
        return Err(Error::FactorOutOfRange { a, m: sig.m });
    }
    if phi.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.dim(), found: phi.coords.len() });
    }
    let coords = apply_form(space.twist_rep(), beta, &phi.coords, sig.factor_offset(a))?;
    TwistedSpinor::from_coords(sig, coords)
}

/// κ_{r*}^m(ξ): the Leibniz-rule action of ξ ∈ spin(r) across all factors,
/// in place on raw coordinates.
pub fn kappa_r_m_raw(space: &TwistedSpace, xi: &SpinAlgebraElement, v: &[C64]) -> Result<Vec<C64>> {
    let sig = space.sig();
    if xi.n() != sig.r {
        return Err(Error::DimensionMismatch { expected: sig.r, found: xi.n() });
    }
    let mut out = vec![ZERO; v.len()];
    let mut tmp = vec![ZERO; v.len()];
    for a in 0..sig.m {
        let offset = sig.factor_offset(a);
        for (idx, (k, l)) in crate::pairs::pairs(sig.r).enumerate() {
            let c = xi.coeffs()[idx];
            if c == 0.0 {
                continue;
            }
            tmp.copy_from_slice(v);
            space.twist_rep().apply_generator(l, &mut tmp, offset);
            space.twist_rep().apply_generator(k, &mut tmp, offset);
            kron::axpy(&mut out, C64::new(c, 0.0), &tmp);
        }
    }
    Ok(out)
}

/// κ_{r*}^m(ξ) acting on a twisted spinor.
pub fn kappa_r_m(
    space: &TwistedSpace,
    xi: &SpinAlgebraElement,
    phi: &TwistedSpinor,
) -> Result<TwistedSpinor> {
    if phi.sig() != space.sig() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: phi.coords.len() });
    }
    let coords = kappa_r_m_raw(space, xi, &phi.coords)?;
    TwistedSpinor::from_coords(space.sig(), coords)
}

/// Exterior form acting on the base factor of a twisted spinor.
pub fn base_form(space: &TwistedSpace, omega: &ExteriorForm, phi: &TwistedSpinor) -> Result<TwistedSpinor> {
    if phi.sig() != space.sig() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: phi.coords.len() });
    }
    let coords = apply_form(space.base_rep(), omega, &phi.coords, space.sig().base_offset())?;
    TwistedSpinor::from_coords(space.sig(), coords)
}

/// Clifford multiplication by a base vector x ∈ ℝⁿ.
pub fn base_vector_mul(space: &TwistedSpace, x: &[f64], phi: &TwistedSpinor) -> Result<TwistedSpinor> {
    let sig = space.sig();
    if x.len() != sig.n || phi.sig() != sig {
        return Err(Error::DimensionMismatch { expected: sig.n, found: x.len() });
    }
    let mut out = vec![ZERO; phi.coords.len()];
    let mut tmp = vec![ZERO; phi.coords.len()];
    for (p, &xp) in x.iter().enumerate() {
        if xp == 0.0 {
            continue;
        }
        tmp.copy_from_slice(&phi.coords);
        space.apply_base_generator(p, &mut tmp);
        kron::axpy(&mut out, C64::new(xp, 0.0), &tmp);
    }
    TwistedSpinor::from_coords(sig, out)
}

/// Joint action (ω ⊗ β)·φ: ω acts on the base, β on the twist side. The
/// degree-0 part of β scales, the degree-2 part acts through the Leibniz rule
/// κ_{r*}^m; other degrees are rejected (they have no tensor-power extension).
/// Base and twist actions commute; the base acts first.
pub fn joint_action(
    space: &TwistedSpace,
    omega: &ExteriorForm,
    beta: &ExteriorForm,
    phi: &TwistedSpinor,
) -> Result<TwistedSpinor> {
    let sig = space.sig();
    if beta.n() != sig.r {
        return Err(Error::DimensionMismatch { expected: sig.r, found: beta.n() });
    }
    let mut scalar = 0.0;
    let mut xi_coeffs = vec![0.0; crate::pairs::pair_count(sig.r)];
    for (indices, c) in beta.terms() {
        match indices.len() {
            0 => scalar += c,
            2 => {
                xi_coeffs[crate::pairs::pair_index(sig.r, indices[0], indices[1])] += c;
            }
            d => {
                return Err(Error::InvalidForm(format!(
                    "twist form degree {d} has no canonical action on a tensor power"
                )))
            }
        }
    }
    let xi = SpinAlgebraElement::from_coeffs(sig.r, xi_coeffs)?;

    let based = base_form(space, omega, phi)?;
    let mut out = kappa_r_m(space, &xi, &based)?;
    if scalar != 0.0 {
        let mut scaled = based;
        kron::scale(scaled.coords_mut(), C64::new(scalar, 0.0));
        kron::axpy(out.coords_mut(), kron::ONE, scaled.coords());
    }
    Ok(out)
}

/// Which global construction, if any, makes the twisted bundle well defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GlobalDefinitionCase {
    /// Non-Spin base, odd power: the twisted structure group itself.
    SpinR,
    /// Base and auxiliary bundle both Spin: product of Spin groups.
    ProductSpinGroups,
    /// Spin base, non-Spin auxiliary bundle, even power: Spin(n)×SO(r).
    SpinTimesSOr,
    /// None of the constructions applies.
    Undefined,
}

/// Classify the global-definition options for S(TM) ⊗ S(F)^{⊗m}.
///
/// The fiberwise algebra in this crate is well defined for any signature; the
/// predicate is informational.
pub fn global_definition_case(m_spin: bool, f_spin: bool, m: usize) -> GlobalDefinitionCase {
    if m_spin && f_spin {
        GlobalDefinitionCase::ProductSpinGroups
    } else if !m_spin && m % 2 == 1 {
        GlobalDefinitionCase::SpinR
    } else if m_spin && !f_spin && m % 2 == 0 {
        GlobalDefinitionCase::SpinTimesSOr
    } else {
        GlobalDefinitionCase::Undefined
    }
}

/// Parity condition for a homogeneous twisted structure on the oriented
/// Grassmannian of k-planes in ℝ^{k+l}: a ≡ l and b ≡ k (mod 2). Returns the
/// flag together with the induced rank r = a·k + b·l.
pub fn grassmannian_parity(k: usize, l: usize, a: usize, b: usize) -> (bool, usize) {
    (a % 2 == l % 2 && b % 2 == k % 2, a * k + b * l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Spinor;
    use crate::rng;

    fn space(n: usize, r: usize, m: usize) -> TwistedSpace {
        TwistedSpace::new(TwistSignature::new(n, r, m).unwrap()).unwrap()
    }

    #[test]
    fn signature_validation() {
        assert!(TwistSignature::new(3, 1, 1).is_err());
        assert!(TwistSignature::new(0, 2, 1).is_err());
        assert!(TwistSignature::new(3, 2, 0).is_err());
        assert!(matches!(
            TwistSignature::new(40, 40, 3),
            Err(Error::DimensionCapExceeded { .. })
        ));
        let sig = TwistSignature::new(5, 3, 2).unwrap();
        assert_eq!(sig.dim(), 4 * 2 * 2);
    }

    #[test]
    fn single_factor_action_collapses_to_plain_clifford() {
        let sp = space(2, 3, 1);
        let mut r = rng::derived(1, "twist-collapse", 0);
        // Base basis index 0 tensor a random twist spinor.
        let twist_coords = rng::complex_vector(&mut r, 2);
        let mut phi = TwistedSpinor::zero(sp.sig());
        for (t, c) in twist_coords.iter().enumerate() {
            phi.coords_mut()[t] = *c; // base index 0 block
        }
        let beta = ExteriorForm::new(3, vec![(vec![1], 1.0)]).unwrap();
        let out = mu_r_a(&sp, 0, &beta, &phi).unwrap();

        let plain = Spinor::from_coords(3, twist_coords).unwrap();
        let expected =
            crate::clifford::clifford_mul(sp.twist_rep(), &[0.0, 1.0, 0.0], &plain).unwrap();
        for (t, c) in expected.coords().iter().enumerate() {
            assert_eq!(out.coords()[t], *c);
        }
    }

    #[test]
    fn factor_action_touches_only_that_factor() {
        let sp = space(3, 2, 3);
        // Basis element with known indices.
        let phi = TwistedSpinor::basis(sp.sig(), 1, &[0, 1, 0]).unwrap();
        let beta = ExteriorForm::new(2, vec![(vec![0], 1.0)]).unwrap();
        for a in 0..3 {
            let out = mu_r_a(&sp, a, &beta, &phi).unwrap();
            let support: Vec<usize> = out
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != ZERO)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(support.len(), 1, "single generator keeps a single basis element");
            // Only the bits of factor `a` may differ from the input index.
            let input_idx = 1usize << 3 | 0 << 2 | 1 << 1 | 0; // base=1, factors (0,1,0)
            let mask_factor = 1usize << sp.sig().factor_offset(a);
            assert_eq!(support[0] & !mask_factor, input_idx & !mask_factor);
        }
    }

    #[test]
    fn factor_actions_commute_for_distinct_factors() {
        let sp = space(3, 3, 2);
        let mut r = rng::derived(5, "twist-commute", 0);
        let phi = TwistedSpinor::from_coords(sp.sig(), rng::complex_vector(&mut r, sp.dim())).unwrap();
        let b1 = ExteriorForm::new(3, vec![(vec![0, 1], 1.0)]).unwrap();
        let b2 = ExteriorForm::new(3, vec![(vec![1, 2], 1.0)]).unwrap();
        let ab = mu_r_a(&sp, 1, &b2, &mu_r_a(&sp, 0, &b1, &phi).unwrap()).unwrap();
        let ba = mu_r_a(&sp, 0, &b1, &mu_r_a(&sp, 1, &b2, &phi).unwrap()).unwrap();
        for (x, y) in ab.coords().iter().zip(ba.coords()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn leibniz_rule_on_product_spinors() {
        // m = 2: κ(ξ)(φ₁⊗φ₂) = (ξφ₁)⊗φ₂ + φ₁⊗(ξφ₂)
        let sp = space(2, 3, 2);
        let mut r = rng::derived(9, "twist-leibniz", 0);
        let f1 = rng::complex_vector(&mut r, 2);
        let f2 = rng::complex_vector(&mut r, 2);
        // Assemble base ⊗ f1 ⊗ f2 with base = u_{+1}.
        let mut phi = TwistedSpinor::zero(sp.sig());
        for (i1, c1) in f1.iter().enumerate() {
            for (i2, c2) in f2.iter().enumerate() {
                phi.coords_mut()[(i1 << 1) | i2] = c1 * c2;
            }
        }
        let xi = SpinAlgebraElement::pair(3, 0, 2, 1.0).unwrap();
        let lhs = kappa_r_m(&sp, &xi, &phi).unwrap();

        let apply_xi = |v: &[C64]| {
            let s = Spinor::from_coords(3, v.to_vec()).unwrap();
            crate::spin::kappa_star(sp.twist_rep(), &xi, &s).unwrap().coords().to_vec()
        };
        let g1 = apply_xi(&f1);
        let g2 = apply_xi(&f2);
        let mut rhs = TwistedSpinor::zero(sp.sig());
        for i1 in 0..2 {
            for i2 in 0..2 {
                rhs.coords_mut()[(i1 << 1) | i2] = g1[i1] * f2[i2] + f1[i1] * g2[i2];
            }
        }
        for (x, y) in lhs.coords().iter().zip(rhs.coords()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn kappa_r_m_is_skew_hermitian() {
        for (n, r_rank, m) in [(3, 3, 2), (4, 4, 1), (2, 5, 2)] {
            let sp = space(n, r_rank, m);
            let mut rr = rng::derived(13, "twist-skew", (n * 100 + r_rank * 10 + m) as u64);
            let phi =
                TwistedSpinor::from_coords(sp.sig(), rng::unit_spinor(&mut rr, sp.dim())).unwrap();
            let psi =
                TwistedSpinor::from_coords(sp.sig(), rng::unit_spinor(&mut rr, sp.dim())).unwrap();
            let xi = SpinAlgebraElement::from_coeffs(
                r_rank,
                rng::vector(&mut rr, crate::pairs::pair_count(r_rank)),
            )
            .unwrap();
            let lhs = kappa_r_m(&sp, &xi, &phi).unwrap().inner(&psi);
            let rhs = -phi.inner(&kappa_r_m(&sp, &xi, &psi).unwrap());
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn joint_action_identity_and_composition() {
        let sp = space(3, 3, 2);
        let mut r = rng::derived(21, "joint", 0);
        let phi = TwistedSpinor::from_coords(sp.sig(), rng::complex_vector(&mut r, sp.dim())).unwrap();

        // ω = 1, β = 1 → identity.
        let id = joint_action(
            &sp,
            &ExteriorForm::scalar(3, 1.0),
            &ExteriorForm::scalar(3, 1.0),
            &phi,
        )
        .unwrap();
        for (x, y) in id.coords().iter().zip(phi.coords()) {
            assert!((x - y).norm() < 1e-15);
        }

        // Degree (2,2): equals base action then Leibniz twist action, in
        // either order.
        let omega = ExteriorForm::wedge_pair(3, 0, 1, 1.0).unwrap();
        let beta = ExteriorForm::wedge_pair(3, 1, 2, 1.0).unwrap();
        let joint = joint_action(&sp, &omega, &beta, &phi).unwrap();
        let xi = SpinAlgebraElement::pair(3, 1, 2, 1.0).unwrap();
        let seq = kappa_r_m(&sp, &xi, &base_form(&sp, &omega, &phi).unwrap()).unwrap();
        let seq2 = base_form(&sp, &omega, &kappa_r_m(&sp, &xi, &phi).unwrap()).unwrap();
        for ((x, y), z) in joint.coords().iter().zip(seq.coords()).zip(seq2.coords()) {
            assert!((x - y).norm() < 1e-14);
            assert!((x - z).norm() < 1e-14);
        }

        // Degree 1 on the twist side is rejected.
        let bad = ExteriorForm::new(3, vec![(vec![0], 1.0)]).unwrap();
        assert!(joint_action(&sp, &omega, &bad, &phi).is_err());
    }

    #[test]
    fn global_definition_cases() {
        use GlobalDefinitionCase::*;
        assert_eq!(global_definition_case(false, false, 1), SpinR);
        assert_eq!(global_definition_case(false, true, 3), SpinR);
        assert_eq!(global_definition_case(true, true, 2), ProductSpinGroups);
        assert_eq!(global_definition_case(true, false, 2), SpinTimesSOr);
        assert_eq!(global_definition_case(true, false, 1), Undefined);
        assert_eq!(global_definition_case(false, true, 2), Undefined);
    }

    #[test]
    fn grassmannian_parity_cases() {
        assert_eq!(grassmannian_parity(1, 3, 1, 1), (true, 4));
        assert_eq!(grassmannian_parity(2, 2, 1, 2), (false, 6));
        // a = l, b = k always satisfies the congruences.
        for (k, l) in [(1, 2), (3, 4), (2, 5)] {
            assert!(grassmannian_parity(k, l, l, k).0);
        }
    }
}
