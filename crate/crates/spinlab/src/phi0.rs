//! The universal parallel spinor φ₀ ∈ Δ_n ⊗ Δ_n (twist rank r = n, m = 1).
//!
//! φ₀ = Σ_ε C(n; ε) u_ε ⊗ u_{−ε} is supported on the diagonal-flip basis
//! elements, every coefficient has modulus one, and |φ₀|² = 2^{⌊n/2⌋}. The
//! four-case coefficient table collapses to the single closed form
//!
//! ```text
//!   C(n; ε) = i^{⌊n/2⌋ mod 2} · (−1)^{⌊n/8⌋ + #{odd slots α with ε_α = +1}}
//! ```
//!
//! Up to one global unit phase (checked in the tests), φ₀ agrees with
//! Σ_ψ ψ ⊗ γ_n(ψ) over the unitary basis, which is why the diagonal
//! subalgebra {e_p e_q + f_p f_q} annihilates it: γ_n commutes with even
//! Clifford products and is antilinear, so the two Leibniz terms cancel in
//! pairs. The residual checks below keep the construction honest for every
//! n rather than relying on that argument.

use crate::clifford::index_to_eps;
use crate::curvature::{curvature_action, ricci_from_parallel, AlgebraicCurvature, AuxCurvature};
use crate::error::{Error, Result};
use crate::forms::eta_forms;
use crate::kron::{self, ONE, ZERO};
use crate::linalg;
use crate::pairs;
use crate::spin::SpinAlgebraElement;
use crate::twist::{kappa_r_m_raw, TwistSignature, TwistedSpace, TwistedSpinor};
use crate::C64;

/// The universal parallel spinor with its coefficient table.
#[derive(Clone, Debug)]
pub struct Phi0 {
    n: usize,
    space: TwistedSpace,
    spinor: TwistedSpinor,
    coefficients: Vec<C64>,
}

/// C(n; ε) for the ε-tuple encoded as a basis index.
pub fn coefficient(n: usize, eps_index: usize) -> C64 {
    let k = n / 2;
    let eps = index_to_eps(eps_index, k);
    let odd_plus = eps.iter().step_by(2).filter(|&&e| e > 0).count();
    let sign = if (n / 8 + odd_plus) % 2 == 0 { 1.0 } else { -1.0 };
    if k % 2 == 1 {
        C64::new(0.0, sign)
    } else {
        C64::new(sign, 0.0)
    }
}

/// Build φ₀ on Δ_n ⊗ Δ_n.
pub fn build_phi0(n: usize) -> Result<Phi0> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let sig = TwistSignature::new(n, n, 1)?;
    let space = TwistedSpace::new(sig)?;
    let k = n / 2;
    let base_dim = 1usize << k;
    let mask = base_dim - 1;
    let mut coords = vec![ZERO; sig.dim()];
    let mut coefficients = Vec::with_capacity(base_dim);
    for idx in 0..base_dim {
        let c = coefficient(n, idx);
        coefficients.push(c);
        // u_ε ⊗ u_{−ε}: twist index is the bit-flip of the base index.
        coords[(idx << k) | (idx ^ mask)] = c;
    }
    let spinor = TwistedSpinor::from_coords(sig, coords)?;
    Ok(Phi0 { n, space, spinor, coefficients })
}

impl Phi0 {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> &TwistedSpace {
        &self.space
    }

    pub fn spinor(&self) -> &TwistedSpinor {
        &self.spinor
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// Support is exactly the diagonal-flip pairs, all coefficients of
    /// modulus one, |φ₀|² = 2^{⌊n/2⌋}. Returns the worst defect.
    pub fn structure_defect(&self) -> f64 {
        let k = self.n / 2;
        let base_dim = 1usize << k;
        let mask = base_dim - 1;
        let mut worst = 0.0f64;
        for (i, c) in self.spinor.coords().iter().enumerate() {
            let base = i >> k;
            let twist = i & mask;
            if twist == base ^ mask {
                worst = worst.max((c.norm() - 1.0).abs());
            } else {
                worst = worst.max(c.norm());
            }
        }
        worst = worst.max((self.spinor.norm_sqr() - base_dim as f64).abs());
        worst
    }
}

/// max over p < q of ‖(κ_{n*}(e_p e_q) ⊗ Id + Id ⊗ κ_{n*}(f_p f_q))·φ₀‖.
pub fn h_invariance_residual(phi0: &Phi0) -> f64 {
    h_invariance_residual_of(&phi0.space, phi0.spinor.coords())
}

fn h_invariance_residual_of(space: &TwistedSpace, coords: &[C64]) -> f64 {
    let n = space.sig().n;
    let mut worst = 0.0f64;
    for (p, q) in pairs::pairs(n) {
        let mut base_side = coords.to_vec();
        space.base_rep().apply_generator(q, &mut base_side, space.sig().base_offset());
        space.base_rep().apply_generator(p, &mut base_side, space.sig().base_offset());
        let xi = SpinAlgebraElement::pair(n, p, q, 1.0).expect("p < q < n");
        let twist_side = kappa_r_m_raw(space, &xi, coords).expect("matching rank");
        kron::axpy(&mut base_side, ONE, &twist_side);
        worst = worst.max(kron::norm(&base_side));
    }
    worst
}

/// Same residual after flipping the sign of one coefficient; the invariance
/// is coefficient-rigid, so this should be far from zero.
pub fn h_invariance_residual_with_flip(phi0: &Phi0, eps_index: usize) -> f64 {
    let k = phi0.n / 2;
    let mask = (1usize << k) - 1;
    let mut coords = phi0.spinor.coords().to_vec();
    let pos = (eps_index << k) | (eps_index ^ mask);
    coords[pos] = -coords[pos];
    h_invariance_residual_of(&phi0.space, &coords)
}

/// max deviation of η^{φ₀} from the packet 2^{⌊n/2⌋}·e_p ∧ e_q:
/// η_{pq}(e_s, e_t) = 2^{⌊n/2⌋}(δ_ps δ_qt − δ_pt δ_qs).
pub fn phi0_eta_check(phi0: &Phi0) -> Result<f64> {
    let packet = eta_forms(&phi0.space, &phi0.spinor)?;
    let n = phi0.n;
    let scale = (1u64 << (n / 2)) as f64;
    let mut worst = 0.0f64;
    for (p, q) in pairs::pairs(n) {
        let mat = packet.matrix(p, q);
        for s in 0..n {
            for t in 0..n {
                let expected = if (p, q) == (s, t) {
                    scale
                } else if (p, q) == (t, s) {
                    -scale
                } else {
                    0.0
                };
                worst = worst.max((mat[(s, t)] - expected).abs());
            }
        }
    }
    Ok(worst)
}

/// Consistency of the curvature machinery on φ₀ with the diagonal twist
/// Θ := Ω (r = n): the curvature action annihilates φ₀, and the packet
/// reconstruction returns Ric(Ω).
pub fn phi0_curvature_consistency(phi0: &Phi0, omega: &AlgebraicCurvature) -> Result<(f64, f64)> {
    let n = phi0.n;
    if omega.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: omega.n() });
    }
    let theta = AuxCurvature::from_riemann(phi0.space.sig(), omega)?;

    let mut action_residual = 0.0f64;
    for (i, j) in pairs::pairs(n) {
        let mut x = vec![0.0; n];
        x[i] = 1.0;
        let mut y = vec![0.0; n];
        y[j] = 1.0;
        let acted = curvature_action(&phi0.space, omega, &theta, &x, &y, &phi0.spinor)?;
        action_residual = action_residual.max(acted.norm());
    }

    let rec = ricci_from_parallel(&phi0.space, &theta, &phi0.spinor)?;
    let ricci_residual = linalg::frobenius_real(&(&rec.eta_theta - omega.ricci()));
    Ok((action_residual, ricci_residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{eps_to_index, gamma_structure, Spinor};

    #[test]
    fn rejects_n_below_two() {
        assert!(build_phi0(1).is_err());
    }

    #[test]
    fn n2_coefficients_match_hand_computation() {
        let phi0 = build_phi0(2).unwrap();
        assert_eq!(phi0.coefficients()[eps_to_index(&[1])], C64::new(0.0, -1.0));
        assert_eq!(phi0.coefficients()[eps_to_index(&[-1])], C64::new(0.0, 1.0));
        // φ₀ = −i u₊ ⊗ u₋ + i u₋ ⊗ u₊ in the 4-dim space.
        assert_eq!(phi0.spinor().coords()[0b01], C64::new(0.0, -1.0));
        assert_eq!(phi0.spinor().coords()[0b10], C64::new(0.0, 1.0));
        assert_eq!(phi0.spinor().coords()[0b00], ZERO);
        assert_eq!(phi0.spinor().coords()[0b11], ZERO);
    }

    #[test]
    fn n8_top_coefficient() {
        // ε = (+1,+1,+1,+1): (−1)^{1+2} = −1.
        let phi0 = build_phi0(8).unwrap();
        assert_eq!(phi0.coefficients()[eps_to_index(&[1, 1, 1, 1])], C64::new(-1.0, 0.0));
    }

    #[test]
    fn structure_invariants_hold() {
        for n in 2..=10 {
            let phi0 = build_phi0(n).unwrap();
            assert_eq!(phi0.structure_defect(), 0.0, "n={n}");
            assert_eq!(phi0.spinor().norm_sqr(), (1u64 << (n / 2)) as f64);
        }
    }

    #[test]
    fn matches_gamma_construction_up_to_global_phase() {
        for n in 2..=10 {
            let gamma = gamma_structure(n).unwrap();
            let k = n / 2;
            let base_dim = 1usize << k;
            let phi0 = build_phi0(n).unwrap();
            // Σ_ψ ψ ⊗ γ(ψ) over the ε-basis, coefficient on u_ε⊗u_{−ε}.
            let mut gamma_coeffs = Vec::with_capacity(base_dim);
            for idx in 0..base_dim {
                let eps = index_to_eps(idx, k);
                let img = gamma.apply(&Spinor::basis(n, &eps).unwrap()).unwrap();
                let mask = base_dim - 1;
                gamma_coeffs.push(img.coords()[idx ^ mask]);
            }
            let phase = phi0.coefficients()[0] / gamma_coeffs[0];
            assert!((phase.norm() - 1.0).abs() < 1e-14, "n={n}");
            for (a, b) in phi0.coefficients().iter().zip(&gamma_coeffs) {
                assert!((a - b * phase).norm() < 1e-14, "n={n}");
            }
        }
    }

    #[test]
    fn invariance_residual_small_and_flip_control_large() {
        for n in 2..=10 {
            let phi0 = build_phi0(n).unwrap();
            let res = h_invariance_residual(&phi0);
            assert!(res <= 1e-10, "n={n} residual={res:.3e}");
            if n >= 3 {
                // The flip control needs at least two planes to bite: for
                // n = 2 the diagonal so(2) annihilates the full span of
                // u₊⊗u₋ and u₋⊗u₊, so any coefficient pair is invariant.
                let flipped = h_invariance_residual_with_flip(&phi0, 0);
                assert!(flipped > 0.1, "n={n} flipped residual={flipped:.3e}");
            }
        }
    }

    #[test]
    fn eta_packet_is_scaled_standard_basis() {
        for n in 2..=8 {
            let phi0 = build_phi0(n).unwrap();
            let dev = phi0_eta_check(&phi0).unwrap();
            assert!(dev <= 1e-9, "n={n} deviation={dev:.3e}");
        }
    }

    #[test]
    fn curvature_consistency_random_identity_and_zero() {
        for n in 3..=6 {
            let phi0 = build_phi0(n).unwrap();
            let omega = AlgebraicCurvature::random(n, 7 + n as u64);
            let (action, ricci) = phi0_curvature_consistency(&phi0, &omega).unwrap();
            assert!(action <= 1e-9, "n={n} action residual={action:.3e}");
            assert!(ricci <= 1e-9, "n={n} ricci residual={ricci:.3e}");
        }

        let phi0 = build_phi0(4).unwrap();
        let zero = AlgebraicCurvature::from_operator(
            4,
            nalgebra::DMatrix::zeros(pairs::pair_count(4), pairs::pair_count(4)),
        )
        .unwrap();
        assert_eq!(phi0_curvature_consistency(&phi0, &zero).unwrap(), (0.0, 0.0));

        // Ω = Id: the reconstruction equals (n−1)·Id.
        let id = AlgebraicCurvature::identity(4);
        let theta = AuxCurvature::from_riemann(phi0.space().sig(), &id).unwrap();
        let rec = ricci_from_parallel(phi0.space(), &theta, phi0.spinor()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 3.0 } else { 0.0 };
                assert!((rec.eta_theta[(i, j)] - want).abs() < 1e-10);
            }
        }
    }
}
