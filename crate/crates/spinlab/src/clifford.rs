//! The complex spinor module Δ_n = (ℂ²)^{⊗k}, k = ⌊n/2⌋, with Clifford
//! multiplication, exterior-form action, and the real/quaternionic structures.
//!
//! Coordinates are taken with respect to the unitary basis
//! u_{ε_1,…,ε_k} = u_{ε_1}⊗…⊗u_{ε_k}, u_{±1} = (1, ∓i)/√2, ordered
//! lexicographically with ε = +1 before ε = −1 and ε_1 slowest. Concretely,
//! ε_j = +1 maps to bit 0 at bit position k−j, so the last tensor factor is
//! the fastest index. In this basis the generator factors are
//!
//! ```text
//!   g₁ ↦ [[0, i], [i, 0]]     g₂ ↦ [[0, −1], [1, 0]]     T ↦ [[−1, 0], [0, 1]]
//! ```
//!
//! with entries in {0, ±1, ±i}, so the defining relations
//! e_i e_j + e_j e_i = −2δ_ij hold exactly in floating point. The familiar
//! matrices g₁ = diag(i, −i), g₂ = [[0, i], [i, 0]], T = [[0, −i], [i, 0]]
//! of the standard ℂ² basis are exposed through [`CliffordRep::standard_generator`]
//! for conformance checks; the two descriptions are conjugate by
//! U = (u_{+1} | u_{−1}) factor by factor.
//!
//! Generator layout: e_{2j−1} acts by g₁ on factor k−j+1 and T on all later
//! factors, e_{2j} the same with g₂, and for odd n the last generator is
//! i·T^{⊗k}.

use crate::error::{Error, Result};
use crate::kron::{self, Block, KroneckerOperator, I, ONE, ZERO};
use crate::C64;

const MINUS_ONE: C64 = C64::new(-1.0, 0.0);
const MINUS_I: C64 = C64::new(0.0, -1.0);

/// u-basis factor blocks.
pub const G1_U: Block = [[ZERO, I], [I, ZERO]];
pub const G2_U: Block = [[ZERO, MINUS_ONE], [ONE, ZERO]];
pub const T_U: Block = [[MINUS_ONE, ZERO], [ZERO, ONE]];

/// Standard-basis factor blocks, as usually tabulated.
pub const G1_STD: Block = [[I, ZERO], [ZERO, MINUS_I]];
pub const G2_STD: Block = [[ZERO, I], [I, ZERO]];
pub const T_STD: Block = [[ZERO, MINUS_I], [I, ZERO]];

/// The images κ(e_0), …, κ(e_{n−1}) of the Clifford generators on Δ_n.
#[derive(Clone, Debug)]
pub struct CliffordRep {
    n: usize,
    k: usize,
    generators: Vec<KroneckerOperator>,
}

fn generator_blocks(n: usize, p: usize, g1: Block, g2: Block, t: Block) -> (C64, Vec<(usize, Block)>) {
    let k = n / 2;
    let pp = p + 1; // 1-based generator number
    if n % 2 == 1 && pp == n {
        // e_n = i T ⊗ … ⊗ T on all k factors
        return (I, (0..k).map(|b| (b, t)).collect());
    }
    let j = (pp + 1) / 2; // head sits on factor k−j+1, i.e. bit j−1
    let head = if pp % 2 == 1 { g1 } else { g2 };
    let mut blocks = vec![(j - 1, head)];
    for b in 0..j - 1 {
        blocks.push((b, t));
    }
    (ONE, blocks)
}

impl CliffordRep {
    /// Build the representation table for Δ_n.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let k = n / 2;
        let generators = (0..n)
            .map(|p| {
                let (scalar, blocks) = generator_blocks(n, p, G1_U, G2_U, T_U);
                KroneckerOperator::new(k, scalar, blocks)
            })
            .collect();
        Ok(Self { n, k, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of tensor factors, ⌊n/2⌋.
    pub fn k(&self) -> usize {
        self.k
    }

    /// dim Δ_n = 2^{⌊n/2⌋}.
    pub fn dim(&self) -> usize {
        1 << self.k
    }

    /// κ(e_p) in the working (u) basis.
    pub fn generator(&self, p: usize) -> &KroneckerOperator {
        &self.generators[p]
    }

    pub fn generators(&self) -> &[KroneckerOperator] {
        &self.generators
    }

    /// κ(e_p) in the standard ℂ² basis, matching the usual g₁/g₂/T table.
    pub fn standard_generator(&self, p: usize) -> KroneckerOperator {
        let (scalar, blocks) = generator_blocks(self.n, p, G1_STD, G2_STD, T_STD);
        KroneckerOperator::new(self.k, scalar, blocks)
    }

    /// Apply κ(e_p) to raw coordinates at a bit offset (twisted layouts).
    pub fn apply_generator(&self, p: usize, v: &mut [C64], offset: usize) {
        self.generators[p].apply_in_place_offset(v, offset);
    }
}

/// A spinor in Δ_n: dense coordinates in the lexicographic ε-basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Spinor {
    n: usize,
    coords: Vec<C64>,
}

impl Spinor {
    pub fn zero(n: usize) -> Self {
        Self { n, coords: vec![ZERO; 1 << (n / 2)] }
    }

    pub fn from_coords(n: usize, coords: Vec<C64>) -> Result<Self> {
        let expected = 1usize << (n / 2);
        if coords.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coords.len() });
        }
        Ok(Self { n, coords })
    }

    /// The basis spinor u_ε for a sign tuple ε ∈ {±1}^{⌊n/2⌋}.
    pub fn basis(n: usize, eps: &[i8]) -> Result<Self> {
        let k = n / 2;
        if eps.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: eps.len() });
        }
        let mut s = Self::zero(n);
        s.coords[eps_to_index(eps)] = ONE;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
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

/// Index of the ε-basis element: ε = +1 is bit 0, ε_1 is the slowest index.
pub fn eps_to_index(eps: &[i8]) -> usize {
    let k = eps.len();
    let mut idx = 0usize;
    for (j, &e) in eps.iter().enumerate() {
        if e < 0 {
            idx |= 1 << (k - 1 - j);
        }
    }
    idx
}

/// Sign tuple of a basis index, inverse of [`eps_to_index`].
pub fn index_to_eps(idx: usize, k: usize) -> Vec<i8> {
    (0..k).map(|j| if idx >> (k - 1 - j) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Clifford multiplication x·φ = Σᵢ xᵢ κ(e_i)φ, applied matrix-free.
pub fn clifford_mul(rep: &CliffordRep, x: &[f64], phi: &Spinor) -> Result<Spinor> {
    if x.len() != rep.n() || phi.n() != rep.n() {
        return Err(Error::DimensionMismatch { expected: rep.n(), found: x.len().max(phi.coords.len()) });
    }
    let mut out = vec![ZERO; rep.dim()];
    let mut tmp = vec![ZERO; rep.dim()];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        tmp.copy_from_slice(&phi.coords);
        rep.apply_generator(i, &mut tmp, 0);
        kron::axpy(&mut out, C64::new(xi, 0.0), &tmp);
    }
    Ok(Spinor { n: phi.n, coords: out })
}

/// An exterior form given by real coefficients on strictly increasing index
/// tuples; the empty tuple is the scalar part.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorForm {
    n: usize,
    terms: Vec<(Vec<usize>, f64)>,
}

impl ExteriorForm {
    pub fn new(n: usize, terms: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        for (idx, _) in &terms {
            if !idx.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidForm(format!("indices {idx:?} not strictly increasing")));
            }
            if let Some(&last) = idx.last() {
                if last >= n {
                    return Err(Error::IndexOutOfRange { index: last, n });
                }
            }
        }
        Ok(Self { n, terms })
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        Self { n, terms: vec![(Vec::new(), c)] }
    }

    pub fn wedge_pair(n: usize, i: usize, j: usize, c: f64) -> Result<Self> {
        Self::new(n, vec![(vec![i, j], c)])
    }

    /// X ∧ Y with components Σ_{i<j} (X_i Y_j − X_j Y_i) e_i ∧ e_j.
    pub fn wedge_of_vectors(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        let n = x.len();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = x[i] * y[j] - x[j] * y[i];
                if c != 0.0 {
                    terms.push((vec![i, j], c));
                }
            }
        }
        Ok(Self { n, terms })
    }

    /// A degree-2 form from an antisymmetric coefficient matrix A_{ij}.
    pub fn from_antisymmetric(m: &nalgebra::DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::NotAntisymmetric("matrix not square".into()));
        }
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != 0.0 {
                    terms.push((vec![i, j], m[(i, j)]));
                }
            }
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<usize>, f64)] {
        &self.terms
    }

    /// Maximum degree appearing with a non-zero coefficient.
    pub fn degree(&self) -> usize {
        self.terms.iter().filter(|(_, c)| *c != 0.0).map(|(i, _)| i.len()).max().unwrap_or(0)
    }
}

/// Action of an exterior form: e_{i₁}∧…∧e_{i_p} acts as κ(e_{i₁})⋯κ(e_{i_p}),
/// extended linearly. Applied to raw coordinates at a bit offset.
pub fn apply_form(rep: &CliffordRep, form: &ExteriorForm, v: &[C64], offset: usize) -> Result<Vec<C64>> {
    if form.n != rep.n() {
        return Err(Error::DimensionMismatch { expected: rep.n(), found: form.n });
    }
    let mut out = vec![ZERO; v.len()];
    let mut tmp = vec![ZERO; v.len()];
    for (indices, c) in &form.terms {
        if *c == 0.0 {
            continue;
        }
        tmp.copy_from_slice(v);
        // Rightmost generator acts first.
        for &i in indices.iter().rev() {
            rep.apply_generator(i, &mut tmp, offset);
        }
        kron::axpy(&mut out, C64::new(*c, 0.0), &tmp);
    }
    Ok(out)
}

/// Action of an exterior form on a spinor of matching dimension.
pub fn form_action(rep: &CliffordRep, form: &ExteriorForm, phi: &Spinor) -> Result<Spinor> {
    if phi.n() != rep.n() {
        return Err(Error::DimensionMismatch { expected: rep.n(), found: phi.n() });
    }
    Ok(Spinor { n: phi.n, coords: apply_form(rep, form, &phi.coords, 0)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum StructureKind {
    Real,
    Quaternionic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FactorStructure {
    Alpha,
    Beta,
}

/// The real (γ² = +1) or quaternionic (γ² = −1) structure γ_n on Δ_n, an
/// antilinear map built factorwise from α(z₁, z₂) = (−z̄₂, z̄₁) and
/// β(z₁, z₂) = (z̄₁, z̄₂), alternating α, β, α, … across the tensor factors.
#[derive(Clone, Debug)]
pub struct AntilinearStructure {
    n: usize,
    kind: StructureKind,
    pattern: Vec<FactorStructure>,
}

/// γ_n: real for n ≡ 0, 1, 6, 7 (mod 8), quaternionic for n ≡ 2, 3, 4, 5.
pub fn gamma_structure(n: usize) -> Result<AntilinearStructure> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let k = n / 2;
    let pattern = (0..k)
        .map(|j| if j % 2 == 0 { FactorStructure::Alpha } else { FactorStructure::Beta })
        .collect();
    let kind = match n % 8 {
        0 | 1 | 6 | 7 => StructureKind::Real,
        _ => StructureKind::Quaternionic,
    };
    Ok(AntilinearStructure { n, kind, pattern })
}

impl AntilinearStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn pattern(&self) -> &[FactorStructure] {
        &self.pattern
    }

    /// Apply γ_n. In the ε-basis, α sends u_ε ↦ −iε·u_{−ε} and β sends
    /// u_ε ↦ u_{−ε}, so the image of a coordinate lands on the bit-flipped
    /// index with a ±i factor per α slot.
    pub fn apply(&self, phi: &Spinor) -> Result<Spinor> {
        if phi.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: phi.n() });
        }
        let k = self.n / 2;
        let dim = 1usize << k;
        let mask = dim - 1;
        let mut out = vec![ZERO; dim];
        for (idx, c) in phi.coords.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let mut coeff = ONE;
            for (j, f) in self.pattern.iter().enumerate() {
                if matches!(f, FactorStructure::Alpha) {
                    let bit = k - 1 - j;
                    // ε = +1 (bit 0) contributes −i, ε = −1 contributes +i.
                    coeff *= if idx >> bit & 1 == 0 { MINUS_I } else { I };
                }
            }
            out[idx ^ mask] = coeff * c.conj();
        }
        Ok(Spinor { n: self.n, coords: out })
    }
}

/// Closed-form action of a generator on a basis spinor, for even n.
///
/// For 1-based p and K = n/2 sign slots, e_p·u_ε picks up the coefficient
/// i^{p mod 2} (−1)^{⌈p/2⌉−1} ∏_{α=K−⌈p/2⌉+1+(p mod 2)}^{K} ε_α and flips the
/// sign at slot K−⌈p/2⌉+1. Serves as an independent oracle against
/// [`clifford_mul`]; `p` is 0-based here like everywhere else in the API.
pub fn basis_action_oracle(n: usize, p: usize, eps: &[i8]) -> Result<(C64, Vec<i8>)> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidDimension(n));
    }
    if p >= n {
        return Err(Error::IndexOutOfRange { index: p, n });
    }
    let k = n / 2;
    if eps.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: eps.len() });
    }
    let pp = p + 1;
    let t = pp.div_ceil(2);
    let parity = pp % 2;
    let mut coeff = if parity == 1 { I } else { ONE };
    if (t - 1) % 2 == 1 {
        coeff = -coeff;
    }
    // Product over 1-based slots K−t+1+parity ..= K.
    for alpha in (k - t + parity + 1)..=k {
        coeff *= C64::new(eps[alpha - 1] as f64, 0.0);
    }
    let mut flipped = eps.to_vec();
    flipped[k - t] = -flipped[k - t];
    Ok((coeff, flipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kron::inner;
    use crate::rng;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn max_entry(m: &nalgebra::DMatrix<C64>) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_n_zero() {
        assert!(matches!(CliffordRep::new(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn standard_generators_match_table_for_small_n() {
        // n = 2: e_1 ↦ g₁ = diag(i, −i), e_2 ↦ g₂ = [[0, i], [i, 0]].
        let rep = CliffordRep::new(2).unwrap();
        let g1 = rep.standard_generator(0).materialize();
        let g2 = rep.standard_generator(1).materialize();
        assert_eq!(g1[(0, 0)], I);
        assert_eq!(g1[(1, 1)], -I);
        assert_eq!(g1[(0, 1)], ZERO);
        assert_eq!(g2[(0, 1)], I);
        assert_eq!(g2[(1, 0)], I);

        // n = 3: e_3 ↦ i·T = [[0, 1], [−1, 0]].
        let rep3 = CliffordRep::new(3).unwrap();
        let e3 = rep3.standard_generator(2).materialize();
        assert_eq!(e3[(0, 1)], ONE);
        assert_eq!(e3[(1, 0)], -ONE);
    }

    #[test]
    fn u_basis_and_standard_basis_are_conjugate() {
        // U = (u_{+1} | u_{−1}) per factor.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = nalgebra::DMatrix::from_row_slice(2, 2, &[
            C64::new(s, 0.0), C64::new(s, 0.0),
            C64::new(0.0, -s), C64::new(0.0, s),
        ]);
        for (gu, gs) in [(G1_U, G1_STD), (G2_U, G2_STD), (T_U, T_STD)] {
            let mu = nalgebra::DMatrix::from_row_slice(2, 2, &[gu[0][0], gu[0][1], gu[1][0], gu[1][1]]);
            let ms = nalgebra::DMatrix::from_row_slice(2, 2, &[gs[0][0], gs[0][1], gs[1][0], gs[1][1]]);
            let diff = &u * &mu * u.adjoint() - ms;
            assert!(max_entry(&diff) < 1e-15);
        }
    }

    #[test]
    fn anticommutation_is_exact() {
        for n in [1, 2, 3, 5, 8] {
            let rep = CliffordRep::new(n).unwrap();
            let id = nalgebra::DMatrix::<C64>::identity(rep.dim(), rep.dim());
            for i in 0..n {
                for j in 0..n {
                    let a = rep.generator(i).materialize();
                    let b = rep.generator(j).materialize();
                    let anti = &a * &b + &b * &a;
                    let expected = if i == j { &id * C64::new(-2.0, 0.0) } else { &id * ZERO };
                    assert_eq!(max_entry(&(anti - expected)), 0.0, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn generators_are_unitary_and_skew_hermitian() {
        for n in [2, 3, 6, 7] {
            let rep = CliffordRep::new(n).unwrap();
            let id = nalgebra::DMatrix::<C64>::identity(rep.dim(), rep.dim());
            for i in 0..n {
                let a = rep.generator(i).materialize();
                assert_eq!(max_entry(&(a.adjoint() * &a - &id)), 0.0);
                assert_eq!(max_entry(&(a.adjoint() + &a)), 0.0);
            }
        }
    }

    #[test]
    fn e1_maps_u_plus_to_i_u_minus() {
        let rep = CliffordRep::new(2).unwrap();
        let phi = Spinor::basis(2, &[1]).unwrap();
        let psi = clifford_mul(&rep, &[1.0, 0.0], &phi).unwrap();
        assert_eq!(psi.coords()[eps_to_index(&[-1])], I);
        assert_eq!(psi.coords()[eps_to_index(&[1])], ZERO);
    }

    #[test]
    fn zero_vector_acts_as_zero() {
        let rep = CliffordRep::new(5).unwrap();
        let mut r = rng::derived(1, "clifford-zero", 0);
        let phi = Spinor::from_coords(5, rng::complex_vector(&mut r, rep.dim())).unwrap();
        let psi = clifford_mul(&rep, &[0.0; 5], &phi).unwrap();
        assert_eq!(psi.norm_sqr(), 0.0);
    }

    #[test]
    fn clifford_mul_is_skew_with_respect_to_hermitian_product() {
        for n in 2..=8 {
            let rep = CliffordRep::new(n).unwrap();
            for trial in 0..20u64 {
                let mut r = rng::derived(7, "clifford-skew", (n as u64) << 8 | trial);
                let x = rng::vector(&mut r, n);
                let phi = Spinor::from_coords(n, rng::unit_spinor(&mut r, rep.dim())).unwrap();
                let psi = Spinor::from_coords(n, rng::unit_spinor(&mut r, rep.dim())).unwrap();
                let lhs = clifford_mul(&rep, &x, &phi).unwrap().inner(&psi);
                let rhs = -phi.inner(&clifford_mul(&rep, &x, &psi).unwrap());
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn real_part_identity() {
        // Re⟨X·φ, Y·φ⟩ = ⟨X, Y⟩ |φ|².
        for n in 2..=8 {
            let rep = CliffordRep::new(n).unwrap();
            let mut r = rng::derived(11, "clifford-real-part", n as u64);
            let x = rng::vector(&mut r, n);
            let y = rng::vector(&mut r, n);
            let phi = Spinor::from_coords(n, rng::unit_spinor(&mut r, rep.dim())).unwrap();
            let lhs = clifford_mul(&rep, &x, &phi)
                .unwrap()
                .inner(&clifford_mul(&rep, &y, &phi).unwrap())
                .re;
            let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            assert_abs_diff_eq!(lhs, xy * phi.norm_sqr(), epsilon = 1e-10);
        }
    }

    #[test]
    fn wedge_action_equals_product_plus_inner_correction() {
        // X∧Y·φ = X·Y·φ + ⟨X,Y⟩φ.
        for n in [3, 4, 6] {
            let rep = CliffordRep::new(n).unwrap();
            let mut r = rng::derived(3, "form-wedge", n as u64);
            let x = rng::vector(&mut r, n);
            let y = rng::vector(&mut r, n);
            let phi = Spinor::from_coords(n, rng::unit_spinor(&mut r, rep.dim())).unwrap();
            let wedge = ExteriorForm::wedge_of_vectors(&x, &y).unwrap();
            let lhs = form_action(&rep, &wedge, &phi).unwrap();
            let mut rhs = clifford_mul(&rep, &y, &phi).unwrap();
            rhs = clifford_mul(&rep, &x, &rhs).unwrap();
            let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            kron::axpy(rhs.coords_mut(), C64::new(xy, 0.0), phi.coords());
            let diff: f64 = lhs
                .coords()
                .iter()
                .zip(rhs.coords())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-12, "n={n} diff={diff}");
        }
    }

    #[test]
    fn empty_form_is_identity_and_e12_squares_to_minus_id() {
        let rep = CliffordRep::new(4).unwrap();
        let mut r = rng::derived(5, "form-scalar", 0);
        let phi = Spinor::from_coords(4, rng::complex_vector(&mut r, rep.dim())).unwrap();
        let id = form_action(&rep, &ExteriorForm::scalar(4, 1.0), &phi).unwrap();
        assert_eq!(id, phi);

        let w = ExteriorForm::wedge_pair(4, 0, 1, 1.0).unwrap();
        let twice = form_action(&rep, &w, &form_action(&rep, &w, &phi).unwrap()).unwrap();
        for (a, b) in twice.coords().iter().zip(phi.coords()) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn form_validation_rejects_bad_indices() {
        assert!(ExteriorForm::new(4, vec![(vec![1, 1], 1.0)]).is_err());
        assert!(ExteriorForm::new(4, vec![(vec![2, 1], 1.0)]).is_err());
        assert!(ExteriorForm::new(4, vec![(vec![0, 4], 1.0)]).is_err());
    }

    #[test]
    fn gamma_pattern_and_kind_follow_mod_8() {
        let g2 = gamma_structure(2).unwrap();
        assert_eq!(g2.kind(), StructureKind::Quaternionic);
        assert_eq!(g2.pattern(), &[FactorStructure::Alpha]);

        let g8 = gamma_structure(8).unwrap();
        assert_eq!(g8.kind(), StructureKind::Real);
        assert_eq!(
            g8.pattern(),
            &[
                FactorStructure::Alpha,
                FactorStructure::Beta,
                FactorStructure::Alpha,
                FactorStructure::Beta
            ]
        );
    }

    #[test]
    fn gamma_2_on_u_plus() {
        let g = gamma_structure(2).unwrap();
        let phi = Spinor::basis(2, &[1]).unwrap();
        let img = g.apply(&phi).unwrap();
        assert_eq!(img.coords()[eps_to_index(&[-1])], MINUS_I);
    }

    #[test]
    fn gamma_squares_to_sign_by_kind() {
        for n in 2..=10 {
            let g = gamma_structure(n).unwrap();
            let dim = 1usize << (n / 2);
            let mut r = rng::derived(9, "gamma-square", n as u64);
            let phi = Spinor::from_coords(n, rng::complex_vector(&mut r, dim)).unwrap();
            let twice = g.apply(&g.apply(&phi).unwrap()).unwrap();
            let sign = match g.kind() {
                StructureKind::Real => 1.0,
                StructureKind::Quaternionic => -1.0,
            };
            for (a, b) in twice.coords().iter().zip(phi.coords()) {
                assert!((a - b * C64::new(sign, 0.0)).norm() < 1e-15, "n={n}");
            }
        }
    }

    #[test]
    fn gamma_is_antilinear() {
        let g = gamma_structure(6).unwrap();
        let mut r = rng::derived(13, "gamma-antilinear", 0);
        let phi = Spinor::from_coords(6, rng::complex_vector(&mut r, 8)).unwrap();
        let c = C64::new(rng::unit_f64(&mut r), rng::unit_f64(&mut r));
        let mut scaled = phi.clone();
        kron::scale(scaled.coords_mut(), c);
        let lhs = g.apply(&scaled).unwrap();
        let mut rhs = g.apply(&phi).unwrap();
        kron::scale(rhs.coords_mut(), c.conj());
        for (a, b) in lhs.coords().iter().zip(rhs.coords()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn oracle_smallest_case_and_sign_example() {
        // n = 2, first generator on u_{+1}: coefficient i, slot 1 flips.
        let (c, eps) = basis_action_oracle(2, 0, &[1]).unwrap();
        assert_eq!(c, I);
        assert_eq!(eps, vec![-1]);

        // n = 4, third generator (1-based p = 3): (−1)^{⌈3/2⌉−1} = −1 shows up.
        let (c, _) = basis_action_oracle(4, 2, &[1, 1]).unwrap();
        assert_eq!(c, MINUS_I);
    }

    #[test]
    fn oracle_rejects_odd_n() {
        assert!(basis_action_oracle(3, 0, &[1]).is_err());
    }

    #[test]
    fn oracle_agrees_with_clifford_mul_on_every_basis_spinor() {
        for n in [2usize, 4, 6, 8, 10] {
            let rep = CliffordRep::new(n).unwrap();
            let k = n / 2;
            for idx in 0..rep.dim() {
                let eps = index_to_eps(idx, k);
                let phi = Spinor::basis(n, &eps).unwrap();
                for p in 0..n {
                    let mut x = vec![0.0; n];
                    x[p] = 1.0;
                    let applied = clifford_mul(&rep, &x, &phi).unwrap();
                    let (coeff, flipped) = basis_action_oracle(n, p, &eps).unwrap();
                    let target = eps_to_index(&flipped);
                    for (i, c) in applied.coords().iter().enumerate() {
                        let expected = if i == target { coeff } else { ZERO };
                        assert_eq!(*c, expected, "n={n} p={p} eps={eps:?} entry {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn random_spinor_inner_product_is_hermitian() {
        let mut r = rng::derived(21, "inner-herm", 0);
        let a = rng::complex_vector(&mut r, 16);
        let b = rng::complex_vector(&mut r, 16);
        let lhs = inner(&a, &b);
        let rhs = inner(&b, &a).conj();
        assert!((lhs - rhs).norm() < 1e-15);
        let _ = r.gen::<u8>();
    }
}
