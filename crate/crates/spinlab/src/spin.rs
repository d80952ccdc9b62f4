//! The Lie algebra spin(n) = span{e_i e_j | i < j} acting on spinors through
//! κ_* and on ℝⁿ through λ_*, with group elements obtained by exponentiation.
//!
//! λ_*(e_i e_j) = 2E_ij where E_ij = e_i^*⊗e_j − e_j^*⊗e_i, so exponentials
//! of λ_* are plane rotations at twice the spinor-side angle; the pair
//! (exp t·κ_*, exp t·λ_*) realizes the double cover explicitly, with
//! t = π on a single plane giving (−Id, Id).

use crate::clifford::{CliffordRep, Spinor};
use crate::error::{Error, Result};
use crate::kron;
use crate::linalg;
use crate::pairs;
use crate::C64;
use nalgebra::DMatrix;

/// An element of spin(n) with real coefficients on the pair basis
/// {e_i e_j | i < j}, lexicographically ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinAlgebraElement {
    n: usize,
    coeffs: Vec<f64>,
}

impl SpinAlgebraElement {
    pub fn zero(n: usize) -> Self {
        Self { n, coeffs: vec![0.0; pairs::pair_count(n)] }
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != pairs::pair_count(n) {
            return Err(Error::DimensionMismatch {
                expected: pairs::pair_count(n),
                found: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    /// The basis element c·e_i e_j, i < j.
    pub fn pair(n: usize, i: usize, j: usize, c: f64) -> Result<Self> {
        if i >= j || j >= n {
            return Err(Error::IndexOutOfRange { index: j.max(i), n });
        }
        let mut el = Self::zero(n);
        el.coeffs[pairs::pair_index(n, i, j)] = c;
        Ok(el)
    }

    /// Coefficient matrix view: antisymmetric A with A_ij = a_{ij} for i < j.
    pub fn coefficient_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (idx, (i, j)) in pairs::pairs(self.n).enumerate() {
            m[(i, j)] = self.coeffs[idx];
            m[(j, i)] = -self.coeffs[idx];
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.coeffs[pairs::pair_index(self.n, i, j)],
            Ordering::Greater => -self.coeffs[pairs::pair_index(self.n, j, i)],
            Ordering::Equal => 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// κ_*(ξ) = Σ a_ij κ(e_i)κ(e_j) applied to raw coordinates at a bit offset.
pub fn kappa_star_apply_raw(
    rep: &CliffordRep,
    xi: &SpinAlgebraElement,
    v: &[C64],
    offset: usize,
) -> Result<Vec<C64>> {
    if xi.n() != rep.n() {
        return Err(Error::DimensionMismatch { expected: rep.n(), found: xi.n() });
    }
    let mut out = vec![kron::ZERO; v.len()];
    let mut tmp = vec![kron::ZERO; v.len()];
    for (idx, (i, j)) in pairs::pairs(rep.n()).enumerate() {
        let c = xi.coeffs[idx];
        if c == 0.0 {
            continue;
        }
        tmp.copy_from_slice(v);
        rep.apply_generator(j, &mut tmp, offset);
        rep.apply_generator(i, &mut tmp, offset);
        kron::axpy(&mut out, C64::new(c, 0.0), &tmp);
    }
    Ok(out)
}

/// κ_*(ξ) acting on a spinor.
pub fn kappa_star(rep: &CliffordRep, xi: &SpinAlgebraElement, phi: &Spinor) -> Result<Spinor> {
    if phi.n() != rep.n() {
        return Err(Error::DimensionMismatch { expected: rep.n(), found: phi.n() });
    }
    let coords = kappa_star_apply_raw(rep, xi, phi.coords(), 0)?;
    Spinor::from_coords(phi.n(), coords)
}

/// Dense matrix of κ_*(ξ) in the working basis.
pub fn kappa_star_matrix(rep: &CliffordRep, xi: &SpinAlgebraElement) -> Result<DMatrix<C64>> {
    let dim = rep.dim();
    let mut err = None;
    let m = linalg::materialize(dim, |v| match kappa_star_apply_raw(rep, xi, v, 0) {
        Ok(out) => out,
        Err(e) => {
            err = Some(e);
            vec![kron::ZERO; dim]
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(m),
    }
}

/// λ_*(ξ): the antisymmetric matrix Σ a_ij · 2E_ij.
pub fn lambda_star(xi: &SpinAlgebraElement) -> DMatrix<f64> {
    let n = xi.n();
    let mut m = DMatrix::zeros(n, n);
    for (idx, (i, j)) in pairs::pairs(n).enumerate() {
        let c = 2.0 * xi.coeffs[idx];
        // e_i^*⊗e_j − e_j^*⊗e_i sends x to x_i e_j − x_j e_i.
        m[(j, i)] += c;
        m[(i, j)] -= c;
    }
    m
}

/// (exp(t κ_*(ξ)), exp(t λ_*(ξ))): a spin group element and the rotation it
/// covers. The spinor side is re-unitarized when exponentiation drift
/// exceeds 1e−12.
pub fn group_element(
    rep: &CliffordRep,
    xi: &SpinAlgebraElement,
    t: f64,
) -> Result<(DMatrix<C64>, DMatrix<f64>)> {
    let k = kappa_star_matrix(rep, xi)? * C64::new(t, 0.0);
    let spin_side = linalg::unitarize(linalg::matrix_exp(&k), 1e-12);
    let l = lambda_star(xi) * t;
    let l_c = l.map(|x| C64::new(x, 0.0));
    let rot_c = linalg::matrix_exp(&l_c);
    let rot = rot_c.map(|z| z.re);
    Ok((spin_side, rot))
}

/// The commutator [ξ, ζ] inside the Clifford algebra, re-expanded in the
/// e_i e_j basis by trace extraction: products of distinct generators are
/// traceless, and κ(e_i e_j)² = −Id gives the normalization.
pub fn clifford_bracket(
    rep: &CliffordRep,
    xi: &SpinAlgebraElement,
    zeta: &SpinAlgebraElement,
) -> Result<SpinAlgebraElement> {
    if xi.n() != rep.n() || zeta.n() != rep.n() {
        return Err(Error::DimensionMismatch { expected: rep.n(), found: xi.n().min(zeta.n()) });
    }
    let a = kappa_star_matrix(rep, xi)?;
    let b = kappa_star_matrix(rep, zeta)?;
    let comm = &a * &b - &b * &a;
    let dim = rep.dim() as f64;
    let mut coeffs = vec![0.0; pairs::pair_count(rep.n())];
    for (idx, (i, j)) in pairs::pairs(rep.n()).enumerate() {
        let basis_op = pair_matrix(rep, i, j);
        // coefficient = −tr(M · κ(e_i e_j)) / dim
        let tr: C64 = (0..rep.dim()).map(|q| (comm.row(q) * basis_op.column(q))[(0, 0)]).sum();
        coeffs[idx] = -(tr / C64::new(dim, 0.0)).re;
    }
    SpinAlgebraElement::from_coeffs(rep.n(), coeffs)
}

fn pair_matrix(rep: &CliffordRep, i: usize, j: usize) -> DMatrix<C64> {
    let dim = rep.dim();
    linalg::materialize(dim, |v| {
        let mut t = v.to_vec();
        rep.apply_generator(j, &mut t, 0);
        rep.apply_generator(i, &mut t, 0);
        t
    })
}

/// Residual of the Lie algebra homomorphism property
/// κ_*([ξ, ζ]) − [κ_*(ξ), κ_*(ζ)], as a max-entry norm.
pub fn homomorphism_residual(
    rep: &CliffordRep,
    xi: &SpinAlgebraElement,
    zeta: &SpinAlgebraElement,
) -> Result<f64> {
    let bracket = clifford_bracket(rep, xi, zeta)?;
    let lhs = kappa_star_matrix(rep, &bracket)?;
    let a = kappa_star_matrix(rep, xi)?;
    let b = kappa_star_matrix(rep, zeta)?;
    let rhs = &a * &b - &b * &a;
    Ok(linalg::max_abs(&(lhs - rhs)))
}
