//! JSON interchange schemas for spinors, packets, curvature data and torus
//! configurations. All indices are 0-based; matrices are nested row-major
//! arrays. Schema shapes are documented in the README.

use crate::clifford::Spinor;
use crate::curvature::{AlgebraicCurvature, AuxCurvature};
use crate::error::{Error, Result};
use crate::forms::TwoFormPacket;
use crate::pairs;
use crate::torus::ConstantConnection;
use crate::twist::{TwistSignature, TwistedSpinor};
use crate::C64;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// `{ "n": …, "re": […], "im": […] }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpinorJson {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&Spinor> for SpinorJson {
    fn from(s: &Spinor) -> Self {
        Self {
            n: s.n(),
            re: s.coords().iter().map(|c| c.re).collect(),
            im: s.coords().iter().map(|c| c.im).collect(),
        }
    }
}

impl SpinorJson {
    pub fn into_spinor(self) -> Result<Spinor> {
        if self.re.len() != self.im.len() {
            return Err(Error::DimensionMismatch { expected: self.re.len(), found: self.im.len() });
        }
        let coords = self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect();
        Spinor::from_coords(self.n, coords)
    }
}

/// `{ "n": …, "r": …, "m": …, "re": […], "im": […] }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TwistedSpinorJson {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&TwistedSpinor> for TwistedSpinorJson {
    fn from(s: &TwistedSpinor) -> Self {
        let sig = s.sig();
        Self {
            n: sig.n,
            r: sig.r,
            m: sig.m,
            re: s.coords().iter().map(|c| c.re).collect(),
            im: s.coords().iter().map(|c| c.im).collect(),
        }
    }
}

impl TwistedSpinorJson {
    pub fn into_twisted(self, cap: u128) -> Result<TwistedSpinor> {
        let sig = TwistSignature::with_cap(self.n, self.r, self.m, cap)?;
        if self.re.len() != self.im.len() {
            return Err(Error::DimensionMismatch { expected: self.re.len(), found: self.im.len() });
        }
        let coords = self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect();
        TwistedSpinor::from_coords(sig, coords)
    }
}

/// One antisymmetric matrix attached to a twist plane k < l.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairMatrixJson {
    pub k: usize,
    pub l: usize,
    pub matrix: Vec<Vec<f64>>,
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn rows_to_matrix(rows: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rows.first().map_or(rows.len(), |r| r.len()),
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Assemble pair-indexed matrices into lexicographic order, checking that
/// every plane k < l appears exactly once.
fn collect_pairs(r: usize, n: usize, entries: &[PairMatrixJson]) -> Result<Vec<DMatrix<f64>>> {
    let count = pairs::pair_count(r);
    if entries.len() != count {
        return Err(Error::DimensionMismatch { expected: count, found: entries.len() });
    }
    let mut mats: Vec<Option<DMatrix<f64>>> = vec![None; count];
    for e in entries {
        if e.k >= e.l || e.l >= r {
            return Err(Error::InvalidInput(format!("pair ({}, {}) out of range for r = {r}", e.k, e.l)));
        }
        let idx = pairs::pair_index(r, e.k, e.l);
        if mats[idx].is_some() {
            return Err(Error::InvalidInput(format!("duplicate pair ({}, {})", e.k, e.l)));
        }
        mats[idx] = Some(rows_to_matrix(&e.matrix, n)?);
    }
    Ok(mats.into_iter().map(|m| m.expect("all pairs present by counting")).collect())
}

/// `{ "n": …, "r": …, "pairs": [ { "k": …, "l": …, "matrix": [[…]] } ] }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TwoFormPacketJson {
    pub n: usize,
    pub r: usize,
    pub pairs: Vec<PairMatrixJson>,
}

impl From<&TwoFormPacket> for TwoFormPacketJson {
    fn from(p: &TwoFormPacket) -> Self {
        let sig = p.sig();
        let pairs = pairs::pairs(sig.r)
            .zip(p.matrices())
            .map(|((k, l), m)| PairMatrixJson { k, l, matrix: matrix_to_rows(m) })
            .collect();
        Self { n: sig.n, r: sig.r, pairs }
    }
}

impl TwoFormPacketJson {
    pub fn into_packet(self, m: usize, cap: u128) -> Result<TwoFormPacket> {
        let sig = TwistSignature::with_cap(self.n, self.r, m, cap)?;
        let mats = collect_pairs(self.r, self.n, &self.pairs)?;
        TwoFormPacket::from_matrices(sig, mats)
    }
}

/// `{ "n": …, "r": …, "m": …, "riemann_operator": [[…]], "aux_curvature": […] }`
///
/// `riemann_operator` is the symmetric C(n,2)×C(n,2) matrix on Λ² in the
/// lexicographic pair basis; `aux_curvature` carries one antisymmetric n×n
/// matrix per twist plane.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurvatureJson {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub riemann_operator: Vec<Vec<f64>>,
    pub aux_curvature: Vec<PairMatrixJson>,
}

impl CurvatureJson {
    pub fn new(omega: &AlgebraicCurvature, theta: &AuxCurvature) -> Self {
        let sig = theta.sig();
        let count = pairs::pair_count(omega.n());
        let op = omega.operator();
        let riemann_operator =
            (0..count).map(|i| (0..count).map(|j| op[(i, j)]).collect()).collect();
        let aux_curvature = pairs::pairs(sig.r)
            .zip(theta.matrices())
            .map(|((k, l), m)| PairMatrixJson { k, l, matrix: matrix_to_rows(m) })
            .collect();
        Self { n: sig.n, r: sig.r, m: sig.m, riemann_operator, aux_curvature }
    }

    pub fn into_parts(self, cap: u128) -> Result<(AlgebraicCurvature, AuxCurvature)> {
        let sig = TwistSignature::with_cap(self.n, self.r, self.m, cap)?;
        let count = pairs::pair_count(self.n);
        if self.riemann_operator.len() != count
            || self.riemann_operator.iter().any(|row| row.len() != count)
        {
            return Err(Error::DimensionMismatch {
                expected: count,
                found: self.riemann_operator.len(),
            });
        }
        let op = DMatrix::from_fn(count, count, |i, j| self.riemann_operator[i][j]);
        let omega = AlgebraicCurvature::from_operator(self.n, op)?;
        let mats = collect_pairs(self.r, self.n, &self.aux_curvature)?;
        let theta = AuxCurvature::from_matrices(sig, mats)?;
        Ok((omega, theta))
    }
}

/// `{ "n": …, "r": …, "m": …, "theta": [ r×r per direction ], "mode_radius": K }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TorusJson {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub theta: Vec<Vec<Vec<f64>>>,
    pub mode_radius: i64,
}

impl TorusJson {
    pub fn new(conn: &ConstantConnection, mode_radius: i64) -> Self {
        let sig = conn.sig();
        Self {
            n: sig.n,
            r: sig.r,
            m: sig.m,
            theta: conn.matrices().iter().map(matrix_to_rows).collect(),
            mode_radius,
        }
    }

    pub fn into_connection(self, cap: u128) -> Result<(ConstantConnection, i64)> {
        let sig = TwistSignature::with_cap(self.n, self.r, self.m, cap)?;
        if self.theta.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: self.theta.len() });
        }
        let mats = self
            .theta
            .iter()
            .map(|rows| rows_to_matrix(rows, self.r))
            .collect::<Result<Vec<_>>>()?;
        Ok((ConstantConnection::new(sig, mats)?, self.mode_radius))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn twisted_spinor_roundtrip_exact() {
        let sig = TwistSignature::new(3, 3, 2).unwrap();
        let mut r = rng::derived(3, "json-roundtrip", 0);
        let phi = TwistedSpinor::from_coords(sig, rng::complex_vector(&mut r, sig.dim())).unwrap();
        let json = TwistedSpinorJson::from(&phi);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: TwistedSpinorJson = serde_json::from_str(&text).unwrap();
        let back = parsed.into_twisted(crate::twist::DEFAULT_DIM_CAP).unwrap();
        assert_eq!(phi, back);
    }

    #[test]
    fn curvature_roundtrip_and_validation() {
        let sig = TwistSignature::new(4, 3, 1).unwrap();
        let omega = AlgebraicCurvature::random(4, 9);
        let theta = AuxCurvature::random(sig, 10);
        let json = CurvatureJson::new(&omega, &theta);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: CurvatureJson = serde_json::from_str(&text).unwrap();
        let (o2, t2) = parsed.into_parts(crate::twist::DEFAULT_DIM_CAP).unwrap();
        assert_eq!(omega.operator(), o2.operator());
        assert_eq!(theta.matrices(), t2.matrices());

        // r < 2 is rejected at parse time.
        let mut bad = json.clone();
        bad.r = 1;
        bad.aux_curvature.clear();
        assert!(bad.into_parts(crate::twist::DEFAULT_DIM_CAP).is_err());

        // Duplicate pair is rejected.
        let mut dup = json.clone();
        dup.aux_curvature[1] = dup.aux_curvature[0].clone();
        assert!(dup.into_parts(crate::twist::DEFAULT_DIM_CAP).is_err());
    }

    #[test]
    fn torus_roundtrip() {
        let sig = TwistSignature::new(2, 3, 1).unwrap();
        let conn = ConstantConnection::random(sig, 77);
        let json = TorusJson::new(&conn, 2);
        let text = serde_json::to_string_pretty(&json).unwrap();
        let parsed: TorusJson = serde_json::from_str(&text).unwrap();
        let (back, radius) = parsed.into_connection(crate::twist::DEFAULT_DIM_CAP).unwrap();
        assert_eq!(conn, back);
        assert_eq!(radius, 2);
    }

    #[test]
    fn spinor_roundtrip_and_mismatch() {
        let s = Spinor::basis(4, &[1, -1]).unwrap();
        let json = SpinorJson::from(&s);
        assert_eq!(json.re.len(), 4);
        let back = json.into_spinor().unwrap();
        assert_eq!(s, back);

        let bad = SpinorJson { n: 4, re: vec![0.0; 4], im: vec![0.0; 3] };
        assert!(bad.into_spinor().is_err());
    }
}
