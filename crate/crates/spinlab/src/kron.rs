//! Matrix-free Kronecker-structured operators on (ℂ²)^{⊗B}.
//!
//! A vector of length 2^B is indexed by B bits; tensor factors map to bit
//! positions with the *last* factor on bit 0, so a 2×2 block acting on one
//! factor touches stride-2^bit pairs of entries. A [`KroneckerOperator`] is a
//! scalar together with a list of (bit, 2×2 block) actions; identity factors
//! are simply omitted. Application is O(#blocks · 2^B) with no materialized
//! matrices.

use crate::C64;

pub type Block = [[C64; 2]; 2];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Apply a 2×2 block at the given bit position, in place.
///
/// `v.len()` must be a multiple of 2^{bit+1}; everything above the bit is
/// treated as an identity factor, which is what makes the same kernel serve
/// plain and twisted spinor spaces.
pub fn apply_block(v: &mut [C64], bit: usize, m: &Block) {
    let stride = 1usize << bit;
    debug_assert_eq!(v.len() % (2 * stride), 0);
    let mut base = 0;
    while base < v.len() {
        for off in base..base + stride {
            let x0 = v[off];
            let x1 = v[off + stride];
            v[off] = m[0][0] * x0 + m[0][1] * x1;
            v[off + stride] = m[1][0] * x0 + m[1][1] * x1;
        }
        base += 2 * stride;
    }
}

/// A scalar multiple of a tensor product of 2×2 blocks.
#[derive(Clone, Debug)]
pub struct KroneckerOperator {
    dim_bits: usize,
    scalar: C64,
    blocks: Vec<(usize, Block)>,
}

impl KroneckerOperator {
    pub fn new(dim_bits: usize, scalar: C64, blocks: Vec<(usize, Block)>) -> Self {
        debug_assert!(blocks.iter().all(|(b, _)| *b < dim_bits || dim_bits == 0));
        Self { dim_bits, scalar, blocks }
    }

    pub fn identity(dim_bits: usize) -> Self {
        Self::new(dim_bits, ONE, Vec::new())
    }

    pub fn dim_bits(&self) -> usize {
        self.dim_bits
    }

    pub fn dim(&self) -> usize {
        1usize << self.dim_bits
    }

    pub fn scalar(&self) -> C64 {
        self.scalar
    }

    pub fn blocks(&self) -> &[(usize, Block)] {
        &self.blocks
    }

    /// Apply to a vector living in this operator's own space.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim());
        let mut out = v.to_vec();
        self.apply_in_place_offset(&mut out, 0);
        out
    }

    /// Apply in place with all bit positions shifted up by `offset`.
    ///
    /// Used to act on one tensor slot of a larger space: the caller's vector
    /// length must be a multiple of 2^{offset + dim_bits}.
    pub fn apply_in_place_offset(&self, v: &mut [C64], offset: usize) {
        for (bit, m) in &self.blocks {
            apply_block(v, bit + offset, m);
        }
        if self.scalar != ONE {
            for x in v.iter_mut() {
                *x *= self.scalar;
            }
        }
    }

    /// Dense matrix of the operator (column by column), for small spaces.
    pub fn materialize(&self) -> nalgebra::DMatrix<C64> {
        let d = self.dim();
        let mut m = nalgebra::DMatrix::zeros(d, d);
        let mut col = vec![ZERO; d];
        for j in 0..d {
            col.fill(ZERO);
            col[j] = ONE;
            self.apply_in_place_offset(&mut col, 0);
            for i in 0..d {
                m[(i, j)] = col[i];
            }
        }
        m
    }
}

/// ⟨v, w⟩, linear in the first slot and conjugate-linear in the second.
pub fn inner(v: &[C64], w: &[C64]) -> C64 {
    debug_assert_eq!(v.len(), w.len());
    v.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    norm_sqr(v).sqrt()
}

pub fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scale(v: &mut [C64], a: C64) {
    for x in v.iter_mut() {
        *x *= a;
    }
}
