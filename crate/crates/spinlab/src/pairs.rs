//! Lexicographic indexing of strictly increasing index pairs (i, j), i < j.
//!
//! The pair basis of Λ²ℝⁿ is ordered (0,1), (0,2), …, (0,n−1), (1,2), … and
//! is used for spin algebra coefficients, curvature operators and 2-form
//! packets alike.

/// Number of pairs i < j in `0..n`.
pub fn pair_count(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Lexicographic index of the pair (i, j) with i < j.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Iterator over all pairs i < j in `0..n`, in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        for n in 1..10 {
            let listed: Vec<_> = pairs(n).collect();
            assert_eq!(listed.len(), pair_count(n));
            for (idx, &(i, j)) in listed.iter().enumerate() {
                assert_eq!(pair_index(n, i, j), idx);
            }
        }
    }
}
