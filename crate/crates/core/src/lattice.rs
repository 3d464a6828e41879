//! Integer-lattice combinatorics behind the discrete Grassmannian `G^n_d`.
//!
//! Directions live in `Q = Z^n \ {0}` and a d-plane is spanned by an
//! unordered tuple of `d` linearly independent directions. Everything in
//! this module is exact integer arithmetic: rank tests are fraction-free
//! and the orthogonal-tuple search reduces the frequency vector by column
//! operations, so `k·v = 0` holds exactly for every vector returned.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

/// Errors from direction and tuple construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("direction must be a nonzero integer vector")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("plane dimension d={d} must satisfy 1 <= d < n={n}")]
    InvalidPlaneDimension { d: usize, n: usize },
    #[error("tuple vectors are linearly dependent")]
    DependentVectors,
    #[error("direction tuple must not be empty")]
    EmptyTuple,
}

/// A nonzero integer vector `v ∈ Q = Z^n \ {0}` spanning a periodic geodesic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(Vec<i64>);

impl Direction {
    pub fn new(entries: Vec<i64>) -> Result<Self, LatticeError> {
        if entries.iter().all(|&e| e == 0) {
            return Err(LatticeError::ZeroDirection);
        }
        Ok(Direction(entries))
    }

    /// Sign-normalized copy: first nonzero entry positive. Quotients out
    /// the `v ~ -v` redundancy of the geodesic parametrization.
    pub fn sign_normalized(&self) -> Self {
        let first = self.0.iter().find(|&&e| e != 0).copied().unwrap_or(0);
        if first < 0 {
            Direction(self.0.iter().map(|&e| -e).collect())
        } else {
            self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn dot(&self, k: &[i64]) -> i64 {
        self.0.iter().zip(k).map(|(a, b)| a * b).sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&e| e as f64).collect()
    }

    pub fn scaled(&self, factor: i64) -> Result<Self, LatticeError> {
        if factor == 0 {
            return Err(LatticeError::ZeroDirection);
        }
        Ok(Direction(self.0.iter().map(|&e| e * factor).collect()))
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction({:?})", self.0)
    }
}

/// An unordered tuple `A ∈ G^n_d` of `d` linearly independent directions.
///
/// Canonical storage: each vector sign-normalized, vectors sorted
/// lexicographically. Construction rejects dependent (hence also
/// duplicate) vectors, so every value of this type is a genuine element
/// of the discrete Grassmannian.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectionTuple(Vec<Direction>);

impl DirectionTuple {
    pub fn new(vectors: Vec<Direction>) -> Result<Self, LatticeError> {
        if vectors.is_empty() {
            return Err(LatticeError::EmptyTuple);
        }
        let n = vectors[0].dim();
        for v in &vectors {
            if v.dim() != n {
                return Err(LatticeError::DimensionMismatch {
                    expected: n,
                    got: v.dim(),
                });
            }
        }
        let d = vectors.len();
        if d >= n {
            return Err(LatticeError::InvalidPlaneDimension { d, n });
        }
        if !linearly_independent(&vectors)? {
            return Err(LatticeError::DependentVectors);
        }
        let mut vectors: Vec<Direction> = vectors.iter().map(Direction::sign_normalized).collect();
        vectors.sort();
        Ok(DirectionTuple(vectors))
    }

    /// Convenience constructor from raw integer rows.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        let vectors = rows
            .iter()
            .map(|r| Direction::new(r.to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(vectors)
    }

    pub fn vectors(&self) -> &[Direction] {
        &self.0
    }

    pub fn plane_dim(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        self.0[0].dim()
    }

    /// True iff `k·v = 0` for every vector in the tuple.
    pub fn orthogonal_to(&self, k: &[i64]) -> bool {
        self.0.iter().all(|v| v.dot(k) == 0)
    }
}

impl fmt::Debug for DirectionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = self.0.iter().map(|v| v.entries()).collect();
        write!(f, "DirectionTuple({:?})", rows)
    }
}

/// True iff the gcd of the entries of `v` is 1.
pub fn is_primitive(v: &Direction) -> bool {
    let g = v.entries().iter().fold(0i64, |acc, &e| acc.gcd(&e));
    g == 1
}

/// Exact integer rank test: true iff the vectors are linearly independent
/// over the rationals. Fraction-free elimination in `i128`; no floating
/// point is involved.
pub fn linearly_independent(vectors: &[Direction]) -> Result<bool, LatticeError> {
    if vectors.is_empty() {
        return Ok(true);
    }
    let n = vectors[0].dim();
    for v in vectors {
        if v.dim() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                got: v.dim(),
            });
        }
    }
    let rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.entries().iter().map(|&e| e as i128).collect())
        .collect();
    Ok(integer_rank(rows) == vectors.len())
}

/// Rank of an integer matrix by fraction-free Gaussian elimination.
pub(crate) fn integer_rank(mut rows: Vec<Vec<i128>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows.len() && col < ncols {
        // Smallest nonzero pivot keeps intermediate entries bounded.
        let pivot = (rank..rows.len())
            .filter(|&r| rows[r][col] != 0)
            .min_by_key(|&r| rows[r][col].unsigned_abs());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let a = pivot_row[col];
        for row in tail.iter_mut() {
            let b = row[col];
            if b != 0 {
                let g = a.gcd(&b);
                let (fa, fb) = (a / g, b / g);
                for c in col..ncols {
                    row[c] = fa * row[c] - fb * pivot_row[c];
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// All direction tuples in `G^n_d` whose vectors have sup-norm at most
/// `max_norm`, each emitted exactly once in canonical order.
///
/// `max_norm = 0` yields the empty list so degenerate inputs compose
/// with downstream filters.
pub fn enumerate_tuples(
    n: usize,
    d: usize,
    max_norm: i64,
) -> Result<Vec<DirectionTuple>, LatticeError> {
    if n < 2 || d == 0 || d >= n {
        return Err(LatticeError::InvalidPlaneDimension { d, n });
    }
    if max_norm <= 0 {
        return Ok(Vec::new());
    }
    let directions = enumerate_directions(n, max_norm);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    fn recurse(
        directions: &[Direction],
        d: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<DirectionTuple>,
    ) {
        if chosen.len() == d {
            let vectors: Vec<Direction> =
                chosen.iter().map(|&i| directions[i].clone()).collect();
            if let Ok(tuple) = DirectionTuple::new(vectors) {
                out.push(tuple);
            }
            return;
        }
        for i in start..directions.len() {
            chosen.push(i);
            recurse(directions, d, i + 1, chosen, out);
            chosen.pop();
        }
    }
    recurse(&directions, d, 0, &mut chosen, &mut out);
    Ok(out)
}

/// All sign-normalized nonzero directions with sup-norm at most `max_norm`,
/// in canonical (lexicographic) order.
pub fn enumerate_directions(n: usize, max_norm: i64) -> Vec<Direction> {
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    fn recurse(n: usize, max_norm: i64, axis: usize, current: &mut Vec<i64>, out: &mut Vec<Direction>) {
        if axis == n {
            if let Ok(v) = Direction::new(current.clone()) {
                out.push(v);
            }
            return;
        }
        for e in -max_norm..=max_norm {
            current[axis] = e;
            recurse(n, max_norm, axis + 1, current, out);
        }
        current[axis] = 0;
    }
    recurse(n, max_norm, 0, &mut current, &mut out);
    let mut out: Vec<Direction> = out.into_iter().map(|v| v.sign_normalized()).collect();
    out.sort();
    out.dedup();
    out
}

/// A tuple `A ∈ G^n_d` with `k·v = 0` for every `v ∈ A`.
///
/// For `k = 0` the first `d` standard basis vectors are returned. For
/// `k ≠ 0` the kernel lattice `{v ∈ Z^n : k·v = 0}` has rank `n-1`; a
/// basis is obtained by reducing `k` with exact integer column
/// operations, and the first `d` basis vectors form the tuple. The
/// output is deterministic and sign-normalized.
pub fn orthogonal_tuple(k: &[i64], d: usize) -> Result<DirectionTuple, LatticeError> {
    let n = k.len();
    if n < 2 || d == 0 || d >= n {
        return Err(LatticeError::InvalidPlaneDimension { d, n });
    }
    if k.iter().all(|&e| e == 0) {
        let basis = (0..d)
            .map(|j| {
                let mut e = vec![0i64; n];
                e[j] = 1;
                Direction::new(e).expect("standard basis vector is nonzero")
            })
            .collect();
        return DirectionTuple::new(basis);
    }
    let kernel = kernel_basis(k);
    let vectors = kernel.into_iter().take(d).collect();
    DirectionTuple::new(vectors)
}

/// Integer basis of the rank-(n-1) lattice `{v ∈ Z^n : k·v = 0}` for
/// nonzero `k`.
///
/// Column-reduces `k` to a single nonzero entry while mirroring the
/// operations on the identity matrix; the columns not carrying the final
/// nonzero entry then span the kernel lattice exactly.
pub fn kernel_basis(k: &[i64]) -> Vec<Direction> {
    let n = k.len();
    debug_assert!(k.iter().any(|&e| e != 0));
    let mut w: Vec<i128> = k.iter().map(|&e| e as i128).collect();
    // Columns of the accumulated unimodular transform.
    let mut cols: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| i128::from(i == j)).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&j| w[j] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let &pivot = nonzero
            .iter()
            .min_by_key(|&&j| w[j].unsigned_abs())
            .expect("nonzero set is not empty");
        for &j in &nonzero {
            if j == pivot {
                continue;
            }
            let q = w[j] / w[pivot];
            if q != 0 {
                w[j] -= q * w[pivot];
                for i in 0..n {
                    cols[j][i] -= q * cols[pivot][i];
                }
            }
        }
        // Division rounds toward zero, so each pass strictly shrinks
        // every non-pivot entry modulo the pivot; termination follows
        // from the Euclidean algorithm.
    }
    let carrier = (0..n).position(|j| w[j] != 0).expect("k is nonzero");
    (0..n)
        .filter(|&j| j != carrier)
        .map(|j| {
            let entries: Vec<i64> = cols[j]
                .iter()
                .map(|&e| i64::try_from(e).expect("kernel basis entry fits in i64"))
                .collect();
            Direction::new(entries)
                .expect("kernel basis column of a unimodular matrix is nonzero")
                .sign_normalized()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(entries: &[i64]) -> Direction {
        Direction::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn zero_direction_is_rejected() {
        assert_eq!(Direction::new(vec![0, 0]), Err(LatticeError::ZeroDirection));
    }

    #[test]
    fn primitivity_examples() {
        assert!(is_primitive(&dir(&[1, 0])));
        assert!(!is_primitive(&dir(&[2, 4])));
        // gcd(3, 5, 7) = 1 by the Euclidean algorithm.
        assert!(is_primitive(&dir(&[3, 5, 7])));
    }

    #[test]
    fn primitivity_is_invariant_under_sign_flip_and_permutation() {
        let cases: &[&[i64]] = &[&[2, -4, 6], &[1, -3, 9], &[5, 10, 0]];
        for entries in cases {
            let base = is_primitive(&dir(entries));
            let flipped: Vec<i64> = entries.iter().map(|&e| -e).collect();
            assert_eq!(is_primitive(&dir(&flipped)), base);
            let mut permuted = entries.to_vec();
            permuted.rotate_left(1);
            assert_eq!(is_primitive(&dir(&permuted)), base);
        }
    }

    #[test]
    fn independence_examples() {
        assert!(linearly_independent(&[dir(&[1, 0]), dir(&[0, 1])]).unwrap());
        assert!(!linearly_independent(&[dir(&[1, 2]), dir(&[2, 4])]).unwrap());
        // Third row equals first minus second: row reduction kills it.
        assert!(
            !linearly_independent(&[dir(&[1, 1, 0]), dir(&[0, 1, 1]), dir(&[1, 0, -1])]).unwrap()
        );
    }

    #[test]
    fn independence_dimension_mismatch() {
        let err = linearly_independent(&[dir(&[1, 0]), dir(&[0, 1, 0])]).unwrap_err();
        assert_eq!(
            err,
            LatticeError::DimensionMismatch {
                expected: 2,
                got: 3
            }
        );
    }

    #[test]
    fn tuple_rejects_duplicates_and_dependence() {
        assert_eq!(
            DirectionTuple::from_rows(&[&[1, 2, 0], &[-1, -2, 0]]),
            Err(LatticeError::DependentVectors)
        );
        assert_eq!(
            DirectionTuple::from_rows(&[&[1, 0]]).map(|t| t.plane_dim()),
            Ok(1)
        );
        assert_eq!(
            DirectionTuple::from_rows(&[&[1, 0], &[0, 1]]),
            Err(LatticeError::InvalidPlaneDimension { d: 2, n: 2 })
        );
    }

    #[test]
    fn tuple_canonical_order_ignores_input_order_and_signs() {
        let a = DirectionTuple::from_rows(&[&[0, 1, -1], &[-1, 0, 0]]).unwrap();
        let b = DirectionTuple::from_rows(&[&[1, 0, 0], &[0, -1, 1]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn enumerate_n2_d1_norm1() {
        // All of {-1,0,1}^2 minus the origin, quotiented by sign.
        let tuples = enumerate_tuples(2, 1, 1).unwrap();
        let expected = vec![
            DirectionTuple::from_rows(&[&[0, 1]]).unwrap(),
            DirectionTuple::from_rows(&[&[1, -1]]).unwrap(),
            DirectionTuple::from_rows(&[&[1, 0]]).unwrap(),
            DirectionTuple::from_rows(&[&[1, 1]]).unwrap(),
        ];
        assert_eq!(tuples, expected);
    }

    #[test]
    fn enumerate_norm_zero_is_empty() {
        assert!(enumerate_tuples(2, 1, 0).unwrap().is_empty());
    }

    #[test]
    fn enumerate_n3_d2_all_independent_and_unique() {
        let tuples = enumerate_tuples(3, 2, 1).unwrap();
        assert!(!tuples.is_empty());
        for t in &tuples {
            assert!(linearly_independent(t.vectors()).unwrap());
        }
        let mut sorted = tuples.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), tuples.len(), "no tuple may repeat");
    }

    #[test]
    fn enumerate_rejects_bad_plane_dims() {
        assert!(enumerate_tuples(2, 2, 1).is_err());
        assert!(enumerate_tuples(3, 0, 1).is_err());
    }

    #[test]
    fn orthogonal_tuple_zero_frequency() {
        let t = orthogonal_tuple(&[0, 0], 1).unwrap();
        assert_eq!(t, DirectionTuple::from_rows(&[&[1, 0]]).unwrap());
        let t = orthogonal_tuple(&[0, 0, 0], 2).unwrap();
        assert_eq!(t, DirectionTuple::from_rows(&[&[1, 0, 0], &[0, 1, 0]]).unwrap());
    }

    #[test]
    fn orthogonal_tuple_matches_bruteforce_smallest() {
        // Brute-force search over sup-norm <= 2 finds (2, -1) as the
        // canonical direction orthogonal to (1, 2).
        let t = orthogonal_tuple(&[1, 2], 1).unwrap();
        assert_eq!(t, DirectionTuple::from_rows(&[&[2, -1]]).unwrap());
    }

    #[test]
    fn orthogonal_tuple_is_orthogonal_and_independent() {
        let freqs: Vec<Vec<i64>> = vec![
            vec![1, 1, 1],
            vec![2, -3, 5],
            vec![0, 4, 0],
            vec![7, 7, -2],
            vec![-6, 10, 15],
        ];
        for k in &freqs {
            for d in 1..3 {
                let t = orthogonal_tuple(k, d).unwrap();
                assert_eq!(t.plane_dim(), d);
                assert!(t.orthogonal_to(k), "tuple {:?} not orthogonal to {:?}", t, k);
                assert!(linearly_independent(t.vectors()).unwrap());
            }
        }
    }

    #[test]
    fn orthogonal_tuple_rejects_d_out_of_range() {
        assert!(orthogonal_tuple(&[1, 2], 2).is_err());
        assert!(orthogonal_tuple(&[1, 2, 3], 3).is_err());
    }

    #[test]
    fn kernel_basis_spans_full_kernel() {
        // The kernel has rank n-1, so together with k itself the basis
        // must span Q^n.
        let k = vec![4i64, 6, 9];
        let mut rows = kernel_basis(&k);
        rows.push(Direction::new(k.clone()).unwrap());
        assert!(linearly_independent(&rows).unwrap());
        for v in kernel_basis(&k) {
            assert_eq!(v.dot(&k), 0);
        }
    }

    #[test]
    fn direction_scaling() {
        let v = dir(&[1, -2]);
        assert_eq!(v.scaled(3).unwrap(), dir(&[3, -6]));
        assert!(v.scaled(0).is_err());
    }
}
