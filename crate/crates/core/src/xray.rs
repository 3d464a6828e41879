//! The d-plane Radon transform on the torus.
//!
//! Integrating a character `e_k` over the periodic d-plane spanned by a
//! tuple `A` either reproduces the character (when `k·v = 0` for every
//! `v ∈ A`) or kills it, so on the Fourier side the transform copies
//! `f̂(k)` onto every orthogonal tuple and writes zero elsewhere. The
//! forward operator, inversion, range check and stability norm below are
//! all direct expressions of that identity; the quadrature oracle
//! integrates the defining formula instead and serves as the independent
//! cross-check.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{DirectionTuple, LatticeError};
use crate::spectral::TrigPolynomial;

/// Default absolute tolerance on coefficients for range validation; two
/// orders above accumulated roundoff at desk-scale bands.
pub const DEFAULT_RANGE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum XrayError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("dimension mismatch: function has n={function}, tuple has n={tuple}")]
    DimensionMismatch { function: usize, tuple: usize },
    #[error("plane dimensions disagree: data has d={expected}, tuple has d={got}")]
    PlaneDimMismatch { expected: usize, got: usize },
    #[error("band {band} of entry exceeds data band {max}")]
    BandExceeded { band: i64, max: i64 },
    #[error("incomplete data: no stored tuple is orthogonal to k={k:?}")]
    IncompleteData { k: Vec<i64> },
    #[error("tuple set must not be empty")]
    EmptyTupleSet,
    #[error("quadrature needs at least one node per axis")]
    NoQuadratureNodes,
}

/// Radon data: the transform `x ↦ R_d f(x, A)` for each stored tuple `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadonData {
    n: usize,
    d: usize,
    band: i64,
    entries: BTreeMap<DirectionTuple, TrigPolynomial>,
}

impl RadonData {
    pub fn new(n: usize, d: usize, band: i64) -> Self {
        RadonData {
            n,
            d,
            band,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn plane_dim(&self) -> usize {
        self.d
    }

    pub fn band(&self) -> i64 {
        self.band
    }

    pub fn insert(&mut self, tuple: DirectionTuple, poly: TrigPolynomial) -> Result<(), XrayError> {
        if tuple.dim() != self.n {
            return Err(XrayError::DimensionMismatch {
                function: self.n,
                tuple: tuple.dim(),
            });
        }
        if tuple.plane_dim() != self.d {
            return Err(XrayError::PlaneDimMismatch {
                expected: self.d,
                got: tuple.plane_dim(),
            });
        }
        if poly.dim() != self.n {
            return Err(XrayError::DimensionMismatch {
                function: self.n,
                tuple: poly.dim(),
            });
        }
        if poly.band() > self.band {
            return Err(XrayError::BandExceeded {
                band: poly.band(),
                max: self.band,
            });
        }
        self.entries.insert(tuple, poly);
        Ok(())
    }

    pub fn get(&self, tuple: &DirectionTuple) -> Option<&TrigPolynomial> {
        self.entries.get(tuple)
    }

    pub fn get_mut(&mut self, tuple: &DirectionTuple) -> Option<&mut TrigPolynomial> {
        self.entries.get_mut(tuple)
    }

    /// Entries in canonical tuple order.
    pub fn entries(&self) -> impl Iterator<Item = (&DirectionTuple, &TrigPolynomial)> {
        self.entries.iter()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &DirectionTuple> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Spectral forward operator: keep exactly the coefficients with
/// `k·v = 0` for every `v ∈ A`. The test is exact integer arithmetic.
pub fn forward_spectral(
    f: &TrigPolynomial,
    tuple: &DirectionTuple,
) -> Result<TrigPolynomial, XrayError> {
    if tuple.dim() != f.dim() {
        return Err(XrayError::DimensionMismatch {
            function: f.dim(),
            tuple: tuple.dim(),
        });
    }
    let mut out = TrigPolynomial::zero(f.dim(), f.band());
    for (k, c) in f.coeffs() {
        if tuple.orthogonal_to(k) {
            out.set_coeff(k, c).expect("filtered frequency stays in band");
        }
    }
    Ok(out)
}

/// Quadrature oracle: composite rectangle rule for
/// `∫_{[0,1]^d} f(x + t_1 v_1 + ... + t_d v_d) dt` with `nodes^d` points.
///
/// Exact to roundoff once `nodes` exceeds the largest frequency of the
/// integrand along any axis, i.e. `nodes > band * max|v|_∞ * n`.
pub fn forward_quadrature(
    f: &TrigPolynomial,
    x: &[f64],
    tuple: &DirectionTuple,
    nodes: usize,
) -> Result<Complex64, XrayError> {
    if tuple.dim() != f.dim() {
        return Err(XrayError::DimensionMismatch {
            function: f.dim(),
            tuple: tuple.dim(),
        });
    }
    if nodes == 0 {
        return Err(XrayError::NoQuadratureNodes);
    }
    let d = tuple.plane_dim();
    let total = nodes.pow(d as u32);
    let mut acc = Complex64::ZERO;
    let mut point = vec![0.0f64; f.dim()];
    for linear in 0..total {
        let mut rem = linear;
        point.copy_from_slice(x);
        for v in tuple.vectors() {
            let t = (rem % nodes) as f64 / nodes as f64;
            rem /= nodes;
            for (pi, &vi) in point.iter_mut().zip(v.entries()) {
                *pi += t * vi as f64;
            }
        }
        acc += f.evaluate(&point);
    }
    Ok(acc / total as f64)
}

/// Apply [`forward_spectral`] for every tuple in the list. Tuples are
/// processed in parallel and merged in canonical order.
pub fn forward_all(
    f: &TrigPolynomial,
    tuples: &[DirectionTuple],
) -> Result<RadonData, XrayError> {
    if tuples.is_empty() {
        return Err(XrayError::EmptyTupleSet);
    }
    let d = tuples[0].plane_dim();
    let computed: Vec<(DirectionTuple, TrigPolynomial)> = tuples
        .par_iter()
        .map(|tuple| forward_spectral(f, tuple).map(|poly| (tuple.clone(), poly)))
        .collect::<Result<_, _>>()?;
    let mut data = RadonData::new(f.dim(), d, f.band());
    for (tuple, poly) in computed {
        data.insert(tuple, poly)?;
    }
    Ok(data)
}

/// Fourier-slice inversion: for each `k` in the band, read `f̂(k)` from
/// the first stored tuple orthogonal to `k` (canonical tuple order).
///
/// Fails with [`XrayError::IncompleteData`] naming the first `k` that no
/// stored tuple covers.
pub fn invert(data: &RadonData, band: i64) -> Result<TrigPolynomial, XrayError> {
    let mut f = TrigPolynomial::zero(data.dim(), band);
    for k in crate::spectral::frequency_box(data.dim(), band) {
        let source = data
            .entries()
            .find(|(tuple, _)| tuple.orthogonal_to(&k))
            .ok_or_else(|| XrayError::IncompleteData { k: k.clone() })?;
        let value = source.1.coeff(&k);
        if value != Complex64::ZERO {
            f.set_coeff(&k, value).expect("enumerated frequency is in band");
        }
    }
    Ok(f)
}

/// One inconsistency found by [`validate_range`].
#[derive(Clone, Debug, PartialEq)]
pub enum RangeConflict {
    /// A coefficient survives at a frequency the tuple should kill.
    OffSlice {
        k: Vec<i64>,
        tuple: DirectionTuple,
        magnitude: f64,
    },
    /// Two orthogonal tuples disagree about `f̂(k)`.
    Disagreement {
        k: Vec<i64>,
        tuple_a: DirectionTuple,
        tuple_b: DirectionTuple,
        delta: f64,
    },
}

impl RangeConflict {
    pub fn frequency(&self) -> &[i64] {
        match self {
            RangeConflict::OffSlice { k, .. } | RangeConflict::Disagreement { k, .. } => k,
        }
    }

    pub fn involves(&self, tuple: &DirectionTuple) -> bool {
        match self {
            RangeConflict::OffSlice { tuple: t, .. } => t == tuple,
            RangeConflict::Disagreement { tuple_a, tuple_b, .. } => {
                tuple_a == tuple || tuple_b == tuple
            }
        }
    }
}

/// Outcome of [`validate_range`].
#[derive(Clone, Debug, PartialEq)]
pub struct RangeReport {
    pub consistent: bool,
    /// The function the data comes from, assembled from the common
    /// coefficient values; present iff consistent.
    pub witness: Option<TrigPolynomial>,
    pub conflicts: Vec<RangeConflict>,
}

/// Range characterization check. Data is in the range of the transform
/// iff every off-slice coefficient is zero (within `tol`) and all
/// orthogonal tuples agree about each `f̂(k)` (within `tol`).
pub fn validate_range(data: &RadonData, tol: f64) -> RangeReport {
    let mut conflicts = Vec::new();
    let mut keys: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (tuple, poly) in data.entries() {
        for (k, c) in poly.coeffs() {
            keys.insert(k.to_vec());
            if !tuple.orthogonal_to(k) && c.norm() > tol {
                conflicts.push(RangeConflict::OffSlice {
                    k: k.to_vec(),
                    tuple: tuple.clone(),
                    magnitude: c.norm(),
                });
            }
        }
    }
    for k in &keys {
        let holders: Vec<(&DirectionTuple, Complex64)> = data
            .entries()
            .filter(|(tuple, _)| tuple.orthogonal_to(k))
            .map(|(tuple, poly)| (tuple, poly.coeff(k)))
            .collect();
        for (i, (tuple_a, value_a)) in holders.iter().enumerate() {
            for (tuple_b, value_b) in holders.iter().skip(i + 1) {
                let delta = (value_a - value_b).norm();
                if delta > tol {
                    conflicts.push(RangeConflict::Disagreement {
                        k: k.clone(),
                        tuple_a: (*tuple_a).clone(),
                        tuple_b: (*tuple_b).clone(),
                        delta,
                    });
                }
            }
        }
    }
    let consistent = conflicts.is_empty();
    let witness = if consistent {
        let mut g = TrigPolynomial::zero(data.dim(), data.band());
        for k in &keys {
            if let Some((_, poly)) = data.entries().find(|(tuple, _)| tuple.orthogonal_to(k)) {
                let value = poly.coeff(k);
                if value != Complex64::ZERO {
                    g.set_coeff(k, value).expect("stored key is within the data band");
                }
            }
        }
        Some(g)
    } else {
        None
    };
    RangeReport {
        consistent,
        witness,
        conflicts,
    }
}

/// The Fourier-side data norm
/// `sqrt( Σ_k (1+|k|²)^s max_A |F̂(k,A)|² )`.
///
/// The max over the infinite Grassmannian is attained on any tuple
/// orthogonal to `k` (all other tuples contribute zero), so maxing over
/// the stored tuples reproduces the Sobolev norm of the underlying
/// function whenever the acquisition set covers each `k` in band.
pub fn stability_norm(data: &RadonData, s: f64) -> f64 {
    let mut keys: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (_, poly) in data.entries() {
        for (k, _) in poly.coeffs() {
            keys.insert(k.to_vec());
        }
    }
    let mut sum = 0.0;
    for k in &keys {
        let best: f64 = data
            .entries()
            .map(|(_, poly)| poly.coeff(k).norm_sqr())
            .fold(0.0, f64::max);
        let k2: f64 = k.iter().map(|&ki| (ki * ki) as f64).sum();
        sum += (1.0 + k2).powf(s) * best;
    }
    sum.sqrt()
}

/// The default acquisition set: one orthogonal tuple per frequency in
/// the band, de-duplicated, so [`invert`]'s precondition holds by
/// construction.
pub fn acquisition_tuples(n: usize, d: usize, band: i64) -> Result<Vec<DirectionTuple>, XrayError> {
    let mut set = BTreeSet::new();
    for k in crate::spectral::frequency_box(n, band) {
        set.insert(crate::lattice::orthogonal_tuple(&k, d)?);
    }
    Ok(set.into_iter().collect())
}
