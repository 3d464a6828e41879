//! Symmetric m-tensor fields on the torus and their X-ray transform.
//!
//! A symmetric tensor field doubles, frequency by frequency, as a
//! homogeneous degree-m polynomial in the direction variable:
//! `f(x,ξ) = Σ f_{i_1…i_m}(x) ξ^{i_1} ⋯ ξ^{i_m}`. The X-ray transform
//! along `v` keeps the coefficients with `k·v = 0` and evaluates the
//! frequency polynomial at `v`, so the transform vanishes exactly on
//! symmetrized gradients. Solenoidal decomposition inverts that: each
//! `f̂(k,·)` vanishing on the hyperplane `k·v = 0` factors as
//! `(k·v)·ĝ(k,·)`, and `h = f̂/(2πi k·v)` is the potential with
//! `σ∇h = f`.
//!
//! Tensor components are stored under sorted multi-indices only;
//! conversions between components and polynomial monomials carry the
//! multinomial multiplicity `m!/α!` and are centralized in
//! [`exponents_from_index`], [`index_from_exponents`] and
//! [`multinomial`] so the bookkeeping cannot drift between call sites.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::Direction;
use crate::spectral::{make_phantom, PhantomKind, SpectralError, TrigPolynomial};

/// Default relative tolerance for the hyperplane-vanishing residual.
pub const DEFAULT_DIVIDE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("frequency must be nonzero for this operation")]
    ZeroFrequency,
    #[error("tensor order must be at least 1")]
    ZeroOrder,
    #[error("multi-index {index:?} is invalid for dimension {n} and order {order}")]
    BadIndex {
        index: Vec<usize>,
        n: usize,
        order: usize,
    },
    #[error("multi-index lengths are inconsistent: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial does not vanish on the hyperplane k·v = 0 (relative residual {residual:e})")]
    NotInKernel { residual: f64 },
    #[error("field is not solenoidally exact at k = {k:?} (relative residual {residual:e})")]
    NotSolenoidal { k: Vec<i64>, residual: f64 },
}

/// Exponent vector `α` of the sorted multi-index `idx`: `α_i` counts the
/// occurrences of axis `i`.
pub fn exponents_from_index(idx: &[usize], n: usize) -> Vec<usize> {
    let mut alpha = vec![0usize; n];
    for &i in idx {
        alpha[i] += 1;
    }
    alpha
}

/// Sorted multi-index with exponent vector `α`; inverse of
/// [`exponents_from_index`].
pub fn index_from_exponents(alpha: &[usize]) -> Vec<usize> {
    let mut idx = Vec::with_capacity(alpha.iter().sum());
    for (axis, &count) in alpha.iter().enumerate() {
        idx.extend(std::iter::repeat(axis).take(count));
    }
    idx
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `m! / (α_1! ⋯ α_n!)`: the number of distinct arrangements of the
/// sorted multi-index with exponents `α`.
pub fn multinomial(order: usize, alpha: &[usize]) -> f64 {
    let denom: u128 = alpha.iter().map(|&a| factorial(a)).product();
    (factorial(order) / denom) as f64
}

/// All sorted multi-indices of length `order` over axes `0..n`.
pub fn sorted_indices(n: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(order);
    fn recurse(n: usize, order: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == order {
            out.push(current.clone());
            return;
        }
        for axis in start..n {
            current.push(axis);
            recurse(n, order, axis, current, out);
            current.pop();
        }
    }
    recurse(n, order, 0, &mut current, &mut out);
    out
}

/// All exponent vectors of total degree `degree` over `n` variables.
pub fn exponent_multi_indices(n: usize, degree: usize) -> Vec<Vec<usize>> {
    sorted_indices(n, degree)
        .into_iter()
        .map(|idx| exponents_from_index(&idx, n))
        .collect()
}

fn validate_index(idx: &[usize], n: usize, order: usize) -> Result<(), TensorError> {
    let ok = idx.len() == order
        && idx.iter().all(|&i| i < n)
        && idx.windows(2).all(|w| w[0] <= w[1]);
    if ok {
        Ok(())
    } else {
        Err(TensorError::BadIndex {
            index: idx.to_vec(),
            n,
            order,
        })
    }
}

/// A symmetric tensor field of order `m` with trig-polynomial
/// coefficients, stored under sorted multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTensorField {
    n: usize,
    order: usize,
    band: i64,
    components: BTreeMap<Vec<usize>, TrigPolynomial>,
}

impl SymmetricTensorField {
    pub fn zero(n: usize, order: usize, band: i64) -> Self {
        SymmetricTensorField {
            n,
            order,
            band,
            components: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn band(&self) -> i64 {
        self.band
    }

    pub fn set_component(&mut self, idx: &[usize], poly: TrigPolynomial) -> Result<(), TensorError> {
        validate_index(idx, self.n, self.order)?;
        if poly.dim() != self.n {
            return Err(TensorError::DimensionMismatch {
                expected: self.n,
                got: poly.dim(),
            });
        }
        if poly.band() > self.band {
            self.band = poly.band();
        }
        self.components.insert(idx.to_vec(), poly);
        Ok(())
    }

    /// The component at a sorted multi-index; absent components are zero.
    pub fn component(&self, idx: &[usize]) -> Option<&TrigPolynomial> {
        self.components.get(idx)
    }

    pub fn components(&self) -> impl Iterator<Item = (&[usize], &TrigPolynomial)> {
        self.components.iter().map(|(i, p)| (i.as_slice(), p))
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Union of supported frequencies across all components.
    pub fn frequencies(&self) -> BTreeSet<Vec<i64>> {
        let mut keys = BTreeSet::new();
        for poly in self.components.values() {
            for (k, _) in poly.coeffs() {
                keys.insert(k.to_vec());
            }
        }
        keys
    }

    pub fn max_coeff(&self) -> f64 {
        self.components
            .values()
            .map(TrigPolynomial::max_coeff)
            .fold(0.0, f64::max)
    }

    /// Largest coefficient difference over all components and
    /// frequencies, absent entries reading as zero.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        let zero_self = TrigPolynomial::zero(self.n, self.band);
        let zero_other = TrigPolynomial::zero(other.n, other.band);
        let indices: BTreeSet<&Vec<usize>> = self
            .components
            .keys()
            .chain(other.components.keys())
            .collect();
        for idx in indices {
            let a = self.components.get(idx).unwrap_or(&zero_self);
            let b = other.components.get(idx).unwrap_or(&zero_other);
            max = max.max(a.max_coeff_diff(b));
        }
        max
    }

    /// Pointwise evaluation `f(x, ξ) = Σ_J (m!/α!) f_J(x) ξ^{α(J)}`.
    pub fn evaluate(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (idx, poly) in &self.components {
            let alpha = exponents_from_index(idx, self.n);
            let weight = multinomial(self.order, &alpha);
            let monomial: f64 = alpha
                .iter()
                .zip(xi)
                .map(|(&a, &xii)| xii.powi(a as i32))
                .product();
            acc += poly.evaluate(x) * weight * monomial;
        }
        acc
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        SymmetricTensorField {
            n: self.n,
            order: self.order,
            band: self.band,
            components: self
                .components
                .iter()
                .map(|(i, p)| (i.clone(), p.scale(factor)))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        if other.order != self.order {
            return Err(TensorError::OrderMismatch {
                expected: self.order,
                got: other.order,
            });
        }
        let mut out = self.clone();
        out.band = self.band.max(other.band);
        for (idx, poly) in &other.components {
            let merged = match out.components.get(idx) {
                Some(existing) => existing.add(poly)?,
                None => poly.clone(),
            };
            out.components.insert(idx.clone(), merged);
        }
        Ok(out)
    }
}

/// Homogeneous polynomial in the direction variable, keyed by exponent
/// vectors of fixed total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial {
    n: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Complex64>,
}

impl HomogeneousPolynomial {
    pub fn zero(n: usize, degree: usize) -> Self {
        HomogeneousPolynomial {
            n,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn set_coeff(&mut self, alpha: &[usize], c: Complex64) -> Result<(), TensorError> {
        if alpha.len() != self.n {
            return Err(TensorError::DimensionMismatch {
                expected: self.n,
                got: alpha.len(),
            });
        }
        let total: usize = alpha.iter().sum();
        if total != self.degree {
            return Err(TensorError::OrderMismatch {
                expected: self.degree,
                got: total,
            });
        }
        self.coeffs.insert(alpha.to_vec(), c);
        Ok(())
    }

    pub fn coeff(&self, alpha: &[usize]) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&[usize], Complex64)> {
        self.coeffs.iter().map(|(a, &c)| (a.as_slice(), c))
    }

    /// `Σ_α coeff(α) v^α`.
    pub fn evaluate(&self, v: &[f64]) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (alpha, c) in &self.coeffs {
            let monomial: f64 = alpha
                .iter()
                .zip(v)
                .map(|(&a, &vi)| vi.powi(a as i32))
                .product();
            acc += c * monomial;
        }
        acc
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        HomogeneousPolynomial {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c * factor)).collect(),
        }
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for (a, c) in &self.coeffs {
            max = max.max((c - other.coeff(a)).norm());
        }
        for (a, c) in &other.coeffs {
            if !self.coeffs.contains_key(a) {
                max = max.max(c.norm());
            }
        }
        max
    }
}

/// Symmetrize a map of possibly-unsorted multi-indices: the component at
/// sorted index `J` is the average over all distinct arrangements of
/// `J`, missing arrangements counting as zero.
pub fn symmetrize<I>(n: usize, band: i64, components: I) -> Result<SymmetricTensorField, TensorError>
where
    I: IntoIterator<Item = (Vec<usize>, TrigPolynomial)>,
{
    let mut grouped: BTreeMap<Vec<usize>, Vec<TrigPolynomial>> = BTreeMap::new();
    let mut order: Option<usize> = None;
    for (idx, poly) in components {
        match order {
            None => order = Some(idx.len()),
            Some(m) if m != idx.len() => {
                return Err(TensorError::OrderMismatch {
                    expected: m,
                    got: idx.len(),
                })
            }
            _ => {}
        }
        if idx.iter().any(|&i| i >= n) {
            return Err(TensorError::BadIndex {
                index: idx,
                n,
                order: order.unwrap(),
            });
        }
        let mut sorted = idx;
        sorted.sort_unstable();
        grouped.entry(sorted).or_default().push(poly);
    }
    let order = order.unwrap_or(0);
    let mut out = SymmetricTensorField::zero(n, order, band);
    for (idx, polys) in grouped {
        let arrangements = multinomial(order, &exponents_from_index(&idx, n));
        let mut sum = TrigPolynomial::zero(n, band);
        for poly in polys {
            sum = sum.add(&poly)?;
        }
        out.set_component(&idx, sum.scale(Complex64::new(1.0 / arrangements, 0.0)))?;
    }
    Ok(out)
}

/// Symmetrized covariant derivative `σ∇h` on the flat torus.
///
/// Componentwise, for a sorted index `J` of length `m`,
/// `(σ∇h)_J = m^{-1} Σ_{distinct j ∈ J} count_j(J) · ∂_j h_{J∖j}`
/// and `∂_j` multiplies the coefficient at `k` by `2πi k_j`.
pub fn gradient(h: &SymmetricTensorField) -> SymmetricTensorField {
    let n = h.dim();
    let order = h.order() + 1;
    let mut out = SymmetricTensorField::zero(n, order, h.band());
    for idx in sorted_indices(n, order) {
        let mut component = TrigPolynomial::zero(n, h.band());
        let mut nonzero = false;
        let mut seen = BTreeSet::new();
        for (pos, &j) in idx.iter().enumerate() {
            if !seen.insert(j) {
                continue;
            }
            let count = idx.iter().filter(|&&i| i == j).count();
            let mut rest = idx.clone();
            rest.remove(pos);
            let Some(base) = h.component(&rest) else {
                continue;
            };
            let weight = count as f64 / order as f64;
            for (k, c) in base.coeffs() {
                let derivative = c * Complex64::new(0.0, std::f64::consts::TAU * k[j] as f64);
                component
                    .add_to_coeff(k, derivative * weight)
                    .expect("gradient preserves the band");
                nonzero = true;
            }
        }
        if nonzero {
            out.set_component(&idx, component)
                .expect("sorted index enumeration is valid");
        }
    }
    out
}

/// The frequency polynomial `f̂(k, ·)`: monomial coefficient at `α` is
/// `(m!/α!) f_{J(α)}(k)`.
pub fn poly_at_freq(f: &SymmetricTensorField, k: &[i64]) -> HomogeneousPolynomial {
    let mut poly = HomogeneousPolynomial::zero(f.dim(), f.order());
    for (idx, component) in f.components() {
        let c = component.coeff(k);
        if c != Complex64::ZERO {
            let alpha = exponents_from_index(idx, f.dim());
            let weight = multinomial(f.order(), &alpha);
            poly.set_coeff(&alpha, c * weight)
                .expect("exponents of a valid index have the right degree");
        }
    }
    poly
}

/// Tensor X-ray transform along `v`: the output coefficient at `k` is
/// `[k·v = 0] · f̂(k, v)` with the delta tested in exact integer
/// arithmetic.
pub fn tensor_xray_forward(
    f: &SymmetricTensorField,
    v: &Direction,
) -> Result<TrigPolynomial, TensorError> {
    if v.dim() != f.dim() {
        return Err(TensorError::DimensionMismatch {
            expected: f.dim(),
            got: v.dim(),
        });
    }
    let v_real = v.as_f64();
    let mut out = TrigPolynomial::zero(f.dim(), f.band());
    for k in f.frequencies() {
        if v.dot(&k) != 0 {
            continue;
        }
        let value = poly_at_freq(f, &k).evaluate(&v_real);
        out.set_coeff(&k, value)
            .expect("frequency of a component is in band");
    }
    Ok(out)
}

/// Multiplication by the linear form: `(k·v) · Q`, coefficientwise.
pub fn multiply_by_linear_form(q: &HomogeneousPolynomial, k: &[i64]) -> HomogeneousPolynomial {
    let n = q.dim();
    let mut out = HomogeneousPolynomial::zero(n, q.degree() + 1);
    let mut acc: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    for (beta, c) in q.coeffs() {
        for (axis, &kj) in k.iter().enumerate() {
            if kj == 0 {
                continue;
            }
            let mut alpha = beta.to_vec();
            alpha[axis] += 1;
            *acc.entry(alpha).or_insert(Complex64::ZERO) += c * kj as f64;
        }
    }
    for (alpha, c) in acc {
        out.set_coeff(&alpha, c).expect("degree increases by exactly one");
    }
    out
}

/// Deterministic orthonormal frame with first axis `k/|k|`; the rest is
/// Gram–Schmidt over the standard basis with largest-remaining-norm
/// pivoting (ties to the lowest index).
fn orthonormal_frame(k: &[i64]) -> Vec<Vec<f64>> {
    let n = k.len();
    let norm = (k.iter().map(|&e| (e * e) as f64).sum::<f64>()).sqrt();
    let mut frame: Vec<Vec<f64>> = vec![k.iter().map(|&e| e as f64 / norm).collect()];
    let mut used = vec![false; n];
    while frame.len() < n {
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for axis in 0..n {
            if used[axis] {
                continue;
            }
            let mut residual = vec![0.0; n];
            residual[axis] = 1.0;
            for u in &frame {
                let proj: f64 = u.iter().zip(&residual).map(|(a, b)| a * b).sum();
                for (r, ui) in residual.iter_mut().zip(u) {
                    *r -= proj * ui;
                }
            }
            let len = residual.iter().map(|r| r * r).sum::<f64>().sqrt();
            if best.as_ref().map_or(true, |(_, _, l)| len > *l) {
                best = Some((axis, residual, len));
            }
        }
        let (axis, mut residual, len) = best.expect("fewer than n frame vectors chosen");
        used[axis] = true;
        for r in &mut residual {
            *r /= len;
        }
        frame.push(residual);
    }
    frame
}

/// Substitute each variable with a linear form: given the matrix
/// `forms[i]` expressing old variable `i` in the new variables, return
/// the polynomial in the new variables.
fn substitute_linear(
    p: &HomogeneousPolynomial,
    forms: &[Vec<f64>],
) -> HomogeneousPolynomial {
    let n = p.dim();
    let mut acc: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    for (alpha, c) in p.coeffs() {
        // Expand Π_i forms[i]^{α_i} one linear factor at a time.
        let mut terms: BTreeMap<Vec<usize>, Complex64> =
            BTreeMap::from([(vec![0usize; n], c)]);
        for (var, &power) in alpha.iter().enumerate() {
            for _ in 0..power {
                let mut next: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
                for (beta, coeff) in &terms {
                    for (new_var, &weight) in forms[var].iter().enumerate() {
                        if weight == 0.0 {
                            continue;
                        }
                        let mut gamma = beta.clone();
                        gamma[new_var] += 1;
                        *next.entry(gamma).or_insert(Complex64::ZERO) += coeff * weight;
                    }
                }
                terms = next;
            }
        }
        for (beta, coeff) in terms {
            *acc.entry(beta).or_insert(Complex64::ZERO) += coeff;
        }
    }
    let mut out = HomogeneousPolynomial::zero(n, p.degree());
    for (beta, coeff) in acc {
        out.set_coeff(&beta, coeff)
            .expect("linear substitution preserves total degree");
    }
    out
}

/// Factor out the linear form: given `P` homogeneous of degree `m ≥ 1`
/// vanishing on the hyperplane `k·v = 0`, return `G` of degree `m-1`
/// with `P(v) = (k·v)·G(v)`.
///
/// The polynomial is re-expressed in an orthonormal frame whose first
/// coordinate is `v_∥ = k·v/|k|`; monomials free of `v_∥` must then
/// vanish (this is the hyperplane condition), the rest lose one power of
/// `v_∥` and a factor `|k|`, and the result is transformed back.
///
/// Fails with [`TensorError::NotInKernel`] when the `v_∥`-free residual
/// exceeds `tol` relative to the largest frame coefficient.
pub fn divide_by_linear_form(
    p: &HomogeneousPolynomial,
    k: &[i64],
    tol: f64,
) -> Result<HomogeneousPolynomial, TensorError> {
    let n = p.dim();
    if k.len() != n {
        return Err(TensorError::DimensionMismatch {
            expected: n,
            got: k.len(),
        });
    }
    if k.iter().all(|&e| e == 0) {
        return Err(TensorError::ZeroFrequency);
    }
    if p.degree() == 0 {
        return Err(TensorError::ZeroOrder);
    }
    let frame = orthonormal_frame(k);
    // v_i = Σ_c frame[c][i] w_c, so old variable i expands with weights
    // frame[·][i].
    let to_frame: Vec<Vec<f64>> = (0..n)
        .map(|i| frame.iter().map(|u| u[i]).collect())
        .collect();
    let in_frame = substitute_linear(p, &to_frame);
    let scale = in_frame.max_coeff();
    if scale == 0.0 {
        return Ok(HomogeneousPolynomial::zero(n, p.degree() - 1));
    }
    let mut residual = 0.0f64;
    let norm_k = (k.iter().map(|&e| (e * e) as f64).sum::<f64>()).sqrt();
    let mut quotient = HomogeneousPolynomial::zero(n, p.degree() - 1);
    for (beta, c) in in_frame.coeffs() {
        if beta[0] == 0 {
            residual = residual.max(c.norm());
        } else {
            let mut reduced = beta.to_vec();
            reduced[0] -= 1;
            quotient
                .set_coeff(&reduced, c / norm_k)
                .expect("reducing the parallel exponent lowers the degree by one");
        }
    }
    if residual > tol * scale {
        return Err(TensorError::NotInKernel {
            residual: residual / scale,
        });
    }
    // w_c = u_c · v: frame coordinate c expands with weights frame[c].
    Ok(substitute_linear(&quotient, &frame))
}

/// Solenoidal decomposition: given `f` of order `m ≥ 1` with vanishing
/// X-ray transform, return `h` of order `m-1` with `σ∇h = f`.
///
/// Per frequency `k ≠ 0`, `ĥ(k,·) = divide(f̂(k,·), k) / (2πi)`; the
/// zero frequency of `f` must vanish outright. Frequencies whose
/// polynomial is below `tol` relative to the largest coefficient of `f`
/// are treated as zero.
pub fn solenoidal_decompose(
    f: &SymmetricTensorField,
    tol: f64,
) -> Result<SymmetricTensorField, TensorError> {
    let order = f.order();
    if order == 0 {
        return Err(TensorError::ZeroOrder);
    }
    let n = f.dim();
    let scale = f.max_coeff();
    let mut h = SymmetricTensorField::zero(n, order - 1, f.band());
    if scale == 0.0 {
        return Ok(h);
    }
    let threshold = tol * scale;
    let zero = vec![0i64; n];
    let p0 = poly_at_freq(f, &zero);
    if p0.max_coeff() > threshold {
        return Err(TensorError::NotSolenoidal {
            k: zero,
            residual: p0.max_coeff() / scale,
        });
    }
    let freqs: Vec<Vec<i64>> = f.frequencies().into_iter().filter(|k| *k != zero).collect();
    let per_freq: Vec<(Vec<i64>, HomogeneousPolynomial)> = freqs
        .par_iter()
        .map(|k| {
            let p = poly_at_freq(f, k);
            if p.max_coeff() <= threshold {
                return Ok((k.clone(), HomogeneousPolynomial::zero(n, order - 1)));
            }
            let g = divide_by_linear_form(&p, k, tol).map_err(|e| match e {
                TensorError::NotInKernel { residual } => TensorError::NotSolenoidal {
                    k: k.clone(),
                    residual,
                },
                other => other,
            })?;
            // f̂ = 2πi (k·v) ĥ under the e_k convention.
            Ok((
                k.clone(),
                g.scale(Complex64::new(0.0, -1.0 / std::f64::consts::TAU)),
            ))
        })
        .collect::<Result<_, TensorError>>()?;
    for (k, g) in per_freq {
        for (alpha, c) in g.coeffs() {
            if c == Complex64::ZERO {
                continue;
            }
            let idx = index_from_exponents(alpha);
            let weight = multinomial(order - 1, alpha);
            let mut poly = match h.component(&idx) {
                Some(existing) => existing.clone(),
                None => TrigPolynomial::zero(n, f.band()),
            };
            poly.add_to_coeff(&k, c / weight)?;
            h.set_component(&idx, poly)?;
        }
    }
    Ok(h)
}

/// Independent per-frequency oracle: dimensions of (a) homogeneous
/// degree-m polynomials vanishing on the lattice points of the
/// hyperplane `k·v = 0` within the interpolation box, and (b) the image
/// of multiplication by `k·v` on degree-(m-1) polynomials. Solenoidal
/// injectivity at frequency `k` is the equality of the two.
///
/// Both ranks are computed in exact integer arithmetic.
pub fn kernel_dimension_bruteforce(
    n: usize,
    order: usize,
    k: &[i64],
) -> Result<(usize, usize), TensorError> {
    if k.len() != n {
        return Err(TensorError::DimensionMismatch {
            expected: n,
            got: k.len(),
        });
    }
    if k.iter().all(|&e| e == 0) {
        return Err(TensorError::ZeroFrequency);
    }
    if order == 0 {
        return Err(TensorError::ZeroOrder);
    }
    let sup = k.iter().map(|&e| e.abs()).max().unwrap_or(0);
    let bound = order as i64 * (sup + 1) + 1;
    let monomials = exponent_multi_indices(n, order);

    // Evaluation matrix of degree-m monomials on the hyperplane lattice
    // points inside the box.
    let mut rows: Vec<Vec<i128>> = Vec::new();
    let mut v = vec![-bound; n];
    loop {
        let dot: i64 = v.iter().zip(k).map(|(&vi, &ki)| vi * ki).sum();
        if dot == 0 {
            let row: Vec<i128> = monomials
                .iter()
                .map(|alpha| {
                    alpha
                        .iter()
                        .zip(&v)
                        .map(|(&a, &vi)| (vi as i128).pow(a as u32))
                        .product()
                })
                .collect();
            rows.push(row);
        }
        let mut axis = n;
        let mut done = true;
        while axis > 0 {
            axis -= 1;
            if v[axis] < bound {
                v[axis] += 1;
                done = false;
                break;
            }
            v[axis] = -bound;
        }
        if done {
            break;
        }
    }
    let eval_rank = crate::lattice::integer_rank(rows);
    let dim_kernel = monomials.len() - eval_rank;

    // Multiplication map H_{m-1} -> H_m expressed in monomial bases; its
    // rank is the image dimension.
    let lower = exponent_multi_indices(n, order - 1);
    let position: BTreeMap<&Vec<usize>, usize> =
        monomials.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut map_rows: Vec<Vec<i128>> = Vec::new();
    for beta in &lower {
        let mut row = vec![0i128; monomials.len()];
        for (axis, &kj) in k.iter().enumerate() {
            if kj == 0 {
                continue;
            }
            let mut alpha = beta.clone();
            alpha[axis] += 1;
            row[position[&alpha]] += kj as i128;
        }
        map_rows.push(row);
    }
    let dim_image = crate::lattice::integer_rank(map_rows);
    Ok((dim_kernel, dim_image))
}

/// Deterministic random tensor field: each component of the given order
/// is a seeded phantom, with per-component seeds derived from `seed`.
pub fn make_tensor_phantom(
    n: usize,
    order: usize,
    band: i64,
    kind: PhantomKind,
    seed: u64,
) -> SymmetricTensorField {
    let mut out = SymmetricTensorField::zero(n, order, band);
    for (offset, idx) in sorted_indices(n, order).into_iter().enumerate() {
        let component_seed = seed.wrapping_add((offset as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let poly = make_phantom(n, band, kind, component_seed);
        out.set_component(&idx, poly)
            .expect("enumerated index is valid");
    }
    out
}
