//! Band-limited function calculus on the torus.
//!
//! A [`TrigPolynomial`] is a finite Fourier sum
//! `f(x) = Σ_k f̂(k) e_k(x)` with `e_k(x) = exp(2*pi*i k·x)` and all
//! supported frequencies bounded in sup-norm by the band `K`. Absent
//! coefficients are zero; stored coefficients may be zero, and all
//! comparisons are by value. Coefficients live in a `BTreeMap`, so every
//! iteration and summation below runs in the same canonical key order
//! regardless of construction history.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("grid resolution {resolution} is below the Nyquist bound 2K+1 = {required} for band {band}")]
    Aliasing {
        resolution: usize,
        band: i64,
        required: usize,
    },
    #[error("frequency {k:?} exceeds the band {band}")]
    BandExceeded { k: Vec<i64>, band: i64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown phantom kind `{0}`")]
    UnknownPhantomKind(String),
}

fn sup_norm(k: &[i64]) -> i64 {
    k.iter().map(|e| e.abs()).max().unwrap_or(0)
}

/// A band-limited trigonometric polynomial on `T^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    n: usize,
    band: i64,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl TrigPolynomial {
    /// The zero polynomial of dimension `n` and band `band`.
    pub fn zero(n: usize, band: i64) -> Self {
        TrigPolynomial {
            n,
            band,
            coeffs: BTreeMap::new(),
        }
    }

    /// A single character `c * e_k`.
    pub fn single_mode(n: usize, band: i64, k: &[i64], c: Complex64) -> Result<Self, SpectralError> {
        let mut f = Self::zero(n, band);
        f.set_coeff(k, c)?;
        Ok(f)
    }

    pub fn from_coeffs<I>(n: usize, band: i64, coeffs: I) -> Result<Self, SpectralError>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut f = Self::zero(n, band);
        for (k, c) in coeffs {
            f.set_coeff(&k, c)?;
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn band(&self) -> i64 {
        self.band
    }

    /// The coefficient at `k`; absent keys read as zero.
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn set_coeff(&mut self, k: &[i64], c: Complex64) -> Result<(), SpectralError> {
        if k.len() != self.n {
            return Err(SpectralError::DimensionMismatch {
                expected: self.n,
                got: k.len(),
            });
        }
        if sup_norm(k) > self.band {
            return Err(SpectralError::BandExceeded {
                k: k.to_vec(),
                band: self.band,
            });
        }
        self.coeffs.insert(k.to_vec(), c);
        Ok(())
    }

    pub fn add_to_coeff(&mut self, k: &[i64], c: Complex64) -> Result<(), SpectralError> {
        let current = self.coeff(k);
        self.set_coeff(k, current + c)
    }

    /// Coefficients in canonical key order.
    pub fn coeffs(&self) -> impl Iterator<Item = (&[i64], Complex64)> {
        self.coeffs.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn num_stored(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ_k f̂(k) exp(2*pi*i k·x)`, coordinates interpreted mod 1.
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.n);
        let mut acc = Complex64::ZERO;
        for (k, c) in &self.coeffs {
            let mut phase: f64 = k.iter().zip(x).map(|(&ki, &xi)| ki as f64 * xi).sum();
            // Reduce to [-1/2, 1/2] before scaling by 2*pi; the subtraction
            // is exact in binary floating point.
            phase -= phase.round();
            acc += c * Complex64::cis(std::f64::consts::TAU * phase);
        }
        acc
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        TrigPolynomial {
            n: self.n,
            band: self.band,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c * factor)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SpectralError> {
        if other.n != self.n {
            return Err(SpectralError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = self.clone();
        out.band = self.band.max(other.band);
        for (k, c) in &other.coeffs {
            let cur = out.coeff(k);
            out.coeffs.insert(k.clone(), cur + c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SpectralError> {
        self.add(&other.scale(-Complex64::ONE))
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise coefficient difference, absent keys reading as
    /// zero on either side.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for (k, c) in &self.coeffs {
            max = max.max((c - other.coeff(k)).norm());
        }
        for (k, c) in &other.coeffs {
            if !self.coeffs.contains_key(k) {
                max = max.max(c.norm());
            }
        }
        max
    }
}

/// Complex samples on the uniform grid `{0, 1/N, ..., (N-1)/N}^n`,
/// stored in lexicographic index order (first index slowest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    n: usize,
    resolution: usize,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(n: usize, resolution: usize, samples: Vec<Complex64>) -> Result<Self, SpectralError> {
        let expected = resolution.pow(n as u32);
        if samples.len() != expected {
            return Err(SpectralError::DimensionMismatch {
                expected,
                got: samples.len(),
            });
        }
        Ok(GridFunction {
            n,
            resolution,
            samples,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn sample(&self, index: &[usize]) -> Complex64 {
        self.samples[self.linear_index(index)]
    }

    pub fn linear_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.n);
        index.iter().fold(0, |acc, &i| acc * self.resolution + i)
    }

    /// Multi-index of a linear position, inverse of [`Self::linear_index`].
    pub fn multi_index(&self, mut linear: usize) -> Vec<usize> {
        let mut index = vec![0usize; self.n];
        for axis in (0..self.n).rev() {
            index[axis] = linear % self.resolution;
            linear /= self.resolution;
        }
        index
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max_sample_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.samples.len(), other.samples.len());
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Roots of unity `exp(2*pi*i p / N)` for `p = 0..N`.
fn unity_table(resolution: usize) -> Vec<Complex64> {
    (0..resolution)
        .map(|p| Complex64::cis(std::f64::consts::TAU * p as f64 / resolution as f64))
        .collect()
}

/// Sample `f` on the uniform grid of `resolution` points per axis.
///
/// Requires `resolution >= 2*band + 1` so the samples determine `f`.
pub fn to_grid(f: &TrigPolynomial, resolution: usize) -> Result<GridFunction, SpectralError> {
    let required = (2 * f.band().max(0) + 1) as usize;
    if resolution < required {
        return Err(SpectralError::Aliasing {
            resolution,
            band: f.band(),
            required,
        });
    }
    let table = unity_table(resolution);
    let total = resolution.pow(f.dim() as u32);
    let mut samples = vec![Complex64::ZERO; total];
    let mut index = vec![0usize; f.dim()];
    for (linear, slot) in samples.iter_mut().enumerate() {
        let mut rem = linear;
        for axis in (0..f.dim()).rev() {
            index[axis] = rem % resolution;
            rem /= resolution;
        }
        let mut acc = Complex64::ZERO;
        for (k, c) in f.coeffs() {
            let mut p: i64 = 0;
            for (ki, &ii) in k.iter().zip(index.iter()) {
                p += ki * ii as i64;
            }
            acc += c * table[p.rem_euclid(resolution as i64) as usize];
        }
        *slot = acc;
    }
    GridFunction::new(f.dim(), resolution, samples)
}

/// Recover the band-`band` polynomial from grid samples by the discrete
/// Fourier sum `f̂(k) = N^{-n} Σ_j g(j/N) exp(-2*pi*i k·j/N)`.
///
/// Requires `resolution >= 2*band + 1`; below that the discrete sum
/// aliases distinct frequencies.
pub fn from_grid(g: &GridFunction, band: i64) -> Result<TrigPolynomial, SpectralError> {
    let resolution = g.resolution();
    let required = (2 * band.max(0) + 1) as usize;
    if resolution < required {
        return Err(SpectralError::Aliasing {
            resolution,
            band,
            required,
        });
    }
    let table = unity_table(resolution);
    let norm = 1.0 / g.len() as f64;
    let mut f = TrigPolynomial::zero(g.dim(), band);
    let mut freq = vec![-band; g.dim()];
    loop {
        let mut acc = Complex64::ZERO;
        let mut index = vec![0usize; g.dim()];
        for (linear, &sample) in g.samples().iter().enumerate() {
            let mut rem = linear;
            for axis in (0..g.dim()).rev() {
                index[axis] = rem % resolution;
                rem /= resolution;
            }
            let mut p: i64 = 0;
            for (ki, &ii) in freq.iter().zip(index.iter()) {
                p += ki * ii as i64;
            }
            // Conjugate character: negate the phase index.
            acc += sample * table[(-p).rem_euclid(resolution as i64) as usize];
        }
        f.set_coeff(&freq, acc * norm)?;
        // Advance the frequency odometer.
        let mut axis = g.dim();
        loop {
            if axis == 0 {
                return Ok(f);
            }
            axis -= 1;
            if freq[axis] < band {
                freq[axis] += 1;
                break;
            }
            freq[axis] = -band;
        }
    }
}

/// Product-Fejér mean: multiply the coefficient at `k` by
/// `Π_j max(0, 1 - |k_j|/N)`. The output band is `N - 1`.
pub fn fejer_reconstruct(f: &TrigPolynomial, n_fejer: usize) -> TrigPolynomial {
    assert!(n_fejer >= 1, "Fejér order must be at least 1");
    let nf = n_fejer as f64;
    let band = n_fejer as i64 - 1;
    let mut out = TrigPolynomial::zero(f.dim(), band);
    for (k, c) in f.coeffs() {
        let weight: f64 = k
            .iter()
            .map(|&kj| (1.0 - kj.abs() as f64 / nf).max(0.0))
            .product();
        if weight > 0.0 {
            out.set_coeff(k, c * weight)
                .expect("weighted frequency is inside the Fejér band");
        }
    }
    out
}

/// `sqrt( Σ_k (1+|k|²)^s |f̂(k)|² )` with `|k|` the Euclidean norm,
/// summed in canonical key order.
pub fn sobolev_norm(f: &TrigPolynomial, s: f64) -> f64 {
    let mut sum = 0.0;
    for (k, c) in f.coeffs() {
        let k2: f64 = k.iter().map(|&ki| (ki * ki) as f64).sum();
        sum += (1.0 + k2).powf(s) * c.norm_sqr();
    }
    sum.sqrt()
}

/// Test-function generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhantomKind {
    /// Independent complex coefficients on every slot in the band.
    RandomComplex,
    /// Hermitian-symmetric coefficients, `f̂(-k) = conj(f̂(k))`, so the
    /// function is real-valued.
    RandomReal,
    /// Band-limited product of one-dimensional Fejér kernels centered at
    /// a seed-derived point; continuous, nonnegative, real.
    SeparableBump,
}

impl std::str::FromStr for PhantomKind {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-complex" => Ok(PhantomKind::RandomComplex),
            "random-real" => Ok(PhantomKind::RandomReal),
            "separable-bump" => Ok(PhantomKind::SeparableBump),
            other => Err(SpectralError::UnknownPhantomKind(other.to_string())),
        }
    }
}

/// All frequencies with sup-norm at most `band`, in canonical order.
pub fn frequency_box(n: usize, band: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut freq = vec![-band; n];
    loop {
        out.push(freq.clone());
        let mut axis = n;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if freq[axis] < band {
                freq[axis] += 1;
                break;
            }
            freq[axis] = -band;
        }
    }
}

/// Deterministic seeded phantom of dimension `n` and band `band`.
pub fn make_phantom(n: usize, band: i64, kind: PhantomKind, seed: u64) -> TrigPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = TrigPolynomial::zero(n, band);
    match kind {
        PhantomKind::RandomComplex => {
            for k in frequency_box(n, band) {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                f.set_coeff(&k, c).expect("enumerated frequency is in band");
            }
        }
        PhantomKind::RandomReal => {
            for k in frequency_box(n, band) {
                let neg: Vec<i64> = k.iter().map(|&e| -e).collect();
                // Visit each {k, -k} pair once, at its canonical member.
                if k > neg {
                    continue;
                }
                if k == neg {
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
                    f.set_coeff(&k, c).expect("zero frequency is in band");
                } else {
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    f.set_coeff(&k, c).expect("enumerated frequency is in band");
                    f.set_coeff(&neg, c.conj()).expect("mirrored frequency is in band");
                }
            }
        }
        PhantomKind::SeparableBump => {
            let center: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let order = band as f64 + 1.0;
            for k in frequency_box(n, band) {
                let weight: f64 = k
                    .iter()
                    .map(|&kj| 1.0 - kj.abs() as f64 / order)
                    .product();
                let phase: f64 = k.iter().zip(&center).map(|(&kj, &cj)| kj as f64 * cj).sum();
                let c = weight * Complex64::cis(-std::f64::consts::TAU * phase);
                f.set_coeff(&k, c).expect("enumerated frequency is in band");
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_constant_and_single_mode() {
        let one = TrigPolynomial::single_mode(2, 0, &[0, 0], Complex64::ONE).unwrap();
        assert!((one.evaluate(&[0.3, 0.9]) - Complex64::ONE).norm() < 1e-15);

        // exp(2*pi*i / 4) = i.
        let f = TrigPolynomial::single_mode(2, 1, &[1, 0], Complex64::ONE).unwrap();
        let got = f.evaluate(&[0.25, 0.7]);
        assert!((got - Complex64::I).norm() < 1e-15);
    }

    #[test]
    fn evaluate_matches_reordered_summation_oracle() {
        let f = make_phantom(2, 3, PhantomKind::RandomComplex, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            // Independent oracle: direct summation in reversed key order
            // without phase reduction.
            let mut pairs: Vec<(Vec<i64>, Complex64)> =
                f.coeffs().map(|(k, c)| (k.to_vec(), c)).collect();
            pairs.reverse();
            let mut oracle = Complex64::ZERO;
            for (k, c) in pairs {
                let phase: f64 = k.iter().zip(&x).map(|(&ki, &xi)| ki as f64 * xi).sum();
                oracle += c * Complex64::cis(std::f64::consts::TAU * phase);
            }
            assert!((f.evaluate(&x) - oracle).norm() < 1e-12);
        }
    }

    #[test]
    fn evaluate_is_periodic() {
        let f = make_phantom(3, 3, PhantomKind::RandomComplex, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
            for axis in 0..3 {
                let mut shifted = x.clone();
                shifted[axis] += 1.0;
                assert!((f.evaluate(&x) - f.evaluate(&shifted)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_round_trip_single_mode() {
        let f = TrigPolynomial::single_mode(2, 1, &[1, 1], Complex64::new(2.0, -0.5)).unwrap();
        let g = to_grid(&f, 5).unwrap();
        let back = from_grid(&g, 1).unwrap();
        assert!(back.max_coeff_diff(&f) < 1e-12);
    }

    #[test]
    fn grid_of_constant_has_single_coefficient() {
        let one = TrigPolynomial::single_mode(2, 0, &[0, 0], Complex64::ONE).unwrap();
        let g = to_grid(&one, 6).unwrap();
        let back = from_grid(&g, 2).unwrap();
        assert!((back.coeff(&[0, 0]) - Complex64::ONE).norm() < 1e-13);
        for (k, c) in back.coeffs() {
            if k != [0, 0] {
                assert!(c.norm() < 1e-13, "unexpected coefficient at {:?}", k);
            }
        }
    }

    #[test]
    fn grid_round_trip_random_band3() {
        let f = make_phantom(2, 3, PhantomKind::RandomComplex, 11);
        let g = to_grid(&f, 7).unwrap();
        let back = from_grid(&g, 3).unwrap();
        assert!(back.max_coeff_diff(&f) < 1e-12);
    }

    #[test]
    fn grid_rejects_sub_nyquist_resolution() {
        let f = make_phantom(2, 3, PhantomKind::RandomComplex, 1);
        assert!(matches!(
            to_grid(&f, 6),
            Err(SpectralError::Aliasing { required: 7, .. })
        ));
        let g = to_grid(&f, 7).unwrap();
        assert!(from_grid(&g, 4).is_err());
    }

    #[test]
    fn parseval_at_s_zero() {
        let f = make_phantom(2, 3, PhantomKind::RandomComplex, 21);
        let g = to_grid(&f, 9).unwrap();
        let grid_energy: f64 =
            g.samples().iter().map(|c| c.norm_sqr()).sum::<f64>() / g.len() as f64;
        let norm = sobolev_norm(&f, 0.0);
        assert!((norm * norm - grid_energy).abs() / grid_energy < 1e-10);
    }

    #[test]
    fn fejer_weights_examples() {
        let e0 = TrigPolynomial::single_mode(2, 0, &[0, 0], Complex64::ONE).unwrap();
        let out = fejer_reconstruct(&e0, 4);
        assert_eq!(out.coeff(&[0, 0]), Complex64::ONE);

        let f = TrigPolynomial::single_mode(2, 1, &[1, 0], Complex64::ONE).unwrap();
        let out = fejer_reconstruct(&f, 2);
        assert!((out.coeff(&[1, 0]) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(out.band(), 1);
    }

    #[test]
    fn fejer_never_increases_l2_norm() {
        for seed in 0..5 {
            let f = make_phantom(2, 4, PhantomKind::RandomComplex, seed);
            for n_fejer in [1usize, 2, 5, 9] {
                let out = fejer_reconstruct(&f, n_fejer);
                assert!(sobolev_norm(&out, 0.0) <= sobolev_norm(&f, 0.0) + 1e-14);
            }
        }
    }

    #[test]
    fn fejer_sup_error_decreases_for_continuous_phantom() {
        let f = make_phantom(2, 8, PhantomKind::SeparableBump, 17);
        let reference = to_grid(&f, 64).unwrap();
        let mut errors = Vec::new();
        for n_fejer in [4usize, 8, 16, 32] {
            let approx = to_grid(&fejer_reconstruct(&f, n_fejer), 64).unwrap();
            errors.push(reference.max_sample_diff(&approx));
        }
        for pair in errors.windows(2) {
            assert!(pair[1] < pair[0], "sup error must decrease: {:?}", errors);
        }
    }

    #[test]
    fn sobolev_norm_examples() {
        let e0 = TrigPolynomial::single_mode(2, 0, &[0, 0], Complex64::ONE).unwrap();
        assert!((sobolev_norm(&e0, -3.0) - 1.0).abs() < 1e-15);
        assert!((sobolev_norm(&e0, 7.5) - 1.0).abs() < 1e-15);

        let f = TrigPolynomial::single_mode(2, 1, &[1, 0], Complex64::ONE).unwrap();
        assert!((sobolev_norm(&f, 0.0) - 1.0).abs() < 1e-15);

        // (1+1)^1 + (1+4)^1 = 7.
        let mut g = TrigPolynomial::zero(2, 2);
        g.set_coeff(&[1, 0], Complex64::ONE).unwrap();
        g.set_coeff(&[0, 2], Complex64::ONE).unwrap();
        assert!((sobolev_norm(&g, 1.0) - 7.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn random_real_phantom_is_real_valued() {
        let f = make_phantom(2, 3, PhantomKind::RandomReal, 23);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            assert!(f.evaluate(&x).im.abs() < 1e-12);
        }
    }

    #[test]
    fn phantom_is_deterministic_in_seed() {
        for kind in [
            PhantomKind::RandomComplex,
            PhantomKind::RandomReal,
            PhantomKind::SeparableBump,
        ] {
            let a = make_phantom(3, 2, kind, 42);
            let b = make_phantom(3, 2, kind, 42);
            assert_eq!(a, b);
            let c = make_phantom(3, 2, kind, 43);
            assert!(a.max_coeff_diff(&c) > 0.0);
        }
    }

    #[test]
    fn random_complex_phantom_fills_every_slot() {
        let f = make_phantom(2, 2, PhantomKind::RandomComplex, 9);
        assert_eq!(f.num_stored(), 25);
    }

    #[test]
    fn unknown_phantom_kind_errors() {
        let err = "spiky".parse::<PhantomKind>().unwrap_err();
        assert_eq!(err, SpectralError::UnknownPhantomKind("spiky".into()));
        assert_eq!("random-real".parse::<PhantomKind>(), Ok(PhantomKind::RandomReal));
    }

    #[test]
    fn set_coeff_rejects_out_of_band_and_bad_dim() {
        let mut f = TrigPolynomial::zero(2, 1);
        assert!(matches!(
            f.set_coeff(&[2, 0], Complex64::ONE),
            Err(SpectralError::BandExceeded { .. })
        ));
        assert!(matches!(
            f.set_coeff(&[1, 0, 0], Complex64::ONE),
            Err(SpectralError::DimensionMismatch { .. })
        ));
    }
}
