//! Integral geometry on the flat torus `T^n = R^n / Z^n`.
//!
//! The crate implements the d-plane Radon transform of band-limited
//! functions on the torus together with everything needed to verify its
//! classical properties numerically:
//!
//! * [`lattice`] — integer direction vectors, unordered independent
//!   d-tuples (the discrete Grassmannian), and exact integer kernel
//!   bases used to build acquisition sets.
//! * [`spectral`] — trigonometric polynomials, grid transforms, Fejér
//!   summation, Sobolev norms, and seeded phantoms.
//! * [`xray`] — the d-plane transform itself: spectral forward operator,
//!   quadrature oracle, Fourier-slice inversion, range validation and
//!   the stability (isometry) norm.
//! * [`tensor`] — symmetric m-tensor fields, the tensor X-ray transform,
//!   division by the linear form `k·v`, and solenoidal decomposition.
//! * [`billiard`] — the periodic broken-ray transform on rectangular
//!   boxes via even reflection/unfolding to the torus.
//! * [`io`] — the JSON/CSV file formats shared with the command line
//!   front end.
//!
//! All Fourier analysis uses the single convention
//! `e_k(x) = exp(2*pi*i k·x)`, so the coefficient of `∂_j` on characters
//! is `2*pi*i k_j` throughout.

#![forbid(unsafe_code)]

pub mod billiard;
pub mod io;
pub mod lattice;
pub mod spectral;
pub mod tensor;
pub mod xray;

pub use num_complex::Complex64;
