//! Analysis toolkit for discrete-time multilinear dynamical systems
//!
//!   x_{t+1} = A ×₁ x_t ×₂ x_t ⋯ ×_{k−1} x_t = A x_t^{k−1},
//!
//! where A is a supersymmetric order-k tensor over R^n. The crate covers:
//!
//! - dense supersymmetric tensor storage and multilinear contractions
//!   ([`tensor`]),
//! - orthogonal (odeco) decomposition by power iteration with deflation,
//!   Z-eigenpair certification, and Z-spectral-radius upper bounds
//!   ([`spectral`]),
//! - trajectory iteration and the closed-form solution
//!   x_q = Σ_r λ_r^α c_r^β v_r with α = ((k−1)^q − 1)/(k−2), β = (k−1)^q
//!   ([`dynamics`]),
//! - the exact stability trichotomy on |c_r λ_r^{1/(k−2)}|, sufficient
//!   stability tests from each spectral bound, and regions of attraction
//!   ([`stability`]),
//! - growth of the reachability subspace for the controlled variant
//!   x_{t+1} = A x_t^{k−1} + B u_t ([`reachability`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded use. All types are immutable after
//! construction and all operations are pure functions, safe to call
//! concurrently.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod linalg;
pub mod reachability;
pub mod spectral;
pub mod stability;
pub mod tensor;

pub use spectral::OdecoDecomposition;
pub use tensor::SymTensor;
