//! Optimal penalty models isolating bitstrings of a fixed Hamming weight.
//!
//! The crate builds the square-of-deviation QUBO `E (r - |x|)^2` and its Ising
//! counterpart, picks the energy scale that maximizes the minimum penalty
//! under coefficient bounds, and checks those claims two ways: exhaustive
//! exact enumeration over all assignments, and a gap-maximizing linear
//! program over every bounded model that vanishes on the weight-`r` class.
//!
//! All coefficients and energies are exact rationals. Floating point only
//! appears inside the LP solver.

pub mod analysis;
pub mod bits;
pub mod builders;
pub mod certify;
pub mod enumerate;
pub mod io;
pub mod lp;
pub mod model;
pub mod rational;

pub use bits::Bitstring;
pub use builders::{
    build_ising_hamming, build_qubo_hamming, optimal_ising_scale, optimal_qubo_scale, Binding,
    CoefficientBounds, IsingBounds, QuboBounds, ScaleResult,
};
pub use enumerate::{min_penalty, spectral_gap, weight_profile, PenaltyReport, WeightProfile};
pub use model::{ising_to_qubo, qubo_to_ising, IsingModel, Model, ModelKind, PenaltyModel, Qubo};
pub use rational::Rational;
