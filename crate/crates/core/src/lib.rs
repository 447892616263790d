//! Exact computational tools for string-topology algebra.
//!
//! * [`scalar`], [`graded`], [`operator`]: exact coefficients, graded
//!   tensor words and degree-carrying linear maps with Koszul signs.
//! * [`string_ops`]: finite-window verifiers for Sullivan's relation,
//!   coassociativity, cocommutativity and the algebra axioms.
//! * [`sphere`]: the `Λ(A, U)` model of the loop homology of `S³`.
//! * [`chain`]: finite chain complexes, Smith-normal-form homology,
//!   reduced complexes, chain-level verifiers and filtered inversion.
//! * [`local_systems`]: ℤ/2 local systems with degree on loop spaces.
//! * [`annulus`]: conformal modulus, Möbius normalization and canonical
//!   foliations of annuli in the Riemann sphere.
//! * [`profile`]: radial Hamiltonian profiles and their action bounds.

pub mod annulus;
pub mod chain;
pub mod graded;
pub mod local_systems;
pub mod operator;
pub mod profile;
pub mod scalar;
pub mod sphere;
pub mod string_ops;

pub use graded::{koszul_sign, twist, Degree, GradedVector, Symbol, Word};
pub use operator::{apply_tensor, compose, AlgebraError, GradedMap, SignRule, TensorOperator};
pub use scalar::{Ring, Scalar};
pub use string_ops::{BasisWindow, IdentityReport, Symmetry, Violation};
