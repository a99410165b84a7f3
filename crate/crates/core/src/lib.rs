//! Bezier coefficients of dual bivariate Bernstein polynomials on the
//! triangle, and their use in constrained L2 approximation of triangular
//! Bezier patches.
//!
//! The central object is the table of coefficients `e^k_l(alpha, n)` of the
//! dual basis `D^n_k = sum_l e^k_l B^n_l`, biorthogonal to the Bernstein
//! basis under the Jacobi inner product
//! `<f, g> = A_alpha * int_T x1^a1 x2^a2 (1-x1-x2)^a3 f g`.
//! [`compute_table`] builds it with block recurrences in `O(n^4)`;
//! [`approx::solve`] uses the constrained variant to find the best degree-`m`
//! polynomial patch for a rational or polynomial source patch with fixed
//! boundary control points.

pub mod approx;
pub mod dual;
pub mod error;
pub mod index;
pub mod oracles;
pub mod patch;
pub mod quadrature;
pub mod special;

pub use approx::{solve, ApproxProblem, ApproxSolution};
pub use dual::{compute_table, compute_table_symmetric, constrained_table, AlphaParams, ConstrainedCoeffTable};
pub use error::{Error, Result};
pub use index::{CoeffTable, ConstraintVector, IndexDomain, MultiIndex};
pub use patch::{DomainPoint, TriPatch};
