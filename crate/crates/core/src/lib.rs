//! Radially symmetric solutions of the modified Fueter-Dirac equation
//! `∂t f + i ∂x f + j ∂y f + k ∂z f = −2v/r`, built by lifting real
//! rational seeds `F = u + i v` to `f(q) = u(t, r) + ι_q v(t, r)`.
//!
//! - [`quat`]: quaternion arithmetic, the `t + r ι` split, the chart, automorphisms
//! - [`seed`]: exact rational seeds, the ring operations, zero radii
//! - [`lift`]: the lift and its symmetry and ring-consistency residuals
//! - [`dirac`]: left/right operators by finite differences and their oracle
//! - [`chart`]: Cauchy-Riemann residuals in `(t, r, α, β)` and invertibility predicates
//! - [`singular`]: Jacobians, singular loci, component counts, dichotomy

pub mod chart;
pub mod dirac;
pub mod error;
pub mod lift;
pub mod quat;
pub mod sampling;
pub mod seed;
pub mod singular;

pub use error::{Error, Result};
pub use lift::LiftedSolution;
pub use quat::{ChartPoint, ImaginaryDecomposition, Quaternion};
pub use seed::{parse_seed, RationalSeed, SeedClass, ZeroRadiusList};
