//! Verification toolkit for first-order stochastic dominance between a
//! diversified portfolio `Σ θᵢ·Xᵢ` of independent heavy-tailed risks and the
//! corresponding concentrated portfolio `Σ Iᵢ·Xᵢ` that places all exposure on
//! one risk drawn at random with the same weights.
//!
//! The library is organized around a small pipeline:
//!
//! * [`dist`] — the risk catalog: survival functions, inverse-transform
//!   samplers, convex transforms, exact lattice support.
//! * [`subscale`] — pointwise and global subscalability checks
//!   (`θ·F̄(x) ≤ F̄(x/θ)`), analytic certificates, regions and thresholds.
//! * [`onebasket`] — portfolio weights on the open simplex, subset-weight
//!   enumeration and the per-(risk, subset-weight) condition report.
//! * [`convolve`] — exact rational convolution of weighted lattice risks with
//!   rigorous truncation enclosures, plus an independent brute-force oracle.
//! * [`montecarlo`] — seeded, reproducible Monte Carlo estimation with
//!   distribution-free confidence bounds.
//! * [`verify`] — dominance verdicts: exact interval comparison, statistical
//!   comparison, counterexample hunting, reinsurance and transform checks.

pub mod convolve;
pub mod dist;
pub mod error;
pub mod montecarlo;
pub mod onebasket;
pub mod rational;
pub mod subscale;
pub mod verify;

pub use convolve::{BoundedSurvival, LatticePmf};
pub use dist::{ConvexTransform, MeanFiniteness, Risk};
pub use error::Error;
pub use montecarlo::{BoundKind, ConvexTestFunction, MCEstimate};
pub use onebasket::{ConditionReport, PortfolioSpec, WeightVector};
pub use rational::Rat;
pub use subscale::{ScalingFactor, SubscalabilityVerdict, Threshold, VerdictStatus};
pub use verify::{DominanceStatus, DominanceVerdict};
