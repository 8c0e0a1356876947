//! Exact shadowing analysis for finite metric dynamical systems.
//!
//! A system is a finite metric space together with a permutation of its
//! points. At every pair of scales `(eps, delta)` the crate decides which
//! points have every `delta`-pseudo-orbit through them `eps`-shadowed by a
//! true orbit, and computes the companion objects around that question:
//! chain classes, return times, continuity and equicontinuity moduli,
//! distality margins, degenerate (singleton-component) points and clopen
//! shadowing certificates.
//!
//! All distances are exact rationals, so every threshold comparison is
//! exact and results are piecewise constant between realized distances.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gallery;
pub mod io;
pub mod metric;
pub mod pointset;
pub mod rational;
pub mod report;
pub mod shadow;

pub use dynamics::{DynSystem, PairOrbitSummary, PseudoOrbitGraph};
pub use error::{Error, Result};
pub use metric::FiniteMetricSpace;
pub use pointset::PointSet;
pub use rational::Rational;
