//! Eigenpairs of the p-Laplacians.
//!
//! What is computed, and how:
//!
//! * `p = 2`: every eigenpair, from a dense symmetric eigensolver
//!   ([`spectrum_p2`]).
//! * `p > 1`: the smallest and largest eigenvalues as the extrema of the
//!   Rayleigh quotient ([`extremal_eigenpair`]), by multi-start projected
//!   gradient on the weighted p-sphere with a Newton polish. Each pair carries
//!   its eigen-residual.
//! * `p = 1`: the extremal values exactly ([`extremal_p1`]) and multiplier
//!   certificates for candidate eigenpairs ([`verify_1lap_eigenpair`]).
//! * all `p >= 1`: the smallest nonzero eigenvalue through its
//!   characterization as `lambda_{d+1}` ([`lambda_min_smallest_nonzero`]).
//!
//! Intermediate min-max eigenvalues for `p != 2` are not computed.

mod dense;
mod lambda_min;
mod one_lap;
mod variational;

use serde::{Deserialize, Serialize};

pub use dense::{eigenvalue_clusters, spectrum_p2};
pub use lambda_min::{
    kernel_dimension, lambda_min_lower_bound, lambda_min_smallest_nonzero, LambdaMin,
    LambdaMinBounds,
};
pub use one_lap::{
    extremal_p1, verify_1lap_eigenpair, verify_1lap_eigenpair_with, OneLapCertificate,
    OneLapVerdict,
};
pub use variational::extremal_eigenpair;

use crate::error::Result;
use crate::hypergraph::OrientedHypergraph;
use crate::operators::{PExponent, RayleighForm, Side};
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Min,
    Max,
}

/// An eigenvalue with its eigenfunction and a numerical certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub p: f64,
    pub side: Side,
    pub value: f64,
    pub function: Vec<f64>,
    /// Scale-free eigen-residual for `p > 1`; certificate slack at `p = 1`.
    pub residual: f64,
    /// False when the solver stopped above its residual tolerance.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub starts: usize,
    pub max_iter: usize,
    pub tol_residual: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Backtracking factor in `(0, 1)`.
    pub backtrack: f64,
    pub initial_step: f64,
    pub rng_seed: u64,
    #[serde(skip, default)]
    pub exec: Exec,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 24,
            max_iter: 5000,
            tol_residual: 1e-8,
            armijo: 1e-4,
            backtrack: 0.5,
            initial_step: 1.0,
            rng_seed: 0,
            exec: Exec::default(),
        }
    }
}

/// Scale-free eigen-residual `||Lap_p f - value |f|^(p-2) f||_inf` (`p > 1`).
pub fn residual(
    g: &OrientedHypergraph,
    p: f64,
    value: f64,
    f: &[f64],
    side: Side,
) -> Result<f64> {
    let p = PExponent::new(p)?;
    if p.is_one() {
        return Err(crate::Error::Domain("residual requires p > 1".into()));
    }
    let form = RayleighForm::new(g, side);
    form.check_dim(f)?;
    form.residual(p.get(), value, f)
}

/// Smallest and largest eigenpairs at any `p >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    pub min: EigenPair,
    pub max: EigenPair,
}

impl Extremes {
    pub fn certified(&self, tol: f64) -> bool {
        self.min.converged
            && self.max.converged
            && self.min.residual <= tol
            && self.max.residual <= tol
    }
}

/// Smallest and largest eigenpairs for any `p >= 1`: dense at `p = 2`, exact
/// enumeration at `p = 1`, variational otherwise.
pub fn extremal_pairs(
    g: &OrientedHypergraph,
    p: f64,
    side: Side,
    cfg: &SolverConfig,
) -> Result<Extremes> {
    let pe = PExponent::new(p)?;
    if pe.is_one() {
        return Ok(Extremes {
            min: extremal_p1(g, side, Which::Min)?,
            max: extremal_p1(g, side, Which::Max)?,
        });
    }
    if p == 2.0 {
        let spec = spectrum_p2(g, side);
        if let (Some(lo), Some(hi)) = (spec.first(), spec.last()) {
            return Ok(Extremes {
                min: lo.clone(),
                max: hi.clone(),
            });
        }
    }
    Ok(Extremes {
        min: extremal_eigenpair(g, p, side, Which::Min, cfg)?,
        max: extremal_eigenpair(g, p, side, Which::Max, cfg)?,
    })
}
