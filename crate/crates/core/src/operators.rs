//! Vertex and hyperedge p-Laplacians, energies, weighted p-norms, generalized
//! Rayleigh quotients and their gradients.
//!
//! Both sides share one shape. With signed incidence rows `a_t` and weights
//! `w_t` (terms) and `mu_j` (variables):
//!
//! ```text
//! E_p(x)   = sum_t w_t |<a_t, x>|^p
//! N_p(x)   = sum_j mu_j |x_j|^p            (= ||x||_p^p)
//! Lap_p(x)_j = (1/mu_j) sum_t w_t a_tj |<a_t,x>|^(p-2) <a_t,x>
//! ```
//!
//! On the vertex side the terms are hyperedges (`w = 1`, `mu = deg`); on the
//! hyperedge side the terms are vertices (`w = 1/deg`, `mu = 1`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::OrientedHypergraph;
use crate::numeric::{abs_pow, inf_norm, pairwise_sum, signed_pow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Vertex,
    Hyperedge,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Vertex => "vertex",
            Side::Hyperedge => "hyperedge",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(Side::Vertex),
            "hyperedge" => Ok(Side::Hyperedge),
            other => Err(Error::Domain(format!("unknown side {other:?}"))),
        }
    }
}

/// An exponent `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(PExponent(p))
        } else {
            Err(Error::Domain(format!("p must be a finite real >= 1, got {p}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `p = 1` is handled by the nonsmooth code paths.
    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    fn require_smooth(self) -> Result<f64> {
        if self.0 > 1.0 {
            Ok(self.0)
        } else {
            Err(Error::Domain("operator requires p > 1".into()))
        }
    }
}

/// The quotient data of one side of a hypergraph. Cheap to build; the
/// solvers build it once and evaluate it many times.
#[derive(Debug, Clone)]
pub struct RayleighForm {
    side: Side,
    dim: usize,
    terms: Vec<Vec<(usize, f64)>>,
    term_weights: Vec<f64>,
    var_weights: Vec<f64>,
    /// Per variable: `(term, sign)` pairs.
    var_terms: Vec<Vec<(usize, f64)>>,
}

impl RayleighForm {
    pub fn new(g: &OrientedHypergraph, side: Side) -> Self {
        let edge_terms: Vec<Vec<(usize, f64)>> = g
            .hyperedges()
            .iter()
            .map(|e| e.signed_members().map(|(i, s)| (i, s as f64)).collect())
            .collect();
        let vertex_terms: Vec<Vec<(usize, f64)>> = (0..g.n())
            .map(|i| g.incidences(i).iter().map(|&(h, s)| (h, s as f64)).collect())
            .collect();
        let deg: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
        match side {
            Side::Vertex => RayleighForm {
                side,
                dim: g.n(),
                term_weights: vec![1.0; g.m()],
                var_weights: deg,
                terms: edge_terms,
                var_terms: vertex_terms,
            },
            Side::Hyperedge => RayleighForm {
                side,
                dim: g.m(),
                term_weights: deg.iter().map(|d| 1.0 / d).collect(),
                var_weights: vec![1.0; g.m()],
                terms: vertex_terms,
                var_terms: edge_terms,
            },
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Number of variables (`n` or `m`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn term_weights(&self) -> &[f64] {
        &self.term_weights
    }

    pub fn var_weights(&self) -> &[f64] {
        &self.var_weights
    }

    pub fn term(&self, t: usize) -> &[(usize, f64)] {
        &self.terms[t]
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `<a_t, x>` for every term: the boundary (vertex side) or coboundary
    /// (hyperedge side).
    /// `<a_t, x>` per term. A sum within rounding error of zero is returned
    /// as exactly zero, so that `|b|^(p-1)` near `p = 1` does not amplify
    /// cancellation noise.
    pub fn term_values(&self, x: &[f64]) -> Vec<f64> {
        self.terms
            .iter()
            .map(|row| {
                let parts: Vec<f64> = row.iter().map(|&(j, s)| s * x[j]).collect();
                let b = pairwise_sum(&parts);
                let mag: f64 = parts.iter().map(|v| v.abs()).sum();
                if b.abs() <= 8.0 * f64::EPSILON * mag {
                    0.0
                } else {
                    b
                }
            })
            .collect()
    }

    pub fn energy(&self, p: f64, x: &[f64]) -> f64 {
        let tv = self.term_values(x);
        self.energy_from_terms(p, &tv)
    }

    fn energy_from_terms(&self, p: f64, tv: &[f64]) -> f64 {
        let parts: Vec<f64> = tv
            .iter()
            .zip(&self.term_weights)
            .map(|(&b, &w)| w * abs_pow(b, p))
            .collect();
        pairwise_sum(&parts)
    }

    /// `||x||_p^p` with the side's weights.
    pub fn norm_pow(&self, p: f64, x: &[f64]) -> f64 {
        let parts: Vec<f64> = x
            .iter()
            .zip(&self.var_weights)
            .map(|(&v, &mu)| mu * abs_pow(v, p))
            .collect();
        pairwise_sum(&parts)
    }

    pub fn quotient(&self, p: f64, x: &[f64]) -> Result<f64> {
        let den = self.norm_pow(p, x);
        if den == 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(self.energy(p, x) / den)
    }

    /// The p-Laplacian (`p > 1`).
    pub fn laplacian(&self, p: f64, x: &[f64]) -> Vec<f64> {
        let tv = self.term_values(x);
        self.laplacian_from_terms(p, &tv)
    }

    fn laplacian_from_terms(&self, p: f64, tv: &[f64]) -> Vec<f64> {
        let phi: Vec<f64> = tv
            .iter()
            .zip(&self.term_weights)
            .map(|(&b, &w)| w * signed_pow(b, p))
            .collect();
        self.var_terms
            .iter()
            .zip(&self.var_weights)
            .map(|(col, &mu)| {
                let parts: Vec<f64> = col.iter().map(|&(t, s)| s * phi[t]).collect();
                pairwise_sum(&parts) / mu
            })
            .collect()
    }

    /// Gradient of the Rayleigh quotient (`p > 1`, `x != 0`).
    pub fn gradient(&self, p: f64, x: &[f64]) -> Result<Vec<f64>> {
        let den = self.norm_pow(p, x);
        if den == 0.0 {
            return Err(Error::ZeroFunction);
        }
        let tv = self.term_values(x);
        let rq = self.energy_from_terms(p, &tv) / den;
        let lap = self.laplacian_from_terms(p, &tv);
        Ok(lap
            .iter()
            .zip(x)
            .zip(&self.var_weights)
            .map(|((&l, &v), &mu)| p * mu * (l - rq * signed_pow(v, p)) / den)
            .collect())
    }

    /// Value, gradient and eigen-residual in one pass.
    pub(crate) fn evaluate(&self, p: f64, x: &[f64]) -> Evaluation {
        let den = self.norm_pow(p, x);
        let tv = self.term_values(x);
        let rq = self.energy_from_terms(p, &tv) / den;
        let lap = self.laplacian_from_terms(p, &tv);
        let mut grad = Vec::with_capacity(self.dim);
        let mut res = 0.0f64;
        for ((&l, &v), &mu) in lap.iter().zip(x).zip(&self.var_weights) {
            let r = l - rq * signed_pow(v, p);
            res = res.max(r.abs());
            grad.push(p * mu * r / den);
        }
        let scale = inf_norm(x).powf(p - 1.0);
        Evaluation {
            value: rq,
            grad,
            residual: res / scale,
        }
    }

    /// `||Lap_p x - lambda |x|^(p-2) x||_inf`, normalized so that it does not
    /// depend on the scale of `x` (`p > 1`).
    pub fn residual(&self, p: f64, lambda: f64, x: &[f64]) -> Result<f64> {
        let scale = inf_norm(x);
        if scale == 0.0 {
            return Err(Error::ZeroFunction);
        }
        let lap = self.laplacian(p, x);
        let res = lap
            .iter()
            .zip(x)
            .map(|(&l, &v)| (l - lambda * signed_pow(v, p)).abs())
            .fold(0.0f64, f64::max);
        Ok(res / scale.powf(p - 1.0))
    }

    /// Dense Hessians of `E_p` and `N_p` (`p > 1`); entries may be infinite
    /// for `p < 2` at vanishing terms.
    pub(crate) fn hessians(&self, p: f64, x: &[f64]) -> (nalgebra::DMatrix<f64>, Vec<f64>) {
        let tv = self.term_values(x);
        let mut he = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for (t, row) in self.terms.iter().enumerate() {
            let c = p * (p - 1.0) * self.term_weights[t] * tv[t].abs().powf(p - 2.0);
            for &(a, sa) in row {
                for &(b, sb) in row {
                    he[(a, b)] += c * sa * sb;
                }
            }
        }
        let hn = x
            .iter()
            .zip(&self.var_weights)
            .map(|(&v, &mu)| p * (p - 1.0) * mu * v.abs().powf(p - 2.0))
            .collect();
        (he, hn)
    }
}

pub(crate) struct Evaluation {
    pub value: f64,
    pub grad: Vec<f64>,
    pub residual: f64,
}

fn smooth_p(p: f64) -> Result<f64> {
    PExponent::new(p)?.require_smooth()
}

/// Per hyperedge: `sum_{h_in} f - sum_{h_out} f`.
pub fn boundary(g: &OrientedHypergraph, f: &[f64]) -> Result<Vec<f64>> {
    let form = RayleighForm::new(g, Side::Vertex);
    form.check_dim(f)?;
    Ok(form.term_values(f))
}

/// Per vertex: `sum_{h: i in h_in} gamma(h) - sum_{h: i in h_out} gamma(h)`.
pub fn coboundary(g: &OrientedHypergraph, gamma: &[f64]) -> Result<Vec<f64>> {
    let form = RayleighForm::new(g, Side::Hyperedge);
    form.check_dim(gamma)?;
    Ok(form.term_values(gamma))
}

/// The normalized vertex p-Laplacian applied to `f` (`p > 1`).
pub fn apply_vertex_p_laplacian(g: &OrientedHypergraph, p: f64, f: &[f64]) -> Result<Vec<f64>> {
    p_laplacian(g, p, f, Side::Vertex)
}

/// The normalized hyperedge p-Laplacian applied to `gamma` (`p > 1`).
pub fn apply_hyperedge_p_laplacian(
    g: &OrientedHypergraph,
    p: f64,
    gamma: &[f64],
) -> Result<Vec<f64>> {
    p_laplacian(g, p, gamma, Side::Hyperedge)
}

pub fn p_laplacian(g: &OrientedHypergraph, p: f64, x: &[f64], side: Side) -> Result<Vec<f64>> {
    let p = smooth_p(p)?;
    let form = RayleighForm::new(g, side);
    form.check_dim(x)?;
    Ok(form.laplacian(p, x))
}

/// `E_p`: `sum_h |b_h|^p` (vertex side) or `sum_i |c_i|^p / deg(i)` (hyperedge side).
pub fn energy(g: &OrientedHypergraph, p: f64, x: &[f64], side: Side) -> Result<f64> {
    let p = PExponent::new(p)?.get();
    let form = RayleighForm::new(g, side);
    form.check_dim(x)?;
    Ok(form.energy(p, x))
}

/// Degree-weighted p-norm (vertex side) or plain p-norm (hyperedge side).
pub fn norm_p(g: &OrientedHypergraph, p: f64, x: &[f64], side: Side) -> Result<f64> {
    let p = PExponent::new(p)?.get();
    let form = RayleighForm::new(g, side);
    form.check_dim(x)?;
    Ok(form.norm_pow(p, x).powf(1.0 / p))
}

pub fn rayleigh_quotient(g: &OrientedHypergraph, p: f64, x: &[f64], side: Side) -> Result<f64> {
    let p = PExponent::new(p)?.get();
    let form = RayleighForm::new(g, side);
    form.check_dim(x)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("function has non-finite entries".into()));
    }
    form.quotient(p, x)
}

pub fn grad_rq(g: &OrientedHypergraph, p: f64, x: &[f64], side: Side) -> Result<Vec<f64>> {
    let p = smooth_p(p)?;
    let form = RayleighForm::new(g, side);
    form.check_dim(x)?;
    form.gradient(p, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> OrientedHypergraph {
        OrientedHypergraph::new(2, [(vec![0], vec![1])]).unwrap()
    }

    fn triangle() -> OrientedHypergraph {
        OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap()
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary(&triangle(), &[1.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, -1.0]);
        assert_eq!(boundary(&triangle(), &[0.0; 3]).unwrap(), vec![0.0; 3]);
        assert_eq!(boundary(&edge(), &[2.5, 0.5]).unwrap(), vec![2.0]);
        assert!(matches!(boundary(&edge(), &[1.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn coboundary_examples() {
        assert_eq!(coboundary(&triangle(), &[1.0, 0.0, 0.0]).unwrap(), vec![1.0, -1.0, 0.0]);
        assert_eq!(coboundary(&triangle(), &[0.0; 3]).unwrap(), vec![0.0; 3]);
        assert_eq!(coboundary(&edge(), &[3.0]).unwrap(), vec![3.0, -3.0]);
    }

    #[test]
    fn vertex_laplacian_examples() {
        assert_eq!(apply_vertex_p_laplacian(&edge(), 2.0, &[1.0, 0.0]).unwrap(), vec![1.0, -1.0]);
        assert_eq!(apply_vertex_p_laplacian(&triangle(), 3.0, &[0.0; 3]).unwrap(), vec![0.0; 3]);
        assert_eq!(apply_vertex_p_laplacian(&triangle(), 2.0, &[1.0; 3]).unwrap(), vec![0.0; 3]);
        assert!(matches!(
            apply_vertex_p_laplacian(&edge(), 1.0, &[1.0, 0.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn hyperedge_laplacian_examples() {
        assert_eq!(apply_hyperedge_p_laplacian(&edge(), 2.0, &[1.0]).unwrap(), vec![2.0]);
        assert_eq!(apply_hyperedge_p_laplacian(&edge(), 2.5, &[0.0]).unwrap(), vec![0.0]);
        assert_eq!(apply_hyperedge_p_laplacian(&triangle(), 2.0, &[1.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn energies_and_norms() {
        let e = edge();
        assert_eq!(energy(&e, 2.0, &[1.0, 0.0], Side::Vertex).unwrap(), 1.0);
        assert_eq!(norm_p(&e, 2.0, &[1.0, 0.0], Side::Vertex).unwrap(), 1.0);
        assert_eq!(energy(&e, 2.0, &[0.0, 0.0], Side::Vertex).unwrap(), 0.0);
        let t = triangle();
        assert_eq!(energy(&t, 1.0, &[1.0, 0.0, 0.0], Side::Vertex).unwrap(), 2.0);
        assert_eq!(norm_p(&t, 1.0, &[1.0, 0.0, 0.0], Side::Vertex).unwrap(), 2.0);
    }

    #[test]
    fn rayleigh_quotient_of_deltas() {
        let g = OrientedHypergraph::new(
            4,
            [(vec![0, 1], vec![2]), (vec![3], vec![0]), (vec![1, 2, 3], vec![])],
        )
        .unwrap();
        for p in [1.0, 1.5, 2.0, 3.7] {
            for i in 0..4 {
                let mut f = vec![0.0; 4];
                f[i] = -2.0;
                assert!((rayleigh_quotient(&g, p, &f, Side::Vertex).unwrap() - 1.0).abs() < 1e-15);
            }
            for h in 0..3 {
                let mut gamma = vec![0.0; 3];
                gamma[h] = 1.0;
                let expected: f64 = g.hyperedges()[h]
                    .signed_members()
                    .map(|(i, _)| 1.0 / g.degrees()[i] as f64)
                    .sum();
                let rq = rayleigh_quotient(&g, p, &gamma, Side::Hyperedge).unwrap();
                assert!((rq - expected).abs() < 1e-14);
            }
        }
        assert_eq!(rayleigh_quotient(&triangle(), 2.3, &[1.0; 3], Side::Vertex).unwrap(), 0.0);
        assert_eq!(
            rayleigh_quotient(&triangle(), 2.0, &[0.0; 3], Side::Vertex),
            Err(Error::ZeroFunction)
        );
    }

    #[test]
    fn gradient_vanishes_on_constant_triangle() {
        let grad = grad_rq(&triangle(), 2.0, &[1.0; 3], Side::Vertex).unwrap();
        assert!(grad.iter().all(|g| g.abs() < 1e-15));
        assert_eq!(grad_rq(&triangle(), 2.0, &[0.0; 3], Side::Vertex), Err(Error::ZeroFunction));
        assert!(matches!(grad_rq(&triangle(), 1.0, &[1.0; 3], Side::Vertex), Err(Error::Domain(_))));
    }

    #[test]
    fn residual_of_constant_on_triangle() {
        let form = RayleighForm::new(&triangle(), Side::Vertex);
        assert_eq!(form.residual(2.7, 0.0, &[1.0; 3]).unwrap(), 0.0);
    }
}
