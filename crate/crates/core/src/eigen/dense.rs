use nalgebra::DMatrix;

use super::EigenPair;
use crate::hypergraph::OrientedHypergraph;
use crate::linalg::symmetric_eigen;
use crate::operators::{RayleighForm, Side};

/// All eigenpairs of the `p = 2` operator, values ascending.
///
/// Vertex side: `D^{-1/2} A A^T D^{-1/2}` with eigenfunctions mapped back by
/// `D^{-1/2}`. Hyperedge side: `A^T D^{-1} A`.
pub fn spectrum_p2(g: &OrientedHypergraph, side: Side) -> Vec<EigenPair> {
    let a = g.incidence_matrix().to_dmatrix();
    let deg: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
    let (values, vectors, scale): (Vec<f64>, DMatrix<f64>, Vec<f64>) = match side {
        Side::Vertex => {
            let s: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
            let scaled = DMatrix::from_fn(g.n(), g.m(), |i, h| a[(i, h)] * s[i]);
            let (v, w) = symmetric_eigen(&scaled * scaled.transpose());
            (v, w, s)
        }
        Side::Hyperedge => {
            let s: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
            let scaled = DMatrix::from_fn(g.n(), g.m(), |i, h| a[(i, h)] * s[i]);
            let (v, w) = symmetric_eigen(scaled.transpose() * &scaled);
            (v, w, vec![1.0; g.m()])
        }
    };
    let form = RayleighForm::new(g, side);
    values
        .iter()
        .enumerate()
        .map(|(k, &value)| {
            let function: Vec<f64> = (0..scale.len())
                .map(|i| vectors[(i, k)] * scale[i])
                .collect();
            let residual = form
                .residual(2.0, value, &function)
                .unwrap_or(f64::INFINITY);
            EigenPair {
                p: 2.0,
                side,
                value,
                function,
                residual,
                converged: true,
            }
        })
        .collect()
}

/// Groups sorted eigenvalues into clusters whose consecutive gaps are at most
/// `gap_tol`. Returns `(first, last)` zero-based index ranges.
pub fn eigenvalue_clusters(values: &[f64], gap_tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap_tol {
            if k > start {
                out.push((start, k - 1));
            }
            start = k;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(g: &OrientedHypergraph, side: Side) -> Vec<f64> {
        spectrum_p2(g, side).iter().map(|e| e.value).collect()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn small_spectra() {
        let edge = OrientedHypergraph::new(2, [(vec![0], vec![1])]).unwrap();
        assert!(close(&values(&edge, Side::Vertex), &[0.0, 2.0]));
        assert!(close(&values(&edge, Side::Hyperedge), &[2.0]));
        let tri = OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap();
        assert!(close(&values(&tri, Side::Vertex), &[0.0, 1.5, 1.5]));
        let signless =
            OrientedHypergraph::new(3, [(vec![0, 1], vec![]), (vec![1, 2], vec![]), (vec![0, 2], vec![])])
                .unwrap();
        assert!(close(&values(&signless, Side::Vertex), &[0.5, 0.5, 2.0]));
        for e in spectrum_p2(&tri, Side::Vertex) {
            assert!(e.residual < 1e-12);
        }
    }

    #[test]
    fn clusters() {
        assert_eq!(
            eigenvalue_clusters(&[0.0, 1.5, 1.5 + 1e-9, 2.0], 1e-7),
            vec![(0, 0), (1, 2), (3, 3)]
        );
        assert!(eigenvalue_clusters(&[], 1e-7).is_empty());
    }
}
