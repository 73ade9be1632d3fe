//! Oracles shared by the integration tests. Everything here works from the
//! hyperedge lists directly and does not call the crate's operators or
//! solvers.

#![allow(dead_code)]

use hyperplap::{OrientedHypergraph, Side};
use nalgebra::DMatrix;

/// Signed incidence, `+1` for inputs and `-1` for outputs, as `n x m`.
pub fn incidence(g: &OrientedHypergraph) -> Vec<Vec<f64>> {
    let mut b = vec![vec![0.0; g.m()]; g.n()];
    for (h, e) in g.hyperedges().iter().enumerate() {
        for &i in &e.inputs {
            b[i][h] = 1.0;
        }
        for &i in &e.outputs {
            b[i][h] = -1.0;
        }
    }
    b
}

pub fn degrees(g: &OrientedHypergraph) -> Vec<f64> {
    incidence(g)
        .iter()
        .map(|row| row.iter().filter(|v| **v != 0.0).count() as f64)
        .collect()
}

/// `(E_p, N_p)` evaluated straight from the definitions.
pub fn energy_norm(g: &OrientedHypergraph, p: f64, x: &[f64], side: Side) -> (f64, f64) {
    let b = incidence(g);
    let deg = degrees(g);
    let (n, m) = (g.n(), g.m());
    match side {
        Side::Vertex => {
            let e = (0..m)
                .map(|h| (0..n).map(|i| b[i][h] * x[i]).sum::<f64>().abs().powf(p))
                .sum();
            let nn = (0..n).map(|i| deg[i] * x[i].abs().powf(p)).sum();
            (e, nn)
        }
        Side::Hyperedge => {
            let e = (0..n)
                .map(|i| (0..m).map(|h| b[i][h] * x[h]).sum::<f64>().abs().powf(p) / deg[i])
                .sum();
            let nn = (0..m).map(|h| x[h].abs().powf(p)).sum();
            (e, nn)
        }
    }
}

pub fn quotient(g: &OrientedHypergraph, p: f64, x: &[f64], side: Side) -> f64 {
    let (e, n) = energy_norm(g, p, x, side);
    e / n
}

/// The symmetric matrix whose eigenvalues are the `p = 2` spectrum:
/// `D^-1/2 B B^T D^-1/2` (vertex side) or `B^T D^-1 B` (hyperedge side).
pub fn p2_matrix(g: &OrientedHypergraph, side: Side) -> Vec<Vec<f64>> {
    let b = incidence(g);
    let deg = degrees(g);
    let (n, m) = (g.n(), g.m());
    match side {
        Side::Vertex => (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..m).map(|h| b[i][h] * b[j][h]).sum::<f64>() / (deg[i] * deg[j]).sqrt()
                    })
                    .collect()
            })
            .collect(),
        Side::Hyperedge => (0..m)
            .map(|h| {
                (0..m)
                    .map(|k| (0..n).map(|i| b[i][h] * b[i][k] / deg[i]).sum())
                    .collect()
            })
            .collect(),
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn oracle_spectrum(g: &OrientedHypergraph, side: Side) -> Vec<f64> {
    jacobi_eigenvalues(p2_matrix(g, side))
}

/// Orthonormal bases of the span of the term vectors and of its orthogonal
/// complement (the kernel), on the vertex side.
pub fn span_and_kernel(g: &OrientedHypergraph) -> (DMatrix<f64>, DMatrix<f64>) {
    let b = incidence(g);
    let (n, m) = (g.n(), g.m());
    let bm = DMatrix::from_fn(n, m, |i, h| b[i][h]);
    let gram = &bm * bm.transpose();
    let eig = gram.symmetric_eigen();
    let scale = eig.eigenvalues.amax().max(1.0);
    let (mut span, mut kernel) = (Vec::new(), Vec::new());
    for k in 0..n {
        let col = eig.eigenvectors.column(k).into_owned();
        if eig.eigenvalues[k] > 1e-9 * scale {
            span.push(col);
        } else {
            kernel.push(col);
        }
    }
    let cols = |v: Vec<_>| {
        if v.is_empty() {
            DMatrix::zeros(n, 0)
        } else {
            DMatrix::from_columns(&v)
        }
    };
    (cols(span), cols(kernel))
}

/// Minimizes a convex function of `d` variables by compass search.
fn compass(d: usize, f: impl Fn(&[f64]) -> f64, start: f64) -> (Vec<f64>, f64) {
    let mut c = vec![0.0; d];
    let mut best = f(&c);
    let mut step = start;
    while step > 1e-13 {
        let mut moved = false;
        for a in 0..d {
            for s in [1.0, -1.0] {
                let mut t = c.clone();
                t[a] += s * step;
                let v = f(&t);
                if v < best {
                    best = v;
                    c = t;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (c, best)
}

/// `E_p(f) / min_g N_p(f - g)` over the kernel, vertex side.
fn shifted_ratio(g: &OrientedHypergraph, p: f64, f: &[f64], kernel: &DMatrix<f64>) -> f64 {
    let (e, _) = energy_norm(g, p, f, Side::Vertex);
    let d = kernel.ncols();
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let norm = |c: &[f64]| {
        let r: Vec<f64> = (0..f.len())
            .map(|i| f[i] - (0..d).map(|a| kernel[(i, a)] * c[a]).sum::<f64>())
            .collect();
        energy_norm(g, p, &r, Side::Vertex).1
    };
    e / compass(d, norm, scale.max(1e-12)).1
}

/// Smallest nonzero vertex eigenvalue at `p` by grid search over the unit
/// sphere of the span (dimension at most 3), refined by compass search.
pub fn grid_lambda_min(g: &OrientedHypergraph, p: f64) -> f64 {
    let (span, kernel) = span_and_kernel(g);
    let r = span.ncols();
    let value = |y: &[f64]| {
        let f: Vec<f64> = (0..g.n())
            .map(|i| (0..r).map(|a| span[(i, a)] * y[a]).sum())
            .collect();
        shifted_ratio(g, p, &f, &kernel)
    };
    let point = |angles: &[f64]| -> Vec<f64> {
        match r {
            1 => vec![1.0],
            2 => vec![angles[0].cos(), angles[0].sin()],
            3 => vec![
                angles[0].sin() * angles[1].cos(),
                angles[0].sin() * angles[1].sin(),
                angles[0].cos(),
            ],
            _ => panic!("grid oracle supports spans of dimension <= 3"),
        }
    };
    let (mut best, mut at) = (f64::INFINITY, vec![0.0; r.saturating_sub(1)]);
    let steps = match r {
        1 => 1,
        2 => 2000,
        _ => 120,
    };
    let pi = std::f64::consts::PI;
    for a in 0..steps {
        let inner = if r == 3 { 2 * steps } else { 1 };
        for b in 0..inner {
            let angles = [pi * (a as f64 + 0.5) / steps as f64, pi * b as f64 / steps as f64];
            let v = value(&point(&angles));
            if v < best {
                best = v;
                at = angles[..r.saturating_sub(1)].to_vec();
            }
        }
    }
    if r >= 2 {
        let base = at.clone();
        let (_, v) = compass(
            r - 1,
            |delta| {
                let angles: Vec<f64> = base.iter().zip(delta).map(|(a, d)| a + d).collect();
                value(&point(&angles))
            },
            pi / steps as f64,
        );
        best = best.min(v);
    }
    best
}
