//! Dense linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::hypergraph::IncidenceMatrix;
use crate::operators::Side;

/// Relative singular-value threshold below which a direction counts as zero.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Eigen-decomposition of a symmetric matrix, values ascending, eigenvectors
/// as columns in the same order.
pub fn symmetric_eigen(a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Orthonormal bases of `range(A)` and `range(A)^⊥ = ker(A^T)` for an
/// `r x c` matrix, split by the rank threshold.
pub struct RangeSplit {
    pub range: Vec<DVector<f64>>,
    pub complement: Vec<DVector<f64>>,
}

pub fn range_split(a: &DMatrix<f64>) -> RangeSplit {
    let (r, c) = a.shape();
    if r == 0 {
        return RangeSplit {
            range: Vec::new(),
            complement: Vec::new(),
        };
    }
    // SVD of A^T padded to at least r rows, so that V^T is a full r x r basis.
    let rows = c.max(r);
    let mut at = DMatrix::zeros(rows, r);
    for i in 0..r {
        for j in 0..c {
            at[(j, i)] = a[(i, j)];
        }
    }
    let svd = at.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max();
    let mut range = Vec::new();
    let mut complement = Vec::new();
    for k in 0..r {
        let v = vt.row(k).transpose();
        if smax > 0.0 && svd.singular_values[k] > RANK_THRESHOLD * smax {
            range.push(v);
        } else {
            complement.push(v);
        }
    }
    RangeSplit { range, complement }
}

/// Integer basis, by exact rational elimination, of the functions with zero
/// boundary (`Side::Vertex`, `ker(A^T)`) or zero coboundary
/// (`Side::Hyperedge`, `ker(A)`), where `A` is the incidence matrix.
pub fn integer_kernel(inc: &IncidenceMatrix, side: Side) -> Vec<Vec<f64>> {
    let rows = side == Side::Hyperedge;
    // Build the matrix whose kernel we want: M x = 0.
    let (r, c) = if rows {
        (inc.nrows(), inc.ncols())
    } else {
        (inc.ncols(), inc.nrows())
    };
    let entry = |i: usize, j: usize| -> i64 {
        if rows {
            inc.get(i, j) as i64
        } else {
            inc.get(j, i) as i64
        }
    };
    let mut m: Vec<Vec<BigRational>> = (0..r)
        .map(|i| (0..c).map(|j| BigRational::from_integer(entry(i, j).into())).collect())
        .collect();

    // Reduced row echelon form.
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(piv) = (row..r).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        let inv = BigRational::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..r {
            if i != row && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in 0..c {
                    let delta = factor.clone() * m[row][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == r {
            break;
        }
    }

    let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); c];
            v[fc] = BigRational::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[pr][fc].clone();
            }
            let lcm = v
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
            let g = ints
                .iter()
                .fold(BigInt::zero(), |acc, x| acc.gcd(x));
            ints.iter()
                .map(|x| (x / &g).to_f64().expect("small kernel entries"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::OrientedHypergraph;

    #[test]
    fn eigen_sorted() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(a.clone());
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let v = vecs.column(1);
        let av = &a * v;
        assert!((av - v * 3.0).norm() < 1e-13);
    }

    #[test]
    fn kernel_of_triangle() {
        let t = OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap();
        let inc = t.incidence_matrix();
        let k = integer_kernel(&inc, Side::Vertex);
        assert_eq!(k.len(), 1);
        assert!(k[0].iter().all(|&x| x == k[0][0]) && k[0][0] != 0.0);
        let split = range_split(&inc.to_dmatrix());
        assert_eq!((split.range.len(), split.complement.len()), (2, 1));
        // Row kernel: gamma with zero coboundary.
        assert_eq!(integer_kernel(&inc, Side::Hyperedge).len(), 1);
    }

    #[test]
    fn kernel_of_signless_triangle_is_trivial() {
        let t = OrientedHypergraph::new(3, [(vec![0, 1], vec![]), (vec![1, 2], vec![]), (vec![0, 2], vec![])])
            .unwrap();
        assert!(integer_kernel(&t.incidence_matrix(), Side::Vertex).is_empty());
        assert!(range_split(&t.incidence_matrix().to_dmatrix()).complement.is_empty());
    }
}
