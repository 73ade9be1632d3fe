//! Dense two-phase simplex with Bland's rule for
//! `min c^T x  s.t.  A x = b, x >= 0`.
//!
//! Generic over the scalar: `f64` (comparisons against a `1e-9` slack) or
//! exact `BigRational` (comparisons against zero).

use num_rational::BigRational;
use num_traits::Zero;

pub trait LpScalar:
    Clone
    + PartialOrd
    + std::fmt::Debug
    + Zero
    + num_traits::One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    /// Values within this distance of zero are treated as zero.
    fn tolerance() -> Self;

    fn from_int(v: i64) -> Self;

    fn is_pos(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_neg(&self) -> bool {
        *self < -Self::tolerance()
    }
}

impl LpScalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl LpScalar for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    width: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, r: usize, col: usize) {
        let pv = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / pv.clone();
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (x, p) in self.obj.iter_mut().zip(&prow) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
        self.basis[r] = col;
    }

    /// Runs simplex iterations over the columns flagged in `allowed`.
    /// Returns false if the objective is unbounded below.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.width).find(|&j| allowed[j] && self.obj[j].is_neg());
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_pos() {
                    let ratio = row[self.width].clone() / row[col].clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

/// Solves the program. Rows with a negative right-hand side are negated.
pub fn solve<T: LpScalar>(lp: &LinearProgram<T>) -> LpOutcome<T> {
    let m = lp.b.len();
    let n = lp.c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (arow, bi)) in lp.a.iter().zip(&lp.b).enumerate() {
        let flip = *bi < T::zero();
        let mut row: Vec<T> = arow
            .iter()
            .map(|x| if flip { -x.clone() } else { x.clone() })
            .collect();
        row.resize(n, T::zero());
        for k in 0..m {
            row.push(if k == i { T::one() } else { T::zero() });
        }
        row.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(row);
    }
    // Phase 1 objective: sum of artificials, expressed in non-basic columns.
    let mut obj = vec![T::zero(); width + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] = obj[j].clone() - row[j].clone();
        }
        obj[width] = obj[width].clone() - row[width].clone();
    }
    let mut tab = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        width,
    };
    let all = vec![true; width];
    tab.optimize(&all);
    if (-tab.obj[width].clone()).is_pos() {
        return LpOutcome::Infeasible;
    }
    // Drive artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !tab.rows[r][j].clone().abs_tol_zero()) {
                tab.pivot(r, col);
            } else {
                tab.rows.remove(r);
                tab.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    // Phase 2.
    let mut obj = vec![T::zero(); width + 1];
    obj[..n].clone_from_slice(&lp.c);
    for (row, &bcol) in tab.rows.iter().zip(&tab.basis) {
        let cb = lp.c[bcol].clone();
        if !cb.is_zero() {
            for (o, x) in obj.iter_mut().zip(row) {
                *o = o.clone() - cb.clone() * x.clone();
            }
        }
    }
    tab.obj = obj;
    let allowed: Vec<bool> = (0..width).map(|j| j < n).collect();
    if !tab.optimize(&allowed) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (row, &bcol) in tab.rows.iter().zip(&tab.basis) {
        if bcol < n {
            x[bcol] = row[width].clone();
        }
    }
    let value = -tab.obj[width].clone();
    LpOutcome::Optimal { x, value }
}

/// A point of `{A x = b, x >= 0}`, or `None` when the set is empty.
pub fn feasible_point<T: LpScalar>(a: Vec<Vec<T>>, b: Vec<T>, n: usize) -> Option<Vec<T>> {
    let lp = LinearProgram {
        a,
        b,
        c: vec![T::zero(); n],
    };
    match solve(&lp) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

trait AbsTolZero {
    fn abs_tol_zero(self) -> bool;
}

impl<T: LpScalar> AbsTolZero for T {
    fn abs_tol_zero(self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_optimum() {
        // min -x - y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
        let lp = LinearProgram {
            a: vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]],
            b: vec![4.0, 6.0],
            c: vec![-1.0, -1.0, 0.0, 0.0],
        };
        match solve(&lp) {
            LpOutcome::Optimal { x, value } => {
                assert!((value + 2.8).abs() < 1e-12);
                assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_rational_optimum() {
        let lp = LinearProgram {
            a: vec![
                vec![q(1, 1), q(2, 1), q(1, 1), q(0, 1)],
                vec![q(3, 1), q(1, 1), q(0, 1), q(1, 1)],
            ],
            b: vec![q(4, 1), q(6, 1)],
            c: vec![q(-1, 1), q(-1, 1), q(0, 1), q(0, 1)],
        };
        match solve(&lp) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, q(-14, 5));
                assert_eq!(x[0], q(8, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x + y = -1 with x, y >= 0.
        assert_eq!(feasible_point(vec![vec![1.0, 1.0]], vec![-1.0], 2), None);
        let lp = LinearProgram {
            a: vec![vec![1.0, -1.0]],
            b: vec![1.0],
            c: vec![-1.0, 0.0],
        };
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        let x = feasible_point(a, vec![1.0, 2.0], 2).unwrap();
        assert!((x[0] + x[1] - 1.0).abs() < 1e-12);
    }
}
