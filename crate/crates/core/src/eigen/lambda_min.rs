use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::one_lap::rational_weights;
use super::variational::polish_pair;
use super::{spectrum_p2, SolverConfig};
use crate::error::{Error, Result};
use crate::hypergraph::OrientedHypergraph;
use crate::linalg::{integer_kernel, range_split};
use crate::lp::{solve, LinearProgram, LpOutcome, LpScalar};
use crate::numeric::{abs_pow, dot, signed_pow};
use crate::operators::{PExponent, RayleighForm, Side};
use crate::par::Exec;

/// Upper limit on the number of unit-ball vertex candidates at `p = 1`.
pub const MAX_BALL_CANDIDATES: usize = 500_000;

/// The smallest nonzero eigenvalue, `lambda_{d+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaMin {
    pub p: f64,
    pub side: Side,
    /// Kernel dimension.
    pub d: usize,
    pub value: f64,
    /// The minimizing function after the optimal kernel shift, `f - g*`.
    pub function: Vec<f64>,
    /// Computed by exact enumeration (`p = 1`).
    pub exact: bool,
    /// The returned function solves the eigen-equation to within the
    /// solver tolerance.
    pub converged: bool,
    /// Eigen-equation residual of the returned pair.
    pub residual: f64,
}

/// Lower bounds on the vertex-side `lambda_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaMinBounds {
    pub p: f64,
    /// Minimum over the span of `E_p / N_p`, without the kernel shift.
    pub unshifted: f64,
    /// `|H|^(1-p/2) lambda_{2,min}^(p/2)`, for `p >= 2`.
    pub edge_count_branch: Option<f64>,
    /// `vol(V)^(p/2-1) lambda_{2,min}^(p/2)`, for `p <= 2`.
    pub volume_branch: Option<f64>,
    /// The largest of the above.
    pub bound: f64,
}

/// Dimension of the kernel: functions with zero boundary (vertex side) or
/// zero coboundary (hyperedge side).
pub fn kernel_dimension(g: &OrientedHypergraph, side: Side) -> usize {
    range_split(&term_matrix(&RayleighForm::new(g, side))).complement.len()
}

/// Columns are the term vectors `a_t`, as a `dim x terms` matrix.
fn term_matrix(form: &RayleighForm) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(form.dim(), form.num_terms());
    for t in 0..form.num_terms() {
        for &(j, s) in form.term(t) {
            a[(j, t)] = s;
        }
    }
    a
}

/// `lambda_{d+1}`: the minimum over the span of the term vectors of `E_p(f)`
/// over `min_{g in kernel} N_p(f - g)`.
///
/// `p = 1` is solved exactly by enumerating the vertices of the unit ball of
/// `E_1` on the span; `p > 1` by multi-start projected gradient on the span
/// with a Newton solve for the inner shift.
pub fn lambda_min_smallest_nonzero(
    g: &OrientedHypergraph,
    p: f64,
    side: Side,
    cfg: &SolverConfig,
) -> Result<LambdaMin> {
    let pe = PExponent::new(p)?;
    let d = kernel_dimension(g, side);
    if pe.is_one() {
        let r = min_ratio_exact(g, side, true, cfg.exec)?;
        return Ok(LambdaMin {
            p,
            side,
            d,
            value: r.value,
            function: r.function,
            exact: true,
            converged: true,
            residual: 0.0,
        });
    }
    let o = outer_min(g, p, side, true, cfg)?;
    // The minimizer is an eigenfunction; certify it through the eigen-equation.
    let form = RayleighForm::new(g, side);
    let polished = polish_pair(&form, p, o.function.clone(), cfg.tol_residual)
        .filter(|(_, e)| (e.value - o.value).abs() <= 1e-6 * o.value.abs().max(1.0));
    let (value, function, residual) = match polished {
        Some((x, e)) => (e.value, x, e.residual),
        None => {
            let mut x = o.function;
            let norm = form.norm_pow(p, &x).powf(1.0 / p);
            x.iter_mut().for_each(|v| *v /= norm);
            let e = form.evaluate(p, &x);
            (o.value, x, e.residual)
        }
    };
    Ok(LambdaMin {
        p,
        side,
        d,
        value,
        function,
        exact: false,
        converged: residual <= cfg.tol_residual,
        residual,
    })
}

/// Vertex-side lower bounds on `lambda_min`: the unshifted minimum over the
/// span, and the comparison with `p = 2` (edge-count branch for `p >= 2`,
/// volume branch for `p <= 2`).
pub fn lambda_min_lower_bound(
    g: &OrientedHypergraph,
    p: f64,
    cfg: &SolverConfig,
) -> Result<LambdaMinBounds> {
    let pe = PExponent::new(p)?;
    let unshifted = if pe.is_one() {
        min_ratio_exact(g, Side::Vertex, false, cfg.exec)?.value
    } else {
        outer_min(g, p, Side::Vertex, false, cfg)?.value
    };
    let d = kernel_dimension(g, Side::Vertex);
    let l2 = spectrum_p2(g, Side::Vertex)
        .get(d)
        .map(|e| e.value.max(0.0))
        .ok_or_else(|| Error::Domain("no nonzero p = 2 eigenvalue".into()))?;
    let half = p / 2.0;
    let edge_count_branch = (p >= 2.0).then(|| (g.m() as f64).powf(1.0 - half) * l2.powf(half));
    let volume_branch = (p <= 2.0).then(|| g.total_volume().powf(half - 1.0) * l2.powf(half));
    let bound = [Some(unshifted), edge_count_branch, volume_branch]
        .into_iter()
        .flatten()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(LambdaMinBounds {
        p,
        unshifted,
        edge_count_branch,
        volume_branch,
        bound,
    })
}

struct OuterResult {
    value: f64,
    function: Vec<f64>,
}

struct Outer<'a> {
    form: &'a RayleighForm,
    p: f64,
    basis: DMatrix<f64>,
    shift: DMatrix<f64>,
}

struct OuterEval {
    value: f64,
    grad: DVector<f64>,
    shifted: Vec<f64>,
}

impl Outer<'_> {
    fn eval(&self, y: &DVector<f64>) -> Option<OuterEval> {
        let p = self.p;
        let f: Vec<f64> = (&self.basis * y).iter().copied().collect();
        let r = inner_shift(self.form.var_weights(), p, &f, &self.shift);
        let den = self.form.norm_pow(p, &r);
        if !(den > 0.0 && den.is_finite()) {
            return None;
        }
        let value = self.form.energy(p, &f) / den;
        let lap = self.form.laplacian(p, &f);
        let mu = self.form.var_weights();
        let gf = DVector::from_fn(f.len(), |j, _| {
            p * mu[j] * (lap[j] - value * signed_pow(r[j], p)) / den
        });
        Some(OuterEval {
            value,
            grad: self.basis.transpose() * gf,
            shifted: r,
        })
    }
}

fn outer_min(
    g: &OrientedHypergraph,
    p: f64,
    side: Side,
    use_shift: bool,
    cfg: &SolverConfig,
) -> Result<OuterResult> {
    let form = RayleighForm::new(g, side);
    let dim = form.dim();
    let split = range_split(&term_matrix(&form));
    let cols = |v: &[DVector<f64>]| {
        if v.is_empty() {
            DMatrix::zeros(dim, 0)
        } else {
            DMatrix::from_columns(v)
        }
    };
    let basis = cols(&split.range);
    let d = split.complement.len();
    let shift = if use_shift {
        cols(&split.complement)
    } else {
        DMatrix::zeros(dim, 0)
    };
    let r = basis.ncols();
    let outer = Outer {
        form: &form,
        p,
        basis,
        shift,
    };
    let seed = spectrum_p2(g, side)
        .get(d)
        .map(|e| e.function.clone())
        .unwrap_or_else(|| vec![1.0; dim]);

    let total = cfg.starts.max(dim + 1);
    let runs = cfg.exec.map(total, |s| {
        let y0 = if s == 0 {
            outer.basis.transpose() * DVector::from_vec(seed.clone())
        } else if s <= dim {
            outer.basis.row(s - 1).transpose()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(
                cfg.rng_seed ^ (s as u64).wrapping_mul(0xD1B5_4A32_D192_ED03),
            );
            DVector::from_fn(r, |_, _| StandardNormal.sample(&mut rng))
        };
        descend(&outer, cfg, y0)
    });
    runs.into_iter()
        .flatten()
        .reduce(|a, b| {
            let tie = 1e-12 * a.value.abs().max(1.0);
            if b.value < a.value - tie {
                b
            } else {
                a
            }
        })
        .ok_or(Error::ZeroFunction)
}

fn descend(outer: &Outer, cfg: &SolverConfig, y0: DVector<f64>) -> Option<OuterResult> {
    let norm = y0.norm();
    if !(norm > 1e-12) {
        return None;
    }
    let mut y = y0 / norm;
    let mut ev = outer.eval(&y)?;
    let stat = |e: &OuterEval| e.grad.norm() / e.value.abs().max(1e-300);
    let mut step = cfg.initial_step;
    let mut checkpoint = ev.value;
    for it in 0..cfg.max_iter {
        if stat(&ev) <= cfg.tol_residual * 1e-2 {
            break;
        }
        if it % 200 == 199 {
            if checkpoint - ev.value <= 1e-13 * ev.value.abs().max(1.0) {
                break;
            }
            checkpoint = ev.value;
        }
        let g2 = ev.grad.norm_squared();
        let mut accepted = false;
        while step > 1e-18 {
            let mut z = &y - &ev.grad * step;
            let zn = z.norm();
            if zn > 0.0 {
                z /= zn;
                if let Some(e) = outer.eval(&z) {
                    if e.value <= ev.value - cfg.armijo * step * g2 {
                        y = z;
                        ev = e;
                        accepted = true;
                        break;
                    }
                }
            }
            step *= cfg.backtrack;
        }
        if !accepted {
            break;
        }
        step = (step / cfg.backtrack).min(1e6);
    }
    Some(OuterResult {
        value: ev.value,
        function: ev.shifted,
    })
}

/// `f - K c*` with `c*` minimizing `sum_j mu_j |f_j - (K c)_j|^p` (`p > 1`).
fn inner_shift(mu: &[f64], p: f64, f: &[f64], k: &DMatrix<f64>) -> Vec<f64> {
    let d = k.ncols();
    if d == 0 {
        return f.to_vec();
    }
    let n = f.len();
    let fv = DVector::from_column_slice(f);
    let objective = |c: &DVector<f64>| -> f64 {
        let r = &fv - k * c;
        (0..n).map(|j| mu[j] * abs_pow(r[j], p)).sum()
    };
    // Weighted least squares start; exact at p = 2.
    let km = DMatrix::from_fn(n, d, |j, a| k[(j, a)] * mu[j]);
    let mut c = (km.transpose() * k)
        .cholesky()
        .map(|ch| ch.solve(&(km.transpose() * &fv)))
        .unwrap_or_else(|| DVector::zeros(d));
    if p == 2.0 {
        return (&fv - k * &c).iter().copied().collect();
    }
    let mut val = objective(&c);
    for _ in 0..200 {
        let r = &fv - k * &c;
        let rmax = r.amax();
        if rmax == 0.0 {
            break;
        }
        let phi = DVector::from_fn(n, |j, _| p * mu[j] * signed_pow(r[j], p));
        let grad = -(k.transpose() * &phi);
        let scale: f64 = (0..n).map(|j| p * mu[j] * abs_pow(r[j], p - 1.0)).sum();
        if grad.amax() <= 1e-15 * scale {
            break;
        }
        let floor = 1e-12 * rmax;
        let w: Vec<f64> = (0..n)
            .map(|j| p * (p - 1.0) * mu[j] * r[j].abs().max(floor).powf(p - 2.0))
            .collect();
        let kw = DMatrix::from_fn(n, d, |j, a| k[(j, a)] * w[j]);
        let mut h = kw.transpose() * k;
        let ridge = 1e-14 * (h.trace() + f64::MIN_POSITIVE);
        for a in 0..d {
            h[(a, a)] += ridge;
        }
        let mut dir = h
            .cholesky()
            .map(|ch| ch.solve(&(-&grad)))
            .unwrap_or_else(|| -&grad);
        if dot(dir.as_slice(), grad.as_slice()) >= 0.0 {
            dir = -&grad;
        }
        let slope = dot(dir.as_slice(), grad.as_slice());
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand = &c + &dir * t;
            let cv = objective(&cand);
            if cv <= val + 1e-4 * t * slope {
                moved = cv < val;
                c = cand;
                val = cv;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (&fv - k * &c).iter().copied().collect()
}

pub(super) struct RatioMin {
    pub value: f64,
    pub function: Vec<f64>,
}

/// Exact minimum of `E_1(f) / D(f)` over the span of the term vectors, where
/// `D(f) = min_{g in kernel} N_1(f - g)` when `shifted`, else `N_1(f)`.
///
/// `D` is convex, so its maximum on the unit ball of `E_1` is attained at a
/// vertex. A vertex is cut out by `r - 1` vanishing terms inside the
/// `r`-dimensional span; each candidate is an integer vector from cofactors.
pub(super) fn min_ratio_exact(
    g: &OrientedHypergraph,
    side: Side,
    shifted: bool,
    exec: Exec,
) -> Result<RatioMin> {
    let form = RayleighForm::new(g, side);
    let dim = form.dim();
    let kernel: Vec<Vec<i64>> = integer_kernel(&g.incidence_matrix(), side)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as i64).collect())
        .collect();
    let d = kernel.len();
    let r = dim - d;
    let terms: Vec<Vec<i64>> = (0..form.num_terms())
        .map(|t| {
            let mut row = vec![0i64; dim];
            for &(j, s) in form.term(t) {
                row[j] = s as i64;
            }
            row
        })
        .collect();
    let combos = combinations(terms.len(), r - 1, MAX_BALL_CANDIDATES).ok_or(Error::SizeLimit {
        what: "unit-ball vertex candidates",
        size: binomial(terms.len(), r - 1),
        limit: MAX_BALL_CANDIDATES,
    })?;

    let w = form.term_weights();
    let mu = form.var_weights();
    let kernel_f: Vec<Vec<f64>> = kernel
        .iter()
        .map(|v| v.iter().map(|&x| x as f64).collect())
        .collect();
    let candidates = exec.map(combos.len(), |c| {
        let mut rows: Vec<&[i64]> = kernel.iter().map(|v| v.as_slice()).collect();
        rows.extend(combos[c].iter().map(|&t| terms[t].as_slice()));
        let f = cofactor_kernel(&rows, dim)?;
        let ff: Vec<f64> = f.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        let e: f64 = (0..terms.len())
            .map(|t| w[t] * dot(&terms[t].iter().map(|&a| a as f64).collect::<Vec<_>>(), &ff).abs())
            .sum();
        let den = if shifted && d > 0 {
            l1_shift(&ff, mu, &kernel_f).0
        } else {
            (0..dim).map(|j| mu[j] * ff[j].abs()).sum()
        };
        Some((e / den, f))
    });
    let cands: Vec<(f64, Vec<BigInt>)> = candidates.into_iter().flatten().collect();
    let best = cands
        .iter()
        .map(|c| c.0)
        .fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::Domain("no unit-ball vertex found".into()));
    }

    // Re-evaluate the near-best candidates exactly.
    let (wq, muq) = rational_weights(g, side);
    let kernel_q: Vec<Vec<BigRational>> = kernel
        .iter()
        .map(|v| v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut winner: Option<(BigRational, Vec<BigRational>)> = None;
    for (v, f) in &cands {
        if *v > best + 1e-9 * best.abs().max(1.0) {
            continue;
        }
        let fq: Vec<BigRational> = f.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let e = (0..terms.len()).fold(BigRational::zero(), |acc, t| {
            let b = (0..dim).fold(BigRational::zero(), |s, j| {
                s + fq[j].clone() * BigRational::from_integer(terms[t][j].into())
            });
            acc + wq[t].clone() * b.abs()
        });
        let (den, resid) = if shifted && d > 0 {
            l1_shift(&fq, &muq, &kernel_q)
        } else {
            let den = (0..dim).fold(BigRational::zero(), |s, j| s + muq[j].clone() * fq[j].abs());
            (den, fq.clone())
        };
        let ratio = e / den;
        if winner.as_ref().is_none_or(|(w, _)| ratio < *w) {
            winner = Some((ratio, resid));
        }
    }
    let (value, resid) = winner.expect("the best candidate is within its own tolerance");
    Ok(RatioMin {
        value: value.to_f64().unwrap_or(f64::NAN),
        function: resid.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
    })
}

/// `min_c sum_j mu_j |f_j - (K^T c)_j|` as a linear program; returns the
/// optimal value and the residual `f - K^T c*`. Rows of `kernel` span the
/// shift space.
fn l1_shift<T: LpScalar>(f: &[T], mu: &[T], kernel: &[Vec<T>]) -> (T, Vec<T>) {
    let n = f.len();
    let d = kernel.len();
    let width = 2 * d + 2 * n;
    let a: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut row = vec![T::zero(); width];
            for (k, v) in kernel.iter().enumerate() {
                row[k] = v[j].clone();
                row[d + k] = -v[j].clone();
            }
            row[2 * d + j] = T::one();
            row[2 * d + n + j] = -T::one();
            row
        })
        .collect();
    let mut c = vec![T::zero(); width];
    for j in 0..n {
        c[2 * d + j] = mu[j].clone();
        c[2 * d + n + j] = mu[j].clone();
    }
    let LpOutcome::Optimal { x, value } = solve(&LinearProgram {
        a,
        b: f.to_vec(),
        c,
    }) else {
        unreachable!("a weighted L1 fit is feasible and bounded below");
    };
    let resid = (0..n)
        .map(|j| x[2 * d + j].clone() - x[2 * d + n + j].clone())
        .collect();
    (value, resid)
}

/// The kernel of a `(cols - 1) x cols` integer matrix of full row rank, as a
/// primitive integer vector with positive leading entry. `None` when the rank
/// is deficient.
fn cofactor_kernel(rows: &[&[i64]], cols: usize) -> Option<Vec<BigInt>> {
    debug_assert_eq!(rows.len() + 1, cols);
    let mut v: Vec<BigInt> = (0..cols)
        .map(|skip| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| (0..cols).filter(|&j| j != skip).map(|j| r[j]).collect())
                .collect();
            let det = det_i128(&minor)
                .map(BigInt::from)
                .unwrap_or_else(|| det_big(&minor));
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let lead_neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if lead_neg {
            *x = -&*x;
        }
    }
    Some(v)
}

/// Bareiss fraction-free determinant; `None` on overflow.
fn det_i128(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Some(0);
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

fn det_big(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut neg = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            neg = !neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if neg {
        -det
    } else {
        det
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` in lexicographic order, or `None` above `cap`.
fn combinations(n: usize, k: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    if binomial(n, k) > cap {
        return None;
    }
    if k > n {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return Some(out);
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
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
    fn combination_enumeration() {
        assert_eq!(combinations(4, 2, 100).unwrap().len(), 6);
        assert_eq!(combinations(3, 0, 100).unwrap(), vec![Vec::<usize>::new()]);
        assert!(combinations(30, 15, 1000).is_none());
        assert_eq!(binomial(15, 11), 1365);
    }

    #[test]
    fn determinants_agree() {
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(det_i128(&m), Some(4));
        assert_eq!(det_big(&m), BigInt::from(4));
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(det_i128(&swap), Some(-1));
    }

    #[test]
    fn p2_values() {
        let cfg = SolverConfig::default();
        let e = lambda_min_smallest_nonzero(&edge(), 2.0, Side::Vertex, &cfg).unwrap();
        assert_eq!(e.d, 1);
        assert!((e.value - 2.0).abs() < 1e-9);
        let t = lambda_min_smallest_nonzero(&triangle(), 2.0, Side::Vertex, &cfg).unwrap();
        assert!((t.value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn p1_exact_on_edge_and_triangle() {
        let cfg = SolverConfig::default();
        // Span of (1,-1): E_1 = 2|a|, shifted N_1 = min_c |a-c| + |-a-c| = 2|a|.
        let e = lambda_min_smallest_nonzero(&edge(), 1.0, Side::Vertex, &cfg).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(e.exact);
    }

    #[test]
    fn lower_bounds_on_single_edge() {
        let cfg = SolverConfig::default();
        let b4 = lambda_min_lower_bound(&edge(), 4.0, &cfg).unwrap();
        assert!((b4.edge_count_branch.unwrap() - 4.0).abs() < 1e-12);
        assert!(b4.volume_branch.is_none());
        let b1 = lambda_min_lower_bound(&edge(), 1.0, &cfg).unwrap();
        assert!((b1.volume_branch.unwrap() - 1.0).abs() < 1e-12);
        let b2 = lambda_min_lower_bound(&edge(), 2.0, &cfg).unwrap();
        assert_eq!(b2.edge_count_branch, b2.volume_branch);
        assert!((b2.volume_branch.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_dimensions() {
        assert_eq!(kernel_dimension(&edge(), Side::Vertex), 1);
        assert_eq!(kernel_dimension(&edge(), Side::Hyperedge), 0);
        assert_eq!(kernel_dimension(&triangle(), Side::Vertex), 1);
        assert_eq!(kernel_dimension(&triangle(), Side::Hyperedge), 1);
    }
}
