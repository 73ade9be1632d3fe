use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lambda_min::min_ratio_exact;
use super::{EigenPair, Which};
use crate::error::{Error, Result};
use crate::hypergraph::OrientedHypergraph;
use crate::linalg::integer_kernel;
use crate::lp::{solve, LinearProgram, LpOutcome, LpScalar};
use crate::numeric::inf_norm;
use crate::operators::{RayleighForm, Side};

/// Multipliers witnessing a 1-Laplacian eigenpair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneLapCertificate {
    pub lambda: f64,
    pub z_edge: Vec<f64>,
    pub z_vertex: Vec<f64>,
    /// Total violation of the coordinate equations (zero when exact).
    pub slack: f64,
    /// Solved in exact rational arithmetic.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum OneLapVerdict {
    Feasible(OneLapCertificate),
    Infeasible { slack: f64, exact: bool },
}

impl OneLapVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OneLapVerdict::Feasible(_))
    }

    pub fn slack(&self) -> f64 {
        match self {
            OneLapVerdict::Feasible(c) => c.slack,
            OneLapVerdict::Infeasible { slack, .. } => *slack,
        }
    }
}

/// Checks whether `(lambda, f)` is an eigenpair of the 1-Laplacian by solving
/// for the multipliers. Signs are read exactly: only true zeros are free.
pub fn verify_1lap_eigenpair(
    g: &OrientedHypergraph,
    lambda: f64,
    f: &[f64],
    side: Side,
) -> Result<OneLapVerdict> {
    verify_1lap_eigenpair_with(g, lambda, f, side, 0.0)
}

/// As [`verify_1lap_eigenpair`], with entries and term values of magnitude at
/// most `zero_tol * ||f||_inf` treated as zero.
///
/// On the hyperedge side the roles swap: the per-vertex multipliers follow
/// the signs of the coboundary and each hyperedge `h` must satisfy
/// `sum_{i in h} +-z_i / deg(i) = lambda z_h`.
pub fn verify_1lap_eigenpair_with(
    g: &OrientedHypergraph,
    lambda: f64,
    f: &[f64],
    side: Side,
    zero_tol: f64,
) -> Result<OneLapVerdict> {
    let form = RayleighForm::new(g, side);
    form.check_dim(f)?;
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("function has non-finite entries".into()));
    }
    let scale = inf_norm(f);
    if scale == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let cut = zero_tol * scale;
    let f: Vec<f64> = f.iter().map(|&v| if v.abs() <= cut { 0.0 } else { v }).collect();

    let rationals: Option<Vec<BigRational>> = f.iter().map(|&v| small_rational(v)).collect();
    let exact_lambda = small_rational(lambda);
    let (z_terms, z_vars, slack, feasible, exact) = match (rationals, exact_lambda) {
        (Some(fq), Some(lq)) => {
            let (w, mu) = rational_weights(g, side);
            let b: Vec<BigRational> = (0..form.num_terms())
                .map(|t| {
                    form.term(t).iter().fold(BigRational::zero(), |acc, &(j, s)| {
                        acc + fq[j].clone() * BigRational::from_integer(BigInt::from(s as i64))
                    })
                })
                .collect();
            let tsign: Vec<Option<i8>> = b.iter().map(sign_of).collect();
            let vsign: Vec<Option<i8>> = fq.iter().map(sign_of).collect();
            let (slack, zt, zv) = certificate_lp(&form, &w, &mu, lq, &tsign, &vsign);
            let feasible = slack.is_zero();
            (
                to_f64s(&zt),
                to_f64s(&zv),
                slack.to_f64().unwrap_or(f64::INFINITY),
                feasible,
                true,
            )
        }
        _ => {
            let b = form.term_values(&f);
            let tsign: Vec<Option<i8>> = b
                .iter()
                .map(|&v| if v.abs() <= cut.max(1e-12 * scale) { None } else { Some(v.signum() as i8) })
                .collect();
            let vsign: Vec<Option<i8>> =
                f.iter().map(|&v| if v == 0.0 { None } else { Some(v.signum() as i8) }).collect();
            let (slack, zt, zv) = certificate_lp(
                &form,
                form.term_weights(),
                form.var_weights(),
                lambda,
                &tsign,
                &vsign,
            );
            let tol = 1e-9 * (1.0 + lambda) * form.dim() as f64;
            (zt, zv, slack, slack <= tol, false)
        }
    };
    if !feasible {
        return Ok(OneLapVerdict::Infeasible { slack, exact });
    }
    let (z_edge, z_vertex) = match side {
        Side::Vertex => (z_terms, z_vars),
        Side::Hyperedge => (z_vars, z_terms),
    };
    Ok(OneLapVerdict::Feasible(OneLapCertificate {
        lambda,
        z_edge,
        z_vertex,
        slack,
        exact,
    }))
}

/// Smallest or largest eigenvalue of the 1-Laplacian, exactly.
///
/// The maximum of `E_1 / N_1` sits at a vertex of the weighted cross-polytope,
/// so it is attained by a delta function. The minimum is zero with an integer
/// kernel vector when the kernel is nontrivial, and otherwise the minimum over
/// the vertices of the unit ball of `E_1`.
pub fn extremal_p1(g: &OrientedHypergraph, side: Side, which: Which) -> Result<EigenPair> {
    let form = RayleighForm::new(g, side);
    let (value, function) = match which {
        Which::Max => {
            // Summed exactly so the value is the correctly rounded ratio.
            let (wq, muq) = rational_weights(g, side);
            let mut delta_value = vec![BigRational::zero(); form.dim()];
            for t in 0..form.num_terms() {
                for &(j, a) in form.term(t) {
                    delta_value[j] += wq[t].clone() * BigRational::from_float(a.abs()).expect("finite");
                }
            }
            let mut j = 0;
            for k in 1..form.dim() {
                if delta_value[k].clone() / muq[k].clone() > delta_value[j].clone() / muq[j].clone() {
                    j = k;
                }
            }
            let value = (delta_value[j].clone() / muq[j].clone()).to_f64().unwrap_or(f64::NAN);
            let mut e = vec![0.0; form.dim()];
            e[j] = 1.0;
            (value, e)
        }
        Which::Min => match integer_kernel(&g.incidence_matrix(), side).into_iter().next() {
            Some(k) => (0.0, k),
            None => {
                let r = min_ratio_exact(g, side, true, crate::par::Exec::default())?;
                (r.value, r.function)
            }
        },
    };
    let verdict = verify_1lap_eigenpair_with(g, value, &function, side, 1e-12)?;
    Ok(EigenPair {
        p: 1.0,
        side,
        value,
        converged: verdict.is_feasible(),
        residual: verdict.slack(),
        function,
    })
}

/// Exact term and variable weights.
pub(super) fn rational_weights(
    g: &OrientedHypergraph,
    side: Side,
) -> (Vec<BigRational>, Vec<BigRational>) {
    let deg: Vec<BigRational> = g
        .degrees()
        .iter()
        .map(|&d| BigRational::from_integer(BigInt::from(d)))
        .collect();
    match side {
        Side::Vertex => (vec![BigRational::one(); g.m()], deg),
        Side::Hyperedge => (
            deg.iter().map(|d| d.recip()).collect(),
            vec![BigRational::one(); g.m()],
        ),
    }
}

/// `v` as `a / q` with `q <= 1000`, when `v` is exactly such a float.
fn small_rational(v: f64) -> Option<BigRational> {
    (1..=1000i64).find_map(|q| {
        let s = v * q as f64;
        (s == s.round() && s.abs() < 9.0e15).then(|| {
            BigRational::new(BigInt::from(s as i64), BigInt::from(q))
        })
    })
}

fn sign_of(v: &BigRational) -> Option<i8> {
    if v.is_zero() {
        None
    } else if v.is_positive() {
        Some(1)
    } else {
        Some(-1)
    }
}

fn to_f64s(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Minimizes the total violation of `sum_t w_t a_tj z_t = lambda mu_j z_j`
/// over the free multipliers in `[-1, 1]`. Returns the violation and the
/// multipliers (terms, variables).
fn certificate_lp<T: LpScalar>(
    form: &RayleighForm,
    w: &[T],
    mu: &[T],
    lambda: T,
    tsign: &[Option<i8>],
    vsign: &[Option<i8>],
) -> (T, Vec<T>, Vec<T>) {
    let nt = tsign.len();
    let nv = vsign.len();
    // Column layout: u for each free multiplier (u = z + 1), its bound slack,
    // then e+ and e- per equation.
    let mut col_of_term = vec![None; nt];
    let mut col_of_var = vec![None; nv];
    let mut ncols = 0;
    for (t, s) in tsign.iter().enumerate() {
        if s.is_none() {
            col_of_term[t] = Some(ncols);
            ncols += 1;
        }
    }
    for (j, s) in vsign.iter().enumerate() {
        if s.is_none() {
            col_of_var[j] = Some(ncols);
            ncols += 1;
        }
    }
    let nfree = ncols;
    let width = 2 * nfree + 2 * nv;
    let mut a = Vec::new();
    let mut b = Vec::new();
    // Equation per variable j.
    let mut terms_of_var: Vec<Vec<(usize, i8)>> = vec![Vec::new(); nv];
    for t in 0..nt {
        for &(j, s) in form.term(t) {
            terms_of_var[j].push((t, s as i8));
        }
    }
    for j in 0..nv {
        let mut row = vec![T::zero(); width];
        let mut rhs = T::zero();
        for &(t, s) in &terms_of_var[j] {
            let coef = w[t].clone() * T::from_int(s as i64);
            match tsign[t] {
                Some(z) => rhs = rhs - coef * T::from_int(z as i64),
                None => {
                    let c = col_of_term[t].unwrap();
                    row[c] = row[c].clone() + coef.clone();
                    rhs = rhs + coef;
                }
            }
        }
        let coef = lambda.clone() * mu[j].clone();
        match vsign[j] {
            Some(z) => rhs = rhs + coef * T::from_int(z as i64),
            None => {
                let c = col_of_var[j].unwrap();
                row[c] = row[c].clone() - coef.clone();
                rhs = rhs - coef;
            }
        }
        row[2 * nfree + j] = T::one();
        row[2 * nfree + nv + j] = -T::one();
        a.push(row);
        b.push(rhs);
    }
    // u + s = 2.
    for k in 0..nfree {
        let mut row = vec![T::zero(); width];
        row[k] = T::one();
        row[nfree + k] = T::one();
        a.push(row);
        b.push(T::from_int(2));
    }
    let mut c = vec![T::zero(); width];
    for x in c.iter_mut().skip(2 * nfree) {
        *x = T::one();
    }
    let LpOutcome::Optimal { x, value } = solve(&LinearProgram { a, b, c }) else {
        unreachable!("the violation program is feasible and bounded below");
    };
    let z = |sign: Option<i8>, col: Option<usize>| match (sign, col) {
        (Some(s), _) => T::from_int(s as i64),
        (None, Some(c)) => x[c].clone() - T::one(),
        (None, None) => unreachable!(),
    };
    let zt = (0..nt).map(|t| z(tsign[t], col_of_term[t])).collect();
    let zv = (0..nv).map(|j| z(vsign[j], col_of_var[j])).collect();
    (value, zt, zv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> OrientedHypergraph {
        OrientedHypergraph::new(2, [(vec![0], vec![1])]).unwrap()
    }

    #[test]
    fn single_edge_hand_programs() {
        let ok = verify_1lap_eigenpair(&edge(), 1.0, &[1.0, 0.0], Side::Vertex).unwrap();
        match ok {
            OneLapVerdict::Feasible(c) => {
                assert!(c.exact);
                assert_eq!(c.z_edge, vec![1.0]);
                assert_eq!(c.z_vertex, vec![1.0, -1.0]);
            }
            other => panic!("{other:?}"),
        }
        // (1,-1) maximizes RQ_1, so it is an eigenfunction: vertex 2 reads
        // -z_h = -1 = lambda z_2 with z_2 = sign(f(2)).
        match verify_1lap_eigenpair(&edge(), 1.0, &[1.0, -1.0], Side::Vertex).unwrap() {
            OneLapVerdict::Feasible(c) => assert_eq!(c.z_vertex, vec![1.0, -1.0]),
            other => panic!("{other:?}"),
        }
        // b = 0 leaves z_h free, but vertex 1 forces z_h = 1 and vertex 2 forces z_h = -1.
        let bad = verify_1lap_eigenpair(&edge(), 1.0, &[1.0, 1.0], Side::Vertex).unwrap();
        assert!(!bad.is_feasible());
        assert_eq!(bad.slack(), 2.0);
        let bad = verify_1lap_eigenpair(&edge(), 2.0, &[1.0, 0.0], Side::Vertex).unwrap();
        assert!(!bad.is_feasible());
    }

    #[test]
    fn constant_on_triangle_has_zero_witness() {
        let t = OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap();
        let v = verify_1lap_eigenpair(&t, 0.0, &[1.0, 1.0, 1.0], Side::Vertex).unwrap();
        assert!(v.is_feasible());
        // Irrational-looking input takes the floating path.
        let v = verify_1lap_eigenpair(&t, 0.0, &[0.1f64.sqrt(); 3], Side::Vertex).unwrap();
        match v {
            OneLapVerdict::Feasible(c) => assert!(!c.exact),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_extremes() {
        let g = OrientedHypergraph::new(
            4,
            [(vec![0, 1], vec![2]), (vec![2], vec![3]), (vec![1, 3], vec![])],
        )
        .unwrap();
        let hi = extremal_p1(&g, Side::Vertex, Which::Max).unwrap();
        assert_eq!(hi.value, 1.0);
        assert!(hi.converged);
        // max_h sum_{i in h} 1/deg(i): {0,1,2} gives 1 + 1/2 + 1/2.
        let hi = extremal_p1(&g, Side::Hyperedge, Which::Max).unwrap();
        assert_eq!(hi.value, 2.0);
        let lo = extremal_p1(&edge(), Side::Vertex, Which::Min).unwrap();
        assert_eq!(lo.value, 0.0);
        assert_eq!(lo.residual, 0.0);
    }
}
