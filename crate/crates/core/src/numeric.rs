//! Small numeric kernels shared by the operators and solvers.

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on chunking or thread count.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 8;
    if values.len() <= BASE {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `|t|^p`.
#[inline]
pub fn abs_pow(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        t.abs()
    } else if p == 2.0 {
        t * t
    } else {
        t.abs().powf(p)
    }
}

/// `|t|^(p-2) t`, evaluated as `|t|^(p-1) sign(t)` so that it is `0` at `t = 0`
/// for every `p > 1`.
#[inline]
pub fn signed_pow(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else if p == 2.0 {
        t
    } else {
        t.abs().powf(p - 1.0).copysign(t)
    }
}

#[inline]
pub fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn inf_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let terms: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    pairwise_sum(&terms)
}
