use serde::{Deserialize, Serialize};

use super::{e_p_unchecked, BoundReport, SpectralRange};
use crate::eigen::spectrum_p2;
use crate::error::{Error, Result};
use crate::hypergraph::{OrientedHypergraph, Subset};
use crate::operators::Side;

/// `k` vertex sets covering their union exactly `l` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLFamily {
    sets: Vec<Vec<usize>>,
    l: usize,
    n: usize,
}

impl KLFamily {
    pub fn new(n: usize, sets: Vec<Vec<usize>>, l: usize) -> Result<Self> {
        let k = sets.len();
        if l == 0 || l > k {
            return Err(Error::InvalidFamily(format!("need 1 <= l <= k, got k = {k}, l = {l}")));
        }
        if k == l {
            return Err(Error::Degenerate(k));
        }
        let mut cover = vec![0usize; n];
        let mut sets = sets;
        for (r, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFamily(format!("set {r} repeats a vertex")));
            }
            for &i in set.iter() {
                if i >= n {
                    return Err(Error::Index {
                        what: "vertex",
                        index: i,
                        size: n,
                    });
                }
                cover[i] += 1;
            }
        }
        if let Some(i) = cover.iter().position(|&c| c != 0 && c != l) {
            return Err(Error::InvalidFamily(format!(
                "vertex {i} is covered {} times, expected {l}",
                cover[i]
            )));
        }
        if cover.iter().all(|&c| c == 0) {
            return Err(Error::InvalidFamily("the union is empty".into()));
        }
        Ok(KLFamily { sets, l, n })
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn union(&self) -> Subset {
        Subset::from_indices(self.n, self.sets.iter().flatten().copied()).expect("validated")
    }
}

/// `(k sum e(S_r) - l^2 e(union)) / ((k - l) l vol(union))` with `e = e_2`.
pub fn kl_ratio(g: &OrientedHypergraph, family: &KLFamily) -> Result<f64> {
    if family.n != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: family.n,
        });
    }
    let (k, l) = (family.k() as f64, family.l as f64);
    let sum: f64 = family
        .sets
        .iter()
        .map(|s| e_p_unchecked(g, &Subset::from_indices(g.n(), s.iter().copied()).expect("validated"), 2.0))
        .sum();
    let union = family.union();
    Ok((k * sum - l * l * e_p_unchecked(g, &union, 2.0)) / ((k - l) * l * g.volume(&union)))
}

/// Checks `lambda_1 <= kl_ratio <= lambda_n` for the `p = 2` vertex
/// Laplacian. The range is computed from the dense spectrum unless given.
pub fn kl_family_bound(
    g: &OrientedHypergraph,
    family: &KLFamily,
    range: Option<&SpectralRange>,
) -> Result<BoundReport> {
    let value = kl_ratio(g, family)?;
    let range = match range {
        Some(r) => *r,
        None => {
            let s = spectrum_p2(g, Side::Vertex);
            SpectralRange {
                min: s[0].value,
                max: s[s.len() - 1].value,
                tolerance: 1e-8,
            }
        }
    };
    Ok(BoundReport::sandwich(
        "lambda_1 <= (k,l)-family ratio <= lambda_n",
        range.min,
        value,
        range.max,
        range.tolerance,
        format!("k = {}, l = {}, sets {:?}", family.k(), family.l, family.sets),
    ))
}

/// Every `(k, l)`-family on `n` vertices with a nonempty union, as ordered
/// tuples of sets. Each vertex is either outside the union or in exactly one
/// of the `C(k, l)` choices of `l` sets.
pub fn kl_families(n: usize, k: usize, l: usize) -> Result<Vec<KLFamily>> {
    if l == 0 || l >= k {
        return Err(if l == k { Error::Degenerate(k) } else {
            Error::InvalidFamily(format!("need 1 <= l < k, got k = {k}, l = {l}"))
        });
    }
    let choices: Vec<u32> = (0u32..1 << k).filter(|c| c.count_ones() as usize == l).collect();
    let base = choices.len() + 1;
    let limit = (24.0 / (base as f64).log2()).floor() as usize;
    if n > limit {
        return Err(Error::SizeLimit {
            what: "(k,l)-family enumeration",
            size: n,
            limit,
        });
    }
    let total = (base as u64).pow(n as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut sets = vec![Vec::new(); k];
        let mut c = code;
        for i in 0..n {
            let d = (c % base as u64) as usize;
            c /= base as u64;
            if d > 0 {
                let mask = choices[d - 1];
                for (r, set) in sets.iter_mut().enumerate() {
                    if mask >> r & 1 == 1 {
                        set.push(i);
                    }
                }
            }
        }
        out.push(KLFamily::new(n, sets, l)?);
    }
    Ok(out)
}
