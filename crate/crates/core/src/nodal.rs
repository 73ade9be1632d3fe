//! Nodal domains and the two Courant-type bounds.

use serde::{Deserialize, Serialize};

use crate::eigen::{eigenvalue_clusters, EigenPair};
use crate::error::{Error, Result};
use crate::hypergraph::{connected_components, OrientedHypergraph, Subset};
use crate::numeric::{abs_pow, inf_norm, signed_pow};
use crate::operators::Side;
use crate::par::Exec;
use crate::partition::BoundReport;

/// Relative zero threshold used when none is given.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-9;

/// Eigenvalues closer than this belong to the same cluster.
pub const MULTIPLICITY_GAP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalReport {
    pub support: Vec<usize>,
    pub domains: Vec<Vec<usize>>,
    pub positive_domains: Vec<Vec<usize>>,
    pub negative_domains: Vec<Vec<usize>>,
}

impl NodalReport {
    pub fn domain_count(&self) -> usize {
        self.domains.len()
    }

    /// Positive plus negative domains.
    pub fn signed_count(&self) -> usize {
        self.positive_domains.len() + self.negative_domains.len()
    }
}

/// Nodal domains of a vertex function: the connected components of the
/// hyperedges restricted to the support, and likewise for the positive and
/// negative supports.
///
/// Entries with `|f(i)| <= threshold` count as zero; the default threshold is
/// `1e-9 * ||f||_inf`.
pub fn nodal_domains(
    g: &OrientedHypergraph,
    f: &[f64],
    threshold: Option<f64>,
) -> Result<NodalReport> {
    if f.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: f.len(),
        });
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("function has non-finite entries".into()));
    }
    let cut = match threshold {
        Some(t) if t >= 0.0 => t,
        Some(t) => return Err(Error::Domain(format!("threshold must be >= 0, got {t}"))),
        None => DEFAULT_ZERO_THRESHOLD * inf_norm(f),
    };
    let pick = |keep: &dyn Fn(f64) -> bool| {
        Subset::from_indices(g.n(), (0..g.n()).filter(|&i| keep(f[i])))
            .expect("indices are in range")
    };
    let support = pick(&|v| v.abs() > cut);
    if support.is_empty() {
        return Err(Error::ZeroFunction);
    }
    let positive = pick(&|v| v > cut);
    let negative = pick(&|v| v < -cut);
    Ok(NodalReport {
        support: support.to_vec(),
        domains: connected_components(&g.restrict(&support)),
        positive_domains: connected_components(&g.restrict(&positive)),
        negative_domains: connected_components(&g.restrict(&negative)),
    })
}

/// An eigenpair with its position in the spectrum (1-based) and the
/// multiplicity of its eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPair {
    pub pair: EigenPair,
    /// First index of the eigenvalue's cluster.
    pub first: usize,
    /// Last index of the eigenvalue's cluster.
    pub last: usize,
    pub multiplicity: usize,
    /// False when the multiplicity is only a lower bound.
    pub exact_multiplicity: bool,
}

/// Ranks a full `p = 2` spectrum, with multiplicities from eigenvalue
/// clusters.
pub fn rank_spectrum(spectrum: &[EigenPair]) -> Vec<RankedPair> {
    let values: Vec<f64> = spectrum.iter().map(|e| e.value).collect();
    let mut out = Vec::with_capacity(spectrum.len());
    for (a, b) in eigenvalue_clusters(&values, MULTIPLICITY_GAP) {
        for pair in &spectrum[a..=b] {
            out.push(RankedPair {
                pair: pair.clone(),
                first: a + 1,
                last: b + 1,
                multiplicity: b - a + 1,
                exact_multiplicity: true,
            });
        }
    }
    out
}

/// Ranks the smallest and largest eigenpairs of a `p != 2` problem of
/// dimension `n`. Their multiplicities are unknown and taken as 1.
pub fn rank_extremal(min: &EigenPair, max: &EigenPair, n: usize) -> Vec<RankedPair> {
    vec![
        RankedPair {
            pair: min.clone(),
            first: 1,
            last: 1,
            multiplicity: 1,
            exact_multiplicity: false,
        },
        RankedPair {
            pair: max.clone(),
            first: n,
            last: n,
            multiplicity: 1,
            exact_multiplicity: false,
        },
    ]
}

fn require_vertex(r: &RankedPair) -> Result<()> {
    if r.pair.side != Side::Vertex {
        return Err(Error::Domain("nodal domains are defined for vertex functions".into()));
    }
    Ok(())
}

fn note(r: &RankedPair) -> Option<String> {
    (!r.exact_multiplicity).then(|| "lower-bound multiplicity".to_string())
}

/// `#domains <= k + r - 1` for each pair, with `k` the first index of the
/// eigenvalue's cluster.
pub fn check_courant(
    g: &OrientedHypergraph,
    pairs: &[RankedPair],
    threshold: Option<f64>,
) -> Result<Vec<BoundReport>> {
    pairs.iter().try_for_each(require_vertex)?;
    Exec::default()
        .map(pairs.len(), |idx| {
            let r = &pairs[idx];
            let nd = nodal_domains(g, &r.pair.function, threshold)?;
            let mut rep = BoundReport::upper(
                "nodal domains <= k + r - 1",
                nd.domain_count() as f64,
                (r.first + r.multiplicity - 1) as f64,
                0.0,
                format!(
                    "lambda_{} = {:.12}, r = {}, domains {:?}",
                    r.first, r.pair.value, r.multiplicity, nd.domains
                ),
            );
            rep.note = note(r);
            Ok(rep)
        })
        .into_iter()
        .collect()
}

/// `#positive + #negative domains <= n - k + r` for each pair, with `k` the
/// last index of the eigenvalue's cluster. Requires an inputs-only
/// hypergraph.
pub fn check_courant_inputs_only(
    g: &OrientedHypergraph,
    pairs: &[RankedPair],
    threshold: Option<f64>,
) -> Result<Vec<BoundReport>> {
    if let Some(h) = g.first_output_hyperedge() {
        return Err(Error::NotInputsOnly(h));
    }
    pairs.iter().try_for_each(require_vertex)?;
    Exec::default()
        .map(pairs.len(), |idx| {
            let r = &pairs[idx];
            let nd = nodal_domains(g, &r.pair.function, threshold)?;
            let mut rep = BoundReport::upper(
                "signed nodal domains <= n - k + r",
                nd.signed_count() as f64,
                (g.n() + r.multiplicity - r.last) as f64,
                0.0,
                format!(
                    "lambda_{} = {:.12}, r = {}, positive {:?}, negative {:?}",
                    r.last, r.pair.value, r.multiplicity, nd.positive_domains, nd.negative_domains
                ),
            );
            rep.note = note(r);
            Ok(rep)
        })
        .into_iter()
        .collect()
}

/// Whether `|tA + sB|^p >= (|t|^p A + |s|^p B) |A + B|^(p-2) (A + B)` holds
/// within a `1e-12` relative slack, for `A B <= 0`.
///
/// At `p = 1` with `A + B = 0` the right side is read with the worst
/// `z in [-1, 1]`, i.e. as `||t| A + |s| B|`.
pub fn convexity_lemma_check(p: f64, t: f64, s: f64, a: f64, b: f64) -> Result<bool> {
    crate::operators::PExponent::new(p)?;
    if a * b > 0.0 {
        return Err(Error::Domain(format!("need A*B <= 0, got A = {a}, B = {b}")));
    }
    let lhs = abs_pow(t * a + s * b, p);
    let weighted = abs_pow(t, p) * a + abs_pow(s, p) * b;
    let rhs = if p == 1.0 && a + b == 0.0 {
        weighted.abs()
    } else {
        weighted * signed_pow(a + b, p)
    };
    Ok(lhs >= rhs - 1e-12 * lhs.abs().max(rhs.abs()).max(1.0))
}
