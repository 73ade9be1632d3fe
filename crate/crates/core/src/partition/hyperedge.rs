use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{e_p_hyperedges_unchecked, BoundReport, Partition, SpectralRange};
use crate::error::{Error, Result};
use crate::hypergraph::{OrientedHypergraph, Subset};
use crate::numeric::abs_pow;
use crate::operators::PExponent;
use crate::par::Exec;

/// Largest hyperedge count for the exhaustive bipartite search.
pub const MAX_EXACT_BIPARTITE: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteResult {
    pub value: f64,
    pub hyperedges: Vec<usize>,
    pub exact: bool,
}

/// Whether the hyperedges in `mask` can be reoriented (each one possibly
/// reversed as a whole) so that every vertex is always an input or always an
/// output among them.
fn bipartite_mask(g: &OrientedHypergraph, mask: u64) -> bool {
    // Union-find with parity: parity[h] is the flip of h relative to its root.
    let m = g.m();
    let mut parent: Vec<usize> = (0..m).collect();
    let mut parity = vec![0u8; m];
    fn find(parent: &mut [usize], parity: &mut [u8], h: usize) -> (usize, u8) {
        if parent[h] == h {
            return (h, 0);
        }
        let (r, p) = find(parent, parity, parent[h]);
        parent[h] = r;
        parity[h] ^= p;
        (r, parity[h])
    }
    for i in 0..g.n() {
        let mut first: Option<(usize, i8)> = None;
        for &(h, s) in g.incidences(i) {
            if mask >> h & 1 == 0 {
                continue;
            }
            let Some((h0, s0)) = first else {
                first = Some((h, s));
                continue;
            };
            // Same role needs equal flips, opposite roles need different ones.
            let want = u8::from(s != s0);
            let (ra, pa) = find(&mut parent, &mut parity, h0);
            let (rb, pb) = find(&mut parent, &mut parity, h);
            if ra == rb {
                if pa ^ pb != want {
                    return false;
                }
            } else {
                parent[rb] = ra;
                parity[rb] = pa ^ pb ^ want;
            }
        }
    }
    true
}

pub fn is_bipartite_subset(g: &OrientedHypergraph, hs: &Subset) -> Result<bool> {
    if hs.universe() != g.m() {
        return Err(Error::Dimension {
            expected: g.m(),
            got: hs.universe(),
        });
    }
    if g.m() > 64 {
        return Err(Error::SizeLimit {
            what: "bipartite test",
            size: g.m(),
            limit: 64,
        });
    }
    Ok(bipartite_mask(g, hs.iter().fold(0u64, |a, h| a | 1 << h)))
}

/// `sum_i deg_sub(i)^p / deg(i) / #sub`, the value of a bipartite
/// sub-hypergraph after reorientation.
fn bipartite_eta(g: &OrientedHypergraph, mask: u64, p: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..g.n() {
        let d = g.incidences(i).iter().filter(|(h, _)| mask >> h & 1 == 1).count();
        if d > 0 {
            sum += abs_pow(d as f64, p) / g.degrees()[i] as f64;
        }
    }
    sum / mask.count_ones() as f64
}

fn better(a: &(f64, Vec<usize>), b: &(f64, Vec<usize>)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Equal => a.1 < b.1,
        Ordering::Less => false,
    }
}

fn mask_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|h| mask >> h & 1 == 1).collect()
}

/// Maximum of `eta_p` over bipartite sub-hypergraphs.
///
/// Exhaustive up to [`MAX_EXACT_BIPARTITE`] hyperedges; beyond that
/// `heuristic` grows a bipartite set greedily from each hyperedge.
pub fn bipartite_eta_max(
    g: &OrientedHypergraph,
    p: f64,
    exec: Exec,
    heuristic: bool,
) -> Result<BipartiteResult> {
    PExponent::new(p)?;
    let m = g.m();
    if m > MAX_EXACT_BIPARTITE {
        if !heuristic || m > 64 {
            return Err(Error::SizeLimit {
                what: "bipartite sub-hypergraph search",
                size: m,
                limit: MAX_EXACT_BIPARTITE,
            });
        }
        return Ok(bipartite_greedy(g, p));
    }
    let chunks = exec.map_chunks(1u64 << m, |lo, hi| {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for mask in lo.max(1)..hi {
            if !bipartite_mask(g, mask) {
                continue;
            }
            let cand = (bipartite_eta(g, mask, p), mask_vec(mask));
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
        best
    });
    let mut best: Option<(f64, Vec<usize>)> = None;
    for cand in chunks.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    }
    let (value, hyperedges) = best.ok_or(Error::EmptySubset)?;
    Ok(BipartiteResult {
        value,
        hyperedges,
        exact: true,
    })
}

fn bipartite_greedy(g: &OrientedHypergraph, p: f64) -> BipartiteResult {
    let m = g.m();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for start in 0..m {
        let mut mask = 1u64 << start;
        let mut value = bipartite_eta(g, mask, p);
        loop {
            let next = (0..m)
                .filter(|&h| mask >> h & 1 == 0 && bipartite_mask(g, mask | 1 << h))
                .map(|h| (bipartite_eta(g, mask | 1 << h, p), h))
                .filter(|&(v, _)| v > value)
                .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
            match next {
                Some((v, h)) => {
                    mask |= 1 << h;
                    value = v;
                }
                None => break,
            }
        }
        let cand = (value, mask_vec(mask));
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    }
    let (value, hyperedges) = best.expect("hypergraphs have at least one hyperedge");
    BipartiteResult {
        value,
        hyperedges,
        exact: false,
    }
}

/// For a partition `H_1, ..., H_k` of the hyperedges: each `eta_p(H_i)` lies
/// in `[mu_1, mu_m]`, so does their mean, and
/// `sum e_p(H_i) / (k m) <= mean <= mu_m`.
pub fn hyperedge_cut_bounds(
    g: &OrientedHypergraph,
    p: f64,
    partition: &Partition,
    range: &SpectralRange,
) -> Result<Vec<BoundReport>> {
    PExponent::new(p)?;
    if partition.ground() != g.m() {
        return Err(Error::Dimension {
            expected: g.m(),
            got: partition.ground(),
        });
    }
    let tol = range.tolerance;
    let mut out = Vec::new();
    let mut eta_sum = 0.0;
    let mut e_sum = 0.0;
    for (block, set) in partition.blocks().iter().zip(partition.subsets()) {
        let e = e_p_hyperedges_unchecked(g, &set, p);
        let eta = e / block.len() as f64;
        e_sum += e;
        eta_sum += eta;
        out.push(BoundReport::sandwich(
            "mu_1 <= eta_p(H_i) <= mu_m",
            range.min,
            eta,
            range.max,
            tol,
            format!("H_i = {block:?}"),
        ));
    }
    let k = partition.k() as f64;
    let mean = eta_sum / k;
    let witness = format!("partition {:?}", partition.blocks());
    out.push(BoundReport::sandwich(
        "mu_1 <= mean eta_p(H_i) <= mu_m",
        range.min,
        mean,
        range.max,
        tol,
        witness.clone(),
    ));
    out.push(BoundReport::upper(
        "sum e_p(H_i)/(k #H) <= mu_m",
        e_sum / (k * g.m() as f64),
        range.max,
        tol,
        witness,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::spectrum_p2;
    use crate::operators::Side;

    fn triangle() -> OrientedHypergraph {
        OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap()
    }

    #[test]
    fn bipartite_detection() {
        let t = triangle();
        // Each vertex has opposite roles in its two edges: an odd cycle of
        // "flip one of the pair" constraints.
        assert!(!bipartite_mask(&t, 0b111));
        assert!(bipartite_mask(&t, 0b011));
        assert!(bipartite_mask(&t, 0b001));
        // A vertex that is input of both, plus one in opposite roles, forces
        // a contradiction.
        let g = OrientedHypergraph::new(
            3,
            [(vec![0, 1], vec![]), (vec![0], vec![1]), (vec![2], vec![0])],
        )
        .unwrap();
        assert!(!bipartite_mask(&g, 0b011));
    }

    #[test]
    fn p1_max_is_best_single_hyperedge() {
        let g = OrientedHypergraph::new(
            4,
            [(vec![0, 1], vec![2]), (vec![2], vec![3]), (vec![1, 3], vec![])],
        )
        .unwrap();
        let r = bipartite_eta_max(&g, 1.0, Exec::Sequential, false).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.hyperedges, vec![0]);
    }

    #[test]
    fn triangle_cut_and_max() {
        let t = triangle();
        let s = spectrum_p2(&t, Side::Hyperedge);
        let range = SpectralRange {
            min: s[0].value,
            max: s[2].value,
            tolerance: 1e-10,
        };
        let part = Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        for rep in hyperedge_cut_bounds(&t, 2.0, &part, &range).unwrap() {
            assert!(rep.holds, "{rep:?}");
        }
        let r = bipartite_eta_max(&t, 2.0, Exec::Parallel, false).unwrap();
        assert!(r.value <= range.max + 1e-10);
    }
}
