use serde::{Deserialize, Serialize};

use super::{signed_conflicts, BoundReport, Coloring, SpectralRange};
use crate::error::{Error, Result};
use crate::hypergraph::OrientedHypergraph;
use crate::numeric::abs_pow;
use crate::operators::{PExponent, Side};

/// Largest ground set colored exactly.
pub const MAX_EXACT_COLORING: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringResult {
    pub chi: usize,
    pub coloring: Coloring,
    /// False for the greedy upper bound.
    pub exact: bool,
}

/// Minimal number of colors such that conflicting elements differ (vertex
/// side: anti-oriented in some hyperedge; hyperedge side: some vertex has
/// opposite roles).
pub fn signed_coloring_number(
    g: &OrientedHypergraph,
    side: Side,
    heuristic: bool,
) -> Result<ColoringResult> {
    let ground = match side {
        Side::Vertex => g.n(),
        Side::Hyperedge => g.m(),
    };
    color(ground, &signed_conflicts(g, side), heuristic, "signed coloring")
}

/// Chromatic number of the graph joining every two vertices that share a
/// hyperedge.
pub fn unsigned_coloring_number(g: &OrientedHypergraph, heuristic: bool) -> Result<ColoringResult> {
    let mut pairs = Vec::new();
    for e in g.hyperedges() {
        let members: Vec<usize> = e.signed_members().map(|(i, _)| i).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                pairs.push((i.min(j), i.max(j)));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    color(g.n(), &pairs, heuristic, "coloring")
}

fn color(
    ground: usize,
    pairs: &[(usize, usize)],
    heuristic: bool,
    what: &'static str,
) -> Result<ColoringResult> {
    let mut adj = vec![Vec::new(); ground];
    for &(a, b) in pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    if ground > MAX_EXACT_COLORING {
        if !heuristic {
            return Err(Error::SizeLimit {
                what,
                size: ground,
                limit: MAX_EXACT_COLORING,
            });
        }
        let assignment = greedy(&adj);
        let chi = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
        return Ok(ColoringResult {
            chi,
            coloring: Coloring { assignment },
            exact: false,
        });
    }
    let upper = greedy(&adj).iter().map(|&c| c + 1).max().unwrap_or(0);
    for k in 1..=upper {
        let mut assignment = vec![usize::MAX; ground];
        if backtrack(&adj, k, 0, 0, &mut assignment) {
            return Ok(ColoringResult {
                chi: k,
                coloring: Coloring { assignment },
                exact: true,
            });
        }
    }
    // Only reached for an empty ground set.
    Ok(ColoringResult {
        chi: 0,
        coloring: Coloring { assignment: Vec::new() },
        exact: true,
    })
}

fn greedy(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut assignment = vec![usize::MAX; adj.len()];
    for v in 0..adj.len() {
        let mut c = 0;
        while adj[v].iter().any(|&u| assignment[u] == c) {
            c += 1;
        }
        assignment[v] = c;
    }
    assignment
}

/// Colors `v..` in order with at most `k` colors, opening at most one new
/// color per step; the first success is the lexicographically smallest.
fn backtrack(adj: &[Vec<usize>], k: usize, v: usize, used: usize, assignment: &mut [usize]) -> bool {
    if v == adj.len() {
        return true;
    }
    for c in 0..k.min(used + 1) {
        if adj[v].iter().all(|&u| assignment[u] != c) {
            assignment[v] = c;
            if backtrack(adj, k, v + 1, used.max(c + 1), assignment) {
                return true;
            }
        }
    }
    assignment[v] = usize::MAX;
    false
}

/// Average over the color classes of the per-class cut ratio, checked
/// against the spectral range of the matching side. On the vertex side at
/// `p = 1` the average is also checked to equal 1.
pub fn signed_coloring_bound(
    g: &OrientedHypergraph,
    p: f64,
    coloring: &Coloring,
    side: Side,
    range: &SpectralRange,
) -> Result<Vec<BoundReport>> {
    PExponent::new(p)?;
    coloring.validate(g, side)?;
    let classes = coloring.classes();
    let deg = g.degrees();
    let mut total = 0.0;
    for class in &classes {
        total += match side {
            Side::Vertex => {
                let vol: f64 = class.iter().map(|&i| deg[i] as f64).sum();
                let sum: f64 = g
                    .hyperedges()
                    .iter()
                    .map(|e| {
                        let hits = e.signed_members().filter(|(i, _)| class.contains(i)).count();
                        abs_pow(hits as f64, p)
                    })
                    .sum();
                sum / vol
            }
            Side::Hyperedge => {
                let sum: f64 = (0..g.n())
                    .map(|i| {
                        let hits = g.incidences(i).iter().filter(|(h, _)| class.contains(h)).count();
                        abs_pow(hits as f64, p) / deg[i] as f64
                    })
                    .sum();
                sum / class.len() as f64
            }
        };
    }
    let middle = total / classes.len() as f64;
    let witness = format!("color classes {classes:?}");
    let mut out = vec![BoundReport::sandwich(
        "signed coloring average",
        range.min,
        middle,
        range.max,
        range.tolerance,
        witness.clone(),
    )];
    if side == Side::Vertex && p == 1.0 {
        out.push(BoundReport::upper(
            "|signed coloring average - 1| at p = 1",
            (middle - 1.0).abs(),
            0.0,
            1e-12,
            witness,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::spectrum_p2;

    fn triangle() -> OrientedHypergraph {
        OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap()
    }

    #[test]
    fn coloring_numbers() {
        let t = triangle();
        assert_eq!(signed_coloring_number(&t, Side::Vertex, false).unwrap().chi, 3);
        let s = OrientedHypergraph::new(3, [(vec![0, 1], vec![]), (vec![1, 2], vec![]), (vec![0, 2], vec![])])
            .unwrap();
        assert_eq!(signed_coloring_number(&s, Side::Vertex, false).unwrap().chi, 1);
        assert_eq!(unsigned_coloring_number(&s, false).unwrap().chi, 3);
        let path = OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2])]).unwrap();
        let r = signed_coloring_number(&path, Side::Vertex, false).unwrap();
        assert_eq!(r.chi, 2);
        assert_eq!(r.coloring.assignment, vec![0, 1, 0]);
    }

    #[test]
    fn size_limit_without_heuristic() {
        let edges: Vec<_> = (0..21).map(|i| (vec![i], vec![(i + 1) % 21])).collect();
        let g = OrientedHypergraph::new(21, edges).unwrap();
        assert!(matches!(
            signed_coloring_number(&g, Side::Vertex, false),
            Err(Error::SizeLimit { .. })
        ));
        let r = signed_coloring_number(&g, Side::Vertex, true).unwrap();
        assert!(!r.exact && r.chi == 3);
    }

    #[test]
    fn triangle_coloring_sandwich() {
        let t = triangle();
        let spec = spectrum_p2(&t, Side::Vertex);
        let range = SpectralRange {
            min: spec[0].value,
            max: spec[2].value,
            tolerance: 1e-10,
        };
        let c = signed_coloring_number(&t, Side::Vertex, false).unwrap().coloring;
        let reps = signed_coloring_bound(&t, 2.0, &c, Side::Vertex, &range).unwrap();
        // A graph gives exactly 1 at every p.
        assert_eq!(reps[0].lhs, 1.0);
        assert!(reps[0].holds);
        let reps = signed_coloring_bound(&t, 1.0, &c, Side::Vertex, &range).unwrap();
        assert!(reps[1].holds);
    }
}
