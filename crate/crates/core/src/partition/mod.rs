//! Cuts, colorings and partition bounds on the vertex and hyperedge sides.

mod coloring;
mod cuts;
mod families;
mod hyperedge;

use serde::{Deserialize, Serialize};

pub use coloring::{
    signed_coloring_bound, signed_coloring_number, unsigned_coloring_number, ColoringResult,
    MAX_EXACT_COLORING,
};
pub use cuts::{
    cheeger, general_partition_bounds, k_cut, partition_corollaries, sandwich_ep, CheegerResult,
    CutMode, CutResult, MAX_EXACT_CHEEGER, MAX_EXACT_KCUT,
};
pub use families::{kl_families, kl_family_bound, kl_ratio, KLFamily};
pub use hyperedge::{
    bipartite_eta_max, hyperedge_cut_bounds, is_bipartite_subset, BipartiteResult,
    MAX_EXACT_BIPARTITE,
};

use crate::error::{Error, Result};
use crate::hypergraph::{OrientedHypergraph, Subset};
use crate::numeric::abs_pow;
use crate::operators::{PExponent, Side};

/// The outcome of checking `lower <= lhs <= rhs` (or `lhs <= rhs` when there
/// is no lower side) within `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub witness: String,
    pub holds: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl BoundReport {
    /// `lhs <= rhs`.
    pub fn upper(name: &str, lhs: f64, rhs: f64, tolerance: f64, witness: String) -> Self {
        BoundReport {
            name: name.to_string(),
            lower: None,
            lhs,
            rhs,
            holds: lhs <= rhs + tolerance,
            tolerance,
            witness,
            note: None,
        }
    }

    /// `lower <= value <= upper`.
    pub fn sandwich(
        name: &str,
        lower: f64,
        value: f64,
        upper: f64,
        tolerance: f64,
        witness: String,
    ) -> Self {
        BoundReport {
            name: name.to_string(),
            lower: Some(lower),
            lhs: value,
            rhs: upper,
            holds: lower <= value + tolerance && value <= upper + tolerance,
            tolerance,
            witness,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Smallest and largest eigenvalue of one side at one `p`, and the tolerance
/// to use when comparing against them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralRange {
    pub min: f64,
    pub max: f64,
    pub tolerance: f64,
}

/// Disjoint nonempty blocks covering `0..ground`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    ground: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(ground: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; ground];
        let mut blocks = blocks;
        for (b, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x >= ground {
                    return Err(Error::Index {
                        what: "partition element",
                        index: x,
                        size: ground,
                    });
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPartition(format!("element {x} appears twice")));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {x} is not covered")));
        }
        Ok(Partition { ground, blocks })
    }

    /// From a block label per element; labels need not be contiguous.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            match order.iter().position(|&o| o == l) {
                Some(b) => blocks[b].push(x),
                None => {
                    order.push(l);
                    blocks.push(vec![x]);
                }
            }
        }
        Partition::new(labels.len(), blocks)
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn subsets(&self) -> Vec<Subset> {
        self.blocks
            .iter()
            .map(|b| Subset::from_indices(self.ground, b.iter().copied()).expect("validated"))
            .collect()
    }
}

/// A color in `0..k` for every vertex (or hyperedge).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub assignment: Vec<usize>,
}

impl Coloring {
    pub fn colors(&self) -> usize {
        self.assignment.iter().map(|&c| c + 1).max().unwrap_or(0)
    }

    /// Nonempty color classes in color order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.colors()];
        for (x, &c) in self.assignment.iter().enumerate() {
            classes[c].push(x);
        }
        classes.retain(|c| !c.is_empty());
        classes
    }

    /// Checks the signed condition on the given side.
    pub fn validate(&self, g: &OrientedHypergraph, side: Side) -> Result<()> {
        let ground = match side {
            Side::Vertex => g.n(),
            Side::Hyperedge => g.m(),
        };
        if self.assignment.len() != ground {
            return Err(Error::InvalidColoring(format!(
                "expected {ground} colors, got {}",
                self.assignment.len()
            )));
        }
        for (a, b) in signed_conflicts(g, side) {
            if self.assignment[a] == self.assignment[b] {
                let what = if side == Side::Vertex { "vertices" } else { "hyperedges" };
                return Err(Error::InvalidColoring(format!(
                    "{what} {a} and {b} conflict but share color {}",
                    self.assignment[a]
                )));
            }
        }
        Ok(())
    }
}

/// Conflicting pairs `(a, b)`, `a < b`, deduplicated and sorted: vertices
/// anti-oriented in some hyperedge, or hyperedges in which some vertex has
/// opposite roles.
pub fn signed_conflicts(g: &OrientedHypergraph, side: Side) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    match side {
        Side::Vertex => {
            for e in g.hyperedges() {
                for &i in &e.inputs {
                    for &j in &e.outputs {
                        pairs.push((i.min(j), i.max(j)));
                    }
                }
            }
        }
        Side::Hyperedge => {
            for i in 0..g.n() {
                let inc = g.incidences(i);
                for &(h, s) in inc {
                    for &(h2, s2) in inc {
                        if h < h2 && s != s2 {
                            pairs.push((h, h2));
                        }
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// `sum_h |#(S cap h_in) - #(S cap h_out)|^p`.
pub fn e_p(g: &OrientedHypergraph, s: &Subset, p: f64) -> Result<f64> {
    PExponent::new(p)?;
    check_universe(s, g.n())?;
    Ok(e_p_unchecked(g, s, p))
}

pub(crate) fn e_p_unchecked(g: &OrientedHypergraph, s: &Subset, p: f64) -> f64 {
    g.hyperedges()
        .iter()
        .map(|e| {
            let inn = e.inputs.iter().filter(|&&i| s.contains(i)).count() as f64;
            let out = e.outputs.iter().filter(|&&i| s.contains(i)).count() as f64;
            abs_pow(inn - out, p)
        })
        .sum()
}

/// `sum_i |#(Ĥ cap i_in) - #(Ĥ cap i_out)|^p / deg(i)`.
pub fn e_p_hyperedges(g: &OrientedHypergraph, hs: &Subset, p: f64) -> Result<f64> {
    PExponent::new(p)?;
    check_universe(hs, g.m())?;
    Ok(e_p_hyperedges_unchecked(g, hs, p))
}

pub(crate) fn e_p_hyperedges_unchecked(g: &OrientedHypergraph, hs: &Subset, p: f64) -> f64 {
    (0..g.n())
        .map(|i| {
            let net: i64 = g
                .incidences(i)
                .iter()
                .filter(|(h, _)| hs.contains(*h))
                .map(|&(_, s)| s as i64)
                .sum();
            abs_pow(net as f64, p) / g.degrees()[i] as f64
        })
        .sum()
}

/// `e_p(Ĥ) / #Ĥ`.
pub fn eta_p(g: &OrientedHypergraph, hs: &Subset, p: f64) -> Result<f64> {
    if hs.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(e_p_hyperedges(g, hs, p)? / hs.count() as f64)
}

fn check_universe(s: &Subset, expected: usize) -> Result<()> {
    if s.universe() != expected {
        return Err(Error::Dimension {
            expected,
            got: s.universe(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> OrientedHypergraph {
        OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap()
    }

    #[test]
    fn ep_examples() {
        let t = triangle();
        for p in [1.0, 1.5, 2.0, 3.0] {
            assert_eq!(e_p(&t, &Subset::from_indices(3, [0]).unwrap(), p).unwrap(), 2.0);
            assert_eq!(e_p(&t, &Subset::full(3), p).unwrap(), 0.0);
            assert_eq!(e_p(&t, &Subset::empty(3), p).unwrap(), 0.0);
            assert_eq!(e_p_hyperedges(&t, &Subset::full(3), p).unwrap(), 0.0);
        }
        assert_eq!(eta_p(&t, &Subset::empty(3), 2.0), Err(Error::EmptySubset));
    }

    #[test]
    fn single_hyperedge_eta() {
        let g = OrientedHypergraph::new(
            4,
            [(vec![0, 1], vec![2]), (vec![2], vec![3]), (vec![1, 3], vec![])],
        )
        .unwrap();
        let h0 = Subset::from_indices(3, [0]).unwrap();
        // 1/1 + 1/2 + 1/2.
        assert_eq!(eta_p(&g, &h0, 3.0).unwrap(), 2.0);
    }

    #[test]
    fn partitions_validate() {
        assert!(Partition::new(3, vec![vec![0], vec![1, 2]]).is_ok());
        assert!(matches!(
            Partition::new(3, vec![vec![0], vec![0, 1, 2]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(Partition::new(3, vec![vec![0], vec![1]]), Err(Error::InvalidPartition(_))));
        assert!(matches!(Partition::new(2, vec![vec![0, 1], vec![]]), Err(Error::InvalidPartition(_))));
        let p = Partition::from_labels(&[5, 2, 5]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn conflicts_and_validation() {
        let t = triangle();
        assert_eq!(signed_conflicts(&t, Side::Vertex), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(signed_conflicts(&t, Side::Hyperedge), vec![(0, 1), (0, 2), (1, 2)]);
        let bad = Coloring { assignment: vec![0, 0, 1] };
        assert!(matches!(bad.validate(&t, Side::Vertex), Err(Error::InvalidColoring(_))));
        let good = Coloring { assignment: vec![0, 1, 2] };
        assert!(good.validate(&t, Side::Vertex).is_ok());
    }
}
