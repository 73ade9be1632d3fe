//! Oriented hypergraphs: validated construction, incidence structure,
//! degrees and volumes, restriction to a vertex set, and connectivity.

use crate::error::{Error, Result};

/// One hyperedge: a pair of disjoint vertex sets. Both lists are sorted and
/// duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperedge {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl Hyperedge {
    pub fn new(mut inputs: Vec<usize>, mut outputs: Vec<usize>) -> Self {
        inputs.sort_unstable();
        inputs.dedup();
        outputs.sort_unstable();
        outputs.dedup();
        Hyperedge { inputs, outputs }
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }

    /// `|h_in| + |h_out|`.
    pub fn cardinality(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn reversed(&self) -> Self {
        Hyperedge {
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    /// Every member with its incidence sign (+1 input, -1 output).
    pub fn signed_members(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.inputs
            .iter()
            .map(|&i| (i, 1))
            .chain(self.outputs.iter().map(|&j| (j, -1)))
    }

    fn restricted(&self, set: &Subset) -> Hyperedge {
        Hyperedge {
            inputs: self.inputs.iter().copied().filter(|&i| set.contains(i)).collect(),
            outputs: self.outputs.iter().copied().filter(|&i| set.contains(i)).collect(),
        }
    }
}

/// Fixed-size bitset over `0..len`, used for vertex and hyperedge subsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    len: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(len: usize) -> Self {
        Subset {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Subset::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Subset::empty(len);
        for i in indices {
            if i >= len {
                return Err(Error::Index {
                    what: "subset",
                    index: i,
                    size: len,
                });
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Subset of `0..len` (`len <= 64`) given by the bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "mask subsets need len <= 64");
        let mut s = Subset::empty(len);
        if len > 0 {
            let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    /// The bits as a `u64` when `len <= 64`.
    pub fn mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn complement(&self) -> Subset {
        let mut s = Subset::empty(self.len);
        for i in 0..self.len {
            if !self.contains(i) {
                s.insert(i);
            }
        }
        s
    }

    pub fn union(&self, other: &Subset) -> Subset {
        assert_eq!(self.len, other.len);
        Subset {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Dense `n x m` incidence matrix with entries in `{+1, -1, 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    n: usize,
    m: usize,
    entries: Vec<i8>,
}

impl IncidenceMatrix {
    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, h: usize) -> i8 {
        self.entries[i * self.m + h]
    }

    /// Row `i`: the function on hyperedges recording how `i` enters each one.
    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    /// Column `h`: the signed indicator of hyperedge `h` on vertices.
    pub fn column(&self, h: usize) -> Vec<i8> {
        (0..self.n).map(|i| self.get(i, h)).collect()
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.n, self.m, |i, h| self.get(i, h) as f64)
    }
}

/// A validated oriented hypergraph. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedHypergraph {
    n: usize,
    labels: Option<Vec<String>>,
    edges: Vec<Hyperedge>,
    degrees: Vec<usize>,
    /// Per vertex: `(hyperedge, sign)` pairs in hyperedge order.
    incidences: Vec<Vec<(usize, i8)>>,
}

impl OrientedHypergraph {
    /// Builds and validates a hypergraph on vertices `0..n` from
    /// `(inputs, outputs)` pairs.
    pub fn new<I>(n: usize, hyperedges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Vec<usize>)>,
    {
        let edges: Vec<Hyperedge> = hyperedges
            .into_iter()
            .map(|(i, o)| Hyperedge::new(i, o))
            .collect();
        Self::from_hyperedges(n, edges)
    }

    pub fn from_hyperedges(n: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        let mut incidences = vec![Vec::new(); n];
        for (h, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::EmptyHyperedge { hyperedge: h });
            }
            for (i, s) in e.signed_members() {
                if i >= n {
                    return Err(Error::Index {
                        what: "vertex",
                        index: i,
                        size: n,
                    });
                }
                if s > 0 && e.outputs.binary_search(&i).is_ok() {
                    return Err(Error::Overlap { hyperedge: h, vertex: i });
                }
                incidences[i].push((h, s));
            }
        }
        if let Some(v) = incidences.iter().position(|l| l.is_empty()) {
            return Err(Error::IsolatedVertex { vertex: v });
        }
        for l in &mut incidences {
            l.sort_unstable();
        }
        let degrees = incidences.iter().map(Vec::len).collect();
        Ok(OrientedHypergraph {
            n,
            labels: None,
            edges,
            degrees,
            incidences,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn hyperedge(&self, h: usize) -> Result<&Hyperedge> {
        self.edges.get(h).ok_or(Error::Index {
            what: "hyperedge",
            index: h,
            size: self.edges.len(),
        })
    }

    /// Number of hyperedges containing `i`.
    pub fn degree(&self, i: usize) -> Result<usize> {
        self.degrees.get(i).copied().ok_or(Error::Index {
            what: "vertex",
            index: i,
            size: self.n,
        })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn cardinality(&self, h: usize) -> Result<usize> {
        self.hyperedge(h).map(Hyperedge::cardinality)
    }

    /// `(hyperedge, sign)` pairs for vertex `i`.
    pub fn incidences(&self, i: usize) -> &[(usize, i8)] {
        &self.incidences[i]
    }

    /// Sum of degrees over `set`.
    pub fn volume(&self, set: &Subset) -> f64 {
        set.iter()
            .filter(|&i| i < self.n)
            .map(|i| self.degrees[i] as f64)
            .sum()
    }

    pub fn total_volume(&self) -> f64 {
        self.degrees.iter().map(|&d| d as f64).sum()
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let m = self.m();
        let mut entries = vec![0i8; self.n * m];
        for (h, e) in self.edges.iter().enumerate() {
            for (i, s) in e.signed_members() {
                entries[i * m + h] = s;
            }
        }
        IncidenceMatrix {
            n: self.n,
            m,
            entries,
        }
    }

    /// `(h_in ∩ S, h_out ∩ S)` for every hyperedge, dropping the empty ones.
    pub fn restrict(&self, set: &Subset) -> Vec<Hyperedge> {
        self.edges
            .iter()
            .map(|e| e.restricted(set))
            .filter(|e| !e.is_empty())
            .collect()
    }

    /// True when no hyperedge has an output.
    pub fn is_inputs_only(&self) -> bool {
        self.edges.iter().all(|e| e.outputs.is_empty())
    }

    /// Index of the first hyperedge with an output, if any.
    pub fn first_output_hyperedge(&self) -> Option<usize> {
        self.edges.iter().position(|e| !e.outputs.is_empty())
    }

    /// Copy with hyperedge `h` reversed (inputs and outputs swapped).
    pub fn reverse_hyperedge(&self, h: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        let e = edges.get_mut(h).ok_or(Error::Index {
            what: "hyperedge",
            index: h,
            size: self.m(),
        })?;
        *e = e.reversed();
        self.rebuilt(edges)
    }

    /// Copy with every hyperedge reversed.
    pub fn reversed(&self) -> Self {
        let edges = self.edges.iter().map(Hyperedge::reversed).collect();
        self.rebuilt(edges).expect("reversal preserves validity")
    }

    /// Copy where vertex `i` becomes `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain("relabeling is not a permutation".into()));
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Hyperedge::new(
                    e.inputs.iter().map(|&i| perm[i]).collect(),
                    e.outputs.iter().map(|&i| perm[i]).collect(),
                )
            })
            .collect();
        let mut g = Self::from_hyperedges(self.n, edges)?;
        if let Some(l) = &self.labels {
            let mut nl = vec![String::new(); self.n];
            for (i, s) in l.iter().enumerate() {
                nl[perm[i]] = s.clone();
            }
            g.labels = Some(nl);
        }
        Ok(g)
    }

    /// Copy in which every hyperedge appears twice (`h_0, h_0, h_1, h_1, ...`).
    pub fn duplicated(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .flat_map(|e| [e.clone(), e.clone()])
            .collect();
        self.rebuilt(edges).expect("duplication preserves validity")
    }

    fn rebuilt(&self, edges: Vec<Hyperedge>) -> Result<Self> {
        let mut g = Self::from_hyperedges(self.n, edges)?;
        g.labels = self.labels.clone();
        Ok(g)
    }
}

/// Connected components of the vertices covered by `edges`: two vertices are
/// connected when a chain of hyperedges links them. Components are sorted,
/// and listed by smallest member.
pub fn connected_components(edges: &[Hyperedge]) -> Vec<Vec<usize>> {
    let n = edges
        .iter()
        .flat_map(|e| e.inputs.iter().chain(&e.outputs))
        .map(|&i| i + 1)
        .max()
        .unwrap_or(0);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut covered = vec![false; n];

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for e in edges {
        let mut members = e.inputs.iter().chain(&e.outputs);
        if let Some(&first) = members.next() {
            covered[first] = true;
            for &other in members {
                covered[other] = true;
                let (a, b) = (find(&mut parent, first), find(&mut parent, other));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in (0..n).filter(|&i| covered[i]) {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> OrientedHypergraph {
        OrientedHypergraph::new(3, [(vec![0], vec![1]), (vec![1], vec![2]), (vec![2], vec![0])])
            .unwrap()
    }

    #[test]
    fn build_minimal_edge() {
        let g = OrientedHypergraph::new(2, [(vec![0], vec![1])]).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn build_rejects_overlap() {
        let err = OrientedHypergraph::new(2, [(vec![0, 1], vec![1])]).unwrap_err();
        assert_eq!(err, Error::Overlap { hyperedge: 0, vertex: 1 });
    }

    #[test]
    fn build_rejects_isolated_vertex() {
        let err = OrientedHypergraph::new(3, [(vec![0], vec![1])]).unwrap_err();
        assert_eq!(err, Error::IsolatedVertex { vertex: 2 });
    }

    #[test]
    fn build_rejects_out_of_range_and_empty() {
        assert!(matches!(
            OrientedHypergraph::new(2, [(vec![0], vec![5])]),
            Err(Error::Index { index: 5, .. })
        ));
        assert!(matches!(
            OrientedHypergraph::new(2, [(vec![0, 1], vec![]), (vec![], vec![])]),
            Err(Error::EmptyHyperedge { hyperedge: 1 })
        ));
    }

    #[test]
    fn degrees_and_cardinalities() {
        let t = triangle();
        assert_eq!(t.degree(0).unwrap(), 2);
        assert!(t.degree(3).is_err());
        let star = OrientedHypergraph::new(
            4,
            [(vec![0], vec![1]), (vec![0], vec![2]), (vec![0], vec![3])],
        )
        .unwrap();
        assert_eq!(star.degree(0).unwrap(), 3);
        let g = OrientedHypergraph::new(
            3,
            [(vec![0], vec![1]), (vec![0, 1], vec![2]), (vec![0, 1, 2], vec![])],
        )
        .unwrap();
        assert_eq!(g.cardinality(0).unwrap(), 2);
        assert_eq!(g.cardinality(1).unwrap(), 3);
        assert_eq!(g.cardinality(2).unwrap(), 3);
        assert!(g.cardinality(3).is_err());
    }

    #[test]
    fn volumes() {
        let t = triangle();
        assert_eq!(t.volume(&Subset::from_indices(3, [0]).unwrap()), 2.0);
        assert_eq!(t.volume(&Subset::full(3)), 6.0);
        assert_eq!(t.volume(&Subset::empty(3)), 0.0);
    }

    #[test]
    fn restrict_triangle() {
        let t = triangle();
        let r = t.restrict(&Subset::from_indices(3, [0, 1]).unwrap());
        assert_eq!(
            r,
            vec![
                Hyperedge::new(vec![0], vec![1]),
                Hyperedge::new(vec![1], vec![]),
                Hyperedge::new(vec![], vec![0]),
            ]
        );
        assert_eq!(t.restrict(&Subset::full(3)), t.hyperedges());
        assert!(t.restrict(&Subset::empty(3)).is_empty());
    }

    #[test]
    fn components() {
        let c = connected_components(&[
            Hyperedge::new(vec![0], vec![1]),
            Hyperedge::new(vec![1], vec![2]),
        ]);
        assert_eq!(c, vec![vec![0, 1, 2]]);
        let c = connected_components(&[Hyperedge::new(vec![0], vec![]), Hyperedge::new(vec![1], vec![])]);
        assert_eq!(c, vec![vec![0], vec![1]]);
        assert!(connected_components(&[]).is_empty());
    }

    #[test]
    fn incidence_matrix_agrees_with_degrees() {
        let g = OrientedHypergraph::new(
            4,
            [(vec![0, 1], vec![2]), (vec![3], vec![0]), (vec![1, 2, 3], vec![])],
        )
        .unwrap();
        let inc = g.incidence_matrix();
        for i in 0..4 {
            let nz = inc.row(i).iter().filter(|&&x| x != 0).count();
            assert_eq!(nz, g.degree(i).unwrap());
        }
        for h in 0..3 {
            let nz = inc.column(h).iter().filter(|&&x| x != 0).count();
            assert_eq!(nz, g.cardinality(h).unwrap());
        }
        assert_eq!(inc.get(2, 0), -1);
        assert_eq!(inc.get(0, 1), -1);
        assert_eq!(inc.get(3, 1), 1);
    }

    #[test]
    fn subset_masks() {
        let s = Subset::from_mask(5, 0b10110);
        assert_eq!(s.to_vec(), vec![1, 2, 4]);
        assert_eq!(s.mask(), Some(0b10110));
        assert_eq!(s.complement().to_vec(), vec![0, 3]);
        assert!(Subset::from_indices(3, [3]).is_err());
    }

    #[test]
    fn relabel_rejects_non_permutation() {
        assert!(triangle().relabeled(&[0, 0, 1]).is_err());
        let r = triangle().relabeled(&[1, 2, 0]).unwrap();
        assert_eq!(r.hyperedges()[0], Hyperedge::new(vec![1], vec![2]));
    }
}
