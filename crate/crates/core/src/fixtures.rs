//! A corpus of small hypergraphs (n <= 12, m <= 15) used by the tests and
//! the benchmark.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::OrientedHypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Every hyperedge has one input and one output.
    Graph,
    /// Every hyperedge has two inputs.
    Signless,
    Mixed,
    InputsOnly,
    Disconnected,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub category: Category,
    pub graph: OrientedHypergraph,
}

type Edge = (Vec<usize>, Vec<usize>);

fn arc(i: usize, j: usize) -> Edge {
    (vec![i], vec![j])
}

fn pair(i: usize, j: usize) -> Edge {
    (vec![i, j], vec![])
}

fn cycle(n: usize, e: fn(usize, usize) -> Edge) -> Vec<Edge> {
    (0..n).map(|i| e(i, (i + 1) % n)).collect()
}

fn path(n: usize, e: fn(usize, usize) -> Edge) -> Vec<Edge> {
    (0..n - 1).map(|i| e(i, i + 1)).collect()
}

fn complete(n: usize, e: fn(usize, usize) -> Edge) -> Vec<Edge> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| e(i, j))).collect()
}

/// The complete bipartite graph between `0..k` and `k..n` with inputs only.
pub fn gamma(k: usize, n: usize) -> OrientedHypergraph {
    let edges = (0..k).flat_map(|i| (k..n).map(move |j| pair(i, j)));
    OrientedHypergraph::new(n, edges).expect("valid")
}

/// A random hypergraph with `m` hyperedges of 2 to 4 vertices, each vertex
/// an input or output with equal odds; vertices left uncovered are attached
/// to the last hyperedges.
pub fn random_hypergraph(n: usize, m: usize, seed: u64) -> OrientedHypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    let mut covered = vec![false; n];
    for _ in 0..m {
        let size = rng.random_range(2..=4.min(n));
        let mut members: Vec<usize> = Vec::new();
        while members.len() < size {
            let v = rng.random_range(0..n);
            if !members.contains(&v) {
                members.push(v);
            }
        }
        let (mut ins, mut outs) = (Vec::new(), Vec::new());
        for v in members {
            covered[v] = true;
            if rng.random_bool(0.5) {
                ins.push(v);
            } else {
                outs.push(v);
            }
        }
        edges.push((ins, outs));
    }
    for (k, v) in (0..n).filter(|&v| !covered[v]).enumerate() {
        let idx = m - 1 - k % m;
        edges[idx].0.push(v);
    }
    OrientedHypergraph::new(n, edges).expect("valid by construction")
}

fn fano(inputs_only: bool) -> Vec<Edge> {
    let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
    lines
        .iter()
        .map(|l| {
            if inputs_only {
                (l.to_vec(), vec![])
            } else {
                (vec![l[0]], vec![l[1], l[2]])
            }
        })
        .collect()
}

fn petersen() -> Vec<Edge> {
    let mut e: Vec<Edge> = (0..5).map(|i| arc(i, (i + 1) % 5)).collect();
    e.extend((0..5).map(|i| arc(5 + i, 5 + (i + 2) % 5)));
    e.extend((0..5).map(|i| arc(i, 5 + i)));
    e
}

/// The full corpus, in a fixed order.
pub fn corpus() -> Vec<Fixture> {
    use Category::*;
    let mut out = Vec::new();
    let mut add = |name: &str, category: Category, n: usize, edges: Vec<Edge>| {
        out.push(Fixture {
            name: name.to_string(),
            category,
            graph: OrientedHypergraph::new(n, edges).expect("corpus entries are valid"),
        });
    };
    add("k2", Graph, 2, vec![arc(0, 1)]);
    add("path3", Graph, 3, path(3, arc));
    add("path4", Graph, 4, path(4, arc));
    add("path6", Graph, 6, path(6, arc));
    add("triangle", Graph, 3, cycle(3, arc));
    add("cycle4", Graph, 4, cycle(4, arc));
    add("cycle5", Graph, 5, cycle(5, arc));
    add("cycle6", Graph, 6, cycle(6, arc));
    add("k4", Graph, 4, complete(4, arc));
    add("star4", Graph, 4, (1..4).map(|j| arc(0, j)).collect());
    add("k2_3", Graph, 5, (0..2).flat_map(|i| (2..5).map(move |j| arc(i, j))).collect());
    add("petersen", Graph, 10, petersen());
    add("multi_k2", Graph, 2, vec![arc(0, 1), arc(0, 1), arc(1, 0)]);
    add("signless_k2", Signless, 2, vec![pair(0, 1)]);
    add("signless_path4", Signless, 4, path(4, pair));
    add("signless_triangle", Signless, 3, cycle(3, pair));
    add("signless_cycle4", Signless, 4, cycle(4, pair));
    add("signless_k4", Signless, 4, complete(4, pair));
    add("mixed4", Mixed, 4, vec![(vec![0, 1], vec![2]), arc(2, 3), (vec![1, 3], vec![])]);
    add("single3", Mixed, 3, vec![(vec![0, 1], vec![2])]);
    add(
        "mixed5",
        Mixed,
        5,
        vec![(vec![0, 1], vec![2, 3]), arc(2, 4), (vec![0, 4], vec![1]), (vec![3], vec![])],
    );
    add(
        "hypercycle6",
        Mixed,
        6,
        vec![(vec![0, 1], vec![2]), (vec![2, 3], vec![4]), (vec![4, 5], vec![0])],
    );
    add(
        "k4_3uniform",
        Mixed,
        4,
        vec![
            (vec![0], vec![1, 2]),
            (vec![1], vec![2, 3]),
            (vec![2], vec![3, 0]),
            (vec![3], vec![0, 1]),
        ],
    );
    add("fano", Mixed, 7, fano(false));
    add("single_input3", InputsOnly, 3, vec![(vec![0, 1, 2], vec![])]);
    add(
        "inputs_cycle6",
        InputsOnly,
        6,
        vec![(vec![0, 1, 2], vec![]), (vec![2, 3, 4], vec![]), (vec![4, 5, 0], vec![])],
    );
    add("fano_inputs", InputsOnly, 7, fano(true));
    add("two_edges", Disconnected, 4, vec![arc(0, 1), arc(2, 3)]);
    add(
        "triangle_plus_edge",
        Disconnected,
        5,
        vec![arc(0, 1), arc(1, 2), arc(2, 0), pair(3, 4)],
    );
    add(
        "two_hyperedges",
        Disconnected,
        6,
        vec![(vec![0, 1], vec![2]), (vec![3], vec![4, 5])],
    );
    for (k, n) in [(1, 4), (2, 5), (3, 6)] {
        out.push(Fixture {
            name: format!("gamma_{k}_{n}"),
            category: InputsOnly,
            graph: gamma(k, n),
        });
    }
    for (n, m, seed) in [(6, 7, 11), (8, 10, 12), (10, 12, 13), (12, 15, 14)] {
        out.push(Fixture {
            name: format!("random_{n}_{m}"),
            category: Mixed,
            graph: random_hypergraph(n, m, seed),
        });
    }
    out
}
