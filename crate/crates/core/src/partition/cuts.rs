use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{e_p_unchecked, BoundReport, Partition, SpectralRange};
use crate::error::{Error, Result};
use crate::hypergraph::{OrientedHypergraph, Subset};
use crate::numeric::abs_pow;
use crate::operators::PExponent;
use crate::par::Exec;

/// Largest vertex count for the exhaustive Cheeger search.
pub const MAX_EXACT_CHEEGER: usize = 20;
/// Largest vertex count for the exhaustive k-cut search.
pub const MAX_EXACT_KCUT: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheegerResult {
    pub value: f64,
    pub set: Vec<usize>,
    /// The constraint was relaxed to `vol S <= vol S^c` because no set met
    /// `vol S <= vol S^c / 2`.
    pub widened: bool,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutMode {
    /// Minimize `sum e_p(V_i) / vol(V_i)`.
    BalancedMin,
    /// Maximize `sum e_p(V_i)`.
    Max,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    pub value: f64,
    pub partition: Partition,
    pub exact: bool,
}

/// Per-hyperedge input and output bitmasks.
struct Masks {
    inputs: Vec<u64>,
    outputs: Vec<u64>,
    deg: Vec<f64>,
}

impl Masks {
    fn new(g: &OrientedHypergraph) -> Self {
        let bits = |v: &[usize]| v.iter().fold(0u64, |m, &i| m | 1 << i);
        Masks {
            inputs: g.hyperedges().iter().map(|e| bits(&e.inputs)).collect(),
            outputs: g.hyperedges().iter().map(|e| bits(&e.outputs)).collect(),
            deg: g.degrees().iter().map(|&d| d as f64).collect(),
        }
    }

    fn e_p(&self, s: u64, p: f64) -> f64 {
        self.inputs
            .iter()
            .zip(&self.outputs)
            .map(|(&i, &o)| {
                let d = (s & i).count_ones() as f64 - (s & o).count_ones() as f64;
                abs_pow(d, p)
            })
            .sum()
    }

    fn vol(&self, mut s: u64) -> f64 {
        let mut v = 0.0;
        while s != 0 {
            v += self.deg[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        v
    }
}

fn bits_to_vec(mut s: u64) -> Vec<usize> {
    let mut v = Vec::new();
    while s != 0 {
        v.push(s.trailing_zeros() as usize);
        s &= s - 1;
    }
    v
}

/// Smaller value first, then the lexicographically smaller witness.
fn cmp_witness<W: Ord>(a: &(f64, W), b: &(f64, W)) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

/// `min e_2(S) / vol S` over nonempty `S` with `vol S <= vol S^c / 2`.
///
/// When no set satisfies the constraint the minimum is taken over
/// `vol S <= vol S^c` and `widened` is set. Exhaustive up to
/// [`MAX_EXACT_CHEEGER`] vertices; beyond that `heuristic` selects a greedy
/// growth search.
pub fn cheeger(g: &OrientedHypergraph, exec: Exec, heuristic: bool) -> Result<CheegerResult> {
    let n = g.n();
    if n > MAX_EXACT_CHEEGER {
        if !heuristic {
            return Err(Error::SizeLimit {
                what: "cheeger constant",
                size: n,
                limit: MAX_EXACT_CHEEGER,
            });
        }
        return cheeger_greedy(g);
    }
    let masks = Masks::new(g);
    let total = g.total_volume();
    type Best = Option<(f64, Vec<usize>)>;
    let keep = |slot: &mut Best, cand: (f64, Vec<usize>)| {
        if slot.as_ref().is_none_or(|b| cmp_witness(&cand, b) == Ordering::Less) {
            *slot = Some(cand);
        }
    };
    let chunks = exec.map_chunks(1u64 << n, |lo, hi| {
        let (mut strict, mut wide): (Best, Best) = (None, None);
        for s in lo.max(1)..hi {
            let vol = masks.vol(s);
            let rest = total - vol;
            if vol > rest {
                continue;
            }
            let cand = (masks.e_p(s, 2.0) / vol, bits_to_vec(s));
            if 2.0 * vol <= rest {
                keep(&mut strict, cand.clone());
            }
            keep(&mut wide, cand);
        }
        (strict, wide)
    });
    let (mut strict, mut wide): (Best, Best) = (None, None);
    for (s, w) in chunks {
        if let Some(c) = s {
            keep(&mut strict, c);
        }
        if let Some(c) = w {
            keep(&mut wide, c);
        }
    }
    let (widened, (value, set)) = match (strict, wide) {
        (Some(b), _) => (false, b),
        (None, Some(b)) => (true, b),
        (None, None) => return Err(Error::Domain("no admissible vertex set".into())),
    };
    Ok(CheegerResult {
        value,
        set,
        widened,
        exact: true,
    })
}

fn cheeger_greedy(g: &OrientedHypergraph) -> Result<CheegerResult> {
    let n = g.n();
    let total = g.total_volume();
    let deg = g.degrees();
    let mut strict: Option<(f64, Vec<usize>)> = None;
    let mut wide: Option<(f64, Vec<usize>)> = None;
    for start in 0..n {
        let mut members = vec![false; n];
        members[start] = true;
        let mut vol = deg[start] as f64;
        loop {
            let set = Subset::from_indices(n, (0..n).filter(|&i| members[i])).expect("in range");
            if vol <= total - vol {
                let cand = (e_p_unchecked(g, &set, 2.0) / vol, set.to_vec());
                let slot = if 2.0 * vol <= total - vol { &mut strict } else { &mut wide };
                if slot.as_ref().is_none_or(|b| cmp_witness(&cand, b) == Ordering::Less) {
                    *slot = Some(cand);
                }
            }
            let next = (0..n)
                .filter(|&i| !members[i] && vol + deg[i] as f64 <= total - vol - deg[i] as f64)
                .map(|i| {
                    let mut s = set.clone();
                    s.insert(i);
                    (e_p_unchecked(g, &s, 2.0) / (vol + deg[i] as f64), i)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            match next {
                Some((_, i)) => {
                    members[i] = true;
                    vol += deg[i] as f64;
                }
                None => break,
            }
        }
    }
    let (widened, (value, set)) = match (strict, wide) {
        (Some(b), _) => (false, b),
        (None, Some(b)) => (true, b),
        (None, None) => return Err(Error::Domain("no admissible vertex set".into())),
    };
    Ok(CheegerResult {
        value,
        set,
        widened,
        exact: false,
    })
}

/// Balanced minimum or maximum k-cut at exponent `p`.
///
/// Exhaustive over restricted growth strings up to [`MAX_EXACT_KCUT`]
/// vertices; beyond that `heuristic` selects single-vertex local search.
/// Ties go to the lexicographically smallest label string.
pub fn k_cut(
    g: &OrientedHypergraph,
    k: usize,
    p: f64,
    mode: CutMode,
    exec: Exec,
    heuristic: bool,
) -> Result<CutResult> {
    PExponent::new(p)?;
    let n = g.n();
    if k < 1 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n = {n}, got k = {k}")));
    }
    if n > MAX_EXACT_KCUT {
        if !heuristic {
            return Err(Error::SizeLimit {
                what: "k-cut",
                size: n,
                limit: MAX_EXACT_KCUT,
            });
        }
        return local_search(g, k, p, mode);
    }
    let eval = CutEval::new(g, k, p, mode);
    // Prefixes of fixed length split the search into ordered work items.
    let depth = n.min(6);
    let mut prefixes = Vec::new();
    rgs_prefixes(&mut vec![0; depth], 1, 1, n, k, &mut prefixes);
    let results = exec.map(prefixes.len(), |w| {
        let mut labels = vec![0usize; n];
        labels[..depth].copy_from_slice(&prefixes[w]);
        let used = prefixes[w].iter().max().map_or(0, |&m| m + 1);
        let mut best: Option<(f64, Vec<usize>)> = None;
        rgs_complete(&mut labels, depth, used, k, &eval, &mut best);
        best
    });
    let mut best: Option<(f64, Vec<usize>)> = None;
    for cand in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| eval.better(cand.0, b.0)) {
            best = Some(cand);
        }
    }
    let (score, labels) = best.expect("k <= n admits a k-partition");
    Ok(CutResult {
        value: eval.report(score),
        partition: Partition::from_labels(&labels)?,
        exact: true,
    })
}

fn rgs_prefixes(
    buf: &mut Vec<usize>,
    pos: usize,
    used: usize,
    n: usize,
    k: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == buf.len() {
        out.push(buf.clone());
        return;
    }
    for c in 0..(used + 1).min(k) {
        let used2 = used.max(c + 1);
        // Enough positions must remain to open the missing labels.
        if k - used2 > n - pos - 1 {
            continue;
        }
        buf[pos] = c;
        rgs_prefixes(buf, pos + 1, used2, n, k, out);
    }
}

fn rgs_complete(
    labels: &mut [usize],
    pos: usize,
    used: usize,
    k: usize,
    eval: &CutEval,
    best: &mut Option<(f64, Vec<usize>)>,
) {
    let n = labels.len();
    if pos == n {
        if used == k {
            let s = eval.score(labels);
            if best.as_ref().is_none_or(|b| eval.better(s, b.0)) {
                *best = Some((s, labels.to_vec()));
            }
        }
        return;
    }
    for c in 0..(used + 1).min(k) {
        let used2 = used.max(c + 1);
        if k - used2 > n - pos - 1 {
            continue;
        }
        labels[pos] = c;
        rgs_complete(labels, pos + 1, used2, k, eval, best);
    }
}

struct CutEval<'a> {
    g: &'a OrientedHypergraph,
    k: usize,
    p: f64,
    mode: CutMode,
}

impl<'a> CutEval<'a> {
    fn new(g: &'a OrientedHypergraph, k: usize, p: f64, mode: CutMode) -> Self {
        CutEval { g, k, p, mode }
    }

    /// The objective as a value to minimize.
    fn score(&self, labels: &[usize]) -> f64 {
        let mut e = vec![0.0; self.k];
        let mut net = vec![0i64; self.k];
        for h in self.g.hyperedges() {
            net.iter_mut().for_each(|v| *v = 0);
            for (i, s) in h.signed_members() {
                net[labels[i]] += s as i64;
            }
            for b in 0..self.k {
                if net[b] != 0 {
                    e[b] += abs_pow(net[b] as f64, self.p);
                }
            }
        }
        match self.mode {
            CutMode::Max => -e.iter().sum::<f64>(),
            CutMode::BalancedMin => {
                let mut vol = vec![0.0; self.k];
                for (i, &l) in labels.iter().enumerate() {
                    vol[l] += self.g.degrees()[i] as f64;
                }
                e.iter().zip(&vol).map(|(a, v)| a / v).sum()
            }
        }
    }

    fn better(&self, a: f64, b: f64) -> bool {
        a < b
    }

    fn report(&self, score: f64) -> f64 {
        match self.mode {
            CutMode::Max => -score,
            CutMode::BalancedMin => score,
        }
    }
}

fn local_search(g: &OrientedHypergraph, k: usize, p: f64, mode: CutMode) -> Result<CutResult> {
    let n = g.n();
    let eval = CutEval::new(g, k, p, mode);
    let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
    let mut score = eval.score(&labels);
    let mut sizes = vec![0usize; k];
    labels.iter().for_each(|&l| sizes[l] += 1);
    for _ in 0..1000 {
        let mut improved = false;
        for i in 0..n {
            let from = labels[i];
            if sizes[from] == 1 {
                continue;
            }
            for to in 0..k {
                if to == from {
                    continue;
                }
                labels[i] = to;
                let s = eval.score(&labels);
                if s < score - 1e-12 * score.abs().max(1.0) {
                    score = s;
                    sizes[from] -= 1;
                    sizes[to] += 1;
                    improved = true;
                    break;
                }
                labels[i] = from;
            }
        }
        if !improved {
            break;
        }
    }
    Ok(CutResult {
        value: eval.report(score),
        partition: Partition::from_labels(&labels)?,
        exact: false,
    })
}

/// `lambda_1 <= e_p(S) / vol S <= lambda_n` for a nonempty `S`.
pub fn sandwich_ep(
    g: &OrientedHypergraph,
    s: &Subset,
    p: f64,
    range: &SpectralRange,
) -> Result<BoundReport> {
    let e = super::e_p(g, s, p)?;
    if s.is_empty() {
        return Err(Error::Domain("the vertex set must be nonempty".into()));
    }
    Ok(BoundReport::sandwich(
        "lambda_1 <= e_p(S)/vol(S) <= lambda_n",
        range.min,
        e / g.volume(s),
        range.max,
        range.tolerance,
        format!("S = {:?}", s.to_vec()),
    ))
}

struct PartitionSums {
    k: f64,
    sum_blocks: f64,
    whole: f64,
    vol: f64,
}

fn partition_sums(g: &OrientedHypergraph, p: f64, partition: &Partition) -> Result<PartitionSums> {
    PExponent::new(p)?;
    if partition.ground() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: partition.ground(),
        });
    }
    Ok(PartitionSums {
        k: partition.k() as f64,
        sum_blocks: partition.subsets().iter().map(|s| e_p_unchecked(g, s, p)).sum(),
        whole: e_p_unchecked(g, &Subset::full(g.n()), p),
        vol: g.total_volume(),
    })
}

/// The `(t, c)` bounds for a vertex partition `V_1, ..., V_k`:
///
/// `lambda_n >= [c^(p-1) |t+1|^p sum e_p(V_r) - (c/(1-c))^(p-1) k e_p(V)] / (vol V (|t|^p + k - 1))`
///
/// `lambda_1 <= C_p [|t+1|^p sum e_p(V_r) + k e_p(V)] / (vol V (|t|^p + k - 1))`
///
/// with `C_p = max(1, 2^(p-1))`, the constant in `|a + b|^p <= C_p (|a|^p + |b|^p)`.
/// Without it the upper bound fails for `p > 1`: a single block gives a
/// constant test function with quotient `e_p(V)/vol V`, while the bracket
/// is `(|t+1|^p + 1)/|t|^p` times that, below 1 for `t < -1/2`.
///
/// Returned as `(lambda_n report, lambda_1 report)`.
pub fn general_partition_bounds(
    g: &OrientedHypergraph,
    p: f64,
    partition: &Partition,
    t: f64,
    c: f64,
    range: &SpectralRange,
) -> Result<(BoundReport, BoundReport)> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0, 1), got {c}")));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite, got {t}")));
    }
    let s = partition_sums(g, p, partition)?;
    let denom = s.vol * (abs_pow(t, p) + s.k - 1.0);
    if denom <= 0.0 {
        return Err(Error::Domain("t = 0 with a single block leaves no bound".into()));
    }
    let tp = abs_pow(t + 1.0, p);
    let lower = (c.powf(p - 1.0) * tp * s.sum_blocks
        - (c / (1.0 - c)).powf(p - 1.0) * s.k * s.whole)
        / denom;
    let upper = 2f64.powf((p - 1.0).max(0.0)) * (tp * s.sum_blocks + s.k * s.whole) / denom;
    let witness = format!("partition {:?}, t = {t}, c = {c}", partition.blocks());
    Ok((
        BoundReport::upper("(t,c) lower bound <= lambda_n", lower, range.max, range.tolerance, witness.clone()),
        BoundReport::upper("lambda_1 <= (t,c) upper bound", range.min, upper, range.tolerance, witness),
    ))
}

/// The named special cases of [`general_partition_bounds`]: the three
/// `lambda_n` bounds at `(t, c) = (k-1, 1/2), (k-1, 1/k), (1, 1/2)`, and the
/// `t -> infinity` limits `sum e_p(V_r) / vol V` on both sides. The `lambda_1`
/// bound `e_p(V) / vol V` (the constant function, `t = -1`) is evaluated
/// directly, as the general form carries the extra `C_p` factor.
pub fn partition_corollaries(
    g: &OrientedHypergraph,
    p: f64,
    partition: &Partition,
    range: &SpectralRange,
) -> Result<Vec<BoundReport>> {
    let s = partition_sums(g, p, partition)?;
    let k = partition.k();
    let mut out = Vec::new();
    let mut named = |name: &str, t: f64, c: f64| -> Result<()> {
        let (mut rep, _) = general_partition_bounds(g, p, partition, t, c, range)?;
        rep.name = name.to_string();
        out.push(rep);
        Ok(())
    };
    if k >= 2 {
        let kf = k as f64;
        named("lambda_n >= bound at t = k-1, c = 1/2", kf - 1.0, 0.5)?;
        named("lambda_n >= bound at t = k-1, c = 1/k", kf - 1.0, 1.0 / kf)?;
    }
    named("lambda_n >= bound at t = 1, c = 1/2", 1.0, 0.5)?;
    let limit = s.sum_blocks / s.vol;
    let witness = format!("partition {:?}", partition.blocks());
    out.push(BoundReport::upper(
        "lambda_1 <= e_p(V)/vol(V) (t = -1)",
        range.min,
        s.whole / s.vol,
        range.tolerance,
        witness.clone(),
    ));
    out.push(BoundReport::upper(
        "lambda_1 <= sum e_p(V_r)/vol(V) (t -> infinity)",
        range.min,
        limit,
        range.tolerance,
        witness.clone(),
    ));
    out.push(BoundReport::upper(
        "sum e_p(V_r)/vol(V) <= lambda_n (t -> infinity)",
        limit,
        range.max,
        range.tolerance,
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

    fn p2_range(g: &OrientedHypergraph) -> SpectralRange {
        let s = spectrum_p2(g, Side::Vertex);
        SpectralRange {
            min: s[0].value,
            max: s.last().unwrap().value,
            tolerance: 1e-10,
        }
    }

    #[test]
    fn cheeger_examples() {
        let t = cheeger(&triangle(), Exec::Sequential, false).unwrap();
        assert_eq!((t.value, t.set.clone(), t.widened), (1.0, vec![0], false));
        let k2 = OrientedHypergraph::new(2, [(vec![0], vec![1])]).unwrap();
        let r = cheeger(&k2, Exec::Sequential, false).unwrap();
        assert!(r.widened);
        assert_eq!((r.value, r.set), (1.0, vec![0]));
        let two = OrientedHypergraph::new(4, [(vec![0], vec![1]), (vec![2], vec![3])]).unwrap();
        // A component has vol 2 > vol(rest) / 2, so it is not admissible.
        let r = cheeger(&two, Exec::Parallel, false).unwrap();
        assert_eq!((r.value, r.set, r.widened), (1.0, vec![0], false));
    }

    #[test]
    fn k_cut_examples() {
        let t = triangle();
        let r = k_cut(&t, 2, 2.0, CutMode::Max, Exec::Sequential, false).unwrap();
        assert_eq!(r.value, 4.0);
        assert_eq!(r.partition.blocks(), &[vec![0, 1], vec![2]]);
        let r = k_cut(&t, 3, 1.0, CutMode::Max, Exec::Sequential, false).unwrap();
        assert_eq!(r.value, 6.0);
        let lo = k_cut(&t, 2, 2.0, CutMode::BalancedMin, Exec::Parallel, false).unwrap();
        assert!(lo.value / 2.0 >= p2_range(&t).min);
    }

    #[test]
    fn k_cut_sequential_parallel_agree() {
        let edges: Vec<_> = (0..9).map(|i| (vec![i], vec![(i + 1) % 9])).collect();
        let g = OrientedHypergraph::new(9, edges).unwrap();
        for mode in [CutMode::Max, CutMode::BalancedMin] {
            let a = k_cut(&g, 3, 1.5, mode, Exec::Sequential, false).unwrap();
            let b = k_cut(&g, 3, 1.5, mode, Exec::Parallel, false).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sandwich_examples() {
        let t = triangle();
        let r = sandwich_ep(&t, &Subset::from_indices(3, [0]).unwrap(), 2.0, &p2_range(&t)).unwrap();
        assert!(r.holds && r.lhs == 1.0);
        let r = sandwich_ep(&t, &Subset::full(3), 2.0, &p2_range(&t)).unwrap();
        assert!(r.holds && r.lhs == 0.0);
    }

    #[test]
    fn triangle_singleton_partition_bounds() {
        let t = triangle();
        let part = Partition::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let (hi, lo) = general_partition_bounds(&t, 2.0, &part, 1.0, 0.5, &p2_range(&t)).unwrap();
        assert!((hi.lhs - 2.0 / 3.0).abs() < 1e-15 && hi.holds && lo.holds);
        assert!(matches!(
            general_partition_bounds(&t, 2.0, &part, 1.0, 1.0, &p2_range(&t)),
            Err(Error::Domain(_))
        ));
        for rep in partition_corollaries(&t, 2.0, &part, &p2_range(&t)).unwrap() {
            assert!(rep.holds, "{rep:?}");
        }
    }
}
