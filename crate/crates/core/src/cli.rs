//! Command-line front end: `spectra`, `bounds` and `nodal`.
//!
//! Exit codes: 0 success (and every checked bound holds), 1 internal error or
//! a violated bound, 2 input error, 3 size limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::eigen::{
    extremal_pairs, lambda_min_smallest_nonzero, spectrum_p2, verify_1lap_eigenpair_with,
    SolverConfig,
};
use crate::error::{Error, Result};
use crate::hypergraph::{OrientedHypergraph, Subset};
use crate::io::parse_hypergraph;
use crate::nodal::{
    check_courant, check_courant_inputs_only, nodal_domains, rank_extremal, rank_spectrum,
};
use crate::operators::{PExponent, Side};
use crate::par::Exec;
use crate::partition::{
    bipartite_eta_max, cheeger, hyperedge_cut_bounds, k_cut, kl_families, kl_family_bound,
    partition_corollaries, sandwich_ep, signed_coloring_bound, signed_coloring_number,
    unsigned_coloring_number, BoundReport, CutMode, KLFamily, Partition, SpectralRange,
};

/// Tolerance for comparing computed quantities against eigenvalues.
const BOUND_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "hyperplap", version, about = "p-Laplacians of oriented hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SideArg {
    Vertex,
    Hyperedge,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Vertex => Side::Vertex,
            SideArg::Hyperedge => Side::Hyperedge,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Cheeger,
    Kcut,
    Coloring,
    Klfamily,
    Hyperedge,
    All,
}

#[derive(Debug, clap::Args, Serialize)]
struct Common {
    /// Hypergraph file (JSON, 1-based vertex indices).
    file: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 24)]
    starts: usize,
    /// Residual tolerance for the variational solver.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues and eigenfunctions.
    Spectra {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SideArg::Vertex)]
        side: SideArg,
        /// At p = 1: a JSON file `{"value": .., "function": [..]}` to certify.
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Cut, coloring, family and hyperedge bounds.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Allow greedy searches beyond the exhaustive size limits.
        #[arg(long)]
        heuristic: bool,
    },
    /// Nodal domains and Courant-type bounds.
    Nodal {
        #[command(flatten)]
        common: Common,
        /// Absolute zero threshold; default is 1e-9 times the sup norm.
        #[arg(long)]
        threshold: Option<f64>,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(all_hold) => i32::from(!all_hold),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SizeLimit { .. } => 3,
        Error::Overlap { .. }
        | Error::EmptyHyperedge { .. }
        | Error::IsolatedVertex { .. }
        | Error::Index { .. }
        | Error::Dimension { .. }
        | Error::Domain(_)
        | Error::ZeroFunction
        | Error::InvalidColoring(_)
        | Error::InvalidFamily(_)
        | Error::Degenerate(_)
        | Error::InvalidPartition(_)
        | Error::EmptySubset
        | Error::NotInputsOnly(_)
        | Error::Parse { .. }
        | Error::Io(_) => 2,
    }
}

struct Loaded {
    g: OrientedHypergraph,
    digest: String,
    cfg: SolverConfig,
}

fn load(common: &Common) -> Result<Loaded> {
    PExponent::new(common.p)?;
    if !(common.tol > 0.0) {
        return Err(Error::Domain(format!("--tol must be positive, got {}", common.tol)));
    }
    let bytes = std::fs::read(&common.file)
        .map_err(|e| Error::Io(format!("{}: {e}", common.file.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Parse { location: "file".into(), message: "not UTF-8".into() })?;
    let g = parse_hypergraph(&text)?;
    let cfg = SolverConfig {
        starts: common.starts,
        tol_residual: common.tol,
        rng_seed: common.seed,
        ..SolverConfig::default()
    };
    Ok(Loaded {
        g,
        digest: hex::encode(Sha256::digest(&bytes)),
        cfg,
    })
}

fn execute(cmd: &Command) -> Result<bool> {
    let start = Instant::now();
    let common = match cmd {
        Command::Spectra { common, .. } | Command::Bounds { common, .. } | Command::Nodal { common, .. } => common,
    };
    let l = load(common)?;
    let (echo, results, all_hold) = match cmd {
        Command::Spectra { side, candidate, .. } => {
            let (results, ok) = spectra(&l, common.p, (*side).into(), candidate.as_deref())?;
            let echo = json!({"command": "spectra", "args": common, "side": side, "candidate": candidate});
            (echo, results, ok)
        }
        Command::Bounds { suite, heuristic, .. } => {
            let (results, ok) = bounds(&l, common.p, *suite, *heuristic)?;
            let echo = json!({"command": "bounds", "args": common, "suite": suite, "heuristic": heuristic});
            (echo, results, ok)
        }
        Command::Nodal { threshold, .. } => {
            let (results, ok) = nodal(&l, common.p, *threshold)?;
            let echo = json!({"command": "nodal", "args": common, "threshold": threshold});
            (echo, results, ok)
        }
    };
    let report = json!({
        "invocation": echo,
        "input_sha256": l.digest,
        "solver": l.cfg,
        "results": results,
        "all_hold": all_hold,
        "wall_time_ms": start.elapsed().as_secs_f64() * 1e3,
    });
    let text = format_json(&report);
    match &common.out {
        Some(path) => write_atomic(path, &text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(all_hold)
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

/// The report, and whether the checks it makes (the sharp value and the
/// certificates at `p = 1`, a given candidate) all hold.
fn spectra(l: &Loaded, p: f64, side: Side, candidate: Option<&Path>) -> Result<(Value, bool)> {
    let g = &l.g;
    let mut out = serde_json::Map::new();
    out.insert("p".into(), json!(p));
    out.insert("side".into(), to_value(&side));
    let mut converged = true;
    let mut ok = true;
    if p == 2.0 {
        out.insert("spectrum".into(), to_value(&spectrum_p2(g, side)));
    } else {
        let ext = extremal_pairs(g, p, side, &l.cfg)?;
        converged &= ext.min.converged && ext.max.converged;
        if p == 1.0 {
            let (name, expected) = match side {
                Side::Vertex => ("lambda_n = 1", 1.0),
                Side::Hyperedge => ("mu_m = max_h sum 1/deg", sharp_value(g)),
            };
            ok &= ext.max.value == expected;
            out.insert(
                "sharp".into(),
                json!({"name": name, "expected": expected, "value": ext.max.value,
                       "equal": ext.max.value == expected}),
            );
            let certs: Vec<Value> = [&ext.min, &ext.max]
                .iter()
                .map(|e| {
                    let v = verify_1lap_eigenpair_with(g, e.value, &e.function, side, 1e-12)?;
                    ok &= v.is_feasible();
                    Ok(to_value(&v))
                })
                .collect::<Result<_>>()?;
            out.insert("certificates".into(), Value::Array(certs));
        }
        out.insert("extremes".into(), to_value(&ext));
    }
    let lm = lambda_min_smallest_nonzero(g, p, side, &l.cfg)?;
    converged &= lm.converged;
    out.insert("lambda_min".into(), to_value(&lm));
    if let Some(path) = candidate {
        if p != 1.0 {
            return Err(Error::Domain("--candidate applies at p = 1".into()));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        #[derive(serde::Deserialize)]
        struct Candidate {
            value: f64,
            function: Vec<f64>,
        }
        let c: Candidate = serde_json::from_str(&text).map_err(|e| Error::Parse {
            location: format!("{} line {} column {}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })?;
        let verdict = verify_1lap_eigenpair_with(g, c.value, &c.function, side, 0.0)?;
        ok &= verdict.is_feasible();
        out.insert("candidate".into(), to_value(&verdict));
    }
    out.insert("status".into(), json!(if converged { "ok" } else { "not_converged" }));
    Ok((Value::Object(out), ok))
}

/// `max_h sum_{i in h} 1/deg(i)`.
pub fn sharp_value(g: &OrientedHypergraph) -> f64 {
    g.hyperedges()
        .iter()
        .map(|e| {
            e.signed_members()
                .map(|(i, _)| BigRational::new(1.into(), g.degrees()[i].into()))
                .sum::<BigRational>()
        })
        .max()
        .and_then(|r| r.to_f64())
        .unwrap_or(f64::NAN)
}

fn spectral_range(l: &Loaded, p: f64, side: Side) -> Result<(SpectralRange, bool)> {
    let ext = extremal_pairs(&l.g, p, side, &l.cfg)?;
    let certified = p == 1.0 || p == 2.0 || ext.certified(l.cfg.tol_residual);
    Ok((
        SpectralRange {
            min: ext.min.value,
            max: ext.max.value,
            tolerance: BOUND_TOL,
        },
        certified,
    ))
}

struct Suites<'a> {
    l: &'a Loaded,
    p: f64,
    heuristic: bool,
    exec: Exec,
    vertex: SpectralRange,
    hyper: SpectralRange,
}

fn bounds(l: &Loaded, p: f64, suite: Suite, heuristic: bool) -> Result<(Value, bool)> {
    let (vertex, cv) = spectral_range(l, p, Side::Vertex)?;
    let (hyper, ch) = spectral_range(l, p, Side::Hyperedge)?;
    let s = Suites { l, p, heuristic, exec: Exec::default(), vertex, hyper };
    let wanted = |x: Suite| suite == Suite::All || suite == x;
    let mut out = serde_json::Map::new();
    out.insert("p".into(), json!(p));
    out.insert("vertex_range".into(), to_value(&vertex));
    out.insert("hyperedge_range".into(), to_value(&hyper));
    out.insert("ranges_certified".into(), json!(cv && ch));
    let mut reports: Vec<BoundReport> = Vec::new();
    if wanted(Suite::Cheeger) {
        out.insert("cheeger".into(), s.cheeger(&mut reports)?);
    }
    if wanted(Suite::Kcut) {
        out.insert("kcut".into(), s.kcut(&mut reports)?);
    }
    if wanted(Suite::Coloring) {
        out.insert("coloring".into(), s.coloring(&mut reports)?);
    }
    if wanted(Suite::Klfamily) {
        out.insert("klfamily".into(), s.klfamily(&mut reports)?);
    }
    if wanted(Suite::Hyperedge) {
        out.insert("hyperedge".into(), s.hyperedge(&mut reports)?);
    }
    let ok = reports.iter().all(|r| r.holds);
    out.insert("violations".into(), json!(reports.iter().filter(|r| !r.holds).count()));
    out.insert("bounds".into(), to_value(&reports));
    Ok((Value::Object(out), ok))
}

impl Suites<'_> {
    fn cheeger(&self, reports: &mut Vec<BoundReport>) -> Result<Value> {
        let g = &self.l.g;
        let c = cheeger(g, self.exec, self.heuristic)?;
        let set = Subset::from_indices(g.n(), c.set.iter().copied())?;
        let mut rep = sandwich_ep(g, &set, self.p, &self.vertex)?;
        if c.widened {
            rep = rep.with_note("no set met vol S <= vol(S^c)/2; minimized over vol S <= vol S^c");
        }
        reports.push(rep);
        Ok(to_value(&c))
    }

    fn kcut(&self, reports: &mut Vec<BoundReport>) -> Result<Value> {
        let g = &self.l.g;
        let vol = g.total_volume();
        let mut cuts = Vec::new();
        for k in 2..=g.n().min(3) {
            let lo = k_cut(g, k, self.p, CutMode::BalancedMin, self.exec, self.heuristic)?;
            let hi = k_cut(g, k, self.p, CutMode::Max, self.exec, self.heuristic)?;
            let kf = k as f64;
            reports.push(BoundReport::upper(
                "lambda_1 <= balanced min k-cut / k",
                self.vertex.min,
                lo.value / kf,
                BOUND_TOL,
                format!("partition {:?}", lo.partition.blocks()),
            ));
            reports.push(BoundReport::upper(
                "max k-cut / (k vol V) <= lambda_n",
                hi.value / (kf * vol),
                self.vertex.max,
                BOUND_TOL,
                format!("partition {:?}", hi.partition.blocks()),
            ));
            for part in [&lo.partition, &hi.partition] {
                reports.extend(partition_corollaries(g, self.p, part, &self.vertex)?);
            }
            cuts.push(json!({
                "k": k,
                "balanced_min": to_value(&lo),
                "max": to_value(&hi),
                "max_normalized": hi.value / (kf * vol),
            }));
        }
        Ok(Value::Array(cuts))
    }

    fn coloring(&self, reports: &mut Vec<BoundReport>) -> Result<Value> {
        let g = &self.l.g;
        let cv = signed_coloring_number(g, Side::Vertex, self.heuristic)?;
        let ch = signed_coloring_number(g, Side::Hyperedge, self.heuristic)?;
        let unsigned = unsigned_coloring_number(g, self.heuristic)?;
        reports.extend(signed_coloring_bound(g, self.p, &cv.coloring, Side::Vertex, &self.vertex)?);
        reports.extend(signed_coloring_bound(g, self.p, &ch.coloring, Side::Hyperedge, &self.hyper)?);
        if cv.exact && unsigned.exact {
            reports.push(BoundReport::upper(
                "chi_sgn <= chi",
                cv.chi as f64,
                unsigned.chi as f64,
                0.0,
                format!("{:?}", unsigned.coloring.assignment),
            ));
        }
        Ok(json!({"vertex": cv, "hyperedge": ch, "unsigned": unsigned}))
    }

    fn klfamily(&self, reports: &mut Vec<BoundReport>) -> Result<Value> {
        let g = &self.l.g;
        if self.p != 2.0 {
            return Ok(json!({"skipped": "the (k,l)-family bound is stated for p = 2"}));
        }
        let n = g.n();
        let mut checked = 0usize;
        let mut families: Vec<KLFamily> = Vec::new();
        if n <= 6 {
            for k in 2..=3 {
                for l in 1..k.min(3) {
                    families.extend(kl_families(n, k, l)?);
                }
            }
        } else {
            families.push(KLFamily::new(n, (0..n).map(|i| vec![i]).collect(), 1)?);
        }
        // With one tolerance for all families, the one with the largest
        // excess fails whenever any fails.
        let mut worst: Option<BoundReport> = None;
        for f in &families {
            let rep = kl_family_bound(g, f, Some(&self.vertex))?;
            checked += 1;
            let margin = |r: &BoundReport| (r.lower.unwrap_or(r.lhs) - r.lhs).max(r.lhs - r.rhs);
            if worst.as_ref().is_none_or(|w| margin(&rep) > margin(w)) {
                worst = Some(rep);
            }
        }
        if let Some(w) = worst {
            reports.push(w.with_note(format!("tightest of {checked} families")));
        }
        Ok(json!({"families_checked": checked, "exhaustive": n <= 6}))
    }

    fn hyperedge(&self, reports: &mut Vec<BoundReport>) -> Result<Value> {
        let g = &self.l.g;
        let b = bipartite_eta_max(g, self.p, self.exec, self.heuristic)?;
        reports.push(BoundReport::upper(
            "max bipartite eta_p <= mu_m",
            b.value,
            self.hyper.max,
            BOUND_TOL,
            format!("hyperedges {:?}", b.hyperedges),
        ));
        if self.p == 1.0 && b.exact {
            reports.push(BoundReport::upper(
                "|max bipartite eta_1 - mu_m| at p = 1",
                (b.value - self.hyper.max).abs(),
                0.0,
                1e-12,
                format!("hyperedges {:?}", b.hyperedges),
            ));
        }
        let m = g.m();
        let singletons = Partition::new(m, (0..m).map(|h| vec![h]).collect())?;
        let whole = Partition::new(m, vec![(0..m).collect()])?;
        for part in [&singletons, &whole] {
            reports.extend(hyperedge_cut_bounds(g, self.p, part, &self.hyper)?);
        }
        Ok(to_value(&b))
    }
}

fn nodal(l: &Loaded, p: f64, threshold: Option<f64>) -> Result<(Value, bool)> {
    let g = &l.g;
    let ranked = if p == 2.0 {
        rank_spectrum(&spectrum_p2(g, Side::Vertex))
    } else {
        let ext = extremal_pairs(g, p, Side::Vertex, &l.cfg)?;
        rank_extremal(&ext.min, &ext.max, g.n())
    };
    let domains = ranked
        .iter()
        .map(|r| {
            nodal_domains(g, &r.pair.function, threshold)
                .map(|d| json!({"index": r.first, "value": r.pair.value, "nodal": d}))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut reports = check_courant(g, &ranked, threshold)?;
    let inputs_only = g.is_inputs_only();
    if inputs_only {
        reports.extend(check_courant_inputs_only(g, &ranked, threshold)?);
    }
    let ok = reports.iter().all(|r| r.holds);
    Ok((
        json!({"p": p, "inputs_only": inputs_only, "pairs": domains, "bounds": reports}),
        ok,
    ))
}

/// Pretty JSON with every non-integer float written with 17 significant
/// digits.
pub fn format_json(v: &Value) -> String {
    let mut s = String::new();
    write_value(v, 0, &mut s);
    s.push('\n');
    s
}

fn write_value(v: &Value, indent: usize, s: &mut String) {
    let pad = |s: &mut String, n: usize| s.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => s.push_str(&i.to_string()),
            (_, Some(u), _) => s.push_str(&u.to_string()),
            (_, _, Some(f)) => s.push_str(&format!("{f:.16e}")),
            _ => s.push_str("null"),
        },
        Value::Array(items) if items.is_empty() => s.push_str("[]"),
        Value::Array(items) => {
            s.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(s, indent + 2);
                write_value(item, indent + 2, s);
                s.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(s, indent);
            s.push(']');
        }
        Value::Object(map) if map.is_empty() => s.push_str("{}"),
        Value::Object(map) => {
            s.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                pad(s, indent + 2);
                s.push_str(&Value::String(key.clone()).to_string());
                s.push_str(": ");
                write_value(item, indent + 2, s);
                s.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(s, indent);
            s.push('}');
        }
        other => s.push_str(&other.to_string()),
    }
}
