use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use fastcd::graph::{read_matrix_market, write_matrix_market};
use fastcd::metrics::{accuracy, ari, nmi};
use fastcd::n2hi::{build_hierarchy, initialize_from, ClusterHierarchy};
use fastcd::select::{profile, select};
use fastcd::solver::{solve, Labeling, SolverConfig};
use fastcd::synth::{block_graph, two_circles, BlockSpec};
use fastcd::{round12, self_tuning_affinity, Error, FeatureMatrix, SparseSymGraph};
use serde::Serialize;

fn load_graph(path: &Path) -> anyhow::Result<SparseSymGraph> {
    read_matrix_market(path).with_context(|| format!("reading graph {}", path.display()))
}

/// Reads one nonnegative integer label per line; blank lines are skipped.
pub fn read_labels(path: &Path) -> anyhow::Result<Vec<usize>> {
    let text = fs::read_to_string(path)
        .map_err(Error::from)
        .with_context(|| format!("reading labels {}", path.display()))?;
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let label = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("'{line}' is not a nonnegative integer label"),
        });
        labels.push(label.with_context(|| format!("reading labels {}", path.display()))?);
    }
    Ok(labels)
}

fn write_labels(path: &Path, labels: &[usize]) -> anyhow::Result<()> {
    let mut out = BufWriter::new(File::create(path).map_err(Error::from)?);
    for l in labels {
        writeln!(out, "{l}").map_err(Error::from)?;
    }
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    fs::write(path, text)
        .map_err(Error::from)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn build_graph(features: &Path, k: usize, k_sigma: usize, out: &Path, skip_header: bool) -> anyhow::Result<()> {
    let features = FeatureMatrix::read_csv(features, skip_header)
        .with_context(|| format!("reading features {}", features.display()))?;
    let graph = self_tuning_affinity(&features, k, k_sigma)?;
    write_matrix_market(&graph, out)?;
    let n = graph.n();
    let density = graph.csr().nnz() as f64 / (n as f64 * (n - 1) as f64);
    eprintln!("n={n} edges={} density={:.6}", graph.num_edges(), density);
    Ok(())
}

pub struct ClusterArgs {
    pub graph: PathBuf,
    pub c: usize,
    pub init: String,
    pub tol: f64,
    pub max_outer: usize,
    pub out: PathBuf,
    pub trace: Option<PathBuf>,
    pub hierarchy: Option<PathBuf>,
}

#[derive(Serialize)]
struct ClusterOutput<'a> {
    labels: &'a [usize],
    objective: f64,
    sweeps: usize,
    moves: &'a [usize],
}

#[derive(Serialize)]
struct HierarchyLayer<'a> {
    clusters: usize,
    labels: &'a [usize],
    stalled: &'a [usize],
}

#[derive(Serialize)]
struct HierarchyOutput<'a> {
    base_n: usize,
    layers: Vec<HierarchyLayer<'a>>,
}

fn hierarchy_json(h: &ClusterHierarchy) -> HierarchyOutput<'_> {
    HierarchyOutput {
        base_n: h.base_n(),
        layers: h
            .layers()
            .iter()
            .map(|l| HierarchyLayer {
                clusters: l.partition.c(),
                labels: l.partition.labels(),
                stalled: &l.stalled,
            })
            .collect(),
    }
}

pub fn cluster(args: &ClusterArgs) -> anyhow::Result<()> {
    let graph = load_graph(&args.graph)?;
    let config = SolverConfig {
        max_outer: args.max_outer,
        rel_tol: args.tol,
    };
    config.validate()?;

    let initial = if args.init == "n2hi" {
        let h = build_hierarchy(&graph);
        if let Some(path) = &args.hierarchy {
            write_json(path, &hierarchy_json(&h))?;
        }
        initialize_from(&h, args.c)?
    } else if let Some(path) = args.init.strip_prefix("file:") {
        let labels = read_labels(Path::new(path))?;
        if labels.len() != graph.n() {
            return Err(Error::LengthMismatch {
                expected: graph.n(),
                got: labels.len(),
            }
            .into());
        }
        Labeling::new(labels, args.c)?
    } else {
        anyhow::bail!("unknown --init '{}'; expected 'n2hi' or 'file:<path>'", args.init);
    };

    let result = solve(&graph, &initial, &config)?;
    write_json(
        &args.out,
        &ClusterOutput {
            labels: result.labels.labels(),
            objective: round12(result.objective),
            sweeps: result.sweeps(),
            moves: &result.moves,
        },
    )?;

    if let Some(path) = &args.trace {
        let mut out = BufWriter::new(File::create(path).map_err(Error::from)?);
        writeln!(out, "sweep,objective,moves").map_err(Error::from)?;
        writeln!(out, "0,{},0", fastcd::fmt12(result.initial_objective)).map_err(Error::from)?;
        for (t, (obj, moves)) in result.trace.iter().zip(&result.moves).enumerate() {
            writeln!(out, "{},{},{}", t + 1, fastcd::fmt12(*obj), moves).map_err(Error::from)?;
        }
        out.flush().map_err(Error::from)?;
    }

    eprintln!(
        "objective={} sweeps={} moves={} converged={}",
        fastcd::fmt12(result.objective),
        result.sweeps(),
        result.total_moves(),
        result.converged
    );
    Ok(())
}

pub fn estimate_c(graph: &Path, min: usize, max: usize, out: &Path) -> anyhow::Result<()> {
    if max < min || max - min + 1 < 3 {
        return Err(Error::TooFewCandidates(if max < min { 0 } else { max - min + 1 }).into());
    }
    let graph = load_graph(graph)?;
    let candidates: Vec<usize> = (min..=max).collect();
    let profile = profile(&graph, &candidates, &SolverConfig::default())?;
    let file = File::create(out).map_err(Error::from)?;
    profile.write_csv(BufWriter::new(file)).map_err(Error::from)?;
    println!("{}", select(&profile)?);
    Ok(())
}

#[derive(Serialize)]
struct EvalOutput {
    acc: f64,
    nmi: f64,
    ari: f64,
}

pub fn eval(pred: &Path, truth: &Path) -> anyhow::Result<()> {
    let pred = read_labels(pred)?;
    let truth = read_labels(truth)?;
    let scores = EvalOutput {
        acc: round12(accuracy(&pred, &truth)?),
        nmi: round12(nmi(&pred, &truth)?),
        ari: round12(ari(&pred, &truth)?),
    };
    println!("{}", serde_json::to_string(&scores)?);
    Ok(())
}

pub fn gen_blocks(
    blocks: usize,
    block_size: usize,
    noise_density: f64,
    seed: u64,
    out: &Path,
    truth: Option<&Path>,
) -> anyhow::Result<()> {
    let spec = BlockSpec {
        blocks,
        block_size,
        noise_density,
        ..BlockSpec::default()
    };
    let (graph, labels) = block_graph(&spec, seed)?;
    write_matrix_market(&graph, out)?;
    if let Some(path) = truth {
        write_labels(path, &labels)?;
    }
    Ok(())
}

pub fn gen_circles(points: usize, noise: usize, seed: u64, out: &Path, truth: Option<&Path>) -> anyhow::Result<()> {
    if 2 * points + noise < 2 {
        return Err(Error::TooFewSamples(2 * points + noise).into());
    }
    let (features, labels) = two_circles(points, noise, seed);
    let mut w = BufWriter::new(File::create(out).map_err(Error::from)?);
    for i in 0..features.n() {
        let row: Vec<String> = features.row(i).iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", row.join(",")).map_err(Error::from)?;
    }
    w.flush().map_err(Error::from)?;
    if let Some(path) = truth {
        write_labels(path, &labels)?;
    }
    Ok(())
}
