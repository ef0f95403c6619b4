//! The `scimap` command line. Each subcommand reads and writes files so
//! that stages can be chained.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use scimap_core::corpus::{build_universe, slice_documents, CorpusConfig, VariableKind};
use scimap_core::dynamic::{
    dynamic_layout, interpolate_frames, project_eigenvector_nodes, DynamicConfig, TimeSlicedNetwork,
};
use scimap_core::graph::WeightedGraph;
use scimap_core::info::{group_distribution, mutual_information_3};
use scimap_core::layout::{self, geodesic_distances, kruskal_stress, mds_layout, Init, LayoutConfig, Positions};
use scimap_core::matrix::{self, occurrence_matrix, threshold_graph, Axis, Measure, SimilarityMatrix};
use scimap_core::stats::{
    betweenness_centrality, degree_centrality, dominant_factors, factor_model, louvain_communities, Partition,
};

use crate::corpus_file::parse_corpus;
use crate::csv_io::{self, LabeledMatrix};
use crate::pajek::{read_network, write_network};
use crate::render::{self, ColorSource, SizeSource, VisualEncoding};

#[derive(Debug, Parser)]
#[command(name = "scimap", version, about = "Build, lay out and render science maps from bibliographic records")]
pub struct Cli {
    /// Seed for every randomized step (initial layouts, community search).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print progress to stderr; repeat for more detail.
    #[arg(long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Document × variable occurrence matrix from a corpus file.
    Matrix(MatrixArgs),
    /// Variable × variable similarity or distance matrix.
    Similarity(SimilarityArgs),
    /// Threshold a similarity matrix into a Pajek network.
    Graph(GraphArgs),
    /// Static stress-minimizing layout.
    Layout(LayoutArgs),
    /// Joint layout of time slices and interpolated animation frames.
    Animate(AnimateArgs),
    /// Degree, betweenness and Louvain communities of a network.
    Stats(StatsArgs),
    /// Three-way mutual information between column groups.
    Mi3(Mi3Args),
    /// Principal-component loadings of a correlation matrix.
    Factors(FactorsArgs),
    /// Draw a map (or frame sequence) as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Variable kinds to include, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "words")]
    pub kinds: Vec<VariableKind>,
    /// Keep variables occurring in at least this many documents.
    #[arg(long, default_value_t = 1)]
    pub min_occurrence: usize,
    /// File of stopwords separated by whitespace; `#` starts a comment line.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub min_token_length: usize,
    /// Years folded into one time slice.
    #[arg(long, default_value_t = 1)]
    pub slice_years: u32,
    /// Only use documents of this time slice (0-based).
    #[arg(long)]
    pub slice: Option<usize>,
    /// Output CSV (stdout if omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MeasureArg {
    Cosine,
    Pearson,
    Euclidean,
    Cooccurrence,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    Columns,
    Rows,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Columns => Axis::Columns,
            AxisArg::Rows => Axis::Rows,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    /// Occurrence matrix CSV.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "cosine")]
    pub measure: MeasureArg,
    /// Compare columns (variables) or rows (documents).
    #[arg(long, value_enum, default_value = "columns")]
    pub axis: AxisArg,
    /// Count co-occurring documents instead of multiplying counts.
    #[arg(long)]
    pub binarize: bool,
    /// Emit 1 - cosine instead of cosine.
    #[arg(long)]
    pub distance: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Similarity matrix CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Keep edges with similarity above this value.
    #[arg(long, default_value_t = 0.2)]
    pub threshold: f64,
    /// Also keep edges exactly at the threshold.
    #[arg(long)]
    pub include_equal: bool,
    /// Remove nodes without edges.
    #[arg(long)]
    pub drop_isolates: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightingArg {
    /// Every pair counts equally (classical stress).
    Uniform,
    /// Pairs weighted by 1 / d^2.
    #[value(alias = "kk")]
    KamadaKawai,
}

impl From<WeightingArg> for layout::Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::Uniform => layout::Weighting::Uniform,
            WeightingArg::KamadaKawai => layout::Weighting::KamadaKawai,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PathLengthArg {
    Hop,
    InverseWeight,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DisconnectedArg {
    Error,
    Substitute,
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    /// Edge length used for network distances.
    #[arg(long, value_enum, default_value = "hop")]
    pub path_length: PathLengthArg,
    /// Unreachable pairs: fail, or use 1.5 × the largest finite distance.
    #[arg(long, value_enum, default_value = "substitute")]
    pub disconnected: DisconnectedArg,
}

impl GeodesicArgs {
    fn distances(&self, g: &WeightedGraph) -> anyhow::Result<SimilarityMatrix> {
        let mode = match self.path_length {
            PathLengthArg::Hop => layout::PathLength::Hop,
            PathLengthArg::InverseWeight => layout::PathLength::InverseWeight,
        };
        let disc = match self.disconnected {
            DisconnectedArg::Error => layout::Disconnected::Error,
            DisconnectedArg::Substitute => layout::Disconnected::Substitute,
        };
        geodesic_distances(g, mode, disc).map_err(|e| match e {
            scimap_core::Error::Disconnected { components } => {
                let named: Vec<Vec<&str>> =
                    components.iter().map(|c| c.iter().map(|&i| g.nodes()[i].label.as_str()).collect()).collect();
                anyhow!("network is disconnected: {named:?}")
            }
            e => e.into(),
        })
    }
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    /// Stop when a sweep lowers stress by less than this fraction.
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    /// Start from these coordinates (`label,x,y`) instead of random ones.
    #[arg(long)]
    pub init_coords: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["distances", "network"]))]
pub struct LayoutArgs {
    /// Distance matrix CSV.
    #[arg(long)]
    pub distances: Option<PathBuf>,
    /// Pajek network; graph distances are used as targets.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Defaults to uniform for distance matrices, kamada-kawai for networks.
    #[arg(long, value_enum)]
    pub weighting: Option<WeightingArg>,
    #[command(flatten)]
    pub geodesic: GeodesicArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Write the stress after every sweep to this CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Coordinates CSV.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["slices", "slice_distances"]))]
pub struct AnimateArgs {
    /// Pajek networks, one per time slice, in order.
    #[arg(long, num_args = 1..)]
    pub slices: Vec<PathBuf>,
    /// Distance matrix CSVs, one per time slice, in order.
    #[arg(long, num_args = 1..)]
    pub slice_distances: Vec<PathBuf>,
    /// Weight of the displacement penalty between consecutive slices.
    #[arg(long, default_value_t = 0.5)]
    pub omega: f64,
    /// Also tie slices up to this many steps apart.
    #[arg(long, default_value_t = 1)]
    pub window: usize,
    /// Interpolated frames inserted between consecutive slices.
    #[arg(long, default_value_t = 0)]
    pub steps_between: usize,
    #[command(flatten)]
    pub geodesic: GeodesicArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Color nodes by their Louvain community within each slice network.
    #[arg(long)]
    pub communities: bool,
    /// Factor loadings CSV; adds a construct node for `--factor`.
    #[arg(long)]
    pub factors: Option<PathBuf>,
    /// 1-based factor projected into the frames.
    #[arg(long, default_value_t = 1, requires = "factors")]
    pub factor: usize,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Frame records CSV (`t,label,x,y,opacity,cluster`).
    #[arg(long)]
    pub output: PathBuf,
    /// Also write one SVG per frame into this directory.
    #[arg(long)]
    pub svg_dir: Option<PathBuf>,
    #[arg(long, default_value = "frame")]
    pub prefix: String,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Per-node CSV (`label,degree,weighted_degree,betweenness,community`).
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct Mi3Args {
    /// Occurrence matrix CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated column labels; give exactly three groups.
    #[arg(long = "group", required = true)]
    pub groups: Vec<String>,
}

#[derive(Debug, Args)]
pub struct FactorsArgs {
    /// Correlation (or other symmetric similarity) matrix CSV.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub factors: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SizeArg {
    Degree,
    WeightedDegree,
    Constant,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ColorArg {
    Community,
    Factor,
    Constant,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["network", "frames"]))]
pub struct RenderArgs {
    /// Pajek network to draw.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Coordinates CSV; defaults to the coordinates stored in the network.
    #[arg(long, requires = "network")]
    pub coords: Option<PathBuf>,
    /// CSV with `label` and `community` columns (e.g. `stats` output).
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Factor loadings CSV; nodes take the color of their dominant factor.
    #[arg(long, conflicts_with = "partition")]
    pub factors: Option<PathBuf>,
    /// Loadings at or below this value do not count as belonging to a factor.
    #[arg(long, default_value_t = 0.0)]
    pub factor_threshold: f64,
    #[arg(long, value_enum, default_value = "degree")]
    pub size: SizeArg,
    /// Defaults to `factor` with `--factors`, else `community`.
    #[arg(long, value_enum)]
    pub color: Option<ColorArg>,
    #[arg(long)]
    pub no_labels: bool,
    #[arg(long, default_value_t = 800.0)]
    pub width: f64,
    #[arg(long, default_value_t = 600.0)]
    pub height: f64,
    /// Frame records CSV to render as a numbered sequence.
    #[arg(long, requires = "svg_dir")]
    pub frames: Option<PathBuf>,
    #[arg(long)]
    pub svg_dir: Option<PathBuf>,
    #[arg(long, default_value = "frame")]
    pub prefix: String,
    /// SVG file for a single map.
    #[arg(long, required_unless_present = "frames")]
    pub output: Option<PathBuf>,
}

struct Ctx<'a> {
    seed: u64,
    verbose: u8,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn note(&self, msg: impl FnOnce() -> String) {
        if self.verbose > 0 {
            eprintln!("{}", msg());
        }
    }
}

/// Runs one parsed invocation; reports go to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut ctx = Ctx { seed: cli.seed, verbose: cli.verbose, out };
    match cli.command {
        Command::Matrix(a) => cmd_matrix(a, &mut ctx),
        Command::Similarity(a) => cmd_similarity(a, &mut ctx),
        Command::Graph(a) => cmd_graph(a, &mut ctx),
        Command::Layout(a) => cmd_layout(a, &mut ctx),
        Command::Animate(a) => cmd_animate(a, &mut ctx),
        Command::Stats(a) => cmd_stats(a, &mut ctx),
        Command::Mi3(a) => cmd_mi3(a, &mut ctx),
        Command::Factors(a) => cmd_factors(a, &mut ctx),
        Command::Render(a) => cmd_render(a, &mut ctx),
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn open(path: &Path) -> anyhow::Result<fs::File> {
    fs::File::open(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes to `path`, or to `out` when no path is given.
fn emit(
    path: Option<&Path>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> crate::Result<()>,
) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut buf = Vec::new();
            f(&mut buf)?;
            fs::write(p, buf).with_context(|| format!("cannot write {}", p.display()))
        }
        None => Ok(f(out)?),
    }
}

fn read_matrix(path: &Path) -> anyhow::Result<LabeledMatrix> {
    csv_io::read_matrix(open(path)?).with_context(|| path.display().to_string())
}

fn read_net(path: &Path) -> anyhow::Result<(WeightedGraph, Option<Positions>)> {
    read_network(&read_text(path)?).with_context(|| path.display().to_string())
}

fn cmd_matrix(a: MatrixArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let mut cfg =
        CorpusConfig { min_token_length: a.min_token_length, slice_years: a.slice_years, ..Default::default() };
    if let Some(p) = &a.stopwords {
        let text = read_text(p)?;
        let words = text.lines().filter(|l| !l.trim_start().starts_with('#')).flat_map(str::split_whitespace);
        cfg = cfg.with_stopwords(words);
    }
    let mut docs = parse_corpus(&read_text(&a.corpus)?, &cfg).with_context(|| a.corpus.display().to_string())?;
    if let Some(t) = a.slice {
        docs = slice_documents(&docs, t);
        if docs.is_empty() {
            bail!("time slice {t} has no documents");
        }
    }
    let universe = build_universe(&docs, &a.kinds, a.min_occurrence)?;
    let m = occurrence_matrix(&docs, &universe);
    ctx.note(|| format!("{} documents × {} variables", m.n_docs(), m.n_vars()));
    emit(a.output.as_deref(), ctx.out, |w| csv_io::write_matrix(w, &LabeledMatrix::from_occurrence(&m)))
}

fn cmd_similarity(a: SimilarityArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let occ = read_matrix(&a.input)?.into_occurrence().with_context(|| a.input.display().to_string())?;
    let axis = Axis::from(a.axis);
    if a.binarize && !matches!(a.measure, MeasureArg::Cooccurrence) {
        bail!("--binarize only applies to --measure cooccurrence");
    }
    if a.distance && !matches!(a.measure, MeasureArg::Cosine) {
        bail!("--distance only applies to --measure cosine");
    }
    let sim = match a.measure {
        MeasureArg::Cosine => matrix::cosine(&occ, axis),
        MeasureArg::Pearson => matrix::pearson(&occ, axis)?,
        MeasureArg::Euclidean => matrix::euclidean_distances(&occ, axis),
        MeasureArg::Cooccurrence => {
            if matches!(a.axis, AxisArg::Rows) {
                bail!("co-occurrence is defined between columns only");
            }
            matrix::cooccurrence(&occ, a.binarize)
        }
    };
    let degenerate: Vec<&str> =
        sim.labels().iter().zip(sim.degenerate()).filter(|(_, &d)| d).map(|(l, _)| l.as_str()).collect();
    if !degenerate.is_empty() {
        ctx.note(|| format!("degenerate vectors (scored 0): {}", degenerate.join(", ")));
    }
    let sim = if a.distance { matrix::cosine_to_distance(&sim)? } else { sim };
    emit(a.output.as_deref(), ctx.out, |w| csv_io::write_matrix(w, &LabeledMatrix::from_similarity(&sim)))
}

fn cmd_graph(a: GraphArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let sim = read_matrix(&a.input)?.into_similarity(Measure::Cosine).with_context(|| a.input.display().to_string())?;
    let mut g = threshold_graph(&sim, a.threshold, a.include_equal);
    if a.drop_isolates {
        let before = g.node_count();
        g = g.drop_isolates();
        ctx.note(|| format!("dropped {} isolated nodes", before - g.node_count()));
    }
    ctx.note(|| format!("{} nodes, {} edges", g.node_count(), g.edge_count()));
    let text = write_network(&g, None)?;
    emit(a.output.as_deref(), ctx.out, |w| Ok(w.write_all(text.as_bytes())?))
}

/// Positions for `labels` taken from a coordinates CSV.
fn init_from_file(path: &Path, labels: &[String]) -> anyhow::Result<Positions> {
    let (names, pos) = csv_io::read_coordinates(open(path)?).with_context(|| path.display().to_string())?;
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let pts = labels
        .iter()
        .map(|l| {
            index
                .get(l.as_str())
                .map(|&i| pos[i])
                .ok_or_else(|| anyhow!("{}: no coordinates for `{l}`", path.display()))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Positions::new(pts)?)
}

fn name_zero_distance(e: scimap_core::Error, labels: &[String]) -> anyhow::Error {
    match e {
        scimap_core::Error::ZeroDistance { i, j } => {
            anyhow!("zero target distance between `{}` and `{}`", labels[i], labels[j])
        }
        e => e.into(),
    }
}

fn cmd_layout(a: LayoutArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let (sim, default_weighting) = if let Some(p) = &a.network {
        (a.geodesic.distances(&read_net(p)?.0)?, WeightingArg::KamadaKawai)
    } else {
        let p = a.distances.as_ref().expect("clap enforces one source");
        let m = read_matrix(p)?.into_similarity(Measure::EuclideanDistance).with_context(|| p.display().to_string())?;
        (m, WeightingArg::Uniform)
    };
    let labels = sim.labels().to_vec();
    let init = match &a.optimizer.init_coords {
        Some(p) => Init::Given(init_from_file(p, &labels)?),
        None => Init::Random,
    };
    let cfg = LayoutConfig {
        max_iterations: a.optimizer.max_iterations,
        convergence_epsilon: a.optimizer.epsilon,
        seed: ctx.seed,
        init,
        weighting: a.weighting.unwrap_or(default_weighting).into(),
    };
    let res = mds_layout(sim.values(), &cfg).map_err(|e| name_zero_distance(e, &labels))?;
    emit(Some(&a.output), ctx.out, |w| csv_io::write_coordinates(w, &labels, &res.positions))?;
    if let Some(t) = &a.trace {
        emit(Some(t), ctx.out, |w| csv_io::write_trace(w, &res.stress_trace))?;
    }
    let mut report = String::new();
    if let Ok(k) = kruskal_stress(&res.positions, sim.values()) {
        report.push_str(&format!("normalized_raw_stress={:.6} kruskal_stress={:.6} ", k.normalized_raw, k.s));
    }
    report.push_str(&format!(
        "weighted_stress={:.6} iterations={} converged={}",
        res.final_stress(),
        res.stress_trace.len(),
        res.converged
    ));
    writeln!(ctx.out, "{report}")?;
    Ok(())
}

fn cmd_animate(a: AnimateArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let mut graphs = Vec::new();
    let sims = if !a.slices.is_empty() {
        let mut sims = Vec::new();
        for p in &a.slices {
            let g = read_net(p)?.0;
            sims.push(a.geodesic.distances(&g).with_context(|| p.display().to_string())?);
            graphs.push(g);
        }
        sims
    } else {
        a.slice_distances
            .iter()
            .map(|p| {
                read_matrix(p)?.into_similarity(Measure::EuclideanDistance).with_context(|| p.display().to_string())
            })
            .collect::<anyhow::Result<Vec<_>>>()?
    };
    if a.communities && graphs.is_empty() {
        bail!("--communities needs network slices (--slices)");
    }
    let net = TimeSlicedNetwork::from_labelled(&sims)?;
    let init = match &a.optimizer.init_coords {
        Some(p) => Init::Given(init_from_file(p, net.labels())?),
        None => Init::Random,
    };
    let layout_cfg = LayoutConfig {
        max_iterations: a.optimizer.max_iterations,
        convergence_epsilon: a.optimizer.epsilon,
        seed: ctx.seed,
        init,
        weighting: layout::Weighting::KamadaKawai,
    };
    let res =
        dynamic_layout(&net, &DynamicConfig { omega: a.omega, window: a.window }, &layout_cfg).map_err(
            |e| match e {
                scimap_core::Error::ZeroSliceDistance { i, j, t } => {
                    anyhow!("zero target distance between `{}` and `{}` in slice {t}", net.labels()[i], net.labels()[j])
                }
                e => e.into(),
            },
        )?;
    ctx.note(|| format!("{} sweeps, converged={}", res.stress_trace.len(), res.converged));

    let mut keys = res.animation_frames(&net);
    if a.communities {
        for (frame, g) in keys.iter_mut().zip(&graphs) {
            let part = partition_or_singletons(g, ctx.seed)?;
            let by_label: HashMap<&str, usize> =
                g.nodes().iter().zip(&part.assignment).map(|(n, &c)| (n.label.as_str(), c)).collect();
            for node in &mut frame.nodes {
                node.cluster = by_label.get(node.label.as_str()).copied();
            }
        }
    }
    if let Some(p) = &a.factors {
        let model = csv_io::read_factors(open(p)?).with_context(|| p.display().to_string())?;
        if a.factor == 0 || a.factor > model.factors() {
            bail!("--factor must be in 1..={}", model.factors());
        }
        keys = project_eigenvector_nodes(&keys, &model, a.factor - 1)?;
    }
    let frames = interpolate_frames(&keys, a.steps_between);
    emit(Some(&a.output), ctx.out, |w| csv_io::write_frames(w, &frames))?;
    if let Some(t) = &a.trace {
        emit(Some(t), ctx.out, |w| csv_io::write_trace(w, &res.stress_trace))?;
    }
    if let Some(dir) = &a.svg_dir {
        let enc = VisualEncoding { node_size_source: SizeSource::Constant, ..Default::default() };
        let docs = render::render_frames(&frames, &enc)?;
        render::write_numbered(dir, &a.prefix, &docs)?;
    }
    writeln!(
        ctx.out,
        "total_stress={:.6} static_stress={:.6} dynamic_stress={:.6} displacement={:.6} frames={} sweeps={} converged={}",
        res.total_stress(),
        res.static_stress,
        res.dynamic_stress,
        res.displacement(&net),
        frames.len(),
        res.stress_trace.len(),
        res.converged
    )?;
    Ok(())
}

/// Louvain, or every node on its own when the graph has no edges.
fn partition_or_singletons(g: &WeightedGraph, seed: u64) -> anyhow::Result<Partition> {
    match louvain_communities(g, seed) {
        Err(scimap_core::Error::NoEdges) => Ok(Partition { assignment: (0..g.node_count()).collect(), q: 0.0 }),
        other => Ok(other?),
    }
}

fn cmd_stats(a: StatsArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let (g, _) = read_net(&a.network)?;
    let degree = degree_centrality(&g, false);
    let weighted = degree_centrality(&g, true);
    let between = betweenness_centrality(&g, true);
    let part = partition_or_singletons(&g, ctx.seed)?;
    emit(Some(&a.output), ctx.out, |w| {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["label", "degree", "weighted_degree", "betweenness", "community"])?;
        for (i, n) in g.nodes().iter().enumerate() {
            wtr.write_record([
                n.label.clone(),
                degree[i].to_string(),
                weighted[i].to_string(),
                between[i].to_string(),
                part.assignment[i].to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    })?;
    writeln!(
        ctx.out,
        "q={:.6} communities={} nodes={} edges={}",
        part.q,
        part.communities(),
        g.node_count(),
        g.edge_count()
    )?;
    Ok(())
}

fn cmd_mi3(a: Mi3Args, ctx: &mut Ctx) -> anyhow::Result<()> {
    if a.groups.len() != 3 {
        bail!("expected exactly three --group options, got {}", a.groups.len());
    }
    let occ = read_matrix(&a.input)?.into_occurrence().with_context(|| a.input.display().to_string())?;
    let index: HashMap<&str, usize> = occ.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let groups = a
        .groups
        .iter()
        .map(|spec| {
            spec.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|l| index.get(l).copied().ok_or_else(|| anyhow!("unknown column `{l}`")))
                .collect::<anyhow::Result<Vec<usize>>>()
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let joint = group_distribution(&occ, [&groups[0], &groups[1], &groups[2]])?;
    let mu = mutual_information_3(&joint);
    writeln!(
        ctx.out,
        "mu_mbits={:.6} n_docs={} groups={}",
        mu,
        occ.n_docs(),
        groups.iter().map(|g| g.len().to_string()).collect::<Vec<_>>().join(",")
    )?;
    Ok(())
}

fn cmd_factors(a: FactorsArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let corr =
        read_matrix(&a.input)?.into_similarity(Measure::Pearson).with_context(|| a.input.display().to_string())?;
    let model = factor_model(&corr, a.factors)?;
    let mut report = String::new();
    for (k, (ev, ve)) in model.eigenvalues().iter().zip(model.variance_explained()).enumerate() {
        report.push_str(&format!("factor={} eigenvalue={:.6} variance_explained={:.6}\n", k + 1, ev, ve));
    }
    match &a.output {
        Some(p) => {
            emit(Some(p), ctx.out, |w| csv_io::write_factors(w, &model))?;
            ctx.out.write_all(report.as_bytes())?;
        }
        None => {
            csv_io::write_factors(&mut *ctx.out, &model)?;
            eprint!("{report}");
        }
    }
    Ok(())
}

fn cmd_render(a: RenderArgs, ctx: &mut Ctx) -> anyhow::Result<()> {
    let color = a.color.unwrap_or(if a.factors.is_some() { ColorArg::Factor } else { ColorArg::Community });
    let enc = VisualEncoding {
        node_size_source: match a.size {
            SizeArg::Degree => SizeSource::Degree,
            SizeArg::WeightedDegree => SizeSource::WeightedDegree,
            SizeArg::Constant => SizeSource::Constant,
        },
        node_color_source: match color {
            ColorArg::Community => ColorSource::Community,
            ColorArg::Factor => ColorSource::Factor,
            ColorArg::Constant => ColorSource::Constant,
        },
        width: a.width,
        height: a.height,
        labels: !a.no_labels,
        ..Default::default()
    };
    if !(enc.width > 0.0 && enc.height > 0.0) {
        bail!("canvas width and height must be positive");
    }

    if let Some(p) = &a.frames {
        let frames = csv_io::read_frames(open(p)?).with_context(|| p.display().to_string())?;
        let dir = a.svg_dir.as_ref().expect("clap requires --svg-dir");
        let docs = render::render_frames(&frames, &enc)?;
        let paths = render::write_numbered(dir, &a.prefix, &docs)?;
        ctx.note(|| format!("wrote {} frames", paths.len()));
        return Ok(());
    }

    let net_path = a.network.as_ref().expect("clap enforces one source");
    let (mut g, stored) = read_net(net_path)?;
    let pos = match &a.coords {
        Some(p) => {
            let (labels, pos) = csv_io::read_coordinates(open(p)?).with_context(|| p.display().to_string())?;
            render::positions_by_label(&g, &labels, &pos)?
        }
        None => stored.ok_or_else(|| anyhow!("{}: no coordinates; pass --coords", net_path.display()))?,
    };
    if let Some(p) = &a.partition {
        let part: HashMap<String, Option<usize>> =
            csv_io::read_partition(open(p)?).with_context(|| p.display().to_string())?.into_iter().collect();
        for n in g.nodes_mut() {
            n.cluster = part.get(&n.label).copied().flatten();
        }
    }
    if let Some(p) = &a.factors {
        let model = csv_io::read_factors(open(p)?).with_context(|| p.display().to_string())?;
        let dominant: HashMap<&str, Option<usize>> =
            model.labels().iter().map(String::as_str).zip(dominant_factors(&model, a.factor_threshold)).collect();
        for n in g.nodes_mut() {
            n.cluster = dominant.get(n.label.as_str()).copied().flatten();
        }
    }
    let svg = render::render_map(&g, &pos, &enc)?;
    let out = a.output.as_ref().expect("clap requires --output");
    fs::write(out, svg).with_context(|| format!("cannot write {}", out.display()))?;
    Ok(())
}
