#![allow(clippy::needless_range_loop)]

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scimap::csv_io::{self, LabeledMatrix};
use scimap::pajek::{read_network, write_network};
use scimap_core::dynamic::{
    dynamic_layout, dynamic_stress, independent_layouts, DynamicConfig, LayoutFrameSet, TimeSlicedNetwork,
};
use scimap_core::graph::WeightedGraph;
use scimap_core::info::{mutual_information_3, JointDistribution3};
use scimap_core::layout::{kk_stress, mds_layout, procrustes, LayoutConfig, Positions, Weighting};
use scimap_core::linalg::Matrix;
use scimap_core::stats::{betweenness_centrality, louvain_communities, modularity_q};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_scimap")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn scimap(args: &[&str]) -> Result<String, String> {
    let out = Command::new(bin()).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("scimap {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8(out.stdout).unwrap())
}

fn report_value(report: &str, key: &str) -> Option<f64> {
    report.split_whitespace().find_map(|kv| kv.strip_prefix(key)?.strip_prefix('=')?.parse().ok())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- helpers

/// Distances between random points in 4D, offset away from zero.
fn random_distances(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let pts: Vec<[f64; 4]> = (0..n).map(|_| [rng.gen(), rng.gen(), rng.gen(), rng.gen()]).collect();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let s: f64 = (0..4).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
                d[(i, j)] = s.sqrt() + 0.05;
            }
        }
    }
    d
}

/// Three slices over `n` labels; each node is absent from a slice with
/// probability `churn`.
fn random_network(rng: &mut ChaCha8Rng, n: usize, churn: f64) -> TimeSlicedNetwork {
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let slices = (0..3)
        .map(|_| {
            let mut nodes: Vec<usize> = (0..n).filter(|_| !rng.gen_bool(churn)).collect();
            if nodes.len() < 2 {
                nodes = vec![0, 1];
            }
            let d = random_distances(rng, nodes.len());
            (nodes, d)
        })
        .collect();
    TimeSlicedNetwork::new(labels, slices).unwrap()
}

fn monotone(trace: &[f64]) -> Option<(usize, f64, f64)> {
    trace.windows(2).enumerate().find(|(_, w)| w[1] > w[0] + 1e-12).map(|(k, w)| (k, w[0], w[1]))
}

/// Classical (Torgerson) scaling: top two eigenvectors of the double-centred
/// squared distances, by power iteration with deflation.
fn classical_mds(d: &Matrix) -> Positions {
    let n = d.rows();
    let mut b = vec![vec![0.0; n]; n];
    let sq = |i: usize, j: usize| d[(i, j)] * d[(i, j)];
    let row_mean: Vec<f64> = (0..n).map(|i| (0..n).map(|j| sq(i, j)).sum::<f64>() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            b[i][j] = -0.5 * (sq(i, j) - row_mean[i] - row_mean[j] + grand);
        }
    }
    let mut coords = vec![[0.0; 2]; n];
    for dim in 0..2 {
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 * 0.1).collect();
        let mut lambda = 0.0;
        for _ in 0..10_000 {
            let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| b[i][j] * v[j]).sum()).collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            v = w.iter().map(|x| x / norm).collect();
            lambda = norm;
        }
        for i in 0..n {
            coords[i][dim] = v[i] * lambda.sqrt();
            for j in 0..n {
                b[i][j] -= lambda * v[i] * v[j];
            }
        }
    }
    Positions::new(coords).unwrap()
}

/// City centres (latitude, longitude) projected equirectangularly.
fn geography(labels: &[String]) -> Positions {
    let table = [
        ("Atlanta", 33.749, -84.388),
        ("Chicago", 41.878, -87.630),
        ("Denver", 39.739, -104.990),
        ("Houston", 29.760, -95.370),
        ("Los Angeles", 34.052, -118.244),
        ("Miami", 25.762, -80.192),
        ("New York", 40.713, -74.006),
        ("San Francisco", 37.775, -122.419),
        ("Seattle", 47.606, -122.332),
        ("Washington DC", 38.907, -77.037),
    ];
    let k = 37.0f64.to_radians().cos();
    Positions::new(
        labels
            .iter()
            .map(|l| {
                let &(_, lat, lon) = table.iter().find(|t| t.0 == l).unwrap();
                [lon * k, lat]
            })
            .collect(),
    )
    .unwrap()
}

// -------------------------------------------------------------- criteria

fn table1() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let coords = dir.path().join("cities.csv");
    let csv = data("us_cities.csv");
    let start = Instant::now();
    let report = scimap(&["layout", "--distances", csv.to_str().unwrap(), "--output", coords.to_str().unwrap()])?;
    let elapsed = start.elapsed();
    let stress = report_value(&report, "normalized_raw_stress").ok_or("no stress in report")?;
    check(stress <= 0.01, || format!("normalized raw stress {stress} > 0.01"))?;
    check(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;

    let (labels, pos) = csv_io::read_coordinates(std::fs::File::open(&coords).unwrap()).map_err(|e| e.to_string())?;
    let d = csv_io::read_matrix(std::fs::File::open(&csv).unwrap()).unwrap().values;
    let reference = classical_mds(&d);
    let fit = procrustes(&reference, &pos, false).unwrap();
    let rel = fit.residual / fit.reference_scale;
    check(rel < 0.05, || format!("Procrustes residual {:.2}% of scale vs classical solution", rel * 100.0))?;

    let geo = geography(&labels);
    let on_map = procrustes(&geo, &pos, true).unwrap();
    let x = |name: &str| on_map.aligned[labels.iter().position(|l| l == name).unwrap()][0];
    let west = ["Seattle", "San Francisco", "Los Angeles"].map(x);
    let east = ["New York", "Washington DC", "Miami"].map(x);
    let west_max = west.iter().cloned().fold(f64::MIN, f64::max);
    let east_min = east.iter().cloned().fold(f64::MAX, f64::min);
    check(west_max < east_min, || "west coast cities not separated from east coast cities".into())?;
    for axis in 0..2 {
        let mut pairs = 0;
        let mut agree = 0;
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                if geo[i][axis] < geo[j][axis] {
                    pairs += 1;
                    agree += usize::from(on_map.aligned[i][axis] < on_map.aligned[j][axis]);
                }
            }
        }
        check(agree as f64 >= 0.9 * pairs as f64, || {
            format!("axis {axis}: {agree}/{pairs} pairs ordered as on the globe")
        })?;
    }
    Ok(format!(
        "normalized raw stress {stress:.6}, residual {:.3}% vs classical, {:.3}% vs geography, {:.0} ms",
        rel * 100.0,
        on_map.residual / on_map.reference_scale * 100.0,
        elapsed.as_secs_f64() * 1000.0
    ))
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut traces = 0;
    for case in 0..50u64 {
        let d = random_distances(&mut rng, 15);
        for weighting in [Weighting::Uniform, Weighting::KamadaKawai] {
            let cfg = LayoutConfig { seed: case, weighting, ..Default::default() };
            let out = mds_layout(&d, &cfg).unwrap();
            if let Some((k, a, b)) = monotone(&out.stress_trace) {
                return Err(format!("static case {case} {weighting:?}: sweep {k} {a} -> {b}"));
            }
            traces += 1;
        }
        let net = random_network(&mut rng, 15, 0.2);
        for (omega, window) in [(0.1, 1), (1.0, 2)] {
            let cfg = LayoutConfig { seed: case, ..Default::default() };
            let out = dynamic_layout(&net, &DynamicConfig { omega, window }, &cfg).unwrap();
            if let Some((k, a, b)) = monotone(&out.stress_trace) {
                return Err(format!("dynamic case {case} omega {omega}: sweep {k} {a} -> {b}"));
            }
            traces += 1;
        }
    }
    Ok(format!("{traces} traces non-increasing"))
}

fn omega_zero() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let net = random_network(&mut rng, 12, 0.15);
    let cfg = LayoutConfig { seed: 9, max_iterations: 100_000, convergence_epsilon: 1e-14, ..Default::default() };
    let joint = dynamic_layout(&net, &DynamicConfig { omega: 0.0, window: 1 }, &cfg).unwrap();
    let separate: f64 = independent_layouts(&net, &cfg).unwrap().iter().map(|l| l.final_stress()).sum();
    let rel = (joint.total_stress() - separate).abs() / separate;
    check(rel <= 1e-6, || format!("joint {} vs separate {separate}: relative gap {rel:e}", joint.total_stress()))?;
    Ok(format!("total {:.9} vs {:.9} (relative gap {rel:.1e})", joint.total_stress(), separate))
}

fn mental_map() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let net = random_network(&mut rng, 12, 0.1);
    let cfg = LayoutConfig { seed: 1, max_iterations: 100_000, convergence_epsilon: 1e-12, ..Default::default() };
    let mut moves = Vec::new();
    for omega in [0.01, 0.1, 1.0, 10.0] {
        let out = dynamic_layout(&net, &DynamicConfig { omega, window: 1 }, &cfg).unwrap();
        moves.push(out.displacement(&net));
    }
    check(moves.windows(2).all(|w| w[1] <= w[0]), || format!("displacements {moves:?}"))?;
    Ok(format!("displacement {}", moves.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>().join(" >= ")))
}

fn brute_betweenness(g: &WeightedGraph) -> Vec<f64> {
    fn walk(v: usize, t: usize, adj: &[Vec<usize>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in &adj[v] {
            if !path.contains(&w) {
                path.push(w);
                walk(w, t, adj, path, out);
                path.pop();
            }
        }
    }
    let n = g.node_count();
    let adj: Vec<Vec<usize>> = g.adjacency().into_iter().map(|a| a.into_iter().map(|(v, _)| v).collect()).collect();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let mut paths = Vec::new();
            walk(s, t, &adj, &mut vec![s], &mut paths);
            let Some(best) = paths.iter().map(Vec::len).min() else { continue };
            paths.retain(|p| p.len() == best);
            for (v, score) in bc.iter_mut().enumerate() {
                if v != s && v != t {
                    *score += paths.iter().filter(|p| p.contains(&v)).count() as f64 / paths.len() as f64;
                }
            }
        }
    }
    if n > 2 {
        let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
        bc.iter_mut().for_each(|b| *b /= pairs);
    }
    bc
}

fn betweenness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = rng.gen_range(2..=8);
        let p = rng.gen_range(0.2..0.8);
        let mut g = WeightedGraph::from_labels((0..n).map(|i| format!("n{i}")));
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(a, b, rng.gen_range(0.1..2.0)).unwrap();
                }
            }
        }
        let fast = betweenness_centrality(&g, true);
        let slow = brute_betweenness(&g);
        for (a, b) in fast.iter().zip(&slow) {
            worst = worst.max((a - b).abs());
        }
        check(worst <= 1e-12, || format!("graph {case}: {fast:?} vs {slow:?}"))?;
    }
    Ok(format!("100 graphs, max deviation {worst:.1e}"))
}

fn modularity() -> Outcome {
    let mut g = WeightedGraph::from_labels((0..6).map(|i| format!("n{i}")));
    for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
        g.add_edge(a, b, 1.0).unwrap();
    }
    let part = louvain_communities(&g, 0).unwrap();
    check((part.q - 0.5).abs() <= 1e-9, || format!("Louvain Q = {}", part.q))?;
    let expected = [0, 0, 0, 1, 1, 1];
    let same =
        (0..6).all(|i| (0..6).all(|j| (part.assignment[i] == part.assignment[j]) == (expected[i] == expected[j])));
    check(same && part.communities() == 2, || format!("partition {:?}", part.assignment))?;

    // every set partition of six nodes, as restricted growth strings
    let mut best = f64::MIN;
    let mut count = 0;
    let mut labels = [0usize; 6];
    loop {
        best = best.max(modularity_q(&g, &labels).unwrap());
        count += 1;
        let mut i = 5;
        loop {
            let max_prefix = labels[..i].iter().copied().max().unwrap_or(0);
            if i > 0 && labels[i] <= max_prefix {
                labels[i] += 1;
                labels[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
            if i <= 1 {
                i = usize::MAX;
                break;
            }
            i -= 1;
        }
        if i == usize::MAX {
            break;
        }
    }
    check(count == 203, || format!("enumerated {count} partitions"))?;
    check((best - part.q).abs() <= 1e-9, || format!("exhaustive optimum {best} vs Louvain {}", part.q))?;
    Ok(format!("Q = {:.9}, optimal among {count} partitions", part.q))
}

fn mu_from_rows(rows: &[[usize; 3]]) -> f64 {
    let mut counts = [0u64; 8];
    for r in rows {
        counts[r[0] * 4 + r[1] * 2 + r[2]] += 1;
    }
    mutual_information_3(&JointDistribution3::from_counts([2, 2, 2], &counts).unwrap())
}

fn mu_signs() -> Outcome {
    let xor = mu_from_rows(&[[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]);
    let triple = mu_from_rows(&[[0, 0, 0], [1, 1, 1]]);
    let px = [0.3, 0.7];
    let py = [0.6, 0.4];
    let pz = [0.25, 0.75];
    let mut p = Vec::new();
    for a in px {
        for b in py {
            for c in pz {
                p.push(a * b * c);
            }
        }
    }
    let indep = mutual_information_3(&JointDistribution3::new([2, 2, 2], p).unwrap());
    check((xor + 1000.0).abs() <= 1e-6, || format!("xor {xor}"))?;
    check(indep.abs() <= 1e-9, || format!("independent {indep}"))?;
    check((triple - 1000.0).abs() <= 1e-6, || format!("triplicated {triple}"))?;

    // the same XOR through the command line
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("xor.csv");
    std::fs::write(&m, ",x,y,z\nd1,0,0,0\nd2,0,1,1\nd3,1,0,1\nd4,1,1,0\n").unwrap();
    let report = scimap(&["mi3", "--input", m.to_str().unwrap(), "--group", "x", "--group", "y", "--group", "z"])?;
    check(report.trim() == "mu_mbits=-1000.000000 n_docs=4 groups=1,1,1", || {
        format!("mi3 report `{}`", report.trim())
    })?;
    Ok(format!("xor {xor:.9}, independent {indep:.1e}, triplicated {triple:.9} mbits"))
}

fn decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let net = random_network(&mut rng, 10, 0.2);
        let omega = rng.gen_range(0.0..5.0);
        let frames: Vec<Positions> = net
            .slices()
            .iter()
            .map(|s| {
                Positions::new(
                    (0..s.nodes().len()).map(|_| [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]).collect(),
                )
                .unwrap()
            })
            .collect();
        let set = LayoutFrameSet {
            frames: frames.clone(),
            omega,
            window: 1,
            static_stress: 0.0,
            dynamic_stress: 0.0,
            stress_trace: Vec::new(),
            converged: false,
        };
        let s = dynamic_stress(&set, &net).unwrap();
        // independent recomputation of both terms
        let static_oracle: f64 =
            frames.iter().zip(net.slices()).map(|(f, sl)| kk_stress(f, sl.distances()).unwrap().total).sum();
        let mut dynamic_oracle = 0.0;
        for t in 0..2 {
            let (a, b) = (&net.slices()[t], &net.slices()[t + 1]);
            for (k, id) in a.nodes().iter().enumerate() {
                if let Some(m) = b.nodes().iter().position(|x| x == id) {
                    let (p, q) = (frames[t][k], frames[t + 1][m]);
                    dynamic_oracle += omega * ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2));
                }
            }
        }
        for (what, got, want) in [
            ("identity", s.total, s.static_term + s.dynamic_term),
            ("static", s.static_term, static_oracle),
            ("dynamic", s.dynamic_term, dynamic_oracle),
        ] {
            let rel = (got - want).abs() / want.abs().max(1e-300);
            worst = worst.max(rel);
            check(rel <= 1e-9, || format!("case {case} {what}: {got} vs {want}"))?;
        }
    }
    Ok(format!("50 random frame sets, worst relative error {worst:.1e}"))
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let n = rng.gen_range(0..12);
        let mut g = WeightedGraph::from_labels((0..n).map(|i| format!("w{}", rng.gen_range(0..1000) * 100 + i)));
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.3) {
                    g.add_edge(a, b, f64::from(rng.gen_range(1..10_000_000u32)) / 1e6).unwrap();
                }
            }
        }
        let first = write_network(&g, None).unwrap();
        let (back, _) = read_network(&first).map_err(|e| format!("case {case}: {e}"))?;
        let idx = back.label_index();
        for e in g.edges() {
            let (a, b) = (idx[g.nodes()[e.a].label.as_str()], idx[g.nodes()[e.b].label.as_str()]);
            check(back.weight(a, b) == Some(e.weight), || format!("case {case}: weight {} changed", e.weight))?;
        }
        check(back.edge_count() == g.edge_count(), || format!("case {case}: edge count"))?;
        check(write_network(&back, None).unwrap() == first, || format!("case {case}: second network write differs"))?;

        let rows = rng.gen_range(1..6);
        let cols = rng.gen_range(1..6);
        let m = LabeledMatrix {
            row_labels: (0..rows).map(|i| format!("d{i}")).collect(),
            col_labels: (0..cols).map(|j| format!("v,{j}")).collect(),
            values: Matrix::from_row_major(rows, cols, (0..rows * cols).map(|_| rng.gen::<f64>() * 10.0).collect())
                .unwrap(),
        };
        let mut w1 = Vec::new();
        csv_io::write_matrix(&mut w1, &m).unwrap();
        let read = csv_io::read_matrix(w1.as_slice()).map_err(|e| e.to_string())?;
        check(read == m, || format!("case {case}: matrix changed"))?;
        let mut w2 = Vec::new();
        csv_io::write_matrix(&mut w2, &read).unwrap();
        check(w1 == w2, || format!("case {case}: second matrix write differs"))?;
    }
    Ok("100 networks and 100 matrices round-trip; rewrites byte-identical".into())
}

fn pipeline_once(dir: &Path) -> Result<(), String> {
    let p = |name: &str| dir.join(name).to_str().unwrap().to_string();
    let corpus = data("toy_corpus.txt");
    let stop = data("stopwords.txt");
    scimap(&[
        "matrix",
        "--corpus",
        corpus.to_str().unwrap(),
        "--stopwords",
        stop.to_str().unwrap(),
        "--min-occurrence",
        "2",
        "--output",
        &p("matrix.csv"),
    ])?;
    scimap(&["similarity", "--input", &p("matrix.csv"), "--measure", "cosine", "--output", &p("cosine.csv")])?;
    scimap(&[
        "graph",
        "--input",
        &p("cosine.csv"),
        "--threshold",
        "0.2",
        "--drop-isolates",
        "--output",
        &p("map.net"),
    ])?;
    let layout = scimap(&["layout", "--network", &p("map.net"), "--seed", "7", "--output", &p("coords.csv")])?;
    std::fs::write(dir.join("layout.txt"), layout).unwrap();
    let stats = scimap(&["stats", "--network", &p("map.net"), "--seed", "7", "--output", &p("stats.csv")])?;
    std::fs::write(dir.join("stats.txt"), stats).unwrap();
    scimap(&[
        "render",
        "--network",
        &p("map.net"),
        "--coords",
        &p("coords.csv"),
        "--partition",
        &p("stats.csv"),
        "--output",
        &p("map.svg"),
    ])?;
    Ok(())
}

fn pipeline() -> Outcome {
    let runs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for r in &runs {
        pipeline_once(r.path())?;
    }
    let files =
        ["matrix.csv", "cosine.csv", "map.net", "coords.csv", "layout.txt", "stats.csv", "stats.txt", "map.svg"];
    for f in files {
        let a = std::fs::read(runs[0].path().join(f)).unwrap();
        let b = std::fs::read(runs[1].path().join(f)).unwrap();
        check(a == b, || format!("{f} differs between runs"))?;
    }
    let (g, _) =
        read_network(&std::fs::read_to_string(runs[0].path().join("map.net")).unwrap()).map_err(|e| e.to_string())?;
    let svg = std::fs::read_to_string(runs[0].path().join("map.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).map_err(|e| format!("map.svg: {e}"))?;
    check(doc.root_element().has_tag_name("svg"), || "root is not <svg>".into())?;
    let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    let lines = doc.descendants().filter(|n| n.has_tag_name("line")).count();
    check(circles == g.node_count() && lines == g.edge_count(), || format!("{circles} circles, {lines} lines"))?;
    let q = std::fs::read_to_string(runs[0].path().join("stats.txt")).unwrap();
    Ok(format!("{} nodes, {} edges, {}; outputs byte-identical across runs", g.node_count(), g.edge_count(), q.trim()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table 1 reproduction", table1),
        ("majorization monotonicity", monotonicity),
        ("omega = 0 degeneracy", omega_zero),
        ("mental-map stability", mental_map),
        ("betweenness oracle", betweenness),
        ("modularity oracle", modularity),
        ("mutual information signs", mu_signs),
        ("stress decomposition identity", decomposition),
        ("format round-trips", round_trips),
        ("end-to-end pipeline", pipeline),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
