use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use scimap::csv_io;
use scimap::pajek::read_network;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn scimap(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_scimap")).args(args).output().unwrap();
    Run {
        code: status.code().unwrap_or(-1),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn ok(args: &[&str]) -> String {
    let r = scimap(args);
    assert_eq!(r.code, 0, "scimap {}: {}", args.join(" "), r.stderr);
    r.stdout
}

fn fails(args: &[&str]) -> String {
    let r = scimap(args);
    assert_ne!(r.code, 0, "scimap {} unexpectedly succeeded", args.join(" "));
    assert!(r.stderr.starts_with("error:"), "stderr: {}", r.stderr);
    r.stderr
}

struct Workspace(tempfile::TempDir);

impl Workspace {
    fn new() -> Self {
        Self(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, content: &str) -> String {
        let p = self.0.path().join(name);
        fs::write(&p, content).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_str().unwrap().to_string()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.0.path().join(name)).unwrap()
    }
}

fn value(report: &str, key: &str) -> f64 {
    report
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key)?.strip_prefix('=')?.parse().ok())
        .unwrap_or_else(|| panic!("no `{key}` in `{report}`"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

const CORPUS: &str = "\
# four documents
d1 | Mapping Science Maps | Smith; Jones | 2010
d2 | Science of Science | Jones | 2010
d3 | Maps and Networks | Lee | 2011
d4 | Networks of Science | Smith; Lee | 2011
";

#[test]
fn version_is_semver() {
    let out = ok(&["--version"]);
    let v = out.trim().strip_prefix("scimap ").unwrap();
    assert_eq!(v.split('.').filter(|p| p.parse::<u32>().is_ok()).count(), 3, "{out}");
}

#[test]
fn matrix_rows_and_columns() {
    let ws = Workspace::new();
    let corpus = ws.file("c.txt", CORPUS);
    let out = ok(&["matrix", "--corpus", &corpus]);
    let m = csv_io::read_matrix(out.as_bytes()).unwrap();
    assert_eq!(m.row_labels, ["d1", "d2", "d3", "d4"]);
    // mapping science maps of and networks
    assert_eq!(m.col_labels.len(), 6);

    let out = ok(&["matrix", "--corpus", &corpus, "--kinds", "words,authors"]);
    let both = csv_io::read_matrix(out.as_bytes()).unwrap();
    assert_eq!(both.col_labels.len(), 6 + 3);

    let stop = ws.file("stop.txt", "of and\n");
    let out = ok(&["matrix", "--corpus", &corpus, "--stopwords", &stop, "--min-occurrence", "2"]);
    let m = csv_io::read_matrix(out.as_bytes()).unwrap();
    assert_eq!(m.col_labels, ["science", "maps", "networks"]);
    assert_eq!(m.values.row(1), [2.0, 0.0, 0.0]);

    let out = ok(&["matrix", "--corpus", &corpus, "--slice", "1"]);
    assert_eq!(csv_io::read_matrix(out.as_bytes()).unwrap().row_labels, ["d3", "d4"]);
}

#[test]
fn malformed_corpus_names_file_and_line() {
    let ws = Workspace::new();
    let corpus = ws.file("bad.txt", "d1 | Title | A | 2000\nd2 | missing year\n");
    let err = fails(&["matrix", "--corpus", &corpus]);
    assert!(err.contains("bad.txt") && err.contains("line 2"), "{err}");
    let dup = ws.file("dup.txt", "d1 | A | X | 2000\nd1 | B | Y | 2001\n");
    let err = fails(&["matrix", "--corpus", &dup]);
    assert!(err.contains("d1"), "{err}");
    fails(&["matrix", "--corpus", &ws.path("absent.txt")]);
}

#[test]
fn similarity_measures() {
    let ws = Workspace::new();
    let m = ws.file("m.csv", ",a,b,c\nd1,1,0,0\nd2,0,2,0\nd3,0,0,3\n");
    let out = ok(&["similarity", "--input", &m]);
    let s = csv_io::read_matrix(out.as_bytes()).unwrap();
    assert_eq!(s.values.as_slice(), [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);

    let out = ok(&["similarity", "--input", &m, "--measure", "pearson"]);
    let p = csv_io::read_matrix(out.as_bytes()).unwrap();
    assert!((p.values[(0, 1)] + 0.5).abs() < 1e-12);

    let out = ok(&["similarity", "--input", &m, "--distance"]);
    assert_eq!(csv_io::read_matrix(out.as_bytes()).unwrap().values[(0, 1)], 1.0);

    let out = ok(&["similarity", "--input", &m, "--measure", "cooccurrence"]);
    assert_eq!(csv_io::read_matrix(out.as_bytes()).unwrap().values[(2, 2)], 9.0);

    let err = fails(&["similarity", "--input", &m, "--measure", "jaccard"]);
    assert!(err.contains("jaccard"), "{err}");
}

#[test]
fn graph_threshold_and_isolates() {
    let ws = Workspace::new();
    let sim = ws.file("s.csv", ",a,b,c,d\na,1,0.2,0.5,0\nb,0.2,1,0.21,0\nc,0.5,0.21,1,0\nd,0,0,0,1\n");
    let out = ok(&["graph", "--input", &sim, "--threshold", "0.2"]);
    let (g, _) = read_network(&out).unwrap();
    assert_eq!(g.node_count(), 4);
    assert_eq!(g.edge_count(), 2);
    assert!(g.edges().iter().all(|e| e.weight > 0.2));

    let net = ws.path("g.net");
    ok(&["graph", "--input", &sim, "--threshold", "0.2", "--drop-isolates", "--output", &net]);
    let (g, _) = read_network(&fs::read_to_string(&net).unwrap()).unwrap();
    assert_eq!(g.node_count(), 3);

    let out = ok(&["graph", "--input", &sim, "--threshold", "0.2", "--include-equal"]);
    assert_eq!(read_network(&out).unwrap().0.edge_count(), 3);
}

#[test]
fn layout_reproducible_and_reports_stress() {
    let ws = Workspace::new();
    let cities = data("us_cities.csv");
    let run = |seed: &str, out: &str| {
        ok(&["layout", "--distances", cities.to_str().unwrap(), "--seed", seed, "--output", &ws.path(out)])
    };
    let r1 = run("3", "a.csv");
    let r2 = run("3", "b.csv");
    assert_eq!(r1, r2);
    assert_eq!(ws.read("a.csv"), ws.read("b.csv"));
    assert!(value(&r1, "normalized_raw_stress") <= 0.01);
    assert!(ws.read("a.csv").starts_with("label,x,y\nAtlanta,"));

    ok(&[
        "layout",
        "--distances",
        cities.to_str().unwrap(),
        "--output",
        &ws.path("c.csv"),
        "--trace",
        &ws.path("t.csv"),
        "--init-coords",
        &ws.path("a.csv"),
    ]);
    let trace = ws.read("t.csv");
    assert!(trace.starts_with("stress\n"));
    let values: Vec<f64> = trace.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn layout_named_zero_distance_error() {
    let ws = Workspace::new();
    let d = ws.file("d.csv", ",p,q,r\np,0,0,1\nq,0,0,1\nr,1,1,0\n");
    let err = fails(&["layout", "--distances", &d, "--weighting", "kamada-kawai", "--output", &ws.path("o.csv")]);
    assert!(err.contains("`p`") && err.contains("`q`"), "{err}");
    // uniform weighting tolerates coincident points
    ok(&["layout", "--distances", &d, "--output", &ws.path("o.csv")]);
}

#[test]
fn layout_from_network() {
    let ws = Workspace::new();
    let net = ws.file("p.net", "*Vertices 4\n1 \"a\"\n2 \"b\"\n3 \"c\"\n4 \"far\"\n*Edges\n1 2 1\n2 3 1\n");
    ok(&["layout", "--network", &net, "--output", &ws.path("xy.csv")]);
    let (labels, _) = csv_io::read_coordinates(ws.read("xy.csv").as_bytes()).unwrap();
    assert_eq!(labels, ["a", "b", "c", "far"]);
    let err = fails(&["layout", "--network", &net, "--disconnected", "error", "--output", &ws.path("xy.csv")]);
    assert!(err.contains("far"), "{err}");
}

/// Unit square with its diagonals, exactly realizable in the plane.
fn square() -> String {
    let d = std::f64::consts::SQRT_2;
    format!(",a,b,c,d\na,0,1,{d},1\nb,1,0,1,{d}\nc,{d},1,0,1\nd,1,{d},1,0\n")
}

#[test]
fn animate_frames_and_report() {
    let ws = Workspace::new();
    let s0 = ws.file("s0.csv", &square());
    let s1 = ws.file("s1.csv", ",a,b,c\na,0,1,2\nb,1,0,1\nc,2,1,0\n");
    let s2 = ws.file("s2.csv", &square());
    let out = ok(&[
        "animate",
        "--slice-distances",
        &s0,
        &s1,
        &s2,
        "--omega",
        "0.5",
        "--steps-between",
        "2",
        "--output",
        &ws.path("frames.csv"),
        "--svg-dir",
        &ws.path("svg"),
        "--prefix",
        "f",
    ]);
    let total = value(&out, "total_stress");
    let st = value(&out, "static_stress");
    let dy = value(&out, "dynamic_stress");
    assert!((total - st - dy).abs() < 2e-6, "{out}");
    assert_eq!(value(&out, "frames"), 7.0);
    let frames = csv_io::read_frames(ws.read("frames.csv").as_bytes()).unwrap();
    assert_eq!(frames.len(), 7);
    let svgs: Vec<_> = fs::read_dir(ws.path("svg")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(svgs.len(), 7);
    assert!(Path::new(&ws.path("svg")).join("f_0006.svg").exists());

    // the frames CSV renders to the same documents
    ok(&["render", "--frames", &ws.path("frames.csv"), "--svg-dir", &ws.path("again"), "--prefix", "f"]);
    // construct markers are not stored in the CSV; none were present here
    for k in 0..7 {
        let name = format!("f_{k:04}.svg");
        assert_eq!(
            fs::read(Path::new(&ws.path("svg")).join(&name)).unwrap(),
            fs::read(Path::new(&ws.path("again")).join(&name)).unwrap()
        );
    }
}

#[test]
fn animate_with_zero_omega_matches_static_layouts() {
    let ws = Workspace::new();
    let a = ws.file("a.csv", &square());
    let b = ws.file("b.csv", ",a,b,c\na,0,3,4\nb,3,0,5\nc,4,5,0\n");
    let out = ok(&[
        "animate",
        "--slice-distances",
        &a,
        &b,
        "--omega",
        "0",
        "--epsilon",
        "1e-12",
        "--max-iterations",
        "5000",
        "--output",
        &ws.path("f.csv"),
    ]);
    let mut separate = 0.0;
    for p in [&a, &b] {
        let r = ok(&[
            "layout",
            "--distances",
            p,
            "--weighting",
            "kk",
            "--epsilon",
            "1e-12",
            "--max-iterations",
            "5000",
            "--output",
            &ws.path("x.csv"),
        ]);
        separate += value(&r, "weighted_stress");
    }
    assert_eq!(value(&out, "dynamic_stress"), 0.0);
    assert!((value(&out, "total_stress") - separate).abs() < 1e-5, "{out} vs {separate}");
}

#[test]
fn animate_with_networks_communities_and_factors() {
    let ws = Workspace::new();
    let two_triangles = "*Vertices 6\n1 \"a\"\n2 \"b\"\n3 \"c\"\n4 \"d\"\n5 \"e\"\n6 \"f\"\n*Edges\n1 2 1\n2 3 1\n1 3 1\n4 5 1\n5 6 1\n4 6 1\n3 4 1\n";
    let n0 = ws.file("n0.net", two_triangles);
    let n1 = ws.file("n1.net", "*Vertices 3\n1 \"a\"\n2 \"b\"\n3 \"g\"\n*Edges\n1 2 1\n2 3 1\n");
    let factors = ws.file("f.csv", "label,loading_1\na,0.8\nb,0.2\nc,-0.5\n");
    ok(&[
        "animate",
        "--slices",
        &n0,
        &n1,
        "--communities",
        "--factors",
        &factors,
        "--output",
        &ws.path("frames.csv"),
        "--svg-dir",
        &ws.path("svg"),
    ]);
    let frames = csv_io::read_frames(ws.read("frames.csv").as_bytes()).unwrap();
    assert_eq!(frames.len(), 2);
    let f0 = &frames[0].nodes;
    let cluster = |l: &str| f0.iter().find(|n| n.label == l).unwrap().cluster;
    assert_eq!(cluster("a"), cluster("c"));
    assert_ne!(cluster("a"), cluster("d"));
    assert!(f0.iter().any(|n| n.label == "factor 1"));
    assert!(fs::read_to_string(Path::new(&ws.path("svg")).join("frame_0000.svg")).unwrap().contains("<rect "));

    let err = fails(&[
        "animate",
        "--slice-distances",
        &ws.file("d.csv", &square()),
        "--communities",
        "--output",
        &ws.path("x.csv"),
    ]);
    assert!(err.contains("--slices"), "{err}");
}

#[test]
fn stats_modularity_and_betweenness() {
    let ws = Workspace::new();
    let tri = ws.file(
        "t.net",
        "*Vertices 6\n1 \"a\"\n2 \"b\"\n3 \"c\"\n4 \"d\"\n5 \"e\"\n6 \"f\"\n*Edges\n1 2 1\n2 3 1\n1 3 1\n4 5 1\n5 6 1\n4 6 1\n",
    );
    let out = ok(&["stats", "--network", &tri, "--output", &ws.path("s.csv")]);
    assert!(out.starts_with("q=0.500000 communities=2 "), "{out}");
    let again = ok(&["stats", "--network", &tri, "--output", &ws.path("s2.csv")]);
    assert_eq!(out, again);
    assert_eq!(ws.read("s.csv"), ws.read("s2.csv"));

    let star = ws.file("star.net", "*Vertices 4\n1 \"hub\"\n2 \"x\"\n3 \"y\"\n4 \"z\"\n*Edges\n1 2 2\n1 3 1\n1 4 1\n");
    ok(&["stats", "--network", &star, "--output", &ws.path("star.csv")]);
    let csv = ws.read("star.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("label,degree,weighted_degree,betweenness,community"));
    assert!(lines.next().unwrap().starts_with("hub,3,4,1,"));
    assert!(lines.next().unwrap().starts_with("x,1,2,0,"));

    let empty = ws.file("e.net", "*Vertices 2\n1 \"a\"\n2 \"b\"\n*Edges\n");
    assert!(ok(&["stats", "--network", &empty, "--output", &ws.path("e.csv")]).starts_with("q=0.000000 communities=2"));
}

#[test]
fn mi3_reports_and_rejects_overlap() {
    let ws = Workspace::new();
    let xor = ws.file("x.csv", ",x,y,z\nd1,0,0,0\nd2,0,1,1\nd3,1,0,1\nd4,1,1,0\n");
    let out = ok(&["mi3", "--input", &xor, "--group", "x", "--group", "y", "--group", "z"]);
    assert_eq!(out, "mu_mbits=-1000.000000 n_docs=4 groups=1,1,1\n");

    let mut rows = String::from(",x,y,z\n");
    for (i, bits) in (0..8).map(|b| [b >> 2 & 1, b >> 1 & 1, b & 1]).enumerate() {
        rows.push_str(&format!("d{i},{},{},{}\n", bits[0], bits[1], bits[2]));
    }
    let indep = ws.file("i.csv", &rows);
    let out = ok(&["mi3", "--input", &indep, "--group", "x", "--group", "y", "--group", "z"]);
    assert!(value(&out, "mu_mbits").abs() < 1e-6, "{out}");

    let err = fails(&["mi3", "--input", &xor, "--group", "x,y", "--group", "y", "--group", "z"]);
    assert!(err.contains("`y`"), "{err}");
    fails(&["mi3", "--input", &xor, "--group", "x", "--group", "y"]);
    fails(&["mi3", "--input", &xor, "--group", "x", "--group", "y", "--group", "nope"]);
}

#[test]
fn factors_and_factor_colouring() {
    let ws = Workspace::new();
    let corr = ws.file("r.csv", ",a,b,c\na,1,0.8,0\nb,0.8,1,0\nc,0,0,1\n");
    let out = ok(&["factors", "--input", &corr, "--factors", "2", "--output", &ws.path("f.csv")]);
    assert!(out.starts_with("factor=1 eigenvalue=1.800000 variance_explained=0.600000\n"), "{out}");
    let model = csv_io::read_factors(ws.read("f.csv").as_bytes()).unwrap();
    assert!((model.loadings()[(0, 0)] - 0.9f64.sqrt()).abs() < 1e-9);

    let net = ws.file("g.net", "*Vertices 3\n1 \"a\" 0 0\n2 \"b\" 1 0\n3 \"c\" 0 1\n*Edges\n1 2 0.8\n");
    let fills = |factors: &str| {
        let f = ws.path(factors);
        ok(&["render", "--network", &net, "--factors", &f, "--factor-threshold", "0.5", "--output", &ws.path("m.svg")]);
        ws.read("m.svg")
            .lines()
            .filter(|l| l.starts_with("<circle"))
            .map(|l| l.split("fill=\"").nth(1).unwrap()[..7].to_string())
            .collect::<Vec<_>>()
    };
    let two = fills("f.csv");
    assert_eq!(two[0], two[1]);
    assert_ne!(two[0], two[2]);
    assert_ne!(two[2], "#ffffff");

    ok(&["factors", "--input", &corr, "--factors", "1", "--output", &ws.path("f1.csv")]);
    let one = fills("f1.csv");
    assert_eq!(one[0], two[0]);
    assert_eq!(one[2], "#ffffff", "factor-neutral node");
}

#[test]
fn render_requires_positions_for_every_node() {
    let ws = Workspace::new();
    let net = ws.file("g.net", "*Vertices 2\n1 \"a\"\n2 \"b\"\n*Edges\n1 2 1\n");
    let coords = ws.file("xy.csv", "label,x,y\na,0,0\n");
    let err = fails(&["render", "--network", &net, "--coords", &coords, "--output", &ws.path("m.svg")]);
    assert!(err.contains("`b`"), "{err}");
    let err = fails(&["render", "--network", &net, "--output", &ws.path("m.svg")]);
    assert!(err.contains("--coords"), "{err}");
}

#[test]
fn usage_errors_exit_nonzero() {
    let r = scimap(&["layout", "--output", "x.csv"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error:"));
    let r = scimap(&["frobnicate"]);
    assert_ne!(r.code, 0);
}
