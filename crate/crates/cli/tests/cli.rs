use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kgstroll_testkit::mutag::{mutag_graph, MutagGraph};
use kgstroll_testkit::{to_ntriples, StubSparqlServer};
use tempfile::TempDir;

fn kgstroll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgstroll")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Fixture {
    dir: TempDir,
    graph: PathBuf,
    entities: PathBuf,
    mutag: MutagGraph,
}

impl Fixture {
    fn new(molecules: usize) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let mutag = mutag_graph(molecules, 3);
        let graph = dir.path().join("mutag.nt");
        std::fs::write(&graph, to_ntriples(&mutag.triples)).unwrap();
        let entities = dir.path().join("ents.txt");
        std::fs::write(&entities, mutag.molecules.join("\n") + "\n").unwrap();
        Fixture { dir, graph, entities, mutag }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn base_args(&self) -> Vec<String> {
        [
            "--input",
            self.graph.to_str().unwrap(),
            "--entities",
            self.entities.to_str().unwrap(),
            "--walker",
            "random:depth=2,max=20,sampler=pagerank:alpha=0.85",
            "--walker",
            "halk:depth=2",
            "--skip-predicate",
            &MutagGraph::is_mutagenic(),
            "--epochs",
            "3",
            "--dimension",
            "16",
            "--workers",
            "1",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }
}

fn run(args: &[String]) -> Output {
    kgstroll(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn with(mut args: Vec<String>, extra: &[&str]) -> Vec<String> {
    args.extend(extra.iter().map(|s| s.to_string()));
    args
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn full_run_writes_vectors_literals_and_walks() {
    let f = Fixture::new(8);
    let out = f.path("vecs.txt");
    let lits = f.path("lits.json");
    let walks = f.path("walks.tsv");
    let o = run(&with(
        f.base_args(),
        &[
            "--dimension",
            "100",
            "--out",
            out.to_str().unwrap(),
            "--literals-out",
            lits.to_str().unwrap(),
            "--walks-out",
            walks.to_str().unwrap(),
            "--literal-path",
            &format!("{},{}", MutagGraph::has_atom(), MutagGraph::charge()),
        ],
    ));
    assert!(o.status.success(), "{}", stderr(&o));
    let vecs = read(&out);
    let mut lines = vecs.lines();
    let header: Vec<usize> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(header[1], 100);
    assert_eq!(header[0], lines.count());
    assert!(!vecs.contains(&MutagGraph::is_mutagenic()));

    let table: serde_json::Value = serde_json::from_str(&read(&lits)).unwrap();
    let rows = table.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let column = format!("{}.{}", MutagGraph::has_atom(), MutagGraph::charge());
    assert!(rows[0][&column].is_null());
    assert!(rows[1][&column].is_number());
    assert!(rows[2][&column].is_array());

    let tsv = read(&walks);
    assert!(tsv.lines().all(|l| l.split('\t').count() == 3));
    assert!(tsv.lines().any(|l| l.starts_with("0:random\t")));
    assert!(tsv.lines().any(|l| l.starts_with("1:halk\t")));
    let log = stderr(&o);
    for key in ["entities total=8", "walks=", "epoch=3 loss=", "done "] {
        assert!(log.contains(key), "{key} missing from {log}");
    }
    assert_eq!(f.mutag.molecules.len(), 8);
}

#[test]
fn missing_entities_is_a_usage_error() {
    let f = Fixture::new(2);
    let o = kgstroll(&["--input", f.graph.to_str().unwrap(), "--walker", "random:depth=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--entities"));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = kgstroll(&["--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn bad_walker_is_a_configuration_error() {
    let f = Fixture::new(2);
    let mut args = f.base_args();
    args[5] = "random:depth=2,sampler=zipf".into();
    assert_eq!(run(&args).status.code(), Some(1));
    let o = run(&with(f.base_args(), &["--literal-path", &MutagGraph::is_mutagenic()]));
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert_eq!(run(&with(f.base_args(), &["--workers", "0"])).status.code(), Some(1));
}

#[test]
fn malformed_input_reports_line_and_lenient_recovers() {
    let f = Fixture::new(3);
    let mut text = read(&f.graph);
    let mut lines: Vec<&str> = text.lines().collect();
    lines.insert(2, "<http://broken> <http://p> .");
    text = lines.join("\n") + "\n";
    std::fs::write(&f.graph, text).unwrap();
    let o = run(&with(f.base_args(), &["--out", f.path("v.txt").to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = run(&with(f.base_args(), &["--lenient", "--out", f.path("v.txt").to_str().unwrap()]));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("parse skipped=1"));
}

#[test]
fn unreadable_files_and_absent_entities_exit_two() {
    let f = Fixture::new(2);
    let mut args = f.base_args();
    args[1] = f.path("nope.nt").to_str().unwrap().into();
    assert_eq!(run(&args).status.code(), Some(2));
    std::fs::write(&f.entities, "http://absent/a\nhttp://absent/b\n").unwrap();
    let o = run(&f.base_args());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("none of the 2 seed entities"));
    std::fs::write(&f.entities, "not an iri\n").unwrap();
    assert_eq!(run(&f.base_args()).status.code(), Some(2));
}

#[test]
fn single_worker_runs_are_byte_identical() {
    let f = Fixture::new(6);
    let a = f.path("a.txt");
    let b = f.path("b.txt");
    assert!(run(&with(f.base_args(), &["--out", a.to_str().unwrap()])).status.success());
    assert!(run(&with(f.base_args(), &["--out", b.to_str().unwrap()])).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn printed_config_reproduces_the_run() {
    let f = Fixture::new(6);
    let direct = f.path("direct.txt");
    let replay = f.path("replay.txt");
    let args = with(f.base_args(), &["--mode", "cbow", "--window", "3", "--seed", "11"]);
    let printed = run(&with(args.clone(), &["--print-config"]));
    assert!(printed.status.success(), "{}", stderr(&printed));
    let toml_path = f.path("run.toml");
    std::fs::write(&toml_path, &printed.stdout).unwrap();

    assert!(run(&with(args, &["--out", direct.to_str().unwrap()])).status.success());
    let o = kgstroll(&["--config", toml_path.to_str().unwrap(), "--out", replay.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&direct).unwrap(), std::fs::read(&replay).unwrap());

    let again = kgstroll(&["--config", toml_path.to_str().unwrap(), "--print-config"]);
    assert_eq!(again.stdout, printed.stdout);
}

#[test]
fn endpoint_input_matches_file_input() {
    let f = Fixture::new(5);
    let server = StubSparqlServer::start(f.mutag.triples.clone()).unwrap();
    let local = f.path("local.txt");
    let remote = f.path("remote.txt");
    let mut args = f.base_args();
    args[5] = "random:depth=2,max=20".into();
    assert!(run(&with(args.clone(), &["--out", local.to_str().unwrap()])).status.success());
    let mut remote_args = with(args, &["--out", remote.to_str().unwrap(), "--bundle-size", "3"]);
    remote_args[1] = server.endpoint().to_string();
    let o = run(&remote_args);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("connector requests="));
    assert_eq!(read(&local), read(&remote));
}

#[test]
fn pagerank_sampler_needs_a_local_graph() {
    let f = Fixture::new(2);
    let server = StubSparqlServer::start(f.mutag.triples.clone()).unwrap();
    let mut args = f.base_args();
    args[1] = server.endpoint().to_string();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}
