use std::io::Write;
use std::process::{Command, Output, Stdio};

use rankconn_core::{
    check_rank_connectivity, enumerate_graphs, is_prime, pivot, rank_connectivity, rank_width, to_graph6, Graph,
};
use serde_json::Value;

fn rankconn(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rankconn"))
        .args(args)
        .env_remove("RANKCONN_JOBS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn small_graphs(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(|n| enumerate_graphs(n).unwrap()).collect()
}

fn stream(gs: &[Graph]) -> String {
    gs.iter().map(|g| to_graph6(g) + "\n").collect()
}

#[test]
fn rwd_of_k2_is_one() {
    let o = rankconn(&["rwd", "A_"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn c4_is_not_prime_and_the_split_checks_out() {
    let c4 = to_graph6(&Graph::cycle(4).unwrap());
    let o = rankconn(&["--json", "prime", &c4], None);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["prime"], false);
    let split: Vec<usize> = serde_json::from_value(v["split"].clone()).unwrap();
    assert_eq!(split.len(), 2);
    let g = Graph::cycle(4).unwrap();
    assert!(g.cut_rank(split.iter().copied().collect()) <= 1);
}

#[test]
fn eleven_vertex_graphs_are_three_plus_three() {
    let o = rankconn(
        &["conn", "-k", "3", "-l", "3", &to_graph6(&Graph::cycle(11).unwrap())],
        None,
    );
    assert_eq!(stdout(&o), "holds\n");
    let o = rankconn(
        &["conn", "-k", "3", "-l", "3", &to_graph6(&Graph::complete(11).unwrap())],
        None,
    );
    assert_eq!(stdout(&o), "holds\n");
}

#[test]
fn verify_examples() {
    for suite in ["submodularity", "allys-n6", "rwd-oracle-n6"] {
        let o = rankconn(&["--json", "verify", "--suite", suite, "--samples", "2000"], None);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        let v = &json_lines(&o)[0];
        assert_eq!(v["passed"], true);
        for p in v["properties"].as_array().unwrap() {
            assert_eq!(p["violations"], 0);
        }
    }
    let o = rankconn(&["verify", "--suite", "no-such-suite"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_two_and_name_the_token() {
    let o = rankconn(&["rwd", "A!"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"A!\""));

    let o = rankconn(&["rwd"], Some("A_\nBw\nzz\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(o.stdout.is_empty());

    assert_eq!(rankconn(&["rwd", "--bogus", "A_"], None).status.code(), Some(2));
    let p3 = to_graph6(&Graph::path(3).unwrap());
    assert_eq!(rankconn(&["pivot", "-e", "0,2", &p3], None).status.code(), Some(2));
    assert_eq!(rankconn(&["cutrank", "-x", "5", "Bw"], None).status.code(), Some(2));
    assert_eq!(rankconn(&["chain", "--main", "Bw"], None).status.code(), Some(2));
}

#[test]
fn file_and_stdin_inputs_agree() {
    let text = stream(&small_graphs(4));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.g6");
    std::fs::write(&path, &text).unwrap();
    let a = rankconn(&["rwd", "-f", path.to_str().unwrap()], None);
    let b = rankconn(&["rwd"], Some(&text));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn routing_matches_library_calls() {
    let gs = small_graphs(6);
    let text = stream(&gs);

    let rwd = json_lines(&rankconn(&["--json", "rwd"], Some(&text)));
    let rc = json_lines(&rankconn(&["--json", "rankconn"], Some(&text)));
    let prime = json_lines(&rankconn(&["--json", "prime"], Some(&text)));
    let conn = json_lines(&rankconn(&["--json", "conn", "-k", "2", "-l", "1"], Some(&text)));
    assert_eq!(rwd.len(), gs.len());
    for (i, g) in gs.iter().enumerate() {
        assert_eq!(rwd[i]["graph6"], to_graph6(g));
        assert_eq!(rwd[i]["rwd"], rank_width(g).unwrap());
        assert_eq!(rc[i]["rank_connectivity"], rank_connectivity(g));
        assert_eq!(prime[i]["prime"], is_prime(g));
        assert_eq!(conn[i]["holds"], check_rank_connectivity(g, 2, 1).holds());
    }

    let cut = json_lines(&rankconn(
        &["--json", "cutrank", "-x", "0,2"],
        Some(&stream(&enumerate_graphs(5).unwrap())),
    ));
    for (v, g) in cut.iter().zip(enumerate_graphs(5).unwrap()) {
        assert_eq!(v["cut_rank"], g.cut_rank([0, 2].into()));
    }

    let g = Graph::cycle(6).unwrap();
    let o = rankconn(&["pivot", "-e", "0,1", &to_graph6(&g)], None);
    assert_eq!(stdout(&o).trim(), to_graph6(&pivot(&g, 0, 1).unwrap()));
}

#[test]
fn chain_reductions_replay() {
    let primes: Vec<Graph> = enumerate_graphs(6).unwrap().into_iter().filter(is_prime).collect();
    let out = json_lines(&rankconn(&["--json", "chain", "--allys"], Some(&stream(&primes))));
    assert_eq!(out.len(), primes.len());
    let mut reduced = 0;
    for (v, g) in out.iter().zip(&primes) {
        if v["reduction"].is_null() {
            continue;
        }
        reduced += 1;
        let mut h = g.clone();
        for step in v["reduction"]["pivots"].as_array().unwrap() {
            h = pivot(
                &h,
                step[0].as_u64().unwrap() as usize,
                step[1].as_u64().unwrap() as usize,
            )
            .unwrap();
        }
        let (h, _) = h
            .delete_vertex(v["reduction"]["deleted"].as_u64().unwrap() as usize)
            .unwrap();
        assert_eq!(v["reduction"]["graph6"], to_graph6(&h));
        assert!(is_prime(&h));
    }
    assert!(reduced > 0);
}

#[test]
fn search_k1_finds_c5() {
    let text = stream(&small_graphs(6));
    let o = rankconn(&["--json", "search-excluded", "-k", "1", "--jobs", "2"], Some(&text));
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    let c5 = rankconn_core::canonical_form(&Graph::cycle(5).unwrap())
        .unwrap()
        .into_string();
    assert!(lines.iter().any(|v| v["graph6"] == c5
        || v["equivalents"]
            .as_array()
            .is_some_and(|e| e.contains(&Value::from(c5.clone())))));
    assert!(lines.last().unwrap().get("summary").is_some());
}

#[test]
fn jobs_must_be_positive() {
    assert_eq!(
        rankconn(&["verify", "--suite", "allys-n5", "--jobs", "0"], None)
            .status
            .code(),
        Some(2)
    );
}
