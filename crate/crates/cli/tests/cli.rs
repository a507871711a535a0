use std::io::Write;
use std::process::{Command, Output};

use d0moduli::groebner::MonomialOrder;
use d0moduli::moduli::{analyze, phi_hilb, MorphismPoint};
use d0moduli::poly::Poly;
use d0moduli::GaussianRational as Q;
use d0moduli_cli::parse_scene;
use serde_json::Value;

const TWO_POINTS: &str = "\
target P1; n 2;
point p { chart 0 { e=[[1,0],[0,0]]; m=[[3,0],[0,0]] } chart inf { e=[[1,0],[0,1]]; m=[[1/3,0],[0,0]] } }
point bad { chart 0 { e=[[1,0],[0,0]]; m=[[3,0],[0,1]] } chart inf { e=[[1,0],[0,1]]; m=[[1/3,0],[0,0]] } }
";

const PATHS: &str = "\
target A 1; n 2
path cross { m0 = [[t, 0], [0, -t]]; samples = [-1, 0] }
path root2 { m0 = [[t^2, 0], [0, 2]]; samples = [0, 2] }
";

fn scene_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".d0").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn d0(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_d0"));
    cmd.args(args).env_remove("D0_RESOLUTION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn analyze_json_follows_the_report_schema() {
    let f = scene_file(TWO_POINTS);
    let path = f.path().to_str().unwrap();
    let v: Value = serde_json::from_str(&stdout(&d0(&["analyze", path, "--point", "p", "--json"], &[]))).unwrap();
    assert_eq!(v["admissible"], true);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["chart"], "0");
    assert_eq!(comps[0]["eigenvalue_tag"], serde_json::json!(["1", "3"]));
    assert_eq!(comps[1]["chart"], "inf");
    assert_eq!(v["chow_cycle"], serde_json::json!([["0", "1", 1], ["1", "3", 1]]));

    // the library and the CLI agree
    let scene = parse_scene(TWO_POINTS).unwrap();
    assert_eq!(v, serde_json::to_value(analyze(scene.point("p").unwrap()).unwrap()).unwrap());

    // an inadmissible point is a result, not a process error
    let v: Value = serde_json::from_str(&stdout(&d0(&["analyze", path, "--point", "bad", "--json"], &[]))).unwrap();
    assert_eq!(v["admissible"], false);
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());

    // without --point every point is reported in declaration order
    let v: Value = serde_json::from_str(&stdout(&d0(&["analyze", path, "--json"], &[]))).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|x| x["point"].as_str().unwrap()).collect();
    assert_eq!(names, ["p", "bad"]);
}

#[test]
fn glue_check_and_classify() {
    let f = scene_file(TWO_POINTS);
    let path = f.path().to_str().unwrap();
    let out = stdout(&d0(&["glue-check", path], &[]));
    assert!(out.starts_with("point p: admissible\npoint bad: 2 violation(s)"), "{out}");
    let v: Value = serde_json::from_str(&stdout(&d0(&["classify", path, "--point", "p", "--json"], &[]))).unwrap();
    assert_eq!(v, serde_json::json!({"hilbert": true, "chow": true}));
    let o = d0(&["classify", path, "--point", "bad"], &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn quiver_of_the_two_point_example() {
    let f = scene_file(TWO_POINTS);
    let dot = stdout(&d0(&["quiver", f.path().to_str().unwrap(), "--point", "p", "--dot"], &[]));
    assert!(dot.starts_with("digraph quiver {"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 2);
    assert!(!dot.contains("->"));
}

#[test]
fn deform_logs_the_crossing() {
    let f = scene_file(PATHS);
    let path = f.path().to_str().unwrap();
    let events = json_lines(&stdout(&d0(&["deform", path, "--path", "cross"], &[])));
    assert_eq!(
        events,
        vec![
            serde_json::json!({"t": "0", "kind": "merge", "components": [2, 1], "gauge": [2, 4], "lengths": [[1, 1], [2]]})
        ]
    );
    let events = json_lines(&stdout(&d0(&["deform", path, "--path", "cross", "--reverse"], &[])));
    assert_eq!(events.len(), 1);
    assert_eq!(events[0]["kind"], "split");
    assert_eq!(events[0]["gauge"], serde_json::json!([4, 2]));
}

fn root2_interval(o: &Output) -> (Q, Q) {
    let events = json_lines(&stdout(o));
    assert_eq!(events.len(), 2);
    assert_eq!((events[0]["kind"].as_str(), events[1]["kind"].as_str()), (Some("merge"), Some("split")));
    let iv = &events[0]["interval"];
    let (a, b): (Q, Q) = (iv[0].as_str().unwrap().parse().unwrap(), iv[1].as_str().unwrap().parse().unwrap());
    let two = Q::integer(2);
    assert!(&a * &a < two && two < &b * &b, "interval [{a}, {b}] misses sqrt 2");
    (a, b)
}

#[test]
fn resolution_flag_and_environment() {
    let f = scene_file(PATHS);
    let path = f.path().to_str().unwrap();
    let width = |(a, b): (Q, Q)| &b - &a;
    let default = width(root2_interval(&d0(&["deform", path, "--path", "root2"], &[])));
    assert!(default <= Q::ratio(1, 1024));
    let coarse = width(root2_interval(&d0(&["deform", path, "--path", "root2"], &[("D0_RESOLUTION", "1/16")])));
    assert!(coarse <= Q::ratio(1, 16) && coarse > Q::ratio(1, 1024));
    let fine = width(root2_interval(&d0(
        &["deform", path, "--path", "root2", "--resolution", "1/100000"],
        &[("D0_RESOLUTION", "1/16")],
    )));
    assert!(fine <= Q::ratio(1, 100000));
}

#[test]
fn orbit_compare_example() {
    let out = stdout(&d0(&["orbit-compare", "--left", "0:[1,1]", "--right", "0:[2]"], &[]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["leq"], true);
    assert_eq!(v["decay"], serde_json::json!([[2, [1, 1]]]));
    let out = stdout(&d0(&["orbit-compare", "--left", "1:[2];-1:[1]", "--right", "1:[1,1];-1:[1]"], &[]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["leq"].clone(), v["decay"].clone()), (Value::Bool(false), Value::Null));
}

#[test]
fn constructed_points_print_as_scenes() {
    let out = stdout(&d0(&["hilb", "--ideal", "y1^2, y1*y2, y2^2"], &[]));
    let scene = parse_scene(&out).unwrap();
    let vars = Poly::var_names("y", 1, 2);
    let ideal: Vec<Poly> = ["y1^2", "y1*y2", "y2^2"].iter().map(|g| Poly::parse(&vars, g).unwrap()).collect();
    assert_eq!(scene.point("hilb"), Some(&phi_hilb(&ideal, &MonomialOrder::degrevlex()).unwrap()));

    let out = stdout(&d0(&["chow", "--points", "(3, 4); (1, 2)"], &[]));
    let scene = parse_scene(&out).unwrap();
    let diag = |v: &[i64]| d0moduli::Matrix::diag_ints(v);
    assert_eq!(scene.point("chow"), Some(&MorphismPoint::affine(vec![diag(&[1, 3]), diag(&[2, 4])])));

    let out = stdout(&d0(&["chow", "--points", "(1, 0); (0, 1)", "--projective"], &[]));
    let f = scene_file(&out);
    let v: Value = serde_json::from_str(&stdout(&d0(&["analyze", f.path().to_str().unwrap(), "--json"], &[]))).unwrap();
    assert_eq!(v[0]["admissible"], true);
    assert_eq!(v[0]["components"].as_array().unwrap().len(), 2);
}

#[test]
fn failures_exit_with_status_one() {
    let f = scene_file("target A 1; n 1; point q { m0 = [[1/]] }");
    let o = d0(&["analyze", f.path().to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1, column 35"), "{err}");

    let f = scene_file("target A 1; n 2; point q { m0 = [[1]] }");
    let o = d0(&["analyze", f.path().to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected a 2x2 matrix"));

    let f = scene_file(PATHS);
    assert_eq!(d0(&["deform", f.path().to_str().unwrap(), "--path", "nope"], &[]).status.code(), Some(1));
    assert_eq!(d0(&["hilb", "--ideal", "y1^2, y1*y2"], &[]).status.code(), Some(1));
    assert_eq!(d0(&["analyze", "/nonexistent/scene.d0"], &[]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let f = scene_file(TWO_POINTS);
    let path = f.path().to_str().unwrap();
    let a = stdout(&d0(&["analyze", path, "--json"], &[]));
    let b = stdout(&d0(&["analyze", path, "--json"], &[]));
    assert_eq!(a, b);
}
