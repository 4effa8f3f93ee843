use std::io::Write;
use std::process::{Command, Output, Stdio};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use wreath_core::random::{random_element, ElementShape};
use wreath_core::wreath::GroupContext;
use wreath_core::Element;

fn wreath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wreath")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8").trim_end().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = wreath(&all);
    serde_json::from_str(&stdout(&out)).expect("one JSON record")
}

#[test]
fn divides_example() {
    let v = json(&["divides", "-m", "1", "--k", "6", "--l", "2"]);
    assert_eq!(v["divides"], true);
    assert_eq!(v["witness_poly"], "a1^4 + a1^2 + 1");
    assert_eq!(v["seed"], 0);
    let v = json(&["divides", "--k", "2", "--l", "6"]);
    assert_eq!(v["divides"], false);
    assert!(v["witness"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(wreath(&["bogus"]).status.code(), Some(1));
    assert_eq!(wreath(&["mul", "a1 | 1"]).status.code(), Some(1));
    assert_eq!(wreath(&["decode", "-5"]).status.code(), Some(1));
    assert_eq!(wreath(&["--help"]).status.code(), Some(0));
    let out = wreath(&["decode", "7", "-m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotACode"));
    let out = wreath(&["gs-fingerprint", "--set", "universal", "-r", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "RadiusTooLarge");
    assert_eq!(wreath(&["divides", "--k", "1", "--l", "0"]).status.code(), Some(2));
    assert_eq!(wreath(&["mul", "a3 | 1", "1 | 1"]).status.code(), Some(2));
}

#[test]
fn g2z_then_z2g_is_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, n) in [(1, 1), (2, 2), (3, 1)] {
        let ctx = GroupContext::new(m, n).unwrap();
        let (ms, ns) = (m.to_string(), n.to_string());
        for _ in 0..8 {
            let g: Element = random_element(&mut rng, ctx, &ElementShape::for_codes(m));
            let text = g.to_string();
            let tuple = wreath(&["g2z", "-m", &ms, "-n", &ns, &text]);
            assert!(tuple.status.success());
            let mut child = Command::new(env!("CARGO_BIN_EXE_wreath"))
                .args(["z2g", "-m", &ms, "-n", &ns])
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .spawn()
                .unwrap();
            child.stdin.take().unwrap().write_all(&tuple.stdout).unwrap();
            let back = child.wait_with_output().unwrap();
            assert_eq!(Element::parse(ctx, &stdout(&back)).unwrap(), g);
        }
    }
}

#[test]
fn tuple_mul_agrees_with_mul() {
    let (g, h) = ("a1^2 | 1 - a1", "a1^-1 | 3*a1^2");
    let tg = stdout(&wreath(&["g2z", g]));
    let th = stdout(&wreath(&["g2z", h]));
    let prod = stdout(&wreath(&["mul", g, h]));
    let tp = stdout(&wreath(&["tuple-mul", &tg, &th]));
    assert_eq!(stdout(&wreath(&["z2g", &tp])), prod);
}

#[test]
fn seeded_reports_are_reproducible() {
    let a = json(&["roundtrip", "-m", "2", "-n", "2", "--seed", "7", "--count", "30"]);
    let b = json(&["roundtrip", "-m", "2", "-n", "2", "--seed", "7", "--count", "30"]);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
    assert_eq!(a["passed"], 30);
    let out = wreath(&["roundtrip", "--seed", "3", "--count", "5"]);
    assert!(stdout(&out).ends_with("seed: 3"));
}

#[test]
fn selftest_prints_pass_counts() {
    let out = wreath(&["selftest", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("ok")).count(), 11);
    assert!(text.contains("passed, 0 failed"));
    assert!(text.ends_with("seed: 7"));
}

#[test]
fn group_commands() {
    let v = json(&["cyc", "a1", "a1^2 | 0"]);
    assert_eq!(v["member"], true);
    assert_eq!(v["exponent"], 2);
    assert_eq!(json(&["cyc", "-m", "2", "a1", "a2"])["member"], false);
    assert_eq!(stdout(&wreath(&["inv", "a1 | 1"])), "a1^-1 | -1 / a1");
    assert_eq!(stdout(&wreath(&["pow", "a1 | 1", "2"])), "a1^2 | a1 + 1");
    assert_eq!(stdout(&wreath(&["encode", "-1"])), stdout(&wreath(&["encode", "-a1^0"])));
    let code = stdout(&wreath(&["encode", "-m", "2", "3*a1 - a2^-1"]));
    assert_eq!(stdout(&wreath(&["decode", "-m", "2", &code])), "3*a1*a2 - 1 / a2");
    assert_eq!(json(&["act", "1 | 1", "1 | a1", "a1"])["holds"], true);
    let v = json(&["act", "1 | 1", "1 | 1", "a1"]);
    assert_eq!(v["holds"], false);
    assert!(v["refuted_at"].is_array());
    let v = json(&["basis-check", "-m", "1", "-n", "1", "--c", "a1 | 1", "--u", "1 | a1"]);
    assert_eq!((v["top_basis"].clone(), v["basis"].clone()), (Value::Bool(true), Value::Bool(true)));
    let v = json(&["basis-check", "--c", "a1^2", "--u", "1 | 1"]);
    assert_eq!(v["top_basis"], false);
    assert_eq!(stdout(&wreath(&["iso-transfer", "-m", "2", "a1 a2^2", "a2^-1", "3"])), "a2^-3 | 0");
}

#[test]
fn lcs_commands() {
    assert_eq!(stdout(&wreath(&["lcs-rank", "-m", "2", "-n", "3", "--level", "3"])), "9");
    let g = "1 | a1^2 - 2*a1 + 1";
    assert_eq!(json(&["lcs-member", g, "--level", "3"])["member"], true);
    assert_eq!(json(&["lcs-member", g, "--level", "4"])["member"], false);
    let v = json(&["lcs-coords", g, "--level", "3"]);
    assert_eq!(v["coords"]["[b1,a1,a1]"], "1");
    assert_eq!(wreath(&["lcs-coords", "1 | 1", "--level", "2"]).status.code(), Some(2));
}

#[test]
fn gs_commands() {
    let v = json(&["gs-eval", "--set", "finite:{0}", "A B a b"]);
    assert_eq!(v["result"]["text"], "1 | 0 ; 0 | 1");
    assert_eq!(json(&["gs-eval", "--set", "finite:{}", "A B a b"])["identity"], true);
    assert_eq!(json(&["gs-eval", "--set", "universal"])["identity"], true);
    assert_eq!(wreath(&["gs-eval", "--set", "cantor", "a"]).status.code(), Some(2));
    let v = json(&["gs-fingerprint", "--set", "periodic:2", "-r", "1"]);
    assert_eq!(v["fingerprint"]["words"], 7);
    assert_eq!(v["fingerprint"]["classes"], 7);
    let v = json(&["gs-demo", "-r", "2"]);
    for row in v["report"]["rows"].as_array().unwrap() {
        assert_eq!(row["verified"], true);
    }
    let v = json(&["gs-demo", "-r", "1", "--set", "finite:{0}", "--budget", "500"]);
    assert!(v["report"]["rows"][0]["shift"].is_null());
}
