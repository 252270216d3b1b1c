use affsq::cli::{execute, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = execute(std::iter::once("affsq").chain(args.iter().copied()));
    let value = if out.stdout.trim_start().starts_with('{') {
        serde_json::from_str(&out.stdout).unwrap()
    } else {
        Value::Null
    };
    (out.code, value)
}

fn stderr_of(args: &[&str]) -> (i32, String) {
    let out = execute(std::iter::once("affsq").chain(args.iter().copied()));
    (out.code, out.stderr)
}

#[test]
fn classify_outputs() {
    let (code, v) = run(&["classify", "12"]);
    assert_eq!(code, EXIT_OK);
    let r = &v["result"];
    assert_eq!(r["exists"], true);
    assert_eq!(r["factors"], serde_json::json!([[2, 2], [3, 1]]));
    assert_eq!(r["bigFactors"], serde_json::json!([4, 3]));
    assert_eq!(r["reason"], "TwoBigFactors");
    assert_eq!(v["command"], "classify");
    assert!(v["elapsedMs"].is_u64());

    let (_, v) = run(&["classify", "8"]);
    assert_eq!(v["result"]["exists"], false);
    assert_eq!(v["result"]["reason"], "PrimePower");

    assert_eq!(stderr_of(&["classify", "1"]).0, EXIT_USAGE);
    assert_eq!(stderr_of(&["classify", "twelve"]).0, EXIT_USAGE);
}

#[test]
fn classify_json_key_order_is_stable() {
    let out = execute(["affsq", "classify", "12"]);
    let keys: Vec<&str> = ["\"command\"", "\"args\"", "\"toolVersion\"", "\"result\"", "\"elapsedMs\""]
        .into_iter()
        .collect();
    let positions: Vec<usize> = keys.iter().map(|k| out.stdout.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    let inner = ["\"n\"", "\"exists\"", "\"factors\"", "\"bigFactors\"", "\"reason\""];
    let positions: Vec<usize> = inner.iter().map(|k| out.stdout.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn construct_outputs() {
    let (code, v) = run(&["construct", "768"]);
    assert_eq!(code, EXIT_OK);
    let r = &v["result"];
    let pair = |k: &str| (r[k]["a"].as_u64().unwrap(), r[k]["b"].as_u64().unwrap());
    assert_eq!([pair("f0"), pair("f1"), pair("g0"), pair("g1")], [(1, 256), (257, 0), (1, 513), (511, 0)]);
    assert_eq!(r["verification"]["isSquare"], true);

    let (code, v) = run(&["construct", "9"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(v["error"]["kind"], "NoSquare");
    assert_eq!(v["error"]["verdict"]["reason"], "PrimePower");
    assert!(v.get("result").is_none());

    let (code, v) = run(&["construct", "6"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(v["error"]["verdict"]["reason"], "TwiceOddPrimePower");
}

#[test]
fn verify_outputs() {
    let (code, v) = run(&["verify", "12", "1,4", "5,0", "1,9", "7,0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["verdict"]["isSquare"], true);

    let (_, v) = run(&["verify", "12", "1,0", "1,0", "1,0", "1,0"]);
    assert_eq!(v["result"]["verdict"]["isSquare"], false);
    assert_eq!(v["result"]["verdict"]["fNoncommuting"], false);

    let (code, err) = stderr_of(&["verify", "12", "2,0", "5,0", "1,9", "7,0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("2 is not a unit mod 12"), "{err}");

    assert_eq!(stderr_of(&["verify", "12", "1,4", "5,0", "1,9"]).0, EXIT_USAGE);
    assert_eq!(stderr_of(&["verify", "12", "1;4", "5,0", "1,9", "7,0"]).0, EXIT_USAGE);
}

#[test]
fn centralizer_outputs() {
    let (_, v) = run(&["centralizer", "9", "1,1", "4,0"]);
    let r = &v["result"];
    assert_eq!(r["size"], 3);
    assert_eq!(r["abelian"], true);
    assert_eq!(r["elements"], serde_json::json!([{"a":1,"b":0},{"a":1,"b":3},{"a":1,"b":6}]));
    assert_eq!(r["snf"]["alpha"], 0);
    assert_eq!(r["snf"]["beta"], 1);
    assert_eq!(r["snf"]["deltaValuation"], 1);

    let (_, v) = run(&["centralizer", "12", "1,4", "5,0"]);
    assert_eq!(v["result"]["size"], 8);
    assert_eq!(v["result"]["abelian"], false);
    assert!(v["result"].get("snf").is_none());

    let (_, v) = run(&["centralizer", "9", "1,0", "1,0"]);
    assert_eq!(v["result"]["size"], 54);
    assert_eq!(v["result"]["snf"]["deltaValuation"], Value::Null);
}

#[test]
fn search_and_perm_square() {
    let (code, v) = run(&["search", "12"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["found"], true);
    assert_eq!(v["result"]["agrees"], true);

    let (_, v) = run(&["search", "9"]);
    assert_eq!(v["result"]["found"], false);
    assert_eq!(v["result"]["witness"], Value::Null);

    let (code, err) = stderr_of(&["search", "1024"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("refused"), "{err}");

    let (_, v) = run(&["perm-square", "6"]);
    assert_eq!(v["result"]["permutations"], serde_json::json!(["(1 2 3)", "(1 2)", "(4 5 6)", "(4 5)"]));
    assert_eq!(v["result"]["verdict"]["isSquare"], true);
    assert_eq!(stderr_of(&["perm-square", "5"]).0, EXIT_USAGE);
}

#[test]
fn css_writes_alist_files() {
    let dir = std::env::temp_dir().join(format!("affsq-cli-css-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let prefix = dir.join("hi12");
    let prefix = prefix.to_str().unwrap();
    let (code, v) = run(&[
        "css", "12", "3", "1,4", "5,0", "5,8", "1,9", "7,0", "7,3", "--out", prefix, "--matrix-json",
    ]);
    assert_eq!(code, EXIT_OK);
    let r = &v["result"];
    assert_eq!(r["orthogonal"], true);
    assert_eq!(r["shape"], serde_json::json!([24, 72]));
    assert_eq!(r["fWindows"], serde_json::json!([]));
    assert_eq!(r["files"].as_array().unwrap().len(), 4);

    let hx = affsq::css::parse_alist(&std::fs::read_to_string(format!("{prefix}.hx.alist")).unwrap()).unwrap();
    assert_eq!((hx.rows(), hx.cols()), (24, 72));
    let json: affsq::css::SparseBinaryMatrix =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.hx.json")).unwrap()).unwrap();
    assert_eq!(json, hx);

    // broken cross pair: (1,1) against (2,0) mod 9
    let (_, v) = run(&["css", "9", "3", "1,1", "1,1", "1,1", "2,0", "1,0", "1,0", "--out", prefix]);
    assert_eq!(v["result"]["orthogonal"], false);
    assert!(!v["result"]["nonzeroBlocks"].as_array().unwrap().is_empty());

    assert_eq!(stderr_of(&["css", "12", "2", "1,4", "5,0", "1,9", "7,0", "--out", prefix]).0, EXIT_USAGE);
    assert_eq!(stderr_of(&["css", "12", "3", "1,4", "5,0", "--out", prefix]).0, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_mode_and_output_file() {
    let out = execute(["affsq", "--text", "construct", "12"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("F1(x) = 5x + 0"), "{}", out.stdout);

    let path = std::env::temp_dir().join(format!("affsq-cli-out-{}.json", std::process::id()));
    let out = execute(["affsq", "classify", "15", "-o", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["exists"], true);
    std::fs::remove_file(&path).ok();
}

#[test]
fn binary_honours_thread_cap() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_affsq"))
        .args(["search", "20"])
        .env("AFFSQ_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["found"], true);

    let out = std::process::Command::new(env!("CARGO_BIN_EXE_affsq")).arg("classify").arg("0").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
