use ringmetrics::cli::run;
use serde_json::Value;

fn cmd(args: &str) -> ringmetrics::cli::Outcome {
    run(std::iter::once("ringmetrics").chain(args.split_whitespace()))
}

fn json_value(args: &str) -> Value {
    let out = cmd(&format!("{args} --format json"));
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn dist_examples() {
    let v = json_value("dist --domain annulus --r 0.6 --metric s --x 0.95,0 --y 0.65,0");
    assert!((v["value"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(v["trace"]["active_branch"], "outer-circle");

    let v = json_value("dist --domain disk --metric delta --x 0,0 --y 0.5,0");
    assert!((v["value"].as_f64().unwrap() - 2.0 * 0.5f64.atanh()).abs() < 1e-12);

    let v = json_value("dist --domain punctured --metric delta --x 0.5,0 --y -0.5,0");
    assert!((v["value"].as_f64().unwrap() - 2.19722).abs() < 1e-5);
}

#[test]
fn json_envelope_has_stable_keys() {
    let v = json_value("dist --domain annulus --r 0.5 --metric delta --x 0.7,0.1 --y -0.2,0.6");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "inputs", "trace", "value", "version"]);
    for k in ["v_star", "u_star", "maximand", "cross_part"] {
        assert!(v["trace"].get(k).is_some(), "missing {k}");
    }
    let v = json_value("conjecture --r 0.6 --k 0.8 --q 0.05 --steps 5");
    assert!(v.get("values").is_some() && v.get("trace").is_some());
}

#[test]
fn precondition_violations_exit_2() {
    let out = cmd("dist --domain annulus --r 0.6 --metric s --x 0.5,0 --y 0.7,0");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("outside the annulus"), "{}", out.stderr);
    assert_eq!(cmd("conjecture --r 0.6 --k 0.8 --q 0.3").code, 2);
    assert_eq!(cmd("dist --domain annulus --metric s --x 0.7,0 --y 0.8,0").code, 2);
    assert_eq!(cmd("dist --metric warp --x 0.7,0 --y 0.8,0").code, 2);
    assert_eq!(cmd("dist --domain punctured --metric rho --x 0.5,0 --y 0.1,0").code, 2);
    assert_eq!(cmd("capacity --set-e segment:0,0:1,0 --set-f circle:0,0:1").code, 2);
    assert_eq!(cmd("verify --suite nonsense").code, 2);
    assert_eq!(cmd("circle --r 0.6 --grid 16 --out contours.png").code, 2);
}

#[test]
fn capacity_examples_and_symmetry() {
    let v = json_value("capacity --set-e segment:-1,0:0,0 --set-f ray:1,0:1,0");
    let d = v["values"]["delta_ef"].as_f64().unwrap();
    assert!((d - 2f64.ln()).abs() < 1e-3);
    assert!((v["values"]["bound"].as_f64().unwrap() - 2f64.ln() / std::f64::consts::PI).abs() < 1e-3);

    let a = json_value("capacity --set-e segment:0,0:0.5,0 --set-f circle:0,0:1");
    let b = json_value("capacity --set-f segment:0,0:0.5,0 --set-e circle:0,0:1");
    let (a, b) = (a["values"]["delta_ef"].as_f64().unwrap(), b["values"]["delta_ef"].as_f64().unwrap());
    assert!((a - 2.0 * 0.5f64.atanh()).abs() < 1e-3);
    assert!((a - b).abs() < 1e-6);
}

#[test]
fn conjecture_endpoints_only() {
    let out = cmd("conjecture --r 0.6 --k 0.8 --q 0.05 --steps 2 --format csv");
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 3);
}

#[test]
fn circle_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    let csv = dir.path().join("c.csv");
    let field = dir.path().join("f.csv");
    let base = "circle --domain annulus --r 0.6 --metric s --center 0.75,0 --grid 64";
    let out = cmd(&format!("{base} --out {} --field-out {}", svg.display(), field.display()));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("class=\"level-0.2\"") && text.contains("viewBox=\"-1 -1 2 2\""));
    assert!(std::fs::read_to_string(&field).unwrap().starts_with("x,y,value\n"));

    assert_eq!(cmd(&format!("{base} --out {}", csv.display())).code, 0);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("level,poly_id,x,y\n"));

    let out = cmd("circle --r 0.6 --grid 64 --levels 0.95:0.99:0.01");
    assert_eq!(out.code, 0);
}

#[test]
fn verify_is_deterministic_and_reports() {
    let a = cmd("verify --suite inequalities --samples 50 --format json");
    let b = cmd("verify --suite inequalities --samples 50 --format json");
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["inputs"]["slack"], 1e-10);
    let names: Vec<&str> = v["values"].as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);

    let one = cmd("verify --suite inequalities --samples 1");
    assert_eq!(one.code, 0, "{}", one.stdout);
    assert!(one.stdout.contains("tolerances:"));
}

#[test]
fn verify_oracle_prints_gap() {
    let out = cmd("verify --suite oracle --samples 8 --format csv");
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.lines().any(|l| l.starts_with("oracle.delta.gap[r=0.5]")));
}

#[test]
fn hard_failure_exits_1() {
    // an impossible tolerance turns a passing property into a failure
    let out = cmd("verify --suite closedforms --samples 20 --closed-form-tol=-1");
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("FAIL closedforms.s_collinear"));
}

#[test]
fn help_and_version_exit_0() {
    let out = cmd("--help");
    assert_eq!(out.code, 0);
    for sub in ["dist", "circle", "verify", "capacity", "conjecture"] {
        assert!(out.stdout.contains(sub));
    }
    assert!(cmd("verify --help").stdout.contains("[default: 42]"));
    assert_eq!(cmd("--version").code, 0);
}
