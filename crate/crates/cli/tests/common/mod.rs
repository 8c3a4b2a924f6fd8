//! Reference parameter sets and golden-file plumbing shared by the test targets.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub const BLESS_ENV: &str = "CONE_BLESS";

const GEODESIC: &[&str] = &[
    "--alpha",
    "0.7853982",
    "--mass",
    "1",
    "--l0",
    "5",
    "--phi0",
    "1.5707963",
    "--pl0",
    "-1",
];
const OSCILLATOR: &[&str] = &[
    "--alpha",
    "0.7853981633974483",
    "--mass",
    "1",
    "--omega",
    "1.4142135623730951",
    "--l0",
    "9",
    "--phi0",
    "0.1",
    "--pl0",
    "-1",
];

/// A golden case: file stem and the arguments after `sim`.
pub struct Case {
    pub name: &'static str,
    pub args: Vec<&'static str>,
}

fn case(name: &'static str, base: &[&'static str], extra: &[&'static str]) -> Case {
    let mut args = base.to_vec();
    args.extend_from_slice(extra);
    Case { name, args }
}

/// Reference geodesic and oscillator runs at several J, with their instability sweeps.
pub fn trajectory_cases() -> Vec<Case> {
    vec![
        case("geodesic", GEODESIC, &["--mode", "free", "--J", "1", "--t-end", "10"]),
        case(
            "geodesic_meridian",
            GEODESIC,
            &["--mode", "free", "--J", "0", "--t-end", "10"],
        ),
        case(
            "geodesic_small_j",
            GEODESIC,
            &["--mode", "free", "--J", "0.01", "--t-end", "10"],
        ),
        case(
            "geodesic_perturbed",
            GEODESIC,
            &["--mode", "free", "--J", "0.1", "--t-end", "10"],
        ),
        case(
            "geodesic_instability",
            GEODESIC,
            &["--mode", "instability", "--eps", "0.1,0.01", "--t-end", "10"],
        ),
        case(
            "oscillator",
            OSCILLATOR,
            &["--mode", "osc", "--J", "20", "--t-end", "10"],
        ),
        case(
            "oscillator_small_j",
            OSCILLATOR,
            &["--mode", "osc", "--J", "0.01", "--t-end", "10"],
        ),
        case(
            "oscillator_j4",
            OSCILLATOR,
            &["--mode", "osc", "--J", "4", "--t-end", "10"],
        ),
        case(
            "oscillator_meridian",
            OSCILLATOR,
            &["--mode", "osc", "--J", "0", "--t-end", "10"],
        ),
        case(
            "oscillator_instability",
            OSCILLATOR,
            &["--mode", "instability", "--eps", "4", "--t-end", "10"],
        ),
    ]
}

pub fn table_cases() -> Vec<Case> {
    vec![
        case(
            "spectrum",
            &["--mode", "spectrum", "--omega", "1.4142135623730951"],
            &[],
        ),
        case(
            "eigfn_osc_j1_n2",
            &[
                "--mode",
                "eigfn",
                "--omega",
                "1.4142135623730951",
                "--j",
                "1",
                "--n",
                "2",
            ],
            &[],
        ),
        case(
            "eigfn_osc_j0_n3",
            &[
                "--mode",
                "eigfn",
                "--omega",
                "1.4142135623730951",
                "--j",
                "0",
                "--n",
                "3",
            ],
            &[],
        ),
        case(
            "eigfn_free_j2",
            &[
                "--mode",
                "eigfn",
                "--j",
                "2",
                "--n",
                "0",
                "--E",
                "1",
                "--upper-weight",
                "0.5",
                "--grid-max",
                "6",
            ],
            &[],
        ),
        case(
            "oscillator_json",
            OSCILLATOR,
            &["--mode", "osc", "--J", "20", "--t-end", "3", "--format", "json"],
        ),
    ]
}

pub fn cone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cone"))
        .arg("sim")
        .args(args)
        .env_remove("CONE_SEED_TOL")
        .output()
        .expect("cone binary runs")
}

pub fn golden_path(name: &str) -> PathBuf {
    let ext = if name.ends_with("_json") { "json" } else { "csv" };
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.{ext}"))
}

/// Runs `case` and compares stdout with its golden file, rewriting the file
/// instead when `CONE_BLESS` is set. Returns a description of any mismatch.
pub fn check_golden(case: &Case) -> Result<(), String> {
    let out = cone(&case.args);
    if !out.status.success() {
        return Err(format!(
            "{}: exit {:?}: {}",
            case.name,
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let path = golden_path(case.name);
    if std::env::var_os(BLESS_ENV).is_some() {
        std::fs::write(&path, &out.stdout).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let want = std::fs::read(&path).map_err(|e| format!("{}: {e} (run with {BLESS_ENV}=1)", path.display()))?;
    if want == out.stdout {
        return Ok(());
    }
    let got = String::from_utf8_lossy(&out.stdout);
    let want = String::from_utf8_lossy(&want);
    let line = got.lines().zip(want.lines()).position(|(a, b)| a != b);
    Err(match line {
        Some(i) => format!(
            "{}: line {} differs\n  got:  {}\n  want: {}",
            case.name,
            i + 1,
            got.lines().nth(i).unwrap_or(""),
            want.lines().nth(i).unwrap_or("")
        ),
        None => format!(
            "{}: length differs ({} vs {} lines)",
            case.name,
            got.lines().count(),
            want.lines().count()
        ),
    })
}

/// Column `name` of a CSV document.
pub fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let idx = header.iter().position(|h| *h == name).expect("column present");
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}
