//! End-to-end checks of the command-line surface: golden-file regression for
//! the two figure datasets, byte-stability across runs, JSON schema shape,
//! and the documented exit codes.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_nu-spectra"))
        .args(args)
        .env_remove("NU_SPECTRA_TOL")
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
        out.status.code().unwrap_or(-1),
    )
}

const FIGURE1_ARGS: &[&str] = &[
    "wavefunction",
    "--potential",
    "harmonic_1d",
    "--levels",
    "0..4",
    "--grid",
    "-3..3",
    "--points",
    "601",
    "--format",
    "csv",
];

const FIGURE2_ARGS: &[&str] = &[
    "wavefunction",
    "--potential",
    "modified_hulthen",
    "--param",
    "V0=1",
    "--param",
    "a=1",
    "--param",
    "b=2",
    "--potential-overlay",
    "--grid",
    "0.05..6",
    "--points",
    "400",
];

#[test]
fn figure1_dataset_is_byte_stable_and_golden() {
    let (first, _, code) = run(FIGURE1_ARGS);
    assert_eq!(code, 0);
    let (second, _, _) = run(FIGURE1_ARGS);
    assert_eq!(first, second, "identical config must give identical bytes");
    assert_eq!(first.lines().count(), 601 + 10, "601 samples plus metadata/header");
    let golden = include_str!("golden/figure1_oscillator.csv");
    assert_eq!(first, golden, "figure-1 dataset drifted from the golden file");
    println!("acceptance 10a figure-1 dataset: PASS (byte-stable, golden match)");
}

#[test]
fn figure2_overlay_is_byte_stable_with_minimum_at_ln3() {
    let (first, _, code) = run(FIGURE2_ARGS);
    assert_eq!(code, 0);
    let (second, _, _) = run(FIGURE2_ARGS);
    assert_eq!(first, second);
    let golden = include_str!("golden/figure2_overlay.csv");
    assert_eq!(first, golden, "figure-2 overlay drifted from the golden file");

    let r_min_line = first
        .lines()
        .find(|l| l.starts_with("# r_min"))
        .expect("r_min metadata");
    let r_min: f64 = r_min_line.rsplit('=').next().unwrap().trim().parse().unwrap();
    let dev = (r_min - 3.0f64.ln()).abs();
    assert!(dev < 1e-9, "minimum at {r_min}, expected ln 3");

    // Both sampled curves take their minimum at the sample nearest ln 3.
    let rows: Vec<Vec<f64>> = first
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('r'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    for col in [1usize, 2] {
        let (argmin, _) = rows
            .iter()
            .enumerate()
            .min_by(|a, b| a.1[col].partial_cmp(&b.1[col]).unwrap())
            .unwrap();
        assert!((rows[argmin][0] - r_min).abs() < 0.02, "column {col} minimum misplaced");
    }
    println!("acceptance 10b figure-2 overlay: PASS (byte-stable, minimum at ln 3 +- 1e-9)");
}

#[test]
fn spectrum_json_schema_and_determinism() {
    let args = [
        "spectrum",
        "--potential",
        "harmonic_1d",
        "--param",
        "hw=1",
        "--levels",
        "0..4",
        "--format",
        "json",
    ];
    let (first, _, code) = run(&args);
    assert_eq!(code, 0);
    let (second, _, _) = run(&args);
    assert_eq!(first, second);
    let value: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(value["schema_version"], 1);
    assert_eq!(value["potential"], "harmonic_1d");
    let results = value["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert_eq!(results[0]["energy"], 0.5);
    assert_eq!(results[4]["quantum_numbers"]["n"], 4);
}

#[test]
fn exit_codes_follow_the_contract() {
    // Invalid input: 2.
    let (_, err, code) = run(&["spectrum", "--potential", "no_such_well"]);
    assert_eq!(code, 2, "unknown potential: {err}");
    let (_, err, code) = run(&[
        "spectrum",
        "--potential",
        "poschl_teller",
        "--param",
        "a=0.5",
        "--param",
        "b=2",
    ]);
    assert_eq!(code, 2, "out-of-range parameter: {err}");
    // No bound states: 3, with the hole-size message.
    let (_, err, code) = run(&["spectrum", "--potential", "hulthen", "--param", "beta2=0.5"]);
    assert_eq!(code, 3);
    assert!(err.contains("minimum size of potential hole"), "stderr: {err}");
    // Level not bound: 3.
    let (_, _, code) = run(&[
        "wavefunction",
        "--potential",
        "morse",
        "--param",
        "gamma=5",
        "--param",
        "alpha=1",
        "--levels",
        "7",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn list_enumerates_every_entry() {
    let (out, _, code) = run(&["list"]);
    assert_eq!(code, 0);
    for name in [
        "harmonic_1d",
        "bessel",
        "spherical_harmonics",
        "coulomb",
        "relativistic_schrodinger",
        "dirac_coulomb",
        "confinement_3d",
        "oscillator_3d",
        "poschl_teller",
        "modified_poschl_teller",
        "kratzer",
        "hulthen",
        "morse",
        "morse_rotation",
        "modified_hulthen",
        "modified_hulthen_rotation",
        "generalized_morse",
    ] {
        assert!(out.contains(name), "listing misses {name}");
    }
    assert!(out.contains("--param"), "listing must show parameter schemas");
}

#[test]
fn molecules_table_flags() {
    let (out, _, code) = run(&["molecules"]);
    assert_eq!(code, 0);
    let hcl = out.lines().find(|l| l.starts_with("HCl")).unwrap();
    assert!(hcl.contains("CONSISTENT"));
    let h2 = out.lines().find(|l| l.starts_with("H2")).unwrap();
    assert!(h2.contains("DISCREPANT"));
    let i2 = out.lines().find(|l| l.starts_with("I2")).unwrap();
    assert!(i2.contains("DISCREPANT"));
}

#[test]
fn verify_tables_scope_passes() {
    let (out, _, code) = run(&["verify", "--scope", "tables"]);
    assert_eq!(code, 0, "verify tables failed:\n{out}");
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 19);
    // Unknown scope is an input error.
    let (_, _, code) = run(&["verify", "--scope", "everything"]);
    assert_eq!(code, 2);
}

#[test]
fn every_entry_is_reachable_through_spectrum() {
    // Entries with bound states answer with records; the cylinder entry
    // reports its continuous spectrum through exit code 3 (still reachable,
    // not an unknown-potential error).
    let cases: &[(&str, &[&str], i32)] = &[
        ("harmonic_1d", &[], 0),
        ("bessel", &[], 3),
        ("spherical_harmonics", &[], 0),
        ("coulomb", &[], 0),
        ("relativistic_schrodinger", &["mu=0.3"], 0),
        ("dirac_coulomb", &[], 0),
        ("confinement_3d", &[], 0),
        ("oscillator_3d", &[], 0),
        ("poschl_teller", &["a=2", "b=2"], 0),
        ("modified_poschl_teller", &["a=4"], 0),
        ("kratzer", &["gamma2=2"], 0),
        ("hulthen", &["beta2=9"], 0),
        ("morse", &["gamma=5", "alpha=1"], 0),
        ("morse_rotation", &["gamma=30", "alpha=1.5", "l=2"], 0),
        ("modified_hulthen", &["V0=50", "b=2"], 0),
        ("modified_hulthen_rotation", &["V0=50", "b=2", "l=1"], 0),
        ("generalized_morse", &["D=5", "r0=1.0986122886681098"], 0),
    ];
    for (name, params, want) in cases {
        let mut args = vec!["spectrum".to_string(), "--potential".into(), name.to_string()];
        for p in *params {
            args.push("--param".into());
            args.push(p.to_string());
        }
        args.push("--levels".into());
        args.push("0..1".into());
        let arg_refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let (_, err, code) = run(&arg_refs);
        assert_eq!(code, *want, "{name}: {err}");
    }
}
