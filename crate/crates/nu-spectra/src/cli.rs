//! Command implementations behind the binary: spectra and wavefunction
//! sampling, the verification runner, reduction-row dumps, the molecule
//! parameter table and the catalog listing.
//!
//! Output is deterministic: identical configuration produces byte-identical
//! files. CSV floats are printed with 17 significant digits; JSON goes
//! through serde structs whose field order is fixed by declaration.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::potential_catalog::{
    self as catalog, match_morse_to_modified_hulthen, validate_params, CatalogError, Params,
    PotentialId, EV_PER_CM, MOLECULES,
};
use crate::verification::{run_scope, Check, Scope};

/// Command failure carrying the process exit code.
#[derive(Debug)]
pub struct CmdError {
    pub exit_code: i32,
    pub message: String,
}

impl CmdError {
    pub fn invalid(message: String) -> Self {
        Self { exit_code: 2, message }
    }
}

impl From<CatalogError> for CmdError {
    fn from(e: CatalogError) -> Self {
        let exit_code = match &e {
            CatalogError::NoBoundStates(_)
            | CatalogError::LevelNotBound(_) => 3,
            _ => 2,
        };
        Self { exit_code, message: e.to_string() }
    }
}

/// 17 significant digits, fixed exponent style: stable across runs.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "json" => Some(OutputFormat::Json),
            "csv" => Some(OutputFormat::Csv),
            _ => None,
        }
    }
}

fn parse_level_range(spec: &str) -> Result<(i64, i64), CmdError> {
    if let Some((a, b)) = spec.split_once("..") {
        let lo = a.trim().parse::<i64>().map_err(|e| CmdError::invalid(format!("bad level `{a}`: {e}")))?;
        let hi = b.trim().parse::<i64>().map_err(|e| CmdError::invalid(format!("bad level `{b}`: {e}")))?;
        if hi < lo {
            return Err(CmdError::invalid(format!("empty level range `{spec}`")));
        }
        Ok((lo, hi))
    } else {
        let n = spec
            .trim()
            .parse::<i64>()
            .map_err(|e| CmdError::invalid(format!("bad level `{spec}`: {e}")))?;
        Ok((n, n))
    }
}

fn parse_grid_range(spec: &str) -> Result<(f64, f64), CmdError> {
    // Split on the final ".." so negative bounds parse cleanly.
    let idx = spec
        .rfind("..")
        .ok_or_else(|| CmdError::invalid(format!("grid must be `lo..hi`, got `{spec}`")))?;
    let (a, b) = (&spec[..idx], &spec[idx + 2..]);
    let lo = a.trim().parse::<f64>().map_err(|e| CmdError::invalid(format!("bad grid bound `{a}`: {e}")))?;
    let hi = b.trim().parse::<f64>().map_err(|e| CmdError::invalid(format!("bad grid bound `{b}`: {e}")))?;
    if !(lo < hi) {
        return Err(CmdError::invalid(format!("grid needs lo < hi, got `{spec}`")));
    }
    Ok((lo, hi))
}

pub fn parse_params(pairs: &[String]) -> Result<Params, CmdError> {
    let mut params = Params::default();
    for pair in pairs {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CmdError::invalid(format!("--param expects key=value, got `{pair}`")))?;
        let v = value
            .trim()
            .parse::<f64>()
            .map_err(|e| CmdError::invalid(format!("bad value for `{key}`: {e}")))?;
        params.set(key.trim(), v);
    }
    Ok(params)
}

#[derive(Serialize)]
struct SpectrumRecord {
    quantum_numbers: BTreeMap<String, i64>,
    energy: f64,
    units: &'static str,
    level_count_rule_applied: &'static str,
}

#[derive(Serialize)]
struct SpectrumReport {
    schema_version: u32,
    potential: &'static str,
    params: BTreeMap<String, f64>,
    results: Vec<SpectrumRecord>,
}

/// `spectrum` command: closed-form levels as JSON or CSV.
pub fn cmd_spectrum(
    potential: &str,
    params: &Params,
    levels: &str,
    format: OutputFormat,
) -> Result<String, CmdError> {
    let id = PotentialId::parse(potential)?;
    let model = catalog::find(id);
    let params = validate_params(model.param_specs(), params)?;
    let (lo, hi) = parse_level_range(levels)?;
    let states = model.spectrum(&params, hi)?;
    let records: Vec<SpectrumRecord> = states
        .into_iter()
        .filter(|s| {
            s.quantum_numbers
                .get(model.primary_index())
                .map(|&v| v >= lo && v <= hi)
                .unwrap_or(true)
        })
        .map(|s| SpectrumRecord {
            quantum_numbers: s.quantum_numbers,
            energy: s.energy,
            units: s.energy_unit,
            level_count_rule_applied: model.level_rule(),
        })
        .collect();
    match format {
        OutputFormat::Json => {
            let report = SpectrumReport {
                schema_version: 1,
                potential: id.name(),
                params: params.0,
                results: records,
            };
            Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n")
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str("# schema_version = 1\n");
            out.push_str(&format!("# potential = {}\n", id.name()));
            for (k, v) in &params.0 {
                out.push_str(&format!("# param {k} = {}\n", fmt_float(*v)));
            }
            out.push_str(&format!("# units = {}\n", model.energy_unit()));
            out.push_str(&format!("# level_count_rule = {}\n", model.level_rule()));
            let keys: Vec<String> = records
                .first()
                .map(|r| r.quantum_numbers.keys().cloned().collect())
                .unwrap_or_default();
            out.push_str(&keys.join(","));
            out.push_str(if keys.is_empty() { "energy\n" } else { ",energy\n" });
            for r in &records {
                let mut row: Vec<String> =
                    keys.iter().map(|k| r.quantum_numbers[k].to_string()).collect();
                row.push(fmt_float(r.energy));
                out.push_str(&row.join(","));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct WavefunctionReport {
    schema_version: u32,
    potential: &'static str,
    params: BTreeMap<String, f64>,
    levels: Vec<i64>,
    normalizations: Vec<f64>,
    columns: Vec<String>,
    samples: Vec<Vec<f64>>,
}

/// `wavefunction` command: sampled normalized wavefunctions on a uniform
/// grid, one column per level.
pub fn cmd_wavefunction(
    potential: &str,
    params: &Params,
    levels: &str,
    grid: &str,
    points: usize,
    format: OutputFormat,
) -> Result<String, CmdError> {
    let id = PotentialId::parse(potential)?;
    let model = catalog::find(id);
    let params = validate_params(model.param_specs(), params)?;
    let (lo, hi) = parse_level_range(levels)?;
    if points < 2 {
        return Err(CmdError::invalid("need at least 2 grid points".into()));
    }
    let (x0, x1) = parse_grid_range(grid)?;
    let mut states = Vec::new();
    let mut level_ids = Vec::new();
    for n in lo..=hi {
        let state = model.eigenstate(&params, &catalog::qn(&[(model.primary_index(), n)]))?;
        level_ids.push(n);
        states.push(state);
    }
    let columns: Vec<String> = std::iter::once("x".to_string())
        .chain(level_ids.iter().map(|n| format!("psi_{n}")))
        .collect();
    let normalizations: Vec<f64> =
        states.iter().map(|s| s.normalization.unwrap_or(f64::NAN)).collect();
    let mut samples = Vec::with_capacity(points);
    for i in 0..points {
        let x = x0 + (x1 - x0) * i as f64 / (points - 1) as f64;
        let mut row = Vec::with_capacity(states.len() + 1);
        row.push(x);
        for s in &states {
            row.push(s.wave.as_ref().map(|f| f(x)).unwrap_or(f64::NAN));
        }
        samples.push(row);
    }
    match format {
        OutputFormat::Json => {
            let report = WavefunctionReport {
                schema_version: 1,
                potential: id.name(),
                params: params.0,
                levels: level_ids,
                normalizations,
                columns,
                samples,
            };
            Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n")
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str("# schema_version = 1\n");
            out.push_str(&format!("# potential = {}\n", id.name()));
            for (k, v) in &params.0 {
                out.push_str(&format!("# param {k} = {}\n", fmt_float(*v)));
            }
            for (n, c) in level_ids.iter().zip(&normalizations) {
                out.push_str(&format!("# normalization_{n} = {}\n", fmt_float(*c)));
            }
            out.push_str(&columns.join(","));
            out.push('\n');
            for row in &samples {
                let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Overlay dataset comparing the two-parameter screened well against its
/// osculating exponential well, sampled on a radial grid. The minimum sits
/// at `r_min = a ln(2b - 1)` for both curves by construction.
pub fn cmd_figure_overlay(
    params: &Params,
    grid: &str,
    points: usize,
) -> Result<String, CmdError> {
    let model = catalog::find(PotentialId::ModifiedHulthen);
    let params = validate_params(model.param_specs(), params)?;
    let (v0, a, b) = (params.get("V0")?, params.get("a")?, params.get("b")?);
    if points < 2 {
        return Err(CmdError::invalid("need at least 2 grid points".into()));
    }
    let (r0_grid, r1_grid) = parse_grid_range(grid)?;
    let r_min = a * (2.0 * b - 1.0).ln();
    // Osculating exponential-well parameters: D = V0 / (4(b-1)),
    // r0 = r_min and width from the monotone matching function.
    let d = v0 / (4.0 * (b - 1.0));
    let alpha_match = crate::potential_catalog::matching_phi(b);
    let screened = |r: f64| {
        let xi = (-r / a).exp();
        -v0 * xi * (1.0 - b * xi) / ((1.0 - xi) * (1.0 - xi))
    };
    let exponential = |r: f64| {
        let w = (-alpha_match * (r - r_min) / r_min).exp();
        d * (w * w - 2.0 * w)
    };
    let mut out = String::new();
    out.push_str("# schema_version = 1\n");
    out.push_str("# dataset = potential_overlay\n");
    for (k, v) in &params.0 {
        out.push_str(&format!("# param {k} = {}\n", fmt_float(*v)));
    }
    out.push_str(&format!("# r_min = {}\n", fmt_float(r_min)));
    out.push_str(&format!("# matched_alpha = {}\n", fmt_float(alpha_match)));
    out.push_str(&format!("# matched_depth = {}\n", fmt_float(d)));
    out.push_str("r,U_screened,U_exponential\n");
    for i in 0..points {
        let r = r0_grid + (r1_grid - r0_grid) * i as f64 / (points - 1) as f64;
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(r),
            fmt_float(screened(r)),
            fmt_float(exponential(r))
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct CheckRecord {
    name: String,
    passed: bool,
    measured: f64,
    tolerance: f64,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    scope: String,
    tolerance_scale: f64,
    passed: usize,
    failed: usize,
    checks: Vec<CheckRecord>,
}

/// `verify` command: run a scope, print one line per check; the second
/// element of the return is the process exit code (1 on any failure).
pub fn cmd_verify(scope: &str, format: Option<OutputFormat>, tol_scale: f64) -> (String, i32) {
    let Some(scope_enum) = Scope::parse(scope) else {
        return (
            format!("unknown scope `{scope}` (expected all|tables|oracle|normalization|expansions)\n"),
            2,
        );
    };
    let checks = run_scope(scope_enum, tol_scale);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let exit = if failed == 0 { 0 } else { 1 };
    match format {
        Some(OutputFormat::Json) => {
            let report = VerifyReport {
                schema_version: 1,
                scope: scope.to_string(),
                tolerance_scale: tol_scale,
                passed: checks.len() - failed,
                failed,
                checks: checks
                    .into_iter()
                    .map(|c: Check| CheckRecord {
                        name: c.name,
                        passed: c.passed,
                        measured: c.measured,
                        tolerance: c.tolerance,
                        detail: c.detail,
                    })
                    .collect(),
            };
            (serde_json::to_string_pretty(&report).expect("serializable") + "\n", exit)
        }
        _ => {
            let mut out = String::new();
            for c in &checks {
                out.push_str(&format!(
                    "{} {:<55} measured {:>12.4e}  tol {:>9.1e}  {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance,
                    c.detail
                ));
            }
            out.push_str(&format!(
                "{}/{} checks passed (tolerance scale {tol_scale})\n",
                checks.len() - failed,
                checks.len()
            ));
            (out, exit)
        }
    }
}

#[derive(Serialize)]
struct RowsInstance {
    params: BTreeMap<String, f64>,
    trial_energy: f64,
    k: f64,
    pi: [f64; 2],
    tau: [f64; 2],
    lambda: f64,
    phi_exp_linear: f64,
    phi_exp_quadratic: f64,
    phi_factors: Vec<(f64, f64)>,
    rho_exp_linear: f64,
    rho_exp_quadratic: f64,
    rho_factors: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct RowsReport {
    schema_version: u32,
    potential: &'static str,
    instances: Vec<RowsInstance>,
}

/// `tables` command: reduction rows recomputed by the engine at each
/// entry's reference instances.
pub fn cmd_tables(potential: Option<&str>) -> Result<String, CmdError> {
    let ids: Vec<&'static dyn catalog::PotentialModel> = match potential {
        Some(name) => vec![catalog::find(PotentialId::parse(name)?)],
        None => catalog::registry(),
    };
    let mut reports = Vec::new();
    for model in ids {
        let mut instances = Vec::new();
        for (params, trial) in model.regression_instances() {
            let params = validate_params(model.param_specs(), &params)?;
            let eq = model.build_equation(&params, trial)?;
            let branch = crate::nu_engine::reduce(&eq).map_err(CatalogError::from)?;
            instances.push(RowsInstance {
                params: params.0.clone(),
                trial_energy: trial,
                k: branch.k,
                pi: [branch.pi.c0, branch.pi.c1],
                tau: [branch.tau.c0, branch.tau.c1],
                lambda: branch.lambda,
                phi_exp_linear: branch.phi.exp_c1,
                phi_exp_quadratic: branch.phi.exp_c2,
                phi_factors: branch.phi.factors.clone(),
                rho_exp_linear: branch.rho.exp_c1,
                rho_exp_quadratic: branch.rho.exp_c2,
                rho_factors: branch.rho.factors.clone(),
            });
        }
        reports.push(RowsReport {
            schema_version: 1,
            potential: model.id().name(),
            instances,
        });
    }
    Ok(serde_json::to_string_pretty(&reports).expect("serializable") + "\n")
}

/// `molecules` command: spectroscopic reference rows next to the recomputed
/// matching parameters, discrepancies flagged but never corrected.
pub fn cmd_molecules(format: Option<OutputFormat>) -> String {
    #[derive(Serialize)]
    struct MoleculeReport {
        name: &'static str,
        rotational_cm: f64,
        depth_cm: f64,
        depth_ev: f64,
        alpha: f64,
        b_reference: f64,
        b_recomputed: f64,
        v0_reference_cm: f64,
        v0_recomputed_cm: f64,
        v0_reference_ev: f64,
        flag: &'static str,
    }
    let rows: Vec<MoleculeReport> = MOLECULES
        .iter()
        .map(|row| {
            let (v0, b, _) =
                match_morse_to_modified_hulthen(row.depth_cm, row.alpha, 1.0).expect("alpha > 1");
            let consistent =
                (v0 - row.v0_ref_cm).abs() / row.v0_ref_cm <= 1e-3 && (b - row.b_ref).abs() <= 1e-3;
            MoleculeReport {
                name: row.name,
                rotational_cm: row.rotational_cm,
                depth_cm: row.depth_cm,
                depth_ev: row.depth_cm * EV_PER_CM,
                alpha: row.alpha,
                b_reference: row.b_ref,
                b_recomputed: b,
                v0_reference_cm: row.v0_ref_cm,
                v0_recomputed_cm: v0,
                v0_reference_ev: row.v0_ref_cm * EV_PER_CM,
                flag: if consistent { "CONSISTENT" } else { "DISCREPANT" },
            }
        })
        .collect();
    match format {
        Some(OutputFormat::Json) => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
        Some(OutputFormat::Csv) => {
            let mut out = String::new();
            out.push_str("# schema_version = 1\n");
            out.push_str("# eV per cm^-1 = 1.2398e-4\n");
            out.push_str(
                "name,rotational_cm,depth_cm,depth_ev,alpha,b_reference,b_recomputed,v0_reference_cm,v0_recomputed_cm,v0_reference_ev,flag\n",
            );
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.name,
                    fmt_float(r.rotational_cm),
                    fmt_float(r.depth_cm),
                    fmt_float(r.depth_ev),
                    fmt_float(r.alpha),
                    fmt_float(r.b_reference),
                    fmt_float(r.b_recomputed),
                    fmt_float(r.v0_reference_cm),
                    fmt_float(r.v0_recomputed_cm),
                    fmt_float(r.v0_reference_ev),
                    r.flag
                ));
            }
            out
        }
        _ => {
            let mut out = String::new();
            out.push_str(&format!(
                "{:<5} {:>12} {:>10} {:>7} {:>10} {:>10} {:>14} {:>14}  {}\n",
                "name", "hb2/2mr0^2", "D(cm^-1)", "alpha", "b(ref)", "b(fit)", "V0 ref(cm^-1)", "V0 fit(cm^-1)", "flag"
            ));
            for r in &rows {
                out.push_str(&format!(
                    "{:<5} {:>12.4} {:>10.0} {:>7.3} {:>10.5} {:>10.5} {:>14.0} {:>14.0}  {}\n",
                    r.name,
                    r.rotational_cm,
                    r.depth_cm,
                    r.alpha,
                    r.b_reference,
                    r.b_recomputed,
                    r.v0_reference_cm,
                    r.v0_recomputed_cm,
                    r.flag
                ));
            }
            out.push_str("note: energies convert as E(eV) = E(cm^-1) x 1.2398e-4\n");
            out
        }
    }
}

/// `list` command: every catalog entry with its parameter schema.
pub fn cmd_list() -> String {
    let mut out = String::new();
    for model in catalog::registry() {
        out.push_str(&format!(
            "{:<28} {}\n",
            model.id().name(),
            model.title()
        ));
        out.push_str(&format!(
            "    levels: index `{}`, rule: {}; energies in {}\n",
            model.primary_index(),
            model.level_rule(),
            model.energy_unit()
        ));
        for spec in model.param_specs() {
            let default = match spec.default {
                Some(d) => format!("default {d}"),
                None => "required".to_string(),
            };
            out.push_str(&format!(
                "    --param {}=<{}>  {} ({default}, range [{}, {}])\n",
                spec.name,
                if spec.integer { "int" } else { "real" },
                spec.description,
                spec.min,
                spec.max
            ));
        }
    }
    out
}
