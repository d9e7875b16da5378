//! Implementations of the subcommands.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;

use schwarzschild_wb::config::Model;
use schwarzschild_wb::experiments::acceptance::{evaluate_with, euler_amplitude_table, CriterionOutcome, Table, Thresholds};
use schwarzschild_wb::experiments::catalog::{test_b8, test_e7, test_e8};
use schwarzschild_wb::experiments::{catalog, find, ids, run_case, run_cases, CaseOutcome, CaseReport, Tier};
use schwarzschild_wb::experiments::convergence::run_convergence;
use schwarzschild_wb::RunConfig;

use crate::args::{ConvergenceArgs, Overrides, RunArgs, SuiteArgs};
use crate::csv::write_snapshots;
use crate::error::{CliError, Result};

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), value)?;
    Ok(())
}

/// Writes `snapshots.csv` and `result.json` of one run into `dir`.
pub fn write_outcome(dir: &Path, outcome: &CaseOutcome) -> Result<()> {
    create_dir(dir)?;
    let path = dir.join("snapshots.csv");
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    write_snapshots(BufWriter::new(file), &outcome.result.snapshots).map_err(|e| CliError::io(&path, e))?;
    write_json(&dir.join("result.json"), &outcome.report)
}

fn unknown(id: &str) -> CliError {
    CliError::UnknownTest { id: id.to_string(), known: ids().iter().map(|s| s.to_string()).collect() }
}

/// Layers the keys of a TOML file over `base`.
pub fn layer_config(base: &RunConfig, text: &str) -> Result<RunConfig> {
    let overlay: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    let mut merged = toml::Table::try_from(base).map_err(|e| CliError::Config(e.to_string()))?;
    merged.extend(overlay);
    merged.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))
}

fn apply_overrides(config: &mut RunConfig, o: &Overrides) {
    if let Some(order) = o.order {
        config.order = order;
    }
    if let Some(wb) = o.well_balanced() {
        config.well_balanced = wb;
    }
    if let Some(flux) = o.flux {
        config.flux = flux;
    }
    if let Some(cells) = o.cells {
        config.cells = cells;
    }
    if let Some(cfl) = o.cfl {
        config.cfl = cfl;
    }
    if let Some(t_end) = o.t_end {
        config.t_end = t_end;
    }
    if let Some(averaging) = o.averaging {
        config.averaging = averaging;
    }
    if let Some(bc) = o.right_bc {
        config.right_bc = bc;
    }
    if o.output_interval.is_some() {
        config.output_interval = o.output_interval;
    }
}

/// Resolves the case of a `run` invocation with every layer applied.
pub fn resolve_case(args: &RunArgs) -> Result<schwarzschild_wb::experiments::TestCase> {
    let id = args.test.clone().unwrap_or_else(|| match args.overrides.model {
        Some(Model::Euler) => "testE1".into(),
        _ => "testB1".into(),
    });
    let mut case = match args.amplitude {
        None => find(&id).ok_or_else(|| unknown(&id))?,
        Some(a) => match id.as_str() {
            "testB8" => test_b8(a),
            "testE7" => test_e7(a),
            "testE8" => test_e8(a),
            other if find(other).is_none() => return Err(unknown(other)),
            other => return Err(CliError::Config(format!("{other} has no amplitude parameter"))),
        },
    };
    if let Some(model) = args.overrides.model {
        if model != case.model {
            if model == Model::Euler && args.overrides.order == Some(3) {
                return Err(CliError::Config("order 3 unsupported for euler".into()));
            }
            return Err(CliError::Config(format!("{} is a {} case, not {model}", case.id, case.model)));
        }
    }
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        case.config = layer_config(&case.config, &text)?;
        if case.config.model != case.model {
            return Err(CliError::Config(format!("{} is a {} case, not {}", case.id, case.model, case.config.model)));
        }
    }
    apply_overrides(&mut case.config, &args.overrides);
    case.config.validate()?;
    Ok(case)
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let case = resolve_case(args)?;
    let outcome = run_case(&case)?;
    write_outcome(&args.out, &outcome)?;
    let rep = &outcome.report;
    println!("{}: {:?} at t = {} after {} steps ({:.2} s)", rep.id, rep.termination, rep.t_final, rep.steps, rep.wall_time_s);
    if let Some(e) = rep.errors {
        match e.rho {
            Some(rho) => println!("L1 error: v {:.6e}, rho {:.6e}", e.v, rho),
            None => println!("L1 error: v {:.6e}", e.v),
        }
    }
    if let Some(d) = rep.displacement {
        println!("displacement: {d:.6e}");
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct CaseFailure {
    id: String,
    error: String,
}

#[derive(Debug, Serialize)]
struct SuiteReport {
    tier: Tier,
    strict: bool,
    well_balanced: bool,
    passed: bool,
    criteria: Vec<CriterionOutcome>,
    cases: Vec<CaseReport>,
    case_failures: Vec<CaseFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    euler_amplitude_family: Option<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    euler_mesh_study: Option<Table>,
}

/// Runs a suite tier. Returns whether it passed.
pub fn cmd_suite(args: &SuiteArgs) -> Result<bool> {
    let tier = Tier::from(args.tier);
    let thresholds = match &args.thresholds {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Thresholds::from_toml_str(&text)?
        }
        None => Thresholds::bundled(),
    };
    create_dir(&args.out)?;

    let criteria = evaluate_with(tier, &thresholds, !args.no_wb);
    let (euler_amplitude_family, euler_mesh_study) = if tier >= Tier::Slow {
        let (family, meshes) = euler_amplitude_table(&thresholds)?;
        (Some(family), Some(meshes))
    } else {
        (None, None)
    };

    let selected: Vec<_> = catalog().into_iter().filter(|c| c.tier <= tier).collect();
    let mut cases = Vec::new();
    let mut case_failures = Vec::new();
    for outcome in run_cases(&selected) {
        match outcome {
            Ok(o) => {
                write_outcome(&args.out.join("cases").join(&o.report.id), &o)?;
                cases.push(o.report);
            }
            Err((id, e)) => case_failures.push(CaseFailure { id, error: e.to_string() }),
        }
    }

    let criteria_ok =
        criteria.iter().all(|c| if args.strict { c.passed() } else { c.passed_except_known() });
    let passed = criteria_ok && case_failures.is_empty();

    for c in &criteria {
        println!("{}", c.line());
    }
    for c in &cases {
        let err = c.errors.map_or(String::from("-"), |e| format!("{:.3e}", e.max()));
        println!("case {:<14} {:<7?} t = {:<10.4} L1 = {err}", c.id, c.termination, c.t_final);
    }
    for f in &case_failures {
        println!("case {:<14} FAILED: {}", f.id, f.error);
    }
    println!("suite {}: {}", args.tier_name(), if passed { "PASS" } else { "FAIL" });

    let report = SuiteReport {
        tier,
        strict: args.strict,
        well_balanced: !args.no_wb,
        passed,
        criteria,
        cases,
        case_failures,
        euler_amplitude_family,
        euler_mesh_study,
    };
    write_json(&args.out.join("suite_report.json"), &report)?;
    Ok(passed)
}

impl SuiteArgs {
    fn tier_name(&self) -> &'static str {
        match self.tier {
            crate::args::TierArg::Fast => "fast",
            crate::args::TierArg::Full => "full",
            crate::args::TierArg::Slow => "slow",
        }
    }
}

pub fn cmd_convergence(args: &ConvergenceArgs) -> Result<()> {
    let rep = run_convergence(args.model, args.order, &args.meshes, args.reference_cells)?;
    println!("{:>8} {:>14} {:>8}", "cells", "L1 error", "order");
    for (j, (&m, &e)) in rep.meshes.iter().zip(&rep.errors).enumerate() {
        let order = j.checked_sub(1).and_then(|i| rep.orders.get(i)).map_or(String::from("-"), |o| format!("{o:.3}"));
        println!("{m:>8} {e:>14.6e} {order:>8}");
    }
    create_dir(&args.out)?;
    write_json(&args.out.join("convergence.json"), &rep)
}

pub fn cmd_list() {
    for c in catalog() {
        println!("{:<14} {:<8} {:<5?} {}", c.id, c.model.to_string(), c.tier, c.description);
    }
}
