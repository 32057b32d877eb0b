//! The four commands behind the CLI surface.

use std::path::Path;

use skilltask_core::efficiency::{
    check_cycle_dominance, check_matching_dominance, cycle_bounds_occupation, cycle_bounds_task,
    job_level_value, random_matching_instance, random_scheduling_instance, task_level_value,
};
use skilltask_core::iteration::run_until_converged;
use skilltask_core::iteration::FirmState;
use skilltask_core::rng::SimRng;
use skilltask_core::scenario::generate_scenario;
use skilltask_core::trainer::{train_matching_matrix, train_value_vector};

use crate::config::{initial_parameters, load_json, Overrides, RunConfig, ScenarioConfig};
use crate::dataset::{parse_matching_dataset, parse_value_dataset};
use crate::error::{CliError, CliResult};
use crate::files::{
    trace_csv, write_json, write_text, FittedFile, MatchingInstanceFile, ReportSection,
    ScenarioFile, SchedulingInstanceFile, SummaryFile,
};
use crate::logging;

/// Materialize a scenario spec into a full scenario file.
pub fn cmd_gen(spec_path: &Path, out_path: &Path, seed_override: Option<u64>) -> CliResult<()> {
    let mut config: ScenarioConfig = load_json(spec_path)?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    logging::info(format!("generating scenario with seed {}", config.seed));
    let scenario = generate_scenario(config.to_spec()?)?;
    let file = ScenarioFile {
        spec: config,
        ideal_matrix: scenario.ideal().rows().to_vec(),
        base_skills: scenario.base_skills().labor().to_vec(),
        base_tasks: scenario.base_tasks().quantities().to_vec(),
    };
    write_json(out_path, &file)?;
    println!(
        "wrote scenario ({} skills, {} tasks, {} periods) to {}",
        file.spec.skills_dim,
        file.spec.tasks_dim,
        file.spec.periods,
        out_path.display()
    );
    Ok(())
}

/// Run the recalibration loop and export `<prefix>_trace.csv` plus
/// `<prefix>_summary.json`. Non-convergence is a reported outcome, not an
/// error.
pub fn cmd_simulate(
    config_path: &Path,
    out_prefix: Option<&str>,
    overrides: &Overrides,
) -> CliResult<()> {
    let mut config: RunConfig = load_json(config_path)?;
    overrides.apply(&mut config);
    let scenario_config = config
        .scenario
        .as_ref()
        .ok_or_else(|| CliError::Validation("config has no `scenario` section".into()))?;
    let prefix = out_prefix
        .map(str::to_owned)
        .or_else(|| config.out_prefix.clone())
        .ok_or_else(|| {
            CliError::Validation("no output prefix: pass --out or set `out_prefix`".into())
        })?;

    let spec = scenario_config.to_spec()?;
    let seed = spec.seed;
    let (skills_dim, tasks_dim) = (spec.skills_dim, spec.tasks_dim);
    let scenario = generate_scenario(spec)?;
    let cost_model = config
        .cost
        .clone()
        .unwrap_or_default()
        .to_model(skills_dim)?;
    let learning = config.learning.to_config()?;
    let (matrix, values) =
        initial_parameters(config.initial.as_ref(), skills_dim, tasks_dim, seed)?;
    let initial = FirmState::new(matrix, values)?;

    logging::info(format!(
        "simulating {} periods max (tol {})",
        learning.max_periods(),
        learning.tol()
    ));
    let trace = run_until_converged(initial, &scenario, &cost_model, &learning)?;

    let trace_path = format!("{prefix}_trace.csv");
    let summary_path = format!("{prefix}_summary.json");
    write_text(Path::new(&trace_path), &trace_csv(&trace.records))?;
    write_json(Path::new(&summary_path), &SummaryFile::from_trace(&trace))?;

    println!(
        "{} after {} update periods ({} records); wrote {trace_path} and {summary_path}",
        if trace.converged { "converged" } else { "did not converge" },
        trace.update_periods(),
        trace.records.len()
    );
    Ok(())
}

/// Which parameter set `train` fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TrainTarget {
    Matrix,
    Value,
}

/// Fit parameters from a CSV dataset and write them with the training report.
pub fn cmd_train(
    data_path: &Path,
    target: TrainTarget,
    config_path: Option<&Path>,
    out_path: &Path,
    overrides: &Overrides,
) -> CliResult<()> {
    let mut config: RunConfig = match config_path {
        Some(p) => load_json(p)?,
        None => RunConfig::default(),
    };
    overrides.apply(&mut config);
    let learning = config.learning.to_config()?;
    let seed = config.seed.unwrap_or(0);
    let text = std::fs::read_to_string(data_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", data_path.display())))?;

    let fitted = match target {
        TrainTarget::Matrix => {
            let set = parse_matching_dataset(&text)?;
            let (initial, _) = initial_parameters(
                config.initial.as_ref(),
                set.skills_dim(),
                set.tasks_dim(),
                seed,
            )?;
            let (matrix, report) = train_matching_matrix(&set, &initial, &learning)?;
            logging::info(format!(
                "trained matrix on {} samples in {} epochs",
                set.samples().len(),
                report.epochs_run
            ));
            FittedFile {
                target: "matrix".into(),
                matrix: Some(matrix.rows().to_vec()),
                values: None,
                report: ReportSection::from(&report),
            }
        }
        TrainTarget::Value => {
            let set = parse_value_dataset(&text)?;
            let (_, initial) =
                initial_parameters(config.initial.as_ref(), 1, set.tasks_dim(), seed)?;
            let (values, report) = train_value_vector(&set, &initial, &learning)?;
            logging::info(format!(
                "trained values on {} samples in {} epochs",
                set.samples().len(),
                report.epochs_run
            ));
            FittedFile {
                target: "value".into(),
                matrix: None,
                values: Some(values.values().to_vec()),
                report: ReportSection::from(&report),
            }
        }
    };

    write_json(out_path, &fitted)?;
    println!(
        "{} training: {} epochs, final loss {}, wrote {}",
        if fitted.report.converged { "converged" } else { "capped" },
        fitted.report.epochs_run,
        fitted.report.final_loss,
        out_path.display()
    );
    Ok(())
}

/// Which dominance claim `check` exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Proposition {
    Matching,
    Cycle,
}

/// Run dominance checks over an instance file or seeded random trials.
/// Exit 0 iff every instance passes; a failed check is a property violation.
pub fn cmd_check(
    proposition: Proposition,
    instances_path: Option<&Path>,
    trials: usize,
    seed: u64,
) -> CliResult<()> {
    let mut passed = 0usize;
    let mut total = 0usize;

    match (proposition, instances_path) {
        (Proposition::Matching, Some(path)) => {
            let file: MatchingInstanceFile = load_json(path)?;
            for (k, config) in file.instances.iter().enumerate() {
                let inst = config
                    .to_instance()
                    .map_err(|e| CliError::Validation(format!("instance {k}: {e}")))?;
                let ok = check_matching_dominance(&inst);
                let (job, who) = job_level_value(&inst);
                let task = task_level_value(&inst);
                println!(
                    "instance {k}: task-level={} job-level={} (employee {who}) {}",
                    task.value,
                    job,
                    if ok { "PASS" } else { "FAIL" }
                );
                total += 1;
                passed += ok as usize;
            }
        }
        (Proposition::Matching, None) => {
            let mut rng = SimRng::from_stream(seed, 10, 0);
            for k in 0..trials {
                let inst = random_matching_instance(&mut rng, 5, 6, 4);
                let ok = check_matching_dominance(&inst);
                if !ok {
                    println!("trial {k}: FAIL");
                }
                logging::debug(format!("trial {k}: {}", if ok { "pass" } else { "FAIL" }));
                total += 1;
                passed += ok as usize;
            }
        }
        (Proposition::Cycle, Some(path)) => {
            let file: SchedulingInstanceFile = load_json(path)?;
            for (k, config) in file.instances.iter().enumerate() {
                let inst = config
                    .to_instance()
                    .map_err(|e| CliError::Validation(format!("instance {k}: {e}")))?;
                let ok = check_cycle_dominance(&inst)
                    .map_err(|e| CliError::Validation(format!("instance {k}: {e}")))?;
                let occ = cycle_bounds_occupation(&inst)?;
                let task = cycle_bounds_task(&inst)?;
                println!(
                    "instance {k}: occupation=[{}, {}] task=[{}, {}] {}",
                    occ.lower(),
                    occ.upper(),
                    task.lower(),
                    task.upper(),
                    if ok { "PASS" } else { "FAIL" }
                );
                total += 1;
                passed += ok as usize;
            }
        }
        (Proposition::Cycle, None) => {
            let mut rng = SimRng::from_stream(seed, 11, 0);
            for k in 0..trials {
                let inst = random_scheduling_instance(&mut rng, 5, 6, 4);
                let ok = check_cycle_dominance(&inst).expect("generator keeps rho = 0");
                if !ok {
                    println!("trial {k}: FAIL");
                }
                total += 1;
                passed += ok as usize;
            }
        }
    }

    println!("{passed}/{total} pass");
    if passed == total {
        Ok(())
    } else {
        Err(CliError::Violation(format!("{} of {total} checks failed", total - passed)))
    }
}
