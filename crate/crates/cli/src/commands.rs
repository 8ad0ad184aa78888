use std::path::Path;

use ipro_core::engine::{run, run_2d, LogRecord, RunOptions, SearchState, Termination};
use ipro_core::geometry::{pprune, BoundingBox, ValueVec};
use ipro_core::metrics::{
    epsilon_error, generate_utilities, hypervolume, max_utility_loss, DEFAULT_UTILITY_COUNT,
};
use ipro_core::oracle::{serve, OracleMode};
use serde::{Deserialize, Serialize};

use crate::config::{OracleConfig, RunConfig};
use crate::files::{self, FRONT_FILE, LOG_FILE, SUMMARY_FILE};
use crate::problem::Problem;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub termination: Termination,
    pub iterations: u64,
    pub error_bound: f64,
    /// Hypervolume of the returned front above the nadir of the search box.
    pub hypervolume: f64,
    pub reference: Vec<f64>,
    pub front_size: usize,
    pub contradictions: usize,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        match self.termination {
            Termination::Converged => 0,
            Termination::BudgetExhausted => 2,
        }
    }
}

/// Runs the search and writes the iteration log, front and summary into the
/// output directory.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let problem = Problem::load(&cfg.environment)?;
    let mut state = problem.init_state(cfg.tolerance)?;
    let mut oracle = problem.oracle(&cfg.oracle, &state, cfg.rho, cfg.seed)?;
    let options = RunOptions {
        strategy: cfg.strategy,
        seed: cfg.seed,
        budget: cfg.budget(),
    };
    let result = if cfg.use_2d && state.dim() == 2 {
        run_2d(&mut state, oracle.as_mut(), &options)?
    } else {
        run(&mut state, oracle.as_mut(), &options)?
    };

    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| CliError::io(&cfg.output_dir, e))?;
    let log: Vec<LogRecord> = state.history().iter().map(LogRecord::from).collect();
    files::write_log(&cfg.output_dir.join(LOG_FILE), &log)?;
    files::write_front(&cfg.output_dir.join(FRONT_FILE), &result.front)?;
    let reference = state.bbox().nadir().clone();
    let summary = RunSummary {
        termination: result.termination,
        iterations: result.iterations,
        error_bound: result.error_bound,
        hypervolume: hypervolume(&result.values(), &reference)?,
        reference: reference.to_vec(),
        front_size: result.front.len(),
        contradictions: result.contradictions,
    };
    files::write_json(&cfg.output_dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub records: usize,
    /// Error of the reported front against the truth.
    pub epsilon: f64,
    pub max_utility_loss: f64,
    /// Iterations whose logged bound is below the true error at that point.
    pub bound_violations: Vec<usize>,
    /// Iterations whose logged bound differs from the replayed one.
    pub bound_mismatches: Vec<usize>,
    /// Logged values not weakly dominated by any true front point.
    pub infeasible_values: Vec<usize>,
    pub replay_error: Option<String>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            3
        }
    }
}

/// Audits a finished run against the true front: replays the log, checks
/// every logged bound against the true error at that iteration and scores
/// the final front.
pub fn cmd_verify(cfg: &RunConfig, truth: Option<&Path>) -> Result<VerifyReport, CliError> {
    let problem = Problem::load(&cfg.environment)?;
    let truth = match truth {
        Some(path) => pprune(&files::read_points(path)?)?,
        None => problem.truth()?,
    };
    let log = files::read_log(&cfg.output_dir.join(LOG_FILE))?;
    let mut state = problem.init_state(cfg.tolerance)?;

    let mut report = VerifyReport {
        records: log.len(),
        epsilon: 0.0,
        max_utility_loss: 0.0,
        bound_violations: Vec::new(),
        bound_mismatches: Vec::new(),
        infeasible_values: Vec::new(),
        replay_error: None,
        pass: false,
    };
    for r in &log {
        if let Some(value) = &r.value {
            if !truth.iter().any(|t| t.iter().zip(value).all(|(a, b)| a >= b)) {
                report.infeasible_values.push(r.t);
            }
        }
        if let Err(e) = state.replay_log(std::slice::from_ref(r)) {
            report.replay_error = Some(format!("record {}: {e}", r.t));
            break;
        }
        let eps = epsilon_error(&state.front_values(), &truth)?;
        if r.error_bound < eps {
            report.bound_violations.push(r.t);
        }
        if state.error_upper_bound()? != r.error_bound {
            report.bound_mismatches.push(r.t);
        }
    }

    let front_path = cfg.output_dir.join(FRONT_FILE);
    let front = if front_path.exists() {
        files::read_points(&front_path)?
    } else {
        pprune(&state.front_values())?
    };
    report.epsilon = epsilon_error(&front, &truth)?;
    let utilities = generate_utilities(state.bbox(), DEFAULT_UTILITY_COUNT, cfg.seed)?;
    report.max_utility_loss = max_utility_loss(&front, &truth, &utilities)?;
    report.pass = report.replay_error.is_none()
        && report.bound_violations.is_empty()
        && report.bound_mismatches.is_empty()
        && report.infeasible_values.is_empty();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub hypervolume: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_utility_loss: Option<f64>,
}

/// Hypervolume of `front` above `reference`; with a truth set also the ε
/// error and the maximum utility loss over utilities on the box spanned by
/// `reference` and the largest coordinates seen.
pub fn cmd_metrics(
    front: &[ValueVec],
    reference: &ValueVec,
    truth: Option<&[ValueVec]>,
    utilities: usize,
    seed: u64,
) -> Result<MetricsReport, CliError> {
    let mut report = MetricsReport {
        hypervolume: hypervolume(front, reference)?,
        epsilon: None,
        max_utility_loss: None,
    };
    if let Some(truth) = truth {
        report.epsilon = Some(epsilon_error(front, truth)?);
        let ideal: Vec<f64> = (0..reference.dim())
            .map(|j| {
                front
                    .iter()
                    .chain(truth)
                    .map(|p| p[j])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let bbox = BoundingBox::new(reference.clone(), ValueVec::new(ideal)?).map_err(|e| {
            CliError::Config(format!("reference must lie strictly below the points: {e}"))
        })?;
        let us = generate_utilities(&bbox, utilities, seed)?;
        report.max_utility_loss = Some(max_utility_loss(front, truth, &us)?);
    }
    Ok(report)
}

/// Answers oracle wire requests on stdin/stdout with the exact oracle of the
/// configured environment.
pub fn cmd_serve_oracle(cfg: &RunConfig) -> Result<(), CliError> {
    let problem = Problem::load(&cfg.environment)?;
    let state: SearchState = problem.init_state(cfg.tolerance)?;
    let mode = match cfg.oracle {
        OracleConfig::ExactWeak => OracleMode::Weak,
        OracleConfig::ExactApprox { .. } => OracleMode::Approximate,
        _ => return Err(CliError::Config("serve-oracle needs an exact oracle".into())),
    };
    let mut oracle = problem.set_oracle(&state, cfg.rho, mode)?;
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    serve(&mut oracle, stdin.lock(), stdout.lock())?;
    Ok(())
}
