//! Experiment runner for the `dixmier` crate.
//!
//! Each experiment id maps to one theorem-level check on the torus or on the
//! sequence model. A run validates its [`ExperimentConfig`], computes every
//! route the experiment asks for, evaluates its acceptance predicates and
//! returns a [`ResultRecord`] (deterministic) plus a [`Timing`] (wall-clock).

pub mod config;
mod experiments;
pub mod record;

use std::time::Instant;

pub use config::{Cutoffs, ExperimentConfig, ExperimentId, FunctionSpec, OutputPaths};
pub use record::{Check, ResultRecord, Row, Timing};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    Numerical(dixmier::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<dixmier::Error> for RunError {
    fn from(e: dixmier::Error) -> Self {
        use dixmier::Error as E;
        match e {
            E::DimensionCap { dim, cap } => Self::Infeasible(format!(
                "{e}; the matrix routes need at most {cap} modes, this cutoff gives {dim}, so lower N"
            )),
            E::BandTooSmall { required, .. } => {
                Self::Infeasible(format!("{e}; set cutoffs.band to at least {required}"))
            }
            E::UnsupportedDimension(_) | E::Invalid(_) | E::Divergent { .. } => Self::Infeasible(e.to_string()),
            other => Self::Numerical(other),
        }
    }
}

impl RunError {
    /// 3 for configurations that cannot run, 2 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Infeasible(_) => 3,
            Self::Numerical(_) => 2,
            Self::Io(_) => 1,
        }
    }
}

pub struct Outcome {
    pub record: ResultRecord,
    pub timing: Timing,
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    rows: Vec<Row>,
    checks: Vec<Check>,
    sections: Vec<(String, f64)>,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Self {
            cfg,
            rows: Vec::new(),
            checks: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn row(
        &mut self,
        route: impl Into<String>,
        n_or_k: u64,
        value: f64,
        err: f64,
        lower: f64,
        upper: f64,
    ) {
        self.rows.push(Row {
            experiment: self.cfg.experiment.to_string(),
            route: route.into(),
            n_or_k,
            value,
            err,
            lower,
            upper,
        });
    }

    /// A value with a symmetric error bar.
    pub fn point(&mut self, route: impl Into<String>, n_or_k: u64, value: f64, err: f64) {
        self.row(route, n_or_k, value, err, value - err, value + err);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn timed<R>(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut Self) -> Result<R, RunError>,
    ) -> Result<R, RunError> {
        let t = Instant::now();
        let r = f(self);
        self.sections
            .push((name.to_string(), t.elapsed().as_secs_f64()));
        r
    }
}

/// Runs one experiment. Numerical predicates that fail are reported in the
/// record (`passed = false`), not as errors.
pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let start = Instant::now();
    config.validate()?;
    let mut ctx = Ctx::new(config);
    experiments::dispatch(&mut ctx)?;
    let passed = !ctx.checks.is_empty() && ctx.checks.iter().all(|c| c.passed);
    let hash = config.hash();
    let record = ResultRecord {
        experiment: config.experiment.to_string(),
        config_hash: hash.clone(),
        config: config.clone(),
        rows: ctx.rows,
        checks: ctx.checks,
        passed,
    };
    let timing = Timing {
        experiment: config.experiment.to_string(),
        config_hash: hash,
        threads: rayon::current_num_threads(),
        sections: ctx.sections,
        total_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(Outcome { record, timing })
}
