//! Batch evaluation over parameter sweeps.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! work out over the rayon pool; without it every batch runs sequentially.
//! Results always come back in input order, so output is identical either
//! way.

use serde::Serialize;

use crate::contract::{self, ModelError, ModelParams};
use crate::dataset::{self, DataError, Gender, Hypothesis, Panel};
use crate::oracle::{self, SearchConfig, SearchError};
use crate::regression::{self, RegressionFit};
use crate::selection::{self, SelectionEnv, SelectionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether `Parallel` actually uses worker threads in this build.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Applies `f` to every item, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleAgreement {
    pub points: usize,
    pub max_delta_w_diff: f64,
    pub max_effort_diff: f64,
    /// Largest `|U1 - U0|` over the closed-form equilibria.
    pub max_ir_gap: f64,
    /// Largest firm second-order condition value; negative means all maxima.
    pub max_firm_soc: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("closed form failed at {params:?}: {source}")]
    ClosedForm { params: ModelParams, source: ModelError },
    #[error("numeric search failed at {params:?}: {source}")]
    Numeric {
        params: ModelParams,
        source: SearchError,
    },
}

/// Solves every parameter point both in closed form and numerically and
/// reports the worst disagreement.
pub fn oracle_agreement(
    exec: Execution,
    params: &[ModelParams],
    cfg: &SearchConfig,
) -> Result<OracleAgreement, SweepError> {
    let rows = map(exec, params, |p| {
        let closed =
            contract::solve_spne(p).map_err(|source| SweepError::ClosedForm { params: *p, source })?;
        let numeric =
            oracle::numeric_spne(p, cfg).map_err(|source| SweepError::Numeric { params: *p, source })?;
        Ok::<_, SweepError>((closed, numeric))
    });
    let mut out = OracleAgreement {
        points: 0,
        max_delta_w_diff: 0.0,
        max_effort_diff: 0.0,
        max_ir_gap: 0.0,
        max_firm_soc: f64::NEG_INFINITY,
    };
    for row in rows {
        let (closed, numeric) = row?;
        out.points += 1;
        out.max_delta_w_diff = out
            .max_delta_w_diff
            .max((closed.delta_w_star - numeric.delta_w_star).abs());
        out.max_effort_diff = out.max_effort_diff.max((closed.a_star - numeric.a_star).abs());
        out.max_ir_gap = out
            .max_ir_gap
            .max((closed.agent_utility_host - closed.agent_reservation).abs());
        out.max_firm_soc = out.max_firm_soc.max(closed.firm_soc);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionAgreement {
    pub environments: usize,
    /// Environments where the threshold rule and per-worker decisions
    /// produced different migration rates.
    pub mismatches: usize,
}

/// Compares threshold-based and per-worker migration rates for each
/// environment on the same skill grid.
pub fn selection_agreement(
    exec: Execution,
    envs: &[SelectionEnv],
    skills: &[f64],
) -> Result<SelectionAgreement, SelectionError> {
    let rows = map(exec, envs, |env| {
        let verdict = selection::classify_selection(env)?;
        let direct = selection::population_migration_rate(env, skills)?;
        let by_threshold = selection::threshold_migration_rate(&verdict, skills)?;
        Ok::<_, SelectionError>(direct == by_threshold)
    });
    let mut mismatches = 0;
    for row in rows {
        if !row? {
            mismatches += 1;
        }
    }
    Ok(SelectionAgreement {
        environments: envs.len(),
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenderFit {
    pub hypothesis: Hypothesis,
    pub gender: Gender,
    pub fit: RegressionFit,
}

#[derive(Debug, thiserror::Error)]
pub enum FitError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Regression(#[from] regression::RegressionError),
}

/// Fits one hypothesis for each requested gender column.
pub fn fit_genders(
    exec: Execution,
    panel: &Panel,
    h: Hypothesis,
    genders: &[Gender],
) -> Result<Vec<GenderFit>, FitError> {
    map(exec, genders, |&g| {
        let sample = dataset::build_sample(panel, h, g)?;
        let fit = regression::fit_ols(&sample.x, &sample.y)?;
        Ok(GenderFit {
            hypothesis: h,
            gender: g,
            fit,
        })
    })
    .into_iter()
    .collect()
}
