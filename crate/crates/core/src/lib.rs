//! Migrant-labor contracting under a demand-side permit system.
//!
//! - [`contract`]: the firm/worker game and its closed-form equilibrium.
//! - [`oracle`]: numerical backward induction used to check the closed forms.
//! - [`selection`]: Roy–Borjas positive/negative self-selection.
//! - [`dataset`]: embedded country panels and regression samples.
//! - [`regression`]: simple OLS with t-based inference.
//! - [`sweep`]: batch evaluation, parallel when the `parallel` feature is on.

pub mod contract;
pub mod dataset;
pub mod oracle;
pub mod regression;
pub mod selection;
pub mod sweep;

pub use contract::{
    comparative_statics, solve_spne, ComparativeStatics, ContractOffer, Equilibrium, ModelError, ModelParams,
};
pub use dataset::{build_sample, CountryRecord, DataError, Gender, Hypothesis, Panel, RegressionSample};
pub use oracle::{numeric_best_effort, numeric_spne, SearchConfig, SearchError};
pub use regression::{fit_ols, student_t_sf, RegressionFit};
pub use selection::{classify_selection, SelectionEnv, SelectionVerdict};
pub use sweep::Execution;
