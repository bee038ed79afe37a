//! Roy–Borjas self-selection with linear wage–skill schedules.
//!
//! Each country pays `alpha + r · s` to a worker of skill `s ≥ 0`. A worker
//! migrates when the host wage beats the home wage by more than the
//! migration cost. Which tail of the skill distribution leaves depends on
//! which country rewards skill more.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectionError {
    #[error("invalid selection environment: {0}")]
    InvalidEnv(String),
    #[error("skill population is empty")]
    EmptyPopulation,
    #[error("skills must be non-negative and finite, got {0}")]
    InvalidSkill(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionEnv {
    pub alpha0: f64,
    pub r0: f64,
    pub alpha1: f64,
    pub r1: f64,
    pub m: f64,
}

impl SelectionEnv {
    pub fn new(alpha0: f64, r0: f64, alpha1: f64, r1: f64, m: f64) -> Result<Self, SelectionError> {
        let env = Self {
            alpha0,
            r0,
            alpha1,
            r1,
            m,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<(), SelectionError> {
        let all = [self.alpha0, self.r0, self.alpha1, self.r1, self.m];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(SelectionError::InvalidEnv("parameters must be finite".into()));
        }
        if self.r0 <= 0.0 || self.r1 <= 0.0 {
            return Err(SelectionError::InvalidEnv(format!(
                "returns to skill must be positive (r0 = {}, r1 = {})",
                self.r0, self.r1
            )));
        }
        if self.m < 0.0 {
            return Err(SelectionError::InvalidEnv(format!(
                "migration cost must be non-negative, got {}",
                self.m
            )));
        }
        Ok(())
    }

    pub fn home_wage(&self, s: f64) -> f64 {
        self.alpha0 + self.r0 * s
    }

    pub fn host_wage(&self, s: f64) -> f64 {
        self.alpha1 + self.r1 * s
    }

    /// Countries exchanged; the cost is kept.
    pub fn swapped(&self) -> Self {
        Self {
            alpha0: self.alpha1,
            r0: self.r1,
            alpha1: self.alpha0,
            r1: self.r0,
            m: self.m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    PositiveSelection,
    NegativeSelection,
    AllMigrate,
    NoneMigrate,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::PositiveSelection => "positive-selection",
            Regime::NegativeSelection => "negative-selection",
            Regime::AllMigrate => "all-migrate",
            Regime::NoneMigrate => "none-migrate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionVerdict {
    pub regime: Regime,
    /// Skill cutoff; present only for positive and negative selection.
    pub threshold: Option<f64>,
}

impl SelectionVerdict {
    /// Whether a worker of skill `s` migrates according to this verdict.
    pub fn migrates(&self, s: f64) -> bool {
        match (self.regime, self.threshold) {
            (Regime::PositiveSelection, Some(t)) => s > t,
            (Regime::NegativeSelection, Some(t)) => s < t,
            (Regime::AllMigrate, _) => true,
            _ => false,
        }
    }
}

/// `w1 - w0 - M > 0`.
pub fn migrate_decision(w1: f64, w0: f64, m: f64) -> bool {
    w1 - w0 - m > 0.0
}

pub fn classify_selection(env: &SelectionEnv) -> Result<SelectionVerdict, SelectionError> {
    env.validate()?;
    let intercept_gain = env.alpha1 - env.alpha0 - env.m;
    let verdict = if env.r1 > env.r0 {
        let t = (env.m + env.alpha0 - env.alpha1) / (env.r1 - env.r0);
        if t < 0.0 {
            SelectionVerdict {
                regime: Regime::AllMigrate,
                threshold: None,
            }
        } else {
            SelectionVerdict {
                regime: Regime::PositiveSelection,
                threshold: Some(t),
            }
        }
    } else if env.r1 < env.r0 {
        let t = intercept_gain / (env.r0 - env.r1);
        if t <= 0.0 {
            SelectionVerdict {
                regime: Regime::NoneMigrate,
                threshold: None,
            }
        } else {
            SelectionVerdict {
                regime: Regime::NegativeSelection,
                threshold: Some(t),
            }
        }
    } else if intercept_gain > 0.0 {
        SelectionVerdict {
            regime: Regime::AllMigrate,
            threshold: None,
        }
    } else {
        SelectionVerdict {
            regime: Regime::NoneMigrate,
            threshold: None,
        }
    };
    Ok(verdict)
}

fn check_population(skills: &[f64]) -> Result<(), SelectionError> {
    if skills.is_empty() {
        return Err(SelectionError::EmptyPopulation);
    }
    if let Some(&bad) = skills.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        return Err(SelectionError::InvalidSkill(bad));
    }
    Ok(())
}

/// Share of `skills` that migrate, deciding each worker individually.
pub fn population_migration_rate(env: &SelectionEnv, skills: &[f64]) -> Result<f64, SelectionError> {
    env.validate()?;
    check_population(skills)?;
    let movers = skills
        .iter()
        .filter(|&&s| migrate_decision(env.host_wage(s), env.home_wage(s), env.m))
        .count();
    Ok(movers as f64 / skills.len() as f64)
}

/// Share of `skills` on the migrating side of the verdict's threshold.
pub fn threshold_migration_rate(verdict: &SelectionVerdict, skills: &[f64]) -> Result<f64, SelectionError> {
    check_population(skills)?;
    let movers = skills.iter().filter(|&&s| verdict.migrates(s)).count();
    Ok(movers as f64 / skills.len() as f64)
}
