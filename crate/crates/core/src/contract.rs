//! Principal–agent contracting game between a host-country firm and a
//! prospective migrant worker.
//!
//! The firm offers a piece-rate premium `Δw` over the home-country rate `w0`.
//! The worker accepts if migrating is at least as good as staying, then picks
//! effort `a ≥ 0` against a quadratic cost `a² / s1`. Revenue is `s1 · a`.
//! Skill relevance falls on migration (`0 < s1 < s0`), which is what makes
//! the premium depend on both countries.

use serde::Serialize;
use thiserror::Error;

/// Tolerance for declaring the participation constraint binding. Absolute
/// for utilities of order one, relative to the cancelled terms above that.
pub const IR_BINDING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("effort must be non-negative, got {0}")]
    NegativeEffort(f64),
    #[error(
        "home wage w0 = {w0} admits no feasible equilibrium: first-order premium {foc_delta_w} ({reason})"
    )]
    InfeasibleHomeWage {
        w0: f64,
        foc_delta_w: f64,
        reason: &'static str,
    },
}

/// Primitives of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    w0: f64,
    s0: f64,
    s1: f64,
    m: f64,
}

impl ModelParams {
    pub fn new(w0: f64, s0: f64, s1: f64, m: f64) -> Result<Self, ModelError> {
        if ![w0, s0, s1, m].iter().all(|v| v.is_finite()) {
            return Err(ModelError::InvalidParams("all parameters must be finite".into()));
        }
        if !(0.0 < s1 && s1 < s0) {
            return Err(ModelError::InvalidParams(format!(
                "requires 0 < s1 < s0 (got s0 = {s0}, s1 = {s1})"
            )));
        }
        if w0 < 0.0 {
            return Err(ModelError::InvalidParams(format!("requires w0 >= 0 (got {w0})")));
        }
        if m < 0.0 {
            return Err(ModelError::InvalidParams(format!("requires M >= 0 (got {m})")));
        }
        Ok(Self { w0, s0, s1, m })
    }

    /// Home-country piece rate.
    pub fn w0(&self) -> f64 {
        self.w0
    }

    /// Skill relevance at home.
    pub fn s0(&self) -> f64 {
        self.s0
    }

    /// Skill relevance in the host country.
    pub fn s1(&self) -> f64 {
        self.s1
    }

    /// Migration cost.
    pub fn migration_cost(&self) -> f64 {
        self.m
    }

    /// Home effort-cost coefficient `1 / s0`.
    pub fn c0(&self) -> f64 {
        1.0 / self.s0
    }

    /// Host effort-cost coefficient `1 / s1`; always exceeds `c0`.
    pub fn c1(&self) -> f64 {
        1.0 / self.s1
    }

    /// Skill-relevance depreciation `s0 - s1`.
    pub fn depreciation(&self) -> f64 {
        self.s0 - self.s1
    }

    pub fn with_migration_cost(self, m: f64) -> Result<Self, ModelError> {
        Self::new(self.w0, self.s0, self.s1, m)
    }
}

/// The firm's offer: a premium over the home piece rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractOffer {
    pub delta_w: f64,
}

impl ContractOffer {
    pub fn new(delta_w: f64) -> Self {
        Self { delta_w }
    }

    /// Host piece rate `w1 = w0 + Δw`.
    pub fn w1(&self, p: &ModelParams) -> f64 {
        p.w0 + self.delta_w
    }
}

/// How an [`Equilibrium`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionBranch {
    /// `w0 = 0`, where `Δw* = s0 s1 / (s0 - s1)`.
    ClosedForm,
    /// `w0 > 0`, solved from the general first-order condition.
    GeneralFoc,
    /// Found by numerical backward induction.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibrium {
    pub delta_w_star: f64,
    pub a_star: f64,
    /// Firm profit with the wage bill set by the binding participation
    /// constraint.
    pub firm_profit: f64,
    /// Worker's host utility under that same wage bill.
    pub agent_utility_host: f64,
    /// Reservation utility `U0(a*)`.
    pub agent_reservation: f64,
    pub ir_binding: bool,
    /// `U1 - U0` at `a*` when the worker is paid the plain piece rate
    /// `(w0 + Δw*) a*`. Positive whenever the offer leaves surplus on the table.
    pub piece_rate_ir_slack: f64,
    /// Curvature of the firm objective in `Δw`; negative at a maximum.
    pub firm_soc: f64,
    pub branch: SolutionBranch,
}

impl Equilibrium {
    /// Assembles the equilibrium record for a given premium and effort.
    pub fn evaluate(p: &ModelParams, delta_w: f64, a: f64, branch: SolutionBranch) -> Self {
        let bill = binding_wage_bill(p, a);
        let firm_profit = p.s1 * a - bill;
        let agent_utility_host = bill - p.c1() * a * a - p.m;
        let agent_reservation = p.w0 * a - p.c0() * a * a;
        let piece_rate = (p.w0 + delta_w) * a - p.c1() * a * a - p.m - agent_reservation;
        Self {
            delta_w_star: delta_w,
            a_star: a,
            firm_profit,
            agent_utility_host,
            agent_reservation,
            ir_binding: (agent_utility_host - agent_reservation).abs()
                <= IR_BINDING_TOL * (p.c1() * a * a + bill.abs()).max(1.0),
            piece_rate_ir_slack: piece_rate,
            firm_soc: firm_soc(p),
            branch,
        }
    }

    pub fn offer(&self) -> ContractOffer {
        ContractOffer::new(self.delta_w_star)
    }
}

/// Analytic comparative statics of the equilibrium premium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparativeStatics {
    pub d_dw_d_s1: f64,
    pub d_dw_d_s0: f64,
    pub d_dw_d_delta: f64,
}

fn check_effort(a: f64) -> Result<(), ModelError> {
    if a < 0.0 || a.is_nan() {
        Err(ModelError::NegativeEffort(a))
    } else {
        Ok(())
    }
}

/// `U1 = (Δw + w0) a - a² / s1 - M`.
pub fn agent_utility_host(p: &ModelParams, offer: &ContractOffer, a: f64) -> Result<f64, ModelError> {
    check_effort(a)?;
    Ok(offer.w1(p) * a - a * a / p.s1 - p.m)
}

/// `U0 = w0 a - a² / s0`. Negative for any positive effort when `w0 = 0`.
pub fn agent_utility_home(p: &ModelParams, a: f64) -> Result<f64, ModelError> {
    check_effort(a)?;
    Ok(p.w0 * a - a * a / p.s0)
}

/// Piece-rate profit `s1 a - (Δw + w0) a`.
pub fn firm_profit(p: &ModelParams, offer: &ContractOffer, a: f64) -> Result<f64, ModelError> {
    check_effort(a)?;
    Ok(p.s1 * a - offer.w1(p) * a)
}

/// Worker's effort choice once in the host country: `s1 (Δw + w0) / 2`,
/// clamped at zero when the total rate is negative.
pub fn best_response_effort(p: &ModelParams, offer: &ContractOffer) -> f64 {
    let rate = offer.w1(p);
    if rate <= 0.0 {
        0.0
    } else {
        p.s1 * rate / 2.0
    }
}

/// `U1(a) - U0(a)`, both evaluated at the same effort.
pub fn ir_slack(p: &ModelParams, offer: &ContractOffer, a: f64) -> Result<f64, ModelError> {
    Ok(agent_utility_host(p, offer, a)? - agent_utility_home(p, a)?)
}

/// Smallest wage bill that keeps the worker willing to migrate at effort `a`:
/// `(1/s1 - 1/s0) a² + w0 a + M`.
pub fn binding_wage_bill(p: &ModelParams, a: f64) -> f64 {
    (p.c1() - p.c0()) * a * a + p.w0 * a + p.m
}

/// Firm objective once both constraints bind: `s1 a - (1/s1 - 1/s0) a² - w0 a - M`.
pub fn firm_objective_binding(p: &ModelParams, a: f64) -> f64 {
    p.s1 * a - binding_wage_bill(p, a)
}

/// Second derivative of the firm objective in `Δw`: `s1 (s1 - s0) / (2 s0)`.
pub fn firm_soc(p: &ModelParams) -> f64 {
    p.s1 * (p.s1 - p.s0) / (2.0 * p.s0)
}

/// Premium solving the firm's first-order condition for any `w0`:
/// `s0 (s1 - w0) / (s0 - s1) - w0`. Reduces to `s0 s1 / (s0 - s1)` at `w0 = 0`.
pub fn foc_premium(p: &ModelParams) -> f64 {
    p.s0 * (p.s1 - p.w0) / (p.s0 - p.s1) - p.w0
}

/// Right-hand side of the first-order condition written as an expression
/// for `s0`: `s1 (Δw + w0) / (2 w0 - s1 + Δw)`.
pub fn implied_home_relevance(s1: f64, w0: f64, delta_w: f64) -> f64 {
    s1 * (delta_w + w0) / (2.0 * w0 - s1 + delta_w)
}

/// Subgame-perfect equilibrium by backward induction in closed form.
///
/// With `w0 = 0` this is `Δw* = s0 s1 / (s0 - s1)` and `a* = s1 Δw* / 2`.
/// For `w0 > 0` the first-order solution is returned when it keeps effort
/// positive and the premium above `s1`; otherwise
/// [`ModelError::InfeasibleHomeWage`] carries the offending value.
pub fn solve_spne(p: &ModelParams) -> Result<Equilibrium, ModelError> {
    let delta_w = foc_premium(p);
    let branch = if p.w0 == 0.0 {
        SolutionBranch::ClosedForm
    } else {
        if delta_w + p.w0 <= 0.0 {
            return Err(ModelError::InfeasibleHomeWage {
                w0: p.w0,
                foc_delta_w: delta_w,
                reason: "total piece rate w0 + dw is not positive",
            });
        }
        if delta_w <= p.s1 {
            return Err(ModelError::InfeasibleHomeWage {
                w0: p.w0,
                foc_delta_w: delta_w,
                reason: "premium does not exceed s1",
            });
        }
        SolutionBranch::GeneralFoc
    };
    let a = best_response_effort(p, &ContractOffer::new(delta_w));
    Ok(Equilibrium::evaluate(p, delta_w, a, branch))
}

/// Equilibrium premium as a function of `(s0, s1)` alone (`w0 = 0`).
pub fn premium(s0: f64, s1: f64) -> f64 {
    s0 * s1 / (s0 - s1)
}

/// Premium re-parameterised by depreciation: `s1 + s1² / δ`.
pub fn premium_by_depreciation(s1: f64, delta: f64) -> f64 {
    s1 + s1 * s1 / delta
}

pub fn comparative_statics(p: &ModelParams) -> ComparativeStatics {
    let (s0, s1) = (p.s0, p.s1);
    let gap2 = (s0 - s1) * (s0 - s1);
    let delta = p.depreciation();
    ComparativeStatics {
        d_dw_d_s1: s0 * s0 / gap2,
        d_dw_d_s0: -s1 * s1 / gap2,
        d_dw_d_delta: -s1 * s1 / (delta * delta),
    }
}
