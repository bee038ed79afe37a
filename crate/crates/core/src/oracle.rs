//! Brute-force backward induction for the contracting game.
//!
//! Nothing here uses the closed-form best response or premium. The worker's
//! effort is found by a grid scan plus golden-section refinement of host
//! utility. The firm's premium is found the same way, one level up, with
//! the inner search run at every candidate premium.
//!
//! Searches compare candidates through [`Objective::gap`] rather than by
//! subtracting two rounded objective values. Near a maximum the objective is
//! flat, and value subtraction alone cannot place the argmax closer than
//! roughly `sqrt(eps)` times its magnitude.

use std::cell::RefCell;

use serde::Serialize;
use thiserror::Error;

use crate::contract::{self, ContractOffer, Equilibrium, ModelError, ModelParams, SolutionBranch};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const WIDEN_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("argmax sits on the upper bracket {hi} ({what}); widen the search bracket")]
    BracketTooSmall { what: &'static str, hi: f64 },
    #[error("no premium in [{lo}, {hi}] satisfies the participation constraint")]
    NoEquilibrium { lo: f64, hi: f64 },
    #[error("total piece rate must be non-negative, got {0}")]
    NegativeRate(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Points in each coarse grid scan.
    pub grid_points: usize,
    /// Upper effort bound as a multiple of `s1 (Δw + w0)`.
    pub bracket_hi_effort: f64,
    /// Upper premium bound as a multiple of `s0`.
    pub bracket_hi_wage: f64,
    /// Absolute bracket width at which golden-section refinement stops.
    pub refine_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 10_001,
            bracket_hi_effort: 2.0,
            bracket_hi_wage: 10.0,
            refine_tol: 1e-10,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.grid_points < 3 {
            return Err(SearchError::InvalidConfig(format!(
                "grid_points must be at least 3, got {}",
                self.grid_points
            )));
        }
        if self.refine_tol.is_nan() || self.refine_tol <= 0.0 {
            return Err(SearchError::InvalidConfig("refine_tol must be positive".into()));
        }
        if !(self.bracket_hi_effort > 0.0 && self.bracket_hi_wage > 0.0) {
            return Err(SearchError::InvalidConfig("brackets must be positive".into()));
        }
        Ok(())
    }
}

/// A scalar objective to be maximised.
pub trait Objective {
    /// Whatever has to be computed at a point to compare it with others.
    type Eval;

    fn eval(&self, x: f64) -> Self::Eval;

    /// Positive when `a` is strictly better than `b`, zero on a tie.
    fn gap(&self, a: &Self::Eval, b: &Self::Eval) -> f64;
}

/// Adapts a plain function; candidates are compared by value.
pub struct ByValue<F>(pub F);

impl<F: Fn(f64) -> f64> Objective for ByValue<F> {
    type Eval = f64;

    fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }

    fn gap(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    pub index: usize,
    pub x: f64,
}

fn grid_x(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

/// Scans `n` evenly spaced points of `[lo, hi]`. Exact ties keep the
/// smallest index.
pub fn grid_argmax<O: Objective>(obj: &O, lo: f64, hi: f64, n: usize) -> (GridMax, O::Eval) {
    assert!(n >= 2, "grid needs at least two points");
    let mut best = GridMax { index: 0, x: lo };
    let mut best_eval = obj.eval(lo);
    for i in 1..n {
        let x = grid_x(lo, hi, n, i);
        let e = obj.eval(x);
        if obj.gap(&e, &best_eval) > 0.0 {
            best = GridMax { index: i, x };
            best_eval = e;
        }
    }
    (best, best_eval)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub iterations: usize,
    /// Final bracket width.
    pub width: f64,
}

/// Upper bound on golden-section iterations for a bracket of `width`.
pub fn golden_iteration_bound(width: f64, tol: f64) -> usize {
    if width <= tol {
        return 0;
    }
    ((width / tol).ln() / (1.0 / INV_PHI).ln()).ceil() as usize + 2
}

/// Golden-section maximisation of a unimodal objective on `[lo, hi]`.
/// Stops once the bracket is no wider than `tol`, or when floating-point
/// spacing prevents further shrinking.
pub fn golden_section_max<O: Objective>(obj: &O, lo: f64, hi: f64, tol: f64) -> GoldenResult {
    let (mut a, mut b) = (lo, hi);
    let max_iter = golden_iteration_bound(b - a, tol);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut e1 = obj.eval(x1);
    let mut e2 = obj.eval(x2);
    let mut iterations = 0;
    while b - a > tol && iterations < max_iter {
        iterations += 1;
        if obj.gap(&e1, &e2) >= 0.0 {
            b = x2;
            x2 = x1;
            e2 = e1;
            x1 = b - INV_PHI * (b - a);
            e1 = obj.eval(x1);
        } else {
            a = x1;
            x1 = x2;
            e1 = e2;
            x2 = a + INV_PHI * (b - a);
            e2 = obj.eval(x2);
        }
        if x1.is_nan() || x2.is_nan() || x1 >= x2 {
            break;
        }
    }
    GoldenResult {
        x: 0.5 * (a + b),
        iterations,
        width: b - a,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub x: f64,
    pub grid: GridMax,
    pub golden: Option<GoldenResult>,
}

/// Grid scan followed by golden-section refinement around the best grid
/// point. Never returns a point worse than the best grid point.
pub fn grid_then_refine<O: Objective>(obj: &O, lo: f64, hi: f64, n: usize, tol: f64) -> Refined {
    let (grid, grid_eval) = grid_argmax(obj, lo, hi, n);
    let left = grid_x(lo, hi, n, grid.index.saturating_sub(1));
    let right = grid_x(lo, hi, n, (grid.index + 1).min(n - 1));
    if right - left <= tol {
        return Refined {
            x: grid.x,
            grid,
            golden: None,
        };
    }
    let golden = golden_section_max(obj, left, right, tol);
    let refined_eval = obj.eval(golden.x);
    let x = if obj.gap(&grid_eval, &refined_eval) > 0.0 {
        grid.x
    } else {
        golden.x
    };
    Refined {
        x,
        grid,
        golden: Some(golden),
    }
}

/// `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Host utility in effort at a fixed rate. The gap is the exact factored
/// difference `(a - b) (rate - (a + b) / s1)`; the migration cost cancels.
struct HostUtility {
    rate: f64,
    c1: f64,
}

impl Objective for HostUtility {
    type Eval = f64;

    fn eval(&self, a: f64) -> f64 {
        a
    }

    fn gap(&self, a: &f64, b: &f64) -> f64 {
        (a - b) * (self.rate - self.c1 * (a + b))
    }
}

/// Worker's effort choice found numerically.
pub fn numeric_best_effort(
    p: &ModelParams,
    offer: &ContractOffer,
    cfg: &SearchConfig,
) -> Result<f64, SearchError> {
    cfg.validate()?;
    let rate = offer.w1(p);
    if rate < 0.0 {
        return Err(SearchError::NegativeRate(rate));
    }
    let hi = cfg.bracket_hi_effort * p.s1() * rate;
    if hi == 0.0 {
        return Ok(0.0);
    }
    let obj = HostUtility { rate, c1: p.c1() };
    let refined = grid_then_refine(&obj, 0.0, hi, cfg.grid_points, cfg.refine_tol);
    if refined.grid.index + 1 == cfg.grid_points {
        return Err(SearchError::BracketTooSmall { what: "effort", hi });
    }
    Ok(refined.x)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    effort: f64,
    feasible: bool,
}

/// Firm objective with both constraints binding, as a function of the
/// premium. Effort comes from the numerical inner search; premiums whose
/// induced effort violates the participation constraint are infeasible.
struct FirmObjective<'a> {
    p: &'a ModelParams,
    cfg: &'a SearchConfig,
    first_error: RefCell<Option<SearchError>>,
}

impl FirmObjective<'_> {
    fn record(&self, err: SearchError) {
        let mut slot = self.first_error.borrow_mut();
        if slot.is_none() {
            *slot = Some(err);
        }
    }
}

impl Objective for FirmObjective<'_> {
    type Eval = Candidate;

    fn eval(&self, delta_w: f64) -> Candidate {
        let offer = ContractOffer::new(delta_w);
        let effort = match numeric_best_effort(self.p, &offer, self.cfg) {
            Ok(a) => a,
            Err(e) => {
                self.record(e);
                return Candidate {
                    effort: 0.0,
                    feasible: false,
                };
            }
        };
        let feasible = match contract::ir_slack(self.p, &offer, effort) {
            Ok(slack) => slack >= 0.0,
            Err(e) => {
                self.record(e.into());
                false
            }
        };
        Candidate { effort, feasible }
    }

    fn gap(&self, a: &Candidate, b: &Candidate) -> f64 {
        match (a.feasible, b.feasible) {
            (true, true) => {
                let k = self.p.c1() - self.p.c0();
                (a.effort - b.effort) * (self.p.s1() - self.p.w0() - k * (a.effort + b.effort))
            }
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
            (false, false) => 0.0,
        }
    }
}

/// Subgame-perfect equilibrium by numerical backward induction.
///
/// The premium search runs over `[-w0, bracket_hi_wage · s0]` and widens the
/// upper end tenfold once if the grid argmax lands on it.
pub fn numeric_spne(p: &ModelParams, cfg: &SearchConfig) -> Result<Equilibrium, SearchError> {
    cfg.validate()?;
    let obj = FirmObjective {
        p,
        cfg,
        first_error: RefCell::new(None),
    };
    let lo = -p.w0();
    let mut hi = cfg.bracket_hi_wage * p.s0();
    let mut widened = false;
    let refined = loop {
        let refined = grid_then_refine(&obj, lo, hi, cfg.grid_points, cfg.refine_tol);
        if let Some(err) = obj.first_error.borrow_mut().take() {
            return Err(err);
        }
        if !obj.eval(refined.grid.x).feasible {
            return Err(SearchError::NoEquilibrium { lo, hi });
        }
        if refined.grid.index + 1 < cfg.grid_points {
            break refined;
        }
        if widened {
            return Err(SearchError::BracketTooSmall { what: "premium", hi });
        }
        widened = true;
        hi *= WIDEN_FACTOR;
    };
    let offer = ContractOffer::new(refined.x);
    let effort = numeric_best_effort(p, &offer, cfg)?;
    if contract::ir_slack(p, &offer, effort)? < 0.0 {
        return Err(SearchError::NoEquilibrium { lo, hi });
    }
    Ok(Equilibrium::evaluate(
        p,
        refined.x,
        effort,
        SolutionBranch::Numeric,
    ))
}
