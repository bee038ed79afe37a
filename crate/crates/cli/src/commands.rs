use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use eps_core::contract::{self, ModelError, ModelParams};
use eps_core::dataset::{self, DataError, Gender, Hypothesis, Panel};
use eps_core::oracle::{self, central_difference, SearchConfig};
use eps_core::regression::{self, significance_stars, RegressionError, RegressionFit};
use eps_core::selection::{self, SelectionEnv, SelectionError};
use eps_core::sweep::{self, Execution, FitError};

use crate::format::{round_dp, sig6};
use crate::{
    CliError, EquilibriumArgs, ExportArgs, RegressArgs, RunReport, ScatterArgs, SelectArgs, StaticsArgs,
};

/// Largest closed-form/numeric disagreement `--verify` accepts.
pub const ORACLE_TOL: f64 = 1e-6;
/// Largest relative error `--check-fd` accepts.
pub const FD_TOL: f64 = 1e-5;
pub const STARS_LEGEND: &str = "* p < .05, ** p < .01, *** p < .001";

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Param(e.to_string())
    }
}

impl From<SelectionError> for CliError {
    fn from(e: SelectionError) -> Self {
        CliError::Param(e.to_string())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<RegressionError> for CliError {
    fn from(e: RegressionError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::Data(d) => d.into(),
            FitError::Regression(r) => r.into(),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn equilibrium(a: &EquilibriumArgs) -> Result<RunReport, CliError> {
    let p = ModelParams::new(a.w0, a.s0, a.s1, a.m)?;
    let eq = contract::solve_spne(&p)?;
    let params = json!({"s0": a.s0, "s1": a.s1, "w0": a.w0, "M": a.m, "verify": a.verify});
    let results = json!({
        "delta_w_star": eq.delta_w_star,
        "w1_star": eq.offer().w1(&p),
        "a_star": eq.a_star,
        "firm_profit": eq.firm_profit,
        "agent_utility_host": eq.agent_utility_host,
        "agent_reservation": eq.agent_reservation,
        "ir_binding": eq.ir_binding,
        "piece_rate_ir_slack": eq.piece_rate_ir_slack,
        "firm_soc": eq.firm_soc,
        "branch": eq.branch,
    });
    let report = RunReport::new("equilibrium", params, results);
    if !a.verify {
        return Ok(report);
    }
    let cfg = SearchConfig::default();
    let verification = match oracle::numeric_spne(&p, &cfg) {
        Ok(num) => {
            let dw = (num.delta_w_star - eq.delta_w_star).abs();
            let da = (num.a_star - eq.a_star).abs();
            json!({
                "method": "grid scan + golden section",
                "grid_points": cfg.grid_points,
                "numeric_delta_w": num.delta_w_star,
                "numeric_a": num.a_star,
                "delta_w_diff": dw,
                "a_diff": da,
                "tolerance": ORACLE_TOL,
                "agree": dw <= ORACLE_TOL && da <= ORACLE_TOL,
            })
        }
        Err(e) => json!({
            "method": "grid scan + golden section",
            "grid_points": cfg.grid_points,
            "error": e.to_string(),
            "agree": false,
        }),
    };
    Ok(report.with_verification(verification))
}

fn sign(x: f64) -> &'static str {
    if x > 0.0 {
        "+"
    } else if x < 0.0 {
        "-"
    } else {
        "0"
    }
}

fn rel_err(approx: f64, exact: f64) -> f64 {
    ((approx - exact) / exact).abs()
}

pub fn statics(a: &StaticsArgs) -> Result<RunReport, CliError> {
    let p = ModelParams::new(0.0, a.s0, a.s1, 0.0)?;
    let cs = contract::comparative_statics(&p);
    let params = json!({"s0": a.s0, "s1": a.s1, "check_fd": a.check_fd});
    let rows = [
        (
            "d_dw_d_s1",
            cs.d_dw_d_s1,
            "higher host skill relevance raises the premium",
        ),
        (
            "d_dw_d_s0",
            cs.d_dw_d_s0,
            "higher home skill relevance lowers the premium",
        ),
        (
            "d_dw_d_delta",
            cs.d_dw_d_delta,
            "deeper skill depreciation lowers the premium",
        ),
    ];
    let results = json!({
        "derivatives": rows
            .iter()
            .map(|(name, v, fact)| json!({"derivative": name, "value": v, "sign": sign(*v), "reading": fact}))
            .collect::<Vec<_>>(),
    });
    let report = RunReport::new("statics", params, results);
    if !a.check_fd {
        return Ok(report);
    }

    let premium = |s0: f64, s1: f64| -> Result<f64, CliError> {
        Ok(contract::solve_spne(&ModelParams::new(0.0, s0, s1, 0.0)?)?.delta_w_star)
    };
    // every probe stays strictly inside 0 < s1 < s0
    let h = 1e-5 * a.s1.min(a.s0 - a.s1);
    premium(a.s0 + h, a.s1 + h)?;
    premium(a.s0 - h, a.s1 - h)?;
    let fd_s1 = central_difference(|x| premium(a.s0, x).unwrap_or(f64::NAN), a.s1, h);
    let fd_s0 = central_difference(|x| premium(x, a.s1).unwrap_or(f64::NAN), a.s0, h);
    let fd_delta = central_difference(|d| premium(a.s1 + d, a.s1).unwrap_or(f64::NAN), a.s0 - a.s1, h);
    let errs = [
        rel_err(fd_s1, cs.d_dw_d_s1),
        rel_err(fd_s0, cs.d_dw_d_s0),
        rel_err(fd_delta, cs.d_dw_d_delta),
    ];
    let max = errs.iter().copied().fold(0.0, f64::max);
    let verification = json!({
        "step": h,
        "finite_differences": [
            {"derivative": "d_dw_d_s1", "fd": fd_s1, "rel_err": errs[0]},
            {"derivative": "d_dw_d_s0", "fd": fd_s0, "rel_err": errs[1]},
            {"derivative": "d_dw_d_delta", "fd": fd_delta, "rel_err": errs[2]},
        ],
        "max_rel_err": max,
        "tolerance": FD_TOL,
        "agree": max <= FD_TOL,
    });
    Ok(report.with_verification(verification))
}

/// Loads `--data` (or `EPS_LAB_DATA`), falling back to the embedded panel.
pub fn load_panel(path: Option<&Path>) -> Result<(Panel, String), CliError> {
    match path {
        Some(p) => match Panel::from_path(p) {
            Ok(panel) => Ok((panel, p.display().to_string())),
            Err(DataError::Io(e)) => Err(io_err(p, e)),
            Err(e) => Err(e.into()),
        },
        None => Ok((Panel::embedded()?, "embedded".into())),
    }
}

/// One regression table row at full precision.
pub fn fit_row(h: Hypothesis, g: Gender, fit: &RegressionFit) -> Value {
    json!({
        "hypothesis": h,
        "gender": g,
        "n": fit.n,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "adj_r_squared": fit.adj_r_squared,
        "std_err": fit.residual_se,
        "f": fit.f_stat,
        "t": fit.t_slope,
        "p": fit.p_slope,
        "df": fit.df,
        "stars": significance_stars(fit.p_slope),
    })
}

/// One regression table row rounded the way the published tables print.
pub fn table_row(h: Hypothesis, g: Gender, fit: &RegressionFit) -> Value {
    json!({
        "hypothesis": h,
        "gender": g,
        "r_squared": round_dp(fit.r_squared, 3),
        "adj_r_squared": round_dp(fit.adj_r_squared, 3),
        "std_err": round_dp(fit.residual_se, 5),
        "f": round_dp(fit.f_stat, 3),
        "t": round_dp(fit.t_slope, 3),
        "p": round_dp(fit.p_slope, 3),
        "stars": significance_stars(fit.p_slope),
    })
}

pub fn regress(a: &RegressArgs) -> Result<RunReport, CliError> {
    let (panel, source) = load_panel(a.data.data.as_deref())?;
    let h: Hypothesis = a.hypothesis.into();
    let fits = sweep::fit_genders(Execution::default(), &panel, h, &a.gender.genders())?;
    if let Some(path) = &a.emit_table {
        let mut buf = String::new();
        for f in &fits {
            buf.push_str(&table_row(f.hypothesis, f.gender, &f.fit).to_string());
            buf.push('\n');
        }
        fs::write(path, buf).map_err(|e| io_err(path, e))?;
    }
    let params = json!({
        "hypothesis": h,
        "gender": format!("{:?}", a.gender).to_lowercase(),
        "data": source,
        "sha256": panel.sha256()?,
        "emit_table": a.emit_table.as_ref().map(|p| p.display().to_string()),
    });
    let results = json!({
        "rows": fits.iter().map(|f| fit_row(f.hypothesis, f.gender, &f.fit)).collect::<Vec<_>>(),
        "legend": STARS_LEGEND,
    });
    Ok(RunReport::new("regress", params, results))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let candidate = out.with_extension("csv");
    if candidate == out {
        let mut name = out.as_os_str().to_owned();
        name.push(".points.csv");
        PathBuf::from(name)
    } else {
        candidate
    }
}

fn axis_labels(h: Hypothesis, g: Gender, log10: bool) -> (String, String, String) {
    let dep = match h {
        Hypothesis::H1 => format!("manufacturing monthly wage, {g} (2017 PPP $)"),
        Hypothesis::H2 => format!("wage gap to KOR, {g} (2017 PPP $)"),
    };
    let title = match h {
        Hypothesis::H1 => "Receiving countries: wage vs industry share",
        Hypothesis::H2 => "Sending countries: wage gap vs industry share",
    };
    let y = if log10 { format!("log10 {dep}") } else { dep };
    (title.to_string(), "industry share of GDP (%)".into(), y)
}

pub fn scatter(a: &ScatterArgs) -> Result<RunReport, CliError> {
    let (panel, source) = load_panel(a.data.data.as_deref())?;
    let h: Hypothesis = a.hypothesis.into();
    let g: Gender = a.gender.into();
    let log10 = !a.raw;
    let sample = dataset::build_sample(&panel, h, g)?;
    let ys = if log10 { &sample.y } else { &sample.y_raw };
    let fit = regression::fit_ols(&sample.x, ys)?;
    let x_min = sample.x.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = sample.x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let trend = regression::trendline_points(&fit, x_min, x_max);

    let (title, x_label, y_label) = axis_labels(h, g, log10);
    let plot = crate::svg::Scatter {
        title,
        x_label: x_label.clone(),
        y_label: y_label.clone(),
        points: sample
            .labels
            .iter()
            .zip(sample.x.iter().zip(ys))
            .map(|(label, (&x, &y))| crate::svg::Point { label, x, y })
            .collect(),
        trend,
    };
    fs::write(&a.out, plot.render()).map_err(|e| io_err(&a.out, e))?;

    let sidecar = a.sidecar.clone().unwrap_or_else(|| sidecar_path(&a.out));
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["label", "x", "y"]).map_err(csv_err)?;
    for (label, (&x, &y)) in sample.labels.iter().zip(sample.x.iter().zip(ys)) {
        w.write_record([label.as_str(), &sig6(x), &sig6(y)])
            .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&sidecar, bytes).map_err(|e| io_err(&sidecar, e))?;

    let params = json!({
        "hypothesis": h,
        "gender": g,
        "scale": if log10 { "log10" } else { "raw" },
        "data": source,
        "out": a.out.display().to_string(),
    });
    let results = json!({
        "points": sample.len(),
        "svg": a.out.display().to_string(),
        "sidecar": sidecar.display().to_string(),
        "x_label": x_label,
        "y_label": y_label,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "trend": if fit.slope > 0.0 { "upward" } else if fit.slope < 0.0 { "downward" } else { "flat" },
        "trendline": [[trend[0].0, trend[0].1], [trend[1].0, trend[1].1]],
    });
    Ok(RunReport::new("scatter", params, results))
}

pub fn select(a: &SelectArgs) -> Result<RunReport, CliError> {
    let env = SelectionEnv::new(a.alpha0, a.r0, a.alpha1, a.r1, a.m)?;
    let verdict = selection::classify_selection(&env)?;
    let params = json!({
        "alpha0": a.alpha0, "r0": a.r0, "alpha1": a.alpha1, "r1": a.r1, "M": a.m,
        "skills": a.skills.as_ref().map(Vec::len),
    });
    let rule = match (verdict.regime.as_str(), verdict.threshold) {
        ("positive-selection", Some(_)) => "migrate iff s > s*",
        ("negative-selection", Some(_)) => "migrate iff s < s*",
        ("all-migrate", _) => "every skill level migrates",
        _ => "no skill level migrates",
    };
    let mut results = json!({
        "regime": verdict.regime.as_str(),
        "threshold": verdict.threshold,
        "rule": rule,
    });
    if let Some(skills) = &a.skills {
        let rate = selection::population_migration_rate(&env, skills)?;
        let migrants = skills.iter().filter(|&&s| verdict.migrates(s)).count();
        results["population"] = json!(skills.len());
        results["migrants"] = json!(migrants);
        results["migration_rate"] = json!(rate);
    }
    Ok(RunReport::new("select", params, results))
}

/// Writes the embedded panel. Without `--out` the CSV itself is the output
/// and no report is produced.
pub fn export_data<W: Write>(a: &ExportArgs, out: &mut W) -> Result<Option<RunReport>, CliError> {
    let panel = Panel::embedded()?;
    let csv = panel.to_csv_string()?;
    let Some(path) = &a.out else {
        out.write_all(csv.as_bytes())?;
        return Ok(None);
    };
    fs::write(path, &csv).map_err(|e| io_err(path, e))?;
    let params = json!({"out": path.display().to_string()});
    let results = json!({
        "path": path.display().to_string(),
        "receiving": panel.receiving.len(),
        "sending": panel.sending.len(),
        "baseline": panel.baseline.code,
        "sha256": panel.sha256()?,
    });
    Ok(Some(RunReport::new("export-data", params, results)))
}
