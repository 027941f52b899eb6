//! Multiple OLS regression with coefficient inference, goodness of fit and
//! residual diagnostics (Durbin–Watson, lag-1 serial correlation, normal
//! probability plot).
//!
//! Coefficients come from a Householder QR of the design matrix. With an
//! intercept, R² uses the centred total sum of squares; without one it uses
//! the raw sum of squares of `y`, so R² stays in `[0, 1]` in both cases.

use std::fmt;

use serde::Serialize;

use crate::dataset::CompleteDataset;
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::statfn::{f_sf, inv_normal_cdf, t_two_sided};

pub const INTERCEPT: &str = "(intercept)";

/// `b* = b · s_x / s_y` with sample standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Standardized {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitStatistics {
    pub r: f64,
    pub r2: f64,
    pub adjusted_r2: f64,
    pub f: f64,
    pub df_model: usize,
    pub df_resid: usize,
    pub p_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionFit {
    pub dependent: String,
    pub predictors: Vec<String>,
    pub has_intercept: bool,
    pub n_used: usize,
    /// Observation labels in fitting order (entity codes for dataset fits).
    pub observations: Vec<String>,
    /// All estimated parameters in design order: intercept first when present.
    pub params: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// `b / se`. A zero standard error (exact fit) gives ±∞ here and p = 0.
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    /// `None` when `y` or a predictor has zero sample variance.
    pub standardized: Option<Standardized>,
    pub observed: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub sse: f64,
    pub sst: f64,
    pub r: f64,
    pub r2: f64,
    pub adjusted_r2: f64,
    /// `+∞` for an exact fit.
    pub f: f64,
    pub p_f: f64,
    pub df_model: usize,
    pub df_resid: usize,
    /// `sqrt(SSE / df_resid)`.
    pub std_error_estimate: f64,
}

impl RegressionFit {
    pub fn intercept(&self) -> Option<f64> {
        self.has_intercept.then(|| self.params[0])
    }

    fn offset(&self) -> usize {
        usize::from(self.has_intercept)
    }

    /// Predictor coefficients, without the intercept.
    pub fn coefficients(&self) -> &[f64] {
        &self.params[self.offset()..]
    }

    pub fn coefficient_std_errors(&self) -> &[f64] {
        &self.std_errors[self.offset()..]
    }

    pub fn predictor_p_values(&self) -> &[f64] {
        &self.p_values[self.offset()..]
    }

    /// Term labels aligned with `params`.
    pub fn terms(&self) -> Vec<&str> {
        let mut terms = Vec::with_capacity(self.params.len());
        if self.has_intercept {
            terms.push(INTERCEPT);
        }
        terms.extend(self.predictors.iter().map(String::as_str));
        terms
    }

    pub fn coefficient(&self, predictor: &str) -> Option<f64> {
        let j = self.predictors.iter().position(|p| p == predictor)?;
        Some(self.coefficients()[j])
    }

    pub fn fit_statistics(&self) -> FitStatistics {
        FitStatistics {
            r: self.r,
            r2: self.r2,
            adjusted_r2: self.adjusted_r2,
            f: self.f,
            df_model: self.df_model,
            df_resid: self.df_resid,
            p_f: self.p_f,
        }
    }
}

/// Fits `y` on the rows of `x` (observation × predictor). Predictors are
/// named `x1, x2, …` and the response `y`.
pub fn fit_ols(x: &[Vec<f64>], y: &[f64], include_intercept: bool) -> Result<RegressionFit> {
    if x.len() != y.len() {
        return Err(Error::Malformed(format!(
            "{} design rows for {} responses",
            x.len(),
            y.len()
        )));
    }
    let k = x.first().map_or(0, Vec::len);
    if x.iter().any(|row| row.len() != k) {
        return Err(Error::Malformed("design rows differ in length".into()));
    }
    let columns: Vec<Vec<f64>> = (0..k).map(|j| x.iter().map(|row| row[j]).collect()).collect();
    let names: Vec<String> = (1..=k).map(|j| format!("x{j}")).collect();
    fit_columns("y", &names, &columns, y, include_intercept, None)
}

/// Fits `dependent ~ predictors` over a complete dataset, observations in
/// entity order.
pub fn fit_dataset<S: AsRef<str>>(
    data: &CompleteDataset,
    dependent: &str,
    predictors: &[S],
    include_intercept: bool,
) -> Result<RegressionFit> {
    let y = data.column_by_id(dependent)?;
    let mut names = Vec::with_capacity(predictors.len());
    let mut columns = Vec::with_capacity(predictors.len());
    for p in predictors {
        let p = p.as_ref();
        if p == dependent {
            return Err(Error::Malformed(format!(
                "dependent variable '{p}' is also listed as a predictor"
            )));
        }
        columns.push(data.column_by_id(p)?);
        names.push(p.to_owned());
    }
    fit_columns(
        dependent,
        &names,
        &columns,
        &y,
        include_intercept,
        Some(data.entities()),
    )
}

/// Core fit over named predictor columns.
pub fn fit_columns(
    dependent: &str,
    names: &[String],
    columns: &[Vec<f64>],
    y: &[f64],
    include_intercept: bool,
    labels: Option<&[String]>,
) -> Result<RegressionFit> {
    let n = y.len();
    let k = columns.len();
    if k == 0 {
        return Err(Error::TooFew {
            what: "predictors",
            required: 1,
            found: 0,
        });
    }
    let p = k + usize::from(include_intercept);
    if n <= p {
        return Err(Error::TooFew {
            what: "observations (more than the number of parameters)",
            required: p + 1,
            found: n,
        });
    }
    if y.iter().chain(columns.iter().flatten()).any(|v| !v.is_finite()) {
        return Err(Error::Malformed("non-finite value in regression data".into()));
    }

    let mut design = Vec::with_capacity(p);
    let mut design_names = Vec::with_capacity(p);
    if include_intercept {
        design.push(vec![1.0; n]);
        design_names.push(INTERCEPT.to_owned());
    }
    design.extend(columns.iter().cloned());
    design_names.extend(names.iter().cloned());

    let ls = least_squares(&design, &design_names, y)?;
    let params = ls.coefficients;

    let fitted: Vec<f64> = (0..n)
        .map(|i| design.iter().zip(&params).map(|(col, b)| col[i] * b).sum())
        .collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(yi, fi)| yi - fi).collect();
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let sst = total_sum_of_squares(y, include_intercept);

    let df_resid = n - p;
    let sigma2 = sse / df_resid as f64;
    let std_errors: Vec<f64> = ls.xtx_inv_diag.iter().map(|d| (sigma2 * d).sqrt()).collect();

    let mut t_stats = Vec::with_capacity(p);
    let mut p_values = Vec::with_capacity(p);
    for (b, se) in params.iter().zip(&std_errors) {
        let (t, pv) = t_and_p(*b, *se, df_resid)?;
        t_stats.push(t);
        p_values.push(pv);
    }

    let stats = if sst > 0.0 {
        fit_statistics(sse, sst, n, k, include_intercept)?
    } else {
        // Constant response: nothing to explain.
        FitStatistics {
            r: 0.0,
            r2: 0.0,
            adjusted_r2: adjusted_r2(0.0, n, df_resid, include_intercept),
            f: 0.0,
            df_model: k,
            df_resid,
            p_f: 1.0,
        }
    };

    let mut fit = RegressionFit {
        dependent: dependent.to_owned(),
        predictors: names.to_vec(),
        has_intercept: include_intercept,
        n_used: n,
        observations: labels
            .map(<[String]>::to_vec)
            .unwrap_or_else(|| (1..=n).map(|i| i.to_string()).collect()),
        params,
        std_errors,
        t_stats,
        p_values,
        standardized: None,
        observed: y.to_vec(),
        fitted,
        residuals,
        sse,
        sst,
        r: stats.r,
        r2: stats.r2,
        adjusted_r2: stats.adjusted_r2,
        f: stats.f,
        p_f: stats.p_f,
        df_model: k,
        df_resid,
        std_error_estimate: sigma2.sqrt(),
    };
    fit.standardized = standardized_coefficients(&fit, columns, y).ok();
    Ok(fit)
}

fn total_sum_of_squares(y: &[f64], centred: bool) -> f64 {
    let mu = if centred {
        y.iter().sum::<f64>() / y.len() as f64
    } else {
        0.0
    };
    y.iter().map(|v| (v - mu) * (v - mu)).sum()
}

fn t_and_p(b: f64, se: f64, df: usize) -> Result<(f64, f64)> {
    let t = b / se;
    if t.is_nan() {
        return Ok((f64::NAN, f64::NAN));
    }
    Ok((t, t_two_sided(t, df as u64)?.value()))
}

fn adjusted_r2(r2: f64, n: usize, df_resid: usize, centred: bool) -> f64 {
    let n_eff = (n - usize::from(centred)) as f64;
    1.0 - (1.0 - r2) * n_eff / df_resid as f64
}

fn fit_statistics(sse: f64, sst: f64, n: usize, k: usize, centred: bool) -> Result<FitStatistics> {
    if !(sst > 0.0) {
        return Err(Error::ZeroVariance {
            name: "dependent variable".into(),
        });
    }
    let df_resid = n - k - usize::from(centred);
    let r2 = (1.0 - sse / sst).clamp(0.0, 1.0);
    let f = if sse > 0.0 {
        ((sst - sse).max(0.0) / k as f64) / (sse / df_resid as f64)
    } else {
        f64::INFINITY
    };
    Ok(FitStatistics {
        r: r2.sqrt(),
        r2,
        adjusted_r2: adjusted_r2(r2, n, df_resid, centred),
        f,
        df_model: k,
        df_resid,
        p_f: f_sf(f, k as u64, df_resid as u64)?.value(),
    })
}

/// R, R², adjusted R², F and its p-value. Errors when the dependent variable
/// is constant. An exact fit gives `F = +∞`, `p_F = 0`.
pub fn goodness_of_fit(fit: &RegressionFit) -> Result<FitStatistics> {
    fit_statistics(fit.sse, fit.sst, fit.n_used, fit.df_model, fit.has_intercept)
}

/// t statistics and two-sided p-values for every parameter (intercept
/// first). Errors on a zero standard error.
pub fn coefficient_inference(fit: &RegressionFit) -> Result<(Vec<f64>, Vec<f64>)> {
    let terms = fit.terms();
    let mut ts = Vec::with_capacity(fit.params.len());
    let mut ps = Vec::with_capacity(fit.params.len());
    for ((b, se), term) in fit.params.iter().zip(&fit.std_errors).zip(terms) {
        if *se == 0.0 {
            return Err(Error::ZeroStdError(term.to_owned()));
        }
        let (t, p) = t_and_p(*b, *se, fit.df_resid)?;
        ts.push(t);
        ps.push(p);
    }
    Ok((ts, ps))
}

fn sample_std(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mu = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Standardized (beta) coefficients and their standard errors, using sample
/// (`n − 1`) standard deviations of the predictors and the response.
pub fn standardized_coefficients(fit: &RegressionFit, columns: &[Vec<f64>], y: &[f64]) -> Result<Standardized> {
    if columns.len() != fit.predictors.len() {
        return Err(Error::Malformed(format!(
            "{} predictor columns for a fit with {} predictors",
            columns.len(),
            fit.predictors.len()
        )));
    }
    let sy = sample_std(y);
    if !(sy > 0.0) {
        return Err(Error::ZeroVariance {
            name: fit.dependent.clone(),
        });
    }
    let mut coefficients = Vec::with_capacity(columns.len());
    let mut std_errors = Vec::with_capacity(columns.len());
    for (((col, b), se), name) in columns
        .iter()
        .zip(fit.coefficients())
        .zip(fit.coefficient_std_errors())
        .zip(&fit.predictors)
    {
        let sx = sample_std(col);
        if !(sx > 0.0) {
            return Err(Error::ZeroVariance { name: name.clone() });
        }
        coefficients.push(b * sx / sy);
        std_errors.push(se * sx / sy);
    }
    Ok(Standardized {
        coefficients,
        std_errors,
    })
}

/// `Σ (e_t − e_{t−1})² / Σ e_t²` over residuals in the given order.
pub fn durbin_watson(residuals: &[f64]) -> Result<f64> {
    if residuals.len() < 2 {
        return Err(Error::TooFew {
            what: "residuals for Durbin-Watson",
            required: 2,
            found: residuals.len(),
        });
    }
    let ss: f64 = residuals.iter().map(|e| e * e).sum();
    if ss == 0.0 {
        return Err(Error::ZeroVariance {
            name: "residuals".into(),
        });
    }
    let diffs: f64 = residuals.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    Ok((diffs / ss).min(4.0))
}

/// Lag-1 Pearson correlation between `e[..n−1]` and `e[1..]`.
pub fn serial_correlation(residuals: &[f64]) -> Result<f64> {
    let n = residuals.len();
    if n < 3 {
        return Err(Error::TooFew {
            what: "residuals for serial correlation",
            required: 3,
            found: n,
        });
    }
    let (a, b) = (&residuals[..n - 1], &residuals[1..]);
    let m = (n - 1) as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / m, b.iter().sum::<f64>() / m);
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::ZeroVariance {
            name: "lagged residuals".into(),
        });
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlotPoint {
    /// `Φ⁻¹((i − 3/8) / (n + 1/4))` for 1-based rank `i`.
    pub quantile: f64,
    pub residual: f64,
    /// Position of this residual in the fit's observation order.
    pub index: usize,
}

/// Normal probability plot points with Blom plotting positions, sorted by
/// residual.
pub fn normal_probability_plot(residuals: &[f64]) -> Result<Vec<PlotPoint>> {
    let n = residuals.len();
    if n < 3 {
        return Err(Error::TooFew {
            what: "residuals for a probability plot",
            required: 3,
            found: n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| residuals[a].total_cmp(&residuals[b]));
    let position = |pos: usize| (pos as f64 + 1.0 - 0.375) / (n as f64 + 0.25);
    order
        .into_iter()
        .enumerate()
        .map(|(pos, idx)| {
            // Upper-half quantiles mirror the lower half so the plot is
            // exactly symmetric.
            let mirror = n - 1 - pos;
            let quantile = if pos > mirror {
                -inv_normal_cdf(position(mirror))?
            } else {
                inv_normal_cdf(position(pos))?
            };
            Ok(PlotPoint {
                quantile,
                residual: residuals[idx],
                index: idx,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub durbin_watson: f64,
    pub serial_correlation: f64,
    pub normality_plot: Vec<PlotPoint>,
}

/// Residual diagnostics for a fit.
pub fn diagnose(fit: &RegressionFit) -> Result<Diagnostics> {
    Ok(Diagnostics {
        durbin_watson: durbin_watson(&fit.residuals)?,
        serial_correlation: serial_correlation(&fit.residuals)?,
        normality_plot: normal_probability_plot(&fit.residuals)?,
    })
}

/// Predictors with `p < alpha`, intercept excluded, in predictor order.
pub fn significant_predictors(fit: &RegressionFit, alpha: f64) -> Vec<String> {
    fit.predictors
        .iter()
        .zip(fit.predictor_p_values())
        .filter(|(_, p)| **p < alpha)
        .map(|(name, _)| name.clone())
        .collect()
}

/// `y = a1·x + a0 ± s` for a single-predictor fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleEquation {
    pub dependent: String,
    pub predictor: String,
    pub slope: f64,
    pub intercept: f64,
    pub residual_std_error: f64,
}

impl SimpleEquation {
    pub fn from_fit(fit: &RegressionFit) -> Result<Self> {
        if fit.predictors.len() != 1 || !fit.has_intercept {
            return Err(Error::Malformed(
                "a simple equation needs exactly one predictor and an intercept".into(),
            ));
        }
        Ok(SimpleEquation {
            dependent: fit.dependent.clone(),
            predictor: fit.predictors[0].clone(),
            slope: fit.params[1],
            intercept: fit.params[0],
            residual_std_error: fit.std_error_estimate,
        })
    }
}

impl fmt::Display for SimpleEquation {
    /// Six significant digits relative to the largest of the three numbers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = [self.slope, self.intercept, self.residual_std_error]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let decimals = if scale > 0.0 {
            (5 - scale.log10().floor() as i32).clamp(0, 15) as usize
        } else {
            0
        };
        let num = |v: f64| trim_number(&format!("{:.*}", decimals, v.abs()));
        let sign = if self.intercept < 0.0 && num(self.intercept) != "0" {
            '-'
        } else {
            '+'
        };
        let slope = trim_number(&format!("{:.*}", decimals, self.slope));
        let slope = if slope == "-0" { "0".to_owned() } else { slope };
        write!(
            f,
            "{} = {}·{} {} {} ± {}",
            self.dependent,
            slope,
            self.predictor,
            sign,
            num(self.intercept),
            num(self.residual_std_error)
        )
    }
}

fn trim_number(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

/// Fits `y` on a single `x` with intercept.
pub fn simple_regression_report(x: &[f64], y: &[f64]) -> Result<SimpleEquation> {
    let fit = fit_columns("y", &["x".to_owned()], &[x.to_vec()], y, true, None)?;
    SimpleEquation::from_fit(&fit)
}
