//! Serializable report documents. The JSON layout is described by
//! `docs/report.schema.json`; bump [`SCHEMA_VERSION`] on any breaking change.

use serde::Serialize;
use synthrank_core::dataset::ImputedCell;
use synthrank_core::published::{self, LedgerRow, MembershipAgreement};
use synthrank_core::{
    classify_with, diagnose, fit_dataset, normalize_matrix, rank, score_all, simple_regression_report,
    Direction, Group, IndicatorDataset, MissingPolicy, RegressionFit, StdConvention,
};

use crate::config::{InputSource, RunConfig};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableDirection {
    pub id: String,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSummary {
    /// `"fixture"` or `"file"`.
    pub source: &'static str,
    pub missing_policy: MissingPolicy,
    pub n_entities: usize,
    pub n_variables: usize,
    pub missing_cells: usize,
    pub directions: Vec<VariableDirection>,
}

impl InputSummary {
    fn new(cfg: &RunConfig, data: &IndicatorDataset) -> Self {
        InputSummary {
            source: match cfg.input {
                InputSource::Fixture => "fixture",
                InputSource::File(_) => "file",
            },
            missing_policy: cfg.missing,
            n_entities: data.n_entities(),
            n_variables: data.n_variables(),
            missing_cells: data.missing_count(),
            directions: data
                .variables()
                .iter()
                .map(|v| VariableDirection {
                    id: v.id.clone(),
                    direction: v.direction,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub entity: String,
    pub w: f64,
    pub median: f64,
    pub std: f64,
    pub group: Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupSizes {
    #[serde(rename = "I")]
    pub i: usize,
    #[serde(rename = "II")]
    pub ii: usize,
    #[serde(rename = "III")]
    pub iii: usize,
    #[serde(rename = "IV")]
    pub iv: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub mean_w: f64,
    pub std_w: f64,
    pub convention: StdConvention,
    /// `w̄ + S`: group I starts here.
    pub upper_threshold: f64,
    /// `w̄ − S`: group IV lies strictly below.
    pub lower_threshold: f64,
    pub group_sizes: GroupSizes,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSection {
    pub n_used: usize,
    pub removed_entities: Vec<String>,
    pub imputed_cells: Vec<ImputedCell>,
    pub degenerate_columns: Vec<String>,
    /// Entities whose score reached 1 (every normalized value equal to 1).
    pub unit_bound_entities: Vec<String>,
    pub rows: Vec<RankRow>,
    pub classification: ClassSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub term: String,
    /// Absent for the intercept and when a variable has zero variance.
    pub b_star: Option<f64>,
    pub se_b_star: Option<f64>,
    pub b: f64,
    pub se_b: f64,
    pub t: f64,
    pub p: f64,
    /// Absent for the intercept.
    pub significant: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub r: f64,
    pub r2: f64,
    pub adjusted_r2: f64,
    pub f: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_f: f64,
    pub std_error_estimate: f64,
    pub sse: f64,
    pub sst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsSummary {
    pub durbin_watson: f64,
    pub serial_correlation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotRow {
    pub quantile: f64,
    pub residual: f64,
    pub observation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub observation: String,
    pub observed: f64,
    pub fitted: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionSection {
    pub dependent: String,
    pub predictors: Vec<String>,
    pub intercept: bool,
    pub alpha: f64,
    pub n_used: usize,
    pub removed_entities: Vec<String>,
    pub imputed_cells: Vec<ImputedCell>,
    pub coefficients: Vec<CoefficientRow>,
    pub fit: FitSummary,
    /// Absent when the residuals are all zero or have no lagged variance.
    pub diagnostics: Option<DiagnosticsSummary>,
    pub normality_plot: Vec<PlotRow>,
    pub residuals: Vec<ResidualRow>,
    pub significant_predictors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationSection {
    pub dependent: String,
    pub predictor: String,
    pub slope: f64,
    pub intercept: f64,
    pub residual_std_error: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerSection {
    pub membership: MembershipAgreement,
    pub rows: Vec<LedgerRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub input: InputSummary,
    pub rank: RankSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub input: InputSummary,
    pub regression: RegressionSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub kind: &'static str,
    pub input: InputSummary,
    pub rank: RankSection,
    pub regression: RegressionSection,
    pub equation: Option<EquationSection>,
    /// Only for the fixture, where published values exist.
    pub ledger: Option<LedgerSection>,
}

/// Intermediate results kept alongside the rank section so the ledger can
/// use the classification directly.
struct RankRun {
    section: RankSection,
    classification: synthrank_core::GroupClassification,
}

fn run_rank(cfg: &RunConfig, data: &IndicatorDataset) -> Result<RankRun, CliError> {
    let complete = data.apply_missing_policy(cfg.missing)?;
    let normalized = normalize_matrix(&complete)?;
    let scores = score_all(&normalized);
    let classification = classify_with(&scores, cfg.std_convention)?;
    let ranked = rank(&scores);
    let rows = ranked
        .iter()
        .map(|r| {
            let s = scores.iter().find(|s| s.entity == r.entity).expect("ranked entity has a score");
            RankRow {
                rank: r.rank,
                entity: r.entity.clone(),
                w: s.w,
                median: s.median,
                std: s.std,
                group: classification.group_of(&r.entity).expect("classified entity"),
            }
        })
        .collect();
    let [i, ii, iii, iv] = classification.sizes();
    let provenance = complete.provenance();
    let section = RankSection {
        n_used: complete.n_entities(),
        removed_entities: provenance.removed_entities.clone(),
        imputed_cells: provenance.imputed_cells.clone(),
        degenerate_columns: normalized.degenerate_columns().to_vec(),
        unit_bound_entities: scores
            .iter()
            .filter(|s| s.reaches_unit_bound())
            .map(|s| s.entity.clone())
            .collect(),
        rows,
        classification: ClassSummary {
            mean_w: classification.mean_w,
            std_w: classification.std_w,
            convention: classification.convention,
            upper_threshold: classification.mean_w + classification.std_w,
            lower_threshold: classification.mean_w - classification.std_w,
            group_sizes: GroupSizes { i, ii, iii, iv },
        },
    };
    Ok(RankRun {
        section,
        classification,
    })
}

struct RegressRun {
    section: RegressionSection,
    fit: RegressionFit,
    diagnostics: Option<synthrank_core::Diagnostics>,
    data: synthrank_core::CompleteDataset,
}

fn run_regress(cfg: &RunConfig, data: &IndicatorDataset) -> Result<RegressRun, CliError> {
    let (dependent, predictors) = cfg.model_variables(data)?;
    let mut selected = predictors.clone();
    selected.push(dependent.clone());
    let complete = data.select_variables(&selected)?.apply_missing_policy(cfg.missing)?;
    let fit = fit_dataset(&complete, &dependent, &predictors, cfg.intercept)?;
    let diagnostics = diagnose(&fit).ok();

    let significant: Vec<String> = synthrank_core::significant_predictors(&fit, cfg.alpha);
    let offset = usize::from(fit.has_intercept);
    let coefficients = fit
        .terms()
        .iter()
        .enumerate()
        .map(|(j, term)| {
            let standardized = if j < offset {
                None
            } else {
                fit.standardized
                    .as_ref()
                    .map(|s| (s.coefficients[j - offset], s.std_errors[j - offset]))
            };
            CoefficientRow {
                term: term.to_string(),
                b_star: standardized.map(|s| s.0),
                se_b_star: standardized.map(|s| s.1),
                b: fit.params[j],
                se_b: fit.std_errors[j],
                t: fit.t_stats[j],
                p: fit.p_values[j],
                significant: (j >= offset).then(|| significant.iter().any(|s| s == term)),
            }
        })
        .collect();

    let normality_plot = diagnostics
        .as_ref()
        .map(|d| d.normality_plot.clone())
        .or_else(|| synthrank_core::normal_probability_plot(&fit.residuals).ok())
        .unwrap_or_default()
        .into_iter()
        .map(|p| PlotRow {
            quantile: p.quantile,
            residual: p.residual,
            observation: fit.observations[p.index].clone(),
        })
        .collect();
    let residuals = (0..fit.n_used)
        .map(|i| ResidualRow {
            observation: fit.observations[i].clone(),
            observed: fit.observed[i],
            fitted: fit.fitted[i],
            residual: fit.residuals[i],
        })
        .collect();

    let provenance = complete.provenance();
    let section = RegressionSection {
        dependent,
        predictors,
        intercept: fit.has_intercept,
        alpha: cfg.alpha,
        n_used: fit.n_used,
        removed_entities: provenance.removed_entities.clone(),
        imputed_cells: provenance.imputed_cells.clone(),
        coefficients,
        fit: FitSummary {
            r: fit.r,
            r2: fit.r2,
            adjusted_r2: fit.adjusted_r2,
            f: fit.f,
            df1: fit.df_model,
            df2: fit.df_resid,
            p_f: fit.p_f,
            std_error_estimate: fit.std_error_estimate,
            sse: fit.sse,
            sst: fit.sst,
        },
        diagnostics: diagnostics.as_ref().map(|d| DiagnosticsSummary {
            durbin_watson: d.durbin_watson,
            serial_correlation: d.serial_correlation,
        }),
        normality_plot,
        residuals,
        significant_predictors: significant,
    };
    Ok(RegressRun {
        section,
        fit,
        diagnostics,
        data: complete,
    })
}

pub fn rank_document(cfg: &RunConfig) -> Result<RankDocument, CliError> {
    let data = cfg.load()?;
    Ok(RankDocument {
        schema_version: SCHEMA_VERSION,
        kind: "rank",
        input: InputSummary::new(cfg, &data),
        rank: run_rank(cfg, &data)?.section,
    })
}

pub fn regress_document(cfg: &RunConfig) -> Result<RegressDocument, CliError> {
    let data = cfg.load()?;
    Ok(RegressDocument {
        schema_version: SCHEMA_VERSION,
        kind: "regress",
        input: InputSummary::new(cfg, &data),
        regression: run_regress(cfg, &data)?.section,
    })
}

/// Predictor for the single-predictor equation: the configured one, x10 on
/// the fixture, otherwise the predictor with the smallest p-value.
fn equation_predictor(cfg: &RunConfig, fit: &RegressionFit) -> Result<String, CliError> {
    if let Some(p) = &cfg.equation_predictor {
        if !fit.predictors.contains(p) {
            return Err(CliError::Config(format!(
                "--equation-predictor '{p}' is not among the model's predictors"
            )));
        }
        return Ok(p.clone());
    }
    if cfg.input.is_fixture() && fit.predictors.iter().any(|p| p == "x10") {
        return Ok("x10".into());
    }
    let best = fit
        .predictors
        .iter()
        .zip(fit.predictor_p_values())
        .filter(|(_, p)| !p.is_nan())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(name, _)| name.clone());
    Ok(best.unwrap_or_else(|| fit.predictors[0].clone()))
}

pub fn report_document(cfg: &RunConfig) -> Result<ReportDocument, CliError> {
    let data = cfg.load()?;
    let ranked = run_rank(cfg, &data)?;
    let regressed = run_regress(cfg, &data)?;

    let predictor = equation_predictor(cfg, &regressed.fit)?;
    let x = regressed.data.column_by_id(&predictor)?;
    let y = regressed.data.column_by_id(&regressed.fit.dependent)?;
    // A constant predictor or response leaves no equation to report.
    let simple = simple_regression_report(&x, &y).ok().map(|mut eq| {
        eq.dependent = regressed.fit.dependent.clone();
        eq.predictor = predictor.clone();
        eq
    });
    let equation = simple.as_ref().map(|eq| EquationSection {
        dependent: eq.dependent.clone(),
        predictor: eq.predictor.clone(),
        slope: eq.slope,
        intercept: eq.intercept,
        residual_std_error: eq.residual_std_error,
        text: eq.to_string(),
    });

    let ledger = cfg.input.is_fixture().then(|| LedgerSection {
        membership: published::membership_agreement(&ranked.classification),
        rows: published::discrepancy_ledger(
            Some(&ranked.classification),
            Some(&regressed.fit),
            regressed.diagnostics.as_ref(),
            simple.as_ref(),
        ),
    });

    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        kind: "report",
        input: InputSummary::new(cfg, &data),
        rank: ranked.section,
        regression: regressed.section,
        equation,
        ledger,
    })
}
