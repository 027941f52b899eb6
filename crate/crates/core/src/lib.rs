//! Composite-indicator ranking and regression toolkit.
//!
//! The pipeline has two stages:
//!
//! 1. **Ranking.** Raw indicators ([`IndicatorDataset`]) are completed by a
//!    [`MissingPolicy`], min–max normalized per column with stimulant /
//!    de-stimulant directions ([`normalize_matrix`]), and collapsed into one
//!    synthetic score per entity, `w = median · (1 − std)` of its normalized
//!    row ([`score_all`]). Scores are ranked and split into four groups
//!    around `mean(w) ± std(w)` ([`classify`]).
//! 2. **Regression.** Any indicator can be regressed on others by OLS
//!    ([`fit_dataset`]) with t/F inference, standardized coefficients and
//!    residual diagnostics ([`diagnose`]).
//!
//! ```
//! use synthrank_core::{classify, load_fixture, normalize_matrix, score_all, MissingPolicy};
//!
//! let data = load_fixture().apply_missing_policy(MissingPolicy::MeanImputation)?;
//! let scores = score_all(&normalize_matrix(&data)?);
//! let groups = classify(&scores)?;
//! assert_eq!(groups.sizes().iter().sum::<usize>(), 28);
//! # Ok::<(), synthrank_core::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN together with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod error;
pub mod fixture;
pub mod linalg;
pub mod normalize;
pub mod published;
pub mod regress;
pub mod statfn;
pub mod synthesis;

pub use dataset::{
    CompleteDataset, DecimalSeparator, Direction, IndicatorDataset, MissingPolicy, Provenance,
    VariableSpec,
};
pub use error::{Error, Result};
pub use fixture::load_fixture;
pub use normalize::{normalize_column, normalize_matrix, NormalizedColumn, NormalizedMatrix};
pub use regress::{
    coefficient_inference, diagnose, durbin_watson, fit_columns, fit_dataset, fit_ols,
    goodness_of_fit, normal_probability_plot, serial_correlation, significant_predictors,
    simple_regression_report, standardized_coefficients, Diagnostics, FitStatistics, PlotPoint,
    RegressionFit, SimpleEquation, Standardized,
};
pub use statfn::Probability;
pub use synthesis::{
    classify, classify_with, rank, row_median, row_std, score_all, synthetic_measure, Group,
    GroupClassification, RankedEntity, StdConvention, SyntheticScore,
};
