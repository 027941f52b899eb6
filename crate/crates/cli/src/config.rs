use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use synthrank_core::{
    load_fixture, DecimalSeparator, Direction, IndicatorDataset, MissingPolicy, StdConvention,
};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "synthrank", version, about = "Synthetic-measure ranking and OLS diagnostics for indicator tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the embedded EU-28 indicator table as CSV.
    Fixture,
    /// Normalize, score and classify every entity.
    Rank(RankArgs),
    /// Fit an OLS model of one indicator on others.
    Regress(RegressArgs),
    /// Ranking, regression and the comparison with published values in one document.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Indicator CSV: first column entity code, then one column per variable.
    #[arg(long, value_name = "PATH", conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    /// Use the embedded EU-28 table (the default when --input is absent).
    #[arg(long)]
    pub fixture: bool,
    /// CSV of `id,direction` rows overriding variable directions.
    #[arg(long, value_name = "PATH")]
    pub directions: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MissingArg::Mean)]
    pub missing: MissingArg,
    /// Decimal separator of the input file.
    #[arg(long, value_enum, default_value_t = DecimalArg::Auto)]
    pub decimal: DecimalArg,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Response variable; defaults to the last column.
    #[arg(long, value_name = "ID")]
    pub dependent: Option<String>,
    /// Comma-separated predictors; defaults to every other column.
    #[arg(long, value_name = "ID,ID,...", value_delimiter = ',')]
    pub predictors: Option<Vec<String>>,
    /// Significance level for flagging predictors.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Fit through the origin.
    #[arg(long)]
    pub no_intercept: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ClassArgs {
    /// Divisor for the spread of synthetic scores.
    #[arg(long = "std", value_enum, default_value_t = StdArg::Population)]
    pub std_convention: StdArg,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub class: ClassArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RegressArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub class: ClassArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Predictor for the single-predictor equation; defaults to x10 on the
    /// fixture and to the most significant predictor otherwise.
    #[arg(long, value_name = "ID")]
    pub equation_predictor: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MissingArg {
    Listwise,
    Mean,
}

impl From<MissingArg> for MissingPolicy {
    fn from(m: MissingArg) -> Self {
        match m {
            MissingArg::Listwise => MissingPolicy::ListwiseDeletion,
            MissingArg::Mean => MissingPolicy::MeanImputation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecimalArg {
    Dot,
    Comma,
    Auto,
}

impl From<DecimalArg> for DecimalSeparator {
    fn from(d: DecimalArg) -> Self {
        match d {
            DecimalArg::Dot => DecimalSeparator::Dot,
            DecimalArg::Comma => DecimalSeparator::Comma,
            DecimalArg::Auto => DecimalSeparator::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StdArg {
    Population,
    Sample,
}

impl From<StdArg> for StdConvention {
    fn from(s: StdArg) -> Self {
        match s {
            StdArg::Population => StdConvention::Population,
            StdArg::Sample => StdConvention::Sample,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    Fixture,
    File(PathBuf),
}

impl InputSource {
    pub fn is_fixture(&self) -> bool {
        matches!(self, InputSource::Fixture)
    }
}

/// Fully resolved and validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: InputSource,
    /// Direction overrides, applied after loading.
    pub directions: BTreeMap<String, Direction>,
    pub missing: MissingPolicy,
    pub decimal: DecimalSeparator,
    pub std_convention: StdConvention,
    pub dependent: Option<String>,
    pub predictors: Option<Vec<String>>,
    pub alpha: f64,
    pub intercept: bool,
    pub equation_predictor: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: InputSource::Fixture,
            directions: BTreeMap::new(),
            missing: MissingPolicy::MeanImputation,
            decimal: DecimalSeparator::Auto,
            std_convention: StdConvention::Population,
            dependent: None,
            predictors: None,
            alpha: 0.05,
            intercept: true,
            equation_predictor: None,
            format: Format::Table,
        }
    }
}

impl RunConfig {
    fn with_data(data: &DataArgs) -> Result<Self, CliError> {
        let input = match &data.input {
            Some(path) => InputSource::File(path.clone()),
            None => InputSource::Fixture,
        };
        let directions = match &data.directions {
            Some(path) => read_directions(path)?,
            None => BTreeMap::new(),
        };
        Ok(RunConfig {
            input,
            directions,
            missing: data.missing.into(),
            decimal: data.decimal.into(),
            ..RunConfig::default()
        })
    }

    fn with_model(mut self, model: &ModelArgs) -> Result<Self, CliError> {
        self.dependent = model.dependent.clone();
        self.predictors = model.predictors.clone();
        self.alpha = model.alpha;
        self.intercept = !model.no_intercept;
        self.validate()?;
        Ok(self)
    }

    pub fn from_rank(args: &RankArgs) -> Result<Self, CliError> {
        let mut cfg = Self::with_data(&args.data)?;
        cfg.std_convention = args.class.std_convention.into();
        cfg.format = args.output.format;
        Ok(cfg)
    }

    pub fn from_regress(args: &RegressArgs) -> Result<Self, CliError> {
        let mut cfg = Self::with_data(&args.data)?.with_model(&args.model)?;
        cfg.format = args.output.format;
        Ok(cfg)
    }

    pub fn from_report(args: &ReportArgs) -> Result<Self, CliError> {
        let mut cfg = Self::with_data(&args.data)?.with_model(&args.model)?;
        cfg.std_convention = args.class.std_convention.into();
        cfg.equation_predictor = args.equation_predictor.clone();
        cfg.format = args.output.format;
        Ok(cfg)
    }

    /// Checks that do not need the data.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CliError::Config(format!("--alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if let (Some(dep), Some(preds)) = (&self.dependent, &self.predictors) {
            if preds.iter().any(|p| p == dep) {
                return Err(CliError::Config(format!(
                    "dependent variable '{dep}' is also listed in --predictors"
                )));
            }
        }
        if let Some(preds) = &self.predictors {
            if preds.is_empty() || preds.iter().any(String::is_empty) {
                return Err(CliError::Config("--predictors needs at least one non-empty id".into()));
            }
            let mut seen = std::collections::BTreeSet::new();
            if let Some(dup) = preds.iter().find(|p| !seen.insert(p.as_str())) {
                return Err(CliError::Config(format!("predictor '{dup}' is listed twice")));
            }
        }
        Ok(())
    }

    /// Loads the input and applies direction overrides. Unknown variables in
    /// the overrides are configuration errors.
    pub fn load(&self) -> Result<IndicatorDataset, CliError> {
        let mut data = match &self.input {
            InputSource::Fixture => load_fixture(),
            InputSource::File(path) => {
                let text = read_file(path)?;
                IndicatorDataset::parse_csv(&text, self.decimal)?
            }
        };
        for (id, direction) in &self.directions {
            if data.variable_index(id).is_none() {
                return Err(CliError::Config(format!(
                    "--directions names unknown variable '{id}'"
                )));
            }
            data = data.with_direction(id, *direction)?;
        }
        Ok(data)
    }

    /// Resolves the response and predictor ids against the loaded data.
    pub fn model_variables(&self, data: &IndicatorDataset) -> Result<(String, Vec<String>), CliError> {
        let ids: Vec<&str> = data.variables().iter().map(|v| v.id.as_str()).collect();
        let dependent = match &self.dependent {
            Some(d) => d.clone(),
            None => ids.last().map(|s| s.to_string()).ok_or_else(|| CliError::Config("input has no variables".into()))?,
        };
        if !ids.contains(&dependent.as_str()) {
            return Err(CliError::Config(format!("--dependent names unknown variable '{dependent}'")));
        }
        let predictors = match &self.predictors {
            Some(p) => p.clone(),
            None => ids.iter().filter(|&&id| id != dependent).map(|s| s.to_string()).collect(),
        };
        if predictors.is_empty() {
            return Err(CliError::Config("no predictors left besides the dependent variable".into()));
        }
        for p in &predictors {
            if !ids.contains(&p.as_str()) {
                return Err(CliError::Config(format!("--predictors names unknown variable '{p}'")));
            }
            if *p == dependent {
                return Err(CliError::Config(format!(
                    "dependent variable '{dependent}' is also listed in --predictors"
                )));
            }
        }
        Ok((dependent, predictors))
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Parses `id,direction` lines. A first line of `id,direction` is treated as
/// a header; blank lines and `#` comments are skipped.
pub fn parse_directions(text: &str) -> Result<BTreeMap<String, Direction>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((id, dir)) = line.split_once(',') else {
            return Err(CliError::Config(format!("directions line {}: expected 'id,direction'", i + 1)));
        };
        let (id, dir) = (id.trim(), dir.trim());
        if out.is_empty() && id.eq_ignore_ascii_case("id") && dir.eq_ignore_ascii_case("direction") {
            continue;
        }
        let direction: Direction = dir.parse().map_err(|_| {
            CliError::Config(format!(
                "directions line {}: '{dir}' is not 'stimulant' or 'destimulant'",
                i + 1
            ))
        })?;
        if out.insert(id.to_owned(), direction).is_some() {
            return Err(CliError::Config(format!("directions line {}: '{id}' listed twice", i + 1)));
        }
    }
    Ok(out)
}

fn read_directions(path: &Path) -> Result<BTreeMap<String, Direction>, CliError> {
    parse_directions(&read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_file() {
        let d = parse_directions("id,direction\nx1, destimulant\n# note\n\nx2,stimulant\n").unwrap();
        assert_eq!(d["x1"], Direction::DeStimulant);
        assert_eq!(d["x2"], Direction::Stimulant);
        assert!(parse_directions("x1,up\n").is_err());
        assert!(parse_directions("x1\n").is_err());
        assert!(parse_directions("x1,stimulant\nx1,destimulant\n").is_err());
    }

    #[test]
    fn alpha_and_dependent_checks() {
        let mut cfg = RunConfig { alpha: 1.0, ..RunConfig::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
        cfg.alpha = 0.05;
        cfg.dependent = Some("x12".into());
        cfg.predictors = Some(vec!["x1".into(), "x12".into()]);
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn model_defaults() {
        let cfg = RunConfig::default();
        let data = cfg.load().unwrap();
        let (dep, preds) = cfg.model_variables(&data).unwrap();
        assert_eq!(dep, "x12");
        assert_eq!(preds.len(), 11);
        assert_eq!(preds[0], "x1");
    }

    #[test]
    fn unknown_direction_variable() {
        let mut cfg = RunConfig::default();
        cfg.directions.insert("x99".into(), Direction::Stimulant);
        assert!(matches!(cfg.load(), Err(CliError::Config(_))));
    }
}
