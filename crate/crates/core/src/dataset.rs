//! Indicator matrices: parsing, validation, projection and missing-data
//! policies.
//!
//! A dataset is an `entities × variables` grid stored row-major. Cells are
//! `Option<f64>`; `None` marks a missing observation (":" or an empty cell on
//! input). [`CompleteDataset`] is the gap-free form every analysis consumes.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MISSING_MARKER: &str = ":";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Larger is better.
    Stimulant,
    /// Larger is worse.
    #[serde(rename = "destimulant")]
    DeStimulant,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" => return Ok(Direction::Stimulant),
            "-" => return Ok(Direction::DeStimulant),
            _ => {}
        }
        match s.trim().to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
            "stimulant" | "s" => Ok(Direction::Stimulant),
            "destimulant" | "d" => Ok(Direction::DeStimulant),
            _ => Err(Error::Malformed(format!("unknown direction '{}'", s.trim()))),
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Stimulant => "stimulant",
            Direction::DeStimulant => "destimulant",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub id: String,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub unit: String,
    pub direction: Direction,
}

impl VariableSpec {
    pub fn new(id: impl Into<String>, direction: Direction) -> Self {
        let id = id.into();
        VariableSpec {
            label: id.clone(),
            id,
            unit: String::new(),
            direction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecimalSeparator {
    Dot,
    Comma,
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingPolicy {
    #[serde(rename = "listwise")]
    ListwiseDeletion,
    #[default]
    #[serde(rename = "mean")]
    MeanImputation,
}

impl std::fmt::Display for MissingPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MissingPolicy::ListwiseDeletion => "listwise",
            MissingPolicy::MeanImputation => "mean",
        })
    }
}

fn check_shape(entities: &[String], variables: &[VariableSpec], cells: usize) -> Result<()> {
    if entities.len() < 2 {
        return Err(Error::TooFew {
            what: "entities",
            required: 2,
            found: entities.len(),
        });
    }
    if variables.is_empty() {
        return Err(Error::TooFew {
            what: "variables",
            required: 1,
            found: 0,
        });
    }
    if cells != entities.len() * variables.len() {
        return Err(Error::Malformed(format!(
            "{} cells for {} entities x {} variables",
            cells,
            entities.len(),
            variables.len()
        )));
    }
    let mut seen = HashSet::new();
    for e in entities {
        if !seen.insert(e.as_str()) {
            return Err(Error::DuplicateEntity(e.clone()));
        }
    }
    let mut seen = HashSet::new();
    for v in variables {
        if !seen.insert(v.id.as_str()) {
            return Err(Error::DuplicateVariable(v.id.clone()));
        }
    }
    Ok(())
}

/// Raw entity × variable matrix, possibly with missing cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DatasetDoc")]
pub struct IndicatorDataset {
    entities: Vec<String>,
    variables: Vec<VariableSpec>,
    values: Vec<Option<f64>>,
}

#[derive(Deserialize)]
struct DatasetDoc {
    entities: Vec<String>,
    variables: Vec<VariableSpec>,
    values: Vec<Option<f64>>,
}

impl TryFrom<DatasetDoc> for IndicatorDataset {
    type Error = Error;

    fn try_from(doc: DatasetDoc) -> Result<Self> {
        IndicatorDataset::new(doc.entities, doc.variables, doc.values)
    }
}

impl IndicatorDataset {
    pub fn new(
        entities: Vec<String>,
        variables: Vec<VariableSpec>,
        values: Vec<Option<f64>>,
    ) -> Result<Self> {
        check_shape(&entities, &variables, values.len())?;
        if let Some(pos) = values.iter().position(|v| v.is_some_and(|x| !x.is_finite())) {
            let m = variables.len();
            return Err(Error::Malformed(format!(
                "non-finite value for entity '{}', variable '{}'",
                entities[pos / m],
                variables[pos % m].id
            )));
        }
        Ok(IndicatorDataset {
            entities,
            variables,
            values,
        })
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    /// Row-major cells.
    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn cell(&self, entity: usize, variable: usize) -> Option<f64> {
        self.values[entity * self.variables.len() + variable]
    }

    pub fn variable_index(&self, id: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.id == id)
    }

    pub fn entity_index(&self, code: &str) -> Option<usize> {
        self.entities.iter().position(|e| e == code)
    }

    /// Looks up one cell by entity code and variable id.
    pub fn value(&self, entity: &str, variable: &str) -> Result<Option<f64>> {
        let i = self
            .entity_index(entity)
            .ok_or_else(|| Error::UnknownEntity(entity.to_owned()))?;
        let j = self
            .variable_index(variable)
            .ok_or_else(|| Error::UnknownVariable(variable.to_owned()))?;
        Ok(self.cell(i, j))
    }

    pub fn row(&self, entity: usize) -> &[Option<f64>] {
        let m = self.variables.len();
        &self.values[entity * m..(entity + 1) * m]
    }

    /// `(entity, variable)` pairs of every missing cell, in row-major order.
    pub fn missing_cells(&self) -> Vec<(&str, &str)> {
        let m = self.variables.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(k, _)| (self.entities[k / m].as_str(), self.variables[k % m].id.as_str()))
            .collect()
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Returns a copy with the direction of `id` replaced.
    pub fn with_direction(mut self, id: &str, direction: Direction) -> Result<Self> {
        let j = self
            .variable_index(id)
            .ok_or_else(|| Error::UnknownVariable(id.to_owned()))?;
        self.variables[j].direction = direction;
        Ok(self)
    }

    /// Parses a header-first CSV document. The first column holds entity
    /// codes, the rest are variables; ":" and empty cells are missing.
    /// Variables start out as stimulants.
    pub fn parse_csv(text: &str, decimal: DecimalSeparator) -> Result<Self> {
        let delimiter = sniff_delimiter(text);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .delimiter(delimiter)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        let mut records = reader.records();
        let header = match records.next() {
            Some(r) => r.map_err(|e| Error::Malformed(e.to_string()))?,
            None => return Err(Error::Malformed("empty input".into())),
        };
        if header.len() < 2 {
            return Err(Error::Malformed(
                "header needs an entity column and at least one variable".into(),
            ));
        }
        let variables: Vec<VariableSpec> = header
            .iter()
            .skip(1)
            .map(|id| VariableSpec::new(id, Direction::Stimulant))
            .collect();
        let width = header.len();

        let mut entities = Vec::new();
        let mut values = Vec::new();
        let mut seen = HashSet::new();
        for record in records {
            let record = record.map_err(|e| Error::Malformed(e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.iter().all(str::is_empty) {
                continue;
            }
            if record.len() != width {
                return Err(Error::RaggedRow {
                    line,
                    expected: width,
                    found: record.len(),
                });
            }
            let code = record[0].to_owned();
            if !seen.insert(code.clone()) {
                return Err(Error::DuplicateEntity(code));
            }
            for (cell, var) in record.iter().skip(1).zip(&variables) {
                values.push(parse_cell(cell, decimal).ok_or_else(|| Error::InvalidNumber {
                    line,
                    column: var.id.clone(),
                    cell: cell.to_owned(),
                })?);
            }
            entities.push(code);
        }
        IndicatorDataset::new(entities, variables, values)
    }

    /// Comma-separated dump with dot decimals and ":" for missing cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("entity");
        for v in &self.variables {
            out.push(',');
            out.push_str(&csv_field(&v.id));
        }
        out.push('\n');
        for (i, e) in self.entities.iter().enumerate() {
            out.push_str(&csv_field(e));
            for v in self.row(i) {
                out.push(',');
                match v {
                    Some(x) => write!(out, "{x}").unwrap(),
                    None => out.push_str(MISSING_MARKER),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    /// Restricts the dataset to `ids`, in that order.
    pub fn select_variables<S: AsRef<str>>(&self, ids: &[S]) -> Result<Self> {
        let idx = ids
            .iter()
            .map(|id| {
                let id = id.as_ref();
                self.variable_index(id)
                    .ok_or_else(|| Error::UnknownVariable(id.to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        let variables = idx.iter().map(|&j| self.variables[j].clone()).collect();
        let values = (0..self.n_entities())
            .flat_map(|i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.cell(i, j))
            .collect();
        IndicatorDataset::new(self.entities.clone(), variables, values)
    }

    pub fn apply_missing_policy(&self, policy: MissingPolicy) -> Result<CompleteDataset> {
        match policy {
            MissingPolicy::ListwiseDeletion => self.listwise(),
            MissingPolicy::MeanImputation => self.impute_means(),
        }
    }

    fn listwise(&self) -> Result<CompleteDataset> {
        let mut entities = Vec::new();
        let mut values = Vec::new();
        let mut removed = Vec::new();
        for (i, e) in self.entities.iter().enumerate() {
            let row = self.row(i);
            if row.iter().all(Option::is_some) {
                entities.push(e.clone());
                values.extend(row.iter().map(|v| v.unwrap()));
            } else {
                removed.push(e.clone());
            }
        }
        if entities.len() < 2 {
            return Err(Error::TooFew {
                what: "entities after listwise deletion",
                required: 2,
                found: entities.len(),
            });
        }
        Ok(CompleteDataset {
            entities,
            variables: self.variables.clone(),
            values,
            provenance: Provenance {
                policy: MissingPolicy::ListwiseDeletion,
                removed_entities: removed,
                imputed_cells: Vec::new(),
            },
        })
    }

    fn impute_means(&self) -> Result<CompleteDataset> {
        let m = self.n_variables();
        let mut means = Vec::with_capacity(m);
        for (j, var) in self.variables.iter().enumerate() {
            let present: Vec<f64> = (0..self.n_entities()).filter_map(|i| self.cell(i, j)).collect();
            if present.is_empty() {
                return Err(Error::EmptyColumn(var.id.clone()));
            }
            means.push(present.iter().sum::<f64>() / present.len() as f64);
        }
        let mut imputed = Vec::new();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                v.unwrap_or_else(|| {
                    let (i, j) = (k / m, k % m);
                    imputed.push(ImputedCell {
                        entity: self.entities[i].clone(),
                        variable: self.variables[j].id.clone(),
                        value: means[j],
                    });
                    means[j]
                })
            })
            .collect();
        Ok(CompleteDataset {
            entities: self.entities.clone(),
            variables: self.variables.clone(),
            values,
            provenance: Provenance {
                policy: MissingPolicy::MeanImputation,
                removed_entities: Vec::new(),
                imputed_cells: imputed,
            },
        })
    }
}

fn sniff_delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or("");
    if header.contains(';') && !header.contains(',') {
        b';'
    } else if header.contains('\t') && !header.contains(',') {
        b'\t'
    } else {
        b','
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', ';']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// `Some(None)` for a missing marker, `Some(Some(x))` for a number, `None` if
/// the cell is not parseable under `decimal`.
fn parse_cell(cell: &str, decimal: DecimalSeparator) -> Option<Option<f64>> {
    let cell = cell.trim();
    if cell.is_empty() || cell == MISSING_MARKER {
        return Some(None);
    }
    // Only plain decimal notation; rejects "inf", "NaN" and friends.
    if !cell
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '-' | '+' | 'e' | 'E'))
    {
        return None;
    }
    let normalized = match decimal {
        DecimalSeparator::Dot if cell.contains(',') => return None,
        DecimalSeparator::Dot => cell.to_owned(),
        DecimalSeparator::Comma if cell.contains('.') => return None,
        DecimalSeparator::Comma | DecimalSeparator::Auto => {
            if cell.contains(',') && cell.contains('.') {
                return None;
            }
            cell.replace(',', ".")
        }
    };
    normalized.parse::<f64>().ok().filter(|x| x.is_finite()).map(Some)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImputedCell {
    pub entity: String,
    pub variable: String,
    pub value: f64,
}

/// What a missing-data policy did to reach a complete matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub policy: MissingPolicy,
    pub removed_entities: Vec<String>,
    pub imputed_cells: Vec<ImputedCell>,
}

/// Gap-free matrix produced by [`IndicatorDataset::apply_missing_policy`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteDataset {
    entities: Vec<String>,
    variables: Vec<VariableSpec>,
    values: Vec<f64>,
    provenance: Provenance,
}

impl CompleteDataset {
    /// Builds a complete dataset directly, e.g. from in-memory data.
    pub fn new(entities: Vec<String>, variables: Vec<VariableSpec>, values: Vec<f64>) -> Result<Self> {
        check_shape(&entities, &variables, values.len())?;
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite value".into()));
        }
        Ok(CompleteDataset {
            entities,
            variables,
            values,
            provenance: Provenance {
                policy: MissingPolicy::ListwiseDeletion,
                removed_entities: Vec::new(),
                imputed_cells: Vec::new(),
            },
        })
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell(&self, entity: usize, variable: usize) -> f64 {
        self.values[entity * self.variables.len() + variable]
    }

    pub fn row(&self, entity: usize) -> &[f64] {
        let m = self.variables.len();
        &self.values[entity * m..(entity + 1) * m]
    }

    pub fn column(&self, variable: usize) -> Vec<f64> {
        (0..self.n_entities()).map(|i| self.cell(i, variable)).collect()
    }

    pub fn variable_index(&self, id: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.id == id)
    }

    /// Column by variable id.
    pub fn column_by_id(&self, id: &str) -> Result<Vec<f64>> {
        self.variable_index(id)
            .map(|j| self.column(j))
            .ok_or_else(|| Error::UnknownVariable(id.to_owned()))
    }
}
