//! Zero unitarization: column-wise min–max rescaling onto `[0, 1]`, flipped
//! for de-stimulants so that 1 is always the best observed value.

use serde::Serialize;

use crate::dataset::{CompleteDataset, Direction, VariableSpec};
use crate::error::{Error, Result};

/// Value assigned to every cell of a constant column.
pub const DEGENERATE_FILL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedColumn {
    pub values: Vec<f64>,
    /// The raw column was constant; every value is [`DEGENERATE_FILL`].
    pub degenerate: bool,
}

pub fn normalize_column(values: &[f64], direction: Direction) -> Result<NormalizedColumn> {
    if values.is_empty() {
        return Err(Error::TooFew {
            what: "values to normalize",
            required: 1,
            found: 0,
        });
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("normalize_column", "non-finite value"));
    }
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if min == max {
        return Ok(NormalizedColumn {
            values: vec![DEGENERATE_FILL; values.len()],
            degenerate: true,
        });
    }

    // Halve everything if the range itself overflows.
    let scale = if (max - min).is_finite() { 1.0 } else { 0.5 };
    let (lo, hi) = (min * scale, max * scale);
    let range = hi - lo;
    let values = values
        .iter()
        .map(|&x| {
            let x = x * scale;
            match direction {
                Direction::Stimulant => (x - lo) / range,
                Direction::DeStimulant => (hi - x) / range,
            }
        })
        .collect();
    Ok(NormalizedColumn {
        values,
        degenerate: false,
    })
}

/// Unit-interval matrix, row-major, aligned with the source dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedMatrix {
    entities: Vec<String>,
    variables: Vec<VariableSpec>,
    values: Vec<f64>,
    degenerate_columns: Vec<String>,
}

impl NormalizedMatrix {
    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn row(&self, entity: usize) -> &[f64] {
        let m = self.variables.len();
        &self.values[entity * m..(entity + 1) * m]
    }

    pub fn cell(&self, entity: usize, variable: usize) -> f64 {
        self.values[entity * self.variables.len() + variable]
    }

    pub fn degenerate_columns(&self) -> &[String] {
        &self.degenerate_columns
    }
}

/// Normalizes every column of `data` according to its variable's direction.
///
/// Extremes are taken over the entities present in `data`, so the outcome
/// depends on which rows the missing-data policy kept.
pub fn normalize_matrix(data: &CompleteDataset) -> Result<NormalizedMatrix> {
    let (n, m) = (data.n_entities(), data.n_variables());
    let mut values = vec![0.0; n * m];
    let mut degenerate_columns = Vec::new();
    for (j, var) in data.variables().iter().enumerate() {
        let col = normalize_column(&data.column(j), var.direction)?;
        if col.degenerate {
            degenerate_columns.push(var.id.clone());
        }
        for (i, z) in col.values.into_iter().enumerate() {
            values[i * m + j] = z;
        }
    }
    Ok(NormalizedMatrix {
        entities: data.entities().to_vec(),
        variables: data.variables().to_vec(),
        values,
        degenerate_columns,
    })
}
