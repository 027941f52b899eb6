//! Per-entity synthetic measure `w = Me · (1 − Sd)` over normalized rows,
//! four-level classification around the mean score, and ranking.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::normalize::NormalizedMatrix;

fn non_empty(z: &[f64], what: &'static str) -> Result<()> {
    if z.is_empty() {
        Err(Error::TooFew {
            what,
            required: 1,
            found: 0,
        })
    } else {
        Ok(())
    }
}

/// Median via order statistics; the middle one for odd lengths, the mean of
/// the two middle ones for even lengths.
pub fn row_median(z: &[f64]) -> Result<f64> {
    non_empty(z, "values for a median")?;
    let mut sorted = z.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    Ok(if m % 2 == 0 {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    } else {
        sorted[m / 2]
    })
}

/// Population standard deviation (divides by `m`).
pub fn row_std(z: &[f64]) -> Result<f64> {
    non_empty(z, "values for a standard deviation")?;
    Ok(population_variance(z).sqrt())
}

// Shifted by the first element so that a constant slice has an exact mean.
fn mean(z: &[f64]) -> f64 {
    let shift = z[0];
    shift + z.iter().map(|x| x - shift).sum::<f64>() / z.len() as f64
}

fn population_variance(z: &[f64]) -> f64 {
    let mu = mean(z);
    z.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / z.len() as f64
}

pub fn synthetic_measure(median: f64, std: f64) -> f64 {
    median * (1.0 - std)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticScore {
    pub entity: String,
    pub median: f64,
    pub std: f64,
    pub w: f64,
}

impl SyntheticScore {
    /// The measure is meant to stay strictly below one; a row of all ones
    /// reaches it exactly. The value is kept as computed and this flags it.
    pub fn reaches_unit_bound(&self) -> bool {
        self.w >= 1.0
    }
}

pub fn score_all(nm: &NormalizedMatrix) -> Vec<SyntheticScore> {
    nm.entities()
        .iter()
        .enumerate()
        .map(|(i, entity)| {
            let row = nm.row(i);
            // Rows are non-empty by NormalizedMatrix construction.
            let median = row_median(row).expect("non-empty row");
            let std = row_std(row).expect("non-empty row");
            SyntheticScore {
                entity: entity.clone(),
                median,
                std,
                w: synthetic_measure(median, std),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Group {
    I,
    II,
    III,
    IV,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::I, Group::II, Group::III, Group::IV];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::I => "I",
            Group::II => "II",
            Group::III => "III",
            Group::IV => "IV",
        }
    }

    pub fn meaning(self) -> &'static str {
        match self {
            Group::I => "high",
            Group::II => "medium-high",
            Group::III => "medium-low",
            Group::IV => "low",
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Divisor used for the spread of scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StdConvention {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n − 1`.
    Sample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupClassification {
    pub mean_w: f64,
    pub std_w: f64,
    pub convention: StdConvention,
    /// In score order.
    pub assignments: Vec<(String, Group)>,
}

impl GroupClassification {
    /// Group for a score value under this classification's thresholds.
    ///
    /// `w = w̄` goes to II and `w = w̄ − S` to III; only IV uses a strict bound
    /// on its upper side.
    pub fn group_for(&self, w: f64) -> Group {
        assign(w, self.mean_w, self.std_w)
    }

    pub fn group_of(&self, entity: &str) -> Option<Group> {
        self.assignments
            .iter()
            .find(|(e, _)| e == entity)
            .map(|&(_, g)| g)
    }

    pub fn members(&self, group: Group) -> Vec<&str> {
        self.assignments
            .iter()
            .filter(|(_, g)| *g == group)
            .map(|(e, _)| e.as_str())
            .collect()
    }

    pub fn sizes(&self) -> [usize; 4] {
        let mut sizes = [0; 4];
        for (_, g) in &self.assignments {
            sizes[*g as usize] += 1;
        }
        sizes
    }
}

fn assign(w: f64, mean: f64, std: f64) -> Group {
    if w >= mean + std {
        Group::I
    } else if w >= mean {
        Group::II
    } else if w >= mean - std {
        Group::III
    } else {
        Group::IV
    }
}

pub fn classify(scores: &[SyntheticScore]) -> Result<GroupClassification> {
    classify_with(scores, StdConvention::Population)
}

pub fn classify_with(scores: &[SyntheticScore], convention: StdConvention) -> Result<GroupClassification> {
    if scores.len() < 2 {
        return Err(Error::TooFew {
            what: "scores to classify",
            required: 2,
            found: scores.len(),
        });
    }
    let ws: Vec<f64> = scores.iter().map(|s| s.w).collect();
    let n = ws.len() as f64;
    let var = population_variance(&ws)
        * match convention {
            StdConvention::Population => 1.0,
            StdConvention::Sample => n / (n - 1.0),
        };
    let (mean_w, std_w) = (mean(&ws), var.sqrt());
    let assignments = scores
        .iter()
        .map(|s| (s.entity.clone(), assign(s.w, mean_w, std_w)))
        .collect();
    Ok(GroupClassification {
        mean_w,
        std_w,
        convention,
        assignments,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntity {
    pub rank: usize,
    pub entity: String,
    pub w: f64,
}

/// Descending by `w` with competition ranking (1, 2, 2, 4); tied entities are
/// listed alphabetically.
pub fn rank(scores: &[SyntheticScore]) -> Vec<RankedEntity> {
    let mut order: Vec<&SyntheticScore> = scores.iter().collect();
    order.sort_by(|a, b| match b.w.total_cmp(&a.w) {
        Ordering::Equal => a.entity.cmp(&b.entity),
        other => other,
    });
    let mut out: Vec<RankedEntity> = Vec::with_capacity(order.len());
    for (pos, s) in order.into_iter().enumerate() {
        let rank = match out.last() {
            Some(prev) if prev.w == s.w => prev.rank,
            _ => pos + 1,
        };
        out.push(RankedEntity {
            rank,
            entity: s.entity.clone(),
            w: s.w,
        });
    }
    out
}
