//! Embedded EU-28 circular-economy indicator snapshot for 2019.
//!
//! Country codes follow ISO 3166-1 alpha-2 except `GR` (Greece) and `UK`
//! (United Kingdom), which keep their common statistical-office spellings.
//! Twelve cells are missing in the source table.

use crate::dataset::{DecimalSeparator, Direction, IndicatorDataset, VariableSpec};

const TABLE_CSV: &str = include_str!("../data/table_a.csv");

/// `(id, label, unit, default direction)` for the twelve indicators.
pub const VARIABLES: [(&str, &str, &str, Direction); 12] = [
    ("x1", "Generation of municipal waste per capita", "kg/person", Direction::DeStimulant),
    (
        "x2",
        "Generation of waste excluding major mineral wastes per GDP unit",
        "kg/thousand euro",
        Direction::DeStimulant,
    ),
    (
        "x3",
        "Generation of waste excluding major mineral wastes per domestic material consumption",
        "%",
        Direction::DeStimulant,
    ),
    ("x4", "Recycling rate of municipal waste", "%", Direction::Stimulant),
    ("x5", "Recycling rate of all waste excluding major mineral waste", "%", Direction::Stimulant),
    ("x6", "Recycling rate of e-waste", "%", Direction::Stimulant),
    ("x7", "Recycling of biowaste", "kg/person", Direction::Stimulant),
    ("x8", "Recovery rate of construction and demolition waste", "%", Direction::Stimulant),
    ("x9", "Circular material use rate", "%", Direction::Stimulant),
    ("x10", "Trade in recyclable raw materials", "tonnes x 1e-3", Direction::Stimulant),
    (
        "x11",
        "Private investments, jobs and gross value added related to circular economy sectors",
        "bn euro x 1e-3",
        Direction::Stimulant,
    ),
    ("x12", "Patents related to recycling and secondary raw materials", "number", Direction::Stimulant),
];

/// The 28 × 12 fixture with default directions (x1–x3 de-stimulants).
pub fn load_fixture() -> IndicatorDataset {
    let parsed = IndicatorDataset::parse_csv(TABLE_CSV, DecimalSeparator::Dot)
        .expect("embedded fixture is well-formed");
    let variables = VARIABLES
        .iter()
        .map(|&(id, label, unit, direction)| VariableSpec {
            id: id.to_owned(),
            label: label.to_owned(),
            unit: unit.to_owned(),
            direction,
        })
        .collect();
    IndicatorDataset::new(parsed.entities().to_vec(), variables, parsed.values().to_vec())
        .expect("fixture metadata matches its columns")
}

/// Country name for a fixture code, used in human-readable reports.
pub fn country_name(code: &str) -> Option<&'static str> {
    Some(match code {
        "BE" => "Belgium",
        "BG" => "Bulgaria",
        "CZ" => "Czechia",
        "DK" => "Denmark",
        "DE" => "Germany",
        "EE" => "Estonia",
        "IE" => "Ireland",
        "GR" => "Greece",
        "ES" => "Spain",
        "FR" => "France",
        "HR" => "Croatia",
        "IT" => "Italy",
        "CY" => "Cyprus",
        "LV" => "Latvia",
        "LT" => "Lithuania",
        "LU" => "Luxembourg",
        "HU" => "Hungary",
        "MT" => "Malta",
        "NL" => "Netherlands",
        "AT" => "Austria",
        "PL" => "Poland",
        "PT" => "Portugal",
        "RO" => "Romania",
        "SI" => "Slovenia",
        "SK" => "Slovakia",
        "FI" => "Finland",
        "SE" => "Sweden",
        "UK" => "United Kingdom",
        _ => return None,
    })
}
