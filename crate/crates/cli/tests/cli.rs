//! End-to-end tests of the `synthrank` binary and the documents behind it.

mod common;

use common::{numbers, scratch_file, stdout, synthrank, validate, SCHEMA};
use serde_json::Value;
use synthrank_cli::{report, Format, RunConfig};
use synthrank_core::{load_fixture, DecimalSeparator, Direction, IndicatorDataset, MissingPolicy};
use synthrank_oracle::exact_ols;

fn exit_code(args: &[&str]) -> i32 {
    synthrank(args).status.code().expect("exit code")
}

#[test]
fn fixture_dump_has_header_and_28_rows() {
    let text = stdout(&["fixture"]);
    assert_eq!(text.lines().count(), 29);
    let ro = text.lines().find(|l| l.starts_with("RO,")).expect("RO row");
    assert!(ro.contains("247"), "{ro}");
    assert!(text.contains(",:"), "missing cells are written as ':'");
}

#[test]
fn fixture_dump_reparses_to_the_fixture() {
    let text = stdout(&["fixture"]);
    let mut parsed = IndicatorDataset::parse_csv(&text, DecimalSeparator::Dot).unwrap();
    for id in ["x1", "x2", "x3"] {
        parsed = parsed.with_direction(id, Direction::DeStimulant).unwrap();
    }
    let fixture = load_fixture();
    assert_eq!(parsed.entities(), fixture.entities());
    assert_eq!(parsed.values(), fixture.values());
    let spec = |d: &IndicatorDataset| -> Vec<(String, Direction)> {
        d.variables().iter().map(|v| (v.id.clone(), v.direction)).collect()
    };
    assert_eq!(spec(&parsed), spec(&fixture));
}

#[test]
fn unknown_direction_variable_is_a_usage_error() {
    let path = scratch_file("unknown_direction.csv", "id,direction\nx99,stimulant\n");
    let out = synthrank(&["rank", "--directions", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x99"));
}

#[test]
fn dependent_among_predictors_is_a_usage_error() {
    let out = synthrank(&["regress", "--dependent", "x12", "--predictors", "x1,x12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x12"));
}

#[test]
fn other_usage_errors_exit_with_2() {
    assert_eq!(exit_code(&["regress", "--alpha", "1.5"]), 2);
    assert_eq!(exit_code(&["regress", "--alpha", "0"]), 2);
    assert_eq!(exit_code(&["regress", "--predictors", "x1,x1"]), 2);
    assert_eq!(exit_code(&["regress", "--dependent", "nope"]), 2);
    assert_eq!(exit_code(&["rank", "--input", "/definitely/not/here.csv"]), 2);
    assert_eq!(exit_code(&["rank", "--format", "xml"]), 2);
    assert_eq!(exit_code(&["rank", "--input", "a.csv", "--fixture"]), 2);
}

#[test]
fn rank_deficient_design_is_a_computation_error() {
    let path = scratch_file(
        "collinear.csv",
        "entity,a,b,y\nA,1,2,3\nB,2,4,1\nC,3,6,4\nD,4,8,1\nE,5,10,5\nF,6,12,9\n",
    );
    let out = synthrank(&["regress", "--input", path.to_str().unwrap(), "--dependent", "y"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn comma_decimal_input_is_read() {
    let path = scratch_file(
        "comma.csv",
        "entity;a;b;y\nA;1,5;2;3\nB;2;4,25;1\nC;3;1;4\nD;4,5;8;1\nE;5;10;5,5\nF;6;2;9\n",
    );
    let text = stdout(&["rank", "--input", path.to_str().unwrap(), "--format", "csv"]);
    assert!(text.contains("# ranking"), "{text}");
    assert!(text.lines().any(|l| l.ends_with(",I")), "{text}");
}

#[test]
fn identical_invocations_give_identical_bytes() {
    for cmd in ["fixture", "rank", "regress", "report"] {
        for format in ["table", "csv", "json"] {
            let args: Vec<&str> = if cmd == "fixture" {
                vec![cmd]
            } else {
                vec![cmd, "--format", format]
            };
            let a = synthrank(&args);
            let b = synthrank(&args);
            assert!(a.status.success());
            assert_eq!(a.stdout, b.stdout, "{args:?}");
        }
    }
}

#[test]
fn json_documents_validate_against_the_schema() {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let runs: &[&[&str]] = &[
        &["rank"],
        &["rank", "--missing", "listwise", "--std", "sample"],
        &["regress"],
        &["regress", "--missing", "listwise"],
        &["regress", "--no-intercept", "--predictors", "x4,x10"],
        &["report"],
        &["report", "--missing", "listwise", "--equation-predictor", "x4"],
    ];
    for args in runs {
        let mut args = args.to_vec();
        args.extend(["--format", "json"]);
        let doc: Value = serde_json::from_str(&stdout(&args)).unwrap();
        let errors = validate(&schema, &doc);
        assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    }
}

#[test]
fn schema_rejects_malformed_documents() {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let good: Value = serde_json::from_str(&stdout(&["report", "--format", "json"])).unwrap();
    assert!(validate(&schema, &good).is_empty());

    let mut bad = good.clone();
    bad["schema_version"] = 2.into();
    assert!(!validate(&schema, &bad).is_empty());

    let mut bad = good.clone();
    bad["rank"]["rows"][0]["group"] = "V".into();
    assert!(!validate(&schema, &bad).is_empty());

    let mut bad = good.clone();
    bad["regression"]["fit"].as_object_mut().unwrap().remove("f");
    assert!(!validate(&schema, &bad).is_empty());

    let mut bad = good;
    bad["extra"] = true.into();
    assert!(!validate(&schema, &bad).is_empty());
}

#[test]
fn json_numbers_round_trip_exactly() {
    let cfg = RunConfig {
        format: Format::Json,
        ..RunConfig::default()
    };
    let text = synthrank_cli::cmd_report(&cfg, Default::default()).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();

    // Every number is finite and survives a format/parse cycle.
    for (path, n) in numbers(&doc) {
        let x = n.as_f64().unwrap();
        assert!(x.is_finite(), "{path}");
        assert_eq!(x.to_string().parse::<f64>().unwrap().to_bits(), x.to_bits(), "{path}");
    }

    // Parsing the text recovers exactly the in-memory document.
    let mem = report::report_document(&cfg).unwrap();
    assert_eq!(doc, serde_json::to_value(&mem).unwrap());
    let fit = &doc["regression"]["fit"];
    for (key, v) in [
        ("r2", mem.regression.fit.r2),
        ("adjusted_r2", mem.regression.fit.adjusted_r2),
        ("f", mem.regression.fit.f),
        ("p_f", mem.regression.fit.p_f),
        ("std_error_estimate", mem.regression.fit.std_error_estimate),
    ] {
        assert_eq!(fit[key].as_f64().unwrap().to_bits(), v.to_bits(), "{key}");
    }
    for (row, c) in doc["regression"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .zip(&mem.regression.coefficients)
    {
        for (key, v) in [("b", c.b), ("se_b", c.se_b), ("t", c.t), ("p", c.p)] {
            assert_eq!(row[key].as_f64().unwrap().to_bits(), v.to_bits(), "{} {key}", c.term);
        }
    }
    for (row, r) in doc["rank"]["rows"].as_array().unwrap().iter().zip(&mem.rank.rows) {
        assert_eq!(row["w"].as_f64().unwrap().to_bits(), r.w.to_bits(), "{}", r.entity);
    }
}

#[test]
fn report_contains_both_sections_and_the_ledger() {
    let doc: Value = serde_json::from_str(&stdout(&["report", "--format", "json"])).unwrap();
    assert_eq!(doc["rank"]["rows"].as_array().unwrap().len(), 28);
    let sizes = &doc["rank"]["classification"]["group_sizes"];
    let total: u64 = ["I", "II", "III", "IV"].iter().map(|g| sizes[g].as_u64().unwrap()).sum();
    assert_eq!(total, 28);
    assert_eq!(doc["regression"]["coefficients"].as_array().unwrap().len(), 12);

    let rows = doc["ledger"]["rows"].as_array().unwrap();
    let row = |item: &str| {
        rows.iter()
            .find(|r| r["item"] == item)
            .unwrap_or_else(|| panic!("ledger row {item}"))
    };
    assert_eq!(row("Durbin-Watson")["published"], "1.642365");
    assert!(row("Durbin-Watson")["computed"].as_str().unwrap().starts_with("1.77"));
    assert_eq!(row("group IV members")["published"], "{BG, HR, RO}");

    let table = stdout(&["report"]);
    assert!(table.contains("1.642365"));
    assert!(table.contains("{BG, HR, RO}"));
}

#[test]
fn user_input_gets_no_ledger() {
    let text = stdout(&["fixture"]);
    let path = scratch_file("fixture_copy.csv", &text);
    let doc: Value =
        serde_json::from_str(&stdout(&["report", "--input", path.to_str().unwrap(), "--format", "json"])).unwrap();
    assert!(doc["ledger"].is_null());
    assert_eq!(doc["input"]["source"], "file");
}

fn assert_close(what: &str, computed: f64, reference: f64) {
    let rel = if computed == reference {
        0.0
    } else {
        (computed - reference).abs() / reference.abs()
    };
    assert!(rel <= 1e-8, "{what}: {computed:e} vs {reference:e} ({rel:e})");
}

#[test]
fn regression_output_matches_the_exact_oracle() {
    for (flag, policy) in [("mean", MissingPolicy::MeanImputation), ("listwise", MissingPolicy::ListwiseDeletion)] {
        let doc: Value =
            serde_json::from_str(&stdout(&["regress", "--missing", flag, "--format", "json"])).unwrap();
        let data = load_fixture().apply_missing_policy(policy).unwrap();
        let preds: Vec<String> = (1..=11).map(|j| format!("x{j}")).collect();
        let rows: Vec<Vec<f64>> = (0..data.n_entities())
            .map(|i| preds.iter().map(|p| data.cell(i, data.variable_index(p).unwrap())).collect())
            .collect();
        let exact = exact_ols(&rows, &data.column_by_id("x12").unwrap(), true).unwrap();

        let reg = &doc["regression"];
        assert_eq!(reg["n_used"].as_u64().unwrap() as usize, rows.len());
        for (j, c) in reg["coefficients"].as_array().unwrap().iter().enumerate() {
            let f = |k: &str| c[k].as_f64().unwrap();
            assert_close("b", f("b"), exact.coefficients[j]);
            assert_close("se(b)", f("se_b"), exact.std_errors[j]);
            assert_close("t", f("t"), exact.t_stats[j]);
            assert_close("p", f("p"), exact.p_values[j]);
            if j > 0 {
                assert_close("b*", f("b_star"), exact.standardized[j - 1]);
            }
        }
        let fit = &reg["fit"];
        let f = |k: &str| fit[k].as_f64().unwrap();
        assert_close("R2", f("r2"), exact.r2);
        assert_close("adjusted R2", f("adjusted_r2"), exact.adjusted_r2);
        assert_close("F", f("f"), exact.f);
        assert_close("p(F)", f("p_f"), exact.p_f);
        assert_close("residual std error", f("std_error_estimate"), exact.std_error_estimate);
        assert_eq!(fit["df2"].as_u64().unwrap() as usize, exact.df_resid);
        let d = &reg["diagnostics"];
        assert_close("DW", d["durbin_watson"].as_f64().unwrap(), exact.durbin_watson);
        assert_close("rho", d["serial_correlation"].as_f64().unwrap(), exact.serial_correlation);
    }
}

#[test]
fn csv_output_has_named_blocks() {
    let text = stdout(&["report", "--format", "csv"]);
    for block in ["# ranking", "# coefficients", "# fit", "# normality_plot", "# ledger"] {
        assert!(text.lines().any(|l| l == block), "missing {block}");
    }
}

#[test]
fn table_output_flags_significant_predictors() {
    let text = stdout(&["regress", "--predictors", "x4,x5,x10", "--alpha", "0.99"]);
    assert!(text.contains("significant predictors: x4"), "{text}");
}
