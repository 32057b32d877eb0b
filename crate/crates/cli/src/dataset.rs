//! Training dataset CSV: UTF-8, comma-separated, `.` decimal point.
//!
//! Matrix datasets carry a `x_1,..,x_i,y_1,..,y_j` header; value datasets a
//! `y_1,..,y_j,I` header. Dimensions are inferred from the header and every
//! row is checked against it, with diagnostics naming the offending row.

use skilltask_core::production::{SkillVector, TaskVector};
use skilltask_core::trainer::{MatchingTrainingSet, ValueTrainingSet};

use crate::error::{CliError, CliResult};

fn split_fields(line: &str) -> Vec<&str> {
    line.trim_end_matches(['\r', '\n']).split(',').map(str::trim).collect()
}

/// Count a run of `prefix_1, prefix_2, ...` names starting at `from`.
fn count_numbered(fields: &[&str], from: usize, prefix: &str) -> usize {
    let mut n = 0;
    while let Some(name) = fields.get(from + n) {
        if **name == format!("{prefix}_{}", n + 1) {
            n += 1;
        } else {
            break;
        }
    }
    n
}

fn parse_row(fields: &[&str], row: usize, expected: usize) -> CliResult<Vec<f64>> {
    if fields.len() != expected {
        return Err(CliError::Validation(format!(
            "row {row}: has {} fields, expected {expected}",
            fields.len()
        )));
    }
    fields
        .iter()
        .enumerate()
        .map(|(col, f)| {
            f.parse::<f64>().map_err(|_| {
                CliError::Validation(format!("row {row}, column {}: `{f}` is not a number", col + 1))
            })
        })
        .collect()
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    // rows are numbered as in the file, header included
    text.lines().enumerate().skip(1).filter(|(_, l)| !l.trim().is_empty())
}

/// Parse a `x_1..x_i,y_1..y_j` dataset into a matching training set.
pub fn parse_matching_dataset(text: &str) -> CliResult<MatchingTrainingSet> {
    let header = text
        .lines()
        .next()
        .ok_or_else(|| CliError::Validation("dataset is empty".into()))?;
    let names = split_fields(header);
    let skills = count_numbered(&names, 0, "x");
    let tasks = count_numbered(&names, skills, "y");
    if skills == 0 || tasks == 0 || skills + tasks != names.len() {
        return Err(CliError::Validation(format!(
            "dataset header: expected `x_1..x_i,y_1..y_j`, got `{}`",
            header.trim_end()
        )));
    }

    let mut samples = Vec::new();
    for (idx, line) in data_lines(text) {
        let row = idx + 1;
        let fields = split_fields(line);
        let numbers = parse_row(&fields, row, skills + tasks)?;
        let x = SkillVector::from_labor(numbers[..skills].to_vec())
            .map_err(|e| CliError::Validation(format!("row {row}: {e}")))?;
        let y = TaskVector::new(numbers[skills..].to_vec())
            .map_err(|e| CliError::Validation(format!("row {row}: {e}")))?;
        samples.push((x, y));
    }
    MatchingTrainingSet::new(samples).map_err(|e| CliError::Validation(e.to_string()))
}

/// Parse a `y_1..y_j,I` dataset into a value training set.
pub fn parse_value_dataset(text: &str) -> CliResult<ValueTrainingSet> {
    let header = text
        .lines()
        .next()
        .ok_or_else(|| CliError::Validation("dataset is empty".into()))?;
    let names = split_fields(header);
    let tasks = count_numbered(&names, 0, "y");
    if tasks == 0 || tasks + 1 != names.len() || names[tasks] != "I" {
        return Err(CliError::Validation(format!(
            "dataset header: expected `y_1..y_j,I`, got `{}`",
            header.trim_end()
        )));
    }

    let mut samples = Vec::new();
    for (idx, line) in data_lines(text) {
        let row = idx + 1;
        let fields = split_fields(line);
        let numbers = parse_row(&fields, row, tasks + 1)?;
        let y = TaskVector::new(numbers[..tasks].to_vec())
            .map_err(|e| CliError::Validation(format!("row {row}: {e}")))?;
        samples.push((y, numbers[tasks]));
    }
    ValueTrainingSet::new(samples).map_err(|e| CliError::Validation(e.to_string()))
}
