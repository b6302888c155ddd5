//! Input datasets.
//!
//! `.json` files hold either a plain array of objects or
//! `{"objects": [...], "weights": [...]}`. Any other extension is read as
//! headerless CSV with one object per row: a number (optionally followed by
//! a weight) for `real` and `integer`, the coordinates for `euclidean`.
//! Rankings are arrays of `1..=m`; rotations are row-major arrays of nine
//! numbers.

use std::path::Path;

use gmedian_core::WeightedSet;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonDataset<T> {
    Plain(Vec<T>),
    Weighted {
        objects: Vec<T>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
    },
}

fn build<T>(path: &Path, objects: Vec<T>, weights: Option<Vec<f64>>) -> CliResult<WeightedSet<T>> {
    if objects.is_empty() {
        return Err(CliError::dataset(path, "dataset is empty"));
    }
    let weights = weights.unwrap_or_else(|| vec![1.0; objects.len()]);
    WeightedSet::new(objects, weights).map_err(|e| CliError::dataset(path, e.to_string()))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<WeightedSet<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let parsed: JsonDataset<T> =
        serde_json::from_str(&text).map_err(|e| CliError::dataset(path, e.to_string()))?;
    match parsed {
        JsonDataset::Plain(objects) => build(path, objects, None),
        JsonDataset::Weighted { objects, weights } => build(path, objects, weights),
    }
}

fn csv_rows(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::dataset(path, e.to_string()))?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::dataset(path, e.to_string()))?;
        let row = rec
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| CliError::dataset(path, format!("row {}: {c:?} is not a number", i + 1)))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Reals, one per row, with an optional weight column.
pub fn read_reals(path: &Path) -> CliResult<WeightedSet<f64>> {
    if is_json(path) {
        return read_json(path);
    }
    let rows = csv_rows(path)?;
    let width = rows.first().map_or(1, Vec::len);
    if !(1..=2).contains(&width) || rows.iter().any(|r| r.len() != width) {
        return Err(CliError::dataset(path, "expected one value (and optionally a weight) per row"));
    }
    let objects = rows.iter().map(|r| r[0]).collect();
    let weights = (width == 2).then(|| rows.iter().map(|r| r[1]).collect());
    build(path, objects, weights)
}

pub fn read_integers(path: &Path) -> CliResult<WeightedSet<i64>> {
    if is_json(path) {
        return read_json(path);
    }
    let reals = read_reals(path)?;
    let (values, weights) = reals.into_parts();
    let ints = values
        .iter()
        .map(|&v| {
            if v.fract() == 0.0 && v.abs() < 2f64.powi(53) {
                Ok(v as i64)
            } else {
                Err(CliError::dataset(path, format!("{v} is not an integer")))
            }
        })
        .collect::<CliResult<Vec<i64>>>()?;
    build(path, ints, Some(weights))
}

pub fn read_vectors(path: &Path) -> CliResult<WeightedSet<Vec<f64>>> {
    let set: WeightedSet<Vec<f64>> = if is_json(path) {
        read_json(path)?
    } else {
        build(path, csv_rows(path)?, None)?
    };
    let dim = set.objects()[0].len();
    if dim == 0 || set.objects().iter().any(|v| v.len() != dim) {
        return Err(CliError::dataset(path, "vectors must share a non-zero dimension"));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gmedian_core::spaces::Ranking;
    use std::io::Write;

    fn file(ext: &str, body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reals_from_csv_and_json() {
        let f = file(".csv", "1\n# note\n2.5\n-3\n");
        assert_eq!(read_reals(f.path()).unwrap().objects(), &[1.0, 2.5, -3.0]);
        let f = file(".csv", "1,2\n3,0.5\n");
        assert_eq!(read_reals(f.path()).unwrap().weights(), &[2.0, 0.5]);
        let f = file(".json", r#"{"objects": [1, 2], "weights": [1, 3]}"#);
        assert_eq!(read_reals(f.path()).unwrap().total_weight(), 4.0);
    }

    #[test]
    fn rankings_reject_non_permutations() {
        let f = file(".json", "[[1,2,3],[3,2,1]]");
        assert_eq!(read_json::<Ranking>(f.path()).unwrap().len(), 2);
        let f = file(".json", "[[1,2,2]]");
        assert!(matches!(read_json::<Ranking>(f.path()), Err(CliError::Dataset { .. })));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_reals(file(".csv", "1\nx\n").path()), Err(CliError::Dataset { .. })));
        assert!(matches!(read_reals(file(".csv", "").path()), Err(CliError::Dataset { .. })));
        assert!(read_integers(file(".csv", "1.5\n").path()).is_err());
        assert!(read_vectors(file(".csv", "1,2\n3\n").path()).is_err());
        assert!(matches!(read_reals(Path::new("/no/such.csv")), Err(CliError::Dataset { .. }) | Err(CliError::Io { .. })));
    }
}
