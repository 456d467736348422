//! Dataset ingestion and dataset-oblivious one-hot encoding.
//!
//! Raw CSV or LIBSVM files become Boolean datasets through an
//! `EncodingSchema` that is specified without reading the private data
//! values: fixed category lists for categorical columns and fixed interval
//! bins for numeric ones. Encoding therefore carries no privacy cost.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use dpboost_core::{BooleanDataset, RngStream};
use serde::{Deserialize, Serialize};

use crate::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Categorical,
    Numeric,
    Boolean,
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

/// Parsed but unencoded tabular data. Cells hold trimmed tokens; `None`
/// marks an explicit missing value ("" or "?").
#[derive(Debug, Clone)]
pub struct RawDataset {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Option<String>>>,
    /// Default label column (the last CSV column, or the LIBSVM target);
    /// a schema's label block overrides it.
    pub label_column: String,
}

impl RawDataset {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Libsvm,
}

fn missing_marker(token: &str) -> bool {
    token.is_empty() || token == "?"
}

/// Load a dataset, inferring column kinds. CSV files are RFC-4180-style
/// with a header row; LIBSVM lines are `<label> <idx>:<val> ...` with
/// 1-based indices and absent entries meaning 0.
pub fn load_dataset(path: &Path, format: DataFormat) -> Result<RawDataset, DataError> {
    match format {
        DataFormat::Csv => load_csv(path),
        DataFormat::Libsvm => load_libsvm(path),
    }
}

fn infer_kind<'a>(values: impl Iterator<Item = &'a str>) -> ColumnKind {
    let mut any = false;
    let mut all_numeric = true;
    let mut all_binary = true;
    for v in values {
        any = true;
        match v.parse::<f64>() {
            Ok(x) => {
                if x != 0.0 && x != 1.0 {
                    all_binary = false;
                }
            }
            Err(_) => {
                all_numeric = false;
                break;
            }
        }
    }
    if !any || !all_numeric {
        ColumnKind::Categorical
    } else if all_binary {
        ColumnKind::Boolean
    } else {
        ColumnKind::Numeric
    }
}

fn load_csv(path: &Path) -> Result<RawDataset, DataError> {
    let file = File::open(path).map_err(|e| DataError::Io(path.display().to_string(), e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| DataError::Parse(path.display().to_string(), e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() {
        return Err(DataError::Empty(path.display().to_string()));
    }
    let mut rows: Vec<Vec<Option<String>>> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line().to_string())
                .unwrap_or_else(|| (idx + 2).to_string());
            DataError::Parse(path.display().to_string(), format!("line {line}: {e}"))
        })?;
        if record.len() != headers.len() {
            return Err(DataError::Parse(
                path.display().to_string(),
                format!(
                    "line {}: expected {} fields, found {}",
                    record
                        .position()
                        .map(|p| p.line())
                        .unwrap_or(idx as u64 + 2),
                    headers.len(),
                    record.len()
                ),
            ));
        }
        rows.push(
            record
                .iter()
                .map(|cell| {
                    let token = cell.trim();
                    if missing_marker(token) {
                        None
                    } else {
                        Some(token.to_string())
                    }
                })
                .collect(),
        );
    }
    if rows.is_empty() {
        return Err(DataError::Empty(path.display().to_string()));
    }
    let columns = headers
        .iter()
        .enumerate()
        .map(|(j, name)| Column {
            name: name.clone(),
            kind: infer_kind(rows.iter().filter_map(|r| r[j].as_deref())),
        })
        .collect::<Vec<_>>();
    let label_column = headers.last().expect("nonempty header").clone();
    Ok(RawDataset {
        columns,
        rows,
        label_column,
    })
}

fn load_libsvm(path: &Path) -> Result<RawDataset, DataError> {
    let file = File::open(path).map_err(|e| DataError::Io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut parsed: Vec<(String, Vec<(usize, String)>)> = Vec::new();
    let mut max_index = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| DataError::Io(path.display().to_string(), e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label = parts
            .next()
            .ok_or_else(|| {
                DataError::Parse(
                    path.display().to_string(),
                    format!("line {}: missing label", lineno + 1),
                )
            })?
            .to_string();
        let mut entries = Vec::new();
        for part in parts {
            let (idx, val) = part.split_once(':').ok_or_else(|| {
                DataError::Parse(
                    path.display().to_string(),
                    format!("line {}: expected idx:value, found `{part}`", lineno + 1),
                )
            })?;
            let idx: usize = idx.parse().map_err(|_| {
                DataError::Parse(
                    path.display().to_string(),
                    format!("line {}: bad feature index `{idx}`", lineno + 1),
                )
            })?;
            if idx == 0 {
                return Err(DataError::Parse(
                    path.display().to_string(),
                    format!("line {}: LIBSVM indices are 1-based", lineno + 1),
                ));
            }
            val.parse::<f64>().map_err(|_| {
                DataError::Parse(
                    path.display().to_string(),
                    format!("line {}: bad feature value `{val}`", lineno + 1),
                )
            })?;
            max_index = max_index.max(idx);
            entries.push((idx - 1, val.to_string()));
        }
        parsed.push((label, entries));
    }
    if parsed.is_empty() {
        return Err(DataError::Empty(path.display().to_string()));
    }
    let mut rows = Vec::with_capacity(parsed.len());
    for (label, entries) in parsed {
        let mut row: Vec<Option<String>> = vec![Some("0".to_string()); max_index];
        for (idx, val) in entries {
            row[idx] = Some(val);
        }
        row.push(Some(label));
        rows.push(row);
    }
    let mut columns: Vec<Column> = (0..max_index)
        .map(|j| Column {
            name: format!("f{}", j + 1),
            kind: infer_kind(rows.iter().filter_map(|r| r[j].as_deref())),
        })
        .collect();
    columns.push(Column {
        name: "label".to_string(),
        kind: ColumnKind::Categorical,
    });
    Ok(RawDataset {
        columns,
        rows,
        label_column: "label".to_string(),
    })
}

/// One half-open or closed interval over a numeric column. Absent bounds
/// are unbounded; bounds are closed unless the matching `*_open` flag is
/// set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub min_open: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub max_open: bool,
}

impl Bin {
    pub fn contains(&self, v: f64) -> bool {
        let lower = match self.min {
            Some(m) if self.min_open => v > m,
            Some(m) => v >= m,
            None => true,
        };
        let upper = match self.max {
            Some(m) if self.max_open => v < m,
            Some(m) => v <= m,
            None => true,
        };
        lower && upper
    }

    fn lower_key(&self) -> (f64, bool) {
        (self.min.unwrap_or(f64::NEG_INFINITY), self.min_open)
    }

    fn upper_key(&self) -> (f64, bool) {
        (self.max.unwrap_or(f64::INFINITY), self.max_open)
    }

    fn overlaps(&self, other: &Bin) -> bool {
        let (lo, lo_open) = if self.lower_key().0 >= other.lower_key().0 {
            self.lower_key()
        } else {
            other.lower_key()
        };
        let (hi, hi_open) = if self.upper_key().0 <= other.upper_key().0 {
            self.upper_key()
        } else {
            other.upper_key()
        };
        if lo < hi {
            return true;
        }
        if lo > hi {
            return false;
        }
        // Single shared point: an overlap only if both sides include it.
        let included_lower = !lo_open && (self.contains(lo) && other.contains(lo));
        included_lower && !hi_open
    }

    fn describe(&self, column: &str) -> String {
        let fmt = |v: f64| {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                format!("{}", v as i64)
            } else {
                format!("{v}")
            }
        };
        match (self.min, self.max) {
            (Some(a), Some(b)) if a == b => format!("{column} = {}", fmt(a)),
            (Some(a), Some(b)) => format!(
                "{} {} {column} {} {}",
                fmt(a),
                if self.min_open { "<" } else { "<=" },
                if self.max_open { "<" } else { "<=" },
                fmt(b)
            ),
            (Some(a), None) => {
                format!(
                    "{column} {} {}",
                    if self.min_open { ">" } else { ">=" },
                    fmt(a)
                )
            }
            (None, Some(b)) => {
                format!(
                    "{column} {} {}",
                    if self.max_open { "<" } else { "<=" },
                    fmt(b)
                )
            }
            (None, None) => format!("{column} = any"),
        }
    }
}

/// k equal-width bins over a publicly known range [lo, hi]: the first bin
/// is closed, later bins open at their lower edge.
pub fn equal_width_bins(lo: f64, hi: f64, k: usize) -> Vec<Bin> {
    assert!(
        k >= 1 && hi > lo,
        "need at least one bin over a positive range"
    );
    let width = (hi - lo) / k as f64;
    (0..k)
        .map(|i| Bin {
            min: Some(lo + i as f64 * width),
            max: Some(if i + 1 == k {
                hi
            } else {
                lo + (i + 1) as f64 * width
            }),
            min_open: i > 0,
            max_open: false,
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemaColumn {
    pub name: String,
    pub kind: ColumnKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
    /// Route out-of-schema categories to a dedicated `<other>` bucket
    /// instead of failing.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub other: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bins: Vec<Bin>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelSpec {
    pub column: String,
    /// Raw value mapped to +1; everything else maps to -1. When absent the
    /// two observed classes are ordered (numerically when possible,
    /// lexicographically otherwise) and the first maps to -1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<String>,
}

/// Dataset-oblivious encoding specification: fixed per-column category
/// lists and interval bins, fixed label mapping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EncodingSchema {
    pub columns: Vec<SchemaColumn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<LabelSpec>,
}

impl EncodingSchema {
    pub fn from_path(path: &Path) -> Result<Self, DataError> {
        let file = File::open(path).map_err(|e| DataError::Io(path.display().to_string(), e))?;
        let schema: EncodingSchema = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| DataError::Parse(path.display().to_string(), e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        for col in &self.columns {
            match col.kind {
                ColumnKind::Categorical => {
                    if col.categories.is_empty() {
                        return Err(DataError::Schema(format!(
                            "categorical column `{}` has no categories",
                            col.name
                        )));
                    }
                    let mut seen = BTreeSet::new();
                    for c in &col.categories {
                        if !seen.insert(c) {
                            return Err(DataError::Schema(format!(
                                "duplicate category `{c}` in column `{}`",
                                col.name
                            )));
                        }
                    }
                }
                ColumnKind::Numeric => {
                    if col.bins.is_empty() {
                        return Err(DataError::Schema(format!(
                            "numeric column `{}` has no bins",
                            col.name
                        )));
                    }
                    for bin in &col.bins {
                        if let (Some(a), Some(b)) = (bin.min, bin.max) {
                            if a > b || (a == b && (bin.min_open || bin.max_open)) {
                                return Err(DataError::Schema(format!(
                                    "empty bin in column `{}`",
                                    col.name
                                )));
                            }
                        }
                    }
                    for (i, a) in col.bins.iter().enumerate() {
                        for b in col.bins.iter().skip(i + 1) {
                            if a.overlaps(b) {
                                return Err(DataError::Schema(format!(
                                    "overlapping bins in column `{}`: {} / {}",
                                    col.name,
                                    a.describe(&col.name),
                                    b.describe(&col.name)
                                )));
                            }
                        }
                    }
                }
                ColumnKind::Boolean => {}
            }
        }
        Ok(())
    }

    /// Total encoded feature count: categories (+ other bucket) + the
    /// always-present missing indicator per categorical column, one
    /// indicator per bin, one per boolean column.
    pub fn feature_count(&self) -> usize {
        self.columns
            .iter()
            .map(|c| match c.kind {
                ColumnKind::Categorical => c.categories.len() + 1 + if c.other { 1 } else { 0 },
                ColumnKind::Numeric => c.bins.len(),
                ColumnKind::Boolean => 1,
            })
            .sum()
    }

    pub fn feature_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.feature_count());
        for col in &self.columns {
            match col.kind {
                ColumnKind::Categorical => {
                    for cat in &col.categories {
                        names.push(format!("{}={cat}", col.name));
                    }
                    if col.other {
                        names.push(format!("{}=<other>", col.name));
                    }
                    names.push(format!("{}=<missing>", col.name));
                }
                ColumnKind::Numeric => {
                    for bin in &col.bins {
                        names.push(bin.describe(&col.name));
                    }
                }
                ColumnKind::Boolean => names.push(col.name.clone()),
            }
        }
        names
    }

    /// A schema accepting every column of `raw` as-is; requires all
    /// feature columns to be boolean already.
    pub fn infer_boolean(raw: &RawDataset) -> Result<Self, DataError> {
        let mut columns = Vec::new();
        for col in &raw.columns {
            if col.name == raw.label_column {
                continue;
            }
            if col.kind != ColumnKind::Boolean {
                return Err(DataError::Schema(format!(
                    "column `{}` is {:?}; a schema file is required for non-boolean data",
                    col.name, col.kind
                )));
            }
            columns.push(SchemaColumn {
                name: col.name.clone(),
                kind: ColumnKind::Boolean,
                categories: Vec::new(),
                other: false,
                bins: Vec::new(),
            });
        }
        Ok(EncodingSchema {
            columns,
            label: Some(LabelSpec {
                column: raw.label_column.clone(),
                positive: None,
            }),
        })
    }

    pub fn label_column<'a>(&'a self, raw: &'a RawDataset) -> &'a str {
        self.label
            .as_ref()
            .map(|l| l.column.as_str())
            .unwrap_or(&raw.label_column)
    }
}

fn default_label_order(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal),
        _ => a.cmp(b),
    }
}

fn map_labels(values: &[Option<String>], spec: Option<&LabelSpec>) -> Result<Vec<i8>, DataError> {
    for (i, v) in values.iter().enumerate() {
        if v.is_none() {
            return Err(DataError::Encode(format!("row {}: missing label", i + 1)));
        }
    }
    if let Some(LabelSpec {
        positive: Some(pos),
        ..
    }) = spec
    {
        return Ok(values
            .iter()
            .map(|v| {
                if v.as_deref() == Some(pos.as_str()) {
                    1
                } else {
                    -1
                }
            })
            .collect());
    }
    let mut classes: Vec<&str> = values.iter().filter_map(|v| v.as_deref()).collect();
    classes.sort_by(|a, b| default_label_order(a, b));
    classes.dedup();
    if classes.len() != 2 {
        return Err(DataError::Encode(format!(
            "label has {} distinct classes; declare `positive` in the schema or provide \
             exactly two",
            classes.len()
        )));
    }
    let positive = classes[1];
    Ok(values
        .iter()
        .map(|v| {
            if v.as_deref() == Some(positive) {
                1
            } else {
                -1
            }
        })
        .collect())
}

/// Apply a dataset-oblivious encoding: one indicator per category (plus
/// the missing bucket), interval indicators per numeric bin, and a single
/// indicator per boolean column. Exactly one indicator fires per
/// categorical column and row.
pub fn one_hot_encode(
    raw: &RawDataset,
    schema: &EncodingSchema,
) -> Result<BooleanDataset, DataError> {
    let label_col = schema.label_column(raw);
    let label_idx = raw.column_index(label_col).ok_or_else(|| {
        DataError::Encode(format!(
            "label column `{label_col}` not present in the data"
        ))
    })?;
    let labels = map_labels(
        &raw.rows
            .iter()
            .map(|r| r[label_idx].clone())
            .collect::<Vec<_>>(),
        schema.label.as_ref(),
    )?;
    encode_features(raw, schema, labels)
}

/// Encoding for unlabeled prediction inputs: features only, placeholder
/// +1 labels.
pub fn one_hot_encode_unlabeled(
    raw: &RawDataset,
    schema: &EncodingSchema,
) -> Result<BooleanDataset, DataError> {
    encode_features(raw, schema, vec![1; raw.n_rows()])
}

fn encode_features(
    raw: &RawDataset,
    schema: &EncodingSchema,
    labels: Vec<i8>,
) -> Result<BooleanDataset, DataError> {
    schema.validate()?;
    let mut col_indices = Vec::with_capacity(schema.columns.len());
    for col in &schema.columns {
        let idx = raw.column_index(&col.name).ok_or_else(|| {
            DataError::Encode(format!(
                "schema column `{}` not present in the data",
                col.name
            ))
        })?;
        col_indices.push(idx);
    }
    let names = schema.feature_names();
    let r = names.len();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(raw.n_rows());
    for (row_idx, row) in raw.rows.iter().enumerate() {
        let mut set = Vec::new();
        let mut offset = 0usize;
        for (col, &raw_idx) in schema.columns.iter().zip(&col_indices) {
            let cell = row[raw_idx].as_deref();
            match col.kind {
                ColumnKind::Categorical => {
                    let missing_slot =
                        offset + col.categories.len() + if col.other { 1 } else { 0 };
                    match cell {
                        None => set.push(missing_slot),
                        Some(v) => {
                            if let Some(k) = col.categories.iter().position(|c| c == v) {
                                set.push(offset + k);
                            } else if col.other {
                                set.push(offset + col.categories.len());
                            } else {
                                return Err(DataError::Encode(format!(
                                    "row {}: value `{v}` not in schema for column `{}` \
                                     (no other bucket)",
                                    row_idx + 1,
                                    col.name
                                )));
                            }
                        }
                    }
                    offset = missing_slot + 1;
                }
                ColumnKind::Numeric => {
                    if let Some(v) = cell {
                        let value: f64 = v.parse().map_err(|_| {
                            DataError::Encode(format!(
                                "row {}: non-numeric value `{v}` in column `{}`",
                                row_idx + 1,
                                col.name
                            ))
                        })?;
                        for (k, bin) in col.bins.iter().enumerate() {
                            if bin.contains(value) {
                                set.push(offset + k);
                            }
                        }
                    }
                    // Missing numeric: all interval indicators stay 0.
                    offset += col.bins.len();
                }
                ColumnKind::Boolean => {
                    if let Some(v) = cell {
                        let truthy = match v.parse::<f64>() {
                            Ok(x) => x != 0.0,
                            Err(_) => match v {
                                "true" | "t" | "yes" => true,
                                "false" | "f" | "no" => false,
                                _ => {
                                    return Err(DataError::Encode(format!(
                                        "row {}: `{v}` is not boolean in column `{}`",
                                        row_idx + 1,
                                        col.name
                                    )))
                                }
                            },
                        };
                        if truthy {
                            set.push(offset);
                        }
                    }
                    offset += 1;
                }
            }
        }
        rows.push(set);
    }
    BooleanDataset::from_sparse_rows(r, &rows, labels, names)
        .map_err(|e| DataError::Encode(e.to_string()))
}

/// One cross-validation split: (train indices, validation indices).
pub type FoldSplit = (Vec<usize>, Vec<usize>);

/// k-fold split: disjoint validation sets covering all rows, deterministic
/// in the seed.
pub fn make_folds(n: usize, k: usize, seed: u64) -> Result<Vec<FoldSplit>, DataError> {
    if k < 2 {
        return Err(DataError::Schema(
            "cross-validation needs k >= 2".to_string(),
        ));
    }
    if k > n {
        return Err(DataError::Schema(format!("k = {k} folds exceed {n} rows")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = RngStream::new(seed, 0xF01D);
    for i in (1..n).rev() {
        order.swap(i, rng.index(i + 1));
    }
    let mut validate: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (pos, &row) in order.iter().enumerate() {
        validate[pos % k].push(row);
    }
    Ok(validate
        .into_iter()
        .map(|mut val| {
            val.sort_unstable();
            let in_val: BTreeSet<usize> = val.iter().copied().collect();
            let train: Vec<usize> = (0..n).filter(|i| !in_val.contains(i)).collect();
            (train, val)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn csv_loads_with_inferred_kinds() {
        let f = write_temp("age,job,label\n39,clerk,no\n50,crafts,yes\n23,clerk,no\n");
        let raw = load_dataset(f.path(), DataFormat::Csv).unwrap();
        assert_eq!(raw.columns.len(), 3);
        assert_eq!(raw.n_rows(), 3);
        assert_eq!(raw.label_column, "label");
        assert_eq!(raw.columns[0].kind, ColumnKind::Numeric);
        assert_eq!(raw.columns[1].kind, ColumnKind::Categorical);
    }

    #[test]
    fn csv_with_short_row_errors_with_line() {
        let f = write_temp("a,b,label\n1,2,x\n1,y\n");
        let err = load_dataset(f.path(), DataFormat::Csv).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn empty_csv_is_rejected() {
        let f = write_temp("a,b,label\n");
        assert!(matches!(
            load_dataset(f.path(), DataFormat::Csv).unwrap_err(),
            DataError::Empty(_)
        ));
    }

    #[test]
    fn libsvm_sets_indexed_features() {
        let f = write_temp("+1 3:1 7:1\n-1 1:1\n");
        let raw = load_dataset(f.path(), DataFormat::Libsvm).unwrap();
        assert_eq!(raw.columns.len(), 8); // 7 features + label
        assert_eq!(raw.rows[0][2].as_deref(), Some("1"));
        assert_eq!(raw.rows[0][6].as_deref(), Some("1"));
        assert_eq!(raw.rows[0][0].as_deref(), Some("0"));
        assert_eq!(raw.rows[1][0].as_deref(), Some("1"));
        let schema = EncodingSchema::infer_boolean(&raw).unwrap();
        let ds = one_hot_encode(&raw, &schema).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.r(), 7);
        assert_eq!(ds.label(0), 1);
        assert_eq!(ds.label(1), -1);
        assert!(ds.get(0, 2) && ds.get(0, 6) && !ds.get(0, 0));
    }

    #[test]
    fn libsvm_rejects_zero_index() {
        let f = write_temp("+1 0:1\n");
        assert!(load_dataset(f.path(), DataFormat::Libsvm).is_err());
    }

    #[test]
    fn one_hot_sets_exactly_one_indicator_per_categorical() {
        let f = write_temp("job,label\na,no\nb,yes\n?,no\nc,no\n");
        let raw = load_dataset(f.path(), DataFormat::Csv).unwrap();
        let schema = EncodingSchema {
            columns: vec![SchemaColumn {
                name: "job".into(),
                kind: ColumnKind::Categorical,
                categories: vec!["a".into(), "b".into()],
                other: true,
                bins: vec![],
            }],
            label: Some(LabelSpec {
                column: "label".into(),
                positive: Some("yes".into()),
            }),
        };
        let ds = one_hot_encode(&raw, &schema).unwrap();
        // a, b, <other>, <missing>
        assert_eq!(ds.r(), 4);
        let expect = [0usize, 1, 3, 2];
        for (i, &slot) in expect.iter().enumerate() {
            let ones: Vec<usize> = ds.row_ones(i).collect();
            assert_eq!(ones, vec![slot], "row {i}");
        }
        assert_eq!(ds.labels(), &[-1, 1, -1, -1]);
    }

    #[test]
    fn out_of_schema_category_without_other_fails() {
        let f = write_temp("job,label\nz,no\nb,yes\n");
        let raw = load_dataset(f.path(), DataFormat::Csv).unwrap();
        let schema = EncodingSchema {
            columns: vec![SchemaColumn {
                name: "job".into(),
                kind: ColumnKind::Categorical,
                categories: vec!["a".into(), "b".into()],
                other: false,
                bins: vec![],
            }],
            label: Some(LabelSpec {
                column: "label".into(),
                positive: Some("yes".into()),
            }),
        };
        let err = one_hot_encode(&raw, &schema).unwrap_err();
        assert!(err.to_string().contains("`z`"), "{err}");
    }

    #[test]
    fn numeric_bins_produce_interval_indicators() {
        let f = write_temp("age,label\n17,no\n30,yes\n14,no\n99,yes\n,no\n");
        let raw = load_dataset(f.path(), DataFormat::Csv).unwrap();
        let schema = EncodingSchema {
            columns: vec![SchemaColumn {
                name: "age".into(),
                kind: ColumnKind::Numeric,
                categories: vec![],
                other: false,
                bins: vec![
                    Bin {
                        min: None,
                        max: Some(17.0),
                        min_open: false,
                        max_open: false,
                    },
                    Bin {
                        min: Some(17.0),
                        max: Some(45.0),
                        min_open: true,
                        max_open: false,
                    },
                ],
            }],
            label: Some(LabelSpec {
                column: "label".into(),
                positive: Some("yes".into()),
            }),
        };
        let ds = one_hot_encode(&raw, &schema).unwrap();
        assert_eq!(ds.feature_names()[0], "age <= 17");
        assert_eq!(ds.feature_names()[1], "17 < age <= 45");
        assert!(ds.get(0, 0) && !ds.get(0, 1)); // 17 in the closed bin
        assert!(!ds.get(1, 0) && ds.get(1, 1)); // 30
        assert!(ds.get(2, 0)); // 14
        assert!(!ds.get(3, 0) && !ds.get(3, 1)); // 99 uncovered
        assert_eq!(ds.row_ones(4).count(), 0); // missing numeric: all zero
    }

    #[test]
    fn overlapping_bins_fail_validation() {
        let schema = EncodingSchema {
            columns: vec![SchemaColumn {
                name: "x".into(),
                kind: ColumnKind::Numeric,
                categories: vec![],
                other: false,
                bins: vec![
                    Bin {
                        min: Some(0.0),
                        max: Some(10.0),
                        min_open: false,
                        max_open: false,
                    },
                    Bin {
                        min: Some(10.0),
                        max: Some(20.0),
                        min_open: false,
                        max_open: false,
                    },
                ],
            }],
            label: None,
        };
        assert!(matches!(
            schema.validate().unwrap_err(),
            DataError::Schema(_)
        ));
        // Open/closed adjacency is fine.
        let ok = EncodingSchema {
            columns: vec![SchemaColumn {
                name: "x".into(),
                kind: ColumnKind::Numeric,
                categories: vec![],
                other: false,
                bins: vec![
                    Bin {
                        min: Some(0.0),
                        max: Some(10.0),
                        min_open: false,
                        max_open: false,
                    },
                    Bin {
                        min: Some(10.0),
                        max: Some(20.0),
                        min_open: true,
                        max_open: false,
                    },
                ],
            }],
            label: None,
        };
        ok.validate().unwrap();
    }

    #[test]
    fn encoding_is_deterministic() {
        let f = write_temp("age,job,label\n30,a,no\n40,b,yes\n");
        let raw = load_dataset(f.path(), DataFormat::Csv).unwrap();
        let schema = EncodingSchema {
            columns: vec![
                SchemaColumn {
                    name: "age".into(),
                    kind: ColumnKind::Numeric,
                    categories: vec![],
                    other: false,
                    bins: equal_width_bins(0.0, 100.0, 4),
                },
                SchemaColumn {
                    name: "job".into(),
                    kind: ColumnKind::Categorical,
                    categories: vec!["a".into(), "b".into()],
                    other: false,
                    bins: vec![],
                },
            ],
            label: None,
        };
        let a = one_hot_encode(&raw, &schema).unwrap();
        let b = one_hot_encode(&raw, &schema).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn default_label_mapping_is_ordered() {
        // Numeric classes order numerically: -1 -> -1, +1 -> +1.
        let f = write_temp("f1,label\n1,+1\n0,-1\n");
        let raw = load_dataset(f.path(), DataFormat::Csv).unwrap();
        let schema = EncodingSchema::infer_boolean(&raw).unwrap();
        let ds = one_hot_encode(&raw, &schema).unwrap();
        assert_eq!(ds.labels(), &[1, -1]);
        // Text classes order lexicographically: first -> -1.
        let g = write_temp("f1,label\n1,no\n0,yes\n");
        let raw2 = load_dataset(g.path(), DataFormat::Csv).unwrap();
        let schema2 = EncodingSchema::infer_boolean(&raw2).unwrap();
        let ds2 = one_hot_encode(&raw2, &schema2).unwrap();
        assert_eq!(ds2.labels(), &[-1, 1]);
    }

    #[test]
    fn folds_partition_the_rows() {
        let folds = make_folds(10, 5, 42).unwrap();
        assert_eq!(folds.len(), 5);
        let mut seen = Vec::new();
        for (train, val) in &folds {
            assert_eq!(val.len(), 2);
            assert_eq!(train.len(), 8);
            for v in val {
                assert!(!train.contains(v));
                seen.push(*v);
            }
        }
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
        assert_eq!(make_folds(10, 5, 42).unwrap(), folds);
        assert!(make_folds(4, 5, 0).is_err());
        assert!(make_folds(10, 1, 0).is_err());
    }
}
