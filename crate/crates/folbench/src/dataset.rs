//! JSONL datasets and result files.
//!
//! Every record carries a `schema_version`; records without one are read as
//! the current version.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use folbench_core::perturb::{PerturbedSample, Sample, Variant};
use folbench_core::pipeline::SampleResult;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::SCHEMA_VERSION;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Schema { path: String, line: usize, message: String },
}

impl DataError {
    pub(crate) fn io(path: &Path, source: io::Error) -> DataError {
        DataError::Io { path: path.display().to_string(), source }
    }

    fn schema(path: &Path, line: usize, message: impl Into<String>) -> DataError {
        DataError::Schema { path: path.display().to_string(), line, message: message.into() }
    }
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    record: &'a T,
}

/// One JSONL line (without the newline) with the schema version first.
pub fn to_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(&Versioned { schema_version: SCHEMA_VERSION, record }).expect("records serialize")
}

pub fn write_jsonl<T: Serialize>(mut w: impl Write, records: &[T]) -> io::Result<()> {
    for r in records {
        writeln!(w, "{}", to_line(r))?;
    }
    w.flush()
}

pub fn write_jsonl_file<T: Serialize>(path: &Path, records: &[T]) -> Result<(), DataError> {
    let f = File::create(path).map_err(|e| DataError::io(path, e))?;
    write_jsonl(io::BufWriter::new(f), records).map_err(|e| DataError::io(path, e))
}

/// Non-blank lines as JSON values with their 1-based line numbers.
fn read_values(path: &Path) -> Result<Vec<(usize, Value)>, DataError> {
    let f = File::open(path).map_err(|e| DataError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| DataError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut v: Value = serde_json::from_str(&line).map_err(|e| DataError::schema(path, i + 1, e.to_string()))?;
        if let Some(obj) = v.as_object_mut() {
            match obj.remove("schema_version") {
                None => {}
                Some(Value::Number(n)) if n.as_u64() == Some(u64::from(SCHEMA_VERSION)) => {}
                Some(other) => {
                    return Err(DataError::schema(path, i + 1, format!("unsupported schema_version {other}")));
                }
            }
        }
        out.push((i + 1, v));
    }
    Ok(out)
}

fn decode<T: DeserializeOwned>(path: &Path, line: usize, v: Value) -> Result<T, DataError> {
    serde_json::from_value(v).map_err(|e| DataError::schema(path, line, e.to_string()))
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, DataError> {
    read_values(path)?.into_iter().map(|(line, v)| decode(path, line, v)).collect()
}

/// Loads and validates a dataset of [`Sample`]s. Ids must be unique.
pub fn load_dataset(path: &Path) -> Result<Vec<Sample>, DataError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, v) in read_values(path)? {
        let s: Sample = decode(path, line, v)?;
        s.validate().map_err(|e| DataError::schema(path, line, e.to_string()))?;
        if !seen.insert(s.id.clone()) {
            return Err(DataError::schema(path, line, format!("duplicate id '{}'", s.id)));
        }
        out.push(s);
    }
    Ok(out)
}

/// Loads perturbed samples. Plain [`Sample`] lines are read as variant `O`,
/// so a raw dataset can be run directly.
pub fn load_samples(path: &Path) -> Result<Vec<PerturbedSample>, DataError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, v) in read_values(path)? {
        let s = if v.get("base_id").is_some() {
            decode::<PerturbedSample>(path, line, v)?
        } else {
            let s: Sample = decode(path, line, v)?;
            s.validate().map_err(|e| DataError::schema(path, line, e.to_string()))?;
            PerturbedSample::original(&s)
        };
        if !seen.insert((s.base_id.clone(), s.variant)) {
            return Err(DataError::schema(path, line, format!("duplicate sample '{}' ({})", s.base_id, s.variant)));
        }
        out.push(s);
    }
    Ok(out)
}

pub fn load_results(path: &Path) -> Result<Vec<SampleResult>, DataError> {
    read_jsonl(path)
}

/// Keys of the results already in `path`; empty if the file does not exist.
pub fn completed_keys(path: &Path) -> Result<BTreeSet<(String, Variant)>, DataError> {
    if !path.exists() {
        return Ok(BTreeSet::new());
    }
    Ok(load_results(path)?.into_iter().map(|r| (r.id, r.variant)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    const LINE: &str = r#"{"id":"a","context":["P."],"question":"Q?","label":"yes","rule":"modus_ponens"}"#;

    #[test]
    fn empty_file_is_an_empty_dataset() {
        assert!(load_dataset(file("").path()).unwrap().is_empty());
    }

    #[test]
    fn missing_label_reports_the_line() {
        let text = format!("{LINE}\n\n{}\n", r#"{"id":"b","context":["P."],"question":"Q?","rule":"modus_ponens"}"#);
        let err = load_dataset(file(&text).path()).unwrap_err();
        let DataError::Schema { line, message, .. } = err else { panic!() };
        assert_eq!(line, 3);
        assert!(message.contains("label"), "{message}");
    }

    #[test]
    fn duplicates_and_versions_are_checked() {
        let dup = format!("{LINE}\n{LINE}\n");
        assert!(matches!(load_dataset(file(&dup).path()), Err(DataError::Schema { line: 2, .. })));
        let future = LINE.replacen('{', r#"{"schema_version":9,"#, 1);
        assert!(matches!(load_dataset(file(&future).path()), Err(DataError::Schema { line: 1, .. })));
        let empty_ctx = LINE.replace(r#"["P."]"#, "[]");
        assert!(load_dataset(file(&empty_ctx).path()).is_err());
    }

    #[test]
    fn samples_round_trip_with_version() {
        let data = load_dataset(file(LINE).path()).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &data).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(r#"{"schema_version":1,"id":"a""#));
        assert_eq!(load_dataset(file(&text).path()).unwrap(), data);
        let perturbed = load_samples(file(&text).path()).unwrap();
        assert_eq!(perturbed[0].variant, Variant::O);
    }
}
