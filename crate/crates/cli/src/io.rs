use std::fs;
use std::io::Write;
use std::path::Path;

use crate::failure::Failure;

/// Numeric columns of a comma-separated file; a first row that does not parse is a header.
pub fn read_columns(path: &Path, expected: usize) -> Result<Vec<Vec<f64>>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut columns = vec![Vec::new(); expected];
    let mut seen_data = false;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Option<Vec<f64>> = record.iter().take(expected).map(|f| f.parse::<f64>().ok()).collect();
        match parsed {
            Some(values) if values.len() == expected && values.iter().all(|v| v.is_finite()) => {
                for (c, v) in columns.iter_mut().zip(values) {
                    c.push(v);
                }
                seen_data = true;
            }
            None if !seen_data && line == 0 => continue,
            Some(values) if values.len() < expected => {
                return Err(Failure::input(format!(
                    "{}: line {} has {} column(s), {expected} required",
                    path.display(),
                    line + 1,
                    values.len()
                )))
            }
            _ => {
                return Err(Failure::input(format!(
                    "{}: line {} is not numeric",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    if !seen_data {
        return Err(Failure::input(format!("{}: no numeric rows", path.display())));
    }
    Ok(columns)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.flush().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

/// To the file when given, otherwise to standard output.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
