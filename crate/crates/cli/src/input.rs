//! Reading back CSV artifacts of `enumerate`, `shapes` and `grids`.

use std::collections::HashMap;
use std::path::Path;

use spheregrid::PrimitiveVector;

use crate::CliError;

pub struct InputRow {
    pub d: usize,
    pub norm: u64,
    pub vector: PrimitiveVector,
    /// Every column of the row by name.
    pub fields: HashMap<String, String>,
}

/// Rows of a CSV artifact, with the dimension implied by its `x*` columns.
pub fn read_rows(path: &Path) -> Result<(usize, Vec<InputRow>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    for required in ["d", "D", "x1"] {
        if !header.iter().any(|h| h == required) {
            return Err(CliError::config(format!(
                "{}: missing column {required}",
                path.display()
            )));
        }
    }
    let dim = (1..)
        .take_while(|i| header.iter().any(|h| *h == format!("x{i}")))
        .count();
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let fields: HashMap<String, String> = header
            .iter()
            .cloned()
            .zip(record.iter().map(str::to_string))
            .collect();
        let bad = |what: &str| {
            CliError::config(format!("{}: row {}: bad {what}", path.display(), line + 1))
        };
        let d: usize = fields["d"].parse().map_err(|_| bad("d"))?;
        let norm: u64 = fields["D"].parse().map_err(|_| bad("D"))?;
        let coords: Vec<i64> = (1..=d)
            .map(|i| {
                fields
                    .get(&format!("x{i}"))
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| bad(&format!("x{i}")))
            })
            .collect::<Result<_, _>>()?;
        let vector = PrimitiveVector::new(&coords).map_err(|e| CliError::config(e.to_string()))?;
        if vector.norm() != norm {
            return Err(bad("D (does not match the coordinates)"));
        }
        rows.push(InputRow {
            d,
            norm,
            vector,
            fields,
        });
    }
    Ok((dim, rows))
}

/// Groups rows by `(d, D)` in order of first appearance.
pub fn group(rows: Vec<InputRow>) -> Vec<((usize, u64), Vec<InputRow>)> {
    let mut out: Vec<((usize, u64), Vec<InputRow>)> = Vec::new();
    for row in rows {
        let key = (row.d, row.norm);
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(row),
            None => out.push((key, vec![row])),
        }
    }
    out
}
