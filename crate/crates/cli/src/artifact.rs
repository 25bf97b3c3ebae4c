//! Output files. A CSV artifact is
//!
//! ```text
//! # config: {...}
//! # warning: ...            (zero or more)
//! header
//! rows
//! # sha256: <hex of every preceding byte>
//! ```
//!
//! and a JSON artifact is `{"config": ..., "result": ..., "sha256": ...}`
//! with the hash taken over the compact serialisation of
//! `{"config": ..., "result": ...}`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Rows of a CSV artifact, collected in order.
pub struct CsvArtifact {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    warnings: Vec<String>,
}

impl CsvArtifact {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn warn(&mut self, msg: String) {
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, config: &RunConfig) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        writeln!(out, "# config: {}", serde_json::to_string(config)?)?;
        for w in &self.warnings {
            writeln!(out, "# warning: {w}")?;
        }
        {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            writer.write_record(&self.header)?;
            for row in &self.rows {
                writer.write_record(row)?;
            }
            writer.flush()?;
        }
        let hash = sha256_hex(&out);
        writeln!(out, "# sha256: {hash}")?;
        Ok(out)
    }
}

pub fn render_json<T: Serialize>(config: &RunConfig, result: &T) -> Result<Vec<u8>, CliError> {
    let body = json!({ "config": config, "result": result });
    let hash = sha256_hex(serde_json::to_string(&body)?.as_bytes());
    let mut full = body;
    full["sha256"] = Value::String(hash);
    let mut out = serde_json::to_vec_pretty(&full)?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Checks the trailing hash of a CSV artifact.
pub fn verify_csv(bytes: &[u8]) -> bool {
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => return false,
    };
    let body_end = match text.trim_end_matches('\n').rfind('\n') {
        Some(i) => i + 1,
        None => return false,
    };
    let (body, trailer) = text.split_at(body_end);
    trailer.trim_end() == format!("# sha256: {}", sha256_hex(body.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CommonArgs, Format, ModeArg};

    fn config() -> RunConfig {
        let args = CommonArgs {
            d: Some(3),
            norm: Some(2),
            norm_seq: None,
            p: vec![],
            mode: ModeArg::Orbit,
            out: None,
            seed: 1,
            caps: 8,
            budget: None,
            format: None,
            input: None,
        };
        RunConfig::from_args("enumerate", &args, Format::Csv).unwrap()
    }

    #[test]
    fn csv_layout_and_hash() {
        let mut a = CsvArtifact::new(vec!["a".into(), "b".into()]);
        a.push(vec!["1".into(), "x,y".into()]);
        let bytes = a.render(&config()).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# config: {"));
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1,\"x,y\"");
        assert!(lines[3].starts_with("# sha256: "));
        assert!(verify_csv(&bytes));
        let mut tampered = bytes.clone();
        tampered[lines[0].len() + 1] = b'c';
        assert!(!verify_csv(&tampered));
    }

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn json_embeds_config_and_hash() {
        let bytes = render_json(&config(), &vec![1, 2]).unwrap();
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["config"]["command"], "enumerate");
        assert_eq!(v["result"], json!([1, 2]));
        let body = json!({ "config": v["config"], "result": v["result"] });
        assert_eq!(
            v["sha256"],
            sha256_hex(serde_json::to_string(&body).unwrap().as_bytes())
        );
    }
}
