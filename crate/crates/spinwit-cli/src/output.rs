use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::Failure;

/// Rendered command output and whether the command's checks passed.
pub struct Outcome {
    pub body: String,
    pub ok: bool,
}

impl Outcome {
    pub fn json<T: Serialize + ?Sized>(value: &T, ok: bool) -> Result<Self, Failure> {
        let mut body = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
        body.push('\n');
        Ok(Outcome { body, ok })
    }

    pub fn rows<T: Serialize>(rows: &[T], format: Format) -> Result<Self, Failure> {
        match format {
            Format::Json => Outcome::json(rows, true),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(r).map_err(|e| Failure::Internal(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
                let body = String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))?;
                Ok(Outcome { body, ok: true })
            }
        }
    }
}

/// Writes to `path` through a temporary sibling so readers never see a partial file.
pub fn emit(body: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
        Some(p) => {
            let mut tmp = p.as_os_str().to_owned();
            tmp.push(".partial");
            fs::write(&tmp, body)?;
            fs::rename(&tmp, p)
        }
    }
}
