//! CSV tables and their JSON sidecars.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use super::CliError;

/// Seventeen significant digits, enough for a lossless round trip.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header plus rows of already formatted cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// Path of the sidecar belonging to `out`: the full file name plus `.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct Sidecar<'a, C: Serialize> {
    command: &'a str,
    version: &'a str,
    config: &'a C,
    rows: usize,
    diagnostics: &'a Value,
}

/// Writes the table to `out` (stdout when `None`); a file also gets a sidecar
/// with the resolved configuration and diagnostics.
pub fn emit<C: Serialize>(
    table: &Table,
    out: Option<&Path>,
    command: &str,
    config: &C,
    diagnostics: &Value,
) -> Result<(), CliError> {
    match out {
        None => table.write(std::io::stdout().lock()),
        Some(path) => {
            table.write(std::fs::File::create(path)?)?;
            let sidecar = Sidecar {
                command,
                version: env!("CARGO_PKG_VERSION"),
                config,
                rows: table.rows.len(),
                diagnostics,
            };
            let text = serde_json::to_string_pretty(&sidecar).map_err(|e| CliError::Io(e.into()))?;
            std::fs::write(sidecar_path(path), text + "\n")?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 0.964_024_123_456_789] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn header_always_written() {
        let mut buf = Vec::new();
        Table::new(&["alpha", "fidelity"]).write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "alpha,fidelity\n");
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/f.csv")), PathBuf::from("out/f.csv.json"));
    }
}
