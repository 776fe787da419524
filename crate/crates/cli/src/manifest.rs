//! Run manifests and the envelope every artifact is wrapped in.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Everything a run depended on, echoed into each artifact it writes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.display().to_string());
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("manifest parameters serialize");
        self.parameters.insert(key.to_string(), v);
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    manifest: &'a RunManifest,
    report: &'a T,
}

#[derive(Serialize)]
struct Header<'a> {
    schema_version: u32,
    manifest: &'a RunManifest,
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    schema_version: u32,
    manifest: &'a RunManifest,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

/// A finished run: a JSON report and optional CSV plot data.
pub struct Artifacts {
    pub report: Value,
    pub csv: Option<CsvTable>,
}

pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// The manifest goes first as a single `#` comment line.
    fn render(&self, manifest: &RunManifest) -> Result<String, String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| e.to_string())?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| e.to_string())?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let head = serde_json::to_string(&Header {
            schema_version: SCHEMA_VERSION,
            manifest,
        })
        .map_err(|e| e.to_string())?;
        Ok(format!("# {head}\n{body}"))
    }
}

pub fn render_json<T: Serialize>(manifest: &RunManifest, report: &T) -> String {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        manifest,
        report,
    };
    serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
}

pub fn render_error(manifest: &RunManifest, kind: &str, message: String) -> String {
    let env = ErrorEnvelope {
        schema_version: SCHEMA_VERSION,
        manifest,
        error: ErrorBody { kind, message },
    };
    serde_json::to_string_pretty(&env).expect("errors serialize") + "\n"
}

/// Writes the artifacts to `out` (as `<subcommand>.json` and `.csv`) or, with
/// no directory, prints the JSON report to stdout.
pub fn emit(mut manifest: RunManifest, artifacts: Artifacts, out: Option<&Path>) -> Result<(), String> {
    let Some(dir) = out else {
        print!("{}", render_json(&manifest, &artifacts.report));
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let json_path: PathBuf = dir.join(format!("{}.json", manifest.subcommand));
    let csv_path: PathBuf = dir.join(format!("{}.csv", manifest.subcommand));
    manifest.outputs.push(json_path.display().to_string());
    if artifacts.csv.is_some() {
        manifest.outputs.push(csv_path.display().to_string());
    }
    if let Some(table) = &artifacts.csv {
        fs::write(&csv_path, table.render(&manifest)?).map_err(|e| format!("{}: {e}", csv_path.display()))?;
    }
    fs::write(&json_path, render_json(&manifest, &artifacts.report))
        .map_err(|e| format!("{}: {e}", json_path.display()))?;
    println!("{}", manifest.outputs.join("\n"));
    Ok(())
}
