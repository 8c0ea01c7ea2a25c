//! Tabular results and their CSV/JSON emission.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use qgt_core::tensors::QgtResult;

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    UInt(u64),
    Text(String),
    Flag(bool),
}

impl Cell {
    /// Reals use 17 significant digits, enough to round-trip any double.
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::UInt(u) => u.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::UInt(u) => json!(u),
            Cell::Text(s) => json!(s),
            Cell::Flag(b) => json!(b),
        }
    }
}

/// Rows under a fixed header, plus extra JSON-only fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, header: Map<String, Value>) -> String {
        let mut obj = header;
        obj.insert("columns".into(), json!(self.columns));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(m)
            })
            .collect();
        obj.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.extra {
            obj.insert(k.clone(), v.clone());
        }
        let mut text =
            serde_json::to_string_pretty(&Value::Object(obj)).expect("json values are finite");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format, header: Map<String, Value>) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(header),
        }
    }
}

/// Column names of a tensor row for `k` parameters: `R1..Rk`, then
/// `reQ_ij` (i ≤ j), `imQ_ij` (i < j), `gFR_ij` (i ≤ j), `gFS_ij` (i ≤ j)
/// and `omega_ij` (i < j), indices starting at 1.
pub fn qgt_columns(k: usize) -> Vec<String> {
    let upper: Vec<(usize, usize)> = (1..=k).flat_map(|i| (i..=k).map(move |j| (i, j))).collect();
    let strict: Vec<(usize, usize)> = upper.iter().copied().filter(|(i, j)| i < j).collect();
    let mut cols: Vec<String> = (1..=k).map(|i| format!("R{i}")).collect();
    let named = |prefix: &str, idx: &[(usize, usize)]| -> Vec<String> {
        idx.iter()
            .map(|(i, j)| format!("{prefix}_{i}{j}"))
            .collect()
    };
    cols.extend(named("reQ", &upper));
    cols.extend(named("imQ", &strict));
    cols.extend(named("gFR", &upper));
    cols.extend(named("gFS", &upper));
    cols.extend(named("omega", &strict));
    cols
}

pub fn qgt_row(r: &[f64], q: &QgtResult) -> Vec<Cell> {
    let k = r.len();
    let upper: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let strict: Vec<(usize, usize)> = upper.iter().copied().filter(|(i, j)| i < j).collect();
    let mut row: Vec<Cell> = r.iter().map(|&x| Cell::Real(x)).collect();
    row.extend(upper.iter().map(|&(i, j)| Cell::Real(q.q[(i, j)].re)));
    row.extend(strict.iter().map(|&(i, j)| Cell::Real(q.q[(i, j)].im)));
    row.extend(upper.iter().map(|&(i, j)| Cell::Real(q.g_fr[(i, j)])));
    row.extend(upper.iter().map(|&(i, j)| Cell::Real(q.g_fs[(i, j)])));
    row.extend(strict.iter().map(|&(i, j)| Cell::Real(q.omega[(i, j)])));
    row
}

/// Full tensor blocks for JSON output.
pub fn qgt_blocks(q: &QgtResult) -> Map<String, Value> {
    let k = q.n_params();
    let real = |f: &dyn Fn(usize, usize) -> f64| -> Value {
        json!((0..k)
            .map(|i| (0..k).map(|j| f(i, j)).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    };
    let mut m = Map::new();
    m.insert(
        "q".into(),
        json!({
            "re": real(&|i, j| q.q[(i, j)].re),
            "im": real(&|i, j| q.q[(i, j)].im),
        }),
    );
    m.insert("g_fr".into(), real(&|i, j| q.g_fr[(i, j)]));
    m.insert("g_fs".into(), real(&|i, j| q.g_fs[(i, j)]));
    m.insert("omega".into(), real(&|i, j| q.omega[(i, j)]));
    m
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
