use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::args::Format;

/// Rows for CSV output.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command produced: a JSON value, a table, and warnings for stderr.
#[derive(Debug)]
pub struct Output {
    pub results: Value,
    pub table: Table,
    pub warnings: Vec<String>,
}

fn config_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `# key=value` lines; list entries get one line each so the header can be
/// fed back as a config file.
fn write_config<W: Write>(w: &mut W, config: &Value) -> io::Result<()> {
    let Value::Object(map) = config else {
        return Ok(());
    };
    for (k, v) in map {
        match v {
            Value::Null => {}
            Value::Array(items) => {
                for item in items {
                    writeln!(w, "# {k}={}", config_value(item))?;
                }
            }
            _ => writeln!(w, "# {k}={}", config_value(v))?,
        }
    }
    Ok(())
}

pub fn write_csv<W: Write>(mut w: W, config: &Value, table: &Table) -> io::Result<()> {
    write_config(&mut w, config)?;
    let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    csv.write_record(&table.header)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush()
}

pub fn write_json<W: Write>(mut w: W, config: &Value, results: &Value) -> io::Result<()> {
    let doc = json!({ "config": config, "results": results });
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)
}

pub fn emit(config: &Value, output: &Output, format: Format, out: Option<&Path>) -> io::Result<()> {
    let write = |w: &mut dyn Write| match format {
        Format::Csv => write_csv(w, config, &output.table),
        Format::Json => write_json(w, config, &output.results),
    };
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w)?;
            w.flush()
        }
    }
}
