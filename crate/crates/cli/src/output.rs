//! Line-delimited output: a header record, then one record per line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "schatten-run/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

pub struct Sink {
    out: Box<dyn Write>,
    format: Format,
    columns: Option<Vec<String>>,
}

fn flatten(kind: &str, record: &impl Serialize) -> io::Result<Map<String, Value>> {
    let mut map = match serde_json::to_value(record)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    map.insert("record".into(), Value::String(kind.into()));
    Ok(map)
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

impl Sink {
    /// Opens the sink and writes the header record carrying the full run
    /// configuration.
    pub fn open(path: Option<&Path>, format: Format, config: &impl Serialize) -> io::Result<Sink> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let mut sink = Sink { out, format, columns: None };
        let header = serde_json::json!({
            "record": "header",
            "schema": SCHEMA,
            "build": format!("{} {}", env!("CARGO_PKG_VERSION"), env!("SCHATTEN_BUILD_ID")),
            "config": config,
        });
        match format {
            Format::Jsonl => writeln!(sink.out, "{header}")?,
            Format::Csv => writeln!(sink.out, "# {header}")?,
        }
        Ok(sink)
    }

    pub fn write(&mut self, kind: &str, record: &impl Serialize) -> io::Result<()> {
        let map = flatten(kind, record)?;
        match self.format {
            Format::Jsonl => writeln!(self.out, "{}", Value::Object(map)),
            Format::Csv => {
                let fresh = self.columns.is_none();
                let cols = self.columns.get_or_insert_with(|| map.keys().cloned().collect());
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                if fresh {
                    w.write_record(cols.iter())?;
                }
                w.write_record(cols.iter().map(|c| cell(map.get(c))))?;
                let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
                self.out.write_all(&bytes)
            }
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}
