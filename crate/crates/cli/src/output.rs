use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Svg,
}

/// Everything a command produces: JSON records, or one SVG document.
#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<Value>,
    pub svg: Option<String>,
}

impl Report {
    pub fn push(&mut self, v: Value) {
        self.records.push(v);
    }
}

pub fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_jsonl(w: &mut dyn Write, records: &[Value]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

/// Scalar top-level fields only; the header is the union of keys in order
/// of first appearance.
pub fn write_csv(w: &mut dyn Write, records: &[Value]) -> io::Result<()> {
    let mut header: Vec<String> = Vec::new();
    for r in records {
        if let Value::Object(m) = r {
            for (k, v) in m {
                if scalar(v).is_some() && !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&header)?;
    for r in records {
        let row: Vec<String> = header
            .iter()
            .map(|k| r.get(k).and_then(scalar).unwrap_or_default())
            .collect();
        out.write_record(&row)?;
    }
    out.flush()
}
