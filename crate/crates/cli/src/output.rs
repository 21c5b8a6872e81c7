use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Format, GlobalOpts};
use crate::error::CliResult;

/// Longest value printed in full by the pretty format.
const PRETTY_WIDTH: usize = 48;

enum Sink {
    Lines(Box<dyn Write>),
    Csv(Box<csv::Writer<Box<dyn Write>>>),
}

/// Writes records as NDJSON, CSV rows of one primary record kind, or
/// `kind: key=value` lines.
pub struct Emitter {
    format: Format,
    sink: Sink,
    primary: &'static str,
    columns: &'static [&'static str],
    header_written: bool,
    timing: bool,
}

impl Emitter {
    pub fn new(opts: &GlobalOpts, primary: &'static str, columns: &'static [&'static str]) -> CliResult<Self> {
        let raw: Box<dyn Write> = match &opts.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let sink = match opts.format {
            Format::Csv => Sink::Csv(Box::new(csv::Writer::from_writer(raw))),
            _ => Sink::Lines(raw),
        };
        Ok(Emitter {
            format: opts.format,
            sink,
            primary,
            columns,
            header_written: false,
            timing: opts.timing,
        })
    }

    pub fn record<T: Serialize>(&mut self, kind: &str, value: &T) -> CliResult<()> {
        let mut map = match serde_json::to_value(value)? {
            Value::Object(map) => map,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        if !self.timing {
            map.remove("elapsed_micros");
        }
        map.insert("record".into(), Value::String(kind.to_string()));
        match (&mut self.sink, self.format) {
            (Sink::Csv(w), _) => {
                if kind != self.primary {
                    return Ok(());
                }
                if !self.header_written {
                    w.write_record(self.columns)?;
                    self.header_written = true;
                }
                w.write_record(self.columns.iter().map(|c| cell(map.get(*c))))?;
            }
            (Sink::Lines(w), Format::Pretty) => {
                let fields: Vec<String> = map
                    .iter()
                    .filter(|(k, _)| k.as_str() != "record")
                    .map(|(k, v)| format!("{k}={}", abbreviate(&cell(Some(v)))))
                    .collect();
                writeln!(w, "{kind}: {}", fields.join("  "))?;
            }
            (Sink::Lines(w), _) => {
                serde_json::to_writer(&mut *w, &Value::Object(map))?;
                w.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> CliResult<()> {
        match self.sink {
            Sink::Csv(mut w) => {
                if !self.header_written {
                    w.write_record(self.columns)?;
                }
                w.flush()?;
            }
            Sink::Lines(mut w) => w.flush()?,
        }
        Ok(())
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn abbreviate(s: &str) -> String {
    let n = s.chars().count();
    if n <= PRETTY_WIDTH {
        return s.to_string();
    }
    let head: String = s.chars().take(20).collect();
    let tail: String = s.chars().skip(n - 8).collect();
    format!("{head}...{tail}({n} chars)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abbreviation_keeps_length() {
        assert_eq!(abbreviate("123"), "123");
        let long = "7".repeat(100);
        let a = abbreviate(&long);
        assert!(a.ends_with("(100 chars)"));
        assert!(a.len() < 50);
    }

    #[test]
    fn cells() {
        assert_eq!(cell(Some(&Value::String("1/64".into()))), "1/64");
        assert_eq!(cell(Some(&serde_json::json!(3))), "3");
        assert_eq!(cell(None), "");
        assert_eq!(cell(Some(&serde_json::json!([1, 2]))), "[1,2]");
    }
}
