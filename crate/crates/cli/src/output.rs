//! Record streams: JSON lines with 17 significant digits or CSV with 12.

use crate::config::Format;
use crate::CliError;
use serde::ser::{Serialize, SerializeMap, Serializer};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// `v` in scientific notation with `digits` significant digits.
pub fn sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{:.*e}", digits - 1, v)
    }
}

/// JSON formatter writing every float with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(sig(v, 17).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

/// Compact JSON with 17-digit floats; non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    v.serialize(&mut ser).map_err(|e| CliError::Io(io::Error::other(e)))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Str(String),
    Bool(bool),
    Null,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Str(v.into())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Str(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Field::Null)
    }
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Num(v) => sig(*v, 12),
            Field::Int(v) => v.to_string(),
            Field::Str(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Num(v) => s.serialize_f64(*v),
            Field::Int(v) => s.serialize_u64(*v),
            Field::Str(v) => s.serialize_str(v),
            Field::Bool(v) => s.serialize_bool(*v),
            Field::Null => s.serialize_unit(),
        }
    }
}

/// Named fields in output order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Field)>);

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &'static str, v: impl Into<Field>) -> Self {
        self.0.push((key, v.into()));
        self
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

/// Stdout or the file named by `path`.
pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes records in the chosen format. The CSV header comes from the
/// first record; every record of a stream has the same keys.
pub struct Sink {
    inner: SinkKind,
}

enum SinkKind {
    Json(Box<dyn Write>),
    Csv { w: csv::Writer<Box<dyn Write>>, header: bool },
}

impl Sink {
    pub fn new(format: Format, out: Box<dyn Write>) -> Self {
        let inner = match format {
            Format::Json => SinkKind::Json(out),
            Format::Csv => SinkKind::Csv {
                w: csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out),
                header: false,
            },
        };
        Sink { inner }
    }

    pub fn write(&mut self, r: &Record) -> Result<(), CliError> {
        match &mut self.inner {
            SinkKind::Json(w) => {
                writeln!(w, "{}", to_json(r)?)?;
            }
            SinkKind::Csv { w, header } => {
                if !*header {
                    w.write_record(r.0.iter().map(|(k, _)| *k)).map_err(csv_err)?;
                    *header = true;
                }
                w.write_record(r.0.iter().map(|(_, v)| v.csv())).map_err(csv_err)?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(), CliError> {
        match self.inner {
            SinkKind::Json(mut w) => w.flush()?,
            SinkKind::Csv { mut w, .. } => w.flush()?,
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.1, 17), "1.0000000000000001e-1");
        assert_eq!(sig(-2.5, 12), "-2.50000000000e0");
        assert_eq!(sig(f64::INFINITY, 12), "inf");
        let v = 0.9159655941772190;
        assert_eq!(sig(v, 17).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn json_record() {
        let r = Record::new()
            .with("t", 1.0)
            .with("method", "direct")
            .with("terms", 12usize)
            .with("x", f64::NAN)
            .with("e", None::<String>);
        let s = to_json(&r).unwrap();
        assert_eq!(s, r#"{"t":1.0000000000000000e0,"method":"direct","terms":12,"x":null,"e":null}"#);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["t"], 1.0);
    }
}
