//! JSON with 17 significant digits, CSV tables and run manifests.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Pretty JSON whose floats carry 17 significant digits.
struct Precise<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// SHA-256 of the result with any top-level `elapsed` field removed.
pub fn digest(result: &Value) -> String {
    let mut stripped = result.clone();
    if let Value::Object(map) = &mut stripped {
        map.remove("elapsed");
    }
    let hash = Sha256::digest(to_json(&stripped).as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub params: Value,
    pub version: &'a str,
    pub sieve: friable_core::sieve::SieveConfig,
    pub tolerances: Value,
    pub threads: usize,
    pub elapsed: f64,
    pub digest: String,
}

/// Writes `<command>.json`, `<command>.csv` and `<command>.manifest.json`.
pub fn write_run(
    dir: &Path,
    command: &str,
    result: &Value,
    table: Option<&Table>,
    manifest: &Manifest<'_>,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json = dir.join(format!("{command}.json"));
    fs::write(&json, to_json(result) + "\n")?;
    written.push(json);
    if let Some(t) = table {
        let csv = dir.join(format!("{command}.csv"));
        fs::write(&csv, t.to_csv())?;
        written.push(csv);
    }
    let man = dir.join(format!("{command}.manifest.json"));
    fs::write(&man, to_json(manifest) + "\n")?;
    written.push(man);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json(&json!({"x": 0.1, "n": 3, "bad": f64::NAN}));
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"n\": 3"));
        assert!(s.contains("null"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn digest_ignores_elapsed() {
        let a = json!({"count": 5, "elapsed": 1.0});
        let b = json!({"count": 5, "elapsed": 2.5});
        assert_eq!(digest(&a), digest(&b));
        assert_ne!(digest(&a), digest(&json!({"count": 6})));
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,2\n");
    }
}
