use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use gamecond::{IndexConfiguration, StrategyProfile, Tolerances};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::error::CliError;

/// Pretty-printed JSON with every float written to 17 significant digits,
/// enough to read back the identical `f64`.
struct Exact<'a>(PrettyFormatter<'a>);

impl Formatter for Exact<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Exact(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing a JSON value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn tolerances_json(tol: &Tolerances) -> Value {
    json!({
        "feasibility": tol.feasibility,
        "tie": tol.tie,
        "zero": tol.zero,
        "equilibrium": tol.equilibrium,
        "margin": tol.margin,
        "oracle": tol.oracle,
    })
}

/// 1-based; `J` runs over `1..m` for `x` and `m+1..m+n` for `y`.
pub fn config_json(config: &IndexConfiguration) -> Value {
    let (i, k, j) = config.one_based();
    json!({ "I": i, "K": k, "J": j })
}

pub fn profile_json(w: &StrategyProfile) -> Value {
    json!({ "x": w.x, "y": w.y })
}

pub struct Report {
    pub command: &'static str,
    pub input: String,
    pub result: Value,
    pub diagnostics: Value,
    pub tolerances: Tolerances,
}

impl Report {
    pub fn to_value(&self, timestamp: bool) -> Value {
        let mut v = json!({
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "diagnostics": self.diagnostics,
            "tolerances": tolerances_json(&self.tolerances),
        });
        if timestamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            v["timestamp"] = json!(secs);
        }
        v
    }
}

/// Writes to `path`, or standard output without one.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            }),
    }
}
