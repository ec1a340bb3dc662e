use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use urbounds::format::round_sig;

pub const SWEEP_CSV_HEADER: [&str; 8] = [
    "seed",
    "product",
    "robertson",
    "rs",
    "new",
    "commuting",
    "best",
    "slack",
];

/// Stdout or a file.
pub struct Sink {
    out: Box<dyn Write>,
}

/// Rounds every float in `v` to the output precision.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x)
                .map(Value::Number)
                .unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) if p.as_os_str() != "-" => Box::new(BufWriter::new(File::create(p)?)),
            _ => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { out })
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        let v = round_floats(serde_json::to_value(value)?);
        serde_json::to_writer_pretty(&mut self.out, &v)?;
        writeln!(self.out)
    }

    pub fn csv<I>(&mut self, header: &[&str], rows: I) -> csv::Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut w = csv::Writer::from_writer(&mut self.out);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}
