use std::path::Path;
use std::str::FromStr;

use super::envelope::{Cell, Payload, ResultEnvelope};
use super::svg;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::input("format", format!("expected csv, json or svg, got `{s}`"))),
        }
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Num(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn num_text(v: Option<f64>) -> String {
    v.filter(|x| x.is_finite()).map(|x| x.to_string()).unwrap_or_default()
}

/// RFC 4180 CSV: one header row of column names, then data rows.
pub fn to_csv(payload: &Payload) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    w.write_record(payload.columns().iter().map(|c| c.name.as_str()))
        .map_err(ser)?;
    match payload {
        Payload::Table { rows, .. } => {
            for row in rows {
                w.write_record(row.iter().map(cell_text)).map_err(ser)?;
            }
        }
        Payload::Series { x_values, lines, .. } => {
            for (i, x) in x_values.iter().enumerate() {
                let mut rec = vec![num_text(Some(*x))];
                rec.extend(lines.iter().map(|l| num_text(l.values.get(i).copied())));
                w.write_record(rec).map_err(ser)?;
            }
        }
        Payload::Matrix {
            row_values,
            col_values,
            layers,
            ..
        } => {
            for (r, rv) in row_values.iter().enumerate() {
                for (c, cv) in col_values.iter().enumerate() {
                    let mut rec = vec![num_text(Some(*rv)), num_text(Some(*cv))];
                    rec.extend(layers.iter().map(|l| num_text(l.values[r][c])));
                    w.write_record(rec).map_err(ser)?;
                }
            }
        }
    }
    w.into_inner().map_err(|e| Error::Serialize(e.to_string()))
}

pub fn to_json(envelope: &ResultEnvelope) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(envelope).map_err(|e| Error::Serialize(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// Renders an envelope in the requested format.
pub fn render(envelope: &ResultEnvelope, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => to_csv(&envelope.payload),
        Format::Json => to_json(envelope),
        Format::Svg => match &envelope.payload {
            Payload::Table { .. } => Err(Error::UnsupportedFormat {
                format: "svg",
                shape: "table",
            }),
            p => Ok(svg::render(&envelope.title, p).into_bytes()),
        },
    }
}

pub fn emit(envelope: &ResultEnvelope, format: Format, path: &Path) -> Result<()> {
    let bytes = render(envelope, format)?;
    std::fs::write(path, bytes).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json(bytes: &[u8]) -> Result<ResultEnvelope> {
    serde_json::from_slice(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::envelope::{Column, Line};

    fn series(n: usize) -> ResultEnvelope {
        ResultEnvelope::new(
            "abc",
            "2026-01-01T00:00:00Z",
            "t",
            Payload::Series {
                x: Column::new("altitude_km", "km"),
                x_values: (0..n).map(|i| 500.0 + i as f64).collect(),
                lines: vec![Line {
                    column: Column::new("fspl_db", "dB"),
                    values: (0..n).map(|i| 150.0 + 0.5 * i as f64).collect(),
                }],
            },
        )
    }

    #[test]
    fn csv_quotes_and_header() {
        let env = ResultEnvelope::new(
            "h",
            "ts",
            "t",
            Payload::Table {
                columns: vec![Column::new("name", "-"), Column::new("value_w", "W")],
                rows: vec![vec!["a, \"b\"".into(), Cell::Num(1.5)], vec!["c".into(), Cell::Empty]],
            },
        );
        let text = String::from_utf8(render(&env, Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "name,value_w\r\n\"a, \"\"b\"\"\",1.5\r\nc,\r\n");
        assert!(matches!(
            render(&env, Format::Svg),
            Err(Error::UnsupportedFormat { .. })
        ));
    }

    #[test]
    fn empty_series() {
        let env = series(0);
        let csv = String::from_utf8(render(&env, Format::Csv).unwrap()).unwrap();
        assert_eq!(csv, "altitude_km,fspl_db\r\n");
        let svg = String::from_utf8(render(&env, Format::Svg).unwrap()).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn json_round_trip() {
        let env = series(7).with_metadata("note", "x");
        let back = read_json(&render(&env, Format::Json).unwrap()).unwrap();
        assert_eq!(back, env);
        assert_eq!(back.units["fspl_db"], "dB");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("png".parse::<Format>().is_err());
    }

    #[test]
    fn unwritable_path() {
        let err = emit(&series(2), Format::Csv, Path::new("/nonexistent-dir/x/y.csv")).unwrap_err();
        assert!(matches!(err, Error::Write { .. }));
    }
}
