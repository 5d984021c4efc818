use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Whether a command's outcome contradicts the result it checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Falsified,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a command produces, before formatting.
pub struct Output {
    pub result: Value,
    pub text: String,
    pub table: Option<Table>,
    /// Plain lines that replace the formatted output entirely.
    pub lines: Option<Vec<String>>,
    pub status: Status,
}

impl Output {
    pub fn new(result: Value, text: String) -> Self {
        Output {
            result,
            text,
            table: None,
            lines: None,
            status: Status::Ok,
        }
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }

    pub fn falsified_if(mut self, yes: bool) -> Self {
        if yes {
            self.status = Status::Falsified;
        }
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    params: &'a Value,
    result: &'a Value,
    elapsed_ms: u128,
}

pub fn emit(
    out: &mut impl Write,
    format: Format,
    command: &str,
    params: &Value,
    output: &Output,
    elapsed_ms: u128,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let env = Envelope {
                command,
                params,
                result: &output.result,
                elapsed_ms,
            };
            serde_json::to_writer_pretty(&mut *out, &env)?;
            writeln!(out)
        }
        Format::Text => {
            write!(out, "{}", output.text)?;
            if !output.text.ends_with('\n') {
                writeln!(out)?;
            }
            Ok(())
        }
        Format::Csv => {
            let Some(table) = &output.table else {
                return Err(io::Error::new(
                    io::ErrorKind::Unsupported,
                    format!("`{command}` has no CSV form; use --format json or text"),
                ));
            };
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush()
        }
    }
}
