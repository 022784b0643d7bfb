use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One run's output, renderable either as a JSON document or a CSV table.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }

    pub fn write_to(&self, format: Format, path: Option<&std::path::Path>) -> io::Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => std::fs::write(p, text),
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}
