//! Output rendering. JSON is canonical; CSV is a flat table with ASCII
//! commas and no quoting, since every field is numeric or a bare identifier.

use std::fmt::Display;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Default)]
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Csv::default();
        c.out.push_str(&header.join(","));
        c.out.push('\n');
        c
    }

    pub fn row(&mut self, fields: &[&dyn Display]) {
        let cells: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Empty string for `None`, so optional numbers stay a single CSV cell.
pub fn opt<T: Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
