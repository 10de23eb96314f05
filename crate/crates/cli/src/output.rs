use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Value};
use unitary_euler::algebra::ComplexSquareMatrix;

use num_complex::Complex64;

/// `println!` that exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {
        $crate::output::emit(format_args!($($arg)*))
    };
}

pub fn emit(args: std::fmt::Arguments<'_>) {
    let mut stdout = io::stdout().lock();
    if writeln!(stdout, "{args}").is_err() {
        std::process::exit(0);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Shortest round-trip representation.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

pub fn complex_pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Rows of `[re, im]` pairs.
pub fn matrix_json(m: &ComplexSquareMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

pub fn matrix_cells(m: &ComplexSquareMatrix, mut f: impl FnMut(usize, usize, Complex64)) {
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            f(r, c, m.get(r, c));
        }
    }
}

pub fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

/// One record per line; `pretty` indents it.
pub fn print_line(v: &Value, fmt: Format) {
    match fmt {
        Format::Pretty => print_json(v),
        _ => out!("{v}"),
    }
}

pub fn print_matrix(m: &ComplexSquareMatrix) {
    for r in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|c| {
                let z = m.get(r, c);
                format!("{:>10.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        out!("{}", row.join("  "));
    }
}

/// CSV rows written to stdout as they arrive.
pub struct Csv {
    writer: csv::Writer<io::Stdout>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Csv {
            writer: csv::Writer::from_writer(io::stdout()),
        };
        csv.row(header);
        csv
    }

    pub fn row<S: AsRef<[u8]>>(&mut self, fields: &[S]) {
        if self.writer.write_record(fields).is_err() {
            std::process::exit(0);
        }
    }

    pub fn finish(mut self) {
        if self.writer.flush().is_err() {
            std::process::exit(0);
        }
    }
}
