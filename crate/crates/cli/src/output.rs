//! Plain CSV output: `.` decimal separator, `\n` line endings and 17
//! significant digits, independent of locale.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// `x` with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = write!(self.text, "{}", cells.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        write_text(path, &self.text)
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_round_trip() {
        for x in [0.1, -2.0, 1.0 / 3.0, 6.02214076e23, -1.080432173e-300, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s
                .split('e')
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .count();
            assert_eq!(digits, 17);
        }
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&["1".into(), fmt_f64(0.5)]);
        assert_eq!(csv.as_str(), "a,b\n1,5.0000000000000000e-1\n");
    }
}
