use std::fmt::Write as _;

use super::FormatError;

/// Columns for a Grace-readable xvg plot: one abscissa and any number of
/// labeled data columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct XvgData {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub x: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl XvgData {
    pub fn new(title: &str, xlabel: &str, ylabel: &str) -> Self {
        XvgData { title: title.into(), xlabel: xlabel.into(), ylabel: ylabel.into(), ..Default::default() }
    }

    pub fn with_x(mut self, x: Vec<f64>) -> Self {
        self.x = x;
        self
    }

    pub fn column(mut self, legend: &str, values: Vec<f64>) -> Self {
        self.columns.push((legend.to_string(), values));
        self
    }

    /// Renders the file. Errors on ragged columns.
    pub fn to_xvg(&self) -> Result<String, FormatError> {
        let n = self.x.len();
        for (name, col) in &self.columns {
            if col.len() != n {
                return Err(FormatError::Ragged { name: name.clone(), len: col.len(), expected: n });
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "# This file was created by minimd");
        let _ = writeln!(out, "# {}", self.title);
        let _ = writeln!(out, "@    title \"{}\"", self.title);
        let _ = writeln!(out, "@    xaxis  label \"{}\"", self.xlabel);
        let _ = writeln!(out, "@    yaxis  label \"{}\"", self.ylabel);
        let _ = writeln!(out, "@TYPE xy");
        for (k, (name, _)) in self.columns.iter().enumerate() {
            let _ = writeln!(out, "@ s{k} legend \"{name}\"");
        }
        for row in 0..n {
            let _ = write!(out, "{:14.6}", self.x[row]);
            for (_, col) in &self.columns {
                let _ = write!(out, " {:20.9}", col[row]);
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// Reads back the numeric rows of an xvg file (comments and directives skipped).
    pub fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>, FormatError> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| {
                let t = l.trim_start();
                !(t.is_empty() || t.starts_with('#') || t.starts_with('@'))
            })
            .map(|(i, l)| {
                l.split_whitespace()
                    .map(|v| v.parse::<f64>().map_err(|_| super::parse_err(i + 1, format!("bad number `{v}`"))))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rows_one_legend() {
        let text = XvgData::new("Energies", "Time (ps)", "kJ/mol")
            .with_x(vec![0.0, 1.0])
            .column("Potential", vec![-5.0, -4.9])
            .to_xvg()
            .unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("@ s0 legend")).count(), 1);
        assert_eq!(text.lines().filter(|l| l.starts_with("@ s")).count(), 1);
        let rows = XvgData::parse_rows(&text).unwrap();
        assert_eq!(rows, vec![vec![0.0, -5.0], vec![1.0, -4.9]]);
    }

    #[test]
    fn empty_series_header_only() {
        let text = XvgData::new("t", "x", "y").column("E", vec![]).to_xvg().unwrap();
        assert!(text.lines().all(|l| l.starts_with('#') || l.starts_with('@')));
        assert!(XvgData::parse_rows(&text).unwrap().is_empty());
    }

    #[test]
    fn ragged_columns_rejected() {
        let err = XvgData::new("t", "x", "y").with_x(vec![0.0, 1.0]).column("E", vec![1.0]).to_xvg();
        assert!(matches!(err, Err(FormatError::Ragged { len: 1, expected: 2, .. })));
    }
}
