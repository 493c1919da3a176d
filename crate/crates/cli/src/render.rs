//! Plain-text table rendering and scalar formatting.

use hl_core::scalar::ExtScalar;

/// Exact value plus a 2-decimal approximation, truncated toward zero so the
/// printed decimals match the published tables. Integers and `inf` print
/// bare.
pub fn scalar_cell(v: &ExtScalar) -> String {
    match v.as_rat() {
        None => "inf".to_string(),
        Some(r) => {
            if r.is_integer() {
                format!("{}", r.numer())
            } else {
                format!("{v} (~{})", trunc2(v.to_f64()))
            }
        }
    }
}

/// Truncated (not rounded) 2-decimal rendering.
pub fn trunc2(x: f64) -> String {
    let t = (x * 100.0).trunc() / 100.0;
    format!("{t:.2}")
}

/// Column-aligned table with a header row.
pub struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new(header: Vec<String>) -> Self {
        TextTable {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let cols = self
            .rows
            .iter()
            .chain(std::iter::once(&self.header))
            .map(|r| r.len())
            .max()
            .unwrap_or(0);
        // short rows (markers like "n/a: ...") do not stretch the columns
        let mut widths = vec![0usize; cols];
        for row in std::iter::once(&self.header)
            .chain(self.rows.iter().filter(|r| r.len() == self.header.len()))
        {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        if let Some(first) = self
            .rows
            .iter()
            .filter(|r| r.len() != self.header.len())
            .filter_map(|r| r.first())
            .map(|c| c.len())
            .max()
        {
            widths[0] = widths[0].max(first);
        }
        let mut out = String::new();
        let emit = |row: &[String], out: &mut String| {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        };
        emit(&self.header, &mut out);
        let rule: usize = widths.iter().sum::<usize>() + 2 * (cols.saturating_sub(1));
        out.push_str(&"-".repeat(rule));
        out.push('\n');
        for row in &self.rows {
            emit(row, &mut out);
        }
        out
    }
}
