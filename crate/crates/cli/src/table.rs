//! Sweep grids, result tables, and diff-stable CSV emission.

use crate::CliError;

/// Hard ceiling on sweep sizes; every point costs at least one
/// eigendecomposition.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Inclusive sweep grid: `start, start+step, …` with the final point clamped
/// to exactly `stop`, so separable endpoints like `s = 1` are hit exactly.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
        return Err(CliError::Validation("sweep: start, stop, step must be finite".into()));
    }
    if step <= 0.0 {
        return Err(CliError::Validation(format!("sweep.step must be positive, got {step}")));
    }
    if start > stop {
        return Err(CliError::Validation(format!(
            "sweep.start ({start}) must not exceed sweep.stop ({stop})"
        )));
    }
    if (stop - start) / step > MAX_GRID_POINTS as f64 {
        return Err(CliError::Validation(format!(
            "sweep would span more than {MAX_GRID_POINTS} points"
        )));
    }
    let eps = step * 1e-9;
    let mut points = Vec::new();
    for k in 0.. {
        let v = start + k as f64 * step;
        if v >= stop - eps {
            points.push(stop);
            break;
        }
        points.push(v);
    }
    Ok(points)
}

/// One sweep point: the swept value plus the result columns, in table order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub values: Vec<f64>,
}

/// Named columns (sweep parameter first) over a list of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn new(columns: Vec<String>, rows: Vec<SweepRow>) -> Result<Self, CliError> {
        for row in &rows {
            if row.values.len() + 1 != columns.len() {
                return Err(CliError::Validation(format!(
                    "row width {} does not match {} columns",
                    row.values.len() + 1,
                    columns.len()
                )));
            }
            if !row.sweep_value.is_finite() || row.values.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Numerical(format!(
                    "non-finite result at sweep value {}",
                    row.sweep_value
                )));
            }
        }
        Ok(Self { columns, rows })
    }

    /// Keep the sweep column and the named subset of result columns, in the
    /// requested order.
    pub fn project(&self, outputs: &[String]) -> Result<SweepTable, CliError> {
        let mut indices = Vec::with_capacity(outputs.len());
        for name in outputs {
            let idx = self.columns[1..]
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "outputs: unknown column {name:?}; available: {}",
                        self.columns[1..].join(", ")
                    ))
                })?;
            indices.push(idx);
        }
        let columns: Vec<String> = std::iter::once(self.columns[0].clone())
            .chain(outputs.iter().cloned())
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|row| SweepRow {
                sweep_value: row.sweep_value,
                values: indices.iter().map(|&i| row.values[i]).collect(),
            })
            .collect();
        SweepTable::new(columns, rows)
    }

    /// Prefix a constant column (for stacking sweeps over a second parameter).
    pub fn with_prefix_column(&self, name: &str, value: f64) -> SweepTable {
        let columns: Vec<String> = std::iter::once(name.to_string())
            .chain(self.columns.iter().cloned())
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|row| SweepRow {
                sweep_value: value,
                values: std::iter::once(row.sweep_value)
                    .chain(row.values.iter().copied())
                    .collect(),
            })
            .collect();
        SweepTable { columns, rows }
    }

    /// Concatenate tables with identical columns.
    pub fn stack(tables: Vec<SweepTable>) -> Result<SweepTable, CliError> {
        let mut iter = tables.into_iter();
        let mut first = iter
            .next()
            .ok_or_else(|| CliError::Validation("cannot stack zero tables".into()))?;
        for table in iter {
            if table.columns != first.columns {
                return Err(CliError::Validation("stacked tables must share columns".into()));
            }
            first.rows.extend(table.rows);
        }
        Ok(first)
    }

    /// RFC-4180-style CSV: comma-delimited, LF endings, header row, 12
    /// significant digits. Byte-identical for identical inputs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format_number(row.sweep_value));
            for v in &row.values {
                out.push(',');
                out.push_str(&format_number(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Formats with 12 significant digits, trimming trailing zeros; falls back to
/// scientific notation outside `[1e-4, 1e12)`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed)
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
