//! Data behind the four rate plots, rendered as CSV.

use std::fmt;
use std::str::FromStr;

use crate::binary::{self, BinaryChannelSpec};
use crate::gaussian::{self, GaussianChannelSpec};
use crate::units::db_to_linear;

/// Points on the `q` axis of the binary figures.
pub const BINARY_POINTS: usize = 101;
/// Points on the dB axis of the Gaussian figures.
pub const GAUSSIAN_POINTS: usize = 121;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// Two-user binary: capacity and baselines against `q`.
    Fig2,
    /// Three-user binary: bounds and baselines against `q`.
    Fig4,
    /// Gaussian bounds against INR at `P = 33 dB`.
    Fig5,
    /// Gaussian bounds against SNR at `Q = 15 dB`.
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig2, Figure::Fig4, Figure::Fig5, Figure::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Figure::Fig2 => "Two-user binary multicast",
            Figure::Fig4 => "Three-user binary multicast",
            Figure::Fig5 => "Gaussian bounds vs INR (SNR 33 dB)",
            Figure::Fig6 => "Gaussian bounds vs SNR (INR 15 dB)",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|fig| fig.name() == s)
            .ok_or_else(|| format!("unknown figure '{s}' (expected fig2, fig4, fig5 or fig6)"))
    }
}

/// A table whose first column is the x axis.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub figure: Figure,
    pub x_label: &'static str,
    /// Series names, excluding the x column.
    pub series: Vec<&'static str>,
    /// Each row is `[x, series...]`.
    pub rows: Vec<Vec<f64>>,
}

impl FigureData {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.series.iter().position(|s| *s == name)? + 1;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn x(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    /// Header line plus one line per row, `\n`-terminated.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.x_label);
        for s in &self.series {
            out.push(',');
            out.push_str(s);
        }
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Nine significant digits in the style of C's `%.9g`, independent of locale.
pub fn format_number(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i == n - 1 {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

/// Builds the table for one figure.
pub fn figure_data(figure: Figure) -> FigureData {
    match figure {
        Figure::Fig2 => {
            let rows = linspace(0.0, 0.5, BINARY_POINTS)
                .map(|q| {
                    let spec = BinaryChannelSpec::iid(2, q).expect("q in [0, 1/2]");
                    vec![
                        q,
                        binary::capacity_two_user(&spec).expect("two users").value(),
                        binary::rate_timeshare(2).expect("two users").value(),
                        binary::rate_ignore_side_info(&spec).value(),
                    ]
                })
                .collect();
            FigureData {
                figure,
                x_label: "q",
                series: vec!["capacity", "timeshare", "ignore_si"],
                rows,
            }
        }
        Figure::Fig4 => {
            let rows = linspace(0.0, 0.5, BINARY_POINTS)
                .map(|q| {
                    let spec = BinaryChannelSpec::iid(3, q).expect("q in [0, 1/2]");
                    vec![
                        q,
                        binary::upper_bound_k(&spec).expect("three users").value(),
                        binary::lower_bound_k(&spec).expect("three users").value(),
                        binary::rate_timeshare(3).expect("three users").value(),
                        binary::rate_ignore_side_info(&spec).value(),
                    ]
                })
                .collect();
            FigureData {
                figure,
                x_label: "q",
                series: vec!["upper_k3", "lower_k3", "timeshare", "ignore_si"],
                rows,
            }
        }
        Figure::Fig5 => gaussian_sweep(figure, "inr_db", |db| (33.0, db), -10.0, 50.0),
        Figure::Fig6 => gaussian_sweep(figure, "snr_db", |db| (db, 15.0), 0.0, 50.0),
    }
}

fn gaussian_sweep(
    figure: Figure,
    x_label: &'static str,
    point: impl Fn(f64) -> (f64, f64),
    lo_db: f64,
    hi_db: f64,
) -> FigureData {
    let rows = linspace(lo_db, hi_db, GAUSSIAN_POINTS)
        .map(|db| {
            let (p_db, q_db) = point(db);
            let spec = GaussianChannelSpec::new(db_to_linear(p_db), db_to_linear(q_db)).expect("finite powers");
            vec![
                db,
                gaussian::upper_i(&spec).value(),
                gaussian::upper_ii(&spec).value(),
                gaussian::lower_bound(&spec).value(),
                gaussian::rate_timeshare(&spec).value(),
                gaussian::rate_interference_as_noise(&spec).value(),
            ]
        })
        .collect();
    FigureData {
        figure,
        x_label,
        series: vec!["upper_i", "upper_ii", "lower", "timeshare", "interference_as_noise"],
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333");
        assert_eq!(format_number(2.0 / 3.0), "0.666666667");
        assert_eq!(format_number(-10.0), "-10");
        assert_eq!(format_number(1995.2623149688789), "1995.26231");
        assert_eq!(format_number(123456789.0), "123456789");
        assert_eq!(format_number(1234567890.0), "1.23456789e+09");
        assert_eq!(format_number(1.5e-7), "1.5e-07");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn parse_names() {
        for fig in Figure::ALL {
            assert_eq!(fig.name().parse::<Figure>().unwrap(), fig);
        }
        assert!("fig3".parse::<Figure>().is_err());
    }

    #[test]
    fn fig2_endpoints() {
        let data = figure_data(Figure::Fig2);
        assert_eq!(data.rows.len(), BINARY_POINTS);
        let last = data.rows.last().unwrap();
        assert_eq!(last[0], 0.5);
        assert_abs_diff_eq!(last[1], 0.5, epsilon = 1e-12);
        assert_eq!(last[2], 0.5);
        assert_abs_diff_eq!(last[3], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(data.rows[1][0], 0.005, epsilon = 1e-15);
    }

    #[test]
    fn fig4_meets_at_half() {
        let data = figure_data(Figure::Fig4);
        let last = data.rows.last().unwrap();
        assert_abs_diff_eq!(last[1], 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(last[2], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_axes() {
        let fig5 = figure_data(Figure::Fig5);
        assert_eq!(fig5.rows.len(), GAUSSIAN_POINTS);
        assert_eq!(fig5.x()[0], -10.0);
        assert_eq!(fig5.x()[120], 50.0);
        assert_abs_diff_eq!(fig5.x()[1], -9.5, epsilon = 1e-12);
        let fig6 = figure_data(Figure::Fig6);
        assert_eq!(fig6.x()[120], 50.0);
        assert!(fig6.column("lower").is_some());
        assert!(fig6.column("nope").is_none());
    }

    #[test]
    fn csv_shape() {
        let csv = figure_data(Figure::Fig2).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "q,capacity,timeshare,ignore_si");
        assert_eq!(lines.next().unwrap(), "0,1,0.5,1");
        assert_eq!(csv.lines().count(), BINARY_POINTS + 1);
        assert!(csv.ends_with('\n'));
    }
}
