use std::io::Read;

use chrono::NaiveDate;
use trendlab::{Frequency, PriceSeries};

use crate::CliError;

/// Reads a `date,close` CSV (extra columns ignored, rows in any order) into a
/// daily price series.
pub fn parse_price_csv<R: Read>(reader: R) -> Result<PriceSeries, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Csv {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::Csv {
                line: 1,
                message: format!("header has no `{name}` column"),
            })
    };
    let (date_col, close_col) = (column("date")?, column("close")?);

    let mut rows: Vec<(NaiveDate, f64, u64)> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::Csv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = |i: usize, name: &str| {
            record.get(i).filter(|s| !s.is_empty()).ok_or_else(|| CliError::Csv {
                line,
                message: format!("missing {name}"),
            })
        };
        let raw_date = field(date_col, "date")?;
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|e| CliError::Csv {
            line,
            message: format!("bad date `{raw_date}`: {e}"),
        })?;
        let raw_close = field(close_col, "close")?;
        let close: f64 = raw_close.parse().map_err(|_| CliError::Csv {
            line,
            message: format!("bad close `{raw_close}`"),
        })?;
        if !(close.is_finite() && close > 0.0) {
            return Err(CliError::NonPositivePrice { line, value: close });
        }
        rows.push((date, close, line));
    }
    if rows.is_empty() {
        return Err(CliError::Csv {
            line: 1,
            message: "no data rows".into(),
        });
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.2.cmp(&b.2)));
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(CliError::DuplicateDate {
            line: w[1].2,
            first_line: w[0].2,
            date: w[1].0,
        });
    }
    let (dates, values) = rows.into_iter().map(|(d, v, _)| (d, v)).unzip();
    Ok(PriceSeries::new(dates, values, Frequency::Daily)?)
}
