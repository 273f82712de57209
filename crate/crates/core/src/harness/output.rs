//! CSV persistence of sweep results.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::sweep::{DiagnosticRow, SweepResult, SweepRow};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "power_db,estimator,precoder,metric,mean,stderr,n";
pub const DIAGNOSTICS_HEADER: &str = "power_db,estimator,precoder,rank_deficient,n";

/// 17 significant digits, enough to round-trip every `f64`.
fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn render<I>(header: &str, records: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: &[String]| {
        w.write_record(rec).expect("writing to memory cannot fail");
    };
    write(
        &mut w,
        &header.split(',').map(String::from).collect::<Vec<_>>(),
    );
    for rec in records {
        write(&mut w, &rec);
    }
    let bytes = w.into_inner().expect("flushing to memory cannot fail");
    String::from_utf8(bytes).expect("fields are UTF-8")
}

pub fn to_csv_string(result: &SweepResult) -> String {
    render(
        CSV_HEADER,
        result.rows.iter().map(|r| {
            vec![
                r.power_db.to_string(),
                r.estimator.to_string(),
                r.precoder.to_string(),
                r.metric.to_string(),
                fmt_value(r.mean),
                fmt_value(r.stderr),
                r.n.to_string(),
            ]
        }),
    )
}

pub fn diagnostics_csv_string(result: &SweepResult) -> String {
    render(
        DIAGNOSTICS_HEADER,
        result.diagnostics.iter().map(|d| {
            vec![
                d.power_db.to_string(),
                d.estimator.to_string(),
                d.precoder.to_string(),
                d.rank_deficient.to_string(),
                d.n.to_string(),
            ]
        }),
    )
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, to_csv_string(result))?;
    Ok(())
}

/// `results.csv` → `results.diagnostics.csv`
pub fn diagnostics_path(csv_path: &Path) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    csv_path.with_file_name(format!("{stem}.diagnostics.csv"))
}

pub fn write_diagnostics(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, diagnostics_csv_string(result))?;
    Ok(())
}

fn bad(line: u64, message: String) -> Error {
    Error::Parse {
        path: None,
        line: line as usize,
        message,
    }
}

/// Reads records after checking the exact header; yields `(line, fields)`.
fn records(text: &str, header: &str) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let found = reader
        .headers()
        .map_err(|e| bad(1, e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if found != header {
        return Err(bad(
            1,
            format!("expected header `{header}`, found `{found}`"),
        ));
    }
    reader
        .records()
        .map(|r| {
            let line = r
                .as_ref()
                .ok()
                .and_then(|r| r.position())
                .map_or(0, |p| p.line());
            r.map(|rec| (line, rec))
                .map_err(|e| bad(line, e.to_string()))
        })
        .collect()
}

fn field<T>(rec: &csv::StringRecord, line: u64, i: usize) -> Result<T>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    let s = rec
        .get(i)
        .ok_or_else(|| bad(line, format!("missing field {}", i + 1)))?;
    s.trim()
        .parse()
        .map_err(|e| bad(line, format!("`{s}`: {e}")))
}

/// Parses a file produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    records(text, CSV_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            Ok(SweepRow {
                power_db: field(&rec, line, 0)?,
                estimator: field(&rec, line, 1)?,
                precoder: field(&rec, line, 2)?,
                metric: field(&rec, line, 3)?,
                mean: field(&rec, line, 4)?,
                stderr: field(&rec, line, 5)?,
                n: field(&rec, line, 6)?,
            })
        })
        .collect()
}

/// Parses a diagnostics sidecar.
pub fn parse_diagnostics(text: &str) -> Result<Vec<DiagnosticRow>> {
    records(text, DIAGNOSTICS_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            Ok(DiagnosticRow {
                power_db: field(&rec, line, 0)?,
                estimator: field(&rec, line, 1)?,
                precoder: field(&rec, line, 2)?,
                rank_deficient: field(&rec, line, 3)?,
                n: field(&rec, line, 4)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::Estimator;
    use crate::harness::sweep::Metric;
    use crate::precoding::PrecoderScheme;

    #[test]
    fn empty_result_is_header_only() {
        assert_eq!(
            to_csv_string(&SweepResult::default()),
            format!("{CSV_HEADER}\n")
        );
    }

    #[test]
    fn single_row_round_trip() {
        let row = SweepRow {
            power_db: -12.5,
            estimator: Estimator::Lmmse,
            precoder: PrecoderScheme::Zf,
            metric: Metric::SumRate,
            mean: 1.0 / 3.0,
            stderr: 2.0f64.sqrt() * 1e-7,
            n: 1000,
        };
        let result = SweepResult {
            rows: vec![row.clone()],
            diagnostics: vec![],
        };
        let text = to_csv_string(&result);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_csv(&text).unwrap(), vec![row]);
        // at least 12 significant digits
        let mean_field = text.lines().nth(1).unwrap().split(',').nth(4).unwrap();
        let mantissa = mean_field
            .split('e')
            .next()
            .unwrap()
            .replace(['.', '-'], "");
        assert!(mantissa.len() >= 12);
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(parse_csv("power,estimator\n").is_err());
    }

    #[test]
    fn sidecar_path() {
        assert_eq!(
            diagnostics_path(Path::new("/tmp/out/fig4.csv")),
            PathBuf::from("/tmp/out/fig4.diagnostics.csv")
        );
    }

    #[test]
    fn diagnostics_round_trip() {
        let result = SweepResult {
            rows: vec![],
            diagnostics: vec![DiagnosticRow {
                power_db: 40.0,
                estimator: Estimator::Ls,
                precoder: PrecoderScheme::Zf,
                rank_deficient: 7,
                n: 10,
            }],
        };
        let text = diagnostics_csv_string(&result);
        assert_eq!(text, format!("{DIAGNOSTICS_HEADER}\n40,ls,zf,7,10\n"));
        assert_eq!(parse_diagnostics(&text).unwrap(), result.diagnostics);
    }

    #[test]
    fn bad_field_reports_line() {
        let text = format!("{CSV_HEADER}\n0,ls,zf,mse,1,0,1\n0,ls,zf,bogus,1,0,1\n");
        match parse_csv(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
