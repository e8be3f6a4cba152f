//! Output plumbing: CSV emission (RFC-4180 via the `csv` crate, '.' decimal,
//! header row, leading timestamp comment) and small aligned text tables.
//! Apart from the timestamp line, identical inputs produce identical bytes.

use std::io::Write;
use std::path::Path;

use chrono::{SecondsFormat, Utc};

use crate::error::CliResult;

/// Shortest decimal form that parses back to exactly the same f64.
pub fn num(v: f64) -> String {
    format!("{v}")
}

/// Writes `# generated <timestamp>`, a header row, and the data rows to
/// `path`, or to stdout when no path is given.
pub fn emit_csv(path: Option<&Path>, headers: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            let file = std::fs::File::create(p)?;
            write_csv(file, headers, rows)
        }
        None => write_csv(std::io::stdout().lock(), headers, rows),
    }
}

fn write_csv<W: Write>(mut sink: W, headers: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    writeln!(sink, "# generated {}", Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(headers)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Prints rows as two aligned columns: a label and a value.
pub fn print_kv_table(rows: &[(&str, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

/// Prints a header and rows with columns padded to their widest cell.
pub fn print_table(headers: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:>width$}", width = widths[i]))
            .collect();
        println!("{}", padded.join("  "));
    };
    line(headers.iter().map(|h| h.to_string()).collect());
    for row in rows {
        line(row.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_bytes_are_stable_apart_from_the_timestamp_line() {
        let rows = vec![vec![num(0.1), num(1.0 / 3.0)], vec![num(-2.5e-11), num(7.0)]];
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&mut a, &["x", "y"], &rows).unwrap();
        write_csv(&mut b, &["x", "y"], &rows).unwrap();
        let tail = |buf: &[u8]| {
            let s = String::from_utf8(buf.to_vec()).unwrap();
            s.split_once('\n').map(|(_, rest)| rest.to_string()).unwrap()
        };
        assert_eq!(tail(&a), tail(&b));
        assert!(tail(&a).starts_with("x,y\n"));
    }

    #[test]
    fn numbers_round_trip_through_their_csv_form() {
        for &v in &[0.1, 1.0 / 3.0, 2.0_f64.powi(-40), 6.02e23, -7.25] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn fields_with_separators_are_quoted() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["name"], &[vec!["a,b".to_string()]]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("\"a,b\""));
    }
}
