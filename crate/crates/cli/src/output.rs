//! CSV tables and report files.

use std::fs;
use std::path::Path;

use anyhow::Context;
use itframe::linalg::CMatrix;

use crate::report::Report;

/// A named CSV table produced by a task.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

/// Row-major complex matrix with a header of column indices and one
/// `re,im` cell per entry.
pub fn complex_matrix_csv(m: &CMatrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["row".to_string()];
    header.extend((0..m.ncols()).map(|j| j.to_string()));
    w.write_record(&header).expect("in-memory write");
    for i in 0..m.nrows() {
        let mut rec = vec![i.to_string()];
        rec.extend((0..m.ncols()).map(|j| {
            let z = m[(i, j)];
            format!("{:e},{:e}", z.re, z.im)
        }));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Plain numeric columns.
pub fn columns_csv(headers: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|v| format!("{v:e}"))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Parse a file written by [`complex_matrix_csv`].
pub fn parse_complex_matrix_csv(text: &str) -> anyhow::Result<CMatrix> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let ncols = r.headers()?.len().saturating_sub(1);
    let mut data = Vec::new();
    let mut nrows = 0;
    for rec in r.records() {
        let rec = rec?;
        for cell in rec.iter().skip(1) {
            let (re, im) = cell.split_once(',').context("cell is not `re,im`")?;
            data.push(itframe::C64::new(re.parse()?, im.parse()?));
        }
        nrows += 1;
    }
    anyhow::ensure!(data.len() == nrows * ncols, "ragged matrix");
    Ok(CMatrix::from_row_slice(nrows, ncols, &data))
}

pub fn write_outputs(dir: &Path, report: &Report, artifacts: &[Artifact], matrices: bool) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("report.json"), report.to_json())?;
    if matrices && !artifacts.is_empty() {
        let mdir = dir.join("matrices");
        fs::create_dir_all(&mdir)?;
        for a in artifacts {
            fs::write(mdir.join(&a.file), &a.contents)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use itframe::C64;

    #[test]
    fn complex_csv_layout() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.5, -0.25), C64::new(0.5, 0.25), C64::new(2.0, 0.0)],
        );
        let text = complex_matrix_csv(&m);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("row,0,1"));
        assert_eq!(lines.next(), Some("0,\"1e0,0e0\",\"5e-1,-2.5e-1\""));
        assert_eq!(parse_complex_matrix_csv(&text).unwrap(), m);
    }

    #[test]
    fn column_csv() {
        let t = columns_csv(&["index", "value"], vec![vec![0.0, 1.5], vec![1.0, 2.0]]);
        assert_eq!(t, "index,value\n0e0,1.5e0\n1e0,2e0\n");
    }
}
