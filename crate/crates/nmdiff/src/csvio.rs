//! CSV output with shortest round-trip doubles.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use nmdiff_core::simulate::Path as SimPath;

/// Shortest decimal text that parses back to the same double.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}

/// Open `path` for writing, or stdout for `-`.
pub fn open_output(path: &Path) -> io::Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

/// A numeric table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Build from columns of equal length.
    pub fn from_columns<S: AsRef<str>>(header: &[S], columns: &[Vec<f64>]) -> Self {
        let mut t = Self::new(header);
        let n = columns.first().map_or(0, Vec::len);
        for i in 0..n {
            t.push(columns.iter().map(|c| c[i]).collect());
        }
        t
    }

    pub fn write_to<W: Write>(&self, w: W) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| fmt_f64(*v)))?;
        }
        out.flush()
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        self.write_to(open_output(path)?)
    }

    pub fn read(path: &Path) -> io::Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let header = rdr.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{s}: {e}"))))
                .collect::<io::Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Path table `t,value[,time_change]`, optionally prefixed by `path_id`.
pub fn path_table(path: &SimPath, path_id: Option<usize>) -> Table {
    let mut header = Vec::new();
    if path_id.is_some() {
        header.push("path_id");
    }
    header.extend(["t", "value"]);
    if path.time_change.is_some() {
        header.push("time_change");
    }
    let mut t = Table::new(&header);
    append_path(&mut t, path, path_id);
    t
}

pub fn append_path(table: &mut Table, path: &SimPath, path_id: Option<usize>) {
    for (i, (&t, &v)) in path.grid.times().iter().zip(&path.values).enumerate() {
        let mut row = Vec::with_capacity(4);
        if let Some(id) = path_id {
            row.push(id as f64);
        }
        row.push(t);
        row.push(v);
        if let Some(tc) = &path.time_change {
            row.push(tc[i]);
        }
        table.push(row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn doubles_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn table_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/t.csv");
        let t = Table::from_columns(&["x", "f"], &[vec![0.1, 1e-300, -2.5], vec![1.0 / 3.0, 5e300, 0.0]]);
        t.write(&p).unwrap();
        let back = Table::read(&p).unwrap();
        assert_eq!(t, back);
        assert_eq!(back.column("f").unwrap()[0], 1.0 / 3.0);
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("x,f\n0.1,0.3333333333333333\n"));
    }
}
