//! Artifact writers: CSV tables, VTK legacy field snapshots, gnuplot
//! scripts, and a checksum manifest
//!
//! Every file goes through [`write_text`], one writer per file, and all
//! numbers are printed with 17 significant digits so the values round-trip
//! exactly and reruns diff clean.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::grid::{Field, Grid};

/// Full round-trip float formatting: 17 significant digits, `.` decimal.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table: `#`-prefixed metadata lines, a header row, string cells.
/// Numeric cells should be produced with [`num`].
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table {
            meta: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width != header width");
        self.rows.push(cells);
    }

    pub fn push_nums(&mut self, values: &[f64]) {
        self.push(values.iter().map(|&v| num(v)).collect());
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// Create parent directories and write `text` to `path` in one shot.
pub fn write_text(path: &Path, text: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)
}

/// 2D fields as a VTK legacy ASCII STRUCTURED_POINTS dataset, values
/// attached to the lattice of sample positions. All fields must share the
/// first field's shape and staggering (write one file per component
/// otherwise).
pub fn render_vtk_fields(title: &str, grid: &Grid, fields: &[(&str, &Field)]) -> String {
    let lead = fields.first().expect("at least one field").1;
    let (nx, ny) = (lead.nx(), lead.ny());
    let (x0, y0, _) = lead.position(grid, 0, 0, 0);
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "{title}");
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {nx} {ny} 1");
    let _ = writeln!(s, "ORIGIN {} {} 0", num(x0), num(y0));
    let _ = writeln!(s, "SPACING {} {} 1", num(grid.dx), num(grid.dy));
    let _ = writeln!(s, "POINT_DATA {}", nx * ny);
    for (name, field) in fields {
        assert_eq!(
            (field.nx(), field.ny(), field.stagger()),
            (nx, ny, lead.stagger()),
            "field `{name}` does not share the lead field's lattice"
        );
        let _ = writeln!(s, "SCALARS {name} double 1");
        let _ = writeln!(s, "LOOKUP_TABLE default");
        for j in 0..ny as isize {
            let mut line = String::new();
            for i in 0..nx as isize {
                if i > 0 {
                    line.push(' ');
                }
                line.push_str(&num(field.at2(i, j)));
            }
            let _ = writeln!(s, "{line}");
        }
    }
    s
}

/// One curve of a gnuplot script: CSV column indices (1-based) and a label.
pub struct Curve {
    pub x: usize,
    pub y: usize,
    pub label: String,
}

impl Curve {
    pub fn new(x: usize, y: usize, label: &str) -> Curve {
        Curve { x, y, label: label.to_string() }
    }
}

/// A gnuplot script plotting curves from one CSV file. The script is meant
/// to be run by the user (`gnuplot file.plt`); nothing is rendered here.
pub fn render_gnuplot(
    csv_name: &str,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    curves: &[Curve],
    loglog: bool,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key top right");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    if loglog {
        let _ = writeln!(s, "set logscale xy");
    }
    let mut plot = String::from("plot");
    for (k, c) in curves.iter().enumerate() {
        if k > 0 {
            plot.push(',');
        }
        let _ = write!(
            plot,
            " '{csv_name}' using {}:{} with linespoints title '{}'",
            c.x, c.y, c.label
        );
    }
    let _ = writeln!(s, "{plot}");
    let _ = writeln!(s, "pause -1 'press enter to close'");
    s
}

/// Records every emitted file and writes a `manifest.txt` with SHA-256
/// checksums, so a run's outputs can be verified or diffed wholesale.
#[derive(Debug, Clone)]
pub struct Manifest {
    root: PathBuf,
    entries: Vec<(String, u64, String)>,
}

impl Manifest {
    pub fn new(root: &Path) -> Manifest {
        Manifest { root: root.to_path_buf(), entries: Vec::new() }
    }

    /// Write `text` under the manifest root and record its checksum.
    /// Returns the full path.
    pub fn emit(&mut self, name: &str, text: &str) -> io::Result<PathBuf> {
        let path = self.root.join(name);
        write_text(&path, text)?;
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        self.entries
            .push((name.to_string(), text.len() as u64, format!("{:x}", h.finalize())));
        Ok(path)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _, _)| n.as_str()).collect()
    }

    /// Write the manifest itself: `sha256  bytes  name` per file, sorted by
    /// name.
    pub fn write(&self) -> io::Result<PathBuf> {
        let mut rows: Vec<_> = self.entries.clone();
        rows.sort();
        let mut s = String::new();
        for (name, bytes, sha) in &rows {
            let _ = writeln!(s, "{sha}  {bytes:>10}  {name}");
        }
        let path = self.root.join("manifest.txt");
        write_text(&path, &s)?;
        Ok(path)
    }
}
