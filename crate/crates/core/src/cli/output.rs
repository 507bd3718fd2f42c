//! CSV files with a `#` header block, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// Fixed 9-significant-digit rendering.
pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

/// Accumulates a CSV document in memory.
#[derive(Debug, Default, Clone)]
pub struct Table {
    header: Vec<String>,
    columns: Vec<String>,
    rows: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            header: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Adds header lines; each gets a `# ` prefix.
    pub fn comment(&mut self, text: &str) {
        for line in text.lines() {
            self.header.push(if line.is_empty() {
                "#".into()
            } else {
                format!("# {line}")
            });
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns.len());
        self.rows.push(fields.join(","));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for h in &self.header {
            s.push_str(h);
            s.push('\n');
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    /// Writes to a sibling temporary file and renames it into place, so a
    /// failed run leaves nothing behind.
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = partial_path(path);
        let result = (|| {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.render().as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, path)
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        Ok(result?)
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}
