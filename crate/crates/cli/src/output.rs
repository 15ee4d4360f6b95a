use std::fs;
use std::path::{Path, PathBuf};

use rsl_core::radon::{io, GridFunction};
use rsl_core::report::CsvTable;
use rsl_core::Result;
use serde::Serialize;

/// Output directory; created on first use.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn new(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutDir { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, body)?;
        Ok(p)
    }

    pub fn csv(&self, name: &str, table: &CsvTable) -> Result<PathBuf> {
        self.text(name, &table.to_csv()?)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.text(name, &s)
    }

    pub fn grid(&self, name: &str, f: &GridFunction) -> Result<PathBuf> {
        self.text(name, &io::to_text(f))
    }
}
