//! On-disk report cache keyed by a SHA-256 of the canonical spec, the command,
//! its flags and the tool version.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "EOSTRATA_CACHE_DIR";

pub fn key(canonical_spec: &str, command: &str, flags: &str) -> String {
    let mut h = Sha256::new();
    for part in [canonical_spec, command, flags, env!("CARGO_PKG_VERSION")] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// `$EOSTRATA_CACHE_DIR`, else `$XDG_CACHE_HOME/eostrata`, else
/// `$HOME/.cache/eostrata`.
pub fn default_dir() -> Option<PathBuf> {
    let non_empty = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    non_empty(CACHE_ENV)
        .or_else(|| non_empty("XDG_CACHE_HOME").map(|p| p.join("eostrata")))
        .or_else(|| non_empty("HOME").map(|p| p.join(".cache").join("eostrata")))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    /// Writes to a temporary file in the cache directory, then renames it into
    /// place so readers never see a partial entry.
    pub fn put(&self, key: &str, value: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(value.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key)).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
