use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::CliResult;

/// Writes `path` via a sibling temp file and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> timebin::Result<()>) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = NamedTempFile::new_in(&dir)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut buf)?;
        buf.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    write_atomic(path, |w| Ok(w.write_all(text.as_bytes())?))
}
