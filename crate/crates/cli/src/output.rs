use std::io::Write;
use std::path::{Path, PathBuf};

use quospec::plot::{scatter_svg, Series};
use quospec::spectra::AtomicMeasure;
use tempfile::NamedTempFile;

use crate::config::{Format, JobConfig};
use crate::error::CliError;

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_error(dir))?;
    tmp.write_all(contents).map_err(io_error(path))?;
    tmp.as_file().sync_all().map_err(io_error(path))?;
    tmp.persist(path).map_err(|e| io_error(path)(e.error))?;
    Ok(())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("json value serializes");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes `stem.csv`, `stem.json` and `stem.svg` as requested by the config
/// and returns the paths written.
pub fn write_measure(
    cfg: &JobConfig,
    stem: &str,
    series: &[Series<'_>],
    radius: f64,
    title: &str,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let main: &AtomicMeasure = series[0].measure;
    if cfg.wants(Format::Csv) {
        let path = cfg.out.join(format!("{stem}.csv"));
        write_atomic(&path, main.to_csv().as_bytes())?;
        written.push(path);
    }
    if cfg.wants(Format::Json) {
        let path = cfg.out.join(format!("{stem}.json"));
        write_json(&path, &main.to_json())?;
        written.push(path);
    }
    if cfg.wants(Format::Svg) {
        let path = cfg.out.join(format!("{stem}.svg"));
        write_atomic(&path, scatter_svg(series, radius, title).as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_and_leaves_no_temporaries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("a.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        let entries: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
        assert_eq!(entries.len(), 1);
    }
}
