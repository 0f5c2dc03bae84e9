//! File formats and atomic output. Graphs, trees and representations are
//! exchanged as JSON; blocked graphs carry their labels alongside.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::reduction::BlockedLabels;
use crate::{Error, Result};

/// A blocked graph on disk: the graph plus its role labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockedFile {
    #[serde(flatten)]
    pub graph: Graph,
    pub labels: BlockedLabels,
}

/// Writes `value` as pretty JSON, atomically: the bytes land in a temporary
/// sibling file that is renamed over the destination.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let bytes = serde_json::to_vec_pretty(value)?;
    write_atomic(path, &bytes)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads and parses a JSON file, reporting parse failures with line and
/// column.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Domain(format!(
            "{}: parse error at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_and_read_back() {
        let dir = std::env::temp_dir().join(format!("sogkit-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.json");
        let g = Graph::from_edges([("a", "b")]);
        write_json_atomic(&path, &g).unwrap();
        let back: Graph = read_json(&path).unwrap();
        assert_eq!(back, g);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn parse_error_reports_position() {
        let dir = std::env::temp_dir().join(format!("sogkit-io-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.json");
        std::fs::write(&path, "{\n  \"vertices\": [,]\n}").unwrap();
        let err = read_json::<Graph>(&path).unwrap_err();
        assert!(err.to_string().contains("line 2"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
