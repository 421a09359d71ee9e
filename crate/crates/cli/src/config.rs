//! Optional configuration file, TOML with flat keys:
//!
//! ```toml
//! type = "B"
//! rank = 2
//! cache-path = "/tmp/qgw-cache"
//! pbw-height = 4
//! soibel-height = 4
//! main-words = 2
//! main-pbw = 1
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Config {
    #[serde(rename = "type")]
    pub lie_type: Option<String>,
    pub rank: Option<usize>,
    pub cache_path: Option<PathBuf>,
    pub pbw_height: Option<i64>,
    pub jantz_height: Option<i64>,
    pub soibel_height: Option<i64>,
    pub hopf_samples: Option<usize>,
    pub seed: Option<u64>,
    /// Word length for the kernel check on A1/A2.
    pub main_words: Option<usize>,
    /// PBW degree for the kernel check on A1/A2.
    pub main_pbw: Option<u32>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
        Self::parse(&text).map_err(|e| format!("{}: {}", path.display(), e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_keys() {
        let c = Config::parse("type = \"C\"\nrank = 3\ncache-path = \"/tmp/x\"\nmain-pbw = 1\n").unwrap();
        assert_eq!(c.lie_type.as_deref(), Some("C"));
        assert_eq!(c.rank, Some(3));
        assert_eq!(c.cache_path, Some(PathBuf::from("/tmp/x")));
        assert_eq!(c.main_pbw, Some(1));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Config::parse("colour = 1").is_err());
    }
}
