use std::fs;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheState {
    Off,
    Hit,
    Miss,
    Bypass,
}

/// Results keyed by the SHA-256 of a canonical description of the computation.
pub struct Cache {
    dir: Option<PathBuf>,
    bypass: bool,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>, bypass: bool) -> Self {
        Cache { dir, bypass }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        let digest = Sha256::digest(key.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.dir.as_ref().map(|d| d.join(format!("{hex}.json")))
    }

    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<(T, CacheState), CliError>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, CliError>,
    {
        let Some(path) = self.path(key) else {
            return Ok((compute()?, CacheState::Off));
        };
        if !self.bypass {
            if let Ok(text) = fs::read_to_string(&path) {
                // an unreadable entry is treated as a miss and overwritten
                if let Ok(v) = serde_json::from_str(&text) {
                    return Ok((v, CacheState::Hit));
                }
            }
        }
        let v = compute()?;
        let dir = path.parent().expect("cache file has a parent");
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let text = serde_json::to_string(&v).expect("cache value serializes");
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok((v, if self.bypass { CacheState::Bypass } else { CacheState::Miss }))
    }
}
