//! Content-addressed result cache: an in-process map in front of an optional
//! directory of `<hash>.json` files.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub struct Cache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, String>>,
}

impl Cache {
    pub fn in_memory() -> Self {
        Cache { dir: None, memory: Mutex::new(HashMap::new()) }
    }

    pub fn persistent(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Config(format!("cache {}: {e}", dir.display())))?;
        Ok(Cache { dir: Some(dir), memory: Mutex::new(HashMap::new()) })
    }

    /// Hex SHA-256 of the canonical job text.
    pub fn key(canonical_job: &str) -> String {
        hex::encode(Sha256::digest(canonical_job.as_bytes()))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(&key[..2]).join(format!("{key}.json")))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        if let Some(v) = self.memory.lock().unwrap().get(key) {
            return Some(v.clone());
        }
        let text = fs::read_to_string(self.path(key)?).ok()?;
        self.memory.lock().unwrap().insert(key.to_string(), text.clone());
        Some(text)
    }

    /// Stores `value`; files are written to a temporary name and renamed so
    /// concurrent readers never observe a partial entry.
    pub fn put(&self, key: &str, value: &str) -> Result<()> {
        self.memory.lock().unwrap().insert(key.to_string(), value.to_string());
        let Some(path) = self.path(key) else { return Ok(()) };
        let io = |e: std::io::Error| Error::Config(format!("cache write {}: {e}", path.display()));
        let parent = path.parent().expect("entry has a parent");
        fs::create_dir_all(parent).map_err(io)?;
        let tmp = parent.join(format!(".{key}.{}.tmp", std::process::id()));
        let mut file = fs::File::create(&tmp).map_err(io)?;
        file.write_all(value.as_bytes()).map_err(io)?;
        file.sync_all().map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let key = Cache::key("job");
        {
            let c = Cache::persistent(dir.path()).unwrap();
            assert!(c.get(&key).is_none());
            c.put(&key, "{\"x\":1}").unwrap();
        }
        let c = Cache::persistent(dir.path()).unwrap();
        assert_eq!(c.get(&key).as_deref(), Some("{\"x\":1}"));
        assert_eq!(key.len(), 64);
    }
}
