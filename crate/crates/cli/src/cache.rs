//! Content-addressed JSON cache; writes go through a temp file and a rename.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Returns the cached value for `key`, computing and storing it on a miss.
/// With no directory the value is always computed.
pub fn cached<K, T, F>(dir: Option<&Path>, kind: &str, key: &K, compute: F) -> Result<(T, bool)>
where
    K: Serialize,
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> Result<T>,
{
    let Some(dir) = dir else {
        return Ok((compute()?, false));
    };
    let material = serde_json::to_vec(&(kind, env!("CARGO_PKG_VERSION"), key))?;
    let digest = hex::encode(Sha256::digest(&material));
    let path = dir.join(format!("{kind}-{digest}.json"));
    if let Ok(bytes) = fs::read(&path) {
        if let Ok(v) = serde_json::from_slice(&bytes) {
            return Ok((v, true));
        }
    }
    let value = compute()?;
    fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&serde_json::to_vec(&value)?)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| e.error).with_context(|| format!("writing {}", path.display()))?;
    Ok((value, false))
}
