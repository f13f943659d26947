//! Content-addressed result cache. Keys are SHA-256 digests of a canonical
//! JSON description of the request; values are the JSON outputs.

use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "QEHRHART_CACHE";

pub struct Cache {
    dir: PathBuf,
}

/// Serialize with object keys sorted at every level.
pub fn canonical(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut keys: Vec<&String> = m.keys().collect();
                keys.sort();
                Value::Object(keys.into_iter().map(|k| (k.clone(), sort(&m[k]))).collect())
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            x => x.clone(),
        }
    }
    serde_json::to_string(&sort(v)).expect("json")
}

pub fn key(request: &Value) -> String {
    hex::encode(Sha256::digest(canonical(request).as_bytes()))
}

/// Write via a temporary file in the same directory and rename into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

impl Cache {
    /// The flag wins over the environment; neither means no cache.
    pub fn from_config(flag: Option<&Path>) -> Option<Cache> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(|dir| Cache { dir })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, request: &Value) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(&key(request))).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, request: &Value, result: &Value) -> std::io::Result<()> {
        write_atomic(&self.path(&key(request)), &serde_json::to_string(result).expect("json"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn key_ignores_field_order() {
        let a = json!({"a": 1, "b": {"y": [1, 2], "x": null}});
        let b = json!({"b": {"x": null, "y": [1, 2]}, "a": 1});
        assert_eq!(key(&a), key(&b));
        assert_ne!(key(&a), key(&json!({"a": 2})));
        assert_eq!(key(&a).len(), 64);
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::from_config(Some(dir.path())).unwrap();
        let req = json!({"cmd": "compute"});
        assert!(c.get(&req).is_none());
        c.put(&req, &json!({"T": 3})).unwrap();
        assert_eq!(c.get(&req), Some(json!({"T": 3})));
    }
}
