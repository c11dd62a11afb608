//! On-disk cache for sequence terms, keyed by a content hash of the
//! presentation and the index. Entries carry their own hash so a
//! corrupted file is detected and silently recomputed. An unusable
//! directory downgrades to uncached operation with a warning.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::Digest;

use crate::ideal::MonomialIdeal;

pub const ENV_VAR: &str = "NEWTON_LCT_CACHE";

#[derive(Serialize, Deserialize)]
struct Entry {
    /// hex sha-256 of `payload`
    sha256: String,
    /// JSON-serialized ideal
    payload: String,
}

fn hex_sha256(bytes: &[u8]) -> String {
    let mut h = sha2::Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

pub struct TermCache {
    dir: Option<PathBuf>,
}

impl TermCache {
    /// `dir` from a flag, else the NEWTON_LCT_CACHE variable, else
    /// disabled. A directory that cannot be created or written is
    /// reported once and ignored.
    pub fn new(dir: Option<PathBuf>) -> Self {
        let dir = dir.or_else(|| std::env::var_os(ENV_VAR).map(PathBuf::from));
        let dir = dir.and_then(|d| {
            if let Err(e) = std::fs::create_dir_all(&d) {
                eprintln!(
                    "warning: cache directory {} unusable ({e}); proceeding uncached",
                    d.display()
                );
                return None;
            }
            let probe = d.join(".write-probe");
            match std::fs::write(&probe, b"ok") {
                Ok(()) => {
                    let _ = std::fs::remove_file(&probe);
                    Some(d)
                }
                Err(e) => {
                    eprintln!(
                        "warning: cache directory {} not writable ({e}); proceeding uncached",
                        d.display()
                    );
                    None
                }
            }
        });
        TermCache { dir }
    }

    pub fn disabled() -> Self {
        TermCache { dir: None }
    }

    pub fn enabled(&self) -> bool {
        self.dir.is_some()
    }

    /// cache key for term `j` of a presentation described by
    /// `presentation_json` (any stable serialization of the presentation)
    pub fn key(presentation_json: &str, j: u64) -> String {
        hex_sha256(format!("{presentation_json}#{j}").as_bytes())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get(&self, key: &str) -> Option<MonomialIdeal> {
        let text = std::fs::read_to_string(self.path(key)?).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if hex_sha256(entry.payload.as_bytes()) != entry.sha256 {
            return None; // corrupted: caller recomputes and overwrites
        }
        serde_json::from_str(&entry.payload).ok()
    }

    pub fn put(&self, key: &str, ideal: &MonomialIdeal) {
        let Some(path) = self.path(key) else { return };
        let payload = serde_json::to_string(ideal).expect("ideals always serialize");
        let entry = Entry { sha256: hex_sha256(payload.as_bytes()), payload };
        if let Err(e) = std::fs::write(&path, serde_json::to_string(&entry).unwrap()) {
            eprintln!("warning: cache write to {} failed ({e})", path.display());
        }
    }
}

/// Convenience used by tests: corrupt an entry on disk.
pub fn corrupt_entry(dir: &Path, key: &str) -> std::io::Result<()> {
    let path = dir.join(format!("{key}.json"));
    let mut bytes = std::fs::read(&path)?;
    if let Some(b) = bytes.iter_mut().rfind(|b| b.is_ascii_digit()) {
        *b = if *b == b'0' { b'1' } else { b'0' };
    }
    std::fs::write(&path, bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal() -> MonomialIdeal {
        MonomialIdeal::from_integer_rows(2, &[&[2, 0], &[0, 3]]).unwrap()
    }

    #[test]
    fn store_and_retrieve() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = TermCache::new(Some(tmp.path().to_path_buf()));
        assert!(cache.enabled());
        let key = TermCache::key("presentation", 3);
        assert!(cache.get(&key).is_none());
        cache.put(&key, &ideal());
        assert_eq!(cache.get(&key).unwrap(), ideal());
    }

    #[test]
    fn corruption_is_detected() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = TermCache::new(Some(tmp.path().to_path_buf()));
        let key = TermCache::key("presentation", 4);
        cache.put(&key, &ideal());
        corrupt_entry(tmp.path(), &key).unwrap();
        assert!(cache.get(&key).is_none());
        // recompute-and-overwrite restores the entry
        cache.put(&key, &ideal());
        assert_eq!(cache.get(&key).unwrap(), ideal());
    }

    #[test]
    fn keys_separate_presentations_and_indices() {
        let k1 = TermCache::key("a", 1);
        let k2 = TermCache::key("a", 2);
        let k3 = TermCache::key("b", 1);
        assert_ne!(k1, k2);
        assert_ne!(k1, k3);
    }

    #[test]
    fn unusable_dir_degrades_gracefully() {
        let cache = TermCache::new(Some(PathBuf::from("/proc/definitely/not/writable")));
        assert!(!cache.enabled());
        let key = TermCache::key("x", 1);
        cache.put(&key, &ideal()); // no panic
        assert!(cache.get(&key).is_none());
    }
}
