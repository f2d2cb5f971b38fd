//! On-disk store for `ν` rows, keyed by `(p, fingerprint of f, e)`.
//!
//! The file is plain text:
//!
//! ```text
//! fptlab-nu-cache 1
//! <p>\t<hash>\t<e>\t<nu>\t<λ_1,…,λ_d>
//! …
//! sha256\t<hex digest of every preceding byte>
//! ```
//!
//! A file that fails to decode is discarded and rebuilt; rows are never
//! reused from a damaged file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::NuEntry;
use crate::algebra::poly::Monomial;
use crate::error::{Error, Result};

pub const CACHE_ENV_VAR: &str = "FPTLAB_CACHE";

const HEADER: &str = "fptlab-nu-cache 1";
const CHECKSUM_TAG: &str = "sha256";

type Key = (u64, String, u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheRecord {
    pub p: u64,
    pub hash: String,
    pub e: u32,
    pub nu: u64,
    pub witness: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CacheStat {
    pub path: Option<String>,
    pub entries: usize,
    pub polynomials: usize,
    pub bytes: u64,
    /// Whether the file on disk was unreadable and has been discarded.
    pub rebuilt: bool,
}

#[derive(Debug, Default)]
pub struct NuCache {
    path: Option<PathBuf>,
    rows: BTreeMap<Key, (u64, Vec<u32>)>,
    rebuilt: bool,
    dirty: bool,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position: line,
        message: message.into(),
    }
}

/// Decodes a cache file. Positions in errors are 1-based line numbers.
pub fn decode(bytes: &[u8]) -> Result<Vec<CacheRecord>> {
    let text = std::str::from_utf8(bytes).map_err(|_| parse_err(0, "cache is not UTF-8"))?;
    let body_end = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map(|i| i + 1)
        .ok_or_else(|| parse_err(1, "missing checksum line"))?;
    let (body, trailer) = text.split_at(body_end);
    let digest = trailer
        .trim_end_matches('\n')
        .strip_prefix(CHECKSUM_TAG)
        .and_then(|s| s.strip_prefix('\t'))
        .ok_or_else(|| parse_err(0, "malformed checksum line"))?;
    if digest != hex::encode(Sha256::digest(body.as_bytes())) {
        return Err(parse_err(0, "checksum mismatch"));
    }
    let mut lines = body.lines();
    if lines.next() != Some(HEADER) {
        return Err(parse_err(1, "unknown cache header"));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        let fields: Vec<&str> = line.split('\t').collect();
        let [p, hash, e, nu, witness] = fields[..] else {
            return Err(parse_err(n, "expected 5 tab-separated fields"));
        };
        let num = |s: &str| s.parse::<u64>().map_err(|_| parse_err(n, format!("bad number {s:?}")));
        if hash.is_empty() || !hash.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(parse_err(n, "bad hash"));
        }
        let witness = if witness.is_empty() {
            Vec::new()
        } else {
            witness
                .split(',')
                .map(|s| s.parse::<u32>().map_err(|_| parse_err(n, "bad exponent")))
                .collect::<Result<Vec<_>>>()?
        };
        let e = u32::try_from(num(e)?).map_err(|_| parse_err(n, "level out of range"))?;
        if e == 0 {
            return Err(parse_err(n, "level must be at least 1"));
        }
        out.push(CacheRecord {
            p: num(p)?,
            hash: hash.to_string(),
            e,
            nu: num(nu)?,
            witness,
        });
    }
    Ok(out)
}

/// Encodes records in the format read by [`decode`].
pub fn encode(records: &[CacheRecord]) -> String {
    let mut body = format!("{HEADER}\n");
    for r in records {
        let w: Vec<String> = r.witness.iter().map(u32::to_string).collect();
        body.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.p, r.hash, r.e, r.nu, w.join(",")));
    }
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    body.push_str(&format!("{CHECKSUM_TAG}\t{digest}\n"));
    body
}

/// `$FPTLAB_CACHE`, else `$XDG_DATA_HOME/fptlab/nu-cache.tsv`, else
/// `~/.local/share/fptlab/nu-cache.tsv`.
pub fn default_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(CACHE_ENV_VAR).filter(|s| !s.is_empty()) {
        return Some(PathBuf::from(p));
    }
    let base = std::env::var_os("XDG_DATA_HOME")
        .filter(|s| !s.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".local/share")))?;
    Some(base.join("fptlab").join("nu-cache.tsv"))
}

impl NuCache {
    /// An empty cache that is never written.
    pub fn in_memory() -> Self {
        NuCache::default()
    }

    /// Loads `path`; a missing file gives an empty cache, a damaged one is
    /// dropped and flagged as rebuilt.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = NuCache {
            path: Some(path.clone()),
            ..NuCache::default()
        };
        match fs::read(&path) {
            Ok(bytes) => match decode(&bytes) {
                Ok(records) => {
                    for r in records {
                        cache.rows.insert((r.p, r.hash, r.e), (r.nu, r.witness));
                    }
                }
                Err(_) => {
                    cache.rebuilt = true;
                    cache.dirty = true;
                }
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn was_rebuilt(&self) -> bool {
        self.rebuilt
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, p: u64, hash: &str, e: u32) -> Option<NuEntry> {
        self.rows
            .get(&(p, hash.to_string(), e))
            .map(|(nu, w)| NuEntry {
                e,
                nu: *nu,
                witness: Monomial::new(w.clone()),
            })
    }

    /// Rows `1, 2, …` for one polynomial, stopping at the first gap.
    pub fn levels(&self, p: u64, hash: &str) -> Vec<NuEntry> {
        let mut out = Vec::new();
        let mut e = 1;
        while let Some(row) = self.get(p, hash, e) {
            out.push(row);
            e += 1;
        }
        out
    }

    pub fn insert(&mut self, p: u64, hash: &str, row: NuEntry) {
        let value = (row.nu, row.witness.exponents().to_vec());
        let key = (p, hash.to_string(), row.e);
        if self.rows.get(&key) != Some(&value) {
            self.rows.insert(key, value);
            self.dirty = true;
        }
    }

    pub fn clear(&mut self) -> Result<()> {
        self.rows.clear();
        self.dirty = false;
        if let Some(path) = &self.path {
            match fs::remove_file(path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(e) => return Err(e.into()),
            }
        }
        Ok(())
    }

    pub fn records(&self) -> Vec<CacheRecord> {
        self.rows
            .iter()
            .map(|((p, hash, e), (nu, w))| CacheRecord {
                p: *p,
                hash: hash.clone(),
                e: *e,
                nu: *nu,
                witness: w.clone(),
            })
            .collect()
    }

    /// Writes the cache atomically (temporary file, then rename).
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = self.path.clone() else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("nu-cache"),
            std::process::id()
        ));
        {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(encode(&self.records()).as_bytes())?;
            file.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        self.dirty = false;
        Ok(())
    }

    pub fn stat(&self) -> CacheStat {
        let bytes = self
            .path
            .as_ref()
            .and_then(|p| fs::metadata(p).ok())
            .map_or(0, |m| m.len());
        let mut polys: Vec<(&u64, &String)> = self.rows.keys().map(|(p, h, _)| (p, h)).collect();
        polys.dedup();
        CacheStat {
            path: self.path.as_ref().map(|p| p.display().to_string()),
            entries: self.rows.len(),
            polynomials: polys.len(),
            bytes,
            rebuilt: self.rebuilt,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<CacheRecord> {
        vec![
            CacheRecord {
                p: 3,
                hash: "ab12".into(),
                e: 1,
                nu: 0,
                witness: vec![0, 0],
            },
            CacheRecord {
                p: 3,
                hash: "ab12".into(),
                e: 2,
                nu: 1,
                witness: vec![4, 3],
            },
        ]
    }

    #[test]
    fn round_trip() {
        let text = encode(&sample());
        assert!(text.starts_with("fptlab-nu-cache 1\n"));
        assert_eq!(decode(text.as_bytes()).unwrap(), sample());
    }

    #[test]
    fn any_flipped_byte_is_rejected() {
        let text = encode(&sample()).into_bytes();
        for i in 0..text.len() - 1 {
            let mut bad = text.clone();
            bad[i] ^= 0x01;
            if bad[i] == b'\n' || text[i] == b'\n' {
                continue;
            }
            assert!(decode(&bad).is_err(), "byte {i}");
        }
        assert!(decode(b"").is_err());
        assert!(decode(b"fptlab-nu-cache 1\n").is_err());
    }

    #[test]
    fn corrupted_file_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        let mut cache = NuCache::open(&path).unwrap();
        for r in sample() {
            cache.insert(
                r.p,
                &r.hash,
                NuEntry {
                    e: r.e,
                    nu: r.nu,
                    witness: Monomial::new(r.witness),
                },
            );
        }
        cache.save().unwrap();
        let reopened = NuCache::open(&path).unwrap();
        assert_eq!(reopened.levels(3, "ab12").len(), 2);
        assert!(!reopened.was_rebuilt());

        let mut bytes = fs::read(&path).unwrap();
        let pos = bytes.iter().position(|&b| b == b'\t').unwrap() + 1;
        bytes[pos] = b'f';
        fs::write(&path, bytes).unwrap();
        let mut damaged = NuCache::open(&path).unwrap();
        assert!(damaged.was_rebuilt());
        assert!(damaged.is_empty());
        damaged.save().unwrap();
        assert!(decode(&fs::read(&path).unwrap()).unwrap().is_empty());

        damaged.clear().unwrap();
        assert!(!path.exists());
    }
}
