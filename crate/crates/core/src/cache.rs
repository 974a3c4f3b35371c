//! Content-addressed persistence of built modules. Each entry is a JSON
//! payload `<key>.json` next to its SHA-256 digest `<key>.sha256`.

use crate::cartan::{AffineType, CartanData};
use crate::fusion::{KRModule, Provenance};
use crate::linalg::SVec;
use crate::repcore::{Gram, GramBlock, Rep};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

const FORMAT: &str = "krmodule-v1";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io error at {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("corrupt cache entry {0}: {1}")]
    Corrupt(PathBuf, String),
}

#[derive(Serialize, Deserialize)]
struct Entry {
    format: String,
    key: String,
    #[serde(rename = "type")]
    ty: AffineType,
    level: i64,
    provenance: Provenance,
    table_hash: String,
    rep: serde_json::Value,
    gram: Vec<GramBlock>,
    v: SVec,
}

pub struct Cache {
    dir: PathBuf,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Key over (format, type, ℓ, provenance, Cartan table hash), so a change
/// to the tables invalidates every entry built from them.
pub fn key(ty: AffineType, l: i64, prov: Provenance) -> String {
    let h = CartanData::new(ty).table_hash();
    let prov = serde_json::to_string(&prov).unwrap();
    let s = sha256_hex(format!("{FORMAT}|{}|{l}|{}|{h}", ty.cli_name(), prov.trim_matches('"')).as_bytes());
    format!("{}-l{l}-{}", ty.cli_name(), &s[..16])
}

fn gram_from_blocks(n: usize, blocks: Vec<GramBlock>) -> Result<Gram, String> {
    let mut loc = vec![(usize::MAX, 0); n];
    for (bi, b) in blocks.iter().enumerate() {
        if b.m.len() != b.idx.len() || b.m.iter().any(|r| r.len() != b.idx.len()) {
            return Err(format!("gram block {bi} is not square"));
        }
        for (ki, &i) in b.idx.iter().enumerate() {
            if i >= n || loc[i].0 != usize::MAX {
                return Err(format!("gram index {i} out of range or repeated"));
            }
            loc[i] = (bi, ki);
        }
    }
    if loc.iter().any(|l| l.0 == usize::MAX) {
        return Err("gram blocks do not cover the basis".into());
    }
    Ok(Gram { loc, blocks })
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Cache, CacheError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| CacheError::Io(dir.clone(), e))?;
        Ok(Cache { dir })
    }

    pub fn paths(&self, key: &str) -> (PathBuf, PathBuf) {
        (self.dir.join(format!("{key}.json")), self.dir.join(format!("{key}.sha256")))
    }

    pub fn store(&self, m: &KRModule) -> Result<PathBuf, CacheError> {
        let ty = m.rep.ty;
        let key = key(ty, m.l, m.provenance);
        let entry = Entry {
            format: FORMAT.into(),
            key: key.clone(),
            ty,
            level: m.l,
            provenance: m.provenance,
            table_hash: CartanData::new(ty).table_hash(),
            rep: serde_json::from_str(&m.rep.to_json()).expect("rep JSON parses"),
            gram: m.gram.blocks.clone(),
            v: m.v.clone(),
        };
        let payload = serde_json::to_string(&entry).expect("entry serializes");
        let (p, s) = self.paths(&key);
        let write = |path: &PathBuf, bytes: &[u8]| -> Result<(), CacheError> {
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, bytes).map_err(|e| CacheError::Io(tmp.clone(), e))?;
            fs::rename(&tmp, path).map_err(|e| CacheError::Io(path.clone(), e))
        };
        write(&p, payload.as_bytes())?;
        write(&s, sha256_hex(payload.as_bytes()).as_bytes())?;
        Ok(p)
    }

    /// None if absent; an error if present but failing its checksum or
    /// not describing the requested module.
    pub fn load(&self, ty: AffineType, l: i64, prov: Provenance) -> Result<Option<KRModule>, CacheError> {
        let key = key(ty, l, prov);
        let (p, s) = self.paths(&key);
        if !p.exists() && !s.exists() {
            return Ok(None);
        }
        let corrupt = |msg: String| CacheError::Corrupt(p.clone(), msg);
        let payload = fs::read(&p).map_err(|e| CacheError::Io(p.clone(), e))?;
        let sum = fs::read_to_string(&s).map_err(|e| CacheError::Io(s.clone(), e))?;
        if sum.trim() != sha256_hex(&payload) {
            return Err(corrupt("checksum mismatch".into()));
        }
        let entry: Entry = serde_json::from_slice(&payload).map_err(|e| corrupt(e.to_string()))?;
        if entry.format != FORMAT || entry.key != key || entry.ty != ty || entry.level != l || entry.provenance != prov {
            return Err(corrupt("entry header does not match its key".into()));
        }
        let rep = Rep::from_json(&entry.rep.to_string()).map_err(|e| corrupt(e.to_string()))?;
        let gram = gram_from_blocks(rep.dim(), entry.gram).map_err(corrupt)?;
        if entry.v.0.iter().any(|(k, _)| *k >= rep.dim()) {
            return Err(corrupt("v out of range".into()));
        }
        Ok(Some(KRModule { rep, v: entry.v, gram, l, provenance: prov }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::kr1;

    fn tmpdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("krcache-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip_and_corruption() {
        let d = tmpdir("rt");
        let c = Cache::open(&d).unwrap();
        let w = kr1(AffineType::G2_1).unwrap();
        assert!(c.load(AffineType::G2_1, 1, Provenance::Fused).unwrap().is_none());
        let p = c.store(&w).unwrap();
        let back = c.load(AffineType::G2_1, 1, w.provenance).unwrap().unwrap();
        assert_eq!(back.rep.to_json(), w.rep.to_json());
        assert_eq!(back.gram, w.gram);
        assert_eq!(back.v, w.v);
        let mut bytes = fs::read(&p).unwrap();
        let k = bytes.iter().position(|b| *b == b'1').unwrap();
        bytes[k] = b'2';
        fs::write(&p, bytes).unwrap();
        assert!(matches!(c.load(AffineType::G2_1, 1, w.provenance), Err(CacheError::Corrupt(..))));
        fs::remove_dir_all(&d).unwrap();
    }

    #[test]
    fn keys_separate_types_levels_and_models() {
        let a = key(AffineType::G2_1, 2, Provenance::Fused);
        assert_ne!(a, key(AffineType::D4_3, 2, Provenance::Fused));
        assert_ne!(a, key(AffineType::G2_1, 3, Provenance::Fused));
        assert_ne!(a, key(AffineType::G2_1, 2, Provenance::Recursive));
        assert_eq!(a, key(AffineType::G2_1, 2, Provenance::Fused));
    }
}
