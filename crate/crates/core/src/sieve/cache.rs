//! On-disk cache of sieved segments.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic   8 bytes  "ADLSIEVE"
//! version u32
//! lo      u64
//! hi      u64
//! mu      ceil(len/4) bytes, 2 bits per n (00 = 0, 01 = +1, 10 = -1), low bits first
//! omega   len bytes
//! lpf     len * 8 bytes
//! sha256  32 bytes over everything above
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{build_segment, FactorTable, PrimeList, SieveError};

pub const CACHE_MAGIC: &[u8; 8] = b"ADLSIEVE";
pub const CACHE_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 8 + 8;
const DIGEST_LEN: usize = 32;

pub fn encode_table(t: &FactorTable) -> Vec<u8> {
    let len = t.len();
    let mut out = Vec::with_capacity(HEADER_LEN + len.div_ceil(4) + 9 * len + DIGEST_LEN);
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&t.lo.to_le_bytes());
    out.extend_from_slice(&t.hi.to_le_bytes());
    let mut packed = vec![0u8; len.div_ceil(4)];
    for (i, &m) in t.mu.iter().enumerate() {
        let code = match m {
            0 => 0b00,
            1 => 0b01,
            _ => 0b10,
        };
        packed[i / 4] |= code << (2 * (i % 4));
    }
    out.extend_from_slice(&packed);
    out.extend_from_slice(&t.omega);
    for &p in &t.lpf {
        out.extend_from_slice(&p.to_le_bytes());
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    out
}

fn read_u64(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

/// Decode a cache file. `path` is only used in error messages.
pub fn decode_table(bytes: &[u8], path: &str) -> Result<FactorTable, SieveError> {
    let bad = |reason: &str| SieveError::Cache {
        path: path.to_string(),
        reason: reason.to_string(),
    };
    if bytes.len() < HEADER_LEN + DIGEST_LEN {
        return Err(bad("file truncated"));
    }
    if &bytes[..8] != CACHE_MAGIC {
        return Err(bad("bad magic"));
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(SieveError::Checksum {
            path: path.to_string(),
        });
    }
    let version = u32::from_le_bytes(body[8..12].try_into().expect("4 bytes"));
    if version != CACHE_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let lo = read_u64(body, 12);
    let hi = read_u64(body, 20);
    if lo < 1 || hi <= lo {
        return Err(bad("invalid range in header"));
    }
    let len = (hi - lo) as usize;
    let packed_len = len.div_ceil(4);
    if body.len() != HEADER_LEN + packed_len + 9 * len {
        return Err(bad("length does not match header range"));
    }
    let mut at = HEADER_LEN;
    let packed = &body[at..at + packed_len];
    at += packed_len;
    let mut mu = Vec::with_capacity(len);
    for i in 0..len {
        mu.push(match (packed[i / 4] >> (2 * (i % 4))) & 0b11 {
            0b00 => 0,
            0b01 => 1,
            0b10 => -1,
            _ => return Err(bad("invalid mu code")),
        });
    }
    let omega = body[at..at + len].to_vec();
    at += len;
    let lpf = (0..len).map(|i| read_u64(body, at + 8 * i)).collect();
    Ok(FactorTable {
        lo,
        hi,
        mu,
        omega,
        lpf,
    })
}

/// Directory of cached segments, one file per `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveCache {
    dir: PathBuf,
}

impl SieveCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `ADL_CACHE_DIR` when set, else `None`.
    pub fn from_env() -> Option<Self> {
        std::env::var_os("ADL_CACHE_DIR").map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, lo: u64, hi: u64) -> PathBuf {
        self.dir.join(format!("sieve-{lo}-{hi}.adls"))
    }

    /// Cached table for `[lo, hi)` if a file exists.
    pub fn load(&self, lo: u64, hi: u64) -> Result<Option<FactorTable>, SieveError> {
        let path = self.path_for(lo, hi);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let name = path.display().to_string();
        let t = decode_table(&bytes, &name)?;
        if t.lo != lo || t.hi != hi {
            return Err(SieveError::Cache {
                path: name,
                reason: format!("holds [{}, {}), expected [{lo}, {hi})", t.lo, t.hi),
            });
        }
        Ok(Some(t))
    }

    pub fn store(&self, t: &FactorTable) -> Result<PathBuf, SieveError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(t.lo, t.hi);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, encode_table(t))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn get_or_build(
        &self,
        lo: u64,
        hi: u64,
        base: &PrimeList,
    ) -> Result<FactorTable, SieveError> {
        if let Some(t) = self.load(lo, hi)? {
            return Ok(t);
        }
        let t = build_segment(lo, hi, base)?;
        self.store(&t)?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::super::primes_up_to;
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let base = primes_up_to(100.0);
        let t = build_segment(1, 5000, &base).unwrap();
        let bytes = encode_table(&t);
        assert_eq!(decode_table(&bytes, "mem").unwrap(), t);

        let mut flipped = bytes.clone();
        flipped[HEADER_LEN + 3] ^= 0x40;
        match decode_table(&flipped, "seg.adls") {
            Err(SieveError::Checksum { path }) => assert_eq!(path, "seg.adls"),
            other => panic!("expected checksum error, got {other:?}"),
        }
        assert!(decode_table(&bytes[..20], "x").is_err());
    }

    #[test]
    fn directory_cache_reuses_files() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SieveCache::new(dir.path());
        let base = primes_up_to(100.0);
        let a = cache.get_or_build(100, 3000, &base).unwrap();
        assert!(cache.path_for(100, 3000).exists());
        let b = cache.load(100, 3000).unwrap().unwrap();
        assert_eq!(a, b);
    }
}
