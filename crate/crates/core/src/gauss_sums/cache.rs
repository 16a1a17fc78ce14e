//! Persistent store of normalized prime Gauss sums.
//!
//! One text file per cache directory. The first line is `# quartic-g4-cache v1`;
//! each further line is `a b re im err flags crc32` where `re`, `im`, `err`
//! are IEEE-754 bit patterns in hex, `flags` is two hex digits and `crc32`
//! covers everything before it.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_complex::Complex64;

use super::complex::ComplexVal;
use crate::error::{Error, Result};
use crate::gaussint::GaussInt;
use crate::symbols::{quartic_symbol, SymbolValue};

pub const CACHE_FILE: &str = "g4_cache.txt";
pub const CACHE_HEADER: &str = "# quartic-g4-cache v1";

/// Cached `g̃₄(π)` with the identity checks it passed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussSumRecord {
    pub pi: GaussInt,
    pub g4_normalized: ComplexVal,
    pub minus_one_symbol: SymbolValue,
    pub checks: u8,
}

impl GaussSumRecord {
    pub const FOURTH_POWER: u8 = 0x01;
    pub const SQUARE_POWER: u8 = 0x02;
    pub const SQRT_CANCEL: u8 = 0x04;
    pub const ALL_CHECKS: u8 = 0x07;

    /// Build a record from the unnormalized `g₄(π)` of a degree-one prime,
    /// running the fourth-power, square and modulus checks.
    pub fn from_value(pi: GaussInt, g4: ComplexVal) -> Result<Self> {
        let minus_one_symbol = quartic_symbol(GaussInt::new(-1, 0), pi)?;
        let checks = super::checks::prime_check_flags(pi, g4, minus_one_symbol);
        let g4_normalized = g4.scale(1.0 / (pi.norm() as f64).sqrt());
        Ok(GaussSumRecord { pi, g4_normalized, minus_one_symbol, checks })
    }

    fn body(&self) -> String {
        format!(
            "{} {} {:016x} {:016x} {:016x} {:02x}",
            self.pi.re,
            self.pi.im,
            self.g4_normalized.value.re.to_bits(),
            self.g4_normalized.value.im.to_bits(),
            self.g4_normalized.err.to_bits(),
            self.checks
        )
    }

    pub fn to_line(&self) -> String {
        let body = self.body();
        format!("{body} {:08x}", crc32fast::hash(body.as_bytes()))
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let bad = |what: &str| Error::Cache(format!("{what} in line '{line}'"));
        let (body, crc) = line.rsplit_once(' ').ok_or_else(|| bad("missing checksum"))?;
        let crc = u32::from_str_radix(crc, 16).map_err(|_| bad("malformed checksum"))?;
        if crc32fast::hash(body.as_bytes()) != crc {
            return Err(bad("checksum mismatch"));
        }
        let f: Vec<&str> = body.split(' ').collect();
        if f.len() != 6 {
            return Err(bad("wrong field count"));
        }
        let int = |s: &str| s.parse::<i64>().map_err(|_| bad("malformed integer"));
        let bits = |s: &str| u64::from_str_radix(s, 16).map(f64::from_bits).map_err(|_| bad("malformed float"));
        let pi = GaussInt::new(int(f[0])?, int(f[1])?);
        if !pi.is_primary() {
            return Err(bad("non-primary prime"));
        }
        let g = ComplexVal::new(Complex64::new(bits(f[2])?, bits(f[3])?), bits(f[4])?);
        let checks = u8::from_str_radix(f[5], 16).map_err(|_| bad("malformed flags"))?;
        let minus_one_symbol = quartic_symbol(GaussInt::new(-1, 0), pi)?;
        Ok(GaussSumRecord { pi, g4_normalized: g, minus_one_symbol, checks })
    }
}

/// Outcome of scanning a cache file.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CacheReport {
    pub records: usize,
    pub corrupt: usize,
    pub duplicates: usize,
    pub max_norm: u128,
}

/// Append-only cache with concurrent reads and serialized writes.
pub struct GaussSumCache {
    path: PathBuf,
    map: RwLock<HashMap<GaussInt, GaussSumRecord>>,
    writer: Mutex<Option<BufWriter<File>>>,
    corrupt: usize,
}

impl GaussSumCache {
    /// Open (creating if needed) the cache in `dir`.
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut map = HashMap::new();
        let mut corrupt = 0;
        if path.exists() {
            let (records, report) = read_records(&path)?;
            corrupt = report.corrupt;
            for r in records {
                map.insert(r.pi, r);
            }
        } else {
            let mut f = File::create(&path)?;
            writeln!(f, "{CACHE_HEADER}")?;
        }
        Ok(GaussSumCache { path, map: RwLock::new(map), writer: Mutex::new(None), corrupt })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lines rejected when the cache was opened.
    pub fn corrupt_on_open(&self) -> usize {
        self.corrupt
    }

    pub fn get(&self, pi: GaussInt) -> Option<GaussSumRecord> {
        self.map.read().unwrap().get(&pi).copied()
    }

    /// Store a record; records missing any check flag are refused.
    pub fn put(&self, record: &GaussSumRecord) -> Result<()> {
        if record.checks != GaussSumRecord::ALL_CHECKS {
            return Err(Error::Cache(format!("record for {} has check flags {:02x}", record.pi, record.checks)));
        }
        {
            let mut map = self.map.write().unwrap();
            if map.contains_key(&record.pi) {
                return Ok(());
            }
            map.insert(record.pi, *record);
        }
        let mut w = self.writer.lock().unwrap();
        if w.is_none() {
            let f = OpenOptions::new().append(true).open(&self.path)?;
            *w = Some(BufWriter::new(f));
        }
        let out = w.as_mut().unwrap();
        writeln!(out, "{}", record.to_line())?;
        Ok(())
    }

    pub fn flush(&self) -> Result<()> {
        if let Some(w) = self.writer.lock().unwrap().as_mut() {
            w.flush()?;
        }
        Ok(())
    }

    /// Rewrite the file with one valid record per prime, sorted by norm.
    pub fn compact(&self) -> Result<CacheReport> {
        self.flush()?;
        let map = self.map.read().unwrap();
        let mut recs: Vec<&GaussSumRecord> = map.values().collect();
        recs.sort_by_key(|r| r.pi.sort_key());
        let tmp = self.path.with_extension("tmp");
        {
            let mut f = BufWriter::new(File::create(&tmp)?);
            writeln!(f, "{CACHE_HEADER}")?;
            for r in &recs {
                writeln!(f, "{}", r.to_line())?;
            }
            f.flush()?;
        }
        *self.writer.lock().unwrap() = None;
        fs::rename(&tmp, &self.path)?;
        Ok(CacheReport {
            records: recs.len(),
            corrupt: 0,
            duplicates: 0,
            max_norm: recs.last().map(|r| r.pi.norm()).unwrap_or(0),
        })
    }
}

impl Drop for GaussSumCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

/// Parse a cache file, skipping (and counting) corrupt lines.
pub fn read_records(path: &Path) -> Result<(Vec<GaussSumRecord>, CacheReport)> {
    let f = BufReader::new(File::open(path)?);
    let mut report = CacheReport::default();
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (n, line) in f.lines().enumerate() {
        let line = line?;
        if n == 0 {
            if line.trim() != CACHE_HEADER {
                return Err(Error::Cache(format!("unsupported cache header '{line}'")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        match GaussSumRecord::parse_line(&line) {
            Ok(r) if r.checks == GaussSumRecord::ALL_CHECKS => {
                if !seen.insert(r.pi) {
                    report.duplicates += 1;
                    continue;
                }
                report.max_norm = report.max_norm.max(r.pi.norm());
                out.push(r);
            }
            Ok(r) => {
                log::warn!("cache line {} for {} lacks check flags; ignored", n + 1, r.pi);
                report.corrupt += 1;
            }
            Err(e) => {
                log::warn!("cache line {}: {e}; ignored", n + 1);
                report.corrupt += 1;
            }
        }
    }
    report.records = out.len();
    Ok((out, report))
}

/// Scan a cache directory without loading it into an engine.
pub fn verify_dir(dir: &Path) -> Result<CacheReport> {
    Ok(read_records(&dir.join(CACHE_FILE))?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sums::fast::g4_prime_fast;

    fn record(pi: GaussInt) -> GaussSumRecord {
        GaussSumRecord::from_value(pi, g4_prime_fast(pi).unwrap()).unwrap()
    }

    #[test]
    fn put_get_round_trip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let pi = GaussInt::new(-1, 2);
        let rec = record(pi);
        assert_eq!(rec.checks, GaussSumRecord::ALL_CHECKS);
        {
            let cache = GaussSumCache::open(dir.path()).unwrap();
            assert!(cache.get(pi).is_none());
            cache.put(&rec).unwrap();
            cache.put(&rec).unwrap();
        }
        let cache = GaussSumCache::open(dir.path()).unwrap();
        let back = cache.get(pi).unwrap();
        assert_eq!(back.g4_normalized.value.re.to_bits(), rec.g4_normalized.value.re.to_bits());
        assert_eq!(back.g4_normalized.value.im.to_bits(), rec.g4_normalized.value.im.to_bits());
        assert_eq!(back.g4_normalized.err.to_bits(), rec.g4_normalized.err.to_bits());
        assert_eq!(back.minus_one_symbol, SymbolValue::Unit(2));
        assert_eq!(verify_dir(dir.path()).unwrap().records, 1);
    }

    #[test]
    fn corrupt_line_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let a = record(GaussInt::new(-1, 2));
        let b = record(GaussInt::new(3, 2));
        let mut bad = b.to_line();
        bad.replace_range(0..1, "5");
        fs::write(dir.path().join(CACHE_FILE), format!("{CACHE_HEADER}\n{}\n{bad}\n", a.to_line())).unwrap();
        let cache = GaussSumCache::open(dir.path()).unwrap();
        assert_eq!(cache.corrupt_on_open(), 1);
        assert!(cache.get(GaussInt::new(3, 2)).is_none());
        assert!(cache.get(GaussInt::new(-1, 2)).is_some());
    }

    #[test]
    fn unchecked_records_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GaussSumCache::open(dir.path()).unwrap();
        let mut rec = record(GaussInt::new(-1, 2));
        rec.checks = 0x03;
        assert!(cache.put(&rec).is_err());
    }

    #[test]
    fn compact_keeps_valid_records() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GaussSumCache::open(dir.path()).unwrap();
        for pi in [GaussInt::new(3, 2), GaussInt::new(-1, 2), GaussInt::new(-1, -2)] {
            cache.put(&record(pi)).unwrap();
        }
        let rep = cache.compact().unwrap();
        assert_eq!(rep.records, 3);
        cache.put(&record(GaussInt::new(1, 4))).unwrap();
        drop(cache);
        let (recs, rep) = read_records(&dir.path().join(CACHE_FILE)).unwrap();
        assert_eq!(rep.records, 4);
        assert_eq!(recs[0].pi, GaussInt::new(-1, -2));
    }
}
