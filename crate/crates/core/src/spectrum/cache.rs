use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{strip_cyclotomic, Label, SpectrumEntry, SpectrumKey};
use crate::error::{Error, Result};
use crate::numerics::{
    format_rational, parse_rational, unit_circle_census, AlgebraicReal, RationalInterval,
    UnitCircleCensus,
};

const SCHEMA: u32 = 1;
const LOCK_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: String,
    pub hi: String,
}

/// One line of the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema: u32,
    pub d: u32,
    pub tuple: Vec<u32>,
    pub poly: Vec<String>,
    pub interval: IntervalRecord,
    pub census: UnitCircleCensus,
    pub label: Label,
    #[serde(default)]
    pub ts: u64,
}

impl CacheRecord {
    pub fn from_entry(entry: &SpectrumEntry) -> Self {
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CacheRecord {
            schema: SCHEMA,
            d: entry.key.d(),
            tuple: entry.key.tuple().to_vec(),
            poly: entry
                .key
                .polynomial()
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            interval: IntervalRecord {
                lo: format_rational(entry.value.lo()),
                hi: format_rational(entry.value.hi()),
            },
            census: entry.census,
            label: entry.label,
            ts,
        }
    }

    /// Rebuilds the entry, checking the record against a fresh computation
    /// of the polynomial and its dominant root.
    pub fn to_entry(&self) -> Result<SpectrumEntry> {
        if self.schema != SCHEMA {
            return Err(Error::StoreCorrupt(format!(
                "unknown schema {}",
                self.schema
            )));
        }
        let key = SpectrumKey::new(self.d, self.tuple.clone())
            .map_err(|e| Error::StoreCorrupt(e.to_string()))?;
        let p = key.polynomial();
        let stored: Vec<BigInt> = self
            .poly
            .iter()
            .map(|s| s.parse::<BigInt>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::StoreCorrupt(format!("coefficient: {e}")))?;
        if stored.as_slice() != p.coeffs() {
            return Err(Error::StoreCorrupt(format!(
                "polynomial mismatch for {key}"
            )));
        }
        let lo =
            parse_rational(&self.interval.lo).map_err(|e| Error::StoreCorrupt(e.to_string()))?;
        let hi =
            parse_rational(&self.interval.hi).map_err(|e| Error::StoreCorrupt(e.to_string()))?;
        let interval =
            RationalInterval::new(lo, hi).map_err(|e| Error::StoreCorrupt(e.to_string()))?;
        let value = AlgebraicReal::new(&p, interval.clone())
            .map_err(|e| Error::StoreCorrupt(format!("interval for {key}: {e}")))?;
        // the stored root must be the largest one
        let chain = crate::numerics::SturmChain::new(&p.square_free_part());
        if chain.variations_at(interval.hi()) != chain.variations_at_infinity(true) {
            return Err(Error::StoreCorrupt(format!(
                "interval for {key} is not the dominant root"
            )));
        }
        let census = unit_circle_census(&p)?;
        if census != self.census {
            return Err(Error::StoreCorrupt(format!("census mismatch for {key}")));
        }
        let (cyclotomic_orders, residual) = strip_cyclotomic(&p);
        let residual_census = unit_circle_census(&residual)?;
        Ok(SpectrumEntry {
            key,
            value,
            census,
            label: self.label,
            cyclotomic_orders,
            residual,
            residual_census,
        })
    }
}

/// Append-only JSON-lines store of classified entries.
#[derive(Clone, Debug)]
pub struct SpectrumCache {
    path: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl SpectrumCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        SpectrumCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn lock_path(&self) -> PathBuf {
        let mut name = self.path.as_os_str().to_owned();
        name.push(".lock");
        PathBuf::from(name)
    }

    fn lock(&self) -> Result<LockGuard> {
        let lock = self.lock_path();
        let start = Instant::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&lock) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(LockGuard(lock));
                }
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    if start.elapsed() > LOCK_TIMEOUT {
                        return Err(Error::Io(std::io::Error::new(
                            ErrorKind::WouldBlock,
                            format!("cache lock {} is held", lock.display()),
                        )));
                    }
                    thread::sleep(Duration::from_millis(20));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    pub fn put(&self, entry: &SpectrumEntry) -> Result<()> {
        let record = CacheRecord::from_entry(entry);
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        let _guard = self.lock()?;
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        // a torn previous line must not swallow this record
        if f.metadata()?.len() > 0 && !ends_with_newline(&self.path)? {
            f.write_all(b"\n")?;
        }
        f.write_all(line.as_bytes())?;
        f.sync_all()?;
        Ok(())
    }

    /// Valid records in file order; malformed lines are skipped with a
    /// warning.
    pub fn records(&self) -> Result<Vec<CacheRecord>> {
        let f = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(r) => out.push(r),
                Err(e) => log::warn!("{}:{}: skipping record: {e}", self.path.display(), i + 1),
            }
        }
        Ok(out)
    }

    /// The stored entry with the narrowest verified interval.
    pub fn get(&self, key: &SpectrumKey) -> Result<Option<SpectrumEntry>> {
        let mut best: Option<SpectrumEntry> = None;
        for r in self.records()? {
            if r.d != key.d() || r.tuple != key.tuple() {
                continue;
            }
            match r.to_entry() {
                Ok(e) => {
                    if best
                        .as_ref()
                        .is_none_or(|b| e.value.interval().width() < b.value.interval().width())
                    {
                        best = Some(e);
                    }
                }
                Err(e) => log::warn!("{}: skipping record: {e}", self.path.display()),
            }
        }
        Ok(best)
    }

    /// One verified entry per key, ordered by key.
    pub fn all(&self) -> Result<Vec<SpectrumEntry>> {
        let mut keys = BTreeMap::new();
        for r in self.records()? {
            if let Ok(k) = SpectrumKey::new(r.d, r.tuple.clone()) {
                keys.insert(k, ());
            }
        }
        let mut out = Vec::new();
        for k in keys.into_keys() {
            if let Some(e) = self.get(&k)? {
                out.push(e);
            }
        }
        Ok(out)
    }
}

fn ends_with_newline(path: &Path) -> Result<bool> {
    use std::io::{Read, Seek, SeekFrom};
    let mut f = File::open(path)?;
    f.seek(SeekFrom::End(-1))?;
    let mut b = [0u8];
    f.read_exact(&mut b)?;
    Ok(b[0] == b'\n')
}
