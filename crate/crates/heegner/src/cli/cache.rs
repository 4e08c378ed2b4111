//! On-disk cache of evaluations, one JSON document per key.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rug::Float;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::special::num::{Complex, Evaluation, TailKind};

/// Bumped whenever a change alters cached numbers.
pub const CODE_VERSION: &str = concat!("heegner-", env!("CARGO_PKG_VERSION"), "-c1");

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "HEEGNER_CACHE_DIR";

static LOCK: Mutex<()> = Mutex::new(());

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StoredEvaluation {
    pub key: String,
    pub version: String,
    pub re: String,
    pub im: String,
    pub prec: u32,
    pub truncation: u64,
    pub tail: f64,
    pub exact_tail: bool,
}

impl StoredEvaluation {
    fn from_eval(key: &str, e: &Evaluation) -> Self {
        StoredEvaluation {
            key: key.to_string(),
            version: CODE_VERSION.to_string(),
            re: e.value.re.to_string_radix(10, None),
            im: e.value.im.to_string_radix(10, None),
            prec: e.prec,
            truncation: e.truncation,
            tail: e.tail,
            exact_tail: matches!(e.tail_kind, TailKind::Exact),
        }
    }

    fn to_eval(&self, prec: u32) -> Option<Evaluation> {
        let re = Float::parse(&self.re).ok()?;
        let im = Float::parse(&self.im).ok()?;
        let value = Complex::new(Float::with_val(prec, re), Float::with_val(prec, im));
        let tail_kind = if self.exact_tail { TailKind::Exact } else { TailKind::Heuristic };
        Some(Evaluation { value, prec, truncation: self.truncation, tail: self.tail, tail_kind })
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    pub dir: PathBuf,
}

/// Outcome of a lookup, for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// Entry present but unreadable; recomputed.
    Corrupt,
    /// Entry present but with lower precision or truncation; recomputed.
    Stale,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// Explicit directory, else the environment override, else ./.heegner-cache.
    pub fn resolve(explicit: Option<&Path>) -> Self {
        if let Some(d) = explicit {
            return Cache::new(d);
        }
        match std::env::var_os(CACHE_ENV) {
            Some(d) => Cache::new(d),
            None => Cache::new(".heegner-cache"),
        }
    }

    /// Hex SHA-256 of the command, its numeric inputs and the code version.
    pub fn key<T: Serialize>(command: &str, material: &T) -> Result<String> {
        let body = serde_json::to_string(&(command, material, CODE_VERSION))?;
        Ok(Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str, prec: u32, truncation: u64) -> (Option<Evaluation>, Lookup) {
        let _g = LOCK.lock().unwrap_or_else(|e| e.into_inner());
        let path = self.path(key);
        let Ok(text) = fs::read_to_string(&path) else {
            return (None, Lookup::Miss);
        };
        let stored: StoredEvaluation = match serde_json::from_str(&text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("warning: ignoring corrupt cache entry {}: {e}", path.display());
                return (None, Lookup::Corrupt);
            }
        };
        if stored.key != key || stored.version != CODE_VERSION {
            eprintln!("warning: ignoring mismatched cache entry {}", path.display());
            return (None, Lookup::Corrupt);
        }
        if stored.prec < prec || stored.truncation < truncation {
            return (None, Lookup::Stale);
        }
        match stored.to_eval(prec) {
            Some(e) => (Some(e), Lookup::Hit),
            None => {
                eprintln!("warning: ignoring unparsable cache entry {}", path.display());
                (None, Lookup::Corrupt)
            }
        }
    }

    pub fn put(&self, key: &str, e: &Evaluation) -> Result<()> {
        let _g = LOCK.lock().unwrap_or_else(|e| e.into_inner());
        fs::create_dir_all(&self.dir)?;
        let doc = serde_json::to_string_pretty(&StoredEvaluation::from_eval(key, e))?;
        let tmp = self.dir.join(format!("{key}.json.tmp{}", std::process::id()));
        fs::write(&tmp, doc)?;
        fs::rename(&tmp, self.path(key)).map_err(Error::Io)
    }

    /// Return the cached evaluation when good enough, else compute and store it.
    pub fn get_or_compute<F>(&self, key: &str, prec: u32, truncation: u64, f: F) -> Result<(Evaluation, Lookup)>
    where
        F: FnOnce() -> Result<Evaluation>,
    {
        let (hit, how) = self.get(key, prec, truncation);
        if let Some(e) = hit {
            return Ok((e, how));
        }
        let e = f()?;
        self.put(key, &e)?;
        Ok((e, how))
    }
}
