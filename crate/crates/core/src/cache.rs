//! On-disk cache of envelopes and codimensions, keyed by the content hash of
//! the specification. Entries are JSON with rationals stored as strings and
//! are written atomically through a temporary file in the same directory.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::envelope::Envelope;
use crate::error::Result;
use crate::liestruct::LinearRep;
use crate::multilin::{codimension, Codimension, EvalOptions};
use crate::repspec::RepSpec;

pub const CACHE_DIR_VAR: &str = "PI_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".pi-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// `$PI_CACHE_DIR`, or `.pi-cache` in the working directory.
    pub fn from_env() -> Cache {
        let dir = std::env::var_os(CACHE_DIR_VAR)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        Cache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn load<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.dir.join(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, value)?;
        tmp.flush()?;
        tmp.persist(self.dir.join(key)).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn envelope_key(spec: &RepSpec, seed: u64) -> String {
        format!("{}-envelope-s{seed}.json", spec.content_hash())
    }

    pub fn codim_key(spec: &RepSpec, n: usize, opts: &EvalOptions) -> String {
        format!(
            "{}-codim-n{n}-{}-p{}-s{}.json",
            spec.content_hash(),
            opts.method,
            opts.primes,
            opts.seed
        )
    }

    /// Loads the envelope for `spec` or builds and stores it. A cached entry
    /// that does not contain `rep` is treated as stale and rebuilt.
    pub fn envelope(&self, spec: &RepSpec, rep: &LinearRep, seed: u64) -> Result<(Envelope, bool)> {
        let key = Cache::envelope_key(spec, seed);
        if let Some(env) = self.load::<Envelope>(&key) {
            if env.dim_v() == rep.dim_v() && rep.basis().iter().all(|x| env.contains(x)) {
                return Ok((env, true));
            }
        }
        let env = Envelope::build(rep, seed)?;
        self.store(&key, &env)?;
        Ok((env, false))
    }

    /// Loads `c_n` for `spec` or computes and stores it.
    pub fn codimension(
        &self,
        spec: &RepSpec,
        rep: &LinearRep,
        n: usize,
        opts: &EvalOptions,
    ) -> Result<(Codimension, bool)> {
        let key = Cache::codim_key(spec, n, opts);
        if let Some(c) = self.load::<Codimension>(&key) {
            if c.n == n {
                return Ok((c, true));
            }
        }
        let c = codimension(rep, n, opts)?;
        self.store(&key, &c)?;
        Ok((c, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn envelope_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let spec = bundled::get("gl2").unwrap();
        let rep = spec.rep().unwrap();
        let (cold, hit) = cache.envelope(&spec, &rep, 5).unwrap();
        assert!(!hit);
        let (warm, hit) = cache.envelope(&spec, &rep, 5).unwrap();
        assert!(hit);
        assert_eq!(cold, warm);
        let leftovers: Vec<_> = fs::read_dir(cache.dir()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }

    #[test]
    fn corrupt_entries_are_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let spec = bundled::get("e11_e12").unwrap();
        let rep = spec.rep().unwrap();
        fs::write(dir.path().join(Cache::envelope_key(&spec, 0)), "{not json").unwrap();
        let (env, hit) = cache.envelope(&spec, &rep, 0).unwrap();
        assert!(!hit);
        assert_eq!(env.dim_a(), 2);
        let opts = EvalOptions::default();
        let (c, hit) = cache.codimension(&spec, &rep, 3, &opts).unwrap();
        assert!(!hit);
        let (d, hit) = cache.codimension(&spec, &rep, 3, &opts).unwrap();
        assert!(hit);
        assert_eq!(c, d);
    }
}
