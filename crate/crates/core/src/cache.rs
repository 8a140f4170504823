//! On-disk cache of built degrees, one versioned JSON file per
//! (N, class, sign, flavor, degree).
//!
//! A file is reused only when its schema version and configuration hash
//! match; the hash covers the key and the ordered class, so a change in
//! class ordering invalidates everything.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{DegreeData, Flavor, GradedAlgebra, Sign};
use crate::crossed::Word;
use crate::error::{Error, Result};
use crate::linalg::SparseVec;

pub const CACHE_SCHEMA: u32 = 1;
pub const CACHE_ENV: &str = "NCFORMS_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub class: String,
    pub signed: bool,
    pub flavor: Flavor,
}

impl CacheKey {
    pub fn of(alg: &GradedAlgebra) -> CacheKey {
        CacheKey {
            n: alg.cm().n(),
            class: alg.cm().cycle_type().to_string(),
            signed: alg.sign() == Sign::FominKirillov,
            flavor: alg.flavor(),
        }
    }

    fn file_name(&self, degree: usize) -> String {
        let sign = if self.signed { "signed" } else { "unsigned" };
        let flavor = match self.flavor {
            Flavor::Quadratic => "quadratic",
            Flavor::Woronowicz => "woronowicz",
        };
        format!("alg-n{}-c{}-{sign}-{flavor}-d{degree}.json", self.n, self.class)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CachedDegree {
    schema: u32,
    config_hash: String,
    key: CacheKey,
    degree: usize,
    dim: usize,
    basis_words: Vec<Word>,
    right: Vec<SparseVec>,
}

// FNV-1a, stable across platforms and toolchains
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn config_hash(alg: &GradedAlgebra) -> String {
    let mut text = serde_json::to_string(&CacheKey::of(alg)).unwrap_or_default();
    text.push_str(&CACHE_SCHEMA.to_string());
    for p in alg.cm().class() {
        text.push_str(&p.to_string());
    }
    format!("{:016x}", fnv1a(text.as_bytes()))
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// `NCFORMS_CACHE` when set, otherwise `fallback`.
    pub fn from_env(fallback: Option<PathBuf>) -> Option<Cache> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(fallback)
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey, degree: usize) -> PathBuf {
        self.dir.join(key.file_name(degree))
    }

    fn read(&self, alg: &GradedAlgebra, degree: usize) -> Option<DegreeData> {
        let key = CacheKey::of(alg);
        let text = fs::read_to_string(self.path(&key, degree)).ok()?;
        let c: CachedDegree = serde_json::from_str(&text).ok()?;
        let ok = c.schema == CACHE_SCHEMA
            && c.config_hash == config_hash(alg)
            && c.key == key
            && c.degree == degree
            && c.dim == c.basis_words.len()
            && c.basis_words.iter().all(|w| w.len() == degree);
        ok.then_some(DegreeData {
            basis: c.basis_words,
            right: c.right,
        })
    }

    /// Restores consecutive cached degrees above those already built, up to
    /// `max`. Returns the highest degree now built.
    pub fn load(&self, alg: &mut GradedAlgebra, max: usize) -> usize {
        let mut degrees = alg.degree_data().to_vec();
        let mut n = degrees.len();
        let m = alg.cm().len();
        while n <= max {
            let Some(d) = self.read(alg, n) else { break };
            if d.right.len() != degrees[n - 1].basis.len() * m {
                break;
            }
            degrees.push(d);
            n += 1;
        }
        if degrees.len() > alg.degree_data().len() {
            alg.restore_degrees(degrees);
        }
        alg.built_degree()
    }

    /// Writes every built degree ≥ 2 that is not already cached.
    pub fn store(&self, alg: &GradedAlgebra) -> Result<usize> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(e.to_string()))?;
        let key = CacheKey::of(alg);
        let hash = config_hash(alg);
        let mut written = 0;
        for (degree, d) in alg.degree_data().iter().enumerate().skip(2) {
            let path = self.path(&key, degree);
            if self.read(alg, degree).is_some() {
                continue;
            }
            let c = CachedDegree {
                schema: CACHE_SCHEMA,
                config_hash: hash.clone(),
                key: key.clone(),
                degree,
                dim: d.basis.len(),
                basis_words: d.basis.clone(),
                right: d.right.clone(),
            };
            let text = serde_json::to_string(&c).map_err(|e| Error::Cache(e.to_string()))?;
            let tmp = path.with_extension("json.tmp");
            let mut f = fs::File::create(&tmp).map_err(|e| Error::Cache(e.to_string()))?;
            f.write_all(text.as_bytes()).map_err(|e| Error::Cache(e.to_string()))?;
            fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))?;
            written += 1;
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = std::env::temp_dir().join(format!("ncforms-cache-test-{}", std::process::id()));
        let cache = Cache::new(&dir);
        let mut a = GradedAlgebra::exterior(4, "2", Flavor::Quadratic).unwrap();
        a.ensure_degree(3).unwrap();
        assert_eq!(cache.store(&a).unwrap(), 2);
        assert_eq!(cache.store(&a).unwrap(), 0);

        let mut b = GradedAlgebra::exterior(4, "2", Flavor::Quadratic).unwrap();
        assert_eq!(cache.load(&mut b, 10), 3);
        for n in 0..=3 {
            assert_eq!(a.basis(n).unwrap(), b.basis(n).unwrap());
        }
        let x = b.normal_form_word(&[0, 1, 2]).unwrap();
        assert_eq!(a.normal_form_word(&[0, 1, 2]).unwrap().component(3), x.component(3));
        b.ensure_degree(4).unwrap();
        assert_eq!(b.dim(4).unwrap(), 71);

        // other flavors and signs never pick these files up
        let mut w = GradedAlgebra::exterior(4, "2", Flavor::Woronowicz).unwrap();
        assert_eq!(cache.load(&mut w, 10), 1);
        let mut e = GradedAlgebra::fomin_kirillov(4, Flavor::Quadratic).unwrap();
        assert_eq!(cache.load(&mut e, 10), 1);

        // corrupted files are ignored
        let key = CacheKey::of(&a);
        fs::write(cache.path(&key, 2), "{").unwrap();
        let mut c = GradedAlgebra::exterior(4, "2", Flavor::Quadratic).unwrap();
        assert_eq!(cache.load(&mut c, 10), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
