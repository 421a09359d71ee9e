//! Advisory on-disk cache of root vectors, straightening constants and
//! L-matrices, one JSON file per datum.
//!
//! A file is used only when its version and fingerprint match; otherwise it
//! is ignored and rewritten. Every cached quantity can be rebuilt, so a
//! missing or stale cache only costs time.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qgw_core::lfun::Lfun;
use qgw_core::uqg::pbw::RootVectors;
use qgw_core::{Mono, RootDatum, RootVec, ScalarQ, UElem, Uqg, UqgError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const VERSION: u32 = 1;

/// Conventions that change cached values; part of the fingerprint.
const CONVENTIONS: &str = "braid=standard;vector-basis=increasing-weight;theta=first-passing-of-descending,ascending;ls-f-exponent=+";

type Terms = Vec<(Mono, ScalarQ)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    #[serde(rename = "type")]
    pub lie_type: String,
    pub rank: usize,
    pub conventions: String,
}

impl Fingerprint {
    pub fn of(d: &RootDatum) -> Self {
        let mut h = Sha256::new();
        h.update(CONVENTIONS.as_bytes());
        let hex: String = h.finalize().iter().map(|b| format!("{:02x}", b)).collect();
        Fingerprint { lie_type: d.lie_type.to_string(), rank: d.rank, conventions: hex }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CachedRoot {
    pub root: Vec<i64>,
    pub e: Terms,
    pub f: Terms,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CachedL {
    pub order: String,
    pub plus: Vec<Vec<Terms>>,
    pub minus: Vec<Vec<Terms>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub fingerprint: Fingerprint,
    #[serde(default)]
    pub root_vectors: Option<Vec<CachedRoot>>,
    /// Keyed by "i,j,E" or "i,j,F" (0-based positions in ≺).
    #[serde(default)]
    pub ls_constants: BTreeMap<String, Vec<(Vec<u32>, ScalarQ)>>,
    #[serde(default)]
    pub l_matrices: Option<CachedL>,
}

impl CacheFile {
    fn empty(d: &RootDatum) -> Self {
        CacheFile { version: VERSION, fingerprint: Fingerprint::of(d), root_vectors: None, ls_constants: BTreeMap::new(), l_matrices: None }
    }
}

fn terms(x: &UElem<ScalarQ>) -> Terms {
    x.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect()
}

fn element(t: &Terms) -> UElem<ScalarQ> {
    let mut x = UElem::zero();
    for (m, c) in t {
        x.add_term(m.clone(), c.clone());
    }
    x
}

/// How the cache was found when opened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheState {
    Disabled,
    Fresh,
    Loaded,
    /// A file existed but did not match and was ignored.
    Stale,
}

pub struct Cache {
    path: Option<PathBuf>,
    pub file: CacheFile,
    pub state: CacheState,
    dirty: bool,
}

impl Cache {
    pub fn file_for(dir: &Path, d: &RootDatum) -> PathBuf {
        dir.join(format!("{}{}.json", d.lie_type, d.rank))
    }

    pub fn open(dir: Option<&Path>, d: &RootDatum) -> Self {
        let Some(dir) = dir else {
            return Cache { path: None, file: CacheFile::empty(d), state: CacheState::Disabled, dirty: false };
        };
        let path = Self::file_for(dir, d);
        let loaded = fs::read_to_string(&path).ok().map(|s| serde_json::from_str::<CacheFile>(&s));
        let (file, state) = match loaded {
            None => (CacheFile::empty(d), CacheState::Fresh),
            Some(Ok(f)) if f.version == VERSION && f.fingerprint == Fingerprint::of(d) => (f, CacheState::Loaded),
            Some(_) => (CacheFile::empty(d), CacheState::Stale),
        };
        let dirty = state == CacheState::Stale;
        Cache { path: Some(path), file, state, dirty }
    }

    /// Root vectors of `u`, seeding `u` from the file when it has them.
    pub fn root_vectors<'u>(&mut self, u: &'u Uqg<ScalarQ>) -> Result<&'u RootVectors<ScalarQ>, UqgError> {
        if let Some(rv) = self.file.root_vectors.take() {
            let seeded = RootVectors {
                roots: rv.iter().map(|r| RootVec::from_slice(&r.root)).collect(),
                e: rv.iter().map(|r| element(&r.e)).collect(),
                f: rv.iter().map(|r| element(&r.f)).collect(),
            };
            if u.seed_root_vectors(seeded) {
                self.file.root_vectors = Some(rv);
                return u.root_vectors();
            }
        }
        let rv = u.root_vectors()?;
        self.file.root_vectors = Some(
            (0..rv.roots.len())
                .map(|k| CachedRoot { root: rv.roots[k].0.to_vec(), e: terms(&rv.e[k]), f: terms(&rv.f[k]) })
                .collect(),
        );
        self.dirty = true;
        Ok(rv)
    }

    pub fn ls_constants(&mut self, u: &Uqg<ScalarQ>, i: usize, j: usize, minus: bool) -> Result<Vec<(Vec<u32>, ScalarQ)>, UqgError> {
        let key = format!("{},{},{}", i, j, if minus { "F" } else { "E" });
        if let Some(v) = self.file.ls_constants.get(&key) {
            return Ok(v.clone());
        }
        let v: Vec<_> = u.ls_constants(i, j, minus)?.into_iter().collect();
        self.file.ls_constants.insert(key, v.clone());
        self.dirty = true;
        Ok(v)
    }

    /// L^+ and L^- (0-based matrices) and the Θ order used.
    #[allow(clippy::type_complexity)]
    pub fn l_matrices(
        &mut self,
        dim: usize,
        lfun: impl FnOnce() -> Result<std::sync::Arc<Lfun<ScalarQ>>, UqgError>,
    ) -> Result<(Vec<Vec<UElem<ScalarQ>>>, Vec<Vec<UElem<ScalarQ>>>, String), UqgError> {
        if let Some(l) = self.file.l_matrices.as_ref().filter(|l| l.plus.len() == dim && l.minus.len() == dim) {
            let conv = |m: &Vec<Vec<Terms>>| m.iter().map(|row| row.iter().map(element).collect()).collect();
            return Ok((conv(&l.plus), conv(&l.minus), l.order.clone()));
        }
        let lf = lfun()?;
        let conv = |m: &Vec<Vec<UElem<ScalarQ>>>| m.iter().map(|row| row.iter().map(terms).collect()).collect();
        let order = lf.order().name().to_string();
        self.file.l_matrices = Some(CachedL { order: order.clone(), plus: conv(&lf.plus), minus: conv(&lf.minus) });
        self.dirty = true;
        Ok((lf.plus.clone(), lf.minus.clone(), order))
    }

    /// Writes the file if anything changed; failures are reported, not fatal.
    pub fn save(&mut self) -> Result<(), String> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {}", dir.display(), e))?;
        }
        let text = serde_json::to_string(&self.file).map_err(|e| e.to_string())?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text).map_err(|e| format!("cannot write {}: {}", tmp.display(), e))?;
        fs::rename(&tmp, path).map_err(|e| format!("cannot write {}: {}", path.display(), e))?;
        self.dirty = false;
        Ok(())
    }
}
