//! On-disk cache of catalog expansions, one JSON file per symbol.
//!
//! Each file records the recipe it was expanded from; a file whose recipe,
//! shape or schema no longer matches the built-in table is ignored and
//! rebuilt. Writes go through a temporary file and a rename so a crashed run
//! never leaves a truncated entry behind.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use binvar_core::catalog::{self, Catalog, DECIMIC};
use binvar_core::poly::QPoly;
use binvar_core::BinaryForm;
use serde::{Deserialize, Serialize};

use crate::formats::{form_from_json, form_to_json, FormJson, SCHEMA};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: u32,
    pub symbol: String,
    pub recipe: String,
    pub order: u32,
    pub degree: u32,
    pub form: FormJson,
}

#[derive(Debug, Clone)]
pub struct CatalogCache {
    dir: Option<PathBuf>,
}

impl CatalogCache {
    /// `None` disables the cache: everything is expanded in memory.
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, symbol: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{symbol}.json")))
    }

    /// The cached expansion of `symbol`, or `None` if absent or stale.
    pub fn load(&self, symbol: &str) -> Result<Option<BinaryForm<QPoly>>> {
        let Some(path) = self.path(symbol) else {
            return Ok(None);
        };
        let Some(spec) = catalog::spec(symbol) else {
            anyhow::bail!("unknown catalog symbol `{symbol}`");
        };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
        };
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                return Ok(None);
            }
        };
        if entry.schema != SCHEMA
            || entry.symbol != symbol
            || entry.recipe != spec.recipe
            || entry.order != spec.order
            || entry.degree != spec.degree
        {
            log::warn!("cache entry {} is stale; rebuilding", path.display());
            return Ok(None);
        }
        match form_from_json(&entry.form) {
            Ok(f) if f.order() == spec.order && f.degree() == spec.degree => Ok(Some(f)),
            _ => {
                log::warn!("cache entry {} does not decode; rebuilding", path.display());
                Ok(None)
            }
        }
    }

    pub fn store(&self, symbol: &str, form: &BinaryForm<QPoly>) -> Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(symbol)) else {
            return Ok(());
        };
        let spec =
            catalog::spec(symbol).with_context(|| format!("unknown catalog symbol `{symbol}`"))?;
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let entry = CacheEntry {
            schema: SCHEMA,
            symbol: symbol.to_string(),
            recipe: spec.recipe.to_string(),
            order: spec.order,
            degree: spec.degree,
            form: form_to_json(form),
        };
        write_atomic(&path, &serde_json::to_vec(&entry)?)
    }

    /// A catalog holding `symbols` (all entries if empty), in table order.
    pub fn catalog(&self, symbols: &[&str]) -> Result<Catalog> {
        for s in symbols {
            catalog::spec(s).with_context(|| format!("unknown catalog symbol `{s}`"))?;
        }
        let wanted: Vec<&str> = DECIMIC
            .iter()
            .map(|e| e.symbol)
            .filter(|s| symbols.is_empty() || symbols.contains(s))
            .collect();
        let mut found = Vec::new();
        let mut missing = Vec::new();
        for s in &wanted {
            match self.load(s)? {
                Some(f) => found.push((s.to_string(), f)),
                None => missing.push(*s),
            }
        }
        if !missing.is_empty() {
            log::info!(
                "expanding {} catalog entries: {}",
                missing.len(),
                missing.join(", ")
            );
            let built = Catalog::build_selected(|e| missing.contains(&e.symbol))?;
            for e in built.entries() {
                self.store(e.spec.symbol, &e.expansion)?;
                found.push((e.spec.symbol.to_string(), e.expansion.clone()));
            }
        }
        found.sort_by_key(|(s, _)| wanted.iter().position(|w| w == s));
        Ok(Catalog::from_expansions(found)?)
    }
}

/// Writes `bytes` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stores_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CatalogCache::new(Some(dir.path().to_path_buf()));
        let first = cache.catalog(&["j2", "k"]).unwrap();
        assert!(dir.path().join("k.json").exists());
        let second = cache.catalog(&["k", "j2"]).unwrap();
        assert_eq!(
            first.get("k").unwrap().expansion,
            second.get("k").unwrap().expansion
        );
        assert_eq!(second.entries()[0].spec.symbol, "k");
    }

    #[test]
    fn stale_recipe_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CatalogCache::new(Some(dir.path().to_path_buf()));
        cache.catalog(&["j2"]).unwrap();
        let path = dir.path().join("j2.json");
        let mut entry: CacheEntry =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        entry.recipe = "(f,f)_8".into();
        fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        assert!(cache.load("j2").unwrap().is_none());
        fs::write(&path, b"{ not json").unwrap();
        assert!(cache.load("j2").unwrap().is_none());
        let c = cache.catalog(&["j2"]).unwrap();
        assert!(c.invariant("j2").is_ok());
        assert!(cache.load("j2").unwrap().is_some());
    }

    #[test]
    fn disabled_cache_writes_nothing() {
        let cache = CatalogCache::new(None);
        assert!(cache.load("j2").unwrap().is_none());
        assert!(cache.catalog(&["j2"]).is_ok());
        assert!(cache.catalog(&["nope"]).is_err());
    }
}
