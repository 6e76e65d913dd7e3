//! Per-degree checkpoints of a search run.
//!
//! A checkpoint directory holds `config.json` and one `degree-NN.json` per
//! finished degree. Resuming replays the saved degrees in order; a directory
//! written under a different configuration is refused rather than mixed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use binvar_core::search::{Basic, DegreeCheckpoint, DegreeReport, SearchConfig, Status};
use serde::{Deserialize, Serialize};

use crate::cache::write_atomic;
use crate::formats::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub schema: u32,
    pub prime: u32,
    pub seed: String,
    pub points: usize,
    pub order_cap: u32,
    pub pool_cap: usize,
    pub budget_factor: usize,
}

impl From<&SearchConfig> for ConfigJson {
    fn from(c: &SearchConfig) -> Self {
        Self {
            schema: SCHEMA,
            prime: c.prime,
            seed: c.seed.to_string(),
            points: c.points,
            order_cap: c.order_cap,
            pool_cap: c.pool_cap,
            budget_factor: c.budget_factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub degree: u32,
    pub target: usize,
    pub products_rank: usize,
    pub rank: usize,
    pub dm: usize,
    pub candidates_tried: usize,
    pub status: String,
    pub generators: Vec<String>,
}

impl From<&DegreeReport> for ReportJson {
    fn from(r: &DegreeReport) -> Self {
        Self {
            degree: r.degree,
            target: r.target,
            products_rank: r.products_rank,
            rank: r.rank,
            dm: r.dm,
            candidates_tried: r.candidates_tried,
            status: status_name(r.status).into(),
            generators: r.generators.clone(),
        }
    }
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Complete => "complete",
        Status::Incomplete => "incomplete",
    }
}

impl ReportJson {
    fn to_report(&self) -> Result<DegreeReport> {
        let status = match self.status.as_str() {
            "complete" => Status::Complete,
            "incomplete" => Status::Incomplete,
            other => bail!("unknown status `{other}`"),
        };
        Ok(DegreeReport {
            degree: self.degree,
            target: self.target,
            products_rank: self.products_rank,
            rank: self.rank,
            dm: self.dm,
            candidates_tried: self.candidates_tried,
            status,
            generators: self.generators.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicJson {
    pub degree: u32,
    pub recipe: String,
    pub values: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeJson {
    pub schema: u32,
    pub report: ReportJson,
    pub rows: Vec<Vec<u32>>,
    pub basics: Vec<BasicJson>,
}

impl From<&DegreeCheckpoint> for DegreeJson {
    fn from(cp: &DegreeCheckpoint) -> Self {
        Self {
            schema: SCHEMA,
            report: (&cp.report).into(),
            rows: cp.rows.clone(),
            basics: cp
                .basics
                .iter()
                .map(|b| BasicJson {
                    degree: b.degree,
                    recipe: b.recipe.clone(),
                    values: b.values.clone(),
                })
                .collect(),
        }
    }
}

impl DegreeJson {
    fn to_checkpoint(&self) -> Result<DegreeCheckpoint> {
        if self.schema != SCHEMA {
            bail!("checkpoint schema {} is not {SCHEMA}", self.schema);
        }
        Ok(DegreeCheckpoint {
            report: self.report.to_report()?,
            rows: self.rows.clone(),
            basics: self
                .basics
                .iter()
                .map(|b| Basic {
                    degree: b.degree,
                    recipe: b.recipe.clone(),
                    values: b.values.clone(),
                })
                .collect(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckpointDir {
    dir: PathBuf,
}

impl CheckpointDir {
    /// Opens (or creates) `dir` for `config`; fails if it was written under
    /// a different configuration.
    pub fn open(dir: &Path, config: &SearchConfig) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("config.json");
        let want = ConfigJson::from(config);
        if path.exists() {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let have: ConfigJson = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            if have != want {
                bail!(
                    "checkpoint directory {} was written with a different configuration ({have:?}); requested {want:?}",
                    dir.display()
                );
            }
        } else {
            write_atomic(&path, &serde_json::to_vec_pretty(&want)?)?;
        }
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    fn degree_path(&self, m: u32) -> PathBuf {
        self.dir.join(format!("degree-{m:02}.json"))
    }

    /// Saved degrees from 2 upwards, stopping at the first gap.
    pub fn load_all(&self) -> Result<Vec<DegreeCheckpoint>> {
        let mut out = Vec::new();
        for m in 2.. {
            let path = self.degree_path(m);
            if !path.exists() {
                break;
            }
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let j: DegreeJson = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let cp = j
                .to_checkpoint()
                .with_context(|| format!("decoding {}", path.display()))?;
            if cp.report.degree != m {
                bail!("{} holds degree {}", path.display(), cp.report.degree);
            }
            out.push(cp);
        }
        Ok(out)
    }

    pub fn save(&self, cp: &DegreeCheckpoint) -> Result<()> {
        let j = DegreeJson::from(cp);
        write_atomic(
            &self.degree_path(cp.report.degree),
            &serde_json::to_vec(&j)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use binvar_core::search::SearchState;

    #[test]
    fn save_load_and_refuse_other_config() {
        let dir = tempfile::tempdir().unwrap();
        let config = SearchConfig::for_degree(109, 3, 8);
        let mut state = SearchState::new(config.clone()).unwrap();
        state.run_through(8, |_| {}).unwrap();
        let cps = CheckpointDir::open(dir.path(), &config).unwrap();
        for m in 2..=8 {
            cps.save(&state.checkpoint(m).unwrap()).unwrap();
        }
        let loaded = cps.load_all().unwrap();
        assert_eq!(loaded.len(), 7);
        assert_eq!(loaded[4], state.checkpoint(6).unwrap());
        let mut resumed = SearchState::new(config.clone()).unwrap();
        for cp in &loaded {
            resumed.restore(cp).unwrap();
        }
        assert_eq!(resumed.reports(), state.reports());
        let other = SearchConfig::for_degree(197, 3, 8);
        assert!(CheckpointDir::open(dir.path(), &other).is_err());
    }
}
