//! The verification suite behind `verify-all`, split into numbered criteria
//! that can also be run one at a time.

use std::path::Path;
use std::sync::OnceLock;
use std::time::Duration;

use anyhow::{anyhow, Result};
use binvar_core::groebner::{Budget, GroebnerError};
use binvar_core::membership::{check_over_prime, check_over_rationals, Claim, MembershipError};
use binvar_core::nullcone::{
    exceptional_forms_check, lemma7_case_check, lemma8_case_check, verify_hsop, IdentityCheck,
};
use binvar_core::search::{
    preset, search_degree_for, stream, DegreeReport, GeneratorItem, IdealReport, SearchConfig,
    SearchState, Status,
};
use binvar_core::verify::{self, CheckLine};
use binvar_core::{Catalog, PrimeField};
use rayon::prelude::*;

use crate::cache::CatalogCache;
use crate::checkpoint::CheckpointDir;
use crate::cli::Tier;
use crate::report::Outcome;

/// The two primes whose verdicts must agree.
pub const SEARCH_PRIME: u32 = 109;
pub const IDEAL_PRIME: u32 = 197;
/// Default-tier search and ideal-dimension targets.
pub const SEARCH_DEGREE: u32 = 14;
pub const IDEAL_PRESETS: [&str; 2] = ["all", "j10"];
pub const HSOP_ORDERS: [u32; 5] = [2, 4, 6, 8, 10];

/// Primes for the modular Gröbner sanity runs.
pub const GROEBNER_PRIMES: [u32; 2] = [32003, 65521];

/// Search configuration used by the `search` command in a tier.
pub fn search_config(tier: Tier, prime: u32, seed: u64, budget_factor: usize) -> SearchConfig {
    let mut c = SearchConfig::for_degree(prime, seed, tier.ceiling());
    c.budget_factor = budget_factor;
    c
}

/// Runs (or resumes) a search through `max_degree`, stopping after the first
/// degree that does not saturate. Finished degrees are written to `resume`.
pub fn run_search(
    config: SearchConfig,
    max_degree: u32,
    resume: Option<&Path>,
) -> Result<SearchState> {
    let mut state = SearchState::new(config.clone())?;
    let dir = resume
        .map(|d| CheckpointDir::open(d, &config))
        .transpose()?;
    if let Some(dir) = &dir {
        for cp in dir.load_all()? {
            if cp.report.degree > max_degree {
                break;
            }
            state.restore(&cp)?;
        }
        if state.completed_through() > 0 {
            log::info!("resumed through degree {}", state.completed_through());
        }
    }
    for m in state.completed_through() + 1..=max_degree {
        if state
            .reports()
            .last()
            .is_some_and(|r| r.status == Status::Incomplete)
        {
            break;
        }
        let r = state.find_dm(m)?;
        log::info!(
            "p={} degree {m}: target {}, products {}, rank {}, d_m {} ({:?})",
            config.prime,
            r.target,
            r.products_rank,
            r.rank,
            r.dm,
            r.status
        );
        if let Some(dir) = &dir {
            dir.save(&state.checkpoint(m).expect("degree just finished"))?;
        }
    }
    Ok(state)
}

/// Result of an ideal-dimension run: the search reports it rested on and the
/// rank, if the search saturated far enough.
#[derive(Debug, Clone)]
pub struct IdealRun {
    pub reports: Vec<DegreeReport>,
    pub ideal: Option<IdealReport>,
}

/// Dimension of the degree-`m` piece of the ideal of `items`, modulo `j2`.
pub fn ideal_dimension(
    items: &[GeneratorItem],
    m: u32,
    prime: u32,
    seed: u64,
    resume: Option<&Path>,
) -> Result<IdealRun> {
    let config = SearchConfig::for_degree(prime, seed, m);
    let through = search_degree_for(items, m);
    let mut state = run_search(config, through, resume)?;
    let complete = state.completed_through() >= through
        && state.reports().iter().all(|r| r.status == Status::Complete);
    let ideal = if complete {
        Some(state.ideal_dimension(items, m)?)
    } else {
        None
    };
    Ok(IdealRun {
        reports: state.reports().to_vec(),
        ideal,
    })
}

/// Preset name, degree, expected dimension and the computed rank if any.
pub type PresetDimension = (String, u32, usize, Option<IdealReport>);

/// Ranks for several presets sharing one search.
pub fn preset_dimensions(names: &[&str], prime: u32, seed: u64) -> Result<Vec<PresetDimension>> {
    let presets = names
        .iter()
        .map(|n| {
            preset(n)
                .map(|p| (n.to_string(), p))
                .ok_or_else(|| anyhow!("unknown preset `{n}`"))
        })
        .collect::<Result<Vec<_>>>()?;
    let top = presets.iter().map(|(_, p)| p.1).max().unwrap_or(4);
    let through = presets
        .iter()
        .map(|(_, (items, m, _))| search_degree_for(items, *m))
        .max()
        .unwrap_or(0);
    let mut state = run_search(SearchConfig::for_degree(prime, seed, top), through, None)?;
    let complete = state.completed_through() >= through
        && state.reports().iter().all(|r| r.status == Status::Complete);
    let mut out = Vec::new();
    for (name, (items, m, expected)) in presets {
        let r = if complete {
            Some(state.ideal_dimension(&items, m)?)
        } else {
            None
        };
        out.push((name, m, expected, r));
    }
    Ok(out)
}

/// A numbered criterion: its checks and the combined outcome.
#[derive(Debug, Clone)]
pub struct Section {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<CheckLine>,
    pub outcome: Outcome,
}

impl Section {
    fn new(id: u8, title: &'static str) -> Self {
        Self {
            id,
            title,
            checks: Vec::new(),
            outcome: Outcome::Pass,
        }
    }

    fn push(&mut self, c: CheckLine) {
        self.outcome = self.outcome.and(Outcome::from_bool(c.passed));
        self.checks.push(c);
    }

    fn incomplete(&mut self, c: CheckLine) {
        self.outcome = self.outcome.and(Outcome::Incomplete);
        self.checks.push(c);
    }
}

pub const DEFAULT_CRITERIA: [(u8, &str, Duration); 9] = [
    (1, "poincare series", Duration::from_secs(1)),
    (2, "numerator", Duration::from_secs(1)),
    (3, "catalog golden expansions", Duration::from_secs(10)),
    (4, "degree table through 14", Duration::from_secs(600)),
    (5, "graded ideal dimensions", Duration::from_secs(3600)),
    (6, "groebner membership", Duration::from_secs(300)),
    (7, "exceptional forms", Duration::from_secs(60)),
    (8, "case proportionalities", Duration::from_secs(60)),
    (
        9,
        "property suites and cross-prime agreement",
        Duration::from_secs(3600),
    ),
];

type SearchVerdict = std::result::Result<Vec<DegreeReport>, String>;
type IdealVerdict = std::result::Result<Vec<PresetDimension>, String>;

/// Shared state for one suite run; search and ideal results are computed
/// once per prime and reused by the criteria that compare them.
pub struct Suite {
    pub cache: CatalogCache,
    pub seed: u64,
    searches: [OnceLock<SearchVerdict>; 2],
    ideals: [OnceLock<IdealVerdict>; 2],
}

fn prime_slot(p: u32) -> usize {
    usize::from(p != SEARCH_PRIME)
}

fn holds_line(c: &IdentityCheck) -> CheckLine {
    let ratio = c
        .ratio
        .as_ref()
        .map_or("none".to_string(), |r| r.to_string());
    CheckLine::new(
        &c.label,
        c.holds(),
        format!("ratio {ratio}{}", if c.exact { ", exact" } else { "" }),
    )
}

impl Suite {
    pub fn new(cache: CatalogCache, seed: u64) -> Self {
        Self {
            cache,
            seed,
            searches: Default::default(),
            ideals: Default::default(),
        }
    }

    fn search_at(&self, p: u32) -> &SearchVerdict {
        self.searches[prime_slot(p)].get_or_init(|| {
            run_search(
                search_config(Tier::Default, p, self.seed, 10),
                SEARCH_DEGREE,
                None,
            )
            .map(|s| s.reports().to_vec())
            .map_err(|e| e.to_string())
        })
    }

    fn ideals_at(&self, p: u32) -> &IdealVerdict {
        self.ideals[prime_slot(p)].get_or_init(|| {
            preset_dimensions(&IDEAL_PRESETS, p, self.seed).map_err(|e| e.to_string())
        })
    }

    fn catalog(&self, symbols: &[&str]) -> Result<Catalog> {
        self.cache.catalog(symbols)
    }

    pub fn criterion(&self, id: u8) -> Result<Section> {
        let title = DEFAULT_CRITERIA
            .iter()
            .find(|c| c.0 == id)
            .map(|c| c.1)
            .ok_or_else(|| anyhow!("no criterion {id}"))?;
        let mut s = Section::new(id, title);
        match id {
            1 => s.push(verify::poincare_check()),
            2 => s.push(verify::numerator_check()),
            3 => {
                for c in verify::golden_checks(&self.catalog(&["j2", "k", "q"])?)? {
                    s.push(c);
                }
            }
            4 => self.search_section(&mut s, SEARCH_PRIME)?,
            5 => self.ideal_section(&mut s, IDEAL_PRIME)?,
            6 => {
                let catalog = self.catalog(&all_claim_symbols())?;
                let reports: Vec<_> = Claim::ALL
                    .par_iter()
                    .map(|c| (c, check_over_rationals(&catalog, *c, Budget::default())))
                    .collect();
                for (claim, r) in reports {
                    match r {
                        Ok(r) => s.push(claim_line(&r)),
                        Err(MembershipError::Groebner(e @ GroebnerError::Budget { .. })) => {
                            s.incomplete(CheckLine::new(claim.name(), false, format!("QQ: {e}")))
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            7 => {
                for f in exceptional_forms_check()? {
                    s.push(CheckLine::new(
                        &f.label,
                        f.holds(),
                        format!(
                            "nonzero {:?} (expected {:?}), j14 + A14 nonzero: {}",
                            f.nonzero, f.expected_nonzero, f.combined_nonzero
                        ),
                    ));
                }
            }
            8 => {
                for c in lemma8_case_check()?
                    .iter()
                    .chain(lemma7_case_check()?.iter())
                {
                    s.push(holds_line(c));
                }
            }
            9 => self.property_section(&mut s)?,
            _ => unreachable!("checked above"),
        }
        Ok(s)
    }

    fn search_section(&self, s: &mut Section, p: u32) -> Result<()> {
        let reports = self.search_at(p).clone().map_err(|e| anyhow!(e))?;
        let line = verify::basic_count_check(&reports, SEARCH_DEGREE);
        if reports.iter().any(|r| r.status == Status::Incomplete) {
            s.incomplete(CheckLine::new(
                &format!("p={p} {}", line.name),
                false,
                line.detail,
            ));
        } else {
            s.push(CheckLine::new(
                &format!("p={p} {}", line.name),
                line.passed,
                line.detail,
            ));
        }
        Ok(())
    }

    fn ideal_section(&self, s: &mut Section, p: u32) -> Result<()> {
        let runs = self.ideals_at(p).clone().map_err(|e| anyhow!(e))?;
        for (name, m, expected, r) in runs {
            let label = format!("p={p} ideal {name} in degree {m}");
            match r {
                Some(r) => s.push(CheckLine::new(
                    &label,
                    r.rank == expected && r.is_full(),
                    format!("rank {} of {} (expected {expected})", r.rank, r.target),
                )),
                None => s.incomplete(CheckLine::new(&label, false, "search did not saturate")),
            }
        }
        Ok(())
    }

    fn property_section(&self, s: &mut Section) -> Result<()> {
        s.push(verify::transvectant_property_check(
            200,
            &mut stream(self.seed, &[90]),
        ));
        let hsop: Vec<_> = HSOP_ORDERS
            .par_iter()
            .map(|&n| verify_hsop(n, 100, &mut stream(self.seed, &[91, n as u64])))
            .collect();
        for h in hsop {
            let h = h?;
            s.push(CheckLine::new(
                &format!("hsop n={}", h.n),
                h.passed(),
                format!(
                    "{} nullforms ({} failures), {} other forms ({} failures)",
                    h.nullforms,
                    h.nullform_failures.len(),
                    h.others,
                    h.other_failures.len()
                ),
            ));
        }
        s.push(verify::jerzy_check(200, &mut stream(self.seed, &[92]))?);
        s.push(verify::hermite_check(12));
        let (a, b) = rayon::join(
            || self.search_at(SEARCH_PRIME).clone(),
            || self.search_at(IDEAL_PRIME).clone(),
        );
        let (a, b) = (a.map_err(|e| anyhow!(e))?, b.map_err(|e| anyhow!(e))?);
        s.push(CheckLine::new(
            "cross-prime degree table",
            search_verdict(&a) == search_verdict(&b),
            format!(
                "p={SEARCH_PRIME}: {}; p={IDEAL_PRIME}: {}",
                search_verdict(&a),
                search_verdict(&b)
            ),
        ));
        let (a, b) = rayon::join(
            || self.ideals_at(SEARCH_PRIME).clone(),
            || self.ideals_at(IDEAL_PRIME).clone(),
        );
        let (a, b) = (a.map_err(|e| anyhow!(e))?, b.map_err(|e| anyhow!(e))?);
        s.push(CheckLine::new(
            "cross-prime ideal dimensions",
            ideal_verdict(&a) == ideal_verdict(&b),
            format!(
                "p={SEARCH_PRIME}: {}; p={IDEAL_PRIME}: {}",
                ideal_verdict(&a),
                ideal_verdict(&b)
            ),
        ));
        Ok(())
    }

    /// Checks beyond the default criteria for the deeper tiers.
    pub fn extra(&self, tier: Tier) -> Result<Vec<Section>> {
        let mut out = Vec::new();
        if tier == Tier::Default {
            return Ok(out);
        }
        let mut s = Section::new(10, "deep search and ideal dimensions");
        let top = if tier == Tier::Exhaustive { 21 } else { 16 };
        let state = run_search(search_config(tier, SEARCH_PRIME, self.seed, 10), top, None)?;
        let line = verify::basic_count_check(state.reports(), top);
        if state
            .reports()
            .iter()
            .any(|r| r.status == Status::Incomplete)
        {
            s.incomplete(line);
        } else {
            s.push(line);
        }
        let names: &[&str] = if tier == Tier::Exhaustive {
            &["j9", "j14a14", "j8", "a6c6"]
        } else {
            &["j9", "j14a14"]
        };
        for name in names {
            let (items, m, expected) = preset(name).expect("known preset");
            let run = ideal_dimension(&items, m, IDEAL_PRIME, self.seed, None)?;
            let label = format!("p={IDEAL_PRIME} ideal {name} in degree {m}");
            match run.ideal {
                Some(r) => s.push(CheckLine::new(
                    &label,
                    r.rank == expected,
                    format!("rank {} of {} (expected {expected})", r.rank, r.target),
                )),
                None => s.incomplete(CheckLine::new(&label, false, "search did not saturate")),
            }
        }
        out.push(s);
        Ok(out)
    }
}

fn search_verdict(reports: &[DegreeReport]) -> String {
    reports
        .iter()
        .map(|r| {
            let mark = if r.status == Status::Complete {
                ""
            } else {
                "?"
            };
            format!("d{}={}{mark}", r.degree, r.dm)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn ideal_verdict(runs: &[(String, u32, usize, Option<IdealReport>)]) -> String {
    runs.iter()
        .map(|(name, m, _, r)| match r {
            Some(r) => format!("{name}@{m}={}", r.rank),
            None => format!("{name}@{m}=?"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn all_claim_symbols() -> Vec<&'static str> {
    let mut v: Vec<&str> = Claim::ALL
        .iter()
        .flat_map(|c| c.symbols().iter().copied())
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn claim_line(r: &binvar_core::membership::ClaimReport) -> CheckLine {
    let parts: Vec<String> = r
        .results
        .iter()
        .map(|m| format!("{} {}", m.label, if m.member { "in" } else { "NOT in" }))
        .collect();
    CheckLine::new(
        &format!("{} over {}", r.claim.name(), r.field),
        r.holds(),
        parts.join(", "),
    )
}

/// Runs a claim over a prime field, for the modular sanity runs.
pub fn claim_over_prime(
    catalog: &Catalog,
    claim: Claim,
    p: u32,
    budget: Budget,
) -> Result<binvar_core::membership::ClaimReport, MembershipError> {
    let field = PrimeField::new(p)
        .map_err(|e| MembershipError::BadReduction(format!("{} is not prime", e.0)))?;
    check_over_prime(catalog, claim, field, budget)
}
