//! Subcommand implementations. Each returns a [`Report`]; invalid input is
//! an error, which the binary turns into exit code 2.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use binvar_core::catalog::{evaluate_on, form_from_normalized, hsop, DECIMIC};
use binvar_core::groebner::{Budget, GroebnerError};
use binvar_core::hilbert::{numerator, poincare_table};
use binvar_core::membership::{Claim, MembershipError};
use binvar_core::nullcone::{
    exceptional_forms_check, is_nullform, lemma7_case_check, lemma8_case_check, verify_hsop,
    NumericForm,
};
use binvar_core::reference;
use binvar_core::ring::{Coeff, Rationals};
use binvar_core::search::{parse_selection, preset, stream, Status};
use binvar_core::verify::{self, CheckLine};
use binvar_core::BinaryForm;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::cache::CatalogCache;
use crate::checkpoint::{status_name, ReportJson};
use crate::cli::{Cli, Command, Tier, Which};
use crate::formats::{form_to_json, numeric_form_from_json, read_form_file};
use crate::report::{Outcome, Report};
use crate::suite::{self, Suite, DEFAULT_CRITERIA};

pub fn run(cli: &Cli) -> Result<Report> {
    let cache = CatalogCache::new((!cli.global.no_cache).then(|| cli.global.cache_dir.clone()));
    match &cli.command {
        Command::Poincare { n, max } => Ok(poincare_cmd(*n, *max)),
        Command::Numerator { n, degrees } => numerator_cmd(*n, degrees),
        Command::Catalog { list, dump, pretty } => {
            catalog_cmd(&cache, *list, dump.as_deref(), *pretty)
        }
        Command::Eval {
            invariant,
            coeffs,
            form_file,
        } => eval_cmd(invariant, coeffs, form_file.as_deref()),
        Command::Search {
            max_degree,
            prime,
            seed,
            deep,
            exhaustive,
            resume,
            budget_factor,
        } => {
            let tier = match (deep, exhaustive) {
                (_, true) => Tier::Exhaustive,
                (true, _) => Tier::Deep,
                _ => Tier::Default,
            };
            search_cmd(
                *max_degree,
                *prime,
                *seed,
                tier,
                resume.as_deref(),
                *budget_factor,
            )
        }
        Command::IdealDim {
            preset,
            select,
            degree,
            expect,
            prime,
            seed,
            resume,
        } => ideal_dim_cmd(
            preset.as_deref(),
            select.as_deref(),
            *degree,
            *expect,
            *prime,
            *seed,
            resume.as_deref(),
        ),
        Command::NullconeVerify {
            n,
            samples,
            seed,
            form_file,
        } => nullcone_cmd(n, *samples, *seed, form_file.as_deref()),
        Command::LemmaCheck {
            which,
            samples,
            seed,
        } => lemma_cmd(*which, *samples, *seed),
        Command::ExceptionalForms => exceptional_cmd(),
        Command::GroebnerCheck {
            claim,
            primes,
            max_steps,
        } => groebner_cmd(&cache, claim, primes, *max_steps),
        Command::VerifyAll { tier, seed } => verify_all_cmd(cache, *tier, *seed),
    }
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn series_text(coeffs: &[String]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(k, c)| match (k, c.as_str()) {
            (0, c) => c.to_string(),
            (1, "1") => "t".into(),
            (1, c) => format!("{c}*t"),
            (k, "1") => format!("t^{k}"),
            (k, c) => format!("{c}*t^{k}"),
        })
        .collect();
    terms.join(" + ")
}

pub fn poincare_cmd(n: u32, max: u32) -> Report {
    let mut r = Report::new("poincare");
    let t0 = Instant::now();
    let table = poincare_table(n, max);
    log::debug!("poincare table in {:?}", t0.elapsed());
    let coeffs = strings(&table.coeffs);
    r.set("n", n);
    r.set("max", max);
    r.line(series_text(&coeffs));
    r.set("coefficients", &coeffs);
    if n == 10 && max <= 48 {
        let bad: Vec<u32> = (0..=max)
            .filter(|&m| table.coeffs[m as usize] != reference::POINCARE_48[m as usize].into())
            .collect();
        r.check(&CheckLine::new(
            "reference series",
            bad.is_empty(),
            format!("{} coefficients compared, mismatches {bad:?}", max + 1),
        ));
    }
    r
}

pub fn numerator_cmd(n: u32, degrees: &[u32]) -> Result<Report> {
    let mut r = Report::new("numerator");
    if degrees.is_empty() || degrees.contains(&0) {
        bail!("degrees must be positive");
    }
    let need = degrees.iter().sum::<u32>().saturating_sub(1).max(1);
    let a = numerator(&poincare_table(n, need), degrees)?;
    let coeffs = strings(&a.coeffs);
    r.set("n", n);
    r.set("degrees", degrees);
    r.set("coefficients", &coeffs);
    r.set("degree_bound", a.degree_bound());
    r.set("nonzero", a.nonzero_count());
    r.set("palindromic", a.is_palindromic());
    r.set("first_zero_multiple_of_6", a.smallest_zero_multiple(6));
    r.line(series_text(&coeffs));
    r.line(format!(
        "degree bound {}, {} nonzero coefficients, palindromic {}, first zero at a multiple of 6: {:?}",
        a.degree_bound(),
        a.nonzero_count(),
        a.is_palindromic(),
        a.smallest_zero_multiple(6)
    ));
    if n == 10 && degrees == reference::HSOP_DEGREES {
        r.check(&verify::numerator_check());
    }
    Ok(r)
}

fn term_count(f: &BinaryForm<binvar_core::poly::QPoly>) -> usize {
    f.coeffs().iter().map(|c| c.len()).sum()
}

pub fn catalog_cmd(
    cache: &CatalogCache,
    list: bool,
    dump: Option<&str>,
    pretty: bool,
) -> Result<Report> {
    let mut r = Report::new("catalog");
    match dump {
        Some(symbol) => {
            let c = cache.catalog(&[symbol])?;
            let e = c.get(symbol)?;
            r.set("symbol", symbol);
            r.set("recipe", e.spec.recipe);
            r.set("form", form_to_json(&e.expansion));
            if pretty {
                r.line(e.expansion.pretty());
            } else {
                r.line(serde_json::to_string_pretty(&form_to_json(&e.expansion))?);
            }
        }
        None => {
            if !list {
                log::info!("no --dump given; listing");
            }
            let c = cache.catalog(&[])?;
            let mut rows = Vec::new();
            r.line(format!(
                "{:<6} {:>5} {:>6} {:>8}  recipe",
                "symbol", "order", "degree", "terms"
            ));
            for (spec, e) in DECIMIC.iter().zip(c.entries()) {
                let terms = term_count(&e.expansion);
                r.line(format!(
                    "{:<6} {:>5} {:>6} {:>8}  {}",
                    spec.symbol, spec.order, spec.degree, terms, spec.recipe
                ));
                rows.push(json!({
                    "symbol": spec.symbol,
                    "order": spec.order,
                    "degree": spec.degree,
                    "terms": terms,
                    "recipe": spec.recipe,
                }));
            }
            r.set("entries", rows);
        }
    }
    Ok(r)
}

fn parse_rational(text: &str) -> Result<BigRational> {
    <BigRational as Coeff>::parse(&Rationals, text)
        .ok_or_else(|| anyhow!("`{text}` is not a rational number"))
}

pub fn eval_cmd(invariant: &str, coeffs: &[String], form_file: Option<&Path>) -> Result<Report> {
    let mut r = Report::new("eval");
    let form: NumericForm = match form_file {
        Some(path) => numeric_form_from_json(&read_form_file(path)?)?,
        None => {
            if coeffs.len() != 11 {
                bail!("--coeffs needs 11 values a0..a10, got {}", coeffs.len());
            }
            let values = coeffs
                .iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>>>()?;
            form_from_normalized(&values)
        }
    };
    if form.order() != 10 {
        bail!("expected a form of order 10, got {}", form.order());
    }
    let value = evaluate_on(&form, invariant)?;
    r.set("invariant", invariant);
    r.set("order", value.order());
    r.set("degree", value.degree());
    match value.scalar_value() {
        Some(v) => {
            r.set("value", v.to_string());
            r.line(v.to_string());
        }
        None => {
            let cs = strings(value.coeffs());
            r.line(format!(
                "order {} covariant, coefficients of x^(n-i) y^i: {}",
                value.order(),
                cs.join(", ")
            ));
            r.set("coefficients", cs);
        }
    }
    Ok(r)
}

pub fn search_cmd(
    max_degree: u32,
    prime: u32,
    seed: u64,
    tier: Tier,
    resume: Option<&Path>,
    budget_factor: usize,
) -> Result<Report> {
    if max_degree > tier.ceiling() {
        bail!(
            "--max-degree {max_degree} exceeds the {tier:?} ceiling {}; use --deep (21) or --exhaustive (48)",
            tier.ceiling()
        );
    }
    if max_degree < 2 {
        bail!("--max-degree must be at least 2");
    }
    if budget_factor == 0 {
        bail!("--budget-factor must be positive");
    }
    let config = suite::search_config(tier, prime, seed, budget_factor);
    let state = suite::run_search(config.clone(), max_degree, resume)?;
    let mut r = Report::new("search");
    r.set(
        "config",
        json!({
            "prime": prime,
            "seed": seed.to_string(),
            "points": config.points,
            "order_cap": config.order_cap,
            "pool_cap": config.pool_cap,
            "budget_factor": config.budget_factor,
            "tier": format!("{tier:?}").to_lowercase(),
        }),
    );
    r.line(format!(
        "{:>3} {:>7} {:>9} {:>6} {:>4} {:>9}  status",
        "m", "target", "products", "rank", "d_m", "expected"
    ));
    let mut degrees = Vec::new();
    for rep in state.reports() {
        let expected = reference::basic_count(rep.degree);
        let matches = rep.dm == expected;
        r.line(format!(
            "{:>3} {:>7} {:>9} {:>6} {:>4} {:>9}  {}",
            rep.degree,
            rep.target,
            rep.products_rank,
            rep.rank,
            rep.dm,
            expected,
            status_name(rep.status)
        ));
        let mut entry = serde_json::to_value(ReportJson::from(rep))?;
        entry["expected_dm"] = json!(expected);
        entry["matches"] = json!(matches);
        degrees.push(entry);
        r.record(match rep.status {
            Status::Incomplete => Outcome::Incomplete,
            Status::Complete => Outcome::from_bool(matches),
        });
    }
    let reached = state.completed_through();
    if reached < max_degree && r.outcome != Outcome::Fail {
        r.record(Outcome::Incomplete);
    }
    let total: usize = state
        .reports()
        .iter()
        .filter(|x| x.status == Status::Complete)
        .map(|x| x.dm)
        .sum();
    r.set("degrees", degrees);
    r.set("reached", reached);
    r.set("basics_found", total);
    r.line(format!("{total} basic invariants through degree {reached}"));
    Ok(r)
}

pub fn ideal_dim_cmd(
    preset_name: Option<&str>,
    select: Option<&str>,
    degree: Option<u32>,
    expect: Option<usize>,
    prime: u32,
    seed: u64,
    resume: Option<&Path>,
) -> Result<Report> {
    let (label, items, m, expected) = match (preset_name, select, degree) {
        (Some(name), _, _) => {
            let (items, m, expected) = preset(name).ok_or_else(|| {
                let names: Vec<&str> = binvar_core::search::PRESETS.iter().map(|p| p.0).collect();
                anyhow!("unknown preset `{name}`; known: {}", names.join(", "))
            })?;
            (name.to_string(), items, m, Some(expected))
        }
        (None, Some(text), Some(m)) => (text.to_string(), parse_selection(text)?, m, expect),
        _ => bail!("give --preset NAME or --select SPEC --degree M"),
    };
    let run = suite::ideal_dimension(&items, m, prime, seed, resume)?;
    let mut r = Report::new("ideal-dim");
    r.set("selection", &label);
    r.set(
        "generators",
        items.iter().map(|g| g.label()).collect::<Vec<_>>(),
    );
    r.set("degree", m);
    r.set("prime", prime);
    r.set("seed", seed.to_string());
    r.set("expected", expected);
    match run.ideal {
        Some(ideal) => {
            r.set("target", ideal.target);
            r.set("rank", ideal.rank);
            r.set("full", ideal.is_full());
            r.line(format!(
                "{label} in degree {m}: rank {} of {} (full: {})",
                ideal.rank,
                ideal.target,
                ideal.is_full()
            ));
            if let Some(e) = expected {
                r.check(&CheckLine::new(
                    "expected dimension",
                    ideal.rank == e,
                    format!("rank {} vs expected {e}", ideal.rank),
                ));
            }
        }
        None => {
            let stuck = run
                .reports
                .iter()
                .find(|x| x.status == Status::Incomplete)
                .map(|x| x.degree);
            r.set("incomplete_degree", stuck);
            r.line(format!(
                "search did not saturate (degree {stuck:?}); no verdict"
            ));
            r.record(Outcome::Incomplete);
        }
    }
    Ok(r)
}

pub fn nullcone_cmd(
    ns: &[u32],
    samples: usize,
    seed: u64,
    form_file: Option<&Path>,
) -> Result<Report> {
    let mut r = Report::new("nullcone-verify");
    if let Some(path) = form_file {
        let f = numeric_form_from_json(&read_form_file(path)?)?;
        let spec = hsop(f.order())?;
        let values = spec.evaluate(&f)?;
        let null = is_nullform(&f);
        let vanish = values.iter().all(Zero::is_zero);
        r.set("order", f.order());
        r.set("nullform", null);
        r.set("system_vanishes", vanish);
        r.set(
            "values",
            spec.members
                .iter()
                .zip(&values)
                .map(|(m, v)| json!({"invariant": m.0, "value": v.to_string()}))
                .collect::<Vec<_>>(),
        );
        r.check(&CheckLine::new(
            "nullform iff the system vanishes",
            null == vanish,
            format!("nullform {null}, system vanishes {vanish}"),
        ));
        return Ok(r);
    }
    for &n in ns {
        hsop(n)?;
    }
    r.set("samples", samples);
    r.set("seed", seed.to_string());
    let results: Vec<_> = ns
        .par_iter()
        .map(|&n| verify_hsop(n, samples, &mut stream(seed, &[91, n as u64])))
        .collect();
    let mut rows = Vec::new();
    for h in results {
        let h = h?;
        rows.push(json!({
            "n": h.n,
            "nullforms": h.nullforms,
            "nullform_failures": h.nullform_failures.len(),
            "others": h.others,
            "other_failures": h.other_failures.len(),
        }));
        r.check(&CheckLine::new(
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
    r.set("orders", rows);
    Ok(r)
}

pub fn lemma_cmd(which: Which, samples: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new("lemma-check");
    let checks = match which {
        Which::Seven => lemma7_case_check()?,
        Which::Eight => lemma8_case_check()?,
        Which::Jerzy => {
            r.set("which", "jerzy");
            r.set("samples", samples);
            r.set("seed", seed.to_string());
            r.check(&verify::jerzy_check(samples, &mut stream(seed, &[92]))?);
            return Ok(r);
        }
    };
    r.set("which", if which == Which::Seven { "7" } else { "8" });
    let mut rows = Vec::new();
    for c in &checks {
        rows.push(json!({
            "label": c.label,
            "holds": c.holds(),
            "exact": c.exact,
            "ratio": c.ratio.as_ref().map(|x| x.to_string()),
        }));
        let ratio = c
            .ratio
            .as_ref()
            .map_or("none".to_string(), |x| x.to_string());
        r.check(&CheckLine::new(
            &c.label,
            c.holds(),
            format!("ratio {ratio}"),
        ));
    }
    r.set("identities", rows);
    Ok(r)
}

pub fn exceptional_cmd() -> Result<Report> {
    let mut r = Report::new("exceptional-forms");
    let mut rows = Vec::new();
    for f in exceptional_forms_check()? {
        rows.push(json!({
            "form": f.label,
            "nonzero": f.nonzero,
            "expected_nonzero": f.expected_nonzero,
            "j14_plus_a14_nonzero": f.combined_nonzero,
        }));
        r.check(&CheckLine::new(
            &f.label,
            f.holds(),
            format!(
                "nonzero {:?}, j14 + A14 nonzero: {}",
                f.nonzero, f.combined_nonzero
            ),
        ));
    }
    r.set("forms", rows);
    Ok(r)
}

pub fn groebner_cmd(
    cache: &CatalogCache,
    claim: &str,
    primes: &str,
    max_steps: usize,
) -> Result<Report> {
    let claims: Vec<Claim> = if claim == "all" {
        Claim::ALL.to_vec()
    } else {
        vec![Claim::parse(claim).map_err(|e| {
            let names: Vec<&str> = Claim::ALL.iter().map(|c| c.name()).collect();
            anyhow!("{e}; known: all, {}", names.join(", "))
        })?]
    };
    let primes: Vec<u32> = primes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty() && *s != "none")
        .map(|s| s.parse::<u32>().with_context(|| format!("bad prime `{s}`")))
        .collect::<Result<_>>()?;
    for &p in &primes {
        binvar_core::PrimeField::new(p).map_err(|_| anyhow!("{p} is not prime"))?;
    }
    let mut symbols: Vec<&str> = claims
        .iter()
        .flat_map(|c| c.symbols().iter().copied())
        .collect();
    symbols.sort_unstable();
    symbols.dedup();
    let catalog = if symbols.is_empty() {
        binvar_core::Catalog::from_expansions(Vec::new())?
    } else {
        cache.catalog(&symbols)?
    };
    let budget = Budget { max_steps };
    let fields: Vec<Option<u32>> = std::iter::once(None)
        .chain(primes.iter().copied().map(Some))
        .collect();
    let jobs: Vec<(Claim, Option<u32>)> = claims
        .iter()
        .flat_map(|c| fields.iter().map(move |f| (*c, *f)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(c, f)| match f {
            None => binvar_core::membership::check_over_rationals(&catalog, *c, budget),
            Some(p) => suite::claim_over_prime(&catalog, *c, *p, budget),
        })
        .collect();
    let mut r = Report::new("groebner-check");
    let mut rows = Vec::new();
    for ((c, f), res) in jobs.iter().zip(results) {
        let field = f.map_or("QQ".to_string(), |p| format!("GF({p})"));
        match res {
            Ok(rep) => {
                rows.push(json!({
                    "claim": c.name(),
                    "field": rep.field,
                    "holds": rep.holds(),
                    "members": rep.results.iter().map(|m| json!({"label": m.label, "member": m.member})).collect::<Vec<_>>(),
                }));
                r.check(&suite::claim_line(&rep));
            }
            Err(MembershipError::Groebner(e @ GroebnerError::Budget { .. })) => {
                rows.push(json!({"claim": c.name(), "field": field, "holds": null, "error": e.to_string()}));
                r.line(format!("INCOMPLETE {} over {field}: {e}", c.name()));
                r.record(Outcome::Incomplete);
            }
            Err(e) => return Err(e.into()),
        }
    }
    r.set("claims", rows);
    Ok(r)
}

fn section_report(command: &'static str, sections: &[suite::Section]) -> Result<Report> {
    let mut r = Report::new(command);
    let mut rows = Vec::new();
    for s in sections {
        r.line(format!(
            "[{}] criterion {}: {}",
            s.outcome.label(),
            s.id,
            s.title
        ));
        for c in &s.checks {
            r.line(format!(
                "    {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        r.record(s.outcome);
        rows.push(json!({
            "id": s.id,
            "title": s.title,
            "outcome": s.outcome,
            "checks": s.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        }));
    }
    r.set("criteria", rows);
    Ok(r)
}

pub fn verify_all_cmd(cache: CatalogCache, tier: Tier, seed: u64) -> Result<Report> {
    let suite = Suite::new(cache, seed);
    let ids: Vec<u8> = DEFAULT_CRITERIA.iter().map(|c| c.0).collect();
    let sections: Vec<Result<suite::Section>> = ids
        .par_iter()
        .map(|&id| {
            let t0 = Instant::now();
            let s = suite.criterion(id);
            log::info!("criterion {id} finished in {:?}", t0.elapsed());
            s
        })
        .collect();
    let mut sections = sections.into_iter().collect::<Result<Vec<_>>>()?;
    sections.extend(suite.extra(tier)?);
    let mut r = section_report("verify-all", &sections)?;
    r.set("tier", format!("{tier:?}").to_lowercase());
    r.set("seed", seed.to_string());
    Ok(r)
}
