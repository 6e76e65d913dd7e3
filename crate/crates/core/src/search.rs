//! Per-degree rank saturation for the invariants of the decimic.
//!
//! Invariants are compared through their values at a fixed list of random
//! points of the slice `a4 = a7 = a9 = 0`, `a10 = 1`, `a0 = -45 a2 a8 + 126 a5^2`
//! (on which `j2` vanishes), reduced modulo a prime. If the value vectors of
//! some invariants are independent then so are the invariants modulo `j2`;
//! dependence is never concluded. The same slice can be used symbolically
//! through [`reduce`], which is kept as an independent route for low degrees.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binform::transvectant_weights;
use crate::catalog::{decimic_definitions, CatalogError};
use crate::hilbert::{dim_covariants, quotient_dim, to_usize};
use crate::modlin::{IncrementalSpan, Insertion, PrimeField, SpanError};
use crate::poly::{PolyError, Polynomial, QPoly, VariableSet};
use crate::recipe::{Definitions, Recipe, RecipeError};
use crate::ring::binomial;

/// Variables left after the slice and the `a0` substitution.
pub const REDUCED_VARIABLES: [&str; 6] = ["a1", "a2", "a3", "a5", "a6", "a8"];
const FREE: [usize; 6] = [1, 2, 3, 5, 6, 8];
const ORDER: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("transvectant ({n},{m})_{k} has a normalizing factor divisible by {p}")]
    NormNotInvertible { n: u32, m: u32, k: u32, p: u32 },
    #[error("rational coefficient with denominator divisible by {0}")]
    Denominator(u32),
    #[error("no spanning set for degree {0}; extend the search first")]
    MissingSpan(u32),
    #[error("degree {0} did not saturate; later degrees cannot be trusted")]
    Upstream(u32),
    #[error("bad generator selection `{0}`")]
    BadSelection(String),
    #[error("recipe `{0}` is not an invariant")]
    NotInvariant(String),
    #[error("checkpoint does not match this configuration: {0}")]
    Checkpoint(String),
}

/// Deterministic generator for a tagged stream derived from the master seed.
pub fn stream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &t in tags {
        h = splitmix(h ^ splitmix(t.wrapping_add(0x632b_e59b_d9b4_e019)));
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `a0..a10` at a random point of the reduced slice.
pub fn reduced_point<R: Rng>(field: PrimeField, rng: &mut R) -> [u32; 11] {
    let p = field.modulus();
    let mut a = [0u32; 11];
    for i in FREE {
        a[i] = rng.gen_range(0..p);
    }
    a[10] = 1;
    let t = field.mul(field.reduce_i64(45), field.mul(a[2], a[8]));
    let u = field.mul(field.reduce_i64(126), field.mul(a[5], a[5]));
    a[0] = field.sub(u, t);
    a
}

/// Coefficients `C(10,i) a_i` of the decimic at a point.
pub fn point_form(field: PrimeField, a: &[u32; 11]) -> Vec<u32> {
    (0..=ORDER)
        .map(|i| field.mul(field.reduce_bigint(&binomial(ORDER, i)), a[i as usize]))
        .collect()
}

/// Step one of the reduction, over the rationals: `a4 = a7 = a9 = 0`, `a10 = 1`.
pub fn restrict_to_slice(p: &QPoly) -> Result<QPoly, SearchError> {
    let vars = p.vars().clone();
    let one = QPoly::one(&vars, p.domain());
    let zero = QPoly::zero(&vars, p.domain());
    Ok(p.substitute_named(&[
        ("a4", zero.clone()),
        ("a7", zero.clone()),
        ("a9", zero),
        ("a10", one),
    ])?)
}

/// Full reduction: slice, `a0 -> -45 a2 a8 + 126 a5^2`, then modulo `p`, as a
/// polynomial in [`REDUCED_VARIABLES`].
pub fn reduce(p: &QPoly, field: PrimeField) -> Result<Polynomial<u32>, SearchError> {
    let sliced = restrict_to_slice(p)?;
    let vars = sliced.vars().clone();
    let a0 = QPoly::parse(&vars, sliced.domain(), "-45*a2*a8 + 126*a5^2")?;
    let eliminated = sliced.substitute_named(&[("a0", a0)])?;
    let target = VariableSet::new(&REDUCED_VARIABLES)?;
    let moved = eliminated.rename_into(&target)?;
    let modulus = field.modulus();
    if moved
        .terms()
        .any(|(_, c)| field.reduce_bigint(c.denom()) == 0)
    {
        return Err(SearchError::Denominator(modulus));
    }
    Ok(moved.map_coeffs(&field, |c| {
        let di = field
            .inv(field.reduce_bigint(c.denom()))
            .expect("checked above");
        field.mul(field.reduce_bigint(c.numer()), di)
    }))
}

/// Evaluates a reduced polynomial at the free coordinates of a slice point.
pub fn eval_reduced(p: &Polynomial<u32>, field: PrimeField, a: &[u32; 11]) -> u32 {
    let mut acc = 0u32;
    for (m, c) in p.terms() {
        let mut t = *c;
        for (slot, &i) in FREE.iter().enumerate() {
            let e = m.exponent(slot);
            if e > 0 {
                t = field.mul(t, field.pow(a[i], e as u64));
            }
        }
        acc = field.add(acc, t);
    }
    acc
}

#[derive(Debug)]
struct TvTable {
    out_len: usize,
    terms: Vec<(u16, u16, u16, u32)>,
}

/// Transvectants of coefficient vectors over a prime field, with the
/// weight tables cached per `(n, m, k)`.
#[derive(Debug)]
pub struct TvCache {
    field: PrimeField,
    tables: BTreeMap<(u32, u32, u32), Arc<TvTable>>,
}

impl TvCache {
    pub fn new(field: PrimeField) -> Self {
        Self {
            field,
            tables: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    fn table(&mut self, n: u32, m: u32, k: u32) -> Result<Arc<TvTable>, SearchError> {
        if let Some(t) = self.tables.get(&(n, m, k)) {
            return Ok(t.clone());
        }
        let f = self.field;
        let (entries, norm) = transvectant_weights(n, m, k);
        let inv = f
            .inv(f.reduce_bigint(&norm))
            .ok_or(SearchError::NormNotInvertible {
                n,
                m,
                k,
                p: f.modulus(),
            })?;
        let terms = entries
            .iter()
            .map(|e| {
                (
                    e.j as u16,
                    e.l as u16,
                    e.s as u16,
                    f.mul(f.reduce_bigint(&e.weight), inv),
                )
            })
            .filter(|t| t.3 != 0)
            .collect();
        let t = Arc::new(TvTable {
            out_len: (n + m - 2 * k + 1) as usize,
            terms,
        });
        self.tables.insert((n, m, k), t.clone());
        Ok(t)
    }

    /// `(a, b)_k` where `a`, `b` are coefficient vectors of orders `len - 1`.
    pub fn apply(&mut self, a: &[u32], b: &[u32], k: u32) -> Result<Vec<u32>, SearchError> {
        let (n, m) = (a.len() as u32 - 1, b.len() as u32 - 1);
        let t = self.table(n, m, k)?;
        let mut out = vec![0u32; t.out_len];
        apply_table(self.field, &t, a, b, &mut out);
        Ok(out)
    }

    /// Pointwise transvectant of two sampled covariants.
    pub fn apply_sampled(
        &mut self,
        a: &Sampled,
        b: &Sampled,
        k: u32,
    ) -> Result<Sampled, SearchError> {
        let t = self.table(a.order, b.order, k)?;
        let (la, lb) = (a.order as usize + 1, b.order as usize + 1);
        let points = a.points();
        let mut values = vec![0u32; points * t.out_len];
        for pt in 0..points {
            apply_table(
                self.field,
                &t,
                &a.values[pt * la..(pt + 1) * la],
                &b.values[pt * lb..(pt + 1) * lb],
                &mut values[pt * t.out_len..(pt + 1) * t.out_len],
            );
        }
        Ok(Sampled {
            order: a.order + b.order - 2 * k,
            values,
        })
    }
}

fn apply_table(field: PrimeField, t: &TvTable, a: &[u32], b: &[u32], out: &mut [u32]) {
    let p = field.modulus() as u64;
    let mut stack = [0u64; 64];
    let mut heap = Vec::new();
    let acc: &mut [u64] = if out.len() <= stack.len() {
        &mut stack[..out.len()]
    } else {
        heap.resize(out.len(), 0);
        &mut heap
    };
    for &(j, l, s, w) in &t.terms {
        let x = a[j as usize] as u64 * w as u64 % p;
        acc[s as usize] += x * b[l as usize] as u64 % p;
    }
    for (o, v) in out.iter_mut().zip(acc.iter()) {
        *o = (v % p) as u32;
    }
}

/// A covariant evaluated at every sample point: `points * (order + 1)` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sampled {
    pub order: u32,
    pub values: Vec<u32>,
}

impl Sampled {
    pub fn points(&self) -> usize {
        self.values.len() / (self.order as usize + 1)
    }

    /// Values of an invariant, one per point.
    pub fn scalars(&self) -> Option<&[u32]> {
        (self.order == 0).then_some(&self.values[..])
    }

    fn mul(&self, other: &Self, field: PrimeField) -> Self {
        let (la, lb) = (self.order as usize + 1, other.order as usize + 1);
        let lo = la + lb - 1;
        let points = self.points();
        let mut values = vec![0u32; points * lo];
        for pt in 0..points {
            let (a, b) = (
                &self.values[pt * la..(pt + 1) * la],
                &other.values[pt * lb..(pt + 1) * lb],
            );
            let out = &mut values[pt * lo..(pt + 1) * lo];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = field.add(out[i + j], field.mul(x, y));
                }
            }
        }
        Self {
            order: self.order + other.order,
            values,
        }
    }
}

/// Pointwise product of two value vectors.
pub fn hadamard(field: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| field.mul(x, y)).collect()
}

/// Evaluates recipes over `f` at the sample points.
pub struct PointEvaluator<'a> {
    tv: &'a mut TvCache,
    base: &'a Sampled,
    defs: &'a Definitions,
    named: BTreeMap<String, Sampled>,
}

impl<'a> PointEvaluator<'a> {
    pub fn new(tv: &'a mut TvCache, base: &'a Sampled, defs: &'a Definitions) -> Self {
        Self {
            tv,
            base,
            defs,
            named: BTreeMap::new(),
        }
    }

    pub fn eval(&mut self, r: &Recipe) -> Result<Sampled, SearchError> {
        let field = self.tv.field();
        Ok(match r {
            Recipe::Form => self.base.clone(),
            Recipe::Ref(name) => {
                if let Some(v) = self.named.get(name) {
                    return Ok(v.clone());
                }
                let def = self
                    .defs
                    .get(name)
                    .ok_or_else(|| RecipeError::UnknownSymbol(name.clone()))?
                    .clone();
                let v = self.eval(&def)?;
                self.named.insert(name.clone(), v.clone());
                v
            }
            Recipe::Transvectant(a, b, k) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                if *k > a.order.min(b.order) {
                    return Err(
                        RecipeError::Form(crate::binform::FormError::IndexOutOfRange {
                            k: *k,
                            n: a.order,
                            m: b.order,
                        })
                        .into(),
                    );
                }
                self.tv.apply_sampled(&a, &b, *k)?
            }
            Recipe::Product(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                a.mul(&b, field)
            }
            Recipe::Power(a, e) => {
                let a = self.eval(a)?;
                let mut acc = Sampled {
                    order: 0,
                    values: vec![1; a.points()],
                };
                for _ in 0..*e {
                    acc = acc.mul(&a, field);
                }
                acc
            }
            Recipe::Sum(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                if a.order != b.order {
                    return Err(RecipeError::Form(crate::binform::FormError::OrderMismatch(
                        a.order, b.order,
                    ))
                    .into());
                }
                Sampled {
                    order: a.order,
                    values: a
                        .values
                        .iter()
                        .zip(&b.values)
                        .map(|(&x, &y)| field.add(x, y))
                        .collect(),
                }
            }
            Recipe::Scaled(c, a) => {
                let a = self.eval(a)?;
                let c = field.reduce_i64(*c);
                Sampled {
                    order: a.order,
                    values: a.values.iter().map(|&x| field.mul(x, c)).collect(),
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub prime: u32,
    pub seed: u64,
    /// Number of sample points; must exceed every target dimension in use.
    pub points: usize,
    /// Largest covariant order kept in the candidate pools.
    pub order_cap: u32,
    /// Largest number of covariants kept per (degree, order).
    pub pool_cap: usize,
    /// Random candidates allowed per degree, as a multiple of the target.
    pub budget_factor: usize,
}

/// Extra sample points beyond the largest target dimension.
pub const POINT_MARGIN: usize = 24;

impl SearchConfig {
    pub fn new(prime: u32, seed: u64, max_target: usize) -> Self {
        Self {
            prime,
            seed,
            points: max_target + POINT_MARGIN,
            order_cap: 20,
            pool_cap: 12,
            budget_factor: 10,
        }
    }

    /// Configuration able to saturate every degree up to `max_degree`.
    pub fn for_degree(prime: u32, seed: u64, max_degree: u32) -> Self {
        let max_target = (4..=max_degree).map(target_dim).max().unwrap_or(0);
        Self::new(prime, seed, max_target)
    }
}

/// `dim I_m / j2 I_(m-2)`. Degree 2 gives 0: `j2` itself is zero there.
pub fn target_dim(m: u32) -> usize {
    if m < 4 {
        return 0;
    }
    to_usize(&quotient_dim(ORDER, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: u32,
    pub target: usize,
    pub products_rank: usize,
    pub rank: usize,
    /// Number of new basic invariants found in this degree.
    pub dm: usize,
    pub candidates_tried: usize,
    pub status: Status,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basic {
    pub degree: u32,
    pub recipe: String,
    pub values: Vec<u32>,
}

#[derive(Debug, Clone)]
struct PoolEntry {
    recipe: Recipe,
    sampled: Sampled,
}

/// Points used to decide independence inside a covariant pool.
const POOL_PROBE_POINTS: usize = 12;

/// Search state: sample points, covariant pools, spanning sets per degree.
pub struct SearchState {
    config: SearchConfig,
    field: PrimeField,
    tv: TvCache,
    points: Vec<[u32; 11]>,
    base: Sampled,
    pools: BTreeMap<(u32, u32), Vec<PoolEntry>>,
    pool_degree: u32,
    spans: BTreeMap<u32, IncrementalSpan>,
    basics: Vec<Basic>,
    reports: Vec<DegreeReport>,
}

/// Saved result of one finished degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheckpoint {
    pub report: DegreeReport,
    pub rows: Vec<Vec<u32>>,
    pub basics: Vec<Basic>,
}

impl SearchState {
    pub fn new(config: SearchConfig) -> Result<Self, SearchError> {
        let field = PrimeField::for_search(config.prime)?;
        let mut rng = stream(config.seed, &[0]);
        let points: Vec<[u32; 11]> = (0..config.points)
            .map(|_| reduced_point(field, &mut rng))
            .collect();
        let base = Sampled {
            order: ORDER,
            values: points.iter().flat_map(|a| point_form(field, a)).collect(),
        };
        let mut pools = BTreeMap::new();
        pools.insert(
            (1, ORDER),
            vec![PoolEntry {
                recipe: Recipe::Form,
                sampled: base.clone(),
            }],
        );
        Ok(Self {
            tv: TvCache::new(field),
            config,
            field,
            points,
            base,
            pools,
            pool_degree: 1,
            spans: BTreeMap::new(),
            basics: Vec::new(),
            reports: Vec::new(),
        })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn points(&self) -> &[[u32; 11]] {
        &self.points
    }

    pub fn reports(&self) -> &[DegreeReport] {
        &self.reports
    }

    pub fn basics(&self) -> &[Basic] {
        &self.basics
    }

    /// Highest degree processed so far.
    pub fn completed_through(&self) -> u32 {
        self.reports.last().map_or(1, |r| r.degree)
    }

    pub fn span(&self, m: u32) -> Option<&IncrementalSpan> {
        self.spans.get(&m)
    }

    /// Values of a recipe (over `f`, with the catalog names available) at
    /// the sample points.
    pub fn sample(&mut self, recipe: &Recipe) -> Result<Sampled, SearchError> {
        let defs = decimic_definitions();
        PointEvaluator::new(&mut self.tv, &self.base, &defs).eval(recipe)
    }

    /// Values of an invariant recipe, one per point.
    pub fn sample_invariant(&mut self, recipe: &Recipe) -> Result<Vec<u32>, SearchError> {
        let s = self.sample(recipe)?;
        if s.order != 0 {
            return Err(SearchError::NotInvariant(recipe.to_string()));
        }
        Ok(s.values)
    }

    fn pool_orders(&self, d: u32) -> Vec<u32> {
        self.pools
            .range((d, 0)..=(d, u32::MAX))
            .filter(|(_, v)| !v.is_empty())
            .map(|((_, o), _)| *o)
            .collect()
    }

    fn ensure_pools(&mut self, d: u32) -> Result<(), SearchError> {
        while self.pool_degree < d {
            let next = self.pool_degree + 1;
            for o in (2..=self.config.order_cap).step_by(2) {
                self.build_pool(next, o)?;
            }
            self.pool_degree = next;
        }
        Ok(())
    }

    /// Random transvectants `(C1, C2)_k` of lower-degree pool members landing
    /// in degree `d`, order `o`, kept while they are independent at a few points.
    fn build_pool(&mut self, d: u32, o: u32) -> Result<(), SearchError> {
        let want = to_usize(&dim_covariants(ORDER, d, o)).min(self.config.pool_cap);
        if want == 0 {
            return Ok(());
        }
        let probe = POOL_PROBE_POINTS.min(self.points.len());
        let mut span = IncrementalSpan::new(self.field, probe * (o as usize + 1));
        let mut rng = stream(self.config.seed, &[1, d as u64, o as u64]);
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        let max_attempts = 40 * want + 200;
        for _ in 0..max_attempts {
            if entries.len() >= want {
                break;
            }
            let d1 = rng.gen_range(1..=d / 2);
            let d2 = d - d1;
            let Some((o1, i1, o2, i2, k)) = self.pick_pair(&mut rng, d1, d2, o) else {
                continue;
            };
            let key = if (d1, o1, i1) <= (d2, o2, i2) {
                (d1, o1, i1, d2, o2, i2, k)
            } else {
                (d2, o2, i2, d1, o1, i1, k)
            };
            if (d1, o1, i1) == (d2, o2, i2) && k % 2 == 1 {
                continue;
            }
            if !seen.insert(key) {
                continue;
            }
            let (a, b) = (&self.pools[&(d1, o1)][i1], &self.pools[&(d2, o2)][i2]);
            let t = self.tv.table(o1, o2, k)?;
            let (la, lb) = (o1 as usize + 1, o2 as usize + 1);
            let mut probe_values = vec![0u32; probe * t.out_len];
            for pt in 0..probe {
                apply_table(
                    self.field,
                    &t,
                    &a.sampled.values[pt * la..(pt + 1) * la],
                    &b.sampled.values[pt * lb..(pt + 1) * lb],
                    &mut probe_values[pt * t.out_len..(pt + 1) * t.out_len],
                );
            }
            if span.insert(&probe_values)? == Insertion::Dependent {
                continue;
            }
            let recipe = Recipe::transvectant(a.recipe.clone(), b.recipe.clone(), k);
            let sampled = self
                .tv
                .apply_sampled(&a.sampled.clone(), &b.sampled.clone(), k)?;
            entries.push(PoolEntry { recipe, sampled });
        }
        self.pools.insert((d, o), entries);
        Ok(())
    }

    /// Picks pool members of degrees `d1`, `d2` whose transvectant has order `o`.
    fn pick_pair(
        &self,
        rng: &mut ChaCha8Rng,
        d1: u32,
        d2: u32,
        o: u32,
    ) -> Option<(u32, usize, u32, usize, u32)> {
        let o1s = self.pool_orders(d1);
        if o1s.is_empty() {
            return None;
        }
        let o1 = o1s[rng.gen_range(0..o1s.len())];
        let o2s: Vec<u32> = self
            .pool_orders(d2)
            .into_iter()
            .filter(|&o2| {
                o2 + o1 >= o && (o1 + o2 - o).is_multiple_of(2) && (o1 + o2 - o) / 2 <= o1.min(o2)
            })
            .collect();
        if o2s.is_empty() {
            return None;
        }
        let o2 = o2s[rng.gen_range(0..o2s.len())];
        let i1 = rng.gen_range(0..self.pools[&(d1, o1)].len());
        let i2 = rng.gen_range(0..self.pools[&(d2, o2)].len());
        Some((o1, i1, o2, i2, (o1 + o2 - o) / 2))
    }

    /// A random invariant of degree `m`, as `(C1, C2)_o` over the pools.
    /// `None` when no candidate could be formed.
    pub fn random_invariant(
        &mut self,
        m: u32,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<(Recipe, Vec<u32>)>, SearchError> {
        if m < 2 || to_usize(&crate::hilbert::dim_invariants(ORDER, m)) == 0 {
            return Ok(None);
        }
        self.ensure_pools(m - 1)?;
        for _ in 0..64 {
            let d1 = rng.gen_range(1..=m / 2);
            let d2 = m - d1;
            let Some((o1, i1, o2, i2, k)) = self.pick_pair(rng, d1, d2, 0) else {
                continue;
            };
            if (d1, o1, i1) == (d2, o2, i2) && k % 2 == 1 {
                continue;
            }
            let (a, b) = (&self.pools[&(d1, o1)][i1], &self.pools[&(d2, o2)][i2]);
            let recipe = Recipe::transvectant(a.recipe.clone(), b.recipe.clone(), k);
            let (sa, sb) = (a.sampled.clone(), b.sampled.clone());
            let values = self.tv.apply_sampled(&sa, &sb, k)?.values;
            return Ok(Some((recipe, values)));
        }
        Ok(None)
    }

    /// Runs [`find_dm`](Self::find_dm) for every degree up to `max_degree`.
    /// Stops after the first degree that fails to saturate.
    pub fn run_through(
        &mut self,
        max_degree: u32,
        mut progress: impl FnMut(&DegreeReport),
    ) -> Result<(), SearchError> {
        let mut m = self.completed_through() + 1;
        while m <= max_degree {
            if let Some(last) = self.reports.last() {
                if last.status == Status::Incomplete {
                    return Ok(());
                }
            }
            let r = self.find_dm(m)?;
            progress(&r);
            m += 1;
        }
        Ok(())
    }

    /// Number of new basic invariants in degree `m`, given all lower degrees.
    pub fn find_dm(&mut self, m: u32) -> Result<DegreeReport, SearchError> {
        if m != self.completed_through() + 1 {
            return Err(SearchError::MissingSpan(m - 1));
        }
        if let Some(last) = self.reports.last() {
            if last.status == Status::Incomplete {
                return Err(SearchError::Upstream(last.degree));
            }
        }
        let n = self.points.len();
        let target = target_dim(m);
        if m == 2 {
            // j2 is the only quadratic invariant; it vanishes on the slice.
            let recipe = Recipe::parse("(f,f)_10")?;
            let values = self.sample_invariant(&recipe)?;
            self.basics.push(Basic {
                degree: 2,
                recipe: recipe.to_string(),
                values,
            });
            let report = DegreeReport {
                degree: 2,
                target: 0,
                products_rank: 0,
                rank: 0,
                dm: 1,
                candidates_tried: 0,
                status: Status::Complete,
                generators: vec![recipe.to_string()],
            };
            return Ok(self.finish(m, IncrementalSpan::new(self.field, n), report));
        }
        let mut span = IncrementalSpan::new(self.field, n);
        for b in self
            .basics
            .iter()
            .filter(|b| b.degree >= 4 && b.degree + 4 <= m)
        {
            if span.rank() >= target {
                break;
            }
            let Some(rest) = self.spans.get(&(m - b.degree)) else {
                continue;
            };
            for row in rest.rows() {
                span.insert(&hadamard(self.field, &b.values, row))?;
                if span.rank() >= target {
                    break;
                }
            }
        }
        let products_rank = span.rank();
        let mut generators = Vec::new();
        let mut tried = 0;
        let budget = self.config.budget_factor * target;
        let mut rng = stream(self.config.seed, &[2, m as u64]);
        let mut seen = BTreeSet::new();
        let mut misses = 0;
        while span.rank() < target && tried < budget && misses < 64 * budget.max(1) {
            let Some((recipe, values)) = self.random_invariant(m, &mut rng)? else {
                misses += 1;
                continue;
            };
            let text = recipe.to_string();
            if !seen.insert(text.clone()) {
                misses += 1;
                continue;
            }
            tried += 1;
            if span.insert(&values)? == Insertion::Independent {
                self.basics.push(Basic {
                    degree: m,
                    recipe: text.clone(),
                    values,
                });
                generators.push(text);
            }
        }
        let status = if span.rank() == target {
            Status::Complete
        } else {
            Status::Incomplete
        };
        let report = DegreeReport {
            degree: m,
            target,
            products_rank,
            rank: span.rank(),
            dm: generators.len(),
            candidates_tried: tried,
            status,
            generators,
        };
        Ok(self.finish(m, span, report))
    }

    fn finish(&mut self, m: u32, span: IncrementalSpan, report: DegreeReport) -> DegreeReport {
        self.spans.insert(m, span);
        self.reports.push(report.clone());
        report
    }

    /// Everything needed to resume after degree `m`.
    pub fn checkpoint(&self, m: u32) -> Option<DegreeCheckpoint> {
        let report = self.reports.iter().find(|r| r.degree == m)?.clone();
        Some(DegreeCheckpoint {
            report,
            rows: self.spans.get(&m)?.rows().to_vec(),
            basics: self
                .basics
                .iter()
                .filter(|b| b.degree == m)
                .cloned()
                .collect(),
        })
    }

    /// Replays a saved degree; degrees must be restored in order.
    pub fn restore(&mut self, cp: &DegreeCheckpoint) -> Result<(), SearchError> {
        let m = cp.report.degree;
        if m != self.completed_through() + 1 {
            return Err(SearchError::Checkpoint(alloc::format!(
                "expected degree {}, found {m}",
                self.completed_through() + 1
            )));
        }
        if cp
            .basics
            .iter()
            .any(|b| b.values.len() != self.points.len())
        {
            return Err(SearchError::Checkpoint("point count differs".into()));
        }
        let span = IncrementalSpan::from_rows(self.field, self.points.len(), &cp.rows)?;
        if span.rank() != cp.report.rank {
            return Err(SearchError::Checkpoint(alloc::format!(
                "rank mismatch in degree {m}"
            )));
        }
        self.basics.extend(cp.basics.iter().cloned());
        self.spans.insert(m, span);
        self.reports.push(cp.report.clone());
        Ok(())
    }

    /// Rank of the degree-`m` part of the ideal generated by `items` in the
    /// quotient by `j2`.
    pub fn ideal_dimension(
        &mut self,
        items: &[GeneratorItem],
        m: u32,
    ) -> Result<IdealReport, SearchError> {
        let target = target_dim(m);
        let through = search_degree_for(items, m);
        if through > self.completed_through() {
            return Err(SearchError::MissingSpan(through));
        }
        if self
            .reports
            .iter()
            .any(|r| r.degree <= through && r.status == Status::Incomplete)
        {
            return Err(SearchError::Upstream(through));
        }
        let mut gens: Vec<(u32, Vec<Vec<u32>>)> = Vec::new();
        for item in items {
            match item {
                GeneratorItem::Degree(d) => {
                    let rows = self
                        .spans
                        .get(d)
                        .ok_or(SearchError::MissingSpan(*d))?
                        .rows()
                        .to_vec();
                    gens.push((*d, rows));
                }
                GeneratorItem::Recipe { recipe, degree, .. } => {
                    let v = self.sample_invariant(recipe)?;
                    gens.push((*degree, vec![v]));
                }
            }
        }
        let n = self.points.len();
        let mut span = IncrementalSpan::new(self.field, n);
        let ones = vec![1u32; n];
        'outer: for (d, rows) in &gens {
            if *d > m {
                continue;
            }
            let rest: Vec<Vec<u32>> = if *d == m {
                vec![ones.clone()]
            } else {
                self.spans
                    .get(&(m - d))
                    .ok_or(SearchError::MissingSpan(m - d))?
                    .rows()
                    .to_vec()
            };
            for g in rows {
                for h in &rest {
                    span.insert(&hadamard(self.field, g, h))?;
                    if span.rank() >= target {
                        break 'outer;
                    }
                }
            }
        }
        Ok(IdealReport {
            degree: m,
            target,
            rank: span.rank(),
        })
    }
}

/// Highest degree the search must have completed before
/// [`SearchState::ideal_dimension`] can be asked about `items` in degree `m`.
pub fn search_degree_for(items: &[GeneratorItem], m: u32) -> u32 {
    items
        .iter()
        .map(|g| {
            let rest = m - g.degree().min(m);
            match g {
                GeneratorItem::Degree(d) => (*d).max(rest),
                _ => rest,
            }
        })
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealReport {
    pub degree: u32,
    pub target: usize,
    pub rank: usize,
}

impl IdealReport {
    pub fn is_full(&self) -> bool {
        self.rank == self.target
    }
}

/// A generator of an ideal in the quotient ring: every invariant of one
/// degree, or a single named invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorItem {
    Degree(u32),
    Recipe {
        label: String,
        recipe: Recipe,
        degree: u32,
    },
}

impl GeneratorItem {
    pub fn degree(&self) -> u32 {
        match self {
            GeneratorItem::Degree(d) => *d,
            GeneratorItem::Recipe { degree, .. } => *degree,
        }
    }

    pub fn label(&self) -> String {
        match self {
            GeneratorItem::Degree(d) => alloc::format!("I{d}"),
            GeneratorItem::Recipe { label, .. } => label.clone(),
        }
    }
}

/// Parses `4,6,8,9,j10,j14+A14`: integers select whole degrees, anything
/// else is a catalog recipe whose degree is computed.
pub fn parse_selection(text: &str) -> Result<Vec<GeneratorItem>, SearchError> {
    let defs = decimic_definitions();
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Ok(d) = part.parse::<u32>() {
            if d < 4 {
                return Err(SearchError::BadSelection(part.to_string()));
            }
            out.push(GeneratorItem::Degree(d));
            continue;
        }
        let recipe = Recipe::parse(part)?;
        let degree = recipe_degree(&recipe, &defs)
            .ok_or_else(|| SearchError::BadSelection(part.to_string()))?;
        out.push(GeneratorItem::Recipe {
            label: part.to_string(),
            recipe,
            degree,
        });
    }
    if out.is_empty() {
        return Err(SearchError::BadSelection(text.to_string()));
    }
    Ok(out)
}

fn recipe_degree(r: &Recipe, defs: &Definitions) -> Option<u32> {
    Some(match r {
        Recipe::Form => 1,
        Recipe::Ref(n) => recipe_degree(defs.get(n)?, defs)?,
        Recipe::Transvectant(a, b, _) | Recipe::Product(a, b) => {
            recipe_degree(a, defs)? + recipe_degree(b, defs)?
        }
        Recipe::Power(a, e) => recipe_degree(a, defs)? * e,
        Recipe::Sum(a, b) => {
            let (x, y) = (recipe_degree(a, defs)?, recipe_degree(b, defs)?);
            if x != y {
                return None;
            }
            x
        }
        Recipe::Scaled(_, a) => recipe_degree(a, defs)?,
    })
}

/// The cumulative generator selections and degrees at which the ideal they
/// generate should fill the whole graded piece.
pub const PRESETS: &[(&str, &str, u32, usize)] = &[
    ("all", "4,6,8,9,10,14", 24, 542),
    ("j14a14", "4,6,8,9,10,j14+A14", 28, 1148),
    ("j10", "4,6,8,9,j10,j14+A14", 20, 221),
    ("j9", "4,6,8,j9,j10,j14+A14", 27, 890),
    ("j8", "4,6,j8,j9,j10,j14+A14", 32, 2279),
    ("a6c6", "4,A6,C6,j8,j9,j10,j14+A14", 54, 37892),
];

pub fn preset(name: &str) -> Option<(Vec<GeneratorItem>, u32, usize)> {
    let (_, text, m, expected) = PRESETS.iter().find(|p| p.0 == name)?;
    Some((parse_selection(text).expect("presets parse"), *m, *expected))
}

/// Exponent vectors `e` with `sum e_i deg_i = m`, one per distinct monomial
/// in the basics.
pub fn products_of_basics(degrees: &[u32], m: u32) -> Vec<Vec<u32>> {
    fn go(degrees: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = degrees[i];
        let mut e = 0;
        loop {
            cur.push(e);
            go(degrees, i + 1, left - e * d, cur, out);
            cur.pop();
            if d == 0 || (e + 1) * d > left {
                break;
            }
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(degrees, 0, m, &mut Vec::new(), &mut out);
    out
}

/// Value vector of a monomial in basics given their value vectors.
pub fn product_values(
    field: PrimeField,
    basics: &[&[u32]],
    exps: &[u32],
    points: usize,
) -> Vec<u32> {
    let mut acc = vec![1u32; points];
    for (v, &e) in basics.iter().zip(exps) {
        for (a, &x) in acc.iter_mut().zip(v.iter()) {
            *a = field.mul(*a, field.pow(x, e as u64));
        }
    }
    acc
}

/// Convenience: `1` as a reduced polynomial, for building products.
pub fn reduced_one(field: PrimeField) -> Polynomial<u32> {
    let vars = VariableSet::new(&REDUCED_VARIABLES).expect("six names");
    Polynomial::one(&vars, &field)
}

/// Integer-valued polynomial reduced modulo `p` (for inputs with integer coefficients).
pub fn reduce_int(
    p: &crate::poly::IntPoly,
    field: PrimeField,
) -> Result<Polynomial<u32>, SearchError> {
    let q = p.map_coeffs(&crate::ring::Rationals, |c| {
        num_rational::BigRational::from_integer(c.clone())
    });
    reduce(&q, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::generic_rational_form;
    use crate::ring::{Rationals, Zp};

    #[test]
    fn slice_sends_j2_to_zero() {
        let vars = VariableSet::form_coefficients(10);
        let j2 = QPoly::parse(
            &vars,
            &Rationals,
            "a0*a10 - 10*a1*a9 + 45*a2*a8 - 120*a3*a7 + 210*a4*a6 - 126*a5^2",
        )
        .unwrap();
        assert_eq!(
            restrict_to_slice(&j2).unwrap(),
            QPoly::parse(&vars, &Rationals, "a0 + 45*a2*a8 - 126*a5^2").unwrap()
        );
        let f = PrimeField::new(109).unwrap();
        assert!(reduce(&j2, f).unwrap().is_zero());
        assert!(reduce(&j2.pow(2), f).unwrap().is_zero());
    }

    #[test]
    fn target_dimensions() {
        assert_eq!(target_dim(2), 0);
        assert_eq!(target_dim(4), 1);
        assert_eq!(target_dim(24), 542);
        assert_eq!(target_dim(48), 19860);
        assert_eq!(target_dim(7), 0);
    }

    #[test]
    fn fast_transvectant_matches_generic() {
        let field = PrimeField::new(197).unwrap();
        let mut rng = stream(5, &[9]);
        let mut tv = TvCache::new(field);
        for _ in 0..20 {
            let n = rng.gen_range(1..9u32);
            let m = rng.gen_range(1..9u32);
            let k = rng.gen_range(0..=n.min(m));
            let a: Vec<u32> = (0..=n).map(|_| rng.gen_range(0..197)).collect();
            let b: Vec<u32> = (0..=m).map(|_| rng.gen_range(0..197)).collect();
            let fa = crate::binform::BinaryForm::new(
                n,
                1,
                a.iter().map(|&x| Zp::new(field, x as u64)).collect(),
            )
            .unwrap();
            let fb = crate::binform::BinaryForm::new(
                m,
                1,
                b.iter().map(|&x| Zp::new(field, x as u64)).collect(),
            )
            .unwrap();
            let slow: Vec<u32> = fa
                .transvectant(&fb, k)
                .unwrap()
                .coeffs()
                .iter()
                .map(|z| z.value())
                .collect();
            assert_eq!(tv.apply(&a, &b, k).unwrap(), slow);
        }
    }

    #[test]
    fn reduced_polynomial_agrees_with_point_values() {
        let field = PrimeField::new(109).unwrap();
        let f = generic_rational_form(10);
        let k = f.transvectant(&f, 8).unwrap();
        let j4 = k
            .transvectant(&k, 4)
            .unwrap()
            .scalar_value()
            .unwrap()
            .clone();
        let reduced = reduce(&j4, field).unwrap();
        let mut state = SearchState::new(SearchConfig::new(109, 3, 8)).unwrap();
        let values = state
            .sample_invariant(&Recipe::parse("j4").unwrap())
            .unwrap();
        for (a, v) in state.points().to_vec().iter().zip(values) {
            assert_eq!(eval_reduced(&reduced, field, a), v);
        }
    }

    #[test]
    fn products_enumeration() {
        assert_eq!(products_of_basics(&[2], 4), vec![vec![2]]);
        let mut p = products_of_basics(&[2, 4], 6);
        p.sort();
        assert_eq!(p, vec![vec![1, 1], vec![3, 0]]);
        assert!(products_of_basics(&[4], 6).is_empty());
    }

    #[test]
    fn selection_parsing() {
        let s = parse_selection("4, 6, j10, j14+A14").unwrap();
        assert_eq!(
            s.iter().map(GeneratorItem::degree).collect::<Vec<_>>(),
            [4, 6, 10, 14]
        );
        assert!(parse_selection("2").is_err());
        assert!(parse_selection("").is_err());
        assert!(parse_selection("j2+j4").is_err());
    }

    #[test]
    fn low_degrees() {
        let mut s = SearchState::new(SearchConfig::for_degree(109, 1, 8)).unwrap();
        s.run_through(8, |_| {}).unwrap();
        let dm: Vec<usize> = s.reports().iter().map(|r| r.dm).collect();
        assert_eq!(dm, [1, 0, 1, 0, 4, 0, 5]);
        assert!(s.reports().iter().all(|r| r.status == Status::Complete));
    }

    #[test]
    fn small_prime_rejected() {
        assert!(SearchState::new(SearchConfig::new(47, 0, 4)).is_err());
    }
}
