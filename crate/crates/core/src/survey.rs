//! Frontier surveys over a catalog, the `n = 3` threshold and structure
//! checks, and batch verifiers for the finite-scale lemmas.
//!
//! Work is spread over groups on a dedicated thread pool and collected in
//! catalog order, so every report is independent of the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorphism::{conjugacy_representatives, AutSearchLimits, Automorphism, AutomorphismSet, Coverage};
use crate::catalog::{generate_family, Catalog, CatalogEntry, GroupSpec};
use crate::constructions::{
    check_coset_density, check_large_intersection, coset_relation_for, monotonicity_with_quotient,
    semidirect_with_cyclic, CosetDensityReport, LargeIntersectionReport,
};
use crate::density;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, NilpotencyClass, Subgroup};
use crate::splitting::{check_index_bound, twisted_solution_set, IndexBoundReport};
use crate::Density;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "SPLITAUT_WORKERS";

/// `SPLITAUT_WORKERS` if set to a positive integer, else the available
/// parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone)]
pub struct SurveyConfig {
    pub workers: usize,
    pub limits: AutSearchLimits,
    /// Scan only `α = id`, i.e. plain power sets `X_n(G)`.
    pub identity_only: bool,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig { workers: default_workers(), limits: AutSearchLimits::default(), identity_only: false }
    }
}

impl SurveyConfig {
    pub fn with_workers(workers: usize) -> Self {
        SurveyConfig { workers: workers.max(1), ..Self::default() }
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> T {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .expect("thread pool builds")
            .install(job)
    }
}

/// Timing and scheduling details; excluded from report comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    pub workers: usize,
    pub elapsed_ms: u64,
}

impl RunMeta {
    fn since(start: Instant, config: &SurveyConfig) -> Option<RunMeta> {
        Some(RunMeta { workers: config.workers, elapsed_ms: start.elapsed().as_millis() as u64 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassRestriction {
    All,
    Solvable,
}

/// All automorphisms of one group sharing a density.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRow {
    #[serde(with = "density::as_string")]
    pub density: Density,
    pub automorphisms: usize,
    /// Smallest image array with this density.
    pub representative: Vec<u32>,
    pub representative_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupScan {
    pub spec: GroupSpec,
    pub name: String,
    pub order: usize,
    pub coverage: Coverage,
    pub automorphisms: usize,
    /// Ascending by density.
    pub rows: Vec<DensityRow>,
}

impl GroupScan {
    pub fn is_partial(&self) -> bool {
        matches!(self.coverage, Coverage::Partial(_))
    }

    /// Automorphisms with `X_{n,α}(G) = G`.
    pub fn splitting(&self) -> Option<&DensityRow> {
        self.rows.last().filter(|r| r.density == Density::from_integer(1))
    }
}

/// Densities of every catalog group under its automorphisms of order
/// dividing `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogScan {
    pub n: u32,
    pub identity_only: bool,
    pub catalog_hash: String,
    pub max_order: usize,
    pub groups: Vec<GroupScan>,
}

fn scan_group(entry: &CatalogEntry, n: u32, config: &SurveyConfig) -> GroupScan {
    let auts = if config.identity_only {
        AutomorphismSet {
            automorphisms: vec![Automorphism::identity(&entry.group)],
            coverage: Coverage::OrderDividing(1),
        }
    } else {
        entry.group.survey_automorphisms(n, &config.limits)
    };
    let mut rows: BTreeMap<Density, DensityRow> = BTreeMap::new();
    for alpha in auts.iter() {
        let density = twisted_solution_set(&entry.group, alpha, n).expect("order divides n").density;
        rows.entry(density)
            .or_insert_with(|| DensityRow {
                density,
                automorphisms: 0,
                representative: alpha.images().into_iter().map(|i| i as u32).collect(),
                representative_order: alpha.order(),
            })
            .automorphisms += 1;
    }
    GroupScan {
        spec: entry.spec.clone(),
        name: entry.name.clone(),
        order: entry.group.order(),
        coverage: auts.coverage,
        automorphisms: auts.len(),
        rows: rows.into_values().collect(),
    }
}

pub fn scan_catalog(catalog: &Catalog, n: u32, config: &SurveyConfig) -> CatalogScan {
    let groups = config.run(|| catalog.entries.par_iter().map(|e| scan_group(e, n, config)).collect());
    CatalogScan {
        n,
        identity_only: config.identity_only,
        catalog_hash: catalog.hash(),
        max_order: catalog.max_order,
        groups,
    }
}

/// Density of `X_{n,α}` rebuilt from scratch: the group from its spec and
/// `α` from its images.
pub fn reproduce_density(spec: &GroupSpec, images: &[u32], n: u32) -> Result<Density> {
    let g = generate_family(spec)?;
    let images: Vec<usize> = images.iter().map(|&i| i as usize).collect();
    let alpha = Automorphism::new(&g, &images)?;
    Ok(twisted_solution_set(&g, &alpha, n)?.density)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub spec: GroupSpec,
    pub name: String,
    pub automorphism: Vec<u32>,
    pub automorphism_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageSummary {
    pub complete: usize,
    /// Groups whose automorphisms were only partly enumerated.
    pub partial: Vec<String>,
}

impl CoverageSummary {
    fn of(groups: &[&GroupScan]) -> Self {
        CoverageSummary {
            complete: groups.iter().filter(|g| !g.is_partial()).count(),
            partial: groups.iter().filter(|g| g.is_partial()).map(|g| g.name.clone()).collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.partial.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierRecord {
    pub n: u32,
    pub class_restriction: ClassRestriction,
    pub identity_only: bool,
    /// Largest density strictly below 1; absent on an empty frontier.
    #[serde(with = "density::opt_as_string")]
    pub best_density: Option<Density>,
    pub witness: Option<Witness>,
    pub empty_frontier: bool,
    pub orders_scanned: (usize, usize),
    pub automorphism_coverage: CoverageSummary,
    pub catalog_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub frontier: FrontierRecord,
    pub groups: Vec<GroupScan>,
    /// Pairs checked against their recorded density after the scan.
    pub witnesses_reverified: usize,
    pub reverification_failures: Vec<String>,
    pub meta: Option<RunMeta>,
}

impl SurveyReport {
    /// JSON with timing and worker details removed.
    pub fn scrubbed_json(&self) -> String {
        let mut copy = self.clone();
        copy.meta = None;
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }

    /// One CSV row per (group, density) with a representative automorphism.
    pub fn summary_csv(&self) -> String {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(["group", "order", "automorphism_order", "density", "automorphisms", "flags"])
            .expect("in-memory write");
        let witness = self.frontier.witness.as_ref();
        for g in &self.groups {
            for row in &g.rows {
                let mut flags = Vec::new();
                if g.is_partial() {
                    flags.push("partial");
                }
                if row.density == Density::from_integer(1) {
                    flags.push("splitting");
                }
                if witness.is_some_and(|w| w.spec == g.spec && w.automorphism == row.representative) {
                    flags.push("frontier");
                }
                out.write_record([
                    g.name.clone(),
                    g.order.to_string(),
                    row.representative_order.to_string(),
                    density::fraction_string(&row.density),
                    row.automorphisms.to_string(),
                    flags.join(";"),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(out.into_inner().expect("flush")).expect("utf8")
    }

    pub fn passed(&self) -> bool {
        self.reverification_failures.is_empty()
    }
}

/// Frontier from an existing scan.
pub fn frontier_from_scan(scan: &CatalogScan, restriction: ClassRestriction, catalog: &Catalog) -> SurveyReport {
    let keep: Vec<bool> =
        catalog.entries.iter().map(|e| restriction == ClassRestriction::All || e.group.is_solvable()).collect();
    let groups: Vec<&GroupScan> = scan.groups.iter().zip(&keep).filter(|(_, &k)| k).map(|(g, _)| g).collect();
    let one = Density::from_integer(1);
    let mut best: Option<(Density, &GroupScan, &DensityRow)> = None;
    for g in &groups {
        for row in g.rows.iter().filter(|r| r.density < one) {
            if best.is_none_or(|(d, _, _)| row.density > d) {
                best = Some((row.density, g, row));
            }
        }
    }
    let witness = best.map(|(_, g, row)| Witness {
        spec: g.spec.clone(),
        name: g.name.clone(),
        automorphism: row.representative.clone(),
        automorphism_order: row.representative_order,
    });
    let mut reverified = 0;
    let mut failures = Vec::new();
    if let (Some(w), Some((d, _, _))) = (&witness, best) {
        reverified += 1;
        match reproduce_density(&w.spec, &w.automorphism, scan.n) {
            Ok(r) if r == d => {}
            other => failures.push(format!("frontier witness {} re-evaluates to {other:?}", w.name)),
        }
    }
    for (g, entry) in scan.groups.iter().zip(&catalog.entries).zip(&keep).filter(|(_, &k)| k).map(|(p, _)| p) {
        for row in &g.rows {
            reverified += 1;
            let images: Vec<usize> = row.representative.iter().map(|&i| i as usize).collect();
            let again = Automorphism::new(&entry.group, &images)
                .and_then(|a| twisted_solution_set(&entry.group, &a, scan.n))
                .map(|x| x.density);
            if again.as_ref().ok() != Some(&row.density) {
                failures.push(format!("{} row {} re-evaluates to {again:?}", g.name, row.density));
            }
        }
    }
    let frontier = FrontierRecord {
        n: scan.n,
        class_restriction: restriction,
        identity_only: scan.identity_only,
        best_density: best.map(|(d, _, _)| d),
        empty_frontier: witness.is_none(),
        witness,
        orders_scanned: (1, scan.max_order),
        automorphism_coverage: CoverageSummary::of(&groups),
        catalog_hash: scan.catalog_hash.clone(),
    };
    SurveyReport {
        frontier,
        groups: groups.into_iter().cloned().collect(),
        witnesses_reverified: reverified,
        reverification_failures: failures,
        meta: None,
    }
}

/// Largest density strictly below 1 over the catalog and automorphisms of
/// order dividing `n`; ties go to the earlier catalog entry.
pub fn survey_c_n(catalog: &Catalog, n: u32, restriction: ClassRestriction, config: &SurveyConfig) -> SurveyReport {
    let start = Instant::now();
    let scan = scan_catalog(catalog, n, config);
    let mut report = frontier_from_scan(&scan, restriction, catalog);
    report.meta = RunMeta::since(start, config);
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandViolation {
    pub spec: GroupSpec,
    pub name: String,
    #[serde(with = "density::as_string")]
    pub density: Density,
    pub automorphism: Vec<u32>,
    pub automorphisms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub catalog_hash: String,
    pub max_order: usize,
    pub groups: usize,
    pub pairs_checked: usize,
    pub coverage: CoverageSummary,
    /// Set when some group's automorphisms were only partly enumerated.
    pub checked_on_covered_automorphisms: bool,
    /// Pairs with density in `(7/8, 1)`.
    pub above_7_8: Vec<BandViolation>,
    /// Pairs with density in `(15/16, 1)`.
    pub above_15_16: Vec<BandViolation>,
    #[serde(with = "density::opt_as_string")]
    pub largest_density_below_1: Option<Density>,
    pub meta: Option<RunMeta>,
}

impl ThresholdReport {
    pub fn passed(&self) -> bool {
        self.above_7_8.is_empty() && self.above_15_16.is_empty()
    }

    pub fn scrubbed_json(&self) -> String {
        let mut copy = self.clone();
        copy.meta = None;
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }
}

pub fn threshold_from_scan(scan: &CatalogScan) -> ThresholdReport {
    assert_eq!(scan.n, 3, "threshold bands concern n = 3");
    let one = Density::from_integer(1);
    let band = |low: Density| -> Vec<BandViolation> {
        scan.groups
            .iter()
            .flat_map(|g| {
                g.rows.iter().filter(move |r| r.density > low && r.density < one).map(move |r| BandViolation {
                    spec: g.spec.clone(),
                    name: g.name.clone(),
                    density: r.density,
                    automorphism: r.representative.clone(),
                    automorphisms: r.automorphisms,
                })
            })
            .collect()
    };
    let refs: Vec<&GroupScan> = scan.groups.iter().collect();
    let coverage = CoverageSummary::of(&refs);
    ThresholdReport {
        catalog_hash: scan.catalog_hash.clone(),
        max_order: scan.max_order,
        groups: scan.groups.len(),
        pairs_checked: scan.groups.iter().map(|g| g.automorphisms).sum(),
        checked_on_covered_automorphisms: !coverage.is_complete(),
        coverage,
        above_7_8: band(Density::new(7, 8)),
        above_15_16: band(Density::new(15, 16)),
        largest_density_below_1: scan.groups.iter().flat_map(|g| &g.rows).map(|r| r.density).filter(|&d| d < one).max(),
        meta: None,
    }
}

/// Every `(G, α)` with `α^3 = 1` whose density lies in `(7/8, 1)` or
/// `(15/16, 1)`. Both lists are expected to be empty.
pub fn verify_threshold_theorem(catalog: &Catalog, config: &SurveyConfig) -> ThresholdReport {
    let start = Instant::now();
    let mut report = threshold_from_scan(&scan_catalog(catalog, 3, config));
    report.meta = RunMeta::since(start, config);
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureResult {
    pub spec: GroupSpec,
    pub name: String,
    pub splitting_automorphisms: usize,
    pub two_engel: bool,
    pub nilpotency_class: NilpotencyClass,
    /// `[a,b,c] = [a,c,b]^{-1}` for all triples.
    pub commutator_identity: bool,
}

impl StructureResult {
    pub fn passed(&self) -> bool {
        self.two_engel && self.nilpotency_class.at_most(3) && self.commutator_identity
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub catalog_hash: String,
    pub max_order: usize,
    pub groups_checked: usize,
    /// Groups without a splitting automorphism of order dividing 3.
    pub vacuous: usize,
    pub coverage: CoverageSummary,
    pub results: Vec<StructureResult>,
    pub meta: Option<RunMeta>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(StructureResult::passed)
    }
}

/// `[a,b,c] = [a,c,b]^{-1}` over all triples, or the first failing triple.
pub fn commutator_identity_witness(g: &FiniteGroup) -> Option<(usize, usize, usize)> {
    let n = g.order();
    for a in 0..n {
        for b in 0..n {
            let ab = g.comm(a, b);
            for c in 0..n {
                let lhs = g.comm(ab, c);
                let rhs = g.inv(g.comm(g.comm(a, c), b));
                if lhs != rhs {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

pub fn structure_from_scan(scan: &CatalogScan, catalog: &Catalog, config: &SurveyConfig) -> StructureReport {
    assert_eq!(scan.n, 3, "structure checks concern n = 3");
    let results: Vec<Option<StructureResult>> = config.run(|| {
        scan.groups
            .par_iter()
            .zip(&catalog.entries)
            .map(|(g, entry)| {
                let row = g.splitting()?;
                let group = &entry.group;
                Some(StructureResult {
                    spec: g.spec.clone(),
                    name: g.name.clone(),
                    splitting_automorphisms: row.automorphisms,
                    two_engel: group.is_two_engel(),
                    nilpotency_class: group.nilpotency_class(),
                    commutator_identity: commutator_identity_witness(group).is_none(),
                })
            })
            .collect()
    });
    let refs: Vec<&GroupScan> = scan.groups.iter().collect();
    StructureReport {
        catalog_hash: scan.catalog_hash.clone(),
        max_order: scan.max_order,
        groups_checked: scan.groups.len(),
        vacuous: results.iter().filter(|r| r.is_none()).count(),
        coverage: CoverageSummary::of(&refs),
        results: results.into_iter().flatten().collect(),
        meta: None,
    }
}

/// For every `(G, α)` with `α^3 = 1` and `X_{3,α}(G) = G`: `G` is 2-Engel,
/// of class at most 3, and satisfies `[a,b,c] = [a,c,b]^{-1}`.
pub fn verify_splitting_structure(catalog: &Catalog, config: &SurveyConfig) -> StructureReport {
    let start = Instant::now();
    let scan = scan_catalog(catalog, 3, config);
    let mut report = structure_from_scan(&scan, catalog, config);
    report.meta = RunMeta::since(start, config);
    report
}

/// Inner automorphisms by the generators of `G` plus up to eight members of
/// `set`, all in `Aut(G)`.
fn conjugator_sample(g: &FiniteGroup, set: &AutomorphismSet) -> Vec<Automorphism> {
    let mut out: Vec<Automorphism> = g.generators().iter().map(|&x| g.conjugation_automorphism(x)).collect();
    let members: Vec<&Automorphism> = set.iter().filter(|a| !a.is_identity()).collect();
    let stride = (members.len() / 8).max(1);
    out.extend(members.iter().step_by(stride).take(8).map(|&a| a.clone()));
    out
}

/// One representative per orbit of `set` under conjugation by a sample of
/// `Aut(G)`, with orbit sizes. Conjugate pairs `(G, α)`, `(G, βαβ^{-1})` are
/// related by the automorphism `β`, which carries every statement checked
/// here from one to the other.
fn orbit_representatives<'a>(g: &FiniteGroup, set: &'a AutomorphismSet) -> Vec<(&'a Automorphism, usize)> {
    let reps = conjugacy_representatives(&set.automorphisms, &conjugator_sample(g, set));
    reps.into_iter().map(|(i, size)| (&set.automorphisms[i], size)).collect()
}

fn complete_set(g: &FiniteGroup, n: u32, limits: &AutSearchLimits) -> AutomorphismSet {
    g.survey_automorphisms(n, limits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleFailure {
    pub name: String,
    pub n: u32,
    pub automorphism: Vec<u32>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationBatchReport {
    pub catalog_hash: String,
    pub max_order: usize,
    pub ns: Vec<u32>,
    /// `(G, α, n)` tuples covered, counting whole conjugation orbits.
    pub tuples_covered: usize,
    /// Orbit representatives checked directly.
    pub representatives_checked: usize,
    pub coverage: CoverageSummary,
    pub failures: Vec<TupleFailure>,
    pub meta: Option<RunMeta>,
}

impl RelationBatchReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The coset relation for every catalog group, `n ∈ ns` and automorphism of
/// order dividing `n`.
pub fn verify_relations(catalog: &Catalog, ns: &[u32], config: &SurveyConfig) -> RelationBatchReport {
    let start = Instant::now();
    type Out = (usize, usize, Vec<String>, Vec<TupleFailure>);
    let per_group: Vec<Out> = config.run(|| {
        catalog
            .entries
            .par_iter()
            .map(|entry| {
                let g = &entry.group;
                let (mut covered, mut checked, mut partial, mut failures) = (0, 0, Vec::new(), Vec::new());
                for &n in ns {
                    let set = complete_set(g, n, &config.limits);
                    if matches!(set.coverage, Coverage::Partial(_)) {
                        partial.push(format!("{} (n={n})", entry.name));
                    }
                    for (alpha, size) in orbit_representatives(g, &set) {
                        covered += size;
                        checked += 1;
                        let outcome = semidirect_with_cyclic(g, alpha, n).and_then(|p| {
                            let x = twisted_solution_set(g, alpha, n)?;
                            Ok(coset_relation_for(&p, &x))
                        });
                        let detail = match outcome {
                            Ok(r) if r.equal => continue,
                            Ok(r) => format!("sides differ: {} vs {}", r.lhs_size, r.rhs_size),
                            Err(e) => e.to_string(),
                        };
                        failures.push(TupleFailure { name: entry.name.clone(), n, automorphism: raw(alpha), detail });
                    }
                }
                (covered, checked, partial, failures)
            })
            .collect()
    });
    let mut report = RelationBatchReport {
        catalog_hash: catalog.hash(),
        max_order: catalog.max_order,
        ns: ns.to_vec(),
        tuples_covered: 0,
        representatives_checked: 0,
        coverage: CoverageSummary { complete: 0, partial: Vec::new() },
        failures: Vec::new(),
        meta: None,
    };
    for (covered, checked, partial, failures) in per_group {
        report.tuples_covered += covered;
        report.representatives_checked += checked;
        if partial.is_empty() {
            report.coverage.complete += 1;
        }
        report.coverage.partial.extend(partial);
        report.failures.extend(failures);
    }
    report.meta = RunMeta::since(start, config);
    report
}

fn raw(alpha: &Automorphism) -> Vec<u32> {
    alpha.images().into_iter().map(|i| i as u32).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityBatchReport {
    pub catalog_hash: String,
    pub max_order: usize,
    pub ns: Vec<u32>,
    /// `(G, α, n)` tuples covered, counting whole conjugation orbits.
    pub tuples_covered: usize,
    pub representatives_checked: usize,
    /// `(α, N)` pairs with `N` normal and `α`-invariant.
    pub quotient_checks: usize,
    /// Representatives whose splitting quotients intersect trivially.
    pub residual_applicable: usize,
    pub coverage: CoverageSummary,
    pub failures: Vec<TupleFailure>,
    pub meta: Option<RunMeta>,
}

impl MonotonicityBatchReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Quotient monotonicity for every `α`-invariant normal subgroup, and the
/// residual criterion: splitting quotients with trivial intersection force
/// `X_{n,α}(G) = G`.
pub fn verify_monotonicity(catalog: &Catalog, ns: &[u32], config: &SurveyConfig) -> MonotonicityBatchReport {
    let start = Instant::now();
    type Out = (usize, usize, usize, usize, Vec<String>, Vec<TupleFailure>);
    let per_group: Vec<Out> = config.run(|| {
        catalog
            .entries
            .par_iter()
            .map(|entry| {
                let g = &entry.group;
                let quotients: Vec<_> = g
                    .normal_subgroups()
                    .into_iter()
                    .map(|nsub| {
                        let q = g.quotient(&nsub).expect("normal");
                        (nsub, q)
                    })
                    .collect();
                let mut out: Out = (0, 0, 0, 0, Vec::new(), Vec::new());
                for &n in ns {
                    let set = complete_set(g, n, &config.limits);
                    if matches!(set.coverage, Coverage::Partial(_)) {
                        out.4.push(format!("{} (n={n})", entry.name));
                    }
                    for (alpha, size) in orbit_representatives(g, &set) {
                        out.0 += size;
                        out.1 += 1;
                        let x_g = twisted_solution_set(g, alpha, n).expect("order divides n");
                        let mut intersection = vec![true; g.order()];
                        let mut fail = |detail: String| {
                            out.5.push(TupleFailure { name: entry.name.clone(), n, automorphism: raw(alpha), detail })
                        };
                        for (nsub, q) in &quotients {
                            if alpha.stabilizes(nsub).is_some() {
                                continue;
                            }
                            out.2 += 1;
                            match monotonicity_with_quotient(g, alpha, n, nsub, q, &x_g) {
                                Ok((r, x_q)) => {
                                    if !r.ok {
                                        fail(format!("|N|={}: {} > {}", nsub.order(), r.density_g, r.density_q));
                                    }
                                    if x_q.is_everything() && !nsub.is_trivial() {
                                        for (slot, &m) in intersection.iter_mut().zip(nsub.mask()) {
                                            *slot &= m;
                                        }
                                    }
                                }
                                Err(e) => fail(format!("|N|={}: {e}", nsub.order())),
                            }
                        }
                        if intersection.iter().filter(|&&b| b).count() == 1 {
                            out.3 += 1;
                            if !x_g.is_everything() {
                                fail("splitting quotients intersect trivially but X != G".into());
                            }
                        }
                    }
                }
                out
            })
            .collect()
    });
    let mut report = MonotonicityBatchReport {
        catalog_hash: catalog.hash(),
        max_order: catalog.max_order,
        ns: ns.to_vec(),
        tuples_covered: 0,
        representatives_checked: 0,
        quotient_checks: 0,
        residual_applicable: 0,
        coverage: CoverageSummary { complete: 0, partial: Vec::new() },
        failures: Vec::new(),
        meta: None,
    };
    for (covered, checked, quotient_checks, residual, partial, failures) in per_group {
        report.tuples_covered += covered;
        report.representatives_checked += checked;
        report.quotient_checks += quotient_checks;
        report.residual_applicable += residual;
        if partial.is_empty() {
            report.coverage.complete += 1;
        }
        report.coverage.partial.extend(partial);
        report.failures.extend(failures);
    }
    report.meta = RunMeta::since(start, config);
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HughesFailure {
    pub name: String,
    pub report: IndexBoundReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HughesBatchReport {
    pub catalog_hash: String,
    pub max_order: usize,
    pub ns: Vec<u32>,
    pub checked: usize,
    /// Checks where `H_n(G) = 1` or `X_n(G) = G`, so only containment applies.
    pub vacuous: usize,
    pub failures: Vec<HughesFailure>,
    pub meta: Option<RunMeta>,
}

impl HughesBatchReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_hughes_thompson(catalog: &Catalog, ns: &[u32], config: &SurveyConfig) -> HughesBatchReport {
    let start = Instant::now();
    let reports: Vec<(String, IndexBoundReport)> = config.run(|| {
        catalog
            .entries
            .par_iter()
            .flat_map_iter(|e| ns.iter().map(move |&n| (e.name.clone(), check_index_bound(&e.group, n))))
            .collect()
    });
    HughesBatchReport {
        catalog_hash: catalog.hash(),
        max_order: catalog.max_order,
        ns: ns.to_vec(),
        checked: reports.len(),
        vacuous: reports.iter().filter(|(_, r)| r.vacuous).count(),
        failures: reports
            .into_iter()
            .filter(|(_, r)| !r.passed())
            .map(|(name, report)| HughesFailure { name, report })
            .collect(),
        meta: RunMeta::since(start, config),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaGroupSummary {
    pub name: String,
    pub draws: usize,
    /// Draws whose lower bound `1 - kε` is positive.
    pub nonvacuous: usize,
    pub failures: Vec<LargeIntersectionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPairSummary {
    pub name: String,
    pub normal_order: usize,
    pub draws: usize,
    pub failures: Vec<CosetDensityReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub catalog_hash: String,
    pub intersection: Vec<LemmaGroupSummary>,
    pub coset: Vec<CosetPairSummary>,
    pub meta: Option<RunMeta>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.intersection.iter().all(|g| g.failures.is_empty()) && self.coset.iter().all(|p| p.failures.is_empty())
    }
}

/// `count` catalog entries of order at least 4, evenly spread.
pub fn lemma_groups(catalog: &Catalog, count: usize) -> Vec<&CatalogEntry> {
    let eligible: Vec<&CatalogEntry> = catalog.iter().filter(|e| e.group.order() >= 4).collect();
    if eligible.len() <= count {
        return eligible;
    }
    (0..count).map(|i| eligible[i * (eligible.len() - 1) / (count - 1).max(1)]).collect()
}

/// Up to `count` pairs `(G, N)` with `N` a proper nontrivial normal subgroup,
/// taking the middle such subgroup of each eligible group in turn.
pub fn lemma_pairs(catalog: &Catalog, count: usize) -> Vec<(&CatalogEntry, Subgroup)> {
    let eligible: Vec<(&CatalogEntry, Subgroup)> = catalog
        .iter()
        .filter_map(|e| {
            let proper: Vec<Subgroup> =
                e.group.normal_subgroups().into_iter().filter(|s| !s.is_trivial() && !s.is_whole()).collect();
            let mid = proper.len() / 2;
            proper.into_iter().nth(mid).map(|s| (e, s))
        })
        .collect();
    if eligible.len() <= count {
        return eligible;
    }
    let len = eligible.len();
    let picks: Vec<usize> = (0..count).map(|i| i * (len - 1) / (count - 1).max(1)).collect();
    eligible.into_iter().enumerate().filter(|(i, _)| picks.contains(i)).map(|(_, p)| p).collect()
}

fn stream(seed: u64, index: usize, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (index as u64).rotate_left(32))
}

/// Random translate-intersection and coset-count checks. Half of the
/// intersection draws take `|A|` large enough that the bound is positive.
pub fn check_lemmas(
    catalog: &Catalog,
    groups: usize,
    pairs: usize,
    seed: u64,
    intersection_draws: usize,
    coset_draws: usize,
    config: &SurveyConfig,
) -> Result<LemmaReport> {
    let start = Instant::now();
    let chosen = lemma_groups(catalog, groups);
    let chosen_pairs = lemma_pairs(catalog, pairs);
    let intersection = config.run(|| {
        chosen
            .par_iter()
            .enumerate()
            .map(|(i, e)| intersection_draws_for(e, seed, i, intersection_draws))
            .collect::<Result<Vec<_>>>()
    })?;
    let coset = config.run(|| {
        chosen_pairs
            .par_iter()
            .enumerate()
            .map(|(i, (e, nsub))| coset_draws_for(e, nsub, seed, i, coset_draws))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(LemmaReport { seed, catalog_hash: catalog.hash(), intersection, coset, meta: RunMeta::since(start, config) })
}

fn intersection_draws_for(e: &CatalogEntry, seed: u64, index: usize, draws: usize) -> Result<LemmaGroupSummary> {
    let g = &e.group;
    let order = g.order();
    let mut rng = stream(seed, index, 1);
    let mut summary = LemmaGroupSummary { name: e.name.clone(), draws, nonvacuous: 0, failures: Vec::new() };
    for draw in 0..draws {
        let k = rng.random_range(1..=4usize);
        let min = if draw % 2 == 0 { order - order / (k + 1) } else { 1 };
        let size = rng.random_range(min.max(1)..=order);
        let a = sample(&mut rng, order, size).into_vec();
        let shifts: Vec<usize> = (0..k).map(|_| rng.random_range(0..order)).collect();
        let r = check_large_intersection(g, &a, &shifts)?;
        summary.nonvacuous += usize::from(!r.vacuous);
        if !r.ok {
            summary.failures.push(r);
        }
    }
    Ok(summary)
}

fn coset_draws_for(
    e: &CatalogEntry,
    nsub: &Subgroup,
    seed: u64,
    index: usize,
    draws: usize,
) -> Result<CosetPairSummary> {
    let g = &e.group;
    let mut rng = stream(seed, index, 2);
    let mut summary =
        CosetPairSummary { name: e.name.clone(), normal_order: nsub.order(), draws, failures: Vec::new() };
    for _ in 0..draws {
        let size = rng.random_range(1..=g.order());
        let a = sample(&mut rng, g.order(), size).into_vec();
        let r = check_coset_density(g, &a, nsub)?;
        if !(r.ine1_ok && r.ine2_ok) {
            summary.failures.push(r);
        }
    }
    Ok(summary)
}

/// Rejects a catalog that no longer matches a recorded manifest hash.
pub fn ensure_catalog(catalog: &Catalog, hash: &str) -> Result<()> {
    if catalog.hash() == hash {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("catalog hash {} does not match {hash}", catalog.hash())))
    }
}
