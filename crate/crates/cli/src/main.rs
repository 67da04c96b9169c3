use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use splitaut::automorphism::AutSearchLimits;
use splitaut::catalog::{
    self, enumerate_catalog_with, export_group, fingerprint, generate_family, import_automorphism, import_group_file,
    CatalogFilter, GroupSpec,
};
use splitaut::constructions::{semidirect_with_cyclic, verify_coset_relation, verify_quotient_monotonicity};
use splitaut::density::fraction_string;
use splitaut::splitting::{check_index_bound, twisted_solution_set};
use splitaut::survey::{self, ClassRestriction, SurveyConfig, WORKERS_ENV};
use splitaut::{Automorphism, Error, FiniteGroup, Subgroup};

#[derive(Parser)]
#[command(name = "splitaut", version, about = "Twisted power sets, splitting automorphisms and c_n surveys")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frontier survey of densities strictly below 1.
    Survey(SurveyArgs),
    /// Look for n = 3 densities in (7/8, 1) or (15/16, 1).
    VerifyThreshold(CorpusArgs),
    /// 2-Engel, class and commutator checks on groups with a splitting automorphism of order 3.
    VerifyStructure(CorpusArgs),
    /// The coset relation for one (G, α, n) or over a catalog.
    VerifyRelation(BatchArgs),
    /// Quotient monotonicity for one (G, α, n, N) or over a catalog.
    VerifyMonotonicity(MonotonicityArgs),
    /// Seeded random checks of the translate-intersection and coset-count inequalities.
    CheckLemmas(LemmaArgs),
    /// Exact density of X_{n,α}(G).
    Fraction(FractionArgs),
    /// Hughes-Thompson subgroup and index bound.
    Hughes(HughesArgs),
    /// Automorphism count and order histogram.
    Aut(AutArgs),
    /// Build G ⋊ C_n and write it as a group file.
    Semidirect(SemidirectArgs),
    /// Catalog manifest.
    Catalog(CorpusArgs),
    /// Validate a group file.
    Import(ImportArgs),
    /// Write a named family instance as a group file.
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct CorpusArgs {
    #[arg(long, default_value_t = 64)]
    max_order: usize,
    #[arg(long)]
    solvable_only: bool,
    /// Keep only groups of prime-power order for this prime.
    #[arg(long)]
    p_group: Option<u64>,
    /// Keep only groups whose exponent divides this value.
    #[arg(long)]
    exponent_divides: Option<u64>,
    /// Extra group files joined into the catalog.
    #[arg(long = "include")]
    include: Vec<PathBuf>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Node budget of the automorphism search per group.
    #[arg(long)]
    node_budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Survey plain power sets only.
    #[arg(long)]
    identity_only: bool,
    /// Summary CSV path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GroupArgs {
    /// Group file.
    #[arg(long, conflicts_with = "spec")]
    group: Option<PathBuf>,
    /// Family call such as `dihedral(4)`.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Args)]
struct BatchArgs {
    #[command(flatten)]
    target: GroupArgs,
    /// Automorphism file; identity when absent.
    #[arg(long)]
    aut: Option<PathBuf>,
    /// One value for a single check; several for a catalog batch.
    #[arg(long = "n", num_args = 1..)]
    n: Vec<u32>,
    #[command(flatten)]
    corpus: CorpusArgs,
}

#[derive(Args)]
struct MonotonicityArgs {
    #[command(flatten)]
    batch: BatchArgs,
    /// Normal subgroup as a JSON array of element indices.
    #[arg(long)]
    normal: Option<PathBuf>,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draws per group for the intersection bound.
    #[arg(long, default_value_t = 1000)]
    draws: usize,
    /// Draws per (group, normal subgroup) pair.
    #[arg(long, default_value_t = 500)]
    coset_draws: usize,
    #[arg(long, default_value_t = 10)]
    groups: usize,
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    #[arg(long, default_value_t = 32)]
    max_order: usize,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FractionArgs {
    #[command(flatten)]
    target: GroupArgs,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    aut: Option<PathBuf>,
}

#[derive(Args)]
struct HughesArgs {
    #[command(flatten)]
    target: GroupArgs,
    #[arg(long)]
    n: u32,
}

#[derive(Args)]
struct AutArgs {
    #[command(flatten)]
    target: GroupArgs,
    /// Restrict to automorphisms of order dividing n.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    node_budget: Option<u64>,
}

#[derive(Args)]
struct SemidirectArgs {
    #[command(flatten)]
    target: GroupArgs,
    #[arg(long)]
    aut: PathBuf,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ImportArgs {
    file: PathBuf,
    /// Write the group back out in table form.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Family call such as `dihedral(4)`.
    spec: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Ok
    } else {
        Verdict::Failed
    }
}

fn run(command: Command) -> splitaut::Result<Verdict> {
    match command {
        Command::Survey(a) => cmd_survey(a),
        Command::VerifyThreshold(a) => {
            let (cat, config) = corpus(&a)?;
            let report = survey::verify_threshold_theorem(&cat, &config);
            println!(
                "threshold n=3: {} groups, {} pairs, {} in (7/8,1), {} in (15/16,1){}",
                report.groups,
                report.pairs_checked,
                report.above_7_8.len(),
                report.above_15_16.len(),
                if report.checked_on_covered_automorphisms { " (checked on covered automorphisms)" } else { "" }
            );
            emit(&a.out, &report)?;
            Ok(verdict(report.passed()))
        }
        Command::VerifyStructure(a) => {
            let (cat, config) = corpus(&a)?;
            let report = survey::verify_splitting_structure(&cat, &config);
            println!(
                "structure: {} groups, {} with a splitting automorphism, {} vacuous, {} failing",
                report.groups_checked,
                report.results.len(),
                report.vacuous,
                report.results.iter().filter(|r| !r.passed()).count()
            );
            emit(&a.out, &report)?;
            Ok(verdict(report.passed()))
        }
        Command::VerifyRelation(a) => cmd_relation(a),
        Command::VerifyMonotonicity(a) => cmd_monotonicity(a),
        Command::CheckLemmas(a) => {
            let cat = enumerate_catalog_with(a.max_order, &CatalogFilter::default(), &[])?;
            let config = SurveyConfig::with_workers(a.workers.unwrap_or_else(survey::default_workers));
            let report = survey::check_lemmas(&cat, a.groups, a.pairs, a.seed, a.draws, a.coset_draws, &config)?;
            let failures: usize = report.intersection.iter().map(|g| g.failures.len()).sum::<usize>()
                + report.coset.iter().map(|p| p.failures.len()).sum::<usize>();
            println!(
                "lemmas seed={}: {} groups x {} draws, {} pairs x {} draws, {failures} failures",
                a.seed,
                report.intersection.len(),
                a.draws,
                report.coset.len(),
                a.coset_draws
            );
            emit(&a.out, &report)?;
            Ok(verdict(report.passed()))
        }
        Command::Fraction(a) => {
            let g = load_group(&a.target)?;
            let alpha = load_aut(&g, a.aut.as_deref())?;
            println!("{}", fraction_string(&twisted_solution_set(&g, &alpha, a.n)?.density));
            Ok(Verdict::Ok)
        }
        Command::Hughes(a) => {
            let g = load_group(&a.target)?;
            let r = check_index_bound(&g, a.n);
            let bound = r.bound.map_or("none".to_string(), |b| fraction_string(&b));
            let verdict_text = match r.bound_ok {
                None => "vacuous",
                Some(true) => "holds",
                Some(false) => "violated",
            };
            println!(
                "H_{}: order {}, index {}, density {}, bound {}, containment {}, index bound {}",
                a.n,
                r.hn_order,
                r.hn_index,
                fraction_string(&r.density),
                bound,
                if r.containment_ok { "holds" } else { "violated" },
                verdict_text
            );
            Ok(verdict(r.passed()))
        }
        Command::Aut(a) => {
            let g = load_group(&a.target)?;
            let mut limits = AutSearchLimits::default();
            if let Some(b) = a.node_budget {
                limits.node_budget = b;
            }
            let set = match a.n {
                Some(n) => g.automorphisms_of_order_dividing_with(n, &limits)?,
                None => g.automorphism_group_with(&limits)?,
            };
            println!("|Aut| = {}", set.len());
            for (order, count) in set.order_histogram() {
                println!("order {order}: {count}");
            }
            Ok(Verdict::Ok)
        }
        Command::Semidirect(a) => {
            let g = load_group(&a.target)?;
            let alpha = load_aut(&g, Some(&a.aut))?;
            let p = semidirect_with_cyclic(&g, &alpha, a.n)?;
            let name = format!("{}:C{}", group_name(&a.target), a.n);
            write_json(&a.out, &export_group(&p.group, &name))?;
            println!("order {} written to {}", p.group.order(), a.out.display());
            Ok(verdict(p.verify_structure(&g)))
        }
        Command::Catalog(a) => {
            let (cat, _) = corpus(&a)?;
            let manifest = cat.manifest();
            eprintln!("{} groups, hash {}", manifest.entries.len(), manifest.hash);
            match &a.out {
                Some(path) => write_json(path, &manifest)?,
                None => println!("{}", serde_json::to_string_pretty(&manifest)?),
            }
            Ok(Verdict::Ok)
        }
        Command::Import(a) => {
            let g = import_group_file(&a.file)?;
            println!("{}", serde_json::to_string(&json!({ "order": g.order(), "fingerprint": fingerprint(&g) }))?);
            if let Some(out) = &a.out {
                let name = a.file.file_stem().map_or("group".into(), |s| s.to_string_lossy().into_owned());
                write_json(out, &export_group(&g, &name))?;
            }
            Ok(Verdict::Ok)
        }
        Command::Export(a) => {
            let spec: GroupSpec = a.spec.parse()?;
            let g = generate_family(&spec)?;
            let doc = export_group(&g, &spec.name());
            match &a.out {
                Some(path) => write_json(path, &doc)?,
                None => println!("{}", serde_json::to_string(&doc)?),
            }
            Ok(Verdict::Ok)
        }
    }
}

fn cmd_survey(a: SurveyArgs) -> splitaut::Result<Verdict> {
    let (cat, mut config) = corpus(&a.corpus)?;
    config.identity_only = a.identity_only;
    let restriction = if a.corpus.solvable_only { ClassRestriction::Solvable } else { ClassRestriction::All };
    let report = survey::survey_c_n(&cat, a.n, restriction, &config);
    let f = &report.frontier;
    match (&f.best_density, &f.witness) {
        (Some(d), Some(w)) => println!(
            "c_{} frontier over {} groups to order {}: {} at {} (automorphism order {})",
            a.n,
            report.groups.len(),
            cat.max_order,
            fraction_string(d),
            w.name,
            w.automorphism_order
        ),
        _ => println!("c_{} frontier over {} groups to order {}: empty", a.n, report.groups.len(), cat.max_order),
    }
    if !f.automorphism_coverage.is_complete() {
        println!("partial automorphism coverage: {}", f.automorphism_coverage.partial.join(", "));
    }
    println!("catalog {}", f.catalog_hash);
    if let Some(path) = &a.csv {
        std::fs::write(path, report.summary_csv())?;
    }
    emit(&a.corpus.out, &report)?;
    Ok(verdict(report.passed()))
}

fn cmd_relation(a: BatchArgs) -> splitaut::Result<Verdict> {
    if a.target.group.is_some() || a.target.spec.is_some() {
        let g = load_group(&a.target)?;
        let alpha = load_aut(&g, a.aut.as_deref())?;
        let n = single_n(&a.n)?;
        let r = verify_coset_relation(&g, &alpha, n)?;
        println!("{}", serde_json::to_string(&r)?);
        return Ok(verdict(r.equal));
    }
    let (cat, config) = corpus(&a.corpus)?;
    let ns = if a.n.is_empty() { vec![2, 3, 4] } else { a.n.clone() };
    let report = survey::verify_relations(&cat, &ns, &config);
    println!(
        "coset relation: {} tuples covered, {} representatives checked, {} failures",
        report.tuples_covered,
        report.representatives_checked,
        report.failures.len()
    );
    emit(&a.corpus.out, &report)?;
    Ok(verdict(report.passed()))
}

fn cmd_monotonicity(a: MonotonicityArgs) -> splitaut::Result<Verdict> {
    let b = a.batch;
    if b.target.group.is_some() || b.target.spec.is_some() {
        let g = load_group(&b.target)?;
        let alpha = load_aut(&g, b.aut.as_deref())?;
        let n = single_n(&b.n)?;
        let path = a.normal.ok_or_else(|| Error::InvalidParameters("--normal is required with --group".into()))?;
        let members: Vec<usize> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let normal = Subgroup::new(&g, members)?;
        let r = verify_quotient_monotonicity(&g, &alpha, n, &normal)?;
        println!("{}", serde_json::to_string(&r)?);
        return Ok(verdict(r.ok));
    }
    let (cat, config) = corpus(&b.corpus)?;
    let ns = if b.n.is_empty() { vec![2, 3, 4, 5, 6] } else { b.n.clone() };
    let report = survey::verify_monotonicity(&cat, &ns, &config);
    println!(
        "quotient monotonicity: {} tuples covered, {} quotient checks, {} residual cases, {} failures",
        report.tuples_covered,
        report.quotient_checks,
        report.residual_applicable,
        report.failures.len()
    );
    emit(&b.corpus.out, &report)?;
    Ok(verdict(report.passed()))
}

fn single_n(ns: &[u32]) -> splitaut::Result<u32> {
    match ns {
        [n] => Ok(*n),
        _ => Err(Error::InvalidParameters("a single check takes exactly one --n".into())),
    }
}

fn corpus(a: &CorpusArgs) -> splitaut::Result<(catalog::Catalog, SurveyConfig)> {
    let filter =
        CatalogFilter { solvable_only: a.solvable_only, p_group: a.p_group, exponent_divides: a.exponent_divides };
    let extra: Vec<GroupSpec> =
        a.include.iter().map(|p| GroupSpec::Imported { file: p.to_string_lossy().into_owned() }).collect();
    let cat = enumerate_catalog_with(a.max_order, &filter, &extra)?;
    let mut config = SurveyConfig::with_workers(a.workers.unwrap_or_else(survey::default_workers));
    if let Some(b) = a.node_budget {
        config.limits.node_budget = b;
    }
    Ok((cat, config))
}

fn load_group(a: &GroupArgs) -> splitaut::Result<FiniteGroup> {
    match (&a.group, &a.spec) {
        (Some(path), None) => import_group_file(path),
        (None, Some(spec)) => generate_family(&spec.parse()?),
        _ => Err(Error::InvalidParameters("give exactly one of --group or --spec".into())),
    }
}

fn group_name(a: &GroupArgs) -> String {
    match (&a.group, &a.spec) {
        (Some(path), _) => path.file_stem().map_or("G".into(), |s| s.to_string_lossy().into_owned()),
        (None, Some(spec)) => spec.parse::<GroupSpec>().map_or(spec.clone(), |s| s.name()),
        _ => "G".into(),
    }
}

fn load_aut(g: &FiniteGroup, path: Option<&Path>) -> splitaut::Result<Automorphism> {
    match path {
        Some(p) => import_automorphism(g, &std::fs::read_to_string(p)?),
        None => Ok(Automorphism::identity(g)),
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> splitaut::Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

/// Writes the report to `out`, or to stdout when no path is given.
fn emit(out: &Option<PathBuf>, value: &impl serde::Serialize) -> splitaut::Result<()> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}
