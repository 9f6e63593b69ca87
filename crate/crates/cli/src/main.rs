//! Command-line interface: validation, duality and forcing diagnostics over
//! instance files, with machine-parseable JSON reports on stdout.
//!
//! Exit codes: 0 on success, 1 when a checked property fails (the report
//! carries the counterexample), 2 on invalid input.

use clap::{Parser, Subcommand, ValueEnum};
use latsheaf::blo::Blo;
use latsheaf::budget::{Budget, DEFAULT_BUDGET};
use latsheaf::corpus::generate_corpus;
use latsheaf::dot;
use latsheaf::format::{parse, InstanceFile};
use latsheaf::formula::Formula;
use latsheaf::hom::{is_epi_upto, AlgebraClass, EpiVerdict, Homomorphism};
use latsheaf::kj::{persistence_check, Env, KjForcing, KjName};
use latsheaf::lattice::FiniteLattice;
use latsheaf::mv::enumerate_filters;
use latsheaf::mvset::{check_generic_theorems, name_universe, Evaluator, SubsetMode};
use latsheaf::priestley::{duality_unit, spectrum};
use latsheaf::regularity::{
    classify_regularity, gratzer_schmidt_check, strong_regularity_equivalences,
};
use latsheaf::sheaf::{build_sheaf, eta, regular_ideal_open_iso, sections, StalkMode};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "latsheaf",
    version,
    about = "Sheaf duality and finite forcing toolkit"
)]
struct Cli {
    /// Search node budget (env: LATSHEAF_BUDGET overrides)
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum StalkModeArg {
    #[default]
    Congruence,
    Ideal,
}

impl From<StalkModeArg> for StalkMode {
    fn from(m: StalkModeArg) -> Self {
        match m {
            StalkModeArg::Congruence => StalkMode::Congruence,
            StalkModeArg::Ideal => StalkMode::Ideal,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum SubsetModeArg {
    #[default]
    Standard,
    PaperLiteral,
}

impl From<SubsetModeArg> for SubsetMode {
    fn from(m: SubsetModeArg) -> Self {
        match m {
            SubsetModeArg::Standard => SubsetMode::Standard,
            SubsetModeArg::PaperLiteral => SubsetMode::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Lattice,
    Distributive,
    Simple,
}

impl From<ClassArg> for AlgebraClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Lattice => AlgebraClass::Lattices,
            ClassArg::Distributive => AlgebraClass::Distributive,
            ClassArg::Simple => AlgebraClass::Simple,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance file and validate the object it describes
    Validate { file: PathBuf },
    /// Prime spectrum of a distributive lattice
    Spectrum { file: PathBuf },
    /// Verify the duality unit is an isomorphism, for a file or a corpus
    DualityCheck {
        file: Option<PathBuf>,
        /// Check every downset lattice of posets of this exact size
        #[arg(long)]
        corpus: Option<usize>,
    },
    /// Build the dual sheaf and report base, stalks and section count
    Sheaf {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        stalk_mode: StalkModeArg,
    },
    /// Diagnose the representation map into the section algebra
    EtaDiagnose {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        stalk_mode: StalkModeArg,
    },
    /// Regularity classification of an algebra
    Classify { file: PathBuf },
    /// Regular ideals of the section algebra against open sets of the base
    RegularIdeals {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        stalk_mode: StalkModeArg,
    },
    /// Ideals/congruences correspondence and its characterization
    GratzerSchmidt { file: PathBuf },
    /// Exhaustive MV-axiom validation
    MvValidate { file: PathBuf },
    /// Truth values of a formula suite over a bounded name universe
    MvEval {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, value_enum, default_value_t)]
        subset_mode: SubsetModeArg,
    },
    /// Generic-collapse clauses for every ultrafilter
    GenericCheck {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        suite: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        max_domain: usize,
        #[arg(long, value_enum, default_value_t)]
        subset_mode: SubsetModeArg,
    },
    /// Kripke-Joyal forcing of a suite at every point of a site
    KjForce {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Persistence of forced formulas under restriction
    Persistence {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Bounded search for a non-surjective-epimorphism witness
    EpiSearch {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Comma-separated value table of the homomorphism
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Lattice)]
        class: ClassArg,
    },
    /// Duality, spectrum-oracle and correspondence checks over a corpus
    CorpusRun {
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
    /// Graphviz text for a lattice, sheaf base or site
    Dot { file: PathBuf },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    CheckFailed,
}

impl From<latsheaf::format::FormatError> for CliError {
    fn from(e: latsheaf::format::FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn print_report(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("reports serialize")
    );
}

fn budget_from(cli_budget: Option<u64>) -> Budget {
    let from_env = std::env::var("LATSHEAF_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok());
    Budget::new(from_env.or(cli_budget).unwrap_or(DEFAULT_BUDGET))
}

fn section_cap() -> usize {
    1 << 20
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::CheckFailed) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut budget = budget_from(cli.budget);
    match cli.command {
        Command::Validate { file } => {
            let instance = read_instance(&file)?;
            let detail = match &instance {
                InstanceFile::Lattice { .. } => {
                    let l = instance
                        .to_lattice()
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    json!({ "size": l.size(), "distributive": l.is_distributive() })
                }
                InstanceFile::Blo { .. } => {
                    let a = instance
                        .to_blo()
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    json!({ "size": a.size(), "operators": a.num_operators() })
                }
                InstanceFile::Mv { .. } => {
                    let a = instance
                        .to_mv()
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    let report = a.validate();
                    if !report.passed() {
                        return Err(CliError::Input(format!(
                            "mv axioms fail: {:?}",
                            report.failures[0]
                        )));
                    }
                    json!({ "size": a.size() })
                }
                InstanceFile::Site { .. } => {
                    let s = instance
                        .to_site()
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    json!({ "points": s.size(), "monoidal": s.has_tensor() })
                }
                InstanceFile::Name { .. } => {
                    let (alg, name) = instance
                        .to_name()
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    json!({ "algebra-size": alg.size(), "rank": name.rank() })
                }
                InstanceFile::FormulaSuite { .. } => {
                    let fs = instance
                        .to_formulas()
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    json!({ "formulas": fs.len() })
                }
            };
            print_report(&json!({ "kind": instance.kind(), "valid": true, "detail": detail }));
            Ok(())
        }
        Command::Spectrum { file } => {
            let l = read_instance(&file)?.to_lattice()?;
            let space = spectrum(&l).map_err(|e| CliError::Input(e.to_string()))?;
            let points: Vec<Vec<usize>> = space
                .points()
                .iter()
                .map(|p| p.carrier().to_vec())
                .collect();
            let order: Vec<Vec<bool>> = (0..space.len())
                .map(|x| (0..space.len()).map(|y| space.leq(x, y)).collect())
                .collect();
            print_report(&json!({
                "points": points,
                "order": order,
                "join-irreducibles": l.join_irreducibles().len(),
                "topology": "discrete",
            }));
            Ok(())
        }
        Command::DualityCheck { file, corpus } => {
            let lattices: Vec<FiniteLattice> = match (file, corpus) {
                (Some(path), None) => vec![read_instance(&path)?.to_lattice()?],
                (None, Some(n)) => {
                    generate_corpus(n).map_err(|e| CliError::Input(e.to_string()))?
                }
                _ => return Err(CliError::Input("pass a file or --corpus N".into())),
            };
            let mut results = Vec::new();
            let mut all_ok = true;
            for l in &lattices {
                let outcome = duality_unit(l);
                let ok = outcome.is_ok();
                all_ok &= ok;
                results.push(json!({
                    "size": l.size(),
                    "isomorphism": ok,
                    "error": outcome.err().map(|e| e.to_string()),
                }));
            }
            print_report(
                &json!({ "checked": lattices.len(), "all-pass": all_ok, "results": results }),
            );
            if all_ok {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::Sheaf { file, stalk_mode } => {
            let a = read_instance(&file)?.to_blo()?;
            let sheaf = build_sheaf(&a, &[], stalk_mode.into())
                .map_err(|e| CliError::Input(e.to_string()))?;
            let stalk_sizes: Vec<usize> = sheaf.stalks().iter().map(|s| s.algebra.size()).collect();
            let gamma =
                sections(&sheaf, section_cap()).map_err(|e| CliError::Input(e.to_string()))?;
            print_report(&json!({
                "points": sheaf.num_points(),
                "stalk-sizes": stalk_sizes,
                "sections": gamma.len(),
            }));
            Ok(())
        }
        Command::EtaDiagnose { file, stalk_mode } => {
            let a = read_instance(&file)?.to_blo()?;
            let sheaf = build_sheaf(&a, &[], stalk_mode.into())
                .map_err(|e| CliError::Input(e.to_string()))?;
            let gamma =
                sections(&sheaf, section_cap()).map_err(|e| CliError::Input(e.to_string()))?;
            let diag = eta(&sheaf, &gamma);
            print_report(&json!({
                "injective": diag.injective,
                "surjective": diag.surjective,
                "isomorphism": diag.is_isomorphism(),
                "sections": gamma.len(),
                "host-size": a.size(),
            }));
            Ok(())
        }
        Command::Classify { file } => {
            let a = read_instance(&file)?.to_blo()?;
            let record = classify_regularity(&a).map_err(|e| CliError::Input(e.to_string()))?;
            let strong =
                strong_regularity_equivalences(&a).map_err(|e| CliError::Input(e.to_string()))?;
            print_report(&json!({
                "regular": record.regular,
                "strongly-regular": record.strongly_regular,
                "congruence-strongly-regular": record.congruence_strongly_regular,
                "relatively-complemented": strong.relatively_complemented,
                "principal-ideals-zd-generated": strong.principal_ideals_zd_generated,
                "stalks-at-maximal-points-simple": strong.stalks_at_maximal_points_simple,
                "equivalence-holds": strong.equivalence_holds,
            }));
            Ok(())
        }
        Command::RegularIdeals { file, stalk_mode } => {
            let a = read_instance(&file)?.to_blo()?;
            let sheaf = build_sheaf(&a, &[], stalk_mode.into())
                .map_err(|e| CliError::Input(e.to_string()))?;
            let gamma =
                sections(&sheaf, section_cap()).map_err(|e| CliError::Input(e.to_string()))?;
            let report = regular_ideal_open_iso(&sheaf, &gamma);
            print_report(&json!({
                "opens": report.opens,
                "regular-ideals": report.regular_ideals,
                "mutually-inverse": report.mutually_inverse,
                "order-isomorphism": report.order_isomorphism,
                "bijection": report.bijection_holds(),
            }));
            if report.bijection_holds() {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::GratzerSchmidt { file } => {
            let l = read_instance(&file)?.to_lattice()?;
            let r = gratzer_schmidt_check(&l).map_err(|e| CliError::Input(e.to_string()))?;
            print_report(&json!({
                "bijection": r.bijection,
                "distributive": r.distributive,
                "relatively-complemented": r.relatively_complemented,
                "has-minimum": r.has_minimum,
                "ideals": r.ideal_count,
                "congruences": r.congruence_count,
                "biconditional": r.biconditional_holds(),
            }));
            if r.biconditional_holds() {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::MvValidate { file } => {
            let a = read_instance(&file)?.to_mv()?;
            let report = a.validate();
            let failures: Vec<Value> = report
                .failures
                .iter()
                .map(|f| json!({ "axiom": format!("{:?}", f.axiom), "witness": f.witness }))
                .collect();
            print_report(&json!({
                "size": a.size(),
                "passed": report.passed(),
                "failures": failures,
            }));
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::MvEval {
            algebra,
            suite,
            rank,
            max_domain,
            subset_mode,
        } => {
            let alg = read_instance(&algebra)?.to_mv()?;
            let formulas = read_instance(&suite)?.to_formulas()?;
            let universe = name_universe(&alg, rank, max_domain, 200_000)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut ev = Evaluator::new(&alg, subset_mode.into());
            let empty = latsheaf::mvset::MvName::empty();
            let mut rows = Vec::new();
            for f in &formulas {
                let env: BTreeMap<String, latsheaf::mvset::MvName> = f
                    .free_vars()
                    .into_iter()
                    .map(|v| (v, empty.clone()))
                    .collect();
                let value = ev
                    .eval(f, &env, &universe)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                rows.push(json!({ "formula": f.to_string(), "value": alg.label(value) }));
            }
            print_report(&json!({
                "universe-size": universe.len(),
                "rank": rank,
                "values": rows,
            }));
            Ok(())
        }
        Command::GenericCheck {
            algebra,
            suite,
            rank,
            max_domain,
            subset_mode,
        } => {
            let alg = read_instance(&algebra)?.to_mv()?;
            let formulas: Vec<Formula> = match suite {
                Some(path) => read_instance(&path)?.to_formulas()?,
                None => default_generic_suite(),
            };
            let universe = name_universe(&alg, rank, max_domain, 200_000)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut rows = Vec::new();
            let mut all_hold = true;
            for g in enumerate_filters(&alg).iter().filter(|g| g.is_ultrafilter) {
                let report =
                    check_generic_theorems(&alg, &universe, g, &formulas, subset_mode.into())
                        .map_err(|e| CliError::Input(e.to_string()))?;
                all_hold &= report.all_hold();
                rows.push(json!({
                    "ultrafilter": g.carrier(),
                    "membership-clause": report.membership.holds,
                    "equality-clause": report.equality.holds,
                    "formula-clauses": report
                        .formulas
                        .iter()
                        .map(|(f, b)| json!({ "formula": f, "agrees": b }))
                        .collect::<Vec<_>>(),
                }));
            }
            print_report(&json!({
                "universe-size": universe.len(),
                "all-hold": all_hold,
                "ultrafilters": rows,
            }));
            if all_hold {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::KjForce { site, suite, rank } => {
            let s = read_instance(&site)?.to_site()?;
            let formulas = read_instance(&suite)?.to_formulas()?;
            let forcing =
                KjForcing::new(&s, rank, 200_000).map_err(|e| CliError::Input(e.to_string()))?;
            let mut rows = Vec::new();
            for f in &formulas {
                let mut per_point = Vec::new();
                for i in s.points() {
                    let env: Env = f
                        .free_vars()
                        .into_iter()
                        .map(|v| (v, KjName::empty(i)))
                        .collect();
                    let outcome = forcing.forces(i, f, &env);
                    per_point.push(match outcome {
                        Ok(b) => json!(b),
                        Err(e) => json!({ "error": e.to_string() }),
                    });
                }
                rows.push(json!({ "formula": f.to_string(), "forced-at": per_point }));
            }
            print_report(&json!({ "points": s.size(), "rank": rank, "results": rows }));
            Ok(())
        }
        Command::Persistence { site, suite, rank } => {
            let s = read_instance(&site)?.to_site()?;
            let formulas = read_instance(&suite)?.to_formulas()?;
            let forcing =
                KjForcing::new(&s, rank, 200_000).map_err(|e| CliError::Input(e.to_string()))?;
            let report = persistence_check(&forcing, &formulas, &mut budget)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "formula": v.formula,
                        "point": v.point,
                        "lower": v.lower,
                    })
                })
                .collect();
            print_report(&json!({
                "checked": report.checked,
                "holds": report.holds(),
                "violations": violations,
            }));
            if report.holds() {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::EpiSearch {
            source,
            target,
            map,
            bound,
            class,
        } => {
            let a = read_instance(&source)?.to_blo()?;
            let b = read_instance(&target)?.to_blo()?;
            let table: Vec<usize> = map
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| CliError::Input(format!("bad map entry '{t}'")))
                })
                .collect::<Result<_, _>>()?;
            let h = Homomorphism::new(&a, &b, table).map_err(|e| CliError::Input(e.to_string()))?;
            let verdict = is_epi_upto(&a, &b, &h, bound, class.into(), &mut budget)
                .map_err(|e| CliError::Input(e.to_string()))?;
            match verdict {
                EpiVerdict::NotEpi { c, f, g } => {
                    print_report(&json!({
                        "verdict": "not-epi",
                        "witness-size": c.size(),
                        "f": f.table(),
                        "g": g.table(),
                    }));
                }
                EpiVerdict::NoWitnessUpTo(k) => {
                    print_report(&json!({ "verdict": "no-witness", "bound": k }));
                }
            }
            Ok(())
        }
        Command::CorpusRun { max } => {
            let mut rows = Vec::new();
            let mut all_ok = true;
            for n in 1..=max {
                let lattices = generate_corpus(n).map_err(|e| CliError::Input(e.to_string()))?;
                for l in &lattices {
                    let unit_ok = duality_unit(l).is_ok();
                    let space = spectrum(l).map_err(|e| CliError::Input(e.to_string()))?;
                    let ji_ok = space.len() == l.join_irreducibles().len();
                    let gs =
                        gratzer_schmidt_check(l).map_err(|e| CliError::Input(e.to_string()))?;
                    let ok = unit_ok && ji_ok && gs.biconditional_holds();
                    all_ok &= ok;
                    rows.push(json!({
                        "poset-size": n,
                        "lattice-size": l.size(),
                        "duality-unit": unit_ok,
                        "spectrum-matches-irreducibles": ji_ok,
                        "gratzer-schmidt-biconditional": gs.biconditional_holds(),
                    }));
                }
            }
            print_report(&json!({ "checked": rows.len(), "all-pass": all_ok, "results": rows }));
            if all_ok {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::Dot { file } => {
            let instance = read_instance(&file)?;
            let text = match &instance {
                InstanceFile::Lattice { .. } => dot::lattice_dot(&instance.to_lattice()?),
                InstanceFile::Blo { .. } => {
                    let a: Blo = instance.to_blo()?;
                    let sheaf = build_sheaf(&a, &[], StalkMode::Congruence)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    dot::sheaf_dot(&sheaf)
                }
                InstanceFile::Site { .. } => dot::site_dot(&instance.to_site()?),
                other => {
                    return Err(CliError::Input(format!(
                        "no diagram for '{}' files",
                        other.kind()
                    )))
                }
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn default_generic_suite() -> Vec<Formula> {
    [
        "(all x (eq x x))",
        "(all x (all y (imp (eq x y) (eq y x))))",
        "(ex x (all y (not (mem y x))))",
        "(all x (imp (ex y (mem y x)) (ex y (mem y x))))",
    ]
    .iter()
    .map(|s| latsheaf::formula::parse_formula(s).expect("built-in suite parses"))
    .collect()
}
