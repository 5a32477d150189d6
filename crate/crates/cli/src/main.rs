use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use compat_core::functions::{FnFamily, ValueGrid};
use compat_core::io;
use compat_core::lattice::{spectrum, ult_space, zariski_spectrum, FiniteLattice};
use compat_core::morphisms::{check_additive_lemma, check_clopen_props, discont_construction, CompatMap, Witness};
use compat_core::reconstruction::{reconstruct, run_pipeline};
use compat_core::suite::{construction_instances, run_criterion, SuiteConfig, SuiteReport};
use compat_core::topology::FiniteSpace;
use compat_core::Error;

/// Compatibility ordering, lattice spectra and space reconstruction on
/// finite topological spaces.
#[derive(Parser, Debug)]
#[command(name = "compat", version)]
struct Cli {
    /// Value grid, for example "0,1,2"
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Largest space accepted (suite: largest space swept)
    #[arg(long, global = true)]
    max_points: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LatticeKind {
    Ro,
    Rc,
    Theta,
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpectrumKind {
    Prime,
    Ultra,
    Zariski,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a space and optionally a JSON array of functions on it
    Validate { space: PathBuf, functions: Option<PathBuf> },
    /// Build a lattice of sets on a space
    Lattice {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "theta")]
        kind: LatticeKind,
    },
    /// Topologised prime filters or ultrafilters of a lattice on a space
    Spectrum {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "theta")]
        lattice: LatticeKind,
        #[arg(long, value_enum, default_value = "prime")]
        kind: SpectrumKind,
    },
    /// Recover the space from the ultrafilters of its zero-set lattice
    Reconstruct { space: PathBuf },
    /// Check that a map file is a compatibility isomorphism
    CheckIso { map: PathBuf },
    /// Run the pipeline on a map file and print the induced homeomorphism
    Induce {
        map: PathBuf,
        /// Point map the result must equal
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Run the acceptance sweeps
    Suite {
        /// Run only these criteria
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=10))]
        criteria: Vec<u8>,
    },
    /// Component-swap construction on a bundled example
    Demo {
        #[arg(long, default_value_t = 1)]
        instance: usize,
    },
    /// Specialization preorder of a space as DOT
    ExportDot { space: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

fn is_overflow(e: &Error) -> bool {
    matches!(e, Error::FamilyOverflow { .. } | Error::TooManyPoints(_))
}

/// Errors while reading inputs.
fn parse_failure(e: Error) -> Failure {
    Failure {
        code: if is_overflow(&e) { 3 } else { 2 },
        message: e.to_string(),
    }
}

/// Errors while computing.
fn run_failure(e: Error) -> Failure {
    Failure {
        code: if is_overflow(&e) { 3 } else { 1 },
        message: e.to_string(),
    }
}

struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn json(value: Value, ok: bool) -> Self {
        Output {
            text: serde_json::to_string_pretty(&value).expect("json values serialize") + "\n",
            ok,
        }
    }
}

struct Context {
    grid: Option<String>,
    max_points: Option<usize>,
    seed: u64,
    format: Option<Format>,
}

impl Context {
    fn grid(&self, default: &str) -> Result<ValueGrid, Failure> {
        self.grid.as_deref().unwrap_or(default).parse().map_err(parse_failure)
    }

    fn space(&self, path: &Path) -> Result<FiniteSpace, Failure> {
        let space = io::load_space(path).map_err(parse_failure)?;
        match self.max_points {
            Some(m) if space.len() > m => Err(Failure {
                code: 3,
                message: format!("space has {} points, above --max-points {m}", space.len()),
            }),
            _ => Ok(space),
        }
    }

    fn family(&self, space: &FiniteSpace, default_grid: &str) -> Result<FnFamily, Failure> {
        FnFamily::from_grid(Arc::new(space.clone()), self.grid(default_grid)?).map_err(run_failure)
    }

    fn json_only(&self, verb: &str) -> Result<(), Failure> {
        if self.format == Some(Format::Dot) {
            return Err(Failure {
                code: 2,
                message: format!("`{verb}` has no DOT output"),
            });
        }
        Ok(())
    }
}

fn build_lattice(ctx: &Context, space: &FiniteSpace, kind: LatticeKind) -> Result<FiniteLattice, Failure> {
    Ok(match kind {
        LatticeKind::Ro => FiniteLattice::from_ro(space),
        LatticeKind::Rc => FiniteLattice::from_rc(space),
        LatticeKind::Theta => FiniteLattice::theta_of_family(&ctx.family(space, "0,1")?).map_err(run_failure)?,
        LatticeKind::Sigma => FiniteLattice::sigma_of_family(&ctx.family(space, "0,1")?).map_err(run_failure)?,
    })
}

fn witness_json(map: &CompatMap, w: Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(w) => json!({
            "direction": w.direction,
            "f": w.f,
            "g": w.g,
            "f_values": map.source().get(w.f).to_string(),
            "g_values": map.source().get(w.g).to_string(),
        }),
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let ctx = Context {
        grid: cli.grid,
        max_points: cli.max_points,
        seed: cli.seed,
        format: cli.format,
    };
    match cli.command {
        Command::Validate { space, functions } => {
            ctx.json_only("validate")?;
            let s = Arc::new(ctx.space(&space)?);
            let count = match functions {
                Some(path) => Some(io::load_functions(&path, &s).map_err(parse_failure)?.len()),
                None => None,
            };
            Ok(Output::json(
                json!({
                    "points": s.len(),
                    "opens": s.opens().len(),
                    "connected": s.is_connected(),
                    "discrete": s.is_discrete(),
                    "functions": count,
                }),
                true,
            ))
        }
        Command::Lattice { space, kind } => {
            let s = ctx.space(&space)?;
            let lattice = build_lattice(&ctx, &s, kind)?;
            if ctx.format == Some(Format::Dot) {
                return Ok(Output {
                    text: lattice.hasse_dot(),
                    ok: true,
                });
            }
            let mut value = lattice.to_json();
            value["distributive"] = json!(lattice.is_distributive());
            value["law_violation"] = json!(lattice.law_violation());
            let ok = lattice.law_violation().is_none();
            Ok(Output::json(value, ok))
        }
        Command::Spectrum { space, lattice, kind } => {
            let s = ctx.space(&space)?;
            let l = build_lattice(&ctx, &s, lattice)?;
            let spec = match kind {
                SpectrumKind::Prime => spectrum(&l),
                SpectrumKind::Ultra => ult_space(&l),
                SpectrumKind::Zariski => zariski_spectrum(&l),
            }
            .map_err(run_failure)?;
            if ctx.format == Some(Format::Dot) {
                return Ok(Output {
                    text: spec.topology().specialization_dot(),
                    ok: true,
                });
            }
            let violations = spec.base_identity_violations(&l);
            let filters: Vec<Vec<usize>> = spec.carrier().iter().map(|f| f.members().collect()).collect();
            Ok(Output::json(
                json!({
                    "lattice_size": l.len(),
                    "points": filters,
                    "opens": io::SpaceDoc::from_space(spec.topology()).opens,
                    "discrete": spec.topology().is_discrete(),
                    "base_identity_violations": violations,
                }),
                violations.is_empty(),
            ))
        }
        Command::Reconstruct { space } => {
            ctx.json_only("reconstruct")?;
            let s = ctx.space(&space)?;
            let r = reconstruct(&s, &ctx.grid("0,1")?).map_err(run_failure)?;
            let ok = r.report.verified;
            Ok(Output::json(json!(r.report), ok))
        }
        Command::CheckIso { map } => {
            ctx.json_only("check-iso")?;
            let t = io::load_map(&map).map_err(parse_failure)?;
            let iso = t.is_compat_iso();
            let mut value = json!({
                "flags": t.flags(),
                "is_compat_morphism": t.is_compat_morphism(),
                "is_compat_iso": iso,
                "witness": witness_json(&t, t.iso_witness()),
            });
            let mut ok = iso;
            if iso {
                let additive = check_additive_lemma(&t).map_err(run_failure)?;
                let clopen = check_clopen_props(&t).map_err(run_failure)?;
                ok = additive.is_clean() && clopen.is_clean();
                value["additive"] = json!(additive);
                value["clopen"] = json!(clopen);
            }
            Ok(Output::json(value, ok))
        }
        Command::Induce { map, expect } => {
            ctx.json_only("induce")?;
            let t = io::load_map(&map).map_err(parse_failure)?;
            let expected = match expect {
                Some(path) => {
                    Some(io::load_point_map(&path, t.source().space(), t.target().space()).map_err(parse_failure)?)
                }
                None => None,
            };
            let report = run_pipeline(&t);
            let matches = expected
                .as_ref()
                .map(|e| report.assignment.as_deref() == Some(e.assignment()));
            let ok = report.succeeded() && matches != Some(false);
            let mut value = json!(report);
            value["matches_expected"] = json!(matches);
            Ok(Output::json(value, ok))
        }
        Command::Suite { criteria } => {
            let mut config = SuiteConfig {
                seed: ctx.seed,
                ..SuiteConfig::default()
            };
            if let Some(m) = ctx.max_points {
                config.max_points = m;
            }
            if ctx.grid.is_some() {
                config.grid = ctx.grid("")?;
            }
            let ids = if criteria.is_empty() { (1..=10).collect() } else { criteria };
            let report = SuiteReport {
                seed: config.seed,
                criteria: ids.iter().filter_map(|&id| run_criterion(id, &config)).collect(),
            };
            let ok = report.all_passed();
            match ctx.format {
                Some(Format::Json) => Ok(Output::json(json!(report), ok)),
                Some(Format::Dot) => Err(Failure {
                    code: 2,
                    message: "`suite` has no DOT output".into(),
                }),
                None => Ok(Output {
                    text: report.criteria.iter().map(|c| format!("{c}\n")).collect(),
                    ok,
                }),
            }
        }
        Command::Demo { instance } => {
            ctx.json_only("demo")?;
            let instances = construction_instances().map_err(run_failure)?;
            let count = instances.len();
            let inst = instances.into_iter().nth(instance).ok_or_else(|| Failure {
                code: 2,
                message: format!("instance {instance} out of range, {count} bundled"),
            })?;
            let family = inst.family.clone();
            let c = discont_construction(inst.family, inst.component, &inst.f1, &inst.f2).map_err(run_failure)?;
            let iso = c.map.is_compat_iso();
            let ok = iso && !c.map.is_identity() && c.trace.is_clean();
            let moved: Vec<Value> = (0..family.len())
                .filter(|&i| c.map.apply(i) != i)
                .map(|i| json!([family.get(i).to_string(), c.map.image(i).to_string()]))
                .collect();
            Ok(Output::json(
                json!({
                    "instance": inst.name,
                    "space": io::SpaceDoc::from_space(family.space()),
                    "grid": family.grid().map(|g| g.to_string()),
                    "component": inst.component.to_vec(),
                    "family_size": family.len(),
                    "trace": c.trace,
                    "is_compat_iso": iso,
                    "is_identity": c.map.is_identity(),
                    "moved": moved,
                }),
                ok,
            ))
        }
        Command::ExportDot { space } => {
            let s = ctx.space(&space)?;
            Ok(Output {
                text: s.specialization_dot(),
                ok: true,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(output) => {
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &output.text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", output.text),
            }
            if output.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
