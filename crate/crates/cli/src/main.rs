mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use lieconf::axioms::Suite;
use lieconf::classify::{self, Case};
use lieconf::construct::{self, NpLift, Rank1Case};
use lieconf::error::FailedInstance;
use lieconf::expr::{parse_mod_value, parse_poly, parse_poly_in};
use lieconf::liefun::{annihilation_bracket, LoopAlgebra, Window, WindowSuite};
use lieconf::structure::{BRACKET, PRODUCT};
use lieconf::{io, Error, Result, ShapeDecl, Structure};

use report::{digest, Report, Status};

/// Exact checks and constructions for Lie conformal superalgebras and
/// Gel'fand-Dorfman structures.
#[derive(Parser)]
#[command(name = "lieconf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report destination; for `build`, the structure file destination.
    #[arg(long, short = 'o', global = true)]
    out: Option<PathBuf>,
    /// Skip the precondition suites of constructions.
    #[arg(long, global = true)]
    force: bool,
    /// Print nothing on stdout; the exit code carries the outcome.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run axiom suites on a structure file (default: the suite of its kind).
    Check {
        path: PathBuf,
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Index for `--suite ilinear`.
        #[arg(long)]
        i: Option<u32>,
    },
    /// Build a structure from the catalog or from an input structure.
    Build {
        #[arg(long, value_enum)]
        construction: Construction,
        input: Option<PathBuf>,
        #[arg(long)]
        i: Option<u32>,
        /// Rank for current, virasoro and hamiltonian.
        #[arg(long)]
        r: Option<u32>,
        /// Rank-one Novikov case.
        #[arg(long = "case", value_enum)]
        case: Option<Rank1Arg>,
        /// Target of np-lift.
        #[arg(long, value_enum, default_value_t = LiftTarget::Gd)]
        target: LiftTarget,
        /// Scaling factors for scale-family, one per other slot.
        #[arg(long, allow_hyphen_values = true)]
        k: Vec<String>,
        /// Derivation images `gen=expr` for derivation-gdnp.
        #[arg(long, allow_hyphen_values = true)]
        d: Vec<String>,
        /// Twist ξ for derivation-gdnp.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// novikov-to-lie: emit the GD conformal pair instead of the bracket.
        #[arg(long)]
        pair: bool,
    },
    /// Evaluate one bracket of the annihilation algebra, `[a_m, b_n]`.
    Bracket {
        path: PathBuf,
        #[arg(long)]
        left: String,
        /// Comma-separated index vector.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        right: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        /// Table role (default: bracket if present, else product).
        #[arg(long)]
        op: Option<String>,
    },
    /// Loop algebra tables on an index window, optionally checked.
    Loop {
        path: PathBuf,
        /// `lo..hi` for a cube, or `lo..hi,lo..hi,...` per dimension.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        suite: Option<String>,
        /// Include the tables even when a suite is given.
        #[arg(long)]
        tables: bool,
    },
    /// Constraints on the parameters of an unknown table, one per line.
    Constraints {
        path: PathBuf,
        #[arg(long)]
        unknown: String,
        #[arg(long)]
        suite: String,
    },
    /// Substitute case splits into the extracted constraints.
    VerifyFamily {
        path: PathBuf,
        #[arg(long)]
        unknown: String,
        #[arg(long)]
        suite: String,
        /// `NAME:var=expr,var=expr`.
        #[arg(long = "case", required = true, allow_hyphen_values = true)]
        cases: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Current,
    Virasoro,
    Hamiltonian,
    Rank1,
    Ex1,
    NovikovToLie,
    NpLift,
    GdNpLift,
    ExtendIlinear,
    DecomposeIlinear,
    GeneralizedGdToLinear,
    DerivationGdnp,
    ScaleFamily,
    ConvertChirality,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rank1Arg {
    Zero,
    Assoc,
    Va,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LiftTarget {
    Novikov,
    Gd,
}

fn load(path: &Path, report: &mut Report) -> Result<Structure> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::File(format!("{}: {e}", path.display())))?;
    report.input_digest = Some(digest(text.as_bytes()));
    io::parse_structure(&text).map_err(|e| match e {
        Error::File(m) => Error::File(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn digest_of(path: &Path) -> Option<String> {
    std::fs::read(path).ok().map(|b| digest(&b))
}

fn parse_index(src: &str, rank: u32) -> Result<Vec<i64>> {
    let idx: Vec<i64> = src
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidArgument(format!("malformed index vector `{src}`")))?;
    if idx.len() != rank as usize {
        return Err(Error::InvalidArgument(format!(
            "index vector `{src}` has {} entries, rank is {rank}",
            idx.len()
        )));
    }
    Ok(idx)
}

fn parse_window(src: &str, rank: u32) -> Result<Window> {
    let bad = || Error::InvalidArgument(format!("malformed window `{src}`; expected lo..hi"));
    let ranges: Vec<(i64, i64)> = src
        .split(',')
        .map(|part| {
            let (lo, hi) = part.trim().split_once("..").ok_or_else(bad)?;
            Ok((lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?))
        })
        .collect::<Result<_>>()?;
    match ranges.as_slice() {
        [(lo, hi)] => Window::cube(rank, *lo, *hi),
        _ => Window::new(ranges),
    }
}

fn gen_id(s: &Structure, name: &str) -> Result<usize> {
    s.signature()
        .find(name)
        .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
}

fn suite_label(suite: Suite) -> String {
    match suite {
        Suite::ILinear(i) => format!("ilinear({i})"),
        other => other.name().to_string(),
    }
}

fn check(path: &Path, names: &[String], i: Option<u32>, report: &mut Report) -> Result<()> {
    let s = load(path, report)?;
    let suites = if names.is_empty() {
        let mut v = vec![Suite::default_for(s.kind())];
        match s.shape() {
            Some(ShapeDecl::ILinear(k)) => v.push(Suite::ILinear(k)),
            Some(ShapeDecl::Linear) => v.push(Suite::Linear),
            None => {}
        }
        v
    } else {
        names.iter().map(|n| Suite::parse(n, i)).collect::<Result<_>>()?
    };
    let mut checked = 0;
    for suite in &suites {
        let rep = suite.run(&s)?;
        checked += rep.checked;
        report.suites.push(suite_label(*suite));
        report.findings.extend(rep.failures().into_iter().map(|mut f| {
            if suites.len() > 1 {
                f.axiom = format!("{}/{}", suite_label(*suite), f.axiom);
            }
            f
        }));
    }
    report.checked = Some(checked);
    Ok(())
}

struct BuildArgs<'a> {
    construction: Construction,
    input: Option<&'a Path>,
    i: Option<u32>,
    r: Option<u32>,
    case: Option<Rank1Arg>,
    target: LiftTarget,
    k: &'a [String],
    d: &'a [String],
    xi: Option<&'a str>,
    pair: bool,
    force: bool,
}

fn build(args: &BuildArgs, report: &mut Report) -> Result<Structure> {
    use Construction as K;
    let name = args.construction.to_possible_value().expect("no skipped variants").get_name().to_string();
    let needs_input = !matches!(args.construction, K::Virasoro | K::Hamiltonian | K::Rank1 | K::Ex1);
    let input = match (needs_input, args.input) {
        (true, Some(p)) => Some(load(p, report)?),
        (true, None) => return Err(Error::InvalidArgument(format!("construction `{name}` needs an input file"))),
        (false, Some(_)) => return Err(Error::InvalidArgument(format!("construction `{name}` takes no input file"))),
        (false, None) => None,
    };
    let inp = || input.as_ref().expect("checked above");
    let need_i = || args.i.ok_or_else(|| Error::InvalidArgument(format!("construction `{name}` needs --i")));
    let force = args.force;
    match args.construction {
        K::Current => construct::current(inp(), args.r.unwrap_or(1), force),
        K::Virasoro => construct::virasoro(args.r.unwrap_or(1)),
        K::Hamiltonian => construct::hamiltonian(args.r.unwrap_or(2)),
        K::Rank1 => {
            let case = match args.case {
                Some(Rank1Arg::Zero) => Rank1Case::Zero,
                Some(Rank1Arg::Assoc) => Rank1Case::Assoc,
                Some(Rank1Arg::Va) => Rank1Case::Va,
                None => return Err(Error::InvalidArgument("rank1 needs --case zero|assoc|va".into())),
            };
            construct::rank1_novikov(case)
        }
        K::Ex1 => construct::ex1_super_novikov(),
        K::NovikovToLie if args.pair => construct::novikov_gd_pair(inp(), force),
        K::NovikovToLie => construct::lift_novikov_to_lie(inp(), force),
        K::NpLift => {
            let mode = match args.target {
                LiftTarget::Novikov => NpLift::NovikovConformal,
                LiftTarget::Gd => NpLift::GdConformal,
            };
            construct::lift_np(inp(), mode, force)
        }
        K::GdNpLift => construct::lift_np(inp(), NpLift::GdNpConformal, force),
        K::ExtendIlinear => construct::extend_to_ilinear(inp(), need_i()?, force),
        K::DecomposeIlinear => construct::decompose_ilinear(inp(), need_i()?, force),
        K::GeneralizedGdToLinear => construct::build_linear_from_generalized_gd(inp(), force),
        K::DerivationGdnp => {
            let s = inp();
            let mut d = BTreeMap::new();
            for spec in args.d {
                let (g, expr) = spec
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidArgument(format!("derivation image `{spec}` is not gen=expr")))?;
                d.insert(gen_id(s, g.trim())?, parse_mod_value(expr, s.signature())?);
            }
            let xi = parse_poly(args.xi.unwrap_or("0"))?;
            construct::derivation_gd_np(s, &d, &xi, force)
        }
        K::ScaleFamily => {
            let k = args.k.iter().map(|e| parse_poly(e)).collect::<Result<Vec<_>>>()?;
            construct::scale_family(inp(), need_i()?, &k, force)
        }
        K::ConvertChirality => construct::convert_chirality(inp()),
    }
}

fn bracket(path: &Path, left: &str, m: &str, right: &str, n: &str, op: Option<&str>, report: &mut Report) -> Result<()> {
    let s = load(path, report)?;
    if !s.kind().is_conformal() {
        return Err(Error::KindMismatch(format!(
            "annihilation brackets need a conformal kind, found {}",
            s.kind()
        )));
    }
    let roles = s.kind().roles(s.rank());
    let role = match op {
        Some(r) => r,
        None if roles.iter().any(|r| r == BRACKET) => BRACKET,
        None => PRODUCT,
    };
    let tab = s.table(role)?;
    let (a, b) = (gen_id(&s, left)?, gen_id(&s, right)?);
    let (m, n) = (parse_index(m, s.rank())?, parse_index(n, s.rank())?);
    report.suites.push(role.to_string());
    report.result.push(annihilation_bracket(tab, a, &m, b, &n)?.to_string());
    Ok(())
}

fn window_loop(path: &Path, window: &str, suite: Option<&str>, tables: bool, report: &mut Report) -> Result<()> {
    let s = load(path, report)?;
    let lp = LoopAlgebra::from_structure(&s)?;
    let window = parse_window(window, s.rank())?;
    if let Some(name) = suite {
        let ws = WindowSuite::parse(name)?;
        let rep = lp.window_check(&window, ws)?;
        report.suites.push(ws.name().to_string());
        report.checked = Some(rep.checked);
        report.skipped = Some(rep.skipped);
        report.findings = rep.failures();
    }
    if suite.is_none() || tables {
        report.result = lp.tables(&window)?.export().lines().map(String::from).collect();
    }
    Ok(())
}

fn constraints(path: &Path, unknown: &str, suite: &str, report: &mut Report) -> Result<()> {
    let s = load(path, report)?;
    let suite: Suite = suite.parse()?;
    report.suites.push(suite.name().to_string());
    let set = classify::symbolic_constraints(&s, unknown, suite)?;
    report.result = set.polys().iter().map(|p| p.to_string()).collect();
    Ok(())
}

fn parse_case(src: &str, params: &[String]) -> Result<Case<lieconf::Rational>> {
    let bad = || Error::InvalidArgument(format!("case `{src}` is not NAME:var=expr,..."));
    let (name, body) = src.split_once(':').ok_or_else(bad)?;
    let mut subst = Vec::new();
    for part in body.split(',').filter(|p| !p.trim().is_empty()) {
        let (var, expr) = part.split_once('=').ok_or_else(bad)?;
        let var = var.trim();
        if !params.iter().any(|p| p == var) {
            return Err(Error::UndeclaredParameter(var.to_string()));
        }
        subst.push((var.to_string(), parse_poly_in(expr, params)?));
    }
    Ok(Case::new(name.trim(), subst))
}

fn verify_family(path: &Path, unknown: &str, suite: &str, cases: &[String], report: &mut Report) -> Result<()> {
    let s = load(path, report)?;
    let suite: Suite = suite.parse()?;
    report.suites.push(suite.name().to_string());
    let set = classify::symbolic_constraints(&s, unknown, suite)?;
    let params = s.signature().parameters();
    let cases = cases.iter().map(|c| parse_case(c, params)).collect::<Result<Vec<_>>>()?;
    let rep = classify::verify_family(&set, &cases)?;
    for case in &rep.cases {
        let verdict = if case.residuals.is_empty() { "pass" } else { "fail" };
        report.result.push(format!("{}: {verdict}", case.name));
        report.findings.extend(case.residuals.iter().map(|p| FailedInstance {
            axiom: "case".into(),
            tuple: vec![case.name.clone()],
            residual: p.to_string(),
        }));
    }
    Ok(())
}

fn emit(text: &str, out: Option<&Path>, quiet: bool) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None if quiet => Ok(()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let command = match &cli.command {
        Command::Check { .. } => "check",
        Command::Build { .. } => "build",
        Command::Bracket { .. } => "bracket",
        Command::Loop { .. } => "loop",
        Command::Constraints { .. } => "constraints",
        Command::VerifyFamily { .. } => "verify-family",
    };
    let mut report = Report::new(command, None);
    let mut built = None;
    let outcome = match &cli.command {
        Command::Check { path, suites, i } => check(path, suites, *i, &mut report),
        Command::Build {
            construction,
            input,
            i,
            r,
            case,
            target,
            k,
            d,
            xi,
            pair,
        } => {
            if let Some(p) = input {
                report.input_digest = digest_of(p);
            }
            let args = BuildArgs {
                construction: *construction,
                input: input.as_deref(),
                i: *i,
                r: *r,
                case: *case,
                target: *target,
                k,
                d,
                xi: xi.as_deref(),
                pair: *pair,
                force: cli.force,
            };
            build(&args, &mut report).and_then(|s| {
                built = Some(io::print_structure(&s)?);
                Ok(())
            })
        }
        Command::Bracket {
            path,
            left,
            m,
            right,
            n,
            op,
        } => bracket(path, left, m, right, n, op.as_deref(), &mut report),
        Command::Loop {
            path,
            window,
            suite,
            tables,
        } => window_loop(path, window, suite.as_deref(), *tables, &mut report),
        Command::Constraints { path, unknown, suite } => constraints(path, unknown, suite, &mut report),
        Command::VerifyFamily {
            path,
            unknown,
            suite,
            cases,
        } => verify_family(path, unknown, suite, cases, &mut report),
    };
    match outcome {
        Ok(()) => {
            if !report.findings.is_empty() {
                report.status = Status::Fail;
            }
        }
        Err(Error::Precondition { suite, failures }) => {
            report.status = Status::Fail;
            report.suites.push(suite);
            report.findings = failures;
        }
        Err(e) => {
            eprintln!("lieconf: {e}");
            report.status = Status::Error;
            report.error = Some(e.to_string());
        }
    }
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let render = |r: &Report| match cli.format {
        Format::Json => r.json(),
        Format::Text => r.text(),
    };
    let written = match built {
        Some(text) => match &cli.out {
            Some(p) => std::fs::write(p, &text).and_then(|()| {
                report.result.push(format!("wrote {}", p.display()));
                emit(&render(&report), None, cli.quiet)
            }),
            None => emit(&text, None, cli.quiet),
        },
        // a failed build never overwrites its destination
        None if command == "build" => emit(&render(&report), None, cli.quiet),
        None => emit(&render(&report), cli.out.as_deref(), cli.quiet),
    };
    if let Err(e) = written {
        eprintln!("lieconf: cannot write output: {e}");
        return ExitCode::from(Status::Error.exit_code());
    }
    ExitCode::from(report.status.exit_code())
}
