use bimodal::atm::{find_accepting_tree, AtmSpec, ComputationTree};
use bimodal::formula::{parse, Formula};
use bimodal::pipeline::{failure_trace, sha256_hex, verify_pipeline, RunReport};
use bimodal::red_s4s5::{
    build_counter_s4s5_model, build_f_s4s5_model, counter_s4s5_alpha, extract_accepting_tree_s4s5,
    extract_counter_trace_s4s5, gen_counter_s4s5, gen_f_s4s5,
};
use bimodal::red_ssl::{
    build_counter_ssl_model, build_f_ssl_model, counter_ssl_alpha, extract_accepting_tree_ssl,
    extract_counter_trace, gen_counter_ssl, gen_f_ssl,
};
use bimodal::reduction::{decode, Generated, ReductionParams};
use bimodal::satbound::{bounded_sat, SatVerdict};
use bimodal::semantics::{validate, BimodalModel, Evaluator, FrameClass, WorldId};
use bimodal::translations::{
    k4_to_s4_model, lift_model_ssl_to_s4s5, restrict_model_s4s5_to_ssl, t_s4s5_to_k4s5,
    t_ssl_to_s4s5,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "bimodal", version, about = "Bimodal logic reductions, witness models and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a formula and its variable catalog.
    Gen {
        kind: Construction,
        #[command(flatten)]
        src: Source,
        /// Directory for `<kind>.formula` and `<kind>.catalog`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Build the witness model of a construction.
    Build {
        #[arg(value_parser = ["model"])]
        what: String,
        kind: Construction,
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a formula at a point of a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        formula: PathBuf,
    },
    /// Read a counter staircase or an accepting tree off a model.
    Extract {
        what: ExtractKind,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = Logic::Ssl)]
        logic: Logic,
        #[command(flatten)]
        src: Source,
        /// Where to write the extracted tree.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate a formula between logics.
    Translate {
        direction: Direction,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lift a cross axiom model to an S4xS5 commutator model of the translation.
    Lift {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        point: String,
        /// The SSL formula whose translation the lifted model must satisfy.
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Restrict a model of a translated formula back to a model of the original.
    Restrict {
        direction: Direction,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        point: String,
        /// The untranslated formula.
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a model of at most K points.
    Sat {
        #[arg(long)]
        class: FrameClass,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alternating machine utilities.
    Atm {
        #[command(subcommand)]
        command: AtmCommand,
    },
    /// End-to-end checks.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum AtmCommand {
    /// Search for an accepting tree within a time bound.
    Run {
        #[arg(long)]
        atm: PathBuf,
        #[arg(long)]
        w: String,
        #[arg(long)]
        fuel: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Generate, build, check, extract, translate and re-check.
    Pipeline {
        #[arg(long)]
        atm: PathBuf,
        #[arg(long)]
        w: String,
        #[arg(long, value_delimiter = ',')]
        poly: Vec<u64>,
    },
}

#[derive(Args, Clone)]
struct Source {
    /// Counter width.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    atm: Option<PathBuf>,
    #[arg(long)]
    w: Option<String>,
    /// Coefficients c0,c1,... of p(x) = Σ c_i x^i.
    #[arg(long, value_delimiter = ',')]
    poly: Option<Vec<u64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    CounterSsl,
    CounterS4s5,
    FSsl,
    #[value(name = "f-s4s5")]
    FS4s5,
}

impl Construction {
    fn name(self) -> &'static str {
        match self {
            Construction::CounterSsl => "counter-ssl",
            Construction::CounterS4s5 => "counter-s4s5",
            Construction::FSsl => "f-ssl",
            Construction::FS4s5 => "f-s4s5",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtractKind {
    Trace,
    Tree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Logic {
    Ssl,
    S4s5,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    SslS4s5,
    S4s5K4s5,
}

/// A failure that ends the run: usage errors exit 2, failed checks exit 1.
enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn check_err(e: impl ToString) -> Failure {
    Failure::Check(e.to_string())
}

fn read(report: &mut RunReport, label: &str, path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {}", path.display(), e)))?;
    report.digest(label, text.as_bytes());
    Ok(text)
}

fn write(report: &mut RunReport, label: &str, path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {}", path.display(), e)))?;
    report.output(label, &path.display().to_string());
    report.field(&format!("output.{}.sha256", label), sha256_hex(text.as_bytes()));
    Ok(())
}

fn read_formula(report: &mut RunReport, path: &Path) -> Result<Formula, Failure> {
    let text = read(report, "formula", path)?;
    parse(text.trim()).map_err(usage)
}

fn read_model(report: &mut RunReport, path: &Path) -> Result<BimodalModel, Failure> {
    let text = read(report, "model", path)?;
    BimodalModel::parse_dump(&text).map_err(usage)
}

fn point(model: &BimodalModel, name: &str) -> Result<WorldId, Failure> {
    model.world(name).map_err(usage)
}

fn params(report: &mut RunReport, src: &Source) -> Result<ReductionParams, Failure> {
    let (Some(path), Some(w), Some(poly)) = (&src.atm, &src.w, &src.poly) else {
        return Err(usage("--atm, --w and --poly are required"));
    };
    let atm = AtmSpec::parse(&read(report, "atm", path)?).map_err(usage)?;
    report.field("w", w);
    report.field("poly", poly.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    let p = ReductionParams::new(atm, poly.clone(), w).map_err(usage)?;
    report.field("N", p.big_n());
    Ok(p)
}

fn width(report: &mut RunReport, src: &Source) -> Result<usize, Failure> {
    let n = src.n.ok_or_else(|| usage("--n is required"))?;
    report.field("n", n);
    Ok(n)
}

fn accepting_tree(report: &mut RunReport, p: &ReductionParams) -> Result<ComputationTree, Failure> {
    let tree = find_accepting_tree(&p.atm, &p.w, p.max_time())
        .map_err(usage)?
        .ok_or_else(|| check_err(format!("no accepting tree within time {}", p.max_time())))?;
    report.field("tree.nodes", tree.len());
    Ok(tree)
}

fn generate(report: &mut RunReport, kind: Construction, src: &Source) -> Result<Generated, Failure> {
    match kind {
        Construction::CounterSsl => gen_counter_ssl(width(report, src)?).map_err(usage),
        Construction::CounterS4s5 => gen_counter_s4s5(width(report, src)?).map_err(usage),
        Construction::FSsl => gen_f_ssl(&params(report, src)?).map_err(usage),
        Construction::FS4s5 => gen_f_s4s5(&params(report, src)?).map_err(usage),
    }
}

fn cmd_gen(report: &mut RunReport, kind: Construction, src: &Source, out: &Path) -> Outcome {
    let g = generate(report, kind, src)?;
    report.field("formula.symbols", g.formula.symbol_count());
    report.field("catalog.atoms", g.catalog.len());
    let base = out.join(kind.name());
    write(report, "formula", &base.with_extension("formula"), &format!("{}\n", g.formula.render()))?;
    write(report, "catalog", &base.with_extension("catalog"), &g.catalog.render())
}

fn cmd_build(report: &mut RunReport, kind: Construction, src: &Source, out: &Path) -> Outcome {
    let (m, w) = match kind {
        Construction::CounterSsl => build_counter_ssl_model(width(report, src)?).map_err(usage)?,
        Construction::CounterS4s5 => build_counter_s4s5_model(width(report, src)?).map_err(usage)?,
        Construction::FSsl | Construction::FS4s5 => {
            let p = params(report, src)?;
            let tree = accepting_tree(report, &p)?;
            let built = match kind {
                Construction::FSsl => build_f_ssl_model(&p, &tree),
                _ => build_f_s4s5_model(&p, &tree),
            };
            built.map_err(check_err)?
        }
    };
    report.field("model.points", m.len());
    report.field("model.designated", m.name(w));
    if let Some(class) = m.class() {
        report.field("model.class", class);
        let v = validate(&m, class);
        report.check("frame", v.passed(), &v.to_string());
    }
    write(report, "model", out, &m.dump())
}

fn cmd_check(report: &mut RunReport, model: &Path, name: &str, formula: &Path) -> Outcome {
    let m = read_model(report, model)?;
    let f = read_formula(report, formula)?;
    let w = point(&m, name)?;
    report.field("point", name);
    let path = failure_trace(&m, w, &f);
    report.check("truth", path.is_empty(), path.last().map_or("", String::as_str));
    for (i, step) in path.iter().enumerate() {
        report.field(&format!("counterexample.path.{}", i), step);
    }
    Ok(())
}

fn cmd_extract(
    report: &mut RunReport,
    what: ExtractKind,
    model: &Path,
    name: &str,
    logic: Logic,
    src: &Source,
    out: Option<&Path>,
) -> Outcome {
    let m = read_model(report, model)?;
    let w = point(&m, name)?;
    report.field("point", name);
    match what {
        ExtractKind::Trace => {
            let n = width(report, src)?;
            let (trace, alpha) = match logic {
                Logic::Ssl => (extract_counter_trace(&m, w, n), counter_ssl_alpha(n)),
                Logic::S4s5 => (extract_counter_trace_s4s5(&m, w, n), counter_s4s5_alpha(n)),
            };
            match trace {
                Ok(t) => {
                    let mut ev = Evaluator::new(&m);
                    let names: Vec<&str> = t.p.iter().map(|&v| m.name(v)).collect();
                    let values: Vec<String> = t.p.iter().map(|&v| decode(&mut ev, &alpha, v).to_string()).collect();
                    report.field("trace.points", names.join(" "));
                    report.field("trace.values", values.join(" "));
                    report.check("extraction", true, "");
                }
                Err(e) => report.check("extraction", false, &e.to_string()),
            }
        }
        ExtractKind::Tree => {
            let p = params(report, src)?;
            let ex = match logic {
                Logic::Ssl => extract_accepting_tree_ssl(&m, w, &p),
                Logic::S4s5 => extract_accepting_tree_s4s5(&m, w, &p),
            };
            match ex {
                Ok(ex) => {
                    report.field("tree.nodes", ex.tree.len());
                    report.field("tree.steps", ex.steps);
                    report.check("extraction", true, "");
                    let text = ex.tree.describe(&p.atm);
                    match out {
                        Some(path) => write(report, "tree", path, &text)?,
                        None => report.field("tree", text.trim_end()),
                    }
                }
                Err(e) => report.check("extraction", false, &e.to_string()),
            }
        }
    }
    Ok(())
}

fn cmd_translate(report: &mut RunReport, dir: Direction, formula: &Path, out: &Path) -> Outcome {
    let f = read_formula(report, formula)?;
    let t = match dir {
        Direction::SslS4s5 => t_ssl_to_s4s5(&f),
        Direction::S4s5K4s5 => t_s4s5_to_k4s5(&f),
    };
    if let Some(main) = t.main_atom {
        report.field("main", format!("x{:b}", main));
    }
    if let Direction::S4s5K4s5 = dir {
        report.field("boxes", t.box_subformulas.len());
    }
    report.field("formula.symbols", t.formula.symbol_count());
    write(report, "formula", out, &format!("{}\n", t.formula.render()))
}

fn truth_check(report: &mut RunReport, m: &BimodalModel, w: WorldId, f: &Formula, name: &str) {
    let path = failure_trace(m, w, f);
    report.check(name, path.is_empty(), &path.join(" / "));
}

fn cmd_lift(report: &mut RunReport, model: &Path, name: &str, formula: &Path, out: &Path) -> Outcome {
    let m = read_model(report, model)?;
    let f = read_formula(report, formula)?;
    let w = point(&m, name)?;
    let t = t_ssl_to_s4s5(&f);
    let main = t.main_atom.expect("SSL translation has a main atom");
    let (lifted, w2) = lift_model_ssl_to_s4s5(&m, w, main).map_err(check_err)?;
    report.field("model.points", lifted.len());
    report.field("model.designated", lifted.name(w2));
    let v = validate(&lifted, FrameClass::S4xS5Commutator);
    report.check("frame", v.passed(), &v.to_string());
    truth_check(report, &lifted, w2, &t.formula, "translated_formula");
    write(report, "model", out, &lifted.dump())
}

fn cmd_restrict(
    report: &mut RunReport,
    dir: Direction,
    model: &Path,
    name: &str,
    formula: &Path,
    out: &Path,
) -> Outcome {
    let m = read_model(report, model)?;
    let f = read_formula(report, formula)?;
    let w = point(&m, name)?;
    let (restricted, class) = match dir {
        Direction::SslS4s5 => (restrict_model_s4s5_to_ssl(&m, w, &f), FrameClass::CrossAxiom),
        Direction::S4s5K4s5 => (k4_to_s4_model(&m, w, &f), FrameClass::S4xS5Commutator),
    };
    let (r, w2) = restricted.map_err(check_err)?;
    report.field("model.points", r.len());
    report.field("model.designated", r.name(w2));
    let v = validate(&r, class);
    report.check("frame", v.passed(), &v.to_string());
    truth_check(report, &r, w2, &f, "formula");
    write(report, "model", out, &r.dump())
}

fn cmd_sat(report: &mut RunReport, class: FrameClass, bound: usize, formula: &Path, out: Option<&Path>) -> Outcome {
    let f = read_formula(report, formula)?;
    report.field("class", class);
    report.field("bound", bound);
    match bounded_sat(&f, class, bound).map_err(usage)? {
        SatVerdict::Sat { model, point } => {
            report.field("verdict", "sat");
            report.field("model.points", model.len());
            report.field("model.designated", model.name(point));
            if let Some(path) = out {
                write(report, "model", path, &model.dump())?;
            }
        }
        SatVerdict::UnsatWithinBound { max_points, atoms } => {
            report.field("verdict", "unsat_within_bound");
            report.field("searched.max_points", max_points);
            report.field("searched.atoms", atoms);
        }
    }
    Ok(())
}

fn cmd_atm_run(report: &mut RunReport, atm: &Path, w: &str, fuel: u64, out: Option<&Path>) -> Outcome {
    let spec = AtmSpec::parse(&read(report, "atm", atm)?).map_err(usage)?;
    report.field("w", w);
    report.field("fuel", fuel);
    let tree = find_accepting_tree(&spec, w, fuel).map_err(usage)?;
    report.check("accepted", tree.is_some(), &format!("no accepting tree within time {}", fuel));
    if let Some(t) = tree {
        report.field("tree.nodes", t.len());
        report.field("tree.height", t.height());
        let text = t.describe(&spec);
        match out {
            Some(path) => write(report, "tree", path, &text)?,
            None => report.field("tree", text.trim_end()),
        }
    }
    Ok(())
}

fn cmd_verify(report: &mut RunReport, atm: &Path, w: &str, poly: &[u64]) -> Outcome {
    let src = Source {
        n: None,
        atm: Some(atm.to_path_buf()),
        w: Some(w.to_string()),
        poly: Some(poly.to_vec()),
    };
    let p = params(report, &src)?;
    verify_pipeline(&p, report);
    Ok(())
}

fn run(cli: &Cli, report: &mut RunReport) -> Outcome {
    match &cli.command {
        Command::Gen { kind, src, out } => cmd_gen(report, *kind, src, out),
        Command::Build { kind, src, out, .. } => cmd_build(report, *kind, src, out),
        Command::Check { model, point, formula } => cmd_check(report, model, point, formula),
        Command::Extract { what, model, point, logic, src, out } => {
            cmd_extract(report, *what, model, point, *logic, src, out.as_deref())
        }
        Command::Translate { direction, formula, out } => cmd_translate(report, *direction, formula, out),
        Command::Lift { model, point, formula, out } => cmd_lift(report, model, point, formula, out),
        Command::Restrict { direction, model, point, formula, out } => {
            cmd_restrict(report, *direction, model, point, formula, out)
        }
        Command::Sat { class, bound, formula, out } => cmd_sat(report, *class, *bound, formula, out.as_deref()),
        Command::Atm { command: AtmCommand::Run { atm, w, fuel, out } } => {
            cmd_atm_run(report, atm, w, *fuel, out.as_deref())
        }
        Command::Verify { command: VerifyCommand::Pipeline { atm, w, poly } } => cmd_verify(report, atm, w, poly),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&args);
    let mut report = RunReport::new(&args[1..].join(" "));
    let t0 = Instant::now();
    let outcome = run(&cli, &mut report);
    report.timing("total", t0.elapsed());
    let code = match outcome {
        Ok(()) if report.passed() => 0,
        Ok(()) => 1,
        Err(Failure::Check(msg)) => {
            report.check("run", false, &msg);
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            2
        }
    };
    print!("{}", report.render());
    ExitCode::from(code)
}
