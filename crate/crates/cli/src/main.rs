//! `orthoreal`: build realizable families and Sullivan models, verify them
//! and classify automorphisms.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 parse or usage error,
//! 3 group order bound exceeded, 4 degree bound violated, 5 verification or
//! classification failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use orthoreal::cdga::{parse_cdga_unchecked, parse_morphism, CdgaError};
use orthoreal::groups::{GroupError, DEFAULT_MAX_ORDER};
use orthoreal::realizable::{
    g2_family, orthogonal_presentation, parse_family, symmetric_family, write_family, RealizableError,
};
use orthoreal::realization::{build_model, classify, parse_model, write_model, ModelSpec, RealizationError};
use orthoreal::{QMatrix, QMatrixGroup};

#[derive(Parser)]
#[command(name = "orthoreal", version, about = "Realize finite groups as orthogonal groups of form families and as automorphisms of Sullivan models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Realizable family whose orthogonal group is generated by the matrices in GROUP.
    Family {
        /// Generator matrices, one row per line, separated by blank lines.
        group: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sullivan model of a family.
    Model {
        /// Family file.
        #[arg(required_unless_present = "spec", conflicts_with = "spec")]
        family: Option<PathBuf>,
        #[arg(long, required_unless_present = "spec")]
        k: Option<u64>,
        /// File with `family: <path>` and `k: <int>` lines.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check d² = 0, minimality and degrees of an algebra file.
    Verify { model: PathBuf },
    /// Decide whether an endomorphism of a model is homotopic to a lifted group element.
    Classify { model: PathBuf, morphism: PathBuf },
    /// Built-in families.
    Examples {
        name: Example,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    #[value(name = "sigma_n")]
    SigmaN,
    G2,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn parse_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::new(2, format!("{}: {e}", path.display()))
}

fn realizable_failure(e: RealizableError) -> Failure {
    match e {
        RealizableError::Group(GroupError::OrderBoundExceeded(_)) => Failure::new(3, e.to_string()),
        RealizableError::BadN(_) | RealizableError::BadS { .. } | RealizableError::Syntax { .. } => {
            Failure::new(2, e.to_string())
        }
        _ => Failure::new(1, e.to_string()),
    }
}

fn realization_failure(e: RealizationError) -> Failure {
    match e {
        RealizationError::DegreeBoundViolated { .. } | RealizationError::BadK(_) => Failure::new(4, e.to_string()),
        RealizationError::Syntax { .. } | RealizationError::Cdga(CdgaError::Syntax { .. }) => Failure::new(2, e.to_string()),
        RealizationError::NotRealizable(_) | RealizationError::Realizable(_) | RealizationError::Poly(_) => {
            Failure::new(2, e.to_string())
        }
        RealizationError::ModelMismatch | RealizationError::ModelCheck(_) | RealizationError::NotChainMap { .. } => {
            Failure::new(5, e.to_string())
        }
        _ => Failure::new(1, e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

/// Matrices separated by blank lines; `#` starts a comment line.
fn parse_group_file(text: &str) -> Result<Vec<QMatrix>, String> {
    let mut blocks: Vec<String> = vec![String::new()];
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            if !blocks.last().unwrap().is_empty() {
                blocks.push(String::new());
            }
            continue;
        }
        let b = blocks.last_mut().unwrap();
        b.push_str(t);
        b.push('\n');
    }
    blocks.retain(|b| !b.is_empty());
    if blocks.is_empty() {
        return Err("no matrices".into());
    }
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| QMatrix::parse(b).map_err(|e| format!("matrix {}: {e}", i + 1)))
        .collect()
}

/// Artifact to `out` (report to stdout) or to stdout (report to stderr).
fn emit(artifact: &str, report: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, artifact).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
            print!("{report}");
        }
        None => {
            print!("{artifact}");
            eprint!("{report}");
        }
    }
    Ok(())
}

fn commented(m: &QMatrix) -> String {
    m.to_string().lines().map(|l| format!("# {l}\n")).collect()
}

fn cmd_family(group: &Path, max_order: usize, out: Option<&Path>) -> Result<(), Failure> {
    let gens = parse_group_file(&read(group)?).map_err(|e| parse_failure(group, e))?;
    let g = QMatrixGroup::closure(gens, max_order).map_err(|e| match e {
        GroupError::OrderBoundExceeded(_) => Failure::new(3, e.to_string()),
        _ => parse_failure(group, e),
    })?;
    let p = orthogonal_presentation(&g).map_err(realizable_failure)?;
    let fam = &p.family;
    let mut report = String::new();
    writeln!(report, "group order: {}", g.order()).unwrap();
    writeln!(report, "degrees: {:?}", fam.degrees()).unwrap();
    writeln!(report, "s: {}", fam.s()).unwrap();
    writeln!(report, "d: {}", fam.d()).unwrap();
    if let Some(l) = fam.lambdas() {
        let l: Vec<String> = l.iter().map(ToString::to_string).collect();
        writeln!(report, "lambda: {}", l.join(" ")).unwrap();
    }
    writeln!(report, "basis change:").unwrap();
    report.push_str(&commented(&p.basis_change).replace("# ", "  "));
    let artifact = format!("# basis change\n{}{}", commented(&p.basis_change), write_family(fam));
    emit(&artifact, &report, out)
}

fn read_spec(path: &Path) -> Result<(PathBuf, u64), Failure> {
    let text = read(path)?;
    let mut family = None;
    let mut k = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        match line.split_once(':') {
            Some(("family", v)) => {
                let p = PathBuf::from(v.trim());
                family = Some(if p.is_relative() { path.parent().unwrap_or(Path::new(".")).join(p) } else { p });
            }
            Some(("k", v)) => k = Some(v.trim().parse().map_err(|_| parse_failure(path, format!("bad k `{}`", v.trim())))?),
            _ => return Err(parse_failure(path, format!("unexpected line `{line}`"))),
        }
    }
    match (family, k) {
        (Some(f), Some(k)) => Ok((f, k)),
        _ => Err(parse_failure(path, "need `family:` and `k:` lines")),
    }
}

fn cmd_model(family: &Path, k: u64, out: Option<&Path>) -> Result<(), Failure> {
    let fam = parse_family(&read(family)?)
        .and_then(|f| f.into_family())
        .map_err(|e| parse_failure(family, e))?;
    let model = ModelSpec::new(fam, k).and_then(build_model).map_err(realization_failure)?;
    let text = write_model(&model);
    let mut report = String::new();
    writeln!(report, "k: {k}").unwrap();
    writeln!(report, "|z|: {}", model.z_degree()).unwrap();
    writeln!(report, "x1 exponents: {:?}", model.spec().x1_exponents()).unwrap();
    writeln!(report, "d^2 = 0: yes").unwrap();
    writeln!(report, "minimal: yes").unwrap();
    emit(&text, &report, out)
}

fn cmd_verify(path: &Path) -> Result<(), Failure> {
    let file = parse_cdga_unchecked::<orthoreal::Rat>(&read(path)?).map_err(|e| parse_failure(path, e))?;
    let a = &file.cdga;
    let mut ok = true;
    let defects = a.degree_audit();
    let d2 = a.check_d_squared();
    let minimal = a.is_minimal();
    println!("generators: {}", a.gens().len());
    if defects.is_empty() {
        println!("degree audit: pass");
    } else {
        ok = false;
        println!("degree audit: FAIL");
        for d in &defects {
            println!("  d({}) has a term of degree {}, expected {}", d.generator, d.found, d.expected);
        }
    }
    match &d2 {
        Ok(()) => println!("d^2 = 0: pass"),
        Err(cx) => {
            ok = false;
            println!("d^2 = 0: FAIL on {cx}");
        }
    }
    println!("minimal: {}", if minimal { "pass" } else { "FAIL" });
    ok &= minimal;
    if ok && file.metadata.iter().any(|(k, _)| k == "k") {
        match parse_model(&read(path)?) {
            Ok(_) => println!("metadata: pass"),
            Err(e) => {
                ok = false;
                println!("metadata: FAIL ({e})");
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::new(5, "verification failed"))
    }
}

fn cmd_classify(model_path: &Path, morphism_path: &Path) -> Result<(), Failure> {
    let file = parse_model(&read(model_path)?).map_err(|e| match realization_failure(e) {
        Failure { code: 1, message } => Failure::new(2, format!("{}: {message}", model_path.display())),
        f => f,
    })?;
    let model = file
        .model
        .ok_or_else(|| parse_failure(model_path, "model file has no family metadata (`k:`, `family-vars:`, `q0:` ...)"))?;
    let a = Arc::clone(model.cdga());
    let f = parse_morphism(&read(morphism_path)?, Arc::clone(&a), a).map_err(|e| parse_failure(morphism_path, e))?;
    match classify(&f, &model) {
        Ok(r) => {
            print!("{}", r.report());
            match r.failed_step() {
                None => Ok(()),
                Some(step) => Err(Failure::new(5, format!("violated step: {step} ({})", step.failure()))),
            }
        }
        Err(e) => Err(realization_failure(e)),
    }
}

fn cmd_examples(name: Example, n: usize, s: Option<u32>, out: Option<&Path>) -> Result<(), Failure> {
    let mut report = String::new();
    let fam = match name {
        Example::SigmaN => symmetric_family(n, s).map_err(realizable_failure)?,
        Example::G2 => {
            let g2 = g2_family().map_err(realizable_failure)?;
            writeln!(report, "f0 rewritten: {}", g2.rewritten[0]).unwrap();
            writeln!(report, "f1 rewritten: {}", g2.rewritten[1]).unwrap();
            writeln!(report, "note: the v1 term of f0 is -2*v1^2 so that f0 is homogeneous").unwrap();
            writeln!(report, "note: q1 = f1*f0^2 keeps the degree gap above one").unwrap();
            g2.family
        }
    };
    writeln!(report, "degrees: {:?}", fam.degrees()).unwrap();
    writeln!(report, "s: {}", fam.s()).unwrap();
    writeln!(report, "d: {}", fam.d()).unwrap();
    emit(&write_family(&fam), &report, out)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Family { group, max_order, out } => cmd_family(&group, max_order, out.as_deref()),
        Command::Model { family, k, spec, out } => {
            let (family, k) = match spec {
                Some(spec) => read_spec(&spec)?,
                None => (family.expect("required by clap"), k.expect("required by clap")),
            };
            cmd_model(&family, k, out.as_deref())
        }
        Command::Verify { model } => cmd_verify(&model),
        Command::Classify { model, morphism } => cmd_classify(&model, &morphism),
        Command::Examples { name, n, s, out } => cmd_examples(name, n, s, out.as_deref()),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
