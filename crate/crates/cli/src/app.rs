//! Argument handling and the subcommands.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ifs_codings::coding::{
    build_residual_graph, classify_cardinality, enumerate_codings, make_witness, CodingError, Limits,
    ResidualGraph, SymbolicPoint, WitnessRequest,
};
use ifs_codings::dimension::{
    analyse, build_graph, build_partition, reduced_system, strongly_connected, DimensionError,
    GraphDirectedSystem,
};
use ifs_codings::exact::Rational;
use ifs_codings::ifs::{theorem_case, ClassEReport};
use ifs_codings::theorems::{verify, HarnessConfig, HarnessError, Theorem};
use ifs_codings::Ifs;
use thiserror::Error;

use crate::parse::{parse_ifs_file, IfsFile, ParseError, PointArg};
use crate::report::{
    CaseSection, ClassificationEntry, DimensionEntry, MatricesSection, MatrixEntry, Number, PartitionSection,
    Report, SystemSection, TheoremSection, ValidationSection, WitnessEntry,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ifs-codings", version, about = "Codings of points in overlapping self-similar sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to PATH (`-` prints it instead of the text report).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write the relevant graph in DOT format to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Residual graph node limit.
    #[arg(long, global = true, default_value_t = Limits::default().max_nodes, value_parser = positive_usize)]
    pub max_nodes: usize,
    /// Residual graph depth limit.
    #[arg(long, global = true, default_value_t = Limits::default().max_depth, value_parser = positive_usize)]
    pub max_depth: usize,
    /// Width of certified dimension brackets.
    #[arg(long, global = true, default_value_t = ifs_codings::dimension::DEFAULT_TOLERANCE, value_parser = positive_f64)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check class membership and list the overlaps.
    Validate { file: PathBuf },
    /// Partition points, admissible pairs and the counting matrices.
    Partition { file: PathBuf },
    /// Hausdorff dimension of the attractor (E) or of the unique-coding set (U1).
    Dim {
        file: PathBuf,
        /// Both when omitted.
        #[arg(long, value_enum)]
        set: Option<SetArg>,
    },
    /// Number of codings of points, given as `w=<digits>;p=<digits>` or as rationals.
    Classify {
        file: PathBuf,
        #[arg(long, required = true, allow_hyphen_values = true)]
        point: Vec<PointArg>,
        /// Also list the coding prefixes of this length.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Construct points with a prescribed number of codings.
    Witness {
        file: PathBuf,
        /// `finite:<k>`, `aleph0` or `continuum`.
        #[arg(long, required = true)]
        target: Vec<WitnessRequest>,
    },
    /// Run the checks for one of the three counting results.
    Verify {
        file: PathBuf,
        #[arg(long)]
        theorem: Theorem,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Partition { .. } => "partition",
            Command::Dim { .. } => "dim",
            Command::Classify { .. } => "classify",
            Command::Witness { .. } => "witness",
            Command::Verify { .. } => "verify",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Validate { file }
            | Command::Partition { file }
            | Command::Dim { file, .. }
            | Command::Classify { file, .. }
            | Command::Witness { file, .. }
            | Command::Verify { file, .. } => file,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    #[value(name = "E")]
    E,
    #[value(name = "U1")]
    U1,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, found `{s}`")),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, found `{s}`")),
    }
}

/// Input problems; all map to exit code 3.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Point(CodingError),
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub dot: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let path = cli.command.file();
    let text = std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    let file = parse_ifs_file(&text).map_err(|source| InputError::Parse { path: path.display().to_string(), source })?;
    run_file(cli, &file)
}

pub fn run_file(cli: &Cli, file: &IfsFile) -> Result<Outcome, InputError> {
    let (ifs, class) = file.system();
    let mut report = Report::new(
        cli.command.name(),
        SystemSection::new(file.name.clone(), &file.maps, &file.lines, ifs.as_ref()),
        ValidationSection::new(&class),
    );
    let ifs = match ifs {
        Some(ifs) if class.is_member() => ifs,
        _ => {
            report.exit_code = EXIT_VIOLATION;
            return Ok(Outcome { report, dot: None });
        }
    };
    report.case = theorem_case(&class).ok().map(|c| CaseSection::new(&c));
    let limits = Limits { max_nodes: cli.max_nodes, max_depth: cli.max_depth };
    let name = file.name.clone().unwrap_or_else(|| "ifs".into());

    let mut dot = None;
    match &cli.command {
        Command::Validate { .. } => {}
        Command::Partition { .. } => match graphs(&ifs, &class) {
            Ok((part, full, reduced)) => {
                report.partition = Some(PartitionSection::new(&part));
                report.matrices = Some(matrices(&full, &reduced));
                dot = Some(full.to_dot(&name));
            }
            Err(e) => fail(&mut report, &e),
        },
        Command::Dim { set, .. } => match analyse(&ifs, &class, cli.tol) {
            Ok(d) => {
                report.partition = Some(PartitionSection::new(&d.partition));
                report.matrices = Some(matrices(&d.full, &d.reduced));
                if *set != Some(SetArg::U1) {
                    report.dimensions.push(DimensionEntry::new("E", &d.dim_attractor));
                }
                if *set != Some(SetArg::E) {
                    report.dimensions.push(DimensionEntry::new("U1", &d.dim_univoque));
                }
                let g = if *set == Some(SetArg::U1) { &d.reduced } else { &d.full };
                dot = Some(g.to_dot(&name));
            }
            Err(e) => fail(&mut report, &e),
        },
        Command::Classify { point, depth, .. } => {
            for p in point {
                let (label, x) = resolve(&ifs, p)?;
                match classify(&ifs, label, &x, *depth, limits) {
                    Ok((entry, g)) => {
                        if entry.verdict == "unknown" {
                            report.exit_code = EXIT_UNDECIDED;
                        }
                        if dot.is_none() {
                            dot = g.map(|g| residual_dot(&g, &name));
                        }
                        report.classifications.push(entry);
                    }
                    Err(e) => {
                        fail(&mut report, &e);
                        break;
                    }
                }
            }
        }
        Command::Witness { target, .. } => {
            for &t in target {
                let entry = match make_witness(&ifs, &class, t, limits) {
                    Ok(p) => WitnessEntry {
                        target: t.to_string(),
                        status: "found".into(),
                        point: Some(p.to_string()),
                        value: Some(Number::exact(p.value())),
                        reason: None,
                    },
                    Err(e) => {
                        report.exit_code = EXIT_UNDECIDED;
                        let status = match e {
                            CodingError::UnreachableTarget { .. } => "unreachable",
                            _ => "undecided",
                        };
                        WitnessEntry {
                            target: t.to_string(),
                            status: status.into(),
                            point: None,
                            value: None,
                            reason: Some(e.to_string()),
                        }
                    }
                };
                report.witnesses.push(entry);
            }
        }
        Command::Verify { theorem, .. } => {
            let config = HarnessConfig { limits, tol: cli.tol, ..HarnessConfig::default() };
            match verify(&ifs, &class, *theorem, &config) {
                Ok(t) => {
                    if let Some(d) = &t.dimensions {
                        report.partition = Some(PartitionSection::new(&d.partition));
                        report.matrices = Some(matrices(&d.full, &d.reduced));
                        report.dimensions.push(DimensionEntry::new("E", &d.dim_attractor));
                        report.dimensions.push(DimensionEntry::new("U1", &d.dim_univoque));
                        dot = Some(d.full.to_dot(&name));
                    }
                    let section = TheoremSection::new(&t);
                    if !section.passed {
                        report.exit_code = EXIT_UNDECIDED;
                    }
                    report.theorem = Some(section);
                }
                Err(e) => {
                    report.exit_code = match e {
                        HarnessError::CaseMismatch { .. } => EXIT_VIOLATION,
                        _ => EXIT_UNDECIDED,
                    };
                    report.error = Some(e.to_string());
                }
            }
        }
    }
    Ok(Outcome { report, dot })
}

fn fail(report: &mut Report, e: &dyn std::fmt::Display) {
    report.error = Some(e.to_string());
    report.exit_code = EXIT_UNDECIDED;
}

type Graphs = (ifs_codings::dimension::Partition, GraphDirectedSystem, GraphDirectedSystem);

fn graphs(ifs: &Ifs, class: &ClassEReport) -> Result<Graphs, DimensionError> {
    let part = build_partition(ifs, class)?;
    let full = build_graph(ifs, &part)?;
    let reduced = reduced_system(ifs, class, &part, &full)?;
    Ok((part, full, reduced))
}

fn matrices(full: &GraphDirectedSystem, reduced: &GraphDirectedSystem) -> MatricesSection {
    MatricesSection {
        full: MatrixEntry::new(full, strongly_connected(full)),
        reduced: MatrixEntry::new(reduced, strongly_connected(reduced)),
    }
}

fn resolve(ifs: &Ifs, p: &PointArg) -> Result<(String, Rational), InputError> {
    match p {
        PointArg::Symbolic(s) => {
            let sp = SymbolicPoint::parse(ifs, s).map_err(InputError::Point)?;
            Ok((sp.to_string(), sp.value().clone()))
        }
        PointArg::Value(x) => Ok((x.to_string(), x.clone())),
    }
}

fn classify(
    ifs: &Ifs,
    label: String,
    x: &Rational,
    depth: Option<usize>,
    limits: Limits,
) -> Result<(ClassificationEntry, Option<ResidualGraph>), CodingError> {
    let outside = |e: &CodingError| matches!(e, CodingError::OutsideHull(_) | CodingError::RootNotInAttractor(_));
    let g = match build_residual_graph(ifs, x, limits) {
        Ok(g) => g,
        Err(e) if outside(&e) => return Ok((ClassificationEntry::new(label, x, None, None), None)),
        Err(e) => return Err(e),
    };
    let verdict = match classify_cardinality(&g) {
        Ok(v) => v,
        Err(e) if outside(&e) => return Ok((ClassificationEntry::new(label, x, None, Some(&g)), Some(g))),
        Err(e) => return Err(e),
    };
    let mut entry = ClassificationEntry::new(label, x, Some(&verdict), Some(&g));
    if let Some(d) = depth {
        entry = entry.with_prefixes(d, &enumerate_codings(ifs, x, d, limits)?);
    }
    Ok((entry, Some(g)))
}

fn residual_dot(g: &ResidualGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{} residuals\" {{", name.replace('"', "'"));
    for (k, y) in g.nodes().iter().enumerate() {
        let shape = if k == g.root() { " shape=box" } else { "" };
        let _ = writeln!(out, "  r{k} [label=\"{y}\"{shape}];");
    }
    for e in g.edges() {
        let _ = writeln!(out, "  r{} -> r{} [label=\"{}\"];", e.from, e.to, e.digit);
    }
    out.push_str("}\n");
    out
}
