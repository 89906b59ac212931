//! `workbench`: family generation, spectra, energies, the family verification
//! sweep and L-borderenergetic scans. Output is JSON lines on stdout,
//! diagnostics go to stderr. Exit codes: 0 success, 1 check failure, 2 usage
//! or parse error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spectral_workbench::energy::{exact_family_energy, graph_energy, EnergyReport};
use spectral_workbench::graph6::{read_stream, Graph6Options};
use spectral_workbench::scan::{scan_corpus, scan_labeled};
use spectral_workbench::spectral::graph_spectrum;
use spectral_workbench::verify::verify_families;
use spectral_workbench::{family, family_spectrum, write_graph6, FamilyId, Graph, MatrixKind};

#[derive(Parser)]
#[command(
    name = "workbench",
    version,
    about = "Laplacian spectra, graph energies and L-borderenergetic graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and print it.
    Family {
        #[command(flatten)]
        id: IdArgs,
        #[arg(long, value_enum, default_value = "g6")]
        emit: Emit,
    },
    /// Print the spectrum of a matrix of a graph.
    Spectrum(QueryArgs),
    /// Print the energy of a matrix of a graph.
    Energy(QueryArgs),
    /// Check every family instance against closed forms, join theorems and energy formulas.
    Verify {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        max_ab: usize,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search for graphs with E_L = 2n - 2.
    Scan {
        /// Enumerate every labeled graph of this order.
        #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus", value_parser = clap::value_parser!(u8).range(1..=7))]
        n: Option<u8>,
        /// Scan the graphs of a graph6 file instead.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Abort on the first malformed corpus line.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyTag {
    Kkodot,
    Kkdot,
    Mjc,
    Mje,
    Complete,
    Empty,
    Matching,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    G6,
    Edges,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixArg {
    #[value(name = "A")]
    A,
    #[value(name = "L")]
    L,
    #[value(name = "NL")]
    Nl,
}

impl From<MatrixArg> for MatrixKind {
    fn from(m: MatrixArg) -> Self {
        match m {
            MatrixArg::A => MatrixKind::Adjacency,
            MatrixArg::L => MatrixKind::Laplacian,
            MatrixArg::Nl => MatrixKind::NormalizedLaplacian,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Exact,
}

#[derive(Args)]
struct IdArgs {
    #[arg(long, value_enum)]
    id: FamilyTag,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "id"])))]
struct QueryArgs {
    #[arg(long, value_enum)]
    matrix: MatrixArg,
    #[arg(long, value_enum, default_value = "float")]
    mode: Mode,
    /// graph6 file, one graph per line.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    id: Option<FamilyTag>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
}

fn family_id(tag: FamilyTag, n: Option<usize>, a: Option<usize>, b: Option<usize>) -> Result<FamilyId> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--{flag} is required for this family"));
    let id = match tag {
        FamilyTag::Kkodot => FamilyId::KKOdot { n: need(n, "n")? },
        FamilyTag::Kkdot => FamilyId::KKDot { n: need(n, "n")? },
        FamilyTag::Complete => FamilyId::Complete { n: need(n, "n")? },
        FamilyTag::Empty => FamilyId::Empty { b: need(b.or(n), "b")? },
        FamilyTag::Matching => FamilyId::Matching { a: need(a.or(n), "a")? },
        FamilyTag::Mjc => FamilyId::MatchJoinComplete {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
        FamilyTag::Mje => FamilyId::MatchJoinEmpty {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
    };
    id.validate()?;
    Ok(id)
}

/// Writes JSON lines to stdout and, optionally, to a report file.
struct Sink {
    stdout: io::StdoutLock<'static>,
    file: Option<BufWriter<File>>,
}

impl Sink {
    fn new(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => Some(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => None,
        };
        Ok(Sink {
            stdout: io::stdout().lock(),
            file,
        })
    }

    fn emit(&mut self, value: &impl serde::Serialize) -> Result<()> {
        let line = serde_json::to_string(value)?;
        writeln!(self.stdout, "{line}")?;
        if let Some(f) = self.file.as_mut() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.stdout.flush()?;
        if let Some(mut f) = self.file.take() {
            f.flush()?;
        }
        Ok(())
    }
}

/// Graphs named on the command line: either one family member or every
/// record of a graph6 file.
fn sources(q: &QueryArgs) -> Result<Vec<(Value, Graph)>> {
    if let Some(path) = &q.input {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let mut out = Vec::new();
        for (line, record) in read_stream(BufReader::new(file), Graph6Options::default()) {
            let decoded = record.with_context(|| format!("{}:{line}", path.display()))?;
            let g6 = write_graph6(&decoded.graph)?;
            out.push((json!({ "line": line, "graph6": g6 }), decoded.graph));
        }
        Ok(out)
    } else {
        let id = query_id(q)?;
        Ok(vec![(json!({ "id": id }), family(id)?)])
    }
}

fn query_id(q: &QueryArgs) -> Result<FamilyId> {
    let tag = q.id.ok_or_else(|| anyhow!("--id or --input is required"))?;
    family_id(tag, q.n, q.a, q.b)
}

fn energy_json(source: Value, mode: Mode, r: &EnergyReport) -> Value {
    let mut v = json!({
        "source": source,
        "matrix": r.kind,
        "mode": if mode == Mode::Exact { "exact" } else { "float" },
        "order": r.order,
        "center": r.center,
        "energy": r.value(),
    });
    let obj = v.as_object_mut().expect("object literal");
    if let Some(c) = &r.center_exact {
        obj.insert("center_exact".into(), json!(c.to_string()));
    }
    if let Some(e) = &r.energy_exact {
        obj.insert("energy_exact".into(), json!(e.to_string()));
    }
    for (key, flag) in [
        ("is_l_borderenergetic", r.is_l_borderenergetic),
        ("is_borderenergetic", r.is_borderenergetic),
        ("cospectral_with_complete", r.cospectral_with_complete),
    ] {
        if let Some(f) = flag {
            obj.insert(key.into(), json!(f));
        }
    }
    v
}

fn cmd_family(id: &IdArgs, emit: Emit) -> Result<u8> {
    let fid = family_id(id.id, id.n, id.a, id.b)?;
    let g = family(fid)?;
    let mut out = json!({ "id": fid, "order": g.order(), "edge_count": g.edge_count() });
    let obj = out.as_object_mut().expect("object literal");
    match emit {
        Emit::G6 => obj.insert("graph6".into(), json!(write_graph6(&g)?)),
        Emit::Edges => obj.insert("edges".into(), json!(g.edges().collect::<Vec<_>>())),
    };
    let mut sink = Sink::new(None)?;
    sink.emit(&out)?;
    sink.finish()?;
    Ok(0)
}

fn cmd_spectrum(q: &QueryArgs) -> Result<u8> {
    let kind = MatrixKind::from(q.matrix);
    let mut sink = Sink::new(None)?;
    if q.mode == Mode::Exact {
        if q.input.is_some() {
            bail!("exact spectra are only available for --id families");
        }
        let id = query_id(q)?;
        let spec = family_spectrum(id, kind)?;
        sink.emit(&json!({
            "source": { "id": id },
            "matrix": kind,
            "mode": "exact",
            "order": spec.order(),
            "spectrum": spec.to_entries(),
        }))?;
    } else {
        for (source, g) in sources(q)? {
            let spec = graph_spectrum(&g, kind)?;
            sink.emit(&json!({
                "source": source,
                "matrix": kind,
                "mode": "float",
                "order": g.order(),
                "eigenvalues": spec,
            }))?;
        }
    }
    sink.finish()?;
    Ok(0)
}

fn cmd_energy(q: &QueryArgs) -> Result<u8> {
    let kind = MatrixKind::from(q.matrix);
    let mut sink = Sink::new(None)?;
    if q.mode == Mode::Exact {
        if q.input.is_some() {
            bail!("exact energies are only available for --id families");
        }
        let id = query_id(q)?;
        let report = exact_family_energy(id, kind)?;
        sink.emit(&energy_json(json!({ "id": id }), q.mode, &report))?;
    } else {
        for (source, g) in sources(q)? {
            let report = graph_energy(&g, kind)?;
            sink.emit(&energy_json(source, q.mode, &report))?;
        }
    }
    sink.finish()?;
    Ok(0)
}

fn cmd_verify(max_n: usize, max_ab: usize, json_path: Option<&Path>) -> Result<u8> {
    if max_n < 3 || max_ab < 2 {
        bail!("--max-n must be at least 3 and --max-ab at least 2");
    }
    let start = Instant::now();
    let report = verify_families(max_n, max_ab);
    let mut sink = Sink::new(json_path)?;
    for record in &report.records {
        sink.emit(record)?;
    }
    sink.emit(&json!({
        "summary": report.summary,
        "max_n": max_n,
        "max_ab": max_ab,
        "elapsed_ms": start.elapsed().as_millis() as u64,
    }))?;
    sink.finish()?;
    for f in report.failures() {
        eprintln!(
            "FAIL {} {:?}: {}",
            f.id,
            f.check,
            f.detail.as_deref().unwrap_or("out of tolerance")
        );
    }
    Ok(report.exit_code() as u8)
}

fn cmd_scan(n: Option<u8>, corpus: Option<&Path>, strict: bool, json_path: Option<&Path>) -> Result<u8> {
    let start = Instant::now();
    let (findings, mut summary) = match (n, corpus) {
        (Some(n), _) => {
            let findings = scan_labeled(n as usize)?;
            (
                findings,
                json!({ "n": n, "labeled_graphs": 1u64 << (n as u64 * (n as u64 - 1) / 2) }),
            )
        }
        (None, Some(path)) => {
            let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            let scan = scan_corpus(BufReader::new(file), strict)?;
            for (line, err) in &scan.malformed {
                eprintln!("{}:{line}: skipped: {err}", path.display());
            }
            for line in &scan.padding_warnings {
                eprintln!("{}:{line}: warning: nonzero padding bits", path.display());
            }
            let summary = json!({
                "corpus": path.display().to_string(),
                "records": scan.records,
                "malformed": scan.malformed.len(),
            });
            (scan.findings, summary)
        }
        (None, None) => bail!("either --n or --corpus is required"),
    };
    let mut sink = Sink::new(json_path)?;
    for f in &findings {
        sink.emit(f)?;
    }
    let obj = summary.as_object_mut().expect("object literal");
    obj.insert("findings".into(), json!(findings.len()));
    obj.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    sink.emit(&json!({ "summary": summary }))?;
    sink.finish()?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Family { id, emit } => cmd_family(&id, emit),
        Command::Spectrum(q) => cmd_spectrum(&q),
        Command::Energy(q) => cmd_energy(&q),
        Command::Verify { max_n, max_ab, json } => cmd_verify(max_n, max_ab, json.as_deref()),
        Command::Scan {
            n,
            corpus,
            strict,
            json,
        } => cmd_scan(n, corpus.as_deref(), strict, json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        // A closed stdout (e.g. piping into `head`) is not an error.
        Err(e)
            if e.chain()
                .filter_map(|c| c.downcast_ref::<io::Error>())
                .any(|io| io.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
