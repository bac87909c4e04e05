//! The `tcc` command line. [`run`] takes the argument list and two output
//! streams and returns the exit status: 0 success, 1 domain failure, 2 input
//! error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::augment::AugmentedGraph;
use crate::coloring::{exact_chi_tt, solve_tcc, verify, SolveOptions, TotalColoring, DEFAULT_BUDGET};
use crate::discharging::{apply_rule_table, check_claims, default_rule_table, parse_rule_table, LocalRule};
use crate::embedding::{EmbeddedGraph, EmbeddingFile, EmbeddingSpec, Surface};
use crate::error::Error;
use crate::gen::{write_corpus, GenSpec};
use crate::graph::SimpleGraph;
use crate::reducibility::audit_minimality;
use crate::ExactLedger;

#[derive(Debug, Parser)]
#[command(name = "tcc", version, about = "Total colorings of 1-toroidal graphs")]
struct Cli {
    /// Also write a machine-readable JSON report to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Trace the faces of an embedding.
    Faces {
        embedding: PathBuf,
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Build the augmented graph G* and classify its vertices.
    Gstar {
        embedding: PathBuf,
        #[command(flatten)]
        surface: SurfaceArg,
        /// Write G* as Graphviz.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Write G* as an embedding file (new segments marked).
        #[arg(long, value_name = "PATH")]
        write: Option<PathBuf>,
    },
    /// Run R1, R2, R3 and a rule table on G*, exactly.
    Discharge {
        embedding: PathBuf,
        #[command(flatten)]
        surface: SurfaceArg,
        /// Rule table (JSON); the shipped table by default.
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        /// Degree threshold Delta used by the rules; the maximum degree of G by default.
        #[arg(long)]
        delta: Option<usize>,
        /// Write the final charge report as JSON.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Find a total coloring with the reduce-and-extend solver.
    Color {
        graph: PathBuf,
        /// Palette size; Delta + 2 by default.
        #[arg(long)]
        kappa: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute the total chromatic number exactly (small graphs).
    Exact {
        graph: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a total coloring against a graph.
    Verify { graph: PathBuf, coloring: PathBuf },
    /// Check the local properties of a minimal counterexample.
    Audit {
        graph: PathBuf,
        /// Palette size; Delta + 2 by default.
        #[arg(long)]
        kappa: Option<usize>,
    },
    /// Check property P (K4s and induced diamonds).
    CheckP { graph: PathBuf },
    /// Generate a corpus from a JSON list of instance specs.
    Gen {
        specs: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct SurfaceArg {
    /// Override the surface declared in the embedding file.
    #[arg(long)]
    surface: Option<Surface>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Element cap for the exact solver.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

/// An error with its exit status.
struct Failure {
    code: i32,
    message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Library errors about malformed inputs exit with 2, the rest with 1.
fn classify(path: Option<&Path>, e: Error) -> Failure {
    let code = match e {
        Error::RuleConflict { .. }
        | Error::BudgetExceeded { .. }
        | Error::PartialColoring(_)
        | Error::Generator(_)
        | Error::P1Precondition(_)
        | Error::P3Precondition(_)
        | Error::CenterDegreeTooSmall { .. } => 1,
        _ => 2,
    };
    let message = match path {
        Some(p) => format!("{}: {e}", p.display()),
        None => e.to_string(),
    };
    Failure { code, message }
}

type Outcome = std::result::Result<i32, Failure>;

/// Output sink for one command: text goes to `out`; the JSON payload, when
/// requested, to a file.
struct Io<'a> {
    out: &'a mut dyn Write,
    json: Option<PathBuf>,
}

impl Io<'_> {
    fn print(&mut self, text: &str) -> std::result::Result<(), Failure> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| Failure { code: 1, message: e.to_string() })
    }

    fn json<T: Serialize>(&self, value: &T) -> std::result::Result<(), Failure> {
        match &self.json {
            Some(p) => write_json(p, value),
            None => Ok(()),
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    write_file(path, &text)
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> std::result::Result<SimpleGraph, Failure> {
    SimpleGraph::parse_edge_list(&read(path)?).map_err(|e| classify(Some(path), e))
}

/// The graph G behind an embedding file: its true vertices and the edges
/// named by segment origins.
fn graph_of(spec: &EmbeddingSpec) -> Result<SimpleGraph, Error> {
    let mut g = SimpleGraph::new()
        .with_vertices(spec.rotation.keys().copied().filter(|v| !spec.crossings.contains(v)));
    for &(_, _, e) in &spec.origins {
        if !g.has_edge(e.0, e.1) {
            g.add_edge(e.0, e.1)?;
        }
    }
    Ok(g)
}

/// Loads an embedding file as G* (augmenting it unless it already marks new
/// segments). Both loaders reject embeddings that are not 2-cell on the
/// declared surface.
fn read_augmented(path: &Path, surface: &SurfaceArg) -> std::result::Result<AugmentedGraph, Failure> {
    let wrap = |e| classify(Some(path), e);
    let mut spec = EmbeddingFile::parse(&read(path)?).map_err(wrap)?;
    if surface.surface.is_some() {
        spec.surface = surface.surface;
    }
    let g = graph_of(&spec).map_err(wrap)?;
    if spec.new_segments.is_empty() {
        let gd = EmbeddedGraph::build_associated(&g, &spec).map_err(wrap)?;
        gd.check_two_cell().map_err(wrap)?;
        Ok(AugmentedGraph::build(&gd, &g))
    } else {
        let a = AugmentedGraph::from_marked(&g, &spec).map_err(wrap)?;
        a.star().check_two_cell().map_err(wrap)?;
        Ok(a)
    }
}

fn read_embedding(path: &Path, surface: &SurfaceArg) -> std::result::Result<EmbeddedGraph, Failure> {
    let wrap = |e| classify(Some(path), e);
    let mut spec = EmbeddingFile::parse(&read(path)?).map_err(wrap)?;
    if surface.surface.is_some() {
        spec.surface = surface.surface;
    }
    let g = graph_of(&spec).map_err(wrap)?;
    let e = if spec.new_segments.is_empty() {
        EmbeddedGraph::build_associated(&g, &spec).map_err(wrap)?
    } else {
        AugmentedGraph::from_marked(&g, &spec).map(|a| a.star().clone()).map_err(wrap)?
    };
    e.check_two_cell().map_err(wrap)?;
    Ok(e)
}

#[derive(Serialize)]
struct FaceRow {
    size: usize,
    vertices: Vec<usize>,
    darts: Vec<usize>,
}

#[derive(Serialize)]
struct FacesReport {
    surface: String,
    vertices: usize,
    crossings: usize,
    segments: usize,
    faces: Vec<FaceRow>,
    euler_characteristic: i64,
}

fn faces(io: &mut Io, path: &Path, surface: &SurfaceArg) -> Outcome {
    let e = read_embedding(path, surface)?;
    let set = e.trace_faces();
    let report = FacesReport {
        surface: e.surface().to_string(),
        vertices: e.vertex_count(),
        crossings: e.crossing_vertices().count(),
        segments: e.segment_count(),
        faces: set
            .faces
            .iter()
            .map(|f| FaceRow {
                size: f.size(),
                vertices: e.face_vertices(f),
                darts: f.boundary.clone(),
            })
            .collect(),
        euler_characteristic: e.euler_characteristic(),
    };
    let mut text = format!(
        "surface {}  vertices {} ({} crossings)  segments {}  faces {}  euler characteristic {}\n",
        report.surface,
        report.vertices,
        report.crossings,
        report.segments,
        report.faces.len(),
        report.euler_characteristic
    );
    for (i, f) in report.faces.iter().enumerate() {
        let vs: Vec<String> = f.vertices.iter().map(usize::to_string).collect();
        text.push_str(&format!("face {i} (size {}): {}\n", f.size, vs.join(" ")));
    }
    io.print(&text)?;
    io.json(&report)?;
    Ok(0)
}

fn gstar(io: &mut Io, path: &Path, surface: &SurfaceArg, dot: Option<&Path>, write: Option<&Path>) -> Outcome {
    let a = read_augmented(path, surface)?;
    let report = a.report();
    io.print(&report.to_text())?;
    if let Some(p) = dot {
        write_file(p, &a.star().to_dot())?;
    }
    if let Some(p) = write {
        write_file(p, &EmbeddingFile::write(&a.star().to_spec()))?;
    }
    io.json(&report)?;
    Ok(0)
}

fn rules(path: Option<&Path>) -> std::result::Result<Vec<LocalRule>, Failure> {
    match path {
        None => Ok(default_rule_table()),
        Some(p) => parse_rule_table(&read(p)?).map_err(|e| classify(Some(p), e)),
    }
}

fn discharge(
    io: &mut Io,
    path: &Path,
    surface: &SurfaceArg,
    table: Option<&Path>,
    delta: Option<usize>,
    report_path: Option<&Path>,
) -> Outcome {
    let table = rules(table)?;
    let a = read_augmented(path, surface)?;
    let delta = delta.unwrap_or_else(|| a.graph().max_degree());
    let mut ledger = ExactLedger::initial(&a);
    ledger.apply_r1(&a, delta).apply_r2(&a).apply_r3(&a);
    if let Err(e) = apply_rule_table(&mut ledger, &a, &table, delta) {
        return Err(classify(None, e));
    }
    let claims = check_claims(&a, Some(&ledger));
    let report = ledger.final_report(&a);
    io.print(&claims.to_text())?;
    io.print(&report.to_text())?;
    if let Some(p) = report_path {
        write_json(p, &report)?;
    }
    io.json(&report)?;
    Ok(if report.conserved { 0 } else { 1 })
}

fn color(io: &mut Io, err: &mut dyn Write, path: &Path, kappa: Option<usize>, budget: usize, seed: u64) -> Outcome {
    let g = read_graph(path)?;
    let r = solve_tcc(&g, &SolveOptions { kappa, budget, seed });
    io.print(&r.coloring.to_text())?;
    let _ = writeln!(
        err,
        "{} colors used, target {}{}",
        r.colors_used,
        r.kappa_target,
        if r.met_bound { "" } else { " (missed)" }
    );
    io.json(&r)?;
    Ok(if r.met_bound { 0 } else { 1 })
}

#[derive(Serialize)]
struct ExactReport {
    chi: usize,
    coloring: TotalColoring,
}

fn exact(io: &mut Io, path: &Path, budget: usize) -> Outcome {
    let g = read_graph(path)?;
    let (chi, coloring) = exact_chi_tt(&g, budget).map_err(|e| classify(Some(path), e))?;
    io.print(&format!("chi'' = {chi}\n{}", coloring.to_text()))?;
    io.json(&ExactReport { chi, coloring })?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    proper: bool,
    violations: Vec<String>,
}

fn verify_cmd(io: &mut Io, gpath: &Path, cpath: &Path) -> Outcome {
    let g = read_graph(gpath)?;
    let c = TotalColoring::parse(&read(cpath)?).map_err(|e| classify(Some(cpath), e))?;
    let violations = verify(&g, &c).map_err(|e| classify(Some(cpath), e))?;
    let report = VerifyReport {
        proper: violations.is_empty(),
        violations: violations.iter().map(ToString::to_string).collect(),
    };
    let mut text = String::new();
    for v in &report.violations {
        text.push_str(v);
        text.push('\n');
    }
    text.push_str(if report.proper {
        "proper total coloring\n"
    } else {
        "not proper\n"
    });
    io.print(&text)?;
    io.json(&report)?;
    Ok(if report.proper { 0 } else { 1 })
}

fn audit(io: &mut Io, path: &Path, kappa: Option<usize>) -> Outcome {
    let g = read_graph(path)?;
    let kappa = kappa.unwrap_or(g.max_degree() + 2);
    let a = audit_minimality(&g, kappa).map_err(|e| classify(None, e))?;
    io.print(&a.to_text())?;
    io.print(if a.could_be_minimal() {
        "no reducible configuration found\n"
    } else {
        "not kappa-minimal\n"
    })?;
    io.json(&a)?;
    Ok(0)
}

fn check_p(io: &mut Io, path: &Path) -> Outcome {
    let g = read_graph(path)?;
    let r = g.check_property_p();
    let mut text = String::new();
    for v in &r.violations {
        text.push_str(&format!("{v}\n"));
    }
    text.push_str(if r.holds { "property P holds\n" } else { "property P violated\n" });
    io.print(&text)?;
    io.json(&r)?;
    Ok(if r.holds { 0 } else { 1 })
}

fn gen(io: &mut Io, path: &Path, out: &Path) -> Outcome {
    let text = read(path)?;
    let specs: Vec<GenSpec> = serde_json::from_str(&text)
        .map_err(|e| input(format!("{}: line {}: {e}", path.display(), e.line())))?;
    let manifest = write_corpus(out, &specs).map_err(|e| classify(None, e))?;
    let mut text = String::new();
    for e in &manifest.entries {
        text.push_str(&format!("{}  {}\n", e.edge_list_sha256, e.edge_list));
        if let (Some(f), Some(h)) = (&e.embedding, &e.embedding_sha256) {
            text.push_str(&format!("{h}  {f}\n"));
        }
    }
    io.print(&text)?;
    io.json(&manifest)?;
    Ok(0)
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { out, json: cli.json };
    let result = match &cli.verb {
        Verb::Faces { embedding, surface } => faces(&mut io, embedding, surface),
        Verb::Gstar {
            embedding,
            surface,
            dot,
            write,
        } => gstar(&mut io, embedding, surface, dot.as_deref(), write.as_deref()),
        Verb::Discharge {
            embedding,
            surface,
            rules,
            delta,
            report,
        } => discharge(&mut io, embedding, surface, rules.as_deref(), *delta, report.as_deref()),
        Verb::Color {
            graph,
            kappa,
            search,
            seed,
        } => color(&mut io, err, graph, *kappa, search.budget, *seed),
        Verb::Exact { graph, search } => exact(&mut io, graph, search.budget),
        Verb::Verify { graph, coloring } => verify_cmd(&mut io, graph, coloring),
        Verb::Audit { graph, kappa } => audit(&mut io, graph, *kappa),
        Verb::CheckP { graph } => check_p(&mut io, graph),
        Verb::Gen { specs, out } => gen(&mut io, specs, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
