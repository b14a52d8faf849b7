//! `reflexive` command-line tool.
//!
//! Exit codes: 0 when every check passed, 1 when a mathematical check failed,
//! 2 on input errors (unreadable or malformed input, bad flags). A failed
//! check takes precedence over input errors in batch runs so a potential
//! counterexample is never masked.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use reflexive::io::{emit_report, emit_report_with_certificates, parse_json_polytope, parse_palp, PalpRecord};
use reflexive::lemmas::{verify_lemma_suite, PairContext};
use reflexive::polygons::{enumerate_in_box, summary_line, DEFAULT_RADIUS};
use reflexive::polytope::{build_polytope, dual, is_reflexive, LatticePolytope};
use reflexive::skeleton::{mirror_torsion_check, MirrorReport, Skeleton, SkeletonError};
use reflexive::verify::{standard_corpus, verify_theorem, VerificationReport, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser)]
#[command(name = "reflexive", version, about = "Exact lattice computations on reflexive polytopes")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// PALP matrix file or JSON `{"vertices": [...]}`; `-` or omitted reads stdin
    input: Option<PathBuf>,
    /// Swap the rows/columns orientation of PALP matrices
    #[arg(long)]
    transpose: bool,
    /// Abort on the first malformed record
    #[arg(long, conflicts_with = "lenient")]
    strict: bool,
    /// Skip malformed records with a diagnostic
    #[arg(long)]
    lenient: bool,
}

impl Input {
    fn strict(&self, default: bool) -> bool {
        if self.strict {
            true
        } else if self.lenient {
            false
        } else {
            default
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reflexivity test and dual polytope
    Check(Input),
    /// Invariants of M / Λ_k
    Lambda {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Interior points of facets
    Roots(Input),
    /// Pair classification suite over all boundary-point pairs
    Lemmas(Input),
    /// Λ_{n-2} = Λ_{n-1} with root certificates
    Verify {
        #[command(flatten)]
        input: Input,
        /// Include every root certificate in the report
        #[arg(long)]
        certificates: bool,
        /// Also run the pair classification suite
        #[arg(long)]
        lemmas: bool,
        /// Ignore the input and verify the built-in corpus up to this dimension
        #[arg(long, value_name = "MAX_DIM")]
        corpus: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Classify reflexive polygons
    #[command(name = "enumerate-2d")]
    Enumerate2d {
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: i64,
    },
    /// Compare M/Λ_2(P) with ∧²N/(N∧Λ_1(P*)) for 4-dimensional input
    #[command(name = "mirror-check")]
    MirrorCheck {
        #[command(flatten)]
        input: Input,
        /// Ignore the input and check the built-in 4-dimensional corpus
        #[arg(long)]
        corpus: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// One verification report per PALP record on stdin
    Batch {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        certificates: bool,
        #[arg(long)]
        lemmas: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Worst exit code seen so far; failure outranks input errors.
#[derive(Default)]
struct Status(i32);

impl Status {
    fn raise(&mut self, code: i32) {
        let rank = |c| match c {
            EXIT_FAILURE => 2,
            EXIT_INPUT => 1,
            _ => 0,
        };
        if rank(code) > rank(self.0) {
            self.0 = code;
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    status: Status,
}

impl Io<'_> {
    fn line(&mut self, s: &str) {
        let _ = writeln!(self.out, "{s}");
    }

    fn diag(&mut self, code: i32, s: &str) {
        let _ = writeln!(self.err, "{s}");
        self.status.raise(code);
    }
}

/// Raw points of one input polytope.
struct Entry {
    id: String,
    points: Vec<Vec<i64>>,
}

fn read_text(input: &Input, io: &mut Io) -> Result<String, String> {
    let mut text = String::new();
    match &input.input {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        _ => {
            io.stdin.read_to_string(&mut text).map_err(|e| format!("stdin: {e}"))?;
        }
    }
    Ok(text)
}

fn record_id(i: usize, r: &PalpRecord) -> String {
    r.comment.clone().unwrap_or_else(|| format!("record-{}", i + 1))
}

fn read_entries(input: &Input, default_strict: bool, io: &mut Io) -> Option<Vec<Entry>> {
    let text = match read_text(input, io) {
        Ok(t) => t,
        Err(e) => {
            io.diag(EXIT_INPUT, &e);
            return None;
        }
    };
    if text.trim_start().starts_with('{') {
        return match parse_json_polytope(&text) {
            Ok(p) => Some(vec![Entry { id: p.id.unwrap_or_else(|| "record-1".into()), points: p.vertices }]),
            Err(e) => {
                io.diag(EXIT_INPUT, &format!("json: {e}"));
                None
            }
        };
    }
    match parse_palp(&text, input.strict(default_strict)) {
        Ok(parsed) => {
            for d in &parsed.diagnostics {
                // lenient mode: a warning, not an input error
                let _ = writeln!(io.err, "skipped record: {d}");
            }
            Some(
                parsed
                    .records
                    .iter()
                    .enumerate()
                    .map(|(i, r)| Entry { id: record_id(i, r), points: r.points(input.transpose) })
                    .collect(),
            )
        }
        Err(e) => {
            io.diag(EXIT_INPUT, &e.to_string());
            None
        }
    }
}

/// Interactive subcommands: build each polytope, reporting failures as input
/// errors, and hand the valid ones to `f`.
fn for_each_polytope(input: &Input, io: &mut Io, mut f: impl FnMut(&str, LatticePolytope, &mut Io)) {
    let Some(entries) = read_entries(input, false, io) else { return };
    if entries.is_empty() {
        io.diag(EXIT_INPUT, "no input polytopes");
    }
    for e in entries {
        match build_polytope(&e.points) {
            Ok(p) => f(&e.id, p, io),
            Err(err) => io.diag(EXIT_INPUT, &format!("{}: {err}", e.id)),
        }
    }
}

fn reflexive_skeleton(id: &str, p: &LatticePolytope, io: &mut Io) -> Option<Skeleton> {
    match Skeleton::new(p) {
        Ok(s) => Some(s),
        Err(e) => {
            io.diag(EXIT_INPUT, &format!("{id}: {e}"));
            None
        }
    }
}

fn check(id: &str, p: LatticePolytope, io: &mut Io) {
    let reflexive = is_reflexive(&p);
    let mut v = json!({"id": id, "n": p.dim(), "reflexive": reflexive, "vertices": p.vertices()});
    if reflexive {
        match dual(&p) {
            Ok(d) => v["dual"] = json!(d.vertices()),
            Err(e) => return io.diag(EXIT_INPUT, &format!("{id}: {e}")),
        }
    } else {
        io.status.raise(EXIT_FAILURE);
    }
    io.line(&v.to_string());
}

fn lambda(id: &str, p: LatticePolytope, k: Option<usize>, io: &mut Io) {
    let Some(sk) = reflexive_skeleton(id, &p, io) else { return };
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=p.dim()).collect(),
    };
    for k in ks {
        let res = sk.points(k).and_then(|pts| Ok((pts.len(), sk.lambda(k)?, sk.quotient(k)?)));
        match res {
            Ok((count, lat, q)) => {
                let index = match reflexive::linalg::lattice_index(&lat.lattice) {
                    reflexive::linalg::LatticeIndex::Finite(i) => Some(i),
                    reflexive::linalg::LatticeIndex::Infinite => None,
                };
                io.line(
                    &json!({"id": id, "k": k, "points": count, "index": index,
                        "free_rank": q.free_rank, "torsion": q.torsion, "quotient": q.to_string()})
                    .to_string(),
                );
            }
            Err(e) => io.diag(EXIT_INPUT, &format!("{id}: {e}")),
        }
    }
}

fn roots(id: &str, p: LatticePolytope, io: &mut Io) {
    let Some(sk) = reflexive_skeleton(id, &p, io) else { return };
    let roots: Vec<_> = sk.roots().iter().cloned().collect();
    io.line(&json!({"id": id, "count": roots.len(), "roots": roots}).to_string());
}

fn lemmas(id: &str, p: LatticePolytope, io: &mut Io) {
    let Some(sk) = reflexive_skeleton(id, &p, io) else { return };
    match verify_lemma_suite(&PairContext::new(sk)) {
        Ok(r) => {
            if !r.passed() {
                io.status.raise(EXIT_FAILURE);
            }
            io.line(&json!({"id": id, "passed": r.passed(), "report": r}).to_string());
        }
        Err(e) => io.diag(EXIT_INPUT, &format!("{id}: {e}")),
    }
}

enum Outcome {
    Report(VerificationReport),
    /// Input that could not be turned into a polytope; still gets a line.
    Invalid(VerificationReport, String),
    Error(String, String),
}

fn verify_entry(id: &str, points: &[Vec<i64>], opts: VerifyOptions) -> Outcome {
    let n = points.first().map_or(0, Vec::len);
    let p = match build_polytope(points) {
        Ok(p) => p,
        Err(e) => return Outcome::Invalid(VerificationReport::not_reflexive(id, n), format!("{id}: {e}")),
    };
    if !is_reflexive(&p) {
        return Outcome::Report(VerificationReport::not_reflexive(id, n));
    }
    match verify_theorem(id, &p, opts) {
        Ok(r) => Outcome::Report(r),
        Err(e) => Outcome::Error(id.to_string(), e.to_string()),
    }
}

fn emit_outcomes(outcomes: Vec<Outcome>, certificates: bool, io: &mut Io) {
    for o in outcomes {
        match o {
            Outcome::Report(r) => {
                if !r.passed() {
                    io.status.raise(EXIT_FAILURE);
                }
                io.line(&if certificates { emit_report_with_certificates(&r) } else { emit_report(&r) });
            }
            Outcome::Invalid(r, msg) => {
                io.diag(EXIT_INPUT, &msg);
                io.line(&emit_report(&r));
            }
            Outcome::Error(id, msg) => {
                io.diag(EXIT_INPUT, &format!("{id}: {msg}"));
                io.line(&json!({"id": id, "error": msg}).to_string());
            }
        }
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, String> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build().map_err(|e| e.to_string())
}

fn verify_many(entries: Vec<Entry>, opts: VerifyOptions, certificates: bool, jobs: Option<usize>, io: &mut Io) {
    let pool = match pool(jobs) {
        Ok(p) => p,
        Err(e) => return io.diag(EXIT_INPUT, &e),
    };
    let outcomes = pool.install(|| entries.par_iter().map(|e| verify_entry(&e.id, &e.points, opts)).collect());
    emit_outcomes(outcomes, certificates, io);
}

fn corpus_entries(max_dim: usize) -> Vec<Entry> {
    standard_corpus(max_dim).into_iter().map(|e| Entry { id: e.id, points: e.polytope.vertices().to_vec() }).collect()
}

fn mirror(id: &str, r: Result<MirrorReport, SkeletonError>, io: &mut Io) {
    match r {
        Ok(r) => {
            if !r.equal {
                io.status.raise(EXIT_FAILURE);
            }
            io.line(
                &json!({"id": id, "equal": r.equal, "m_mod_lambda2": r.m_mod_lambda2.to_string(),
                    "wedge_n_mod_dual_lambda1": r.wedge_n_mod_dual_lambda1.to_string()})
                .to_string(),
            );
        }
        Err(e) => io.diag(EXIT_INPUT, &format!("{id}: {e}")),
    }
}

fn enumerate(radius: i64, io: &mut Io) {
    match enumerate_in_box(radius) {
        Ok(e) => {
            for (i, c) in e.classes.iter().enumerate() {
                io.line(&format!(
                    "class {:2}: vertices={} index={}",
                    i + 1,
                    json!(c.representative.vertices()),
                    c.lambda0_index
                ));
            }
            io.line(&summary_line(&e.classes));
        }
        Err(e) => io.diag(EXIT_INPUT, &e.to_string()),
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    let mut io = Io { stdin, out: stdout, err: stderr, status: Status::default() };
    match cli.cmd {
        Command::Check(input) => for_each_polytope(&input, &mut io, check),
        Command::Lambda { input, k } => for_each_polytope(&input, &mut io, |id, p, io| lambda(id, p, k, io)),
        Command::Roots(input) => for_each_polytope(&input, &mut io, roots),
        Command::Lemmas(input) => for_each_polytope(&input, &mut io, lemmas),
        Command::Verify { input, certificates, lemmas, corpus, jobs } => {
            let opts = VerifyOptions { lemmas };
            let entries = match corpus {
                Some(d) => Some(corpus_entries(d)),
                None => read_entries(&input, false, &mut io),
            };
            if let Some(entries) = entries {
                verify_many(entries, opts, certificates, jobs, &mut io);
            }
        }
        Command::Enumerate2d { radius } => enumerate(radius, &mut io),
        Command::MirrorCheck { input, corpus, jobs } => {
            if corpus {
                let entries: Vec<_> = standard_corpus(4).into_iter().filter(|e| e.polytope.dim() == 4).collect();
                match pool(jobs) {
                    Ok(pool) => {
                        let reports: Vec<_> = pool.install(|| {
                            entries.par_iter().map(|e| (e.id.clone(), mirror_torsion_check(&e.polytope))).collect()
                        });
                        for (id, r) in reports {
                            mirror(&id, r, &mut io);
                        }
                    }
                    Err(e) => io.diag(EXIT_INPUT, &e),
                }
            } else {
                for_each_polytope(&input, &mut io, |id, p, io| mirror(id, mirror_torsion_check(&p), io));
            }
        }
        Command::Batch { input, certificates, lemmas, jobs } => {
            if let Some(entries) = read_entries(&input, true, &mut io) {
                verify_many(entries, VerifyOptions { lemmas }, certificates, jobs, &mut io);
            }
        }
    }
    io.status.0
}
