//! `bcod`: command-line front end for the bcod toolkit.
//!
//! Exit codes: 0 success or true, 1 verification failed, false or
//! inequivalent, 2 usage error, 3 malformed input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bcod::equivalence::to_bi_form;
use bcod::format::{parse_matrix, parse_raw, parse_renumbered, parse_script, serialize_matrix, serialize_script};
use bcod::search::{enumerate_bcods, partition_classes, write_results, SearchConfig, Symmetry};
use bcod::structure::{complete_columns, components, PartialBcod};
use bcod::{apply, are_equivalent, canonical_bcod, canonicalize, verify_bcod, verify_cod, CodMatrix, Error};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bcod", version, about = "Exact checks and transformations of complex orthogonal designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the COD or BCOD axioms.
    #[command(group(ArgGroup::new("mode").args(["cod", "bcod"])))]
    Verify {
        file: PathBuf,
        /// Check the COD axioms only.
        #[arg(long)]
        cod: bool,
        /// Check the BCOD axioms (the default).
        #[arg(long)]
        bcod: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write the canonical BCOD with 2m columns.
    Generate {
        #[arg(short)]
        m: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide equivalence of two BCODs and emit a script taking the first to the second.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        script_out: Option<PathBuf>,
    },
    /// Emit the script taking a BCOD to canonical form.
    Canonicalize {
        file: PathBuf,
        /// Where to write the .ops script (standard output otherwise).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the canonical matrix.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Split a COD into its direct summands.
    Decompose {
        file: PathBuf,
        /// Write each component as component_<i>.cod into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Bring a COD into B_i form.
    Biform {
        file: PathBuf,
        #[arg(short = 'i', long = "var")]
        var: u32,
        /// Only swap columns c and m + c (requires a BCOD).
        #[arg(long)]
        restricted: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        script_out: Option<PathBuf>,
    },
    /// Fill the '?' cells of columns m and 2m.
    Complete {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate BCODs by exhaustive search.
    Enumerate {
        #[arg(short)]
        m: usize,
        /// Also count equivalence classes.
        #[arg(long)]
        classes: bool,
        #[arg(long, value_enum)]
        symmetry: Option<SymmetryArg>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        max_k: Option<u32>,
        #[arg(long, default_value_t = 1)]
        prefix_depth: usize,
        /// Write the matrices and summary.txt into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Replay an .ops script on a matrix.
    Apply {
        file: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Rewrite variable indices as 1..k, closing gaps.
    Renumber {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    None,
    FixFirstPair,
}

impl From<SymmetryArg> for Symmetry {
    fn from(s: SymmetryArg) -> Self {
        match s {
            SymmetryArg::None => Symmetry::None,
            SymmetryArg::FixFirstPair => Symmetry::FixFirstPair,
        }
    }
}

enum Failure {
    False(String),
    Usage(String),
    Malformed(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::False(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Malformed(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<CodMatrix, Failure> {
    parse_matrix(&read(path)?).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

/// Maps library errors raised on a parsed input to an exit status.
fn judge(e: Error) -> Failure {
    match e {
        Error::ShapeMismatch(..) | Error::VariableOutOfRange { .. } | Error::Infeasible(_) => Failure::Usage(e.to_string()),
        Error::IndexOutOfRange(_) | Error::InvalidPermutation(_) | Error::Parse { .. } => Failure::Malformed(e.to_string()),
        _ => Failure::False(e.to_string()),
    }
}

fn verify(file: &Path, cod_only: bool, json: bool) -> Outcome {
    let g = load(file)?;
    let mode = if cod_only { "cod" } else { "bcod" };
    let report = if cod_only { verify_cod(&g) } else { verify_bcod(&g) };
    let verdict = if report.passed() { "pass" } else { "fail" };
    if json {
        let value = serde_json::json!({
            "file": file.display().to_string(),
            "mode": mode,
            "verdict": verdict,
            "p": g.p(),
            "n": g.n(),
            "k": g.k(),
            "violations": report.violations,
        });
        println!("{value}");
    } else {
        println!("{mode} {verdict}: [{}, {}, {}] {}", g.p(), g.n(), g.k(), file.display());
        for v in &report.violations {
            println!("  {}: rows {:?} columns {:?}: {}", v.axiom, v.rows, v.columns, v.detail);
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::False(String::new()))
    }
}

fn generate(m: usize, out: Option<&Path>) -> Outcome {
    if m == 0 {
        return Err(Failure::Usage("m must be at least 1".into()));
    }
    let g = canonical_bcod(m).map_err(|e| Failure::Usage(e.to_string()))?;
    emit(out, &serialize_matrix(&g))
}

fn not_bcod_report(g: &CodMatrix, path: &Path, e: Error) -> Failure {
    let mut msg = format!("{}: {e}", path.display());
    for v in verify_bcod(g).violations {
        msg.push_str(&format!("\n  {}: rows {:?} columns {:?}: {}", v.axiom, v.rows, v.columns, v.detail));
    }
    Failure::False(msg)
}

fn equiv(first: &Path, second: &Path, script_out: Option<&Path>) -> Outcome {
    let (g1, g2) = (load(first)?, load(second)?);
    if g1.n() != g2.n() {
        return Err(Failure::Usage(format!("column counts differ: {} vs {}", g1.n(), g2.n())));
    }
    for (g, path) in [(&g1, first), (&g2, second)] {
        if let Err(e) = canonicalize(g) {
            return Err(not_bcod_report(g, path, e));
        }
    }
    match are_equivalent(&g1, &g2).map_err(judge)? {
        Some(script) => {
            println!("equivalent ({} operations)", script.len());
            if let Some(path) = script_out {
                emit(Some(path), &serialize_script(&script))?;
            }
            Ok(())
        }
        None => Err(Failure::False("inequivalent".into())),
    }
}

fn canonicalize_cmd(file: &Path, out: Option<&Path>, matrix_out: Option<&Path>, json: bool) -> Outcome {
    let g = load(file)?;
    let cert = canonicalize(&g).map_err(|e| not_bcod_report(&g, file, e))?;
    if let Some(path) = matrix_out {
        emit(Some(path), &serialize_matrix(&cert.canonical))?;
    }
    if json {
        let mut value = serde_json::to_value(&cert).map_err(|e| Failure::Usage(e.to_string()))?;
        value["script"] = serde_json::Value::String(serialize_script(&cert.script));
        println!("{value}");
        return match out {
            Some(path) => emit(Some(path), &serialize_script(&cert.script)),
            None => Ok(()),
        };
    }
    let mut text = format!(
        "# canonical form of {} (m = {}); alignment {} ops, column permutation used: {}\n",
        file.display(),
        cert.m,
        cert.alignment_len,
        cert.used_column_permutation
    );
    text.push_str(&serialize_script(&cert.script));
    emit(out, &text)
}

fn decompose(file: &Path, out_dir: Option<&Path>) -> Outcome {
    let g = load(file)?;
    if let Some(v) = verify_cod(&g).violations.first() {
        return Err(Failure::False(format!("not a COD: {}: {}", v.axiom, v.detail)));
    }
    let parts = components(&g);
    println!("{} component(s)", parts.len());
    for i in 0..parts.len() {
        let rows: Vec<String> = parts.rows[i].iter().map(|r| (r + 1).to_string()).collect();
        let vars: Vec<String> = parts.vars[i].iter().map(|v| format!("z{v}")).collect();
        println!("component {}: rows {} vars {}", i + 1, rows.join(" "), vars.join(" "));
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for i in 0..parts.len() {
            let h = parts.extract(&g, i).map_err(judge)?;
            emit(Some(&dir.join(format!("component_{}.cod", i + 1))), &serialize_matrix(&h))?;
        }
    }
    Ok(())
}

fn biform(file: &Path, var: u32, restricted: bool, out: Option<&Path>, script_out: Option<&Path>) -> Outcome {
    let g = load(file)?;
    if var == 0 || var > g.k() {
        return Err(Failure::Usage(format!("variable z{var} is outside 1..={}", g.k())));
    }
    let (h, script, _) = to_bi_form(&g, var, restricted).map_err(judge)?;
    if let Some(path) = script_out {
        emit(Some(path), &serialize_script(&script))?;
    }
    emit(out, &serialize_matrix(&h))
}

fn complete(file: &Path, out: Option<&Path>) -> Outcome {
    let text = read(file)?;
    let raw = parse_raw(&text, true).map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?;
    let part = PartialBcod::from_raw(&raw).map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?;
    let g = complete_columns(&part).map_err(judge)?;
    emit(out, &serialize_matrix(&g))
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    m: usize,
    classes: bool,
    symmetry: Option<SymmetryArg>,
    cap: Option<usize>,
    max_k: Option<u32>,
    prefix_depth: usize,
    out_dir: Option<&Path>,
) -> Outcome {
    let mut cfg = match symmetry {
        Some(s) => SearchConfig::new(m, s.into()),
        None => SearchConfig::for_m(m),
    };
    cfg.cap = cap;
    cfg.max_k = max_k;
    cfg.prefix_depth = prefix_depth;
    cfg.check().map_err(judge)?;
    let (matrices, summary) = if classes {
        let found = enumerate_bcods(&cfg).map_err(judge)?;
        let line = partition_classes(m, &found).summary_line();
        (found, line)
    } else {
        let found = enumerate_bcods(&cfg).map_err(judge)?;
        let line = format!("m={m} matrices={}", found.len());
        (found, line)
    };
    println!("{summary}");
    if let Some(dir) = out_dir {
        write_results(dir, &matrices, &summary).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    }
    Ok(())
}

fn apply_cmd(file: &Path, script: &Path, out: Option<&Path>) -> Outcome {
    let g = load(file)?;
    let s = parse_script(&read(script)?).map_err(|e| Failure::Malformed(format!("{}: {e}", script.display())))?;
    let h = apply(&g, &s).map_err(|e| Failure::Malformed(format!("{}: {e}", script.display())))?;
    emit(out, &serialize_matrix(&h))
}

fn renumber(file: &Path, out: Option<&Path>) -> Outcome {
    let g = parse_renumbered(&read(file)?).map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?;
    emit(out, &serialize_matrix(&g))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { file, cod, bcod: _, json } => verify(file, *cod, *json),
        Command::Generate { m, out } => generate(*m, out.as_deref()),
        Command::Equiv { first, second, script_out } => equiv(first, second, script_out.as_deref()),
        Command::Canonicalize { file, out, matrix_out, json } => {
            canonicalize_cmd(file, out.as_deref(), matrix_out.as_deref(), *json)
        }
        Command::Decompose { file, out_dir } => decompose(file, out_dir.as_deref()),
        Command::Biform { file, var, restricted, out, script_out } => {
            biform(file, *var, *restricted, out.as_deref(), script_out.as_deref())
        }
        Command::Complete { file, out } => complete(file, out.as_deref()),
        Command::Enumerate { m, classes, symmetry, cap, max_k, prefix_depth, out_dir } => {
            enumerate(*m, *classes, *symmetry, *cap, *max_k, *prefix_depth, out_dir.as_deref())
        }
        Command::Apply { file, script, out } => apply_cmd(file, script, out.as_deref()),
        Command::Renumber { file, out } => renumber(file, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::False(m) | Failure::Usage(m) | Failure::Malformed(m) => m,
            };
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
