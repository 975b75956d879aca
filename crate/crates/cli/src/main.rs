//! `rectmod`: rank invariants, rectangle barcodes and weak-exactness checks
//! from the command line.
//!
//! Exit codes: 0 on success (or a positive check), 2 when a check or
//! validation fails, 1 on input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rectmod::bifiltration::Bifiltration;
use rectmod::constructions::examples::example;
use rectmod::constructions::random::random_rectangle_module;
use rectmod::error::FormatError;
use rectmod::grid_module::{GridModule, Point, RankInvariant};
use rectmod::io;
use rectmod::linalg::Field;
use rectmod::rank_dp::rank_from_resolution;
use rectmod::rect_decomp::{decompose, RectangleBarcode};
use rectmod::resolution::{free_resolution, FreeResolution};
use rectmod::weakexact::{check_bifiltration, check_module, Method};
use rectmod::zigzag::zigzag_barcode;

/// Largest grid side the resolution DP accepts.
const DP_MAX_SIDE: usize = 60;

#[derive(Parser)]
#[command(
    name = "rectmod",
    version,
    about = "Rectangle decompositions of 2-parameter persistence modules"
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Prime field; must agree with the header of any input file.
    #[arg(long, global = true)]
    field: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankMethod {
    Dp,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMethod {
    Zigzag,
    Algebraic,
    Geometric,
}

impl From<CheckMethod> for Method {
    fn from(m: CheckMethod) -> Method {
        match m {
            CheckMethod::Zigzag => Method::Zigzag,
            CheckMethod::Algebraic => Method::Algebraic,
            CheckMethod::Geometric => Method::Geometric,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a .bif, .gmod or .fres file.
    Validate { file: PathBuf },
    /// Rank invariant of a .bif, .gmod or .fres input.
    Rank {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        /// Defaults to dp for .bif/.fres and naive for .gmod.
        #[arg(long, value_enum)]
        method: Option<RankMethod>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rectangle barcode by inclusion-exclusion on the rank invariant.
    DecomposeRectangles {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, value_enum)]
        method: Option<RankMethod>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Exit with 2 when some multiplicity is negative.
        #[arg(long)]
        strict: bool,
    },
    /// Decide rectangle-decomposability (zigzag) or weak exactness.
    CheckRectangle {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = CheckMethod::Zigzag)]
        method: CheckMethod,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Barcode of the zigzag through a row or column of a bifiltration.
    ZigzagBarcode {
        input: PathBuf,
        /// Row zigzag ending at t = (j, l), given as `j,l`.
        #[arg(long, conflicts_with = "col", required_unless_present = "col")]
        row: Option<String>,
        /// Column zigzag starting at s = (i, k), given as `i,k`.
        #[arg(long)]
        col: Option<String>,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a named example module.
    Examples {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random direct sum of rectangle modules and its barcode.
    RandomRect {
        n: usize,
        m: usize,
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// The module; the barcode goes next to it with extension .barcode.
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// An input error, reported with exit code 1.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Fail {
        Fail(e.to_string())
    }
}

type Outcome = Result<ExitCode, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Fail(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn extension(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

/// The file's field, refusing a different `--field`.
fn agree(file: Field, flag: Option<u32>) -> Result<Field, Fail> {
    match flag {
        Some(p) if p != file.modulus() => Err(Fail(format!(
            "input is over F_{} but --field {p} was given; refusing to re-reduce",
            file.modulus()
        ))),
        _ => Ok(file),
    }
}

fn flag_field(flag: Option<u32>, default: u32) -> Result<Field, Fail> {
    Ok(Field::new(flag.unwrap_or(default))?)
}

enum Input {
    Bif(Field, Bifiltration),
    Gmod(GridModule),
    Fres(FreeResolution),
}

fn load(path: &Path, field: Option<u32>) -> Result<Input, Fail> {
    let text = read(path)?;
    let located = |e: FormatError| Fail(format!("{}: {e}", path.display()));
    Ok(match extension(path) {
        "bif" => {
            let (f, b) = io::parse_bif(&text).map_err(located)?;
            Input::Bif(agree(f, field)?, b)
        }
        "gmod" => {
            let g = io::parse_gmod(&text).map_err(located)?;
            agree(g.field(), field)?;
            if let Some(v) = g.validate().first() {
                return Err(Fail(format!("{}: {v}", path.display())));
            }
            Input::Gmod(g)
        }
        "fres" => {
            let r = io::parse_fres(&text).map_err(located)?;
            agree(r.field(), field)?;
            Input::Fres(r)
        }
        other => return Err(Fail(format!("{}: unsupported extension `{other}`", path.display()))),
    })
}

fn dp_rank(r: &FreeResolution) -> Result<RankInvariant, Fail> {
    let (n, m) = r.extent();
    if n.max(m) > DP_MAX_SIDE {
        return Err(Fail(format!(
            "grid {n}x{m} exceeds the {DP_MAX_SIDE}x{DP_MAX_SIDE} limit of the resolution method; use --method naive"
        )));
    }
    Ok(rank_from_resolution(r)?)
}

fn rank_of(input: &Input, degree: usize, method: Option<RankMethod>) -> Result<RankInvariant, Fail> {
    match (input, method) {
        (Input::Bif(field, b), Some(RankMethod::Naive)) => Ok(b.homology_module(*field, degree).rank_invariant_naive()),
        (Input::Bif(field, b), _) => dp_rank(&free_resolution(b, *field, degree)?),
        (Input::Gmod(_), Some(RankMethod::Dp)) => Err(Fail("--method dp needs a .bif or .fres input".into())),
        (Input::Gmod(g), _) => Ok(g.rank_invariant_naive()),
        (Input::Fres(r), Some(RankMethod::Naive)) => Ok(r.presented_module().rank_invariant_naive()),
        (Input::Fres(r), _) => dp_rank(r),
    }
}

fn validate(cli_field: Option<u32>, file: &Path) -> Outcome {
    let text = read(file)?;
    let problem = match extension(file) {
        "bif" => match io::parse_bif(&text) {
            Ok((f, b)) => {
                agree(f, cli_field)?;
                println!(
                    "ok: bifiltration with {} simplices on a {}x{} grid",
                    b.len(),
                    b.extent().0,
                    b.extent().1
                );
                None
            }
            Err(FormatError::Bifiltration(e)) => Some(e.to_string()),
            Err(e) => return Err(e.into()),
        },
        "gmod" => {
            let g = io::parse_gmod(&text)?;
            agree(g.field(), cli_field)?;
            let violations = g.validate();
            for v in &violations {
                eprintln!("{v}");
            }
            if violations.is_empty() {
                println!("ok: module on a {}x{} grid, total dimension {}", g.n(), g.m(), g.total_dim());
                None
            } else {
                Some(format!("{} violation(s)", violations.len()))
            }
        }
        "fres" => match io::parse_fres(&text) {
            Ok(r) => {
                agree(r.field(), cli_field)?;
                println!(
                    "ok: resolution with {} generators, {} relations, {} relations on relations",
                    r.gens().len(),
                    r.rels().len(),
                    r.relrels().len()
                );
                None
            }
            Err(FormatError::Resolution(e)) => Some(e.to_string()),
            Err(e) => return Err(e.into()),
        },
        other => return Err(Fail(format!("{}: unsupported extension `{other}`", file.display()))),
    };
    Ok(match problem {
        None => ExitCode::SUCCESS,
        Some(msg) => {
            println!("invalid: {msg}");
            ExitCode::from(2)
        }
    })
}

fn decompose_rectangles(
    input: &Path,
    field: Option<u32>,
    degree: usize,
    method: Option<RankMethod>,
    output: &Option<PathBuf>,
    strict: bool,
) -> Outcome {
    let r = if extension(input) == "rank" {
        io::parse_rank(&read(input)?).map_err(|e| Fail(format!("{}: {e}", input.display())))?
    } else {
        rank_of(&load(input, field)?, degree, method)?
    };
    let d = decompose(&r);
    emit(output, &io::write_barcode(&d.barcode))?;
    for (s, t, v) in &d.negatives {
        eprintln!("negative multiplicity {v} at {s}..{t}");
    }
    Ok(if strict && !d.is_clean() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn check_rectangle(input: &Path, field: Option<u32>, method: CheckMethod, degree: usize) -> Outcome {
    let witness = match load(input, field)? {
        Input::Bif(f, b) => check_bifiltration(&b, f, degree, method.into())?,
        Input::Gmod(g) => check_module(&g, method.into()),
        Input::Fres(r) => check_module(&r.presented_module(), method.into()),
    };
    Ok(match witness {
        None => {
            println!("decomposable");
            ExitCode::SUCCESS
        }
        Some(w) => {
            let (s, t) = w.pair();
            eprintln!("{w}");
            println!("not-decomposable {} {} {} {}", s.x, s.y, t.x, t.y);
            ExitCode::from(2)
        }
    })
}

fn parse_point(text: &str, n: usize, m: usize) -> Result<Point, Fail> {
    let bad = || Fail(format!("expected `x,y` inside the {n}x{m} grid, found `{text}`"));
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    let (x, y): (usize, usize) = (x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?);
    if x < 1 || y < 1 || x > n || y > m {
        return Err(bad());
    }
    Ok(Point::new(x, y))
}

fn zigzag(
    input: &Path,
    field: Option<u32>,
    row: &Option<String>,
    col: &Option<String>,
    degree: usize,
    output: &Option<PathBuf>,
) -> Outcome {
    let Input::Bif(f, b) = load(input, field)? else {
        return Err(Fail("zigzag-barcode needs a .bif input".into()));
    };
    let (n, m) = b.extent();
    let z = match (row, col) {
        (Some(t), _) => b.row_zigzag(parse_point(t, n, m)?),
        (None, Some(s)) => b.col_zigzag(parse_point(s, n, m)?),
        (None, None) => return Err(Fail("one of --row or --col is required".into())),
    };
    emit(output, &io::write_zbar(degree, &zigzag_barcode(&z, f, degree)))?;
    Ok(ExitCode::SUCCESS)
}

fn random_rect(field: Option<u32>, n: usize, m: usize, count: usize, seed: u64, output: &Path) -> Outcome {
    if n == 0 || m == 0 {
        return Err(Fail("grid sides must be positive".into()));
    }
    let (g, rects) = random_rectangle_module(flag_field(field, 2)?, n, m, count, seed);
    fs::write(output, io::write_gmod(&g)).map_err(|e| Fail(format!("{}: {e}", output.display())))?;
    let barcode_path = output.with_extension("barcode");
    fs::write(&barcode_path, io::write_barcode(&RectangleBarcode::from_rectangles(&rects)))
        .map_err(|e| Fail(format!("{}: {e}", barcode_path.display())))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Fail("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let field = cli.field;
    match &cli.command {
        Command::Validate { file } => validate(field, file),
        Command::Rank {
            input,
            degree,
            method,
            output,
        } => {
            let r = rank_of(&load(input, field)?, *degree, *method)?;
            emit(output, &io::write_rank(&r))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DecomposeRectangles {
            input,
            degree,
            method,
            output,
            strict,
        } => decompose_rectangles(input, field, *degree, *method, output, *strict),
        Command::CheckRectangle { input, method, degree } => check_rectangle(input, field, *method, *degree),
        Command::ZigzagBarcode {
            input,
            row,
            col,
            degree,
            output,
        } => zigzag(input, field, row, col, *degree, output),
        Command::Examples { name, n, output } => {
            let g = example(name, flag_field(field, 2)?, *n)?;
            emit(output, &io::write_gmod(&g))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::RandomRect {
            n,
            m,
            count,
            seed,
            output,
        } => random_rect(field, *n, *m, *count, *seed, output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
