//! The `normcone` command line: `compute`, `print` and `check` over the
//! `.in` / `.gen` / `.inv` file protocol.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use normcone::input::{build_problem, keys};
use normcone::io::{format_inv, read_input_file, read_rational_cone, write_result_files, ProjectFiles};
use normcone::{
    compute_cone, ComputationMode, ComputationOptions, Error, IntMatrix, IntVector, InvValue, LatticeBasis,
    RationalCone,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Degrees up to which `check` compares the Hilbert series with a count.
const SERIES_CHECK_DEGREE: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "normcone", version, about = "Hilbert bases and Hilbert series of rational cones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read an `.in` file, compute, and write the result files.
    Compute(ComputeArgs),
    /// Print the result files of a problem.
    Print(ResultArgs),
    /// Re-verify existing result files.
    Check(ResultArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Input file in `.in` format.
    pub input: PathBuf,
    /// Directory for the result files; defaults to the input's directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Args)]
pub struct ResultArgs {
    /// The `.in` file or the basename of the result files.
    pub input: PathBuf,
    /// Directory holding the result files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, short)]
    pub verbose: bool,
}

#[derive(Debug, Args, Clone, Copy, Default)]
pub struct Flags {
    /// Use the dual algorithm.
    #[arg(long)]
    pub dual: bool,
    /// Also compute the h-vector and Hilbert polynomial.
    #[arg(long)]
    pub hilb: bool,
    /// Write all result files (`.sup`, `.typ`, `.equ`, `.cgr`).
    #[arg(long)]
    pub allf: bool,
    /// Compute support hyperplanes and extreme rays only.
    #[arg(long)]
    pub supp: bool,
    /// Accepted for compatibility; arithmetic is always exact.
    #[arg(long)]
    pub errorcheck: bool,
    /// Accepted for compatibility; arithmetic is always exact.
    #[arg(long)]
    pub normbig: bool,
    #[arg(long, short)]
    pub verbose: bool,
}

impl Flags {
    pub fn options(&self) -> ComputationOptions {
        ComputationOptions {
            all_computations: self.allf,
            hilb: self.hilb,
            dual: self.dual,
            mode: if self.supp {
                ComputationMode::SupportHyperplanesOnly
            } else {
                ComputationMode::HilbertBasis
            },
        }
    }
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    match &cli.command {
        Command::Compute(args) => compute(args),
        Command::Print(args) => print(args),
        Command::Check(args) => check(args),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidInput(_) | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_COMPUTATION,
    }
}

fn report(path: &Path, e: &Error) -> i32 {
    match e {
        Error::Parse { line, token, message } if token.is_empty() => {
            eprintln!("error: {}:{}: {}", path.display(), line, message)
        }
        Error::Parse { line, token, message } => {
            eprintln!("error: {}:{}: {} at `{}`", path.display(), line, message, token)
        }
        other => eprintln!("error: {}: {}", path.display(), other),
    }
    exit_code(e)
}

/// Result files of `input` (an `.in` path or a basename), optionally in `out_dir`.
pub fn project_files(input: &Path, out_dir: Option<&Path>) -> ProjectFiles {
    let base = if input.extension().is_some_and(|e| e == "in") {
        input.with_extension("")
    } else {
        input.to_path_buf()
    };
    match out_dir {
        Some(dir) => ProjectFiles::new(dir.join(base.file_name().unwrap_or_default())),
        None => ProjectFiles::new(base),
    }
}

fn input_path(input: &Path) -> PathBuf {
    if input.extension().is_some_and(|e| e == "in") {
        input.to_path_buf()
    } else {
        ProjectFiles::new(input).input()
    }
}

fn compute(args: &ComputeArgs) -> i32 {
    let flags = args.flags;
    for (set, name) in [(flags.errorcheck, "errorcheck"), (flags.normbig, "normbig")] {
        if set {
            eprintln!("note: --{} has no effect; arithmetic is always exact", name);
        }
    }
    let start = Instant::now();
    let input = match read_input_file(&args.input) {
        Ok(i) => i,
        Err(e) => return report(&args.input, &e),
    };
    let opts = flags.options();
    if flags.verbose {
        eprintln!(
            "read {} matrices in dimension {}; options {:?}",
            input.items.len(),
            input.ambient_dim,
            opts
        );
    }
    let rc = match compute_cone(&input, &opts) {
        Ok(rc) => rc,
        Err(e) => return report(&args.input, &e),
    };
    let files = project_files(&args.input, args.out_dir.as_deref());
    if let Some(dir) = &args.out_dir {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return report(dir, &Error::Io(e));
        }
    }
    if let Err(e) = write_result_files(&rc, &files) {
        return report(&files.basename, &e);
    }
    if flags.verbose {
        eprintln!("computed in {:.3}s", start.elapsed().as_secs_f64());
    }
    print!("{}", summary(&rc, &files));
    EXIT_OK
}

/// One screen: the invariants and the files written.
pub fn summary(rc: &RationalCone, files: &ProjectFiles) -> String {
    let mut out = format_inv(rc);
    let matrices = [
        ("gen", Some(&rc.gen)),
        ("sup", rc.sup.as_ref()),
        ("typ", rc.typ.as_ref()),
        ("equ", rc.equ.as_ref()),
        ("cgr", rc.cgr.as_ref()),
    ];
    for (suffix, m) in matrices {
        if let Some(m) = m {
            let _ = writeln!(out, "{}: {} x {}", files.with_suffix(suffix).display(), m.nrows(), m.ncols());
        }
    }
    out
}

fn print(args: &ResultArgs) -> i32 {
    let files = project_files(&args.input, args.out_dir.as_deref());
    match read_rational_cone(&files) {
        Ok(rc) => {
            print!("{}", normcone::io::format_summary(&rc));
            EXIT_OK
        }
        Err(e) => report(&files.basename, &e),
    }
}

fn check(args: &ResultArgs) -> i32 {
    let files = project_files(&args.input, args.out_dir.as_deref());
    let rc = match read_rational_cone(&files) {
        Ok(rc) => rc,
        Err(e) => return report(&files.basename, &e),
    };
    let input = input_path(&args.input);
    let problem = if input.exists() {
        match read_input_file(&input).and_then(|i| Ok((build_problem(&i)?, i))) {
            Ok(p) => Some(p),
            Err(e) => return report(&input, &e),
        }
    } else {
        None
    };
    if args.verbose {
        match &problem {
            Some(_) => eprintln!("checking {} against {}", files.basename.display(), input.display()),
            None => eprintln!("no input file; checking {} on its own", files.basename.display()),
        }
    }
    let description = match &problem {
        Some((p, _)) => Some(ConeDescription {
            sup: p.cone.support_hyperplanes.clone(),
            equ: p.cone.equations.clone(),
            lattice: p.lattice.clone(),
        }),
        None => rc.sup.as_ref().map(|sup| ConeDescription {
            sup: sup.clone(),
            equ: rc.equ.clone().unwrap_or_else(|| IntMatrix::empty(rc.gen.ncols())),
            lattice: LatticeBasis::full(rc.gen.ncols()),
        }),
    };
    let mut violations = check_result(&rc, description.as_ref());
    if let Some((_, input_system)) = &problem {
        if rc.inv.contains_key(keys::HILBERT_BASIS_ELEMENTS) {
            match compute_cone(input_system, &ComputationOptions::default()) {
                Ok(fresh) if fresh.gen.row_set() != rc.gen.row_set() => violations.push(format!(
                    "completeness: a fresh computation gives {} Hilbert basis elements, the file has {}",
                    fresh.gen.nrows(),
                    rc.gen.nrows()
                )),
                Ok(_) => {}
                Err(e) => violations.push(format!("recomputation failed: {}", e)),
            }
        }
    }
    if violations.is_empty() {
        println!("{}: all checks passed", files.basename.display());
        EXIT_OK
    } else {
        for v in &violations {
            eprintln!("violated: {}", v);
        }
        EXIT_COMPUTATION
    }
}

/// The cone and lattice the result claims to describe.
pub struct ConeDescription {
    pub sup: IntMatrix,
    pub equ: IntMatrix,
    pub lattice: LatticeBasis,
}

impl ConeDescription {
    fn contains(&self, x: &[BigInt]) -> bool {
        self.sup.rows().iter().all(|f| !dot(f, x).is_negative())
            && self.equ.rows().iter().all(|f| dot(f, x).is_zero())
            && self.lattice.contains(x)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn fmt_row(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Every violated invariant of `rc`, described in one line each.
pub fn check_result(rc: &RationalCone, cone: Option<&ConeDescription>) -> Vec<String> {
    let mut out = Vec::new();
    let gen = &rc.gen;
    let hilbert_mode = rc.inv.contains_key(keys::HILBERT_BASIS_ELEMENTS);

    if let Some(c) = cone {
        for x in gen.rows() {
            if x.iter().all(Zero::is_zero) || !c.contains(x) {
                out.push(format!("membership: {} is not a nonzero point of the cone and lattice", fmt_row(x)));
            }
        }
        if hilbert_mode {
            for x in gen.rows() {
                if let Some(g) = gen.rows().iter().find(|g| *g != x && {
                    let rest: IntVector = x.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
                    c.contains(&rest)
                }) {
                    let rest: IntVector = x.iter().zip(g).map(|(a, b)| a - b).collect();
                    out.push(format!(
                        "minimality: {} = {} + {} is reducible",
                        fmt_row(x),
                        fmt_row(g),
                        fmt_row(&rest)
                    ));
                }
            }
        }
    }

    if let (Some(typ), Some(sup)) = (&rc.typ, &rc.sup) {
        let product: Vec<IntVector> = gen.rows().iter().map(|g| sup.mul_vec(g)).collect();
        if typ.rows() != product.as_slice() {
            out.push("typ: the matrix is not gen·supᵀ".to_string());
        }
        if typ.rows().iter().flatten().any(|e| e.is_negative()) {
            out.push("typ: a Hilbert basis element is negative on a support hyperplane".to_string());
        }
    }

    let count = |key: &str, actual: usize, out: &mut Vec<String>| {
        if let Some(InvValue::Integer(n)) = rc.inv.get(key) {
            if *n != BigInt::from(actual) {
                out.push(format!("{}: inv says {}, the files give {}", key, n, actual));
            }
        }
    };
    count(keys::HILBERT_BASIS_ELEMENTS, gen.nrows(), &mut out);
    if let Some(sup) = &rc.sup {
        count(keys::NUMBER_SUPPORT_HYPERPLANES, sup.nrows(), &mut out);
    }

    let grading = match (rc.inv.get(keys::HOMOGENEOUS_WEIGHTS), rc.inv.get(keys::GRADING_DENOMINATOR)) {
        (Some(InvValue::Vector(w)), None) => Some((w.clone(), BigInt::from(1))),
        (Some(InvValue::Vector(w)), Some(InvValue::Integer(d))) => Some((w.clone(), d.clone())),
        _ => None,
    };
    if let Some((weights, denom)) = &grading {
        let degrees: Vec<BigInt> = gen.rows().iter().map(|g| dot(&weights[..], g)).collect();
        if degrees.iter().any(|d| !d.is_positive() || !(d % denom).is_zero()) {
            out.push("grading: a generator does not have a positive integral degree".to_string());
        } else {
            let degrees: Vec<BigInt> = degrees.into_iter().map(|d| d / denom).collect();
            if hilbert_mode {
                count(
                    keys::HEIGHT_1_ELEMENTS,
                    degrees.iter().filter(|d| **d == BigInt::from(1)).count(),
                    &mut out,
                );
            }
            if let Some(InvValue::Vector(h)) = rc.inv.get(keys::H_VECTOR) {
                if hilbert_mode {
                    out.extend(series_check(rc, h, &degrees));
                }
            }
        }
    }
    out
}

/// Compares `h(t)/(1 − t)^r` with the number of distinct sums of the
/// generators in each degree up to [`SERIES_CHECK_DEGREE`].
fn series_check(rc: &RationalCone, h: &[BigInt], degrees: &[BigInt]) -> Vec<String> {
    let Some(InvValue::Integer(rank)) = rc.inv.get(keys::RANK) else {
        return vec!["series: rank is missing".to_string()];
    };
    let r: usize = usize::try_from(rank).unwrap_or(0);
    let max = SERIES_CHECK_DEGREE;
    let gens: Vec<(usize, &IntVector)> = rc
        .gen
        .rows()
        .iter()
        .zip(degrees)
        .filter_map(|(g, d)| usize::try_from(d).ok().filter(|&d| d <= max).map(|d| (d, g)))
        .collect();
    let mut levels: Vec<BTreeSet<IntVector>> = vec![BTreeSet::new(); max + 1];
    levels[0].insert(vec![BigInt::zero(); rc.gen.ncols()]);
    for k in 1..=max {
        let mut level = BTreeSet::new();
        for (d, g) in &gens {
            if *d <= k {
                for x in &levels[k - d] {
                    level.insert(x.iter().zip(g.iter()).map(|(a, b)| a + b).collect::<IntVector>());
                }
            }
        }
        levels[k] = level;
    }
    let mut binom: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    let mut choose = |n: usize, k: usize| -> BigInt {
        binom
            .entry((n, k))
            .or_insert_with(|| (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1)))
            .clone()
    };
    let mut out = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        let expected: BigInt = if r == 0 {
            h.get(k).cloned().unwrap_or_default()
        } else {
            h.iter()
                .enumerate()
                .filter(|(i, _)| *i <= k)
                .map(|(i, hi)| hi * choose(k - i + r - 1, r - 1))
                .sum()
        };
        if expected != BigInt::from(level.len()) {
            out.push(format!(
                "series: the h-vector predicts {} elements of degree {}, the generators give {}",
                expected,
                k,
                level.len()
            ));
        }
    }
    out
}
