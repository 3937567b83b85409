//! `bdcsvd` command line: `gen`, `run`, `verify`, `profile`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::accuracy::accuracy;
use super::generate::{generate, MatrixKind, MatrixSpec};
use super::io::{read_matrix, write_matrix};
use super::HarnessError;
use crate::dense::Mat;
use crate::driver::{gesdd, phase_profile, Jobz, SVDOptions};

#[derive(Debug, Parser)]
#[command(name = "bdcsvd", version, about = "Dense SVD by bidiagonal divide and conquer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a test matrix with a prescribed singular value distribution.
    Gen(GenArgs),
    /// Compute the SVD of a matrix file.
    Run(RunArgs),
    /// Compute the SVD and check reconstruction and orthogonality.
    Verify(VerifyArgs),
    /// Time each pipeline phase and write a CSV.
    Profile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Random,
    Logrand,
    Arith,
    Geo,
}

impl From<KindArg> for MatrixKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Random => MatrixKind::Random,
            KindArg::Logrand => MatrixKind::Logrand,
            KindArg::Arith => MatrixKind::Arith,
            KindArg::Geo => MatrixKind::Geo,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum JobzArg {
    /// Singular values only.
    N,
    /// Economy singular vectors.
    S,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Condition number; required for every kind except `random`.
    #[arg(long)]
    pub cond: Option<f64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Write whitespace-separated text instead of the binary format.
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Args)]
pub struct Tuning {
    #[arg(long, default_value_t = 32)]
    pub block_bidiag: usize,
    #[arg(long, default_value_t = 32)]
    pub block_qr: usize,
    #[arg(long, default_value_t = 64)]
    pub block_orgqr: usize,
    #[arg(long, default_value_t = 64)]
    pub block_apply: usize,
    #[arg(long, default_value_t = 32)]
    pub leaf: usize,
    /// QR-first when m >= crossover * n (`inf` disables).
    #[arg(long, default_value_t = 5.0 / 3.0)]
    pub crossover: f64,
    #[arg(long, default_value_t = 8.0)]
    pub deflation_multiple: f64,
}

impl Tuning {
    fn options(&self, jobz: Jobz) -> SVDOptions {
        SVDOptions {
            jobz,
            bidiag_block: self.block_bidiag,
            qr_block: self.block_qr,
            orgqr_block: self.block_orgqr,
            apply_block: self.block_apply,
            leaf_size: self.leaf,
            ts_crossover: self.crossover,
            deflation_multiple: self.deflation_multiple,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "s")]
    pub jobz: JobzArg,
    #[command(flatten)]
    pub tuning: Tuning,
    #[arg(long)]
    pub out_u: Option<PathBuf>,
    #[arg(long)]
    pub out_s: Option<PathBuf>,
    #[arg(long)]
    pub out_vt: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Threshold for every metric; defaults to 100 * max(m, n) * u.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long, value_enum, default_value = "s")]
    pub jobz: JobzArg,
    #[command(flatten)]
    pub tuning: Tuning,
}

fn jobz(j: JobzArg) -> Jobz {
    match j {
        JobzArg::N => Jobz::ValuesOnly,
        JobzArg::S => Jobz::Economy,
    }
}

fn gen(args: &GenArgs) -> Result<String, HarnessError> {
    let kind = MatrixKind::from(args.kind);
    let cond = match (kind, args.cond) {
        (MatrixKind::Random, c) => c.unwrap_or(0.0),
        (_, Some(c)) => c,
        (_, None) => return Err(HarnessError::Invalid(format!("--cond is required for --kind {}", kind.name()))),
    };
    let spec = MatrixSpec {
        kind,
        m: args.m,
        n: args.n,
        cond,
        seed: args.seed,
    };
    let g = generate(&spec)?;
    write_matrix(&args.out, &g.a, args.text)?;
    Ok(format!("wrote {}x{} {} matrix to {}\n", args.m, args.n, kind.name(), args.out.display()))
}

fn run(args: &RunArgs) -> Result<String, HarnessError> {
    let a = read_matrix(&args.input)?;
    let opts = args.tuning.options(jobz(args.jobz));
    if opts.jobz == Jobz::ValuesOnly && (args.out_u.is_some() || args.out_vt.is_some()) {
        return Err(HarnessError::Invalid("--out-u/--out-vt need --jobz s".into()));
    }
    let r = gesdd(&a, &opts)?;
    if let (Some(path), Some(u)) = (&args.out_u, &r.u) {
        write_matrix(path, u, false)?;
    }
    if let (Some(path), Some(vt)) = (&args.out_vt, &r.vt) {
        write_matrix(path, vt, false)?;
    }
    if let Some(path) = &args.out_s {
        write_matrix(path, &Mat::from_col_major(r.sigma.len(), 1, r.sigma.clone()), false)?;
    }
    let mut out = String::new();
    for s in &r.sigma {
        writeln!(out, "{s:.17e}").expect("string write");
    }
    Ok(out)
}

fn verify(args: &VerifyArgs) -> Result<String, HarnessError> {
    let a = read_matrix(&args.input)?;
    let (m, n) = (a.rows(), a.cols());
    let tol = args.tol.unwrap_or(100.0 * m.max(n) as f64 * f64::EPSILON / 2.0);
    let r = gesdd(&a, &args.tuning.options(Jobz::Economy))?;
    let rep = accuracy(&a, &r, None);
    let (e, ou, ov) = (
        rep.e_svd.expect("vectors"),
        rep.orth_u.expect("vectors"),
        rep.orth_v.expect("vectors"),
    );
    let mut out = format!("m={m} n={n} tol={tol:.3e}\ne_svd={e:.3e}\northo_u={ou:.3e}\northo_v={ov:.3e}\n");
    let failed: Vec<&str> = [("e_svd", e), ("ortho_u", ou), ("ortho_v", ov)]
        .into_iter()
        .filter(|(_, v)| v.is_nan() || *v > tol)
        .map(|(name, _)| name)
        .collect();
    if !failed.is_empty() {
        return Err(HarnessError::Threshold(format!("{} above {tol:.3e}\n{out}", failed.join(", "))));
    }
    out.push_str("ok\n");
    Ok(out)
}

fn profile(args: &ProfileArgs) -> Result<String, HarnessError> {
    let a = read_matrix(&args.input)?;
    let p = phase_profile(&a, &args.tuning.options(jobz(args.jobz)))?;
    fs::write(&args.csv, p.to_csv()).map_err(|e| HarnessError::io(&args.csv, e))?;
    Ok(format!("total {:.6} s, phases written to {}\n", p.total, args.csv.display()))
}

pub fn execute(cli: &Cli) -> Result<String, HarnessError> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Verify(a) => verify(a),
        Command::Profile(a) => profile(a),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status: 0 on success, 1 on failure, 2 on a usage error.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(cli_main(["bdcsvd", "gen", "--kind", "nope"]), 2);
        assert_eq!(cli_main(["bdcsvd", "frobnicate"]), 2);
        assert_eq!(cli_main(["bdcsvd", "run"]), 2);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(cli_main(["bdcsvd", "--help"]), 0);
    }

    #[test]
    fn missing_file_exits_one() {
        assert_eq!(cli_main(["bdcsvd", "run", "--input", "/nonexistent/a.dsvd"]), 1);
    }
}
