//! Batch jobs behind the command-line tool.
//!
//! A [`JobSpec`] names a command and its inputs; [`run`] produces the
//! artifacts. Every artifact is rendered to bytes before anything is
//! written, so a job either fails early or writes deterministic output.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::affine::{build_curve, BuildError};
use crate::curve::CurvePath;
use crate::decimal::format_ratio;
use crate::export::{
    parse_curve_csv, pgm_bytes, ppm_bytes, write_curve_csv, write_diffmap_csv, write_profile_csv,
    CurveCsvError, CurveMeta, StatsRecord,
};
use crate::kernel::{KernelError, KernelSpec, BUNDLED};
use crate::locality::{
    barrier_mask, boundary_barriers, boundary_profile, diff_stats, difference_map, dilation_factor,
    Convention, LocalityError, Rational,
};
use crate::tag;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Generate,
    Analyze,
    Dilation,
    Diffmap,
    ValidateKernel,
    ReproduceTables,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuSelection {
    One(u8),
    All,
}

impl NuSelection {
    pub fn values(self) -> Vec<u8> {
        match self {
            NuSelection::One(nu) => vec![nu],
            NuSelection::All => (0..12).collect(),
        }
    }
}

impl FromStr for NuSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(NuSelection::All);
        }
        match s.parse::<u8>() {
            Ok(nu) if nu < 12 => Ok(NuSelection::One(nu)),
            _ => Err(format!("nu must be 0-11 or `all`, got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Affine,
    Tag,
    Both,
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "affine" => Ok(Backend::Affine),
            "tag" => Ok(Backend::Tag),
            "both" => Ok(Backend::Both),
            _ => Err(format!("backend must be affine, tag or both, got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Pgm,
    JsonRecord,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "pgm" => Ok(Format::Pgm),
            "json-record" => Ok(Format::JsonRecord),
            _ => Err(format!("format must be csv, pgm or json-record, got {s:?}")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Pgm => "pgm",
            Format::JsonRecord => "json-record",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub nu: NuSelection,
    pub order: u32,
    /// Bundled kernel name or kernel file path; `all` for every bundled
    /// kernel (reproduce-tables only).
    pub kernel: String,
    pub backend: Backend,
    /// File, or directory when several artifacts are produced.
    pub output: Option<PathBuf>,
    /// `None` picks the command's default.
    pub format: Option<Format>,
    pub convention: Convention,
    /// Curve CSV to analyse instead of generating one.
    pub input: Option<PathBuf>,
    /// Grid side for reproduce-tables.
    pub side: u32,
}

impl JobSpec {
    pub fn new(command: Command) -> JobSpec {
        let nu = match command {
            Command::ReproduceTables => NuSelection::All,
            _ => NuSelection::One(0),
        };
        JobSpec {
            command,
            nu,
            order: 3,
            kernel: "unit".into(),
            backend: Backend::Affine,
            output: None,
            format: None,
            convention: Convention::default(),
            input: None,
            side: 256,
        }
    }
}

#[derive(Debug, Error)]
pub enum JobError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("BackendMismatch: nu {nu}: {first} and {second} differ first at step {step}")]
    Mismatch {
        nu: u8,
        step: usize,
        first: String,
        second: String,
    },
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("InvalidBackendCurve: {0}")]
    InvalidBackendCurve(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    CurveFile(#[from] CurveCsvError),
    #[error(transparent)]
    Locality(#[from] LocalityError),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Kernel(_) => 2,
            JobError::Mismatch { .. } | JobError::InvalidBackendCurve(_) => 3,
            JobError::Io { .. } => 4,
            _ => 1,
        }
    }

    fn io(path: &Path, source: io::Error) -> JobError {
        JobError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// A way of producing the curve `(nu, order)` from a kernel.
pub trait CurveGenerator: Sync {
    fn name(&self) -> &str;
    fn generate(&self, nu: u8, order: u32, kernel: &KernelSpec) -> Result<CurvePath, JobError>;
}

pub struct AffineGenerator;

impl CurveGenerator for AffineGenerator {
    fn name(&self) -> &str {
        "affine"
    }

    fn generate(&self, nu: u8, order: u32, kernel: &KernelSpec) -> Result<CurvePath, JobError> {
        Ok(build_curve(nu, order, kernel)?)
    }
}

pub struct TagGenerator;

impl CurveGenerator for TagGenerator {
    fn name(&self) -> &str {
        "tag"
    }

    fn generate(&self, nu: u8, order: u32, kernel: &KernelSpec) -> Result<CurvePath, JobError> {
        // The affine side check doubles as the size guard here.
        let side = crate::affine::curve_side(order, kernel)?;
        let strokes = tag::expand(nu, order, &kernel.strokes()).ok_or(BuildError::InvalidNu(nu))?;
        strokes.to_path(side).map_err(|e| {
            JobError::InvalidBackendCurve(format!("tag expansion of nu {nu} order {order}: {e}"))
        })
    }
}

/// Runs every generator and returns the curve only if all agree.
pub fn agreed_curve(
    generators: &[&dyn CurveGenerator],
    nu: u8,
    order: u32,
    kernel: &KernelSpec,
) -> Result<CurvePath, JobError> {
    let (first, rest) = generators
        .split_first()
        .ok_or_else(|| JobError::Usage("no generator".into()))?;
    let curve = first.generate(nu, order, kernel)?;
    for other in rest {
        let theirs = other.generate(nu, order, kernel)?;
        let differs = curve
            .cells()
            .iter()
            .zip(theirs.cells())
            .position(|(a, b)| a != b);
        let step = differs.or((curve.len() != theirs.len()).then(|| curve.len().min(theirs.len())));
        if let Some(step) = step {
            return Err(JobError::Mismatch {
                nu,
                step,
                first: first.name().into(),
                second: other.name().into(),
            });
        }
    }
    Ok(curve)
}

fn generators(backend: Backend) -> Vec<&'static dyn CurveGenerator> {
    match backend {
        Backend::Affine => vec![&AffineGenerator],
        Backend::Tag => vec![&TagGenerator],
        Backend::Both => vec![&AffineGenerator, &TagGenerator],
    }
}

/// One produced file: a name suffix and its bytes.
struct Artifact {
    stem: String,
    extension: &'static str,
    bytes: Vec<u8>,
}

/// Runs a job with the standard generators, writing to `stdout` when no
/// output path is given.
pub fn run(job: &JobSpec, stdout: &mut dyn Write) -> Result<(), JobError> {
    run_with(job, &generators(job.backend), stdout)
}

/// Runs a job with explicit generators (all must agree).
pub fn run_with(
    job: &JobSpec,
    gens: &[&dyn CurveGenerator],
    stdout: &mut dyn Write,
) -> Result<(), JobError> {
    match job.command {
        Command::ValidateKernel => return validate_kernel(job, stdout),
        Command::ReproduceTables => return reproduce_tables(job, stdout),
        _ => {}
    }
    let format = job.format.unwrap_or(match job.command {
        Command::Generate | Command::Diffmap => Format::Csv,
        _ => Format::JsonRecord,
    });
    check_format(job.command, format)?;
    if format == Format::Pgm && job.output.is_none() {
        return Err(JobError::Usage("pgm output needs --output".into()));
    }

    let (kernel, inputs): (Option<KernelSpec>, Vec<(CurveMeta, Option<CurvePath>)>) =
        match &job.input {
            Some(path) => {
                if job.command == Command::Generate {
                    return Err(JobError::Usage("generate does not take --input".into()));
                }
                let text = std::fs::read_to_string(path).map_err(|e| JobError::io(path, e))?;
                let (meta, curve) = parse_curve_csv(&text)?;
                (None, vec![(meta, Some(curve))])
            }
            None => {
                let kernel = KernelSpec::resolve(&job.kernel)?;
                let metas = job
                    .nu
                    .values()
                    .into_iter()
                    .map(|nu| {
                        let meta = CurveMeta {
                            nu,
                            order: job.order,
                            kernel: kernel.name().to_string(),
                        };
                        (meta, None)
                    })
                    .collect();
                (Some(kernel), metas)
            }
        };

    let per_curve: Vec<Vec<Artifact>> = inputs
        .into_par_iter()
        .map(|(meta, given)| {
            let curve = match (given, &kernel) {
                (Some(c), _) => c,
                (None, Some(k)) => agreed_curve(gens, meta.nu, meta.order, k)?,
                (None, None) => unreachable!("kernel resolved when no input is given"),
            };
            render(job, format, &meta, &curve)
        })
        .collect::<Result<_, JobError>>()?;

    let several = per_curve.len() > 1;
    // Dilation rows share one table on stdout.
    let one_table =
        job.output.is_none() && job.command == Command::Dilation && format == Format::Csv;
    for (k, artifacts) in per_curve.into_iter().enumerate() {
        for mut a in artifacts {
            if one_table && k > 0 {
                let body = a
                    .bytes
                    .iter()
                    .position(|&b| b == b'\n')
                    .map_or(0, |p| p + 1);
                a.bytes.drain(..body);
            }
            emit(job.output.as_deref(), several, &a, stdout)?;
        }
    }
    Ok(())
}

fn check_format(command: Command, format: Format) -> Result<(), JobError> {
    let ok = match command {
        Command::Generate => format == Format::Csv,
        Command::Analyze | Command::Dilation => format != Format::Pgm,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(JobError::Usage(format!(
            "format {format} is not available for this command"
        )))
    }
}

fn stem(meta: &CurveMeta) -> String {
    format!("nu{}", meta.nu)
}

fn render(
    job: &JobSpec,
    format: Format,
    meta: &CurveMeta,
    curve: &CurvePath,
) -> Result<Vec<Artifact>, JobError> {
    let one = |bytes: Vec<u8>, extension| {
        vec![Artifact {
            stem: stem(meta),
            extension,
            bytes,
        }]
    };
    let mut buf = Vec::new();
    let io_err = |e| JobError::io(Path::new("<buffer>"), e);
    match job.command {
        Command::Generate => {
            write_curve_csv(&mut buf, meta, curve).map_err(io_err)?;
            Ok(one(buf, "csv"))
        }
        Command::Analyze => {
            let map = difference_map(curve, job.convention);
            if format == Format::Csv {
                write_profile_csv(&mut buf, &boundary_profile(&map)?).map_err(io_err)?;
                return Ok(one(buf, "csv"));
            }
            let stats = diff_stats(&map)?;
            let mask = barrier_mask(&map)?;
            let profile = boundary_profile(&map)?;
            let half = profile.len() / 2;
            let spans = boundary_barriers(&mask)?
                .iter()
                .map(|b| (b.boundary.name(), number(b.fraction())))
                .collect();
            let record = AnalysisRecord {
                stats: StatsRecord::new(meta, &map, &stats),
                barrier_cells: mask.flagged_count(),
                barrier_span: spans,
                profile_mean_2_3: number(mean(&profile[..half])),
                profile_mean_4_1: number(mean(&profile[half..])),
            };
            Ok(one(json_line(&record), "json"))
        }
        Command::Dilation => {
            let d = dilation_factor(curve);
            if format == Format::Csv {
                let line = format!(
                    "nu,kernel,order,side,dilation,i,j\n{},{},{},{},{},{},{}\n",
                    meta.nu,
                    meta.kernel,
                    meta.order,
                    curve.side(),
                    format_ratio(d.value),
                    d.i,
                    d.j
                );
                return Ok(one(line.into_bytes(), "csv"));
            }
            let record = DilationRecord {
                nu: meta.nu,
                kernel: meta.kernel.clone(),
                order: meta.order,
                side: curve.side(),
                dilation: number(d.value),
                dilation_exact: format!("{}/{}", d.value.numer(), d.value.denom()),
                witness: [d.i, d.j],
            };
            Ok(one(json_line(&record), "json"))
        }
        Command::Diffmap => {
            let map = difference_map(curve, job.convention);
            match format {
                Format::Csv => {
                    write_diffmap_csv(&mut buf, &map).map_err(io_err)?;
                    Ok(one(buf, "csv"))
                }
                Format::Pgm => {
                    let mask = barrier_mask(&map)?;
                    Ok(vec![
                        Artifact {
                            stem: stem(meta),
                            extension: "pgm",
                            bytes: pgm_bytes(&map),
                        },
                        Artifact {
                            stem: stem(meta),
                            extension: "ppm",
                            bytes: ppm_bytes(&map, &mask),
                        },
                    ])
                }
                Format::JsonRecord => {
                    let stats = diff_stats(&map)?;
                    Ok(one(
                        json_line(&StatsRecord::new(meta, &map, &stats)),
                        "json",
                    ))
                }
            }
        }
        Command::ValidateKernel | Command::ReproduceTables => unreachable!("handled by run_with"),
    }
}

/// Single output: the file itself (companions swap the extension). Several
/// outputs: files `nu{ν}.{ext}` inside the output directory.
fn emit(
    output: Option<&Path>,
    several: bool,
    a: &Artifact,
    stdout: &mut dyn Write,
) -> Result<(), JobError> {
    let target = match output {
        None => {
            return stdout
                .write_all(&a.bytes)
                .map_err(|e| JobError::io(Path::new("<stdout>"), e))
        }
        Some(dir) if several => {
            std::fs::create_dir_all(dir).map_err(|e| JobError::io(dir, e))?;
            dir.join(format!("{}.{}", a.stem, a.extension))
        }
        Some(file) if matches!(a.extension, "ppm") => file.with_extension("ppm"),
        Some(file) => file.to_path_buf(),
    };
    std::fs::write(&target, &a.bytes).map_err(|e| JobError::io(&target, e))
}

fn number(r: Rational) -> f64 {
    format_ratio(r).parse().expect("six-digit decimal")
}

fn mean(values: &[Rational]) -> Rational {
    values.iter().sum::<Rational>() / values.len() as u64
}

fn json_line<T: Serialize>(value: &T) -> Vec<u8> {
    let mut line = serde_json::to_vec(value).expect("record serializes");
    line.push(b'\n');
    line
}

#[derive(Serialize)]
struct AnalysisRecord {
    #[serde(flatten)]
    stats: StatsRecord,
    barrier_cells: usize,
    barrier_span: std::collections::BTreeMap<&'static str, f64>,
    profile_mean_2_3: f64,
    profile_mean_4_1: f64,
}

#[derive(Serialize)]
struct DilationRecord {
    nu: u8,
    kernel: String,
    order: u32,
    side: u32,
    dilation: f64,
    dilation_exact: String,
    witness: [u64; 2],
}

fn validate_kernel(job: &JobSpec, stdout: &mut dyn Write) -> Result<(), JobError> {
    let kernel = KernelSpec::resolve(&job.kernel)?;
    let strokes = kernel.strokes();
    let diagonal = strokes.strokes.iter().filter(|s| s.is_diagonal()).count();
    writeln!(
        stdout,
        "valid kernel {}: side {}, {} strokes ({} diagonal)",
        kernel.name(),
        kernel.side(),
        strokes.len(),
        diagonal
    )
    .map_err(|e| JobError::io(Path::new("<stdout>"), e))
}

#[derive(Serialize)]
struct TableMetadata {
    side: u32,
    convention: &'static str,
    divisor: &'static str,
    domain: &'static str,
    stddev: &'static str,
    rows: usize,
}

/// Order at which `kernel` reaches `side`.
fn order_for_side(kernel: &KernelSpec, side: u32) -> Result<u32, JobError> {
    let k = kernel.side();
    if side < k || !side.is_multiple_of(k) || !(side / k).is_power_of_two() {
        return Err(JobError::Usage(format!(
            "side {side} is not reachable from the side-{k} kernel {}",
            kernel.name()
        )));
    }
    Ok((side / k).trailing_zeros() + 1)
}

fn reproduce_tables(job: &JobSpec, stdout: &mut dyn Write) -> Result<(), JobError> {
    let kernels: Vec<KernelSpec> = if job.kernel == "all" {
        BUNDLED
            .iter()
            .map(|&n| KernelSpec::resolve(n))
            .collect::<Result<_, _>>()?
    } else {
        vec![KernelSpec::resolve(&job.kernel)?]
    };
    let gens = generators(job.backend);
    let mut rows = Vec::new();
    for k in &kernels {
        let order = order_for_side(k, job.side)?;
        for nu in job.nu.values() {
            rows.push((k, nu, order));
        }
    }
    let lines: Vec<Vec<u8>> = rows
        .par_iter()
        .map(|&(k, nu, order)| {
            let curve = agreed_curve(&gens, nu, order, k)?;
            let map = difference_map(&curve, job.convention);
            let stats = diff_stats(&map)?;
            let meta = CurveMeta {
                nu,
                order,
                kernel: k.name().to_string(),
            };
            Ok(json_line(&StatsRecord::new(&meta, &map, &stats)))
        })
        .collect::<Result<_, JobError>>()?;

    let (divisor, domain) = match job.convention {
        Convention::ExistingNeighbors => ("existing neighbours", "all cells"),
        Convention::FixedEight => ("8", "all cells"),
        Convention::InteriorOnly => ("8", "cells with 8 neighbours"),
    };
    let mut out = json_line(&TableMetadata {
        side: job.side,
        convention: job.convention.name(),
        divisor,
        domain,
        stddev: "population",
        rows: lines.len(),
    });
    out.extend(lines.concat());
    match &job.output {
        Some(path) => std::fs::write(path, &out).map_err(|e| JobError::io(path, e)),
        None => stdout
            .write_all(&out)
            .map_err(|e| JobError::io(Path::new("<stdout>"), e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn output(job: &JobSpec) -> String {
        let mut buf = Vec::new();
        run(job, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn parses_selectors() {
        assert_eq!("all".parse(), Ok(NuSelection::All));
        assert_eq!("11".parse(), Ok(NuSelection::One(11)));
        assert!("12".parse::<NuSelection>().is_err());
        assert_eq!("both".parse(), Ok(Backend::Both));
        assert_eq!("json-record".parse(), Ok(Format::JsonRecord));
        assert!("png".parse::<Format>().is_err());
    }

    #[test]
    fn generate_order_two() {
        let mut job = JobSpec::new(Command::Generate);
        job.order = 2;
        job.backend = Backend::Both;
        let text = output(&job);
        assert_eq!(text.lines().count(), 17);
        assert!(text.starts_with("0,2,unit,4\n0,0,0\n1,1,0\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(JobError::Usage(String::new()).exit_code(), 1);
        let mut job = JobSpec::new(Command::Generate);
        job.kernel = "/nonexistent/kernel.txt".into();
        assert_eq!(run(&job, &mut Vec::new()).unwrap_err().exit_code(), 2);
        let mut job = JobSpec::new(Command::Generate);
        job.order = 40;
        assert_eq!(run(&job, &mut Vec::new()).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn wrong_format_is_usage_error() {
        let mut job = JobSpec::new(Command::Generate);
        job.format = Some(Format::JsonRecord);
        assert!(matches!(
            run(&job, &mut Vec::new()),
            Err(JobError::Usage(_))
        ));
        let mut job = JobSpec::new(Command::Diffmap);
        job.format = Some(Format::Pgm);
        assert!(matches!(
            run(&job, &mut Vec::new()),
            Err(JobError::Usage(_))
        ));
    }

    #[test]
    fn order_for_side_matches_kernels() {
        assert_eq!(order_for_side(&KernelSpec::unit(), 256).unwrap(), 8);
        assert_eq!(order_for_side(&KernelSpec::mouse(), 256).unwrap(), 7);
        assert!(order_for_side(&KernelSpec::mouse(), 2).is_err());
        assert!(order_for_side(&KernelSpec::unit(), 96).is_err());
    }
}
