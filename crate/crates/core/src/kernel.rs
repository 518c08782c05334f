//! Kernels: validated seed curves, and the kernel text format.
//!
//! ```text
//! side 4
//! origin 0 0
//! strokes r u l a l u r b u r d g d a d
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::affine::{BuildError, RULE_SETS};
use crate::curve::{CurvePath, GridPoint, PathError};
use crate::stroke::{parse_strokes, StrokeString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("Malformed: line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("NotSpaceFilling: {0}")]
    NotSpaceFilling(PathError),
    #[error("BadEntryExit: a side-{side} kernel must run from (0, 0) to ({0}, 0), found {entry} to {exit}", side - 1)]
    BadEntryExit {
        side: u32,
        entry: GridPoint,
        exit: GridPoint,
    },
    #[error("BrokenQuadrantConnectivity: {0}")]
    BrokenQuadrantConnectivity(BuildError),
    #[error("UnknownKernel: {0:?} is neither a bundled kernel nor a readable file")]
    Unknown(String),
}

impl KernelError {
    /// The bare error name, e.g. `BadEntryExit`.
    pub fn name(&self) -> &'static str {
        match self {
            KernelError::Malformed { .. } => "Malformed",
            KernelError::NotSpaceFilling(_) => "NotSpaceFilling",
            KernelError::BadEntryExit { .. } => "BadEntryExit",
            KernelError::BrokenQuadrantConnectivity(_) => "BrokenQuadrantConnectivity",
            KernelError::Unknown(_) => "UnknownKernel",
        }
    }
}

/// A seed curve from which every rule set can grow a space-filling curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    name: String,
    path: CurvePath,
}

const MOUSE: &str = include_str!("../kernels/mouse.txt");
const FROG: &str = include_str!("../kernels/frog.txt");

pub const BUNDLED: [&str; 3] = ["unit", "mouse", "frog"];

impl KernelSpec {
    /// Checks a candidate kernel.
    ///
    /// Beyond the path invariants, the kernel must enter at the lower-left
    /// corner cell and exit at the lower-right one, and one growth step of
    /// every rule set (plus the improper rule sets acting on the grown
    /// fourth Liu curve) must join its quadrant images by king moves.
    pub fn validate(name: impl Into<String>, path: CurvePath) -> Result<KernelSpec, KernelError> {
        let side = path.side();
        let (entry, exit) = (path.first(), path.last());
        if side < 2 || entry != GridPoint::new(0, 0) || exit != GridPoint::new(side - 1, 0) {
            return Err(KernelError::BadEntryExit { side, entry, exit });
        }
        let liu4 = RULE_SETS[5]
            .grow(&path)
            .map_err(KernelError::BrokenQuadrantConnectivity)?;
        for rule in &RULE_SETS {
            rule.grow(&path)
                .map_err(KernelError::BrokenQuadrantConnectivity)?;
            if !rule.is_proper() {
                rule.grow(&liu4)
                    .map_err(KernelError::BrokenQuadrantConnectivity)?;
            }
        }
        Ok(KernelSpec {
            name: name.into(),
            path,
        })
    }

    /// Validates raw cells, reporting path defects as `NotSpaceFilling`.
    pub fn from_cells(
        name: impl Into<String>,
        side: u32,
        cells: Vec<GridPoint>,
    ) -> Result<KernelSpec, KernelError> {
        let path = CurvePath::new(side, cells).map_err(KernelError::NotSpaceFilling)?;
        Self::validate(name, path)
    }

    /// The order-1 Hilbert curve.
    pub fn unit() -> KernelSpec {
        let cells = [(0, 0), (0, 1), (1, 1), (1, 0)]
            .map(|(x, y)| GridPoint::new(x, y))
            .to_vec();
        Self::from_cells("unit", 2, cells).expect("unit kernel is valid")
    }

    pub fn mouse() -> KernelSpec {
        parse_kernel("mouse", MOUSE).expect("bundled mouse kernel is valid")
    }

    pub fn frog() -> KernelSpec {
        parse_kernel("frog", FROG).expect("bundled frog kernel is valid")
    }

    pub fn bundled(name: &str) -> Option<KernelSpec> {
        match name {
            "unit" => Some(Self::unit()),
            "mouse" => Some(Self::mouse()),
            "frog" => Some(Self::frog()),
            _ => None,
        }
    }

    /// A bundled kernel by name, or else a kernel file.
    pub fn resolve(name_or_path: &str) -> Result<KernelSpec, KernelError> {
        if let Some(k) = Self::bundled(name_or_path) {
            return Ok(k);
        }
        let path = Path::new(name_or_path);
        let text = std::fs::read_to_string(path)
            .map_err(|_| KernelError::Unknown(name_or_path.to_string()))?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("kernel");
        parse_kernel(name, &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn path(&self) -> &CurvePath {
        &self.path
    }

    pub fn side(&self) -> u32 {
        self.path.side()
    }

    pub fn strokes(&self) -> StrokeString {
        self.path.to_strokes()
    }

    /// Renders the kernel in the text format.
    pub fn to_text(&self) -> String {
        let s = self.strokes();
        let mut out = String::new();
        let _ = writeln!(out, "side {}", self.side());
        let _ = writeln!(out, "origin {} {}", s.origin.x, s.origin.y);
        let _ = writeln!(out, "strokes {}", s.letters());
        out
    }
}

/// Field values of a kernel file before any curve checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelFile {
    pub side: u32,
    pub origin: GridPoint,
    pub strokes: StrokeString,
}

fn malformed(line: usize, message: impl Into<String>) -> KernelError {
    KernelError::Malformed {
        line,
        message: message.into(),
    }
}

/// Parses the three fields of a kernel file.
pub fn parse_kernel_file(text: &str) -> Result<KernelFile, KernelError> {
    let mut fields = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut next = |key: &str| -> Result<(usize, &str), KernelError> {
        let (line, content) = fields
            .next()
            .ok_or_else(|| malformed(0, format!("missing `{key}` line")))?;
        let rest = content
            .strip_prefix(key)
            .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
            .ok_or_else(|| malformed(line, format!("expected `{key}`")))?;
        Ok((line, rest.trim()))
    };

    let (line, side) = next("side")?;
    let side: u32 = side
        .parse()
        .map_err(|_| malformed(line, format!("bad side {side:?}")))?;
    if !side.is_power_of_two() || side > 1 << 15 {
        return Err(KernelError::NotSpaceFilling(PathError::InvalidSide(
            u64::from(side),
        )));
    }

    let (line, origin) = next("origin")?;
    let coords: Vec<u32> = origin
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| malformed(line, format!("bad origin {origin:?}")))?;
    let [x, y] = coords[..] else {
        return Err(malformed(line, "origin needs two coordinates"));
    };

    let (line, letters) = next("strokes")?;
    let strokes = parse_strokes(letters).map_err(|e| malformed(line, e.to_string()))?;

    if let Some((line, _)) = fields.next() {
        return Err(malformed(line, "unexpected content after `strokes`"));
    }
    let origin = GridPoint::new(x, y);
    Ok(KernelFile {
        side,
        origin,
        strokes: StrokeString::new(origin, strokes),
    })
}

/// Parses and validates a kernel file.
pub fn parse_kernel(name: &str, text: &str) -> Result<KernelSpec, KernelError> {
    let file = parse_kernel_file(text)?;
    let path = file
        .strokes
        .to_path(file.side)
        .map_err(KernelError::NotSpaceFilling)?;
    KernelSpec::validate(name, path)
}
