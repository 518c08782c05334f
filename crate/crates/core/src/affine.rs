//! The twelve homogeneous rule sets and curve growth by affine recursion.
//!
//! Each map acts on the unit square as `q(p) = ½·U·p + ½·t`. On the cells of
//! a `s × s` grid, taking cell centres, this is exactly
//!
//! ```text
//! c' = U·c + s·t − r,   r_k = 1 if row k of U has a negative entry
//! ```
//!
//! which lands `c'` in one quadrant of the `2s × 2s` grid. A reversed map
//! (written with an overbar in the usual tables) additionally walks its
//! image backwards.

use std::fmt;

use thiserror::Error;

use crate::curve::{CurvePath, GridPoint};
use crate::kernel::KernelSpec;

/// One of the eight signed 2×2 permutation matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Matrix(pub [[i8; 2]; 2]);

impl Matrix {
    /// Identity.
    pub const I: Matrix = Matrix([[1, 0], [0, 1]]);
    /// Transpose, `(x, y) → (y, x)`.
    pub const R: Matrix = Matrix([[0, 1], [1, 0]]);
    /// Quarter turn counter-clockwise, `(x, y) → (−y, x)`.
    pub const V: Matrix = Matrix([[0, -1], [1, 0]]);
    /// Vertical flip, `(x, y) → (x, −y)`.
    pub const H: Matrix = Matrix([[1, 0], [0, -1]]);

    pub const fn neg(self) -> Matrix {
        let m = self.0;
        Matrix([[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]])
    }

    pub const fn transpose(self) -> Matrix {
        let m = self.0;
        Matrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn det(self) -> i8 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(self, x: i64, y: i64) -> (i64, i64) {
        let m = self.0;
        (
            i64::from(m[0][0]) * x + i64::from(m[0][1]) * y,
            i64::from(m[1][0]) * x + i64::from(m[1][1]) * y,
        )
    }

    fn row_has_negative(self, row: usize) -> i64 {
        i64::from(self.0[row].iter().any(|&v| v < 0))
    }

    /// The eight matrices allowed in a rule set.
    pub const SIGNED: [Matrix; 8] = [
        Matrix::I,
        Matrix::I.neg(),
        Matrix::R,
        Matrix::R.neg(),
        Matrix::V,
        Matrix::V.neg(),
        Matrix::H,
        Matrix::H.neg(),
    ];

    fn name(self) -> &'static str {
        match self {
            m if m == Matrix::I => "U_I",
            m if m == Matrix::I.neg() => "-U_I",
            m if m == Matrix::R => "U_R",
            m if m == Matrix::R.neg() => "-U_R",
            m if m == Matrix::V => "U_V",
            m if m == Matrix::V.neg() => "-U_V",
            m if m == Matrix::H => "U_H",
            m if m == Matrix::H.neg() => "-U_H",
            _ => "?",
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Translation vectors `t₀ … t₅`.
pub const TRANSLATIONS: [(i64, i64); 6] = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 1), (1, 2)];

/// Quadrants in the order a curve visits them: `q₁` lower-left, `q₂`
/// upper-left, `q₃` upper-right, `q₄` lower-right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quadrant {
    LowerLeft,
    UpperLeft,
    UpperRight,
    LowerRight,
}

impl Quadrant {
    pub const ORDER: [Quadrant; 4] = [
        Quadrant::LowerLeft,
        Quadrant::UpperLeft,
        Quadrant::UpperRight,
        Quadrant::LowerRight,
    ];

    fn from_halves(right: bool, upper: bool) -> Quadrant {
        match (right, upper) {
            (false, false) => Quadrant::LowerLeft,
            (false, true) => Quadrant::UpperLeft,
            (true, true) => Quadrant::UpperRight,
            (true, false) => Quadrant::LowerRight,
        }
    }

    /// Quadrant of `p` in a grid of the given side.
    pub fn of(p: GridPoint, side: u32) -> Quadrant {
        let h = side / 2;
        Quadrant::from_halves(p.x >= h, p.y >= h)
    }

    /// Lower-left cell of this quadrant in a grid of the given side.
    pub fn corner(self, side: u32) -> GridPoint {
        let h = side / 2;
        match self {
            Quadrant::LowerLeft => GridPoint::new(0, 0),
            Quadrant::UpperLeft => GridPoint::new(0, h),
            Quadrant::UpperRight => GridPoint::new(h, h),
            Quadrant::LowerRight => GridPoint::new(h, 0),
        }
    }
}

/// `½·[U, t]`, optionally reversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub matrix: Matrix,
    /// Index into [`TRANSLATIONS`].
    pub translation: usize,
    pub reversed: bool,
}

impl AffineMap {
    pub const fn new(matrix: Matrix, translation: usize) -> Self {
        Self {
            matrix,
            translation,
            reversed: false,
        }
    }

    pub const fn rev(matrix: Matrix, translation: usize) -> Self {
        Self {
            matrix,
            translation,
            reversed: true,
        }
    }

    /// Quadrant receiving the image of the unit square.
    pub fn quadrant(&self) -> Quadrant {
        // four times the image of the square's centre (½, ½)
        let (cx, cy) = self.matrix.apply(1, 1);
        let (tx, ty) = TRANSLATIONS[self.translation];
        Quadrant::from_halves(cx + 2 * tx >= 2, cy + 2 * ty >= 2)
    }

    /// Image of one cell of a `side × side` grid, in the doubled grid.
    pub fn apply_point(&self, p: GridPoint, side: u32) -> GridPoint {
        let s = i64::from(side);
        let (tx, ty) = TRANSLATIONS[self.translation];
        let (ux, uy) = self.matrix.apply(i64::from(p.x), i64::from(p.y));
        let x = ux + s * tx - self.matrix.row_has_negative(0);
        let y = uy + s * ty - self.matrix.row_has_negative(1);
        assert!(
            (0..2 * s).contains(&x) && (0..2 * s).contains(&y),
            "affine image ({x}, {y}) outside the {0}x{0} grid",
            2 * s
        );
        GridPoint::new(x as u32, y as u32)
    }

    /// Inverse of [`AffineMap::apply_point`]; `side` is the source side.
    pub fn unapply_point(&self, p: GridPoint, side: u32) -> GridPoint {
        let s = i64::from(side);
        let (tx, ty) = TRANSLATIONS[self.translation];
        let x = i64::from(p.x) - s * tx + self.matrix.row_has_negative(0);
        let y = i64::from(p.y) - s * ty + self.matrix.row_has_negative(1);
        let (ox, oy) = self.matrix.transpose().apply(x, y);
        debug_assert!((0..s).contains(&ox) && (0..s).contains(&oy));
        GridPoint::new(ox as u32, oy as u32)
    }

    /// Image of a whole curve: a path filling one quadrant of the doubled
    /// grid, walked backwards when the map is reversed.
    pub fn apply(&self, path: &CurvePath) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(path.len());
        self.extend_image(path.cells(), path.side(), &mut out);
        out
    }

    fn extend_image(&self, cells: &[GridPoint], side: u32, out: &mut Vec<GridPoint>) {
        let quadrant = self.quadrant();
        let start = out.len();
        out.extend(cells.iter().map(|&c| {
            let img = self.apply_point(c, side);
            assert_eq!(
                Quadrant::of(img, 2 * side),
                quadrant,
                "image of {c} left its quadrant"
            );
            img
        }));
        if self.reversed {
            out[start..].reverse();
        }
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.reversed { "~" } else { "" };
        write!(f, "{bar}[{}, t{}]", self.matrix, self.translation)
    }
}

/// Which lower-order curve the last iteration acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    /// The Hilbert curve, `ν = 0`.
    Hilbert,
    /// The fourth Liu curve, `ν = 5`.
    Liu4,
}

impl Base {
    pub fn nu(self) -> u8 {
        match self {
            Base::Hilbert => 0,
            Base::Liu4 => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub nu: u8,
    pub name: &'static str,
    pub maps: [AffineMap; 4],
    pub base: Base,
}

use AffineMap as Q;

const UI: Matrix = Matrix::I;
const UR: Matrix = Matrix::R;
const UV: Matrix = Matrix::V;
const UH: Matrix = Matrix::H;

pub const RULE_SETS: [RuleSet; 12] = [
    RuleSet {
        nu: 0,
        name: "Hilbert",
        maps: [
            Q::new(UR, 0),
            Q::new(UI, 1),
            Q::new(UI, 3),
            Q::new(UR.neg(), 4),
        ],
        base: Base::Hilbert,
    },
    RuleSet {
        nu: 1,
        name: "Moore",
        maps: [
            Q::new(UV, 2),
            Q::new(UV, 3),
            Q::new(UV.neg(), 5),
            Q::new(UV.neg(), 3),
        ],
        base: Base::Hilbert,
    },
    RuleSet {
        nu: 2,
        name: "Liu 1",
        maps: [
            Q::new(UI.neg(), 3),
            Q::new(UI, 1),
            Q::new(UI, 3),
            Q::new(UI.neg(), 4),
        ],
        base: Base::Hilbert,
    },
    RuleSet {
        nu: 3,
        name: "Liu 2",
        maps: [
            Q::new(UH, 1),
            Q::new(UV, 3),
            Q::new(UV.neg(), 5),
            Q::new(UH, 3),
        ],
        base: Base::Hilbert,
    },
    RuleSet {
        nu: 4,
        name: "Liu 3",
        maps: [
            Q::new(UR, 0),
            Q::new(UI, 1),
            Q::new(UI, 3),
            Q::new(UI.neg(), 4),
        ],
        base: Base::Hilbert,
    },
    RuleSet {
        nu: 5,
        name: "Liu 4",
        maps: [
            Q::new(UH, 1),
            Q::new(UV, 3),
            Q::new(UV.neg(), 5),
            Q::new(UV.neg(), 3),
        ],
        base: Base::Hilbert,
    },
    RuleSet {
        nu: 6,
        name: "Improper 1",
        maps: [
            Q::new(UI.neg(), 3),
            Q::rev(UH.neg(), 3),
            Q::new(UI, 3),
            Q::rev(UH, 3),
        ],
        base: Base::Liu4,
    },
    RuleSet {
        nu: 7,
        name: "Improper 2",
        maps: [
            Q::new(UI.neg(), 3),
            Q::rev(UH.neg(), 3),
            Q::new(UI, 3),
            Q::new(UR.neg(), 4),
        ],
        base: Base::Liu4,
    },
    RuleSet {
        nu: 8,
        name: "Improper 3",
        maps: [
            Q::rev(UV.neg(), 1),
            Q::rev(UH.neg(), 3),
            Q::new(UI, 3),
            Q::new(UR.neg(), 4),
        ],
        base: Base::Liu4,
    },
    RuleSet {
        nu: 9,
        name: "Improper 4",
        maps: [
            Q::rev(UR.neg(), 3),
            Q::new(UV, 3),
            Q::rev(UR, 3),
            Q::new(UV.neg(), 3),
        ],
        base: Base::Liu4,
    },
    RuleSet {
        nu: 10,
        name: "Improper 5",
        maps: [
            Q::new(UH, 1),
            Q::new(UV, 3),
            Q::rev(UR, 3),
            Q::rev(UI.neg(), 4),
        ],
        base: Base::Liu4,
    },
    RuleSet {
        nu: 11,
        name: "Improper 6",
        maps: [
            Q::new(UH, 1),
            Q::new(UV, 3),
            Q::rev(UR, 3),
            Q::new(UV.neg(), 3),
        ],
        base: Base::Liu4,
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("InvalidCurve: curve index {0} is not in 0..=11")]
    InvalidNu(u8),
    #[error("InvalidOrder: order must be at least 1")]
    InvalidOrder,
    #[error(
        "InvalidOrder: order {order} on a side-{kernel_side} kernel exceeds the 2^31 grid limit"
    )]
    TooLarge { order: u32, kernel_side: u32 },
    #[error("DiscontinuousJunction: rule set {nu}, junction q{junction}->q{next}: {from} to {to}", next = junction + 1)]
    DiscontinuousJunction {
        nu: u8,
        junction: usize,
        from: GridPoint,
        to: GridPoint,
    },
    #[error("IndexOutOfRange: index {index} not below {len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("PointOutOfRange: {point} outside a {side}x{side} grid")]
    PointOutOfRange { point: GridPoint, side: u32 },
}

impl RuleSet {
    pub fn get(nu: u8) -> Result<&'static RuleSet, BuildError> {
        RULE_SETS
            .get(usize::from(nu))
            .ok_or(BuildError::InvalidNu(nu))
    }

    pub fn is_proper(&self) -> bool {
        self.base == Base::Hilbert
    }

    /// One application of the rule set: the four images concatenated in
    /// `q₁ q₂ q₃ q₄` order.
    pub fn grow(&self, base: &CurvePath) -> Result<CurvePath, BuildError> {
        let side = base.side();
        let mut cells = Vec::with_capacity(4 * base.len());
        for (j, map) in self.maps.iter().enumerate() {
            let start = cells.len();
            map.extend_image(base.cells(), side, &mut cells);
            if j > 0 && !cells[start - 1].is_king_neighbor(cells[start]) {
                return Err(BuildError::DiscontinuousJunction {
                    nu: self.nu,
                    junction: j,
                    from: cells[start - 1],
                    to: cells[start],
                });
            }
        }
        Ok(CurvePath::from_trusted(2 * side, cells))
    }
}

/// Grid side of the order-`n` curve grown from `kernel`.
pub fn curve_side(n: u32, kernel: &KernelSpec) -> Result<u32, BuildError> {
    if n == 0 {
        return Err(BuildError::InvalidOrder);
    }
    let too_large = BuildError::TooLarge {
        order: n,
        kernel_side: kernel.side(),
    };
    let shift = n - 1;
    if shift >= 31 {
        return Err(too_large);
    }
    kernel
        .side()
        .checked_mul(1 << shift)
        .filter(|s| *s <= 1 << 30)
        .ok_or(too_large)
}

fn check_args(nu: u8, n: u32, kernel: &KernelSpec) -> Result<u32, BuildError> {
    RuleSet::get(nu)?;
    curve_side(n, kernel)
}

/// `₀H_m`: `m − 1` Hilbert iterations over the kernel.
fn hilbert_chain(m: u32, kernel: &KernelSpec) -> Result<CurvePath, BuildError> {
    let hilbert = &RULE_SETS[0];
    let mut curve = kernel.path().clone();
    for _ in 1..m {
        curve = hilbert.grow(&curve)?;
    }
    Ok(curve)
}

/// The order-`n` curve of rule set `nu` grown from `kernel`.
///
/// Order 1 is the kernel itself. Proper rule sets (`ν ≤ 5`) act once on
/// the order-`n−1` Hilbert curve; improper ones act on the order-`n−1`
/// fourth Liu curve and coincide with it at order 2.
pub fn build_curve(nu: u8, n: u32, kernel: &KernelSpec) -> Result<CurvePath, BuildError> {
    check_args(nu, n, kernel)?;
    let rule = &RULE_SETS[usize::from(nu)];
    match (rule.base, n) {
        (_, 1) => Ok(kernel.path().clone()),
        (Base::Liu4, 2) => build_curve(5, 2, kernel),
        (Base::Hilbert, _) => rule.grow(&hilbert_chain(n - 1, kernel)?),
        (Base::Liu4, _) => {
            let liu4 = RULE_SETS[5].grow(&hilbert_chain(n - 2, kernel)?)?;
            rule.grow(&liu4)
        }
    }
}

/// Effective rule set and base for one recursion level.
fn level(nu: u8, n: u32) -> Option<(&'static RuleSet, u8)> {
    let rule = &RULE_SETS[usize::from(nu)];
    match (rule.base, n) {
        (_, 1) => None,
        (Base::Liu4, 2) => Some((&RULE_SETS[5], 0)),
        (base, _) => Some((rule, base.nu())),
    }
}

/// Cell visited at step `index` of `build_curve(nu, n, kernel)`, without
/// building the curve.
pub fn index_to_xy(
    nu: u8,
    n: u32,
    kernel: &KernelSpec,
    index: u64,
) -> Result<GridPoint, BuildError> {
    let side = check_args(nu, n, kernel)?;
    let len = u64::from(side) * u64::from(side);
    if index >= len {
        return Err(BuildError::IndexOutOfRange { index, len });
    }
    Ok(locate(nu, n, kernel, index, side))
}

fn locate(nu: u8, n: u32, kernel: &KernelSpec, index: u64, side: u32) -> GridPoint {
    let Some((rule, base_nu)) = level(nu, n) else {
        return kernel.path().cells()[index as usize];
    };
    let half = side / 2;
    let quarter = u64::from(half) * u64::from(half);
    let map = &rule.maps[(index / quarter) as usize];
    let mut local = index % quarter;
    if map.reversed {
        local = quarter - 1 - local;
    }
    map.apply_point(locate(base_nu, n - 1, kernel, local, half), half)
}

/// Step at which `build_curve(nu, n, kernel)` visits `point`.
pub fn xy_to_index(
    nu: u8,
    n: u32,
    kernel: &KernelSpec,
    point: GridPoint,
) -> Result<u64, BuildError> {
    let side = check_args(nu, n, kernel)?;
    if point.x >= side || point.y >= side {
        return Err(BuildError::PointOutOfRange { point, side });
    }
    Ok(position(nu, n, kernel, point, side))
}

fn position(nu: u8, n: u32, kernel: &KernelSpec, point: GridPoint, side: u32) -> u64 {
    let Some((rule, base_nu)) = level(nu, n) else {
        return kernel
            .path()
            .cells()
            .iter()
            .position(|&c| c == point)
            .expect("kernel covers its grid") as u64;
    };
    let half = side / 2;
    let quarter = u64::from(half) * u64::from(half);
    let quadrant = Quadrant::of(point, side);
    let (j, map) = rule
        .maps
        .iter()
        .enumerate()
        .find(|(_, m)| m.quadrant() == quadrant)
        .expect("rule set covers every quadrant");
    let mut local = position(base_nu, n - 1, kernel, map.unapply_point(point, half), half);
    if map.reversed {
        local = quarter - 1 - local;
    }
    j as u64 * quarter + local
}
