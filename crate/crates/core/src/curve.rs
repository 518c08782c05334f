//! Grid paths: the finite approximation of a space-filling curve.

use std::fmt;

use thiserror::Error;

use crate::stroke::StrokeString;

/// A cell of a square grid. `y` grows upward; `(0, 0)` is the lower-left cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
}

impl GridPoint {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    /// Displacement from `self` to `other`.
    pub fn delta(self, other: GridPoint) -> (i64, i64) {
        (
            i64::from(other.x) - i64::from(self.x),
            i64::from(other.y) - i64::from(self.y),
        )
    }

    /// Squared Euclidean distance in cell units.
    pub fn dist2(self, other: GridPoint) -> u64 {
        let (dx, dy) = self.delta(other);
        (dx * dx + dy * dy) as u64
    }

    /// True when the two cells touch by an edge or a corner.
    pub fn is_king_neighbor(self, other: GridPoint) -> bool {
        let (dx, dy) = self.delta(other);
        dx.abs() <= 1 && dy.abs() <= 1 && (dx, dy) != (0, 0)
    }

    /// True when the two cells share an edge.
    pub fn is_edge_neighbor(self, other: GridPoint) -> bool {
        let (dx, dy) = self.delta(other);
        dx.abs() + dy.abs() == 1
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("InvalidSide: grid side {0} is not a power of two")]
    InvalidSide(u64),
    #[error("WrongLength: expected {expected} cells, found {found}")]
    WrongLength { expected: u64, found: u64 },
    #[error("OutOfBounds: step {step} reaches ({x}, {y}) outside a {side}x{side} grid")]
    OutOfBounds {
        step: usize,
        x: i64,
        y: i64,
        side: u32,
    },
    #[error("RevisitedCell: step {step} revisits {cell}")]
    RevisitedCell { step: usize, cell: GridPoint },
    #[error("NonAdjacentStep: step {step} jumps from {from} to {to}")]
    NonAdjacentStep {
        step: usize,
        from: GridPoint,
        to: GridPoint,
    },
}

/// Ordered visit of every cell of a `side × side` grid, with consecutive
/// cells touching by an edge or a corner.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvePath {
    side: u32,
    cells: Vec<GridPoint>,
}

impl CurvePath {
    /// Checks every path invariant and wraps the cells.
    pub fn new(side: u32, cells: Vec<GridPoint>) -> Result<Self, PathError> {
        if !side.is_power_of_two() {
            return Err(PathError::InvalidSide(u64::from(side)));
        }
        let expected = u64::from(side) * u64::from(side);
        if cells.len() as u64 != expected {
            return Err(PathError::WrongLength {
                expected,
                found: cells.len() as u64,
            });
        }
        let mut seen = vec![false; cells.len()];
        for (step, &c) in cells.iter().enumerate() {
            if c.x >= side || c.y >= side {
                return Err(PathError::OutOfBounds {
                    step,
                    x: i64::from(c.x),
                    y: i64::from(c.y),
                    side,
                });
            }
            let slot = &mut seen[c.y as usize * side as usize + c.x as usize];
            if *slot {
                return Err(PathError::RevisitedCell { step, cell: c });
            }
            *slot = true;
            if step > 0 && !cells[step - 1].is_king_neighbor(c) {
                return Err(PathError::NonAdjacentStep {
                    step,
                    from: cells[step - 1],
                    to: c,
                });
            }
        }
        Ok(Self { side, cells })
    }

    pub(crate) fn from_trusted(side: u32, cells: Vec<GridPoint>) -> Self {
        debug_assert!(Self::new(side, cells.clone()).is_ok());
        Self { side, cells }
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn cells(&self) -> &[GridPoint] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn first(&self) -> GridPoint {
        self.cells[0]
    }

    pub fn last(&self) -> GridPoint {
        self.cells[self.cells.len() - 1]
    }

    pub fn into_cells(self) -> Vec<GridPoint> {
        self.cells
    }

    /// The same cells traversed backwards, exchanging entry and exit.
    pub fn reverse(&self) -> CurvePath {
        let mut cells = self.cells.clone();
        cells.reverse();
        CurvePath {
            side: self.side,
            cells,
        }
    }

    /// Curve index of every cell, row-major (`labels[y * side + x]`).
    pub fn labels(&self) -> Vec<u64> {
        let side = self.side as usize;
        let mut labels = vec![0u64; self.cells.len()];
        for (i, c) in self.cells.iter().enumerate() {
            labels[c.y as usize * side + c.x as usize] = i as u64;
        }
        labels
    }

    pub fn to_strokes(&self) -> StrokeString {
        StrokeString::from_cells(&self.cells).expect("CurvePath steps are king moves")
    }

    /// True when no step is diagonal.
    pub fn is_edge_connected(&self) -> bool {
        self.cells.windows(2).all(|w| w[0].is_edge_neighbor(w[1]))
    }
}
