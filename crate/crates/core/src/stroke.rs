//! The eight-letter stroke alphabet and stroke strings.
//!
//! Axial strokes move to an edge neighbour, diagonal strokes to a corner
//! neighbour. The diagonal letters are `α` (right-up), `β` (right-down),
//! `γ` (left-down) and `θ` (left-up). In text they are written with the
//! ASCII names `a b g t`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::curve::{CurvePath, GridPoint, PathError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stroke {
    Up,
    Right,
    Down,
    Left,
    Alpha,
    Beta,
    Gamma,
    Theta,
}

impl Stroke {
    pub const ALL: [Stroke; 8] = [
        Stroke::Up,
        Stroke::Right,
        Stroke::Down,
        Stroke::Left,
        Stroke::Alpha,
        Stroke::Beta,
        Stroke::Gamma,
        Stroke::Theta,
    ];

    pub const fn delta(self) -> (i32, i32) {
        match self {
            Stroke::Up => (0, 1),
            Stroke::Right => (1, 0),
            Stroke::Down => (0, -1),
            Stroke::Left => (-1, 0),
            Stroke::Alpha => (1, 1),
            Stroke::Beta => (1, -1),
            Stroke::Gamma => (-1, -1),
            Stroke::Theta => (-1, 1),
        }
    }

    pub fn from_delta(dx: i64, dy: i64) -> Option<Stroke> {
        Stroke::ALL
            .into_iter()
            .find(|s| s.delta() == (dx as i32, dy as i32) && dx.abs() <= 1 && dy.abs() <= 1)
    }

    /// The stroke walking the same step backwards.
    pub const fn opposite(self) -> Stroke {
        match self {
            Stroke::Up => Stroke::Down,
            Stroke::Down => Stroke::Up,
            Stroke::Right => Stroke::Left,
            Stroke::Left => Stroke::Right,
            Stroke::Alpha => Stroke::Gamma,
            Stroke::Gamma => Stroke::Alpha,
            Stroke::Beta => Stroke::Theta,
            Stroke::Theta => Stroke::Beta,
        }
    }

    pub const fn is_diagonal(self) -> bool {
        matches!(
            self,
            Stroke::Alpha | Stroke::Beta | Stroke::Gamma | Stroke::Theta
        )
    }

    pub const fn ascii(self) -> char {
        match self {
            Stroke::Up => 'u',
            Stroke::Right => 'r',
            Stroke::Down => 'd',
            Stroke::Left => 'l',
            Stroke::Alpha => 'a',
            Stroke::Beta => 'b',
            Stroke::Gamma => 'g',
            Stroke::Theta => 't',
        }
    }

    pub fn from_ascii(c: char) -> Option<Stroke> {
        Stroke::ALL.into_iter().find(|s| s.ascii() == c)
    }

    pub const fn symbol(self) -> char {
        match self {
            Stroke::Alpha => 'α',
            Stroke::Beta => 'β',
            Stroke::Gamma => 'γ',
            Stroke::Theta => 'θ',
            s => s.ascii(),
        }
    }
}

impl fmt::Display for Stroke {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrokeParseError {
    #[error("unknown stroke letter {letter:?} at position {position}")]
    UnknownLetter { letter: char, position: usize },
}

/// Parses whitespace-separated or packed ASCII letters, e.g. `"u r d"` or `"urd"`.
pub fn parse_strokes(text: &str) -> Result<Vec<Stroke>, StrokeParseError> {
    text.chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(position, letter)| {
            Stroke::from_ascii(letter).ok_or(StrokeParseError::UnknownLetter { letter, position })
        })
        .collect()
}

/// A start cell and a sequence of strokes walked from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrokeString {
    pub origin: GridPoint,
    pub strokes: Vec<Stroke>,
}

impl StrokeString {
    pub fn new(origin: GridPoint, strokes: Vec<Stroke>) -> Self {
        Self { origin, strokes }
    }

    /// Places the strokes so that the walk's bounding box starts at `(0, 0)`.
    pub fn anchored(strokes: Vec<Stroke>) -> Self {
        let (mut x, mut y, mut min_x, mut min_y) = (0i64, 0i64, 0i64, 0i64);
        for s in &strokes {
            let (dx, dy) = s.delta();
            x += i64::from(dx);
            y += i64::from(dy);
            min_x = min_x.min(x);
            min_y = min_y.min(y);
        }
        Self {
            origin: GridPoint::new((-min_x) as u32, (-min_y) as u32),
            strokes,
        }
    }

    /// Reads the strokes between consecutive cells.
    pub fn from_cells(cells: &[GridPoint]) -> Result<Self, PathError> {
        let origin = cells.first().copied().unwrap_or_default();
        let strokes = cells
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (dx, dy) = w[0].delta(w[1]);
                Stroke::from_delta(dx, dy).ok_or(PathError::NonAdjacentStep {
                    step: i + 1,
                    from: w[0],
                    to: w[1],
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { origin, strokes })
    }

    pub fn len(&self) -> usize {
        self.strokes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strokes.is_empty()
    }

    /// Walks the strokes inside a `side × side` grid, stopping at the first
    /// step that leaves the grid or revisits a cell. Does not require the
    /// walk to cover the grid.
    pub fn walk(&self, side: u32) -> Result<Vec<GridPoint>, PathError> {
        let area = side as usize * side as usize;
        let mut seen = vec![false; area];
        let mut cells = Vec::with_capacity(self.strokes.len() + 1);
        let (mut x, mut y) = (i64::from(self.origin.x), i64::from(self.origin.y));
        for step in 0..=self.strokes.len() {
            if step > 0 {
                let (dx, dy) = self.strokes[step - 1].delta();
                x += i64::from(dx);
                y += i64::from(dy);
            }
            if x < 0 || y < 0 || x >= i64::from(side) || y >= i64::from(side) {
                return Err(PathError::OutOfBounds { step, x, y, side });
            }
            let cell = GridPoint::new(x as u32, y as u32);
            let slot = &mut seen[y as usize * side as usize + x as usize];
            if *slot {
                return Err(PathError::RevisitedCell { step, cell });
            }
            *slot = true;
            cells.push(cell);
        }
        Ok(cells)
    }

    /// Converts a full-length stroke string (`side² − 1` strokes) to a path.
    pub fn to_path(&self, side: u32) -> Result<CurvePath, PathError> {
        if !side.is_power_of_two() {
            return Err(PathError::InvalidSide(u64::from(side)));
        }
        let expected = u64::from(side) * u64::from(side) - 1;
        if self.strokes.len() as u64 != expected {
            return Err(PathError::WrongLength {
                expected: expected + 1,
                found: self.strokes.len() as u64 + 1,
            });
        }
        let cells = self.walk(side)?;
        Ok(CurvePath::from_trusted(side, cells))
    }

    /// Cell reached after the last stroke.
    pub fn end(&self) -> (i64, i64) {
        self.strokes.iter().fold(
            (i64::from(self.origin.x), i64::from(self.origin.y)),
            |(x, y), s| {
                let (dx, dy) = s.delta();
                (x + i64::from(dx), y + i64::from(dy))
            },
        )
    }

    /// The string of the reversed path: strokes in reverse order, each
    /// replaced by its opposite, starting from the old end cell.
    pub fn reversed(&self) -> StrokeString {
        let (ex, ey) = self.end();
        StrokeString {
            origin: GridPoint::new(ex as u32, ey as u32),
            strokes: reverse_flip(&self.strokes),
        }
    }

    /// ASCII letters separated by single spaces.
    pub fn letters(&self) -> String {
        let mut out = String::with_capacity(self.strokes.len() * 2);
        for (i, s) in self.strokes.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push(s.ascii());
        }
        out
    }
}

fn reverse_flip(strokes: &[Stroke]) -> Vec<Stroke> {
    strokes.iter().rev().map(|s| s.opposite()).collect()
}

impl FromStr for StrokeString {
    type Err = StrokeParseError;

    /// Parses letters only; the origin is `(0, 0)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(StrokeString::new(GridPoint::default(), parse_strokes(s)?))
    }
}

impl fmt::Display for StrokeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.origin, self.letters())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: u32, y: u32) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn walks_order_one_hilbert() {
        let s: StrokeString = "u r d".parse().unwrap();
        let path = s.to_path(2).unwrap();
        assert_eq!(path.cells(), &[p(0, 0), p(0, 1), p(1, 1), p(1, 0)]);
        assert_eq!(path.to_strokes(), s);
    }

    #[test]
    fn single_diagonal() {
        let s: StrokeString = "a".parse().unwrap();
        assert_eq!(s.walk(2).unwrap(), vec![p(0, 0), p(1, 1)]);
        assert!(matches!(
            s.to_path(2),
            Err(PathError::WrongLength {
                expected: 4,
                found: 2
            })
        ));
        assert_eq!(StrokeString::from_cells(&[p(0, 0), p(1, 1)]).unwrap(), s);
    }

    #[test]
    fn leaving_the_grid() {
        let s: StrokeString = "u u".parse().unwrap();
        assert!(matches!(
            s.walk(2),
            Err(PathError::OutOfBounds { step: 2, .. })
        ));
        let s: StrokeString = "u u r".parse().unwrap();
        assert!(matches!(s.to_path(2), Err(PathError::OutOfBounds { .. })));
    }

    #[test]
    fn revisit_is_reported() {
        let s: StrokeString = "u d r".parse().unwrap();
        assert!(matches!(
            s.to_path(2),
            Err(PathError::RevisitedCell { step: 2, .. })
        ));
    }

    #[test]
    fn reversal_flips_letters() {
        let s: StrokeString = "u r d".parse().unwrap();
        let r = s.reversed();
        assert_eq!(r.origin, p(1, 0));
        assert_eq!(r.letters(), "u l d");
        assert_eq!(r.reversed(), s);
    }

    #[test]
    fn opposite_pairs() {
        for s in Stroke::ALL {
            let (dx, dy) = s.delta();
            assert_eq!(s.opposite().delta(), (-dx, -dy));
            assert_eq!(s.opposite().opposite(), s);
        }
        assert_eq!(Stroke::Theta.delta(), (-1, 1));
    }

    #[test]
    fn anchoring_uses_bounding_box() {
        let s = StrokeString::anchored(vec![Stroke::Left, Stroke::Down, Stroke::Right]);
        assert_eq!(s.origin, p(1, 1));
        assert!(s.walk(2).is_ok());
    }

    #[test]
    fn rejects_unknown_letters() {
        assert_eq!(
            parse_strokes("u x"),
            Err(StrokeParseError::UnknownLetter {
                letter: 'x',
                position: 2
            })
        );
        assert_eq!(parse_strokes("urdlabgt").unwrap(), Stroke::ALL.to_vec());
    }
}
