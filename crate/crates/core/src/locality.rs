//! Locality measures of a curve.
//!
//! All reductions run on exact integers: difference-map values are kept as
//! multiples of `1/120` (120 is divisible by every possible neighbour
//! count 3, 5 and 8), so results do not depend on summation order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::curve::{CurvePath, GridPoint};

/// Exact non-negative rational.
pub type Rational = Ratio<u64>;

/// Difference-map values are stored in units of `1/SCALE`.
pub const SCALE: u64 = 120;

/// Largest Δindex a pair can have before its ratio falls below `best`.
fn band_limit(max_d2: u64, best: Rational) -> u64 {
    // d²/Δ ≤ max_d2/Δ ≤ best  ⇔  Δ ≥ max_d2·den/num
    ((u128::from(max_d2) * u128::from(*best.denom())) / u128::from(*best.numer())) as u64
}

/// Largest `‖f(t) − f(s)‖² / |t − s|` over all pairs of cells, with the
/// witnessing pair of curve indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dilation {
    pub value: Rational,
    pub i: u64,
    pub j: u64,
}

/// Dilation factor of a finite curve.
///
/// Cells map to their centres in the unit square and steps to the centres
/// of `1/N` parameter intervals, so the ratio reduces to `d² / Δindex` in
/// cell units. Pairs are scanned by increasing `Δindex`; the scan stops
/// once even the grid diameter cannot beat the current maximum.
pub fn dilation_factor(path: &CurvePath) -> Dilation {
    let cells = path.cells();
    let n = cells.len() as u64;
    let mut best = Dilation {
        value: Rational::new(0, 1),
        i: 0,
        j: 0,
    };
    if n < 2 {
        return best;
    }
    let max_d2 = 2 * u64::from(path.side() - 1).pow(2);
    const BLOCK: u64 = 64;
    let mut gap = 1u64;
    while gap < n {
        if best.value > Rational::new(0, 1) && gap > band_limit(max_d2, best.value) {
            break;
        }
        let end = (gap + BLOCK).min(n);
        let block_best = (gap..end)
            .into_par_iter()
            .map(|g| best_at_gap(cells, g))
            .reduce_with(better)
            .expect("non-empty block");
        best = better(best, block_best);
        gap = end;
    }
    best
}

fn best_at_gap(cells: &[GridPoint], gap: u64) -> Dilation {
    let g = gap as usize;
    let (mut top, mut at) = (0u64, 0usize);
    for (i, (a, b)) in cells.iter().zip(&cells[g..]).enumerate() {
        let d2 = a.dist2(*b);
        if d2 > top {
            top = d2;
            at = i;
        }
    }
    Dilation {
        value: Rational::new(top, gap),
        i: at as u64,
        j: (at + g) as u64,
    }
}

/// Larger ratio wins; ties go to the smaller gap, then the smaller index.
fn better(a: Dilation, b: Dilation) -> Dilation {
    let key = |d: &Dilation| {
        (
            d.value,
            std::cmp::Reverse(d.j - d.i),
            std::cmp::Reverse(d.i),
        )
    };
    if key(&b) > key(&a) {
        b
    } else {
        a
    }
}

/// Which cells enter the statistics and what a border cell is divided by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// Mean over the neighbours that exist (3, 5 or 8).
    ExistingNeighbors,
    /// Sum over existing neighbours divided by 8 everywhere.
    FixedEight,
    /// Statistics over cells with a complete 8-neighbourhood only; border
    /// cells keep the existing-neighbour mean for display.
    #[default]
    InteriorOnly,
}

impl Convention {
    pub const ALL: [Convention; 3] = [
        Convention::ExistingNeighbors,
        Convention::FixedEight,
        Convention::InteriorOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Convention::ExistingNeighbors => "existing",
            Convention::FixedEight => "fixed8",
            Convention::InteriorOnly => "interior",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Convention::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown convention {s:?} (existing, fixed8, interior)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalityError {
    #[error("EmptyDomain: no {convention} cells on a {side}x{side} grid")]
    EmptyDomain { side: u32, convention: Convention },
    #[error("GridTooSmall: side {0} has no quadrant boundary")]
    GridTooSmall(u32),
}

/// Per-cell mean absolute label difference to the 8-neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceMap {
    side: u32,
    convention: Convention,
    /// Σ |label − neighbour label|, row-major.
    sums: Vec<u64>,
    /// Number of neighbours inside the grid.
    counts: Vec<u8>,
}

/// Builds the difference map of a curve.
pub fn difference_map(path: &CurvePath, convention: Convention) -> DifferenceMap {
    let side = path.side() as usize;
    let labels = path.labels();
    let rows: Vec<(Vec<u64>, Vec<u8>)> = (0..side)
        .into_par_iter()
        .map(|y| {
            let mut sums = vec![0u64; side];
            let mut counts = vec![0u8; side];
            for x in 0..side {
                let here = labels[y * side + x];
                for ny in y.saturating_sub(1)..=(y + 1).min(side - 1) {
                    for nx in x.saturating_sub(1)..=(x + 1).min(side - 1) {
                        if (nx, ny) != (x, y) {
                            sums[x] += here.abs_diff(labels[ny * side + nx]);
                            counts[x] += 1;
                        }
                    }
                }
            }
            (sums, counts)
        })
        .collect();
    let (mut sums, mut counts) = (
        Vec::with_capacity(side * side),
        Vec::with_capacity(side * side),
    );
    for (s, c) in rows {
        sums.extend(s);
        counts.extend(c);
    }
    DifferenceMap {
        side: path.side(),
        convention,
        sums,
        counts,
    }
}

impl DifferenceMap {
    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.side as usize + x as usize
    }

    fn divisor(&self, i: usize) -> u64 {
        match self.convention {
            Convention::FixedEight => 8,
            _ => u64::from(self.counts[i]),
        }
    }

    /// Value in units of `1/SCALE`.
    pub fn scaled_at(&self, i: usize) -> u64 {
        self.sums[i] * (SCALE / self.divisor(i))
    }

    pub fn value(&self, x: u32, y: u32) -> Rational {
        let i = self.index(x, y);
        Rational::new(self.sums[i], self.divisor(i))
    }

    /// Whether the cell contributes to the statistics.
    pub fn in_domain(&self, x: u32, y: u32) -> bool {
        self.convention != Convention::InteriorOnly || self.counts[self.index(x, y)] == 8
    }

    /// Scaled values of the cells that contribute to the statistics.
    pub fn domain_values(&self) -> Vec<u64> {
        (0..self.sums.len())
            .filter(|&i| self.convention != Convention::InteriorOnly || self.counts[i] == 8)
            .map(|i| self.scaled_at(i))
            .collect()
    }

    /// All scaled values, row-major.
    pub fn scaled_values(&self) -> Vec<u64> {
        (0..self.sums.len()).map(|i| self.scaled_at(i)).collect()
    }
}

/// Summary statistics of a difference map.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffStats {
    pub mean: Rational,
    pub max: Rational,
    pub min: Rational,
    pub median: Rational,
    /// Shannon entropy of the exact value distribution, in bits.
    pub entropy_bits: f64,
    pub pct_below_mean: Rational,
    /// Population standard deviation.
    pub stddev: f64,
    pub cells: u64,
}

impl DiffStats {
    /// Statistics of values given in units of `1/SCALE`.
    pub fn from_scaled(values: &[u64]) -> Option<DiffStats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as u64;
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        let total: u64 = sorted.iter().sum();
        let sq: u128 = sorted.iter().map(|&v| u128::from(v) * u128::from(v)).sum();
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            Rational::new(sorted[mid], SCALE)
        } else {
            Rational::new(sorted[mid - 1] + sorted[mid], 2 * SCALE)
        };
        let below = sorted
            .iter()
            .take_while(|&&v| u128::from(v) * u128::from(n) < u128::from(total))
            .count() as u64;

        let mut freq: BTreeMap<u64, u64> = BTreeMap::new();
        for &v in &sorted {
            *freq.entry(v).or_default() += 1;
        }
        let entropy_bits = freq
            .values()
            .map(|&c| {
                let p = c as f64 / n as f64;
                -p * p.log2()
            })
            .sum::<f64>()
            .max(0.0);

        let n128 = u128::from(n);
        let var_num = n128 * sq - u128::from(total) * u128::from(total);
        let stddev = (var_num as f64).sqrt() / (n as f64 * SCALE as f64);

        Some(DiffStats {
            mean: Rational::new(total, SCALE * n),
            max: Rational::new(sorted[sorted.len() - 1], SCALE),
            min: Rational::new(sorted[0], SCALE),
            median,
            entropy_bits,
            pct_below_mean: Rational::new(100 * below, n),
            stddev,
            cells: n,
        })
    }
}

/// Statistics over the map's domain (see [`Convention`]).
pub fn diff_stats(map: &DifferenceMap) -> Result<DiffStats, LocalityError> {
    DiffStats::from_scaled(&map.domain_values()).ok_or(LocalityError::EmptyDomain {
        side: map.side,
        convention: map.convention,
    })
}

/// Cells whose value exceeds the domain mean plus one population standard
/// deviation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrierMask {
    side: u32,
    flags: Vec<bool>,
}

impl BarrierMask {
    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn is_flagged(&self, x: u32, y: u32) -> bool {
        self.flags[y as usize * self.side as usize + x as usize]
    }

    pub fn flagged_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }
}

/// Flags cells above `mean + stddev`, compared exactly:
/// `v > m + σ  ⇔  N·v − S > 0  ∧  (N·v − S)² > N·Q − S²`.
pub fn barrier_mask(map: &DifferenceMap) -> Result<BarrierMask, LocalityError> {
    let domain = map.domain_values();
    if domain.is_empty() {
        return Err(LocalityError::EmptyDomain {
            side: map.side,
            convention: map.convention,
        });
    }
    let n = domain.len() as i128;
    let s: i128 = domain.iter().map(|&v| i128::from(v)).sum();
    let q: i128 = domain.iter().map(|&v| i128::from(v) * i128::from(v)).sum();
    let var_num = n * q - s * s;
    let flags = map
        .scaled_values()
        .into_iter()
        .map(|v| {
            let above = n * i128::from(v) - s;
            above > 0 && above * above > var_num
        })
        .collect();
    Ok(BarrierMask {
        side: map.side,
        flags,
    })
}

/// Mean of the two cell columns beside the vertical centre line, one value
/// per row, from the top row down: the first half follows the `q₂→q₃`
/// boundary, the second half the `q₄→q₁` boundary.
pub fn boundary_profile(map: &DifferenceMap) -> Result<Vec<Rational>, LocalityError> {
    let side = map.side;
    if side < 2 {
        return Err(LocalityError::GridTooSmall(side));
    }
    let h = side / 2;
    Ok((0..side)
        .rev()
        .map(|y| (map.value(h - 1, y) + map.value(h, y)) / 2)
        .collect())
}

/// One of the four half-lines separating the quadrants, named by the
/// quadrants it separates in visiting order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Left half of the horizontal centre line.
    Q1Q2,
    /// Upper half of the vertical centre line.
    Q2Q3,
    /// Right half of the horizontal centre line.
    Q3Q4,
    /// Lower half of the vertical centre line.
    Q4Q1,
}

impl Boundary {
    pub const ALL: [Boundary; 4] = [
        Boundary::Q1Q2,
        Boundary::Q2Q3,
        Boundary::Q3Q4,
        Boundary::Q4Q1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Q1Q2 => "1-2",
            Boundary::Q2Q3 => "2-3",
            Boundary::Q3Q4 => "3-4",
            Boundary::Q4Q1 => "4-1",
        }
    }

    /// The two cells facing each other across position `k` of the boundary.
    fn cells(self, side: u32, k: u32) -> [GridPoint; 2] {
        let h = side / 2;
        match self {
            Boundary::Q1Q2 => [GridPoint::new(k, h - 1), GridPoint::new(k, h)],
            Boundary::Q3Q4 => [GridPoint::new(h + k, h - 1), GridPoint::new(h + k, h)],
            Boundary::Q2Q3 => [GridPoint::new(h - 1, h + k), GridPoint::new(h, h + k)],
            Boundary::Q4Q1 => [GridPoint::new(h - 1, k), GridPoint::new(h, k)],
        }
    }
}

/// How much of a quadrant boundary the barrier covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryBarrier {
    pub boundary: Boundary,
    /// Positions along the boundary (`side / 2` of them).
    pub length: u32,
    /// Positions where either facing cell is flagged.
    pub flagged: u32,
    /// Longest stretch of consecutive flagged positions.
    pub longest_run: u32,
}

impl BoundaryBarrier {
    pub fn fraction(&self) -> Rational {
        Rational::new(u64::from(self.flagged), u64::from(self.length))
    }
}

/// Barrier coverage along each of the four quadrant boundaries.
pub fn boundary_barriers(mask: &BarrierMask) -> Result<[BoundaryBarrier; 4], LocalityError> {
    let side = mask.side;
    if side < 2 {
        return Err(LocalityError::GridTooSmall(side));
    }
    let length = side / 2;
    Ok(Boundary::ALL.map(|boundary| {
        let (mut flagged, mut run, mut longest_run) = (0, 0, 0);
        for k in 0..length {
            let hit = boundary
                .cells(side, k)
                .iter()
                .any(|c| mask.is_flagged(c.x, c.y));
            if hit {
                flagged += 1;
                run += 1;
                longest_run = longest_run.max(run);
            } else {
                run = 0;
            }
        }
        BoundaryBarrier {
            boundary,
            length,
            flagged,
            longest_run,
        }
    }))
}

/// 8-connected components of flagged cells, each sorted, largest first.
pub fn barrier_components(mask: &BarrierMask) -> Vec<Vec<GridPoint>> {
    let side = mask.side as usize;
    let mut seen = vec![false; mask.flags.len()];
    let mut components = Vec::new();
    for start in 0..mask.flags.len() {
        if !mask.flags[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(i) = stack.pop() {
            let (x, y) = (i % side, i / side);
            comp.push(GridPoint::new(x as u32, y as u32));
            for ny in y.saturating_sub(1)..=(y + 1).min(side - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(side - 1) {
                    let j = ny * side + nx;
                    if mask.flags[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        comp.sort();
        components.push(comp);
    }
    components.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelSpec;

    fn unit_map(c: Convention) -> DifferenceMap {
        difference_map(KernelSpec::unit().path(), c)
    }

    #[test]
    fn order_one_dilation_is_one() {
        let d = dilation_factor(KernelSpec::unit().path());
        assert_eq!(d.value, Rational::from_integer(1));
        assert_eq!((d.i, d.j), (0, 1));
    }

    #[test]
    fn order_one_map_by_hand() {
        let m = unit_map(Convention::ExistingNeighbors);
        // labels: (0,0)=0 (0,1)=1 (1,1)=2 (1,0)=3
        assert_eq!(m.value(0, 0), Rational::new(6, 3));
        assert_eq!(m.value(1, 0), Rational::new(6, 3));
        assert_eq!(m.value(0, 1), Rational::new(4, 3));
        assert_eq!(m.value(1, 1), Rational::new(4, 3));
        let m8 = unit_map(Convention::FixedEight);
        assert_eq!(m8.value(0, 0), Rational::new(3, 4));
    }

    #[test]
    fn order_one_has_no_barrier() {
        // values 2, 2, 4/3, 4/3: mean 5/3, stddev 1/3, threshold 2
        let m = unit_map(Convention::ExistingNeighbors);
        let s = diff_stats(&m).unwrap();
        assert_eq!(s.mean, Rational::new(5, 3));
        assert!((s.stddev - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(barrier_mask(&m).unwrap().flagged_count(), 0);
    }

    #[test]
    fn interior_domain_of_order_one_is_empty() {
        let m = unit_map(Convention::InteriorOnly);
        assert!(matches!(
            diff_stats(&m),
            Err(LocalityError::EmptyDomain { .. })
        ));
    }

    #[test]
    fn constant_values() {
        let s = DiffStats::from_scaled(&[360; 10]).unwrap();
        assert_eq!(s.entropy_bits, 0.0);
        assert_eq!(s.pct_below_mean, Rational::from_integer(0));
        assert_eq!(s.median, Rational::from_integer(3));
        assert_eq!(s.stddev, 0.0);
        assert!(DiffStats::from_scaled(&[]).is_none());
    }

    #[test]
    fn two_value_distribution() {
        let s = DiffStats::from_scaled(&[120, 120, 120, 480]).unwrap();
        assert_eq!(s.mean, Rational::new(7, 4));
        assert_eq!(s.median, Rational::from_integer(1));
        assert_eq!(s.pct_below_mean, Rational::from_integer(75));
        let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((s.entropy_bits - h).abs() < 1e-12);
    }

    #[test]
    fn convention_names_round_trip() {
        for c in Convention::ALL {
            assert_eq!(c.name().parse::<Convention>().unwrap(), c);
        }
        assert!("eight".parse::<Convention>().is_err());
    }

    #[test]
    fn profile_length_is_side() {
        let path = crate::affine::build_curve(0, 3, &KernelSpec::unit()).unwrap();
        let m = difference_map(&path, Convention::default());
        assert_eq!(boundary_profile(&m).unwrap().len(), 8);
    }
}
