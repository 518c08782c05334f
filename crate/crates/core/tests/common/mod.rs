//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use hhck::{CurvePath, GridPoint};

/// Classical iterative Hilbert index-to-cell mapping on a `side × side` grid.
pub fn hilbert_d2xy(side: u64, d: u64) -> (u64, u64) {
    let (mut x, mut y, mut t) = (0u64, 0u64, d);
    let mut s = 1;
    while s < side {
        let rx = 1 & (t / 2);
        let ry = 1 & (t ^ rx);
        if ry == 0 {
            if rx == 1 {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        x += s * rx;
        y += s * ry;
        t /= 4;
        s *= 2;
    }
    (x, y)
}

/// Difference map by direct enumeration in floating point, row-major.
pub fn naive_difference_map(path: &CurvePath, fixed_eight: bool) -> Vec<f64> {
    let side = path.side() as i64;
    let mut label = vec![0i64; (side * side) as usize];
    for (i, c) in path.cells().iter().enumerate() {
        label[(c.y as i64 * side + c.x as i64) as usize] = i as i64;
    }
    let mut out = Vec::with_capacity(label.len());
    for y in 0..side {
        for x in 0..side {
            let (mut sum, mut count) = (0i64, 0i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if (dx, dy) != (0, 0) && (0..side).contains(&nx) && (0..side).contains(&ny) {
                        sum += (label[(y * side + x) as usize] - label[(ny * side + nx) as usize])
                            .abs();
                        count += 1;
                    }
                }
            }
            out.push(sum as f64 / if fixed_eight { 8.0 } else { count as f64 });
        }
    }
    out
}

/// Dilation factor over all pairs, no pruning.
pub fn brute_force_dilation(path: &CurvePath) -> f64 {
    let c = path.cells();
    let mut best = 0.0f64;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            best = best.max(c[i].dist2(c[j]) as f64 / (j - i) as f64);
        }
    }
    best
}

/// Whether every block of `len / 4^k` consecutive cells fills one aligned
/// square, for all block sides down to `min_side`.
pub fn is_nested(path: &CurvePath, min_side: u32) -> bool {
    let cells = path.cells();
    let mut block_side = path.side() / 2;
    while block_side >= min_side {
        let block_len = (block_side as usize).pow(2);
        for block in cells.chunks(block_len) {
            let corner = |p: &GridPoint| (p.x / block_side, p.y / block_side);
            if block.iter().any(|p| corner(p) != corner(&block[0])) {
                return false;
            }
        }
        block_side /= 2;
    }
    true
}
