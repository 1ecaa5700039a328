//! Rotary positional embedding.
//!
//! Keys and queries are rotated pairwise: dimensions (2k, 2k+1) of a head
//! vector at position p turn by angle `p * base^(-2k / head_dim)`. Attention
//! scores between rotated vectors depend only on the position difference,
//! which is what lets cached pre-rotation keys be re-positioned freely.

use alloc::string::ToString;
use alloc::vec::Vec;

use super::Matrix;
use crate::error::{CoreError, Result};

/// Precomputed sin/cos per (position, dimension pair).
#[derive(Debug, Clone)]
pub struct RotaryTable {
    head_dim: usize,
    base: f32,
    max_pos: usize,
    /// sin/cos interleaved per pair: entry `(pos * half + k)`.
    sin: Vec<f32>,
    cos: Vec<f32>,
}

impl RotaryTable {
    /// Table for positions `0..max_pos`; `head_dim` must be even.
    ///
    /// Angles are computed in f64 and truncated to f32 so large positions
    /// stay accurate.
    pub fn new(head_dim: usize, base: f32, max_pos: usize) -> Result<Self> {
        if head_dim == 0 || head_dim % 2 != 0 {
            return Err(CoreError::Config(alloc::format!(
                "rotary head_dim must be even and nonzero, got {head_dim}"
            )));
        }
        let half = head_dim / 2;
        let mut sin = Vec::with_capacity(max_pos * half);
        let mut cos = Vec::with_capacity(max_pos * half);
        for pos in 0..max_pos {
            for k in 0..half {
                let freq = libm::pow(base as f64, -2.0 * k as f64 / head_dim as f64);
                let angle = pos as f64 * freq;
                sin.push(libm::sin(angle) as f32);
                cos.push(libm::cos(angle) as f32);
            }
        }
        Ok(RotaryTable { head_dim, base, max_pos, sin, cos })
    }

    /// Conventional table with base 10000.
    pub fn with_default_base(head_dim: usize, max_pos: usize) -> Result<Self> {
        Self::new(head_dim, 10_000.0, max_pos)
    }

    pub fn head_dim(&self) -> usize {
        self.head_dim
    }

    pub fn base(&self) -> f32 {
        self.base
    }

    pub fn max_pos(&self) -> usize {
        self.max_pos
    }

    #[inline]
    fn pair(&self, pos: usize, k: usize) -> (f32, f32) {
        let idx = pos * (self.head_dim / 2) + k;
        (self.sin[idx], self.cos[idx])
    }
}

/// Rotate every row of `x` (one head vector per row) by its position.
///
/// Row norms are preserved and position 0 is the identity.
pub fn rope_apply(x: &Matrix, positions: &[usize], table: &RotaryTable) -> Result<Matrix> {
    if x.cols() != table.head_dim() {
        return Err(CoreError::Config(alloc::format!(
            "rope_apply expects head_dim {}, got {} columns",
            table.head_dim(),
            x.cols()
        )));
    }
    if positions.len() != x.rows() {
        return Err(CoreError::Shape("one position per row required".to_string()));
    }
    let mut out = x.clone();
    rope_rotate_rows_in_place(out.data_mut(), x.cols(), 0, table.head_dim(), positions, table)?;
    Ok(out)
}

/// Rotate the `head_dim`-wide column band starting at `col_offset` of each
/// row in the row-major buffer `data` (row stride `cols`). This is the
/// kernel behind [`rope_apply`]; multi-head layers call it once per head to
/// avoid reshaping.
pub fn rope_rotate_rows_in_place(
    data: &mut [f32],
    cols: usize,
    col_offset: usize,
    head_dim: usize,
    positions: &[usize],
    table: &RotaryTable,
) -> Result<()> {
    debug_assert_eq!(head_dim, table.head_dim());
    let rows = data.len() / cols;
    debug_assert_eq!(positions.len(), rows);
    for (r, &pos) in positions.iter().enumerate() {
        if pos >= table.max_pos() {
            return Err(CoreError::Capacity(alloc::format!(
                "position {pos} exceeds rotary table capacity {}",
                table.max_pos()
            )));
        }
        let row = &mut data[r * cols + col_offset..r * cols + col_offset + head_dim];
        for k in 0..head_dim / 2 {
            let (s, c) = table.pair(pos, k);
            let a = row[2 * k];
            let b = row[2 * k + 1];
            row[2 * k] = a * c - b * s;
            row[2 * k + 1] = a * s + b * c;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{dot, norm, seeded_rng, uniform_matrix};
    use alloc::vec;

    fn table(max_pos: usize) -> RotaryTable {
        RotaryTable::with_default_base(8, max_pos).unwrap()
    }

    #[test]
    fn odd_head_dim_is_config_error() {
        assert!(matches!(RotaryTable::new(7, 10_000.0, 4), Err(CoreError::Config(_))));
    }

    #[test]
    fn position_zero_is_identity() {
        let t = table(4);
        let x = uniform_matrix(&mut seeded_rng(3), 5, 8);
        let y = rope_apply(&x, &[0; 5], &t).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn rotation_preserves_row_norm() {
        let t = table(16);
        let x = uniform_matrix(&mut seeded_rng(4), 1, 8);
        let y = rope_apply(&x, &[7], &t).unwrap();
        assert!((norm(x.row(0)) - norm(y.row(0))).abs() < 1e-6);
    }

    #[test]
    fn scores_depend_only_on_relative_position() {
        // dot(rope(q,5), rope(k,3)) == dot(rope(q,9), rope(k,7))
        let t = table(2100);
        let q = uniform_matrix(&mut seeded_rng(5), 1, 8);
        let k = uniform_matrix(&mut seeded_rng(6), 1, 8);
        let score = |pq: usize, pk: usize| {
            let rq = rope_apply(&q, &[pq], &t).unwrap();
            let rk = rope_apply(&k, &[pk], &t).unwrap();
            dot(rq.row(0), rk.row(0))
        };
        assert!((score(5, 3) - score(9, 7)).abs() < 1e-5);
        for delta in [1usize, 10, 1000] {
            assert!((score(5, 3) - score(5 + delta, 3 + delta)).abs() < 1e-5);
        }
    }

    #[test]
    fn position_beyond_table_is_capacity_error() {
        let t = table(4);
        let x = uniform_matrix(&mut seeded_rng(7), 1, 8);
        assert!(matches!(rope_apply(&x, &[4], &t), Err(CoreError::Capacity(_))));
    }

    #[test]
    fn table_entries_are_unit_circle_points() {
        let t = table(64);
        for pos in 0..64 {
            for k in 0..4 {
                let (s, c) = t.pair(pos, k);
                assert!((s * s + c * c - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn strided_kernel_matches_per_head_apply() {
        // Rotating the second head of a 2-head row equals extracting it,
        // rotating, and writing back.
        let t = table(32);
        let x = uniform_matrix(&mut seeded_rng(8), 3, 16);
        let positions = vec![2usize, 9, 30];

        let mut strided = x.clone();
        rope_rotate_rows_in_place(strided.data_mut(), 16, 8, 8, &positions, &t).unwrap();

        let mut head = Matrix::zeros(3, 8);
        for r in 0..3 {
            head.row_mut(r).copy_from_slice(&x.row(r)[8..16]);
        }
        let rotated = rope_apply(&head, &positions, &t).unwrap();
        for r in 0..3 {
            assert_eq!(&strided.row(r)[..8], &x.row(r)[..8]);
            assert_eq!(&strided.row(r)[8..16], rotated.row(r));
        }
    }
}
