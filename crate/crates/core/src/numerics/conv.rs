//! Strided 1-D convolution used by the downsampling adapter.

use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;

use super::{uniform_matrix, uniform_vec, Matrix};
use crate::error::{CoreError, Result};

/// 1-D convolution with kernel width 2, stride 2, no padding: every pair of
/// consecutive frames collapses into one output frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Conv1dStride2 {
    pub in_dim: usize,
    pub out_dim: usize,
    /// Tap weights, each `(out_dim, in_dim)`: `weight[0]` multiplies the
    /// first frame of a pair, `weight[1]` the second.
    pub weight: [Matrix; 2],
    pub bias: Vec<f32>,
}

impl Conv1dStride2 {
    pub fn seeded(rng: &mut ChaCha8Rng, in_dim: usize, out_dim: usize) -> Self {
        Conv1dStride2 {
            in_dim,
            out_dim,
            weight: [uniform_matrix(rng, out_dim, in_dim), uniform_matrix(rng, out_dim, in_dim)],
            bias: uniform_vec(rng, out_dim),
        }
    }

    /// Kernel that sums the two frames of each pair (identity channel map).
    pub fn identity_summing(dim: usize) -> Self {
        let mut w0 = Matrix::zeros(dim, dim);
        let mut w1 = Matrix::zeros(dim, dim);
        for d in 0..dim {
            w0.set(d, d, 1.0);
            w1.set(d, d, 1.0);
        }
        Conv1dStride2 { in_dim: dim, out_dim: dim, weight: [w0, w1], bias: alloc::vec![0.0; dim] }
    }

    /// Convolve `x` (frames x in_dim); the frame count must be even and the
    /// output has exactly half as many frames.
    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.in_dim {
            return Err(CoreError::Shape(alloc::format!(
                "conv expects {} input channels, got {}",
                self.in_dim,
                x.cols()
            )));
        }
        if x.rows() % 2 != 0 {
            return Err(CoreError::Shape(alloc::format!(
                "stride-2 conv needs an even frame count, got {}",
                x.rows()
            )));
        }
        let out_frames = x.rows() / 2;
        let mut out = Matrix::zeros(out_frames, self.out_dim);
        for t in 0..out_frames {
            let f0 = x.row(2 * t);
            let f1 = x.row(2 * t + 1);
            let or = out.row_mut(t);
            for (o, out_v) in or.iter_mut().enumerate() {
                *out_v = self.bias[o]
                    + super::dot(f0, self.weight[0].row(o))
                    + super::dot(f1, self.weight[1].row(o));
            }
        }
        Ok(out)
    }
}
