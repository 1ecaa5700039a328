//! Scaled dot-product attention under arbitrary boolean masks.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::{softmax_in_place, Matrix};
use crate::error::{CoreError, Result};

/// Boolean attention grid: `allowed[q * key_len + k]` says whether query row
/// `q` may attend key row `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttentionMask {
    query_len: usize,
    key_len: usize,
    allowed: Vec<bool>,
}

impl AttentionMask {
    /// All-false mask to be filled in by the caller.
    pub fn disallow_all(query_len: usize, key_len: usize) -> Self {
        AttentionMask { query_len, key_len, allowed: vec![false; query_len * key_len] }
    }

    /// Fully bidirectional mask.
    pub fn allow_all(query_len: usize, key_len: usize) -> Self {
        AttentionMask { query_len, key_len, allowed: vec![true; query_len * key_len] }
    }

    /// Causal mask over a combined context: query `q` (placed after `offset`
    /// earlier keys) attends keys `0..=offset + q`.
    pub fn causal(query_len: usize, key_len: usize, offset: usize) -> Self {
        let mut m = Self::disallow_all(query_len, key_len);
        for q in 0..query_len {
            for k in 0..key_len.min(offset + q + 1) {
                m.set(q, k, true);
            }
        }
        m
    }

    pub fn query_len(&self) -> usize {
        self.query_len
    }

    pub fn key_len(&self) -> usize {
        self.key_len
    }

    pub fn allowed(&self, q: usize, k: usize) -> bool {
        self.allowed[q * self.key_len + k]
    }

    pub fn set(&mut self, q: usize, k: usize, allow: bool) {
        self.allowed[q * self.key_len + k] = allow;
    }

    /// Rows `start..start + len` as a standalone mask.
    pub fn slice_queries(&self, start: usize, len: usize) -> AttentionMask {
        AttentionMask {
            query_len: len,
            key_len: self.key_len,
            allowed: self.allowed[start * self.key_len..(start + len) * self.key_len].to_vec(),
        }
    }
}

/// Multi-head scaled dot-product attention over already-positioned q/k.
///
/// Softmax runs over allowed keys only; disallowed keys get exactly zero
/// weight. Column bands of width `cols / heads` are treated as heads.
pub fn masked_attention(
    q: &Matrix,
    k: &Matrix,
    v: &Matrix,
    mask: &AttentionMask,
    heads: usize,
) -> Result<Matrix> {
    let dim = q.cols();
    if k.cols() != dim || v.cols() != dim {
        return Err(CoreError::Shape("q/k/v feature dims differ".to_string()));
    }
    if k.rows() != v.rows() {
        return Err(CoreError::Shape("k and v row counts differ".to_string()));
    }
    if heads == 0 || dim % heads != 0 {
        return Err(CoreError::Config(alloc::format!(
            "feature dim {dim} not divisible by {heads} heads"
        )));
    }
    if mask.query_len() != q.rows() || mask.key_len() != k.rows() {
        return Err(CoreError::Shape(alloc::format!(
            "mask is {}x{}, attention is {}x{}",
            mask.query_len(),
            mask.key_len(),
            q.rows(),
            k.rows()
        )));
    }

    let head_dim = dim / heads;
    let scale = 1.0 / libm::sqrtf(head_dim as f32);
    let mut out = Matrix::zeros(q.rows(), dim);
    let mut scores = vec![0.0f32; k.rows()];

    for qi in 0..q.rows() {
        let allowed: Vec<usize> = (0..k.rows()).filter(|&ki| mask.allowed(qi, ki)).collect();
        if allowed.is_empty() {
            return Err(CoreError::Mask(alloc::format!("query row {qi} has no allowed key")));
        }
        for h in 0..heads {
            let band = h * head_dim..(h + 1) * head_dim;
            let qh = &q.row(qi)[band.clone()];
            for (si, &ki) in allowed.iter().enumerate() {
                let kh = &k.row(ki)[band.clone()];
                scores[si] = super::dot(qh, kh) * scale;
            }
            softmax_in_place(&mut scores[..allowed.len()]);
            let or = &mut out.row_mut(qi)[band.clone()];
            for (si, &ki) in allowed.iter().enumerate() {
                let w = scores[si];
                let vh = &v.row(ki)[band.clone()];
                for (o, &vv) in or.iter_mut().zip(vh) {
                    *o += w * vv;
                }
            }
        }
    }
    Ok(out)
}
