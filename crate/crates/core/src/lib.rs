//! Runtime for simultaneous translation of unbounded speech streams.
//!
//! The crate is organized around the lifecycle of a streaming translation
//! session:
//!
//! - [`numerics`] — dense f32 linear algebra and transformer primitives
//!   (masked attention, rotary embedding, strided convolution).
//! - [`encoder`] — chunkwise-causal streaming speech encoder with a bounded
//!   sliding KV cache, plus the speech-to-token-embedding adapter.
//! - [`trajectory`] — alignment-driven construction of read/write
//!   trajectories, robust segments, and multi-latency augmentation.
//! - [`decoder`] — multi-turn decoder session with a Λ-shaped KV cache
//!   (pinned instruction + recent-token ring), EOT read/write policy, and
//!   per-token delay accounting.
//! - [`metrics`] — streaming latency metrics: LAAL, StreamLAAL (with
//!   resegmentation), computation-aware variants, and real-time factor.
//! - [`synth`] — seeded synthetic corpus generator for tests and sweeps.
//!
//! The crate is `no_std` + `alloc`; all IO, file formats, and CLI live in
//! the companion harness crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod decoder;
pub mod encoder;
pub mod error;
pub mod metrics;
pub mod numerics;
pub mod synth;
pub mod trajectory;

pub use error::{CoreError, Result};

/// Duration of one speech chunk in milliseconds.
pub const CHUNK_MS: u64 = 960;

/// Feature frames per speech chunk (50 Hz features over 960 ms).
pub const CHUNK_FRAMES: usize = 48;

/// Frame-to-embedding reduction of the adapter (two stride-2 convolutions).
pub const ADAPTER_REDUCTION: usize = 4;

/// Speech embeddings produced per chunk after the adapter (48 / 4).
pub const EMBEDDINGS_PER_CHUNK: usize = CHUNK_FRAMES / ADAPTER_REDUCTION;
