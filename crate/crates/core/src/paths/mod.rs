//! Sample paths, canonical rational partitions and the corruption harness.

mod partition;
mod path;
mod simulate;

pub use partition::{canonical_partition, CanonicalChain, Rational, RationalPartition};
pub use path::{grid_sample, CorruptedPath, EventPath, GridPath, OscillatingPath, SamplePath};
pub use simulate::{corrupt, corrupt_with, replicate_rng, simulate_ctmc, simulate_ctmc_with, Stream};
