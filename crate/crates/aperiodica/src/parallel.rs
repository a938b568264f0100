//! Deterministic data-parallel helpers.
//!
//! Work is split into a fixed number of logical blocks that does not depend
//! on the worker count; workers map blocks in parallel and the partial
//! results are reduced sequentially in block order. Together with
//! compensated block accumulators this makes every reduction bit-identical
//! for any thread count.

use rayon::prelude::*;

/// Fixed logical block count for index-range parallelism.
pub const BLOCKS: usize = 64;

/// Split `0..len` into [`BLOCKS`] contiguous ranges (fewer when `len` is small).
pub fn block_ranges(len: usize) -> Vec<std::ops::Range<usize>> {
    if len == 0 {
        return Vec::new();
    }
    let blocks = BLOCKS.min(len);
    let base = len / blocks;
    let extra = len % blocks;
    let mut out = Vec::with_capacity(blocks);
    let mut start = 0;
    for b in 0..blocks {
        let size = base + usize::from(b < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}

/// Map fixed blocks of `0..len` in parallel, then fold the block results in
/// block order.
pub fn block_map_fold<T, A>(
    len: usize,
    map: impl Fn(std::ops::Range<usize>) -> T + Sync + Send,
    init: A,
    fold: impl Fn(A, T) -> A,
) -> A
where
    T: Send,
{
    let ranges = block_ranges(len);
    let partials: Vec<T> = ranges.into_par_iter().map(map).collect();
    partials.into_iter().fold(init, fold)
}

/// Run `f` inside a rayon pool with the requested worker count (`None` keeps
/// the ambient pool). Used by the CLI to honor `--workers`.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        None => f(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("failed to build worker pool");
            pool.install(f)
        }
    }
}
