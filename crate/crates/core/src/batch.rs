//! Batch evaluation of independent simulations.
//!
//! Runs are single-threaded and share no mutable state, so Monte Carlo
//! estimators and config sweeps map cleanly over sample indices. With the
//! `parallel` feature (default) [`map`] fans out over rayon; without it the
//! sequential path is used. Results are collected in index order either
//! way, so output is independent of scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential evaluation of `f` over `0..n`.
pub fn map_seq<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R + Sync + Send,
    R: Send,
{
    (0..n).map(f).collect()
}

/// Rayon-parallel evaluation of `f` over `0..n`, collected in index order.
#[cfg(feature = "parallel")]
pub fn map_par<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R + Sync + Send,
    R: Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Evaluates `f` over `0..n`, parallel when the `parallel` feature is on.
pub fn map<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R + Sync + Send,
    R: Send,
{
    #[cfg(feature = "parallel")]
    {
        map_par(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(n, f)
    }
}
