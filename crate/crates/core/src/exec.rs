//! Execution-mode switch for the data-parallel inner loops.
//!
//! Pair enumeration, batch prediction, and Monte Carlo experiment cells are
//! embarrassingly parallel. Each loop body is a pure function of immutable
//! inputs and results are collected in index order, so both modes produce
//! identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to run the data-parallel loops.
///
/// `Parallel` uses rayon when the `parallel` feature is enabled and quietly
/// falls back to sequential execution otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<U, F>(mode: ExecMode, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        ExecMode::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<U, F>(_mode: ExecMode, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}
