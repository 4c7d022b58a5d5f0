//! Data-parallel evaluation of independent sweep points.
//!
//! Results always come back in input order. Without the `parallel` feature
//! every request runs on the calling thread.

/// How a sweep distributes its grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Serial,
    /// Worker pool of the given size; `None` uses one worker per core.
    Parallel { threads: Option<usize> },
}

impl Execution {
    /// `Some(1)` means serial; anything else is parallel when available.
    pub fn from_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Execution::Serial,
            _ if cfg!(feature = "parallel") => Execution::Parallel { threads },
            _ => Execution::Serial,
        }
    }
}

/// Applies `f` to every item and collects the results in order.
pub fn map_points<T, R, F>(execution: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        Execution::Serial => items.iter().map(f).collect(),
        Execution::Parallel { threads } => parallel_map(threads, items, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(threads: Option<usize>, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(e) => {
            log::warn!("could not start worker pool ({e}); running serially");
            items.iter().map(f).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(_threads: Option<usize>, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}
