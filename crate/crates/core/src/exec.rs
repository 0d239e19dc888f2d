//! Data-parallel dispatch with a sequential fallback.
//!
//! With the `parallel` feature (default) independent work items run on rayon;
//! without it, or under [`Schedule::Serial`], they run in order on the calling
//! thread. Results always come back in index order.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    Serial,
    #[default]
    Parallel,
}

impl Schedule {
    /// Whether this schedule actually runs concurrently in this build.
    pub fn is_concurrent(self) -> bool {
        self == Schedule::Parallel && cfg!(feature = "parallel")
    }
}

/// `(0..count).map(f)` under the given schedule.
pub fn map_indexed<T, F>(count: usize, schedule: Schedule, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match schedule {
        #[cfg(feature = "parallel")]
        Schedule::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

/// Runs `op` with at most `workers` threads when given; otherwise on the global pool.
pub fn with_workers<R: Send>(workers: Option<usize>, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(w) = workers {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
            return pool.install(op);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    op()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let par = map_indexed(100, Schedule::Parallel, |i| i * i);
        let ser = map_indexed(100, Schedule::Serial, |i| i * i);
        assert_eq!(par, ser);
        assert_eq!(
            with_workers(Some(2), || map_indexed(5, Schedule::Parallel, |i| i)),
            vec![0, 1, 2, 3, 4]
        );
    }
}
