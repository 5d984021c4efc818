use rayon::ThreadPoolBuilder;

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads == 0`.
pub(crate) fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    match ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
