//! Data-parallel helpers. With the default `parallel` feature the indexed
//! maps fan out over rayon's global pool; without it they run sequentially
//! with identical results, since outputs are collected in index order
//! either way. The `*_seq` variants are always sequential and exist so the
//! benchmark suite can compare the two paths directly.

/// Applies `f` to 0..n, preserving index order in the output.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Send + Sync) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Applies `f` to 0..n, preserving index order in the output.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Send + Sync) -> Vec<T> {
    map_indexed_seq(n, f)
}

/// Sequential twin of [`map_indexed`].
pub fn map_indexed_seq<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let f = |i: usize| i * i + 1;
        assert_eq!(map_indexed(1000, f), map_indexed_seq(1000, f));
        assert!(map_indexed(0, f).is_empty());
    }
}
