//! Thin seam over rayon so every hot loop has an identical sequential
//! fallback. Results are collected in input order, so both modes produce
//! byte-identical output.

#[cfg(feature = "parallel")]
pub(crate) fn flat_map_vec<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().flat_map_iter(|item| f(item)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn flat_map_vec<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    items.iter().flat_map(|item| f(item)).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_vec<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(|item| f(item)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_vec<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(|item| f(item)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_map_preserves_input_order() {
        let items: Vec<u32> = (0..100).collect();
        let out = flat_map_vec(&items, |&n| vec![n * 2, n * 2 + 1]);
        let expected: Vec<u32> = (0..200).collect();
        assert_eq!(out, expected);
    }

    #[test]
    fn map_preserves_input_order() {
        let items: Vec<u32> = (0..100).collect();
        assert_eq!(map_vec(&items, |&n| n + 1), (1..=100).collect::<Vec<u32>>());
    }
}
