//! Index subsets of bounded size, ordered by size then lexicographically.

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Σ_{k=1..=t} C(n, k)
pub(crate) fn count_up_to(n: usize, t: usize) -> u128 {
    (1..=t.min(n)).fold(0u128, |acc, k| acc.saturating_add(binomial(n, k)))
}

/// All non-empty subsets of `0..n` with at most `t` elements.
pub(crate) fn subsets_up_to(n: usize, t: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for k in 1..=t.min(n) {
        out.extend(Combinations::new(n, k));
    }
    out
}

/// k-subsets of `0..n` in lexicographic order.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<u32>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let current = (k >= 1 && k <= n).then(|| (0..k as u32).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost position that can still advance
        if let Some(i) = (0..k).rev().find(|&i| (next[i] as usize) < self.n - k + i) {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Intersection of two sorted lists.
pub(crate) fn intersect_sorted<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn disjoint_sorted<T: Ord>(a: &[T], b: &[T]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 2), 66);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(count_up_to(12, 2), 78);
        assert_eq!(count_up_to(24, 3), 24 + 276 + 2024);
        assert_eq!(count_up_to(2, 5), 3);
    }

    #[test]
    fn combinations_in_order() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Combinations::new(3, 0).count(), 0);
        assert_eq!(Combinations::new(3, 4).count(), 0);
        assert_eq!(Combinations::new(3, 3).count(), 1);
        let subsets = subsets_up_to(5, 3);
        assert_eq!(subsets.len() as u128, count_up_to(5, 3));
        assert!(subsets.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn sorted_set_ops() {
        assert_eq!(intersect_sorted(&[1, 3, 5, 7], &[3, 4, 7]), vec![3, 7]);
        assert!(disjoint_sorted(&[1, 3], &[2, 4]));
        assert!(!disjoint_sorted(&[1, 3], &[3]));
    }
}
