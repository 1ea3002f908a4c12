//! Subset indexing for exterior-algebra coefficients.
//!
//! Multivector coefficients are stored densely, one slot per sorted k-subset
//! of {0,...,n-1}, in lexicographic order of the sorted tuples.

/// Binomial coefficient as usize; returns 0 outside the Pascal triangle.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All k-subsets of {0..n-1} as sorted vectors, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len();
        for v in start..=(n - remaining) {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut cur, &mut out);
    }
    out
}

/// Lexicographic rank of a sorted k-subset of {0..n-1}.
pub fn subset_rank(n: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &s) in subset.iter().enumerate() {
        for v in prev..s {
            rank += binomial(n - 1 - v, k - 1 - i);
        }
        prev = s + 1;
    }
    rank
}

/// Bitmask of a subset.
pub fn subset_mask(subset: &[usize]) -> u64 {
    subset.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

/// Sign of merging two disjoint sorted subsets a, b into the sorted union,
/// with a's elements listed first: (-1)^{#{(x,y) in a x b : x > y}}.
pub fn merge_sign(a_mask: u64, b_mask: u64) -> f64 {
    let mut inv = 0u32;
    let mut b = b_mask;
    while b != 0 {
        let y = b.trailing_zeros();
        inv += (a_mask >> (y + 1)).count_ones();
        b &= b - 1;
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sorted union of two disjoint sorted subsets.
pub fn merge_subsets(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn subset_ranks_are_lexicographic() {
        for (n, k) in [(5, 2), (6, 3), (7, 1), (4, 4)] {
            let subs = k_subsets(n, k);
            assert_eq!(subs.len(), binomial(n, k));
            for (r, s) in subs.iter().enumerate() {
                assert_eq!(subset_rank(n, s), r, "subset {:?}", s);
            }
            let mut sorted = subs.clone();
            sorted.sort();
            assert_eq!(sorted, subs);
        }
    }

    #[test]
    fn merge_signs() {
        // e1 ^ e0 = -(e0 ^ e1)
        assert_eq!(merge_sign(0b10, 0b01), -1.0);
        assert_eq!(merge_sign(0b01, 0b10), 1.0);
        // (e0 e2) then (e1): one inversion (2 > 1)
        assert_eq!(merge_sign(0b101, 0b010), -1.0);
    }
}
