//! Small shared helpers: deterministic seed derivation and subset iteration.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step; the standard 64-bit mixer.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a stream tag.
/// Identical (master, tag) pairs always yield the same seed.
pub fn derived_seed(master: u64, tag: u64) -> u64 {
    splitmix64(master ^ splitmix64(tag))
}

/// A seeded RNG for the given stream tag.
pub fn stream_rng(master: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derived_seed(master, tag))
}

/// Calls `f` on every m-subset of 0..n, in lexicographic order, until `f`
/// returns false. Subsets are passed as sorted slices.
pub fn for_each_subset<F: FnMut(&[usize]) -> bool>(n: usize, m: usize, mut f: F) {
    if m > n {
        return;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // advance to the next combination
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - m {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All m-subsets of the given sorted universe slice, as owned vectors.
pub fn subsets_of(universe: &[usize], m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_subset(universe.len(), m, |idx| {
        out.push(idx.iter().map(|&i| universe[i]).collect());
        true
    });
    out
}

/// Binomial coefficient as f64; saturates quietly for large arguments.
pub fn binomial(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    let m = m.min(n - m);
    let mut acc = 1.0f64;
    for i in 0..m {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(2, 3), 0.0);
    }

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        assert_eq!(derived_seed(42, 1), derived_seed(42, 1));
        assert_ne!(derived_seed(42, 1), derived_seed(42, 2));
        assert_ne!(derived_seed(42, 1), derived_seed(43, 1));
    }
}
