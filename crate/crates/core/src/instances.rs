//! Finite quantification domains: denominator grids of measures, generator
//! subsets, and seeded random measures and functionals.

use num_bigint::BigInt;
use rand::seq::index;
use rand::Rng;

use crate::functional::Functional;
use crate::rational::{one, rat, Rational};
use crate::space::{FiniteSpace, Measure};

/// Every probability measure on `space` whose weights are multiples of
/// `1/den`, in lexicographic order of weight vectors.
pub fn measure_grid(space: &FiniteSpace, den: u32) -> Vec<Measure> {
    assert!(den >= 1, "denominator must be positive");
    let n = space.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut parts = vec![0u32; n];
    compositions(den, 0, &mut parts, &mut |parts| {
        let weights = parts.iter().map(|&k| rat(k as i64, den as i64)).collect();
        out.push(Measure::new(space.clone(), weights).expect("grid weights sum to one"));
    });
    out.sort();
    out
}

fn compositions(remaining: u32, i: usize, parts: &mut [u32], emit: &mut dyn FnMut(&[u32])) {
    if i + 1 == parts.len() {
        parts[i] = remaining;
        emit(parts);
        return;
    }
    for k in 0..=remaining {
        parts[i] = k;
        compositions(remaining - k, i + 1, parts, emit);
    }
}

/// Number of nonempty subsets of an `n`-set with at most `k` elements, or
/// `None` on overflow.
pub fn subset_count(n: usize, k: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for j in 1..=k.min(n) {
        binom = binom.checked_mul((n - j + 1) as u128)? / j as u128;
        total = total.checked_add(binom)?;
    }
    Some(total)
}

/// All nonempty index subsets of size at most `k`, ordered by bitmask.
pub fn small_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(n < 64, "too many items to enumerate subsets");
    (1u64..1 << n)
        .filter(|mask| (mask.count_ones() as usize) <= k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// A random subset of size `1..=k`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let size = rng.random_range(1..=k.min(n));
    let mut picked = index::sample(rng, n, size).into_vec();
    picked.sort_unstable();
    picked
}

/// A measure with random support and positive integer weights up to `den`,
/// normalized.
pub fn random_measure<R: Rng>(rng: &mut R, space: &FiniteSpace, den: u32) -> Measure {
    let n = space.len();
    let support = random_subset(rng, n, n);
    let mut raw = vec![0u32; n];
    for &x in &support {
        raw[x] = rng.random_range(1..=den.max(1));
    }
    normalize(space, &raw)
}

fn normalize(space: &FiniteSpace, raw: &[u32]) -> Measure {
    let total: u32 = raw.iter().sum();
    let weights = raw.iter().map(|&w| rat(w as i64, total as i64)).collect();
    Measure::new(space.clone(), weights).expect("normalized weights")
}

/// A random measure in `P_f`: `n` atoms, one of which carries weight
/// `n/(n+1) + u/(n+1)` with `u ∈ [0, 1)`; the boundary `u = 0` is drawn with
/// positive probability.
pub fn random_pf_measure<R: Rng>(rng: &mut R, space: &FiniteSpace, den: u32) -> Measure {
    let n_points = space.len();
    let support = random_subset(rng, n_points, n_points);
    let n = support.len();
    if n == 1 {
        return Measure::dirac(space, support[0]).expect("point of space");
    }
    let steps = den.max(2) as i64;
    let u = rat(rng.random_range(0..steps), steps);
    let dominant = (Rational::from_integer(BigInt::from(n as i64)) + u) / Rational::from_integer(BigInt::from(n as i64 + 1));
    let rest = one() - &dominant;
    let raw: Vec<i64> = (1..n).map(|_| rng.random_range(1..=steps)).collect();
    let raw_total: i64 = raw.iter().sum();
    let lead = rng.random_range(0..n);
    let mut weights = vec![Rational::default(); n_points];
    let mut others = raw.iter();
    for (slot, &x) in support.iter().enumerate() {
        weights[x] = if slot == lead {
            dominant.clone()
        } else {
            &rest * rat(*others.next().expect("n - 1 shares"), raw_total)
        };
    }
    Measure::new(space.clone(), weights).expect("P_f weights sum to one")
}

/// A functional generated by `1..=max_gens` random measures.
pub fn random_functional<R: Rng>(rng: &mut R, space: &FiniteSpace, max_gens: usize, den: u32) -> Functional {
    let count = rng.random_range(1..=max_gens.max(1));
    let gens = (0..count).map(|_| random_measure(rng, space, den)).collect();
    Functional::from_generators(space, gens).expect("nonempty generators")
}

/// A functional in `OS_f`: its generators, hence its vertices, lie in `P_f`.
pub fn random_osf_functional<R: Rng>(rng: &mut R, space: &FiniteSpace, max_gens: usize, den: u32) -> Functional {
    let count = rng.random_range(1..=max_gens.max(1));
    let gens = (0..count).map(|_| random_pf_measure(rng, space, den)).collect();
    Functional::from_generators(space, gens).expect("nonempty generators")
}
