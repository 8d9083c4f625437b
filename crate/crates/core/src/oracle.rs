//! Ground-truth model of the boarding process.
//!
//! Passengers `1..n` board in order. The first `k` are absent-minded and sit
//! uniformly at random among the free seats; every later passenger takes
//! their own seat when it is free and a uniformly random free seat otherwise.
//!
//! Two exact views are provided: [`enumerate_process`] expands the full
//! probability tree into a leaf-exact distribution over seatings (guarded,
//! exponential), and [`oracle_weight_enumerator`] aggregates the same tree
//! into a multilinear weight enumerator using dynamic programming on the
//! state `(next passenger, free-seat set)`, which is sufficient because
//! future behavior depends only on those two. A seeded Monte Carlo sampler
//! covers sizes the tree cannot.
//!
//! Randomness: ChaCha8 (`rand_chacha`), a named, seedable and
//! platform-independent generator. A uniform choice among `m` free seats is
//! drawn rejection-free as `(next_u64() * m) >> 64` over the ordered
//! free-seat list, so a seed determines every trajectory bit-exactly.
//! Monte Carlo trial `t` uses the ChaCha stream index `t`, making results
//! independent of how trials are scheduled across threads.

use crate::error::{Error, Result};
use crate::poly::{MultilinearPoly, MAX_VARS};
use crate::rat::Rat;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// Default cap on `n` for exact tree enumeration.
pub const DEFAULT_ENUMERATION_GUARD: usize = 10;

/// Problem size: `n` passengers, the first `k` of them absent-minded.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProcessConfig {
    pub n: usize,
    pub k: usize,
}

impl ProcessConfig {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("need at least one passenger"));
        }
        if k > n {
            return Err(Error::domain(format!("need k <= n, got k={k}, n={n}")));
        }
        Ok(ProcessConfig { n, k })
    }
}

/// Exact distribution over final seatings.
///
/// A seating is a permutation: entry `i-1` is the seat taken by passenger
/// `i` (seats are 1-based). Probabilities are positive rationals summing to
/// exactly one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeatingDistribution {
    n: usize,
    entries: BTreeMap<Vec<u8>, Rat>,
}

impl SeatingDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[u8], &Rat)> {
        self.entries.iter().map(|(p, r)| (p.as_slice(), r))
    }

    pub fn num_outcomes(&self) -> usize {
        self.entries.len()
    }

    pub fn total_probability(&self) -> Rat {
        self.entries.values().cloned().sum()
    }

    /// Probability that every passenger in `set` (1-based) sits correctly.
    pub fn prob_all_correct(&self, set: &[usize]) -> Rat {
        let mut acc = Rat::zero();
        for (perm, p) in self.entries() {
            if set.iter().all(|&i| perm[i - 1] as usize == i) {
                acc += p;
            }
        }
        acc
    }

    /// Marginal probability that passenger `i` sits correctly.
    pub fn prob_correct(&self, i: usize) -> Rat {
        self.prob_all_correct(&[i])
    }

    /// Exact law of the number of wrong-seated passengers, index = count.
    pub fn wrong_count_distribution(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.n + 1];
        for (perm, p) in self.entries() {
            out[wrong_count(perm)] += p;
        }
        out
    }

    /// Weight enumerator summed leaf by leaf (no memoization); equals
    /// [`oracle_weight_enumerator`] and serves as its internal cross-check.
    pub fn weight_enumerator(&self) -> MultilinearPoly {
        let mut acc = MultilinearPoly::zero(self.n);
        for (perm, p) in self.entries() {
            acc.add_term(wrong_mask(perm), p.clone());
        }
        acc
    }
}

fn wrong_count(perm: &[u8]) -> usize {
    perm.iter()
        .enumerate()
        .filter(|&(i, &s)| s as usize != i + 1)
        .count()
}

fn wrong_mask(perm: &[u8]) -> u64 {
    let mut mask = 0u64;
    for (i, &s) in perm.iter().enumerate() {
        if s as usize != i + 1 {
            mask |= 1 << i;
        }
    }
    mask
}

/// Seats still free at a given tree node, kept as an ordered list of a
/// bit-set's elements.
fn free_list(free: u64, n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |s| free & (1 << (s - 1)) != 0)
}

/// Expands the full probability tree into a leaf-exact seating distribution.
///
/// Guarded by `max_n` (tree size grows like `n!`); use [`sample_boarding`]
/// beyond the guard.
pub fn enumerate_process_with_guard(
    cfg: ProcessConfig,
    max_n: usize,
) -> Result<SeatingDistribution> {
    if cfg.n > max_n {
        return Err(Error::resource(format!(
            "exact enumeration capped at n <= {max_n} (got n={}); use sampling instead",
            cfg.n
        )));
    }
    let mut entries = BTreeMap::new();
    let mut perm = vec![0u8; cfg.n];
    let all_free = mask_all(cfg.n);
    descend(cfg, 1, all_free, Rat::one(), &mut perm, &mut entries);
    Ok(SeatingDistribution { n: cfg.n, entries })
}

/// [`enumerate_process_with_guard`] at the default guard.
pub fn enumerate_process(cfg: ProcessConfig) -> Result<SeatingDistribution> {
    enumerate_process_with_guard(cfg, DEFAULT_ENUMERATION_GUARD)
}

fn mask_all(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn descend(
    cfg: ProcessConfig,
    passenger: usize,
    free: u64,
    prob: Rat,
    perm: &mut Vec<u8>,
    out: &mut BTreeMap<Vec<u8>, Rat>,
) {
    if passenger > cfg.n {
        // Leaf: each reachable seating corresponds to exactly one path.
        debug_assert!(!out.contains_key(perm));
        out.insert(perm.clone(), prob);
        return;
    }
    let own_bit = 1u64 << (passenger - 1);
    if passenger > cfg.k && free & own_bit != 0 {
        perm[passenger - 1] = passenger as u8;
        descend(cfg, passenger + 1, free & !own_bit, prob, perm, out);
        return;
    }
    let m = free.count_ones() as i64;
    let share = &prob * &Rat::new(1, m);
    for seat in free_list(free, cfg.n) {
        perm[passenger - 1] = seat as u8;
        descend(
            cfg,
            passenger + 1,
            free & !(1 << (seat - 1)),
            share.clone(),
            perm,
            out,
        );
    }
}

/// Exact weight enumerator of the process: the sum over outcomes of
/// probability times `prod w_i` over wrong-seated passengers `i`.
///
/// Aggregated by memoized dynamic programming on
/// `(next passenger, free-seat set)`; specializing every `w_i := 1` yields
/// exactly 1.
pub fn oracle_weight_enumerator(cfg: ProcessConfig) -> Result<MultilinearPoly> {
    oracle_weight_enumerator_with_guard(cfg, DEFAULT_ENUMERATION_GUARD)
}

/// [`oracle_weight_enumerator`] with a caller-chosen guard.
pub fn oracle_weight_enumerator_with_guard(
    cfg: ProcessConfig,
    max_n: usize,
) -> Result<MultilinearPoly> {
    if cfg.n > max_n {
        return Err(Error::resource(format!(
            "exact enumeration capped at n <= {max_n} (got n={}); use sampling instead",
            cfg.n
        )));
    }
    if cfg.n > MAX_VARS {
        return Err(Error::domain(format!(
            "weight enumerators support at most {MAX_VARS} passengers"
        )));
    }
    let mut memo = HashMap::new();
    Ok(weight_dp(cfg, 1, mask_all(cfg.n), &mut memo))
}

fn weight_dp(
    cfg: ProcessConfig,
    passenger: usize,
    free: u64,
    memo: &mut HashMap<(usize, u64), MultilinearPoly>,
) -> MultilinearPoly {
    if passenger > cfg.n {
        return MultilinearPoly::constant(cfg.n, Rat::one());
    }
    if let Some(hit) = memo.get(&(passenger, free)) {
        return hit.clone();
    }
    let own_bit = 1u64 << (passenger - 1);
    let result = if passenger > cfg.k && free & own_bit != 0 {
        weight_dp(cfg, passenger + 1, free & !own_bit, memo)
    } else {
        let m = free.count_ones() as i64;
        let share = Rat::new(1, m);
        let mut acc = MultilinearPoly::zero(cfg.n);
        for seat in free_list(free, cfg.n) {
            let sub = weight_dp(cfg, passenger + 1, free & !(1 << (seat - 1)), memo);
            let contrib = if seat == passenger {
                sub.scale(&share)
            } else {
                // Wrong seat: attach w_passenger. The subtree only involves
                // later passengers, so the affine multiply stays multilinear.
                sub.mul_affine(passenger, &share, &Rat::zero())
                    .expect("subtree cannot mention the current passenger")
            };
            acc = acc.add(&contrib).expect("same ambient n");
        }
        acc
    };
    memo.insert((passenger, free), result.clone());
    result
}

/// Draws one seating from the process law; deterministic for a fixed seed.
pub fn sample_boarding(cfg: ProcessConfig, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(cfg, &mut rng)
}

fn sample_with_rng(cfg: ProcessConfig, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut perm = vec![0u8; cfg.n];
    let mut free = mask_all(cfg.n);
    for passenger in 1..=cfg.n {
        let own_bit = 1u64 << (passenger - 1);
        let seat = if passenger > cfg.k && free & own_bit != 0 {
            passenger
        } else {
            let m = free.count_ones() as u64;
            let idx = ((rng.next_u64() as u128 * m as u128) >> 64) as usize;
            free_list(free, cfg.n).nth(idx).expect("index within free count")
        };
        perm[passenger - 1] = seat as u8;
        free &= !(1 << (seat - 1));
    }
    perm
}

/// Empirical law of the wrong-seated count from `trials` seeded samples:
/// entry `l` is the observed frequency of exactly `l` wrong-seated
/// passengers. Entries are nonnegative and sum to 1 up to rounding.
///
/// Trial `t` draws from ChaCha stream `t` of the given seed, so the result
/// is identical no matter how the trials are scheduled.
pub fn empirical_pgf(cfg: ProcessConfig, trials: u64, seed: u64) -> Result<Vec<f64>> {
    let counts = empirical_wrong_counts(cfg, trials, seed)?;
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / trials as f64)
        .collect())
}

/// Raw histogram behind [`empirical_pgf`]: exact trial counts per
/// wrong-seated count.
pub fn empirical_wrong_counts(cfg: ProcessConfig, trials: u64, seed: u64) -> Result<Vec<u64>> {
    if trials < 1 {
        return Err(Error::domain("need at least one trial"));
    }
    let histogram = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; cfg.n + 1],
            |mut hist, trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let perm = sample_with_rng(cfg, &mut rng);
                hist[wrong_count(&perm)] += 1;
                hist
            },
        )
        .reduce(
            || vec![0u64; cfg.n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(histogram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, k: usize) -> ProcessConfig {
        ProcessConfig::new(n, k).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn config_validation() {
        assert!(ProcessConfig::new(0, 0).is_err());
        assert!(ProcessConfig::new(2, 3).is_err());
        assert!(ProcessConfig::new(3, 0).is_ok());
    }

    #[test]
    fn two_passengers_single_absent_minded() {
        let d = enumerate_process(cfg(2, 1)).unwrap();
        assert_eq!(d.num_outcomes(), 2);
        assert_eq!(d.entries.get(&vec![1u8, 2]), Some(&rat(1, 2)));
        assert_eq!(d.entries.get(&vec![2u8, 1]), Some(&rat(1, 2)));
    }

    #[test]
    fn forced_boundary_cases() {
        // one seat: forced identity
        let d = enumerate_process(cfg(1, 1)).unwrap();
        assert_eq!(d.entries.get(&vec![1u8]), Some(&Rat::one()));
        // nobody absent-minded: identity with probability 1
        let d = enumerate_process(cfg(3, 0)).unwrap();
        assert_eq!(d.num_outcomes(), 1);
        assert_eq!(d.entries.get(&vec![1u8, 2, 3]), Some(&Rat::one()));
    }

    #[test]
    fn three_passengers_exact_tree() {
        let d = enumerate_process(cfg(3, 1)).unwrap();
        assert_eq!(d.total_probability(), Rat::one());
        assert_eq!(d.entries.get(&vec![1u8, 2, 3]), Some(&rat(1, 3)));
        assert_eq!(d.entries.get(&vec![2u8, 1, 3]), Some(&rat(1, 6)));
        assert_eq!(d.entries.get(&vec![2u8, 3, 1]), Some(&rat(1, 6)));
        assert_eq!(d.entries.get(&vec![3u8, 2, 1]), Some(&rat(1, 3)));
        // last passenger correct with probability 1/2
        assert_eq!(d.prob_correct(3), rat(1, 2));
    }

    #[test]
    fn probabilities_sum_to_one_exactly() {
        for n in 1..=7 {
            for k in 0..=n.min(4) {
                let d = enumerate_process(cfg(n, k)).unwrap();
                assert_eq!(d.total_probability(), Rat::one(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn k1_wrong_sets_contain_first_passenger_or_are_empty() {
        for n in 2..=7 {
            let d = enumerate_process(cfg(n, 1)).unwrap();
            for (perm, _) in d.entries() {
                let mask = super::wrong_mask(perm);
                assert!(mask == 0 || mask & 1 != 0, "n={n}, perm={perm:?}");
            }
        }
    }

    #[test]
    fn weight_enumerator_two_routes_agree() {
        for n in 1..=7 {
            for k in 0..=n.min(3) {
                let d = enumerate_process(cfg(n, k)).unwrap();
                let by_leaves = d.weight_enumerator();
                let by_dp = oracle_weight_enumerator(cfg(n, k)).unwrap();
                assert_eq!(by_leaves, by_dp, "n={n} k={k}");
                assert_eq!(by_dp.eval_all_ones(), Rat::one(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn weight_enumerator_examples() {
        // n=2, k=1: 1/2 + (1/2) w1 w2
        let f = oracle_weight_enumerator(cfg(2, 1)).unwrap();
        assert_eq!(f.coeff(0), rat(1, 2));
        assert_eq!(f.coeff(0b11), rat(1, 2));
        assert_eq!(f.num_terms(), 2);
        // n=3, k=1 term by term (exactly {1,3} wrong happens with prob 1/3)
        let f = oracle_weight_enumerator(cfg(3, 1)).unwrap();
        assert_eq!(f.coeff(0), rat(1, 3));
        assert_eq!(f.coeff(0b011), rat(1, 6));
        assert_eq!(f.coeff(0b101), rat(1, 3));
        assert_eq!(f.coeff(0b111), rat(1, 6));
    }

    #[test]
    fn guard_refuses_large_trees() {
        let err = enumerate_process(cfg(11, 1)).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = sample_boarding(cfg(8, 2), 12345);
        let b = sample_boarding(cfg(8, 2), 12345);
        assert_eq!(a, b);
        assert_eq!(sample_boarding(cfg(1, 1), 99), vec![1u8]);
    }

    #[test]
    fn last_passenger_frequency_over_seeds() {
        // n=2, k=1: across many single-draw seeds, passenger 2 is correct
        // about half the time.
        let trials = 100_000u64;
        let hits = (0..trials)
            .filter(|&s| sample_boarding(cfg(2, 1), s)[1] == 2)
            .count() as f64;
        let frac = hits / trials as f64;
        assert!((frac - 0.5).abs() < 0.01, "frac={frac}");
    }

    #[test]
    fn empirical_mean_matches_harmonic_number() {
        // n=10, k=1: E[wrong count] = 7129/2520 ~ 2.829
        let freqs = empirical_pgf(cfg(10, 1), 100_000, 1).unwrap();
        let mean: f64 = freqs.iter().enumerate().map(|(l, f)| l as f64 * f).sum();
        assert!((mean - 7129.0 / 2520.0).abs() < 0.03, "mean={mean}");
        let total: f64 = freqs.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empirical_pgf_small_cases() {
        let freqs = empirical_pgf(cfg(2, 1), 100_000, 7).unwrap();
        assert!((freqs[0] - 0.5).abs() < 0.01);
        assert_eq!(freqs[1], 0.0);
        assert!((freqs[2] - 0.5).abs() < 0.01);
        let freqs = empirical_pgf(cfg(1, 1), 10, 3).unwrap();
        assert_eq!(freqs, vec![1.0, 0.0]);
        assert!(empirical_pgf(cfg(2, 1), 0, 0).is_err());
    }

    #[test]
    fn empirical_pgf_deterministic_and_scheduling_independent() {
        let a = empirical_wrong_counts(cfg(6, 2), 20_000, 42).unwrap();
        let b = empirical_wrong_counts(cfg(6, 2), 20_000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn monte_carlo_within_binomial_envelope() {
        // Per-outcome frequencies stay within 4*sqrt(p(1-p)/T) of the exact
        // tree probabilities.
        let trials = 100_000u64;
        let d = enumerate_process(cfg(4, 1)).unwrap();
        let exact = d.wrong_count_distribution();
        let freqs = empirical_pgf(cfg(4, 1), trials, 2024).unwrap();
        for (l, p) in exact.iter().enumerate() {
            let p = p.to_f64();
            let bound = 4.0 * (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (freqs[l] - p).abs() <= bound,
                "l={l}: freq={} exact={p} bound={bound}",
                freqs[l]
            );
        }
    }
}
