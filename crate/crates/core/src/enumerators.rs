//! Closed-form weight enumerators and probability generating functions.
//!
//! The joint law of "which passengers sit wrong" is encoded by a multilinear
//! weight enumerator: the coefficient of `w_{i1}..w_{il}` is the probability
//! that exactly the passengers `{i1..il}` are wrongly seated. This module
//! provides that enumerator in closed form for any number `k` of
//! absent-minded passengers, the state-chain route that derives the `k = 1`
//! case, the diagonal specialization to a probability generating function in
//! one variable, and the marginal/subset probabilities that follow.

use crate::error::{Error, Result};
use crate::poly::{elementary_variants, rising_product, MultilinearPoly, UniPoly, MAX_VARS};
use crate::rat::{binomial, factorial, Rat};

/// The backward state chain for one absent-minded passenger.
///
/// `a(i)` is the weight enumerator of all completions from the state "seats
/// `1` and `i+1..n` are free and passenger `i` is about to sit", for
/// `2 <= i <= n`. The chain starts at `a(n) = w_n` and steps backward by
///
/// ```text
/// a(i-1) = w_{i-1} * (a(i) / w_i) * (w_i + n - i + 1) / (n - i + 2)
/// ```
///
/// Every term of `a(i)` contains `w_i`, so the division is an exact
/// coefficient shift and no rational-function machinery is needed.
#[derive(Clone, Debug)]
pub struct ChainState {
    n: usize,
    /// `values[j]` holds `a(j + 2)`, i.e. the chain for `i = 2..=n`.
    values: Vec<MultilinearPoly>,
}

impl ChainState {
    /// Builds the full chain `a(n), .., a(2)` for `n >= 2`.
    pub fn build(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "the state chain needs n >= 2 (got n={n})"
            )));
        }
        if n > MAX_VARS {
            return Err(Error::domain(format!("n={n} exceeds the {MAX_VARS}-variable cap")));
        }
        let mut values = vec![MultilinearPoly::zero(n); n - 1];
        values[n - 2] = MultilinearPoly::variable(n, n);
        for i in (3..=n).rev() {
            values[i - 3] = Self::step_back(&values[i - 2], n, i)?;
        }
        Ok(ChainState { n, values })
    }

    /// One backward step: `a(i-1)` from `a(i)`.
    ///
    /// Expanding the recurrence, each term `c * w_i * m` of `a(i)` (every
    /// term contains `w_i`) contributes `c*s * w_{i-1} w_i m` and
    /// `c*s*(n-i+1) * w_{i-1} m`, with `s = 1/(n-i+2)`. The division by
    /// `w_i` is an exact coefficient shift; both emitted runs stay
    /// key-sorted, so the step is a single merge.
    fn step_back(a_i: &MultilinearPoly, n: usize, i: usize) -> Result<MultilinearPoly> {
        let bit_cur = 1u64 << (i - 1);
        let bit_prev = 1u64 << (i - 2);
        let scale = Rat::new(1, (n - i + 2) as i64);
        let dropped_scale = &scale * &Rat::from((n - i + 1) as u64);
        let mut kept = Vec::with_capacity(a_i.num_terms());
        let mut dropped = Vec::with_capacity(a_i.num_terms());
        for (k, c) in a_i.terms() {
            if k & bit_cur == 0 {
                return Err(Error::domain(format!(
                    "chain invariant broken: a({i}) has a term without w_{i}"
                )));
            }
            kept.push((k | bit_prev, c * &scale));
            dropped.push(((k & !bit_cur) | bit_prev, c * &dropped_scale));
        }
        let kept = MultilinearPoly::from_runs(n, dropped, kept);
        Ok(kept)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The chain value `a(i)` for `2 <= i <= n`.
    pub fn a(&self, i: usize) -> &MultilinearPoly {
        assert!((2..=self.n).contains(&i), "chain index out of range");
        &self.values[i - 2]
    }

    /// Assembles the weight enumerator `1/n - w_1/n + a(1)`, where `a(1)` is
    /// one more backward step from `a(2)`.
    pub fn weight_enumerator(&self) -> MultilinearPoly {
        let a1 = Self::step_back(self.a(2), self.n, 2).expect("chain invariant");
        let n_rat = Rat::new(1, self.n as i64);
        let mut f = MultilinearPoly::constant(self.n, n_rat.clone());
        f.add_term(1, -n_rat);
        f.add(&a1).expect("same ambient n")
    }
}

/// Weight enumerator for one absent-minded passenger via the state chain.
/// Equals [`weight_enumerator_k1`] exactly; the two routes check each other.
pub fn chain_weight_enumerator(n: usize) -> Result<MultilinearPoly> {
    Ok(ChainState::build(n)?.weight_enumerator())
}

/// Closed-form weight enumerator for one absent-minded passenger:
///
/// ```text
/// (1 - w_1)/n + (w_1/n!) * prod_{i=2}^{n} (w_i + n + 1 - i)
/// ```
pub fn weight_enumerator_k1(n: usize) -> Result<MultilinearPoly> {
    if n < 1 {
        return Err(Error::domain("need n >= 1"));
    }
    if n > MAX_VARS {
        return Err(Error::domain(format!("n={n} exceeds the {MAX_VARS}-variable cap")));
    }
    let mut product = MultilinearPoly::constant(n, Rat::one());
    for i in 2..=n {
        product = product.mul_affine(i, &Rat::one(), &Rat::from((n + 1 - i) as u64))?;
    }
    let scaled = product.mul_affine(1, &Rat::from_ratio(1.into(), factorial(n as u64)), &Rat::zero())?;
    let inv_n = Rat::new(1, n as i64);
    let mut f = MultilinearPoly::constant(n, inv_n.clone());
    f.add_term(1, -inv_n);
    f.add(&scaled)
}

/// Closed-form weight enumerator for `k` absent-minded passengers:
///
/// ```text
/// (1/n!) * sum_{r=0}^{k} r! * e_{k-r}(w_1..w_k) * prod_{j=k+1}^{n} (r*w_j + n + 1 - j)
/// ```
///
/// where `e_r` is the coefficient of `X^r` in `prod_j ((1-w_j)X + w_j)`.
/// Requires `1 <= k <= n <= 62`; reduces to [`weight_enumerator_k1`] at
/// `k = 1`.
pub fn weight_enumerator(n: usize, k: usize) -> Result<MultilinearPoly> {
    if k < 1 {
        return Err(Error::domain("need k >= 1 (k = 0 leaves everyone seated correctly)"));
    }
    if k > n {
        return Err(Error::domain(format!(
            "the closed form requires n >= k (got n={n}, k={k})"
        )));
    }
    if n > MAX_VARS {
        return Err(Error::domain(format!("n={n} exceeds the {MAX_VARS}-variable cap")));
    }
    let elem = elementary_variants(n, k)?;
    let mut acc = MultilinearPoly::zero(n);
    let mut r_factorial = Rat::one();
    for r in 0..=k {
        if r > 0 {
            r_factorial *= &Rat::from(r as u64);
        }
        let mut tail = MultilinearPoly::constant(n, r_factorial.clone());
        for j in (k + 1)..=n {
            tail = tail.mul_affine(j, &Rat::from(r as u64), &Rat::from((n + 1 - j) as u64))?;
        }
        // Variable-disjoint product: e_{k-r} lives on w_1..w_k, the tail on
        // w_{k+1}..w_n.
        acc = acc.add(&elem[k - r].try_mul(&tail)?)?;
    }
    Ok(acc.scale(&Rat::from_ratio(1.into(), factorial(n as u64))))
}

/// Probability generating function of the wrong-seated count:
///
/// ```text
/// f(w) = (1/n!) * sum_{r=0}^{k} r! * C(k,r) * w^r * (1-w)^{k-r} * prod_{i=1}^{n-k} (r*w + i)
/// ```
///
/// The coefficient of `w^l` is the probability that exactly `l` passengers
/// sit wrong. Equals the diagonal `w_j := w` of [`weight_enumerator`].
pub fn pgf(n: usize, k: usize) -> Result<UniPoly> {
    if k < 1 {
        return Err(Error::domain("need k >= 1"));
    }
    if k > n {
        return Err(Error::domain(format!(
            "the closed form requires n >= k (got n={n}, k={k})"
        )));
    }
    let one_minus_w = UniPoly::linear(Rat::one(), Rat::new(-1, 1));
    let mut acc = UniPoly::zero();
    let mut r_factorial = Rat::one();
    for r in 0..=k {
        if r > 0 {
            r_factorial *= &Rat::from(r as u64);
        }
        let scalar = &r_factorial * &Rat::from_bigint(binomial(k as u64, r as u64));
        let mut term = UniPoly::monomial(scalar, r);
        term = &term * &one_minus_w.pow((k - r) as u32);
        term = &term * &rising_product(r as u64, (n - k) as u64);
        acc = &acc + &term;
    }
    Ok(acc.scale(&Rat::from_ratio(1.into(), factorial(n as u64))))
}

/// Direct product form of the generating function for a single
/// absent-minded passenger:
///
/// ```text
/// f(w) = (1 - w)/n + (w/n!) * prod_{i=1}^{n-1} (w + i)
/// ```
///
/// A second, independent route to `pgf(n, 1)`.
pub fn pgf_k1(n: usize) -> Result<UniPoly> {
    if n < 1 {
        return Err(Error::domain("need n >= 1"));
    }
    let inv_n = Rat::new(1, n as i64);
    let head = UniPoly::linear(inv_n.clone(), -inv_n);
    let tail = &UniPoly::monomial(Rat::from_ratio(1.into(), factorial(n as u64)), 1)
        * &rising_product(1, (n - 1) as u64);
    Ok(&head + &tail)
}

/// Probability that passenger `i > k` sits in their own seat:
/// `(n - i + 1) / (n - i + k + 1)`.
///
/// Absent-minded passengers (`i <= k`) have no such closed form; their
/// marginals come from coefficient extraction on [`weight_enumerator`] or
/// from the oracle.
pub fn marginal_correct_prob(n: usize, k: usize, i: usize) -> Result<Rat> {
    if i <= k {
        return Err(Error::domain(format!(
            "passenger {i} is absent-minded (k={k}); no closed-form marginal"
        )));
    }
    if i > n {
        return Err(Error::domain(format!("passenger {i} out of range 1..={n}")));
    }
    Ok(Rat::new((n - i + 1) as i64, (n - i + k + 1) as i64))
}

/// For one absent-minded passenger and a nonempty `S` within `{2..n}`,
/// the probabilities that all members of `S` sit wrong and that all sit
/// right:
///
/// ```text
/// all wrong: prod_{i in S} 1/(n+2-i)      all right: prod_{i in S} (n+1-i)/(n+2-i)
/// ```
///
/// These are the top coefficient and the constant term of the marginalized
/// enumerator `prod_{i in S} (w_i + n + 1 - i)/(n + 2 - i)`.
pub fn subset_probabilities(n: usize, subset: &[usize]) -> Result<(Rat, Rat)> {
    if subset.is_empty() {
        return Err(Error::domain("need a nonempty subset"));
    }
    let mut all_wrong = Rat::one();
    let mut all_right = Rat::one();
    for &i in subset {
        if i < 2 || i > n {
            return Err(Error::domain(format!(
                "subset must lie within {{2..{n}}}, got passenger {i}"
            )));
        }
        all_wrong *= &Rat::new(1, (n + 2 - i) as i64);
        all_right *= &Rat::new((n + 1 - i) as i64, (n + 2 - i) as i64);
    }
    Ok((all_wrong, all_right))
}

/// Marginalizes a weight enumerator: sets `w_i := 1` for every variable
/// outside `keep` (a 1-based bit-set, bit `i-1` for `w_i`), leaving the
/// exact polynomial in the kept variables.
pub fn specialize_marginal(f: &MultilinearPoly, keep: u64) -> MultilinearPoly {
    f.set_ones_outside(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_process, oracle_weight_enumerator, ProcessConfig};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn chain_matches_hand_expansion() {
        // n=2: 1/2 + (1/2) w1 w2
        let f = chain_weight_enumerator(2).unwrap();
        assert_eq!(f.coeff(0), rat(1, 2));
        assert_eq!(f.coeff(0b11), rat(1, 2));
        // n=3, cross-checked against the process oracle term by term
        let f = chain_weight_enumerator(3).unwrap();
        let oracle = oracle_weight_enumerator(ProcessConfig::new(3, 1).unwrap()).unwrap();
        assert_eq!(f, oracle);
        assert!(chain_weight_enumerator(1).is_err());
    }

    #[test]
    fn chain_state_invariants() {
        let chain = ChainState::build(5).unwrap();
        // a(n) = w_n
        assert_eq!(chain.a(5), &MultilinearPoly::variable(5, 5));
        // a(i) involves only w_i..w_n
        for i in 2..=5 {
            let support = chain.a(i).support_mask();
            let allowed = ((1u64 << 5) - 1) & !((1u64 << (i - 1)) - 1);
            assert_eq!(support & !allowed, 0, "a({i}) mentions early variables");
        }
    }

    #[test]
    fn closed_form_k1_small_cases() {
        // n=1: reduces to the constant 1
        let f = weight_enumerator_k1(1).unwrap();
        assert_eq!(f, MultilinearPoly::constant(1, Rat::one()));
        // n=2
        let f = weight_enumerator_k1(2).unwrap();
        assert_eq!(f.coeff(0), rat(1, 2));
        assert_eq!(f.coeff(0b11), rat(1, 2));
        // n=4: exactly one wrong-seated passenger is impossible
        let f = weight_enumerator_k1(4).unwrap();
        assert!(f.coeff(0b0001).is_zero());
        assert_eq!(f.eval_all_ones(), Rat::one());
    }

    #[test]
    fn chain_equals_closed_form_through_n_12() {
        for n in 2..=12 {
            assert_eq!(
                chain_weight_enumerator(n).unwrap(),
                weight_enumerator_k1(n).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn general_closed_form_reduces_to_k1() {
        for n in 1..=8 {
            assert_eq!(
                weight_enumerator(n, 1).unwrap(),
                weight_enumerator_k1(n).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn general_closed_form_matches_oracle() {
        for n in 2..=7 {
            for k in 1..=n.min(4) {
                let closed = weight_enumerator(n, k).unwrap();
                let oracle = oracle_weight_enumerator(ProcessConfig::new(n, k).unwrap()).unwrap();
                assert_eq!(closed, oracle, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn closed_form_preconditions() {
        assert!(weight_enumerator(2, 3).is_err());
        assert!(weight_enumerator(2, 0).is_err());
        assert!(weight_enumerator(63, 1).is_err());
    }

    #[test]
    fn pgf_small_cases() {
        // n=2, k=1: (1 + w^2)/2
        let f = pgf(2, 1).unwrap();
        assert_eq!(f.coeffs(), &[rat(1, 2), rat(0, 1), rat(1, 2)][..]);
        // n=k=1: the single passenger must sit correctly
        assert_eq!(pgf(1, 1).unwrap(), UniPoly::one());
        // n=3, k=1: (2 + 3w^2 + w^3)/6
        let f = pgf(3, 1).unwrap();
        assert_eq!(
            f.coeffs(),
            &[rat(1, 3), rat(0, 1), rat(1, 2), rat(1, 6)][..]
        );
        assert!(pgf(2, 3).is_err());
    }

    #[test]
    fn pgf_routes_and_diagonal_agree() {
        for n in 1..=20 {
            assert_eq!(pgf(n, 1).unwrap(), pgf_k1(n).unwrap(), "n={n}");
        }
        for n in 1..=10 {
            for k in 1..=n.min(4) {
                let diag = weight_enumerator(n, k).unwrap().diagonal();
                assert_eq!(diag, pgf(n, k).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pgf_boundary_values() {
        for n in 1..=30 {
            for k in 1..=n.min(4) {
                let f = pgf(n, k).unwrap();
                assert_eq!(f.eval(&Rat::one()), Rat::one(), "n={n} k={k}");
                let expect_zero = Rat::from_ratio(
                    factorial((n - k) as u64),
                    factorial(n as u64),
                );
                assert_eq!(f.eval(&Rat::zero()), expect_zero, "n={n} k={k}");
                if n >= 2 {
                    assert!(f.coeff(1).is_zero(), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn marginal_formula() {
        // the classical last-passenger answer
        for n in 2..=20 {
            assert_eq!(marginal_correct_prob(n, 1, n).unwrap(), rat(1, 2));
        }
        assert_eq!(marginal_correct_prob(4, 1, 3).unwrap(), rat(2, 3));
        assert_eq!(marginal_correct_prob(5, 2, 4).unwrap(), rat(1, 2));
        assert!(marginal_correct_prob(5, 2, 2).is_err());
        assert!(marginal_correct_prob(5, 2, 6).is_err());
    }

    #[test]
    fn marginal_matches_enumerator_and_oracle() {
        for n in 2..=7 {
            for k in 1..=n.min(3) {
                let f = weight_enumerator(n, k).unwrap();
                let d = enumerate_process(ProcessConfig::new(n, k).unwrap()).unwrap();
                for i in (k + 1)..=n {
                    let formula = marginal_correct_prob(n, k, i).unwrap();
                    // constant term of the w_i marginal = P(i correct)
                    let marg = specialize_marginal(&f, 1 << (i - 1));
                    assert_eq!(marg.coeff(0), formula, "n={n} k={k} i={i}");
                    assert_eq!(d.prob_correct(i), formula, "oracle n={n} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn subset_probability_products() {
        // n=3, S={3}: both probabilities are 1/2
        assert_eq!(subset_probabilities(3, &[3]).unwrap(), (rat(1, 2), rat(1, 2)));
        // n=4, S={2,3}
        assert_eq!(
            subset_probabilities(4, &[2, 3]).unwrap(),
            (rat(1, 12), rat(1, 2))
        );
        // n=4, S={4}: last-passenger again
        assert_eq!(subset_probabilities(4, &[4]).unwrap().1, rat(1, 2));
        assert!(subset_probabilities(4, &[1, 2]).is_err());
        assert!(subset_probabilities(4, &[5]).is_err());
        assert!(subset_probabilities(4, &[]).is_err());
    }

    #[test]
    fn subset_probabilities_match_marginalized_enumerator() {
        for n in 2..=8 {
            let f = weight_enumerator_k1(n).unwrap();
            // all nonempty subsets of {2..n}
            for mask in 1u64..(1 << (n - 1)) {
                let subset: Vec<usize> =
                    (2..=n).filter(|i| mask & (1 << (i - 2)) != 0).collect();
                let keep: u64 = subset.iter().map(|i| 1u64 << (i - 1)).sum();
                let marg = specialize_marginal(&f, keep);
                let (all_wrong, all_right) = subset_probabilities(n, &subset).unwrap();
                assert_eq!(marg.coeff(keep), all_wrong, "n={n} S={subset:?}");
                assert_eq!(marg.coeff(0), all_right, "n={n} S={subset:?}");
            }
        }
    }

    #[test]
    fn specialize_marginal_examples() {
        let f = weight_enumerator_k1(4).unwrap();
        // keep = {3}: (w_3 + 2)/3
        let m = specialize_marginal(&f, 0b100);
        assert_eq!(m.coeff(0), rat(2, 3));
        assert_eq!(m.coeff(0b100), rat(1, 3));
        assert_eq!(m.num_terms(), 2);
        // keep everything: unchanged; keep nothing: the scalar 1
        let f3 = weight_enumerator_k1(3).unwrap();
        assert_eq!(specialize_marginal(&f3, 0b111), f3);
        assert_eq!(
            specialize_marginal(&f3, 0),
            MultilinearPoly::constant(3, Rat::one())
        );
    }

    #[test]
    fn correct_seat_events_are_independent() {
        // Joint correct-seat probabilities factorize, both in the oracle and
        // in the marginalized closed form.
        for n in 2..=7 {
            for k in 1..=n.min(3) {
                let d = enumerate_process(ProcessConfig::new(n, k).unwrap()).unwrap();
                let f = weight_enumerator(n, k).unwrap();
                for i in (k + 1)..=n {
                    for j in (i + 1)..=n {
                        let joint = d.prob_all_correct(&[i, j]);
                        let prod = d.prob_correct(i) * d.prob_correct(j);
                        assert_eq!(joint, prod, "oracle n={n} k={k} i={i} j={j}");
                        let keep = (1u64 << (i - 1)) | (1u64 << (j - 1));
                        let pair = specialize_marginal(&f, keep);
                        let left = specialize_marginal(&f, 1 << (i - 1));
                        let right = specialize_marginal(&f, 1 << (j - 1));
                        assert_eq!(
                            pair,
                            left.try_mul(&right).unwrap(),
                            "factorization n={n} k={k} i={i} j={j}"
                        );
                    }
                }
            }
        }
    }
}
