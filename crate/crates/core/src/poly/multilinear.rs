//! Subset-indexed multilinear polynomial over [`Rat`].
//!
//! A `MultilinearPoly` in the variables `w_1..w_n` maps each subset of
//! `{1..n}` (stored as a bit-set, bit `i-1` for variable `w_i`) to an exact
//! rational coefficient. Weight enumerators of boarding outcomes live here.
//!
//! Terms are kept in a vector sorted by subset key with no zero
//! coefficients; the hot operations (adding enumerators, multiplying by an
//! affine factor `a*w_i + b`) are linear merges over that order, which is
//! what keeps the degree-20 chain computations fast. Invariants: every key
//! is a subset of `{1..n}` and `n <= 62` (the key is a 64-bit word; anything
//! larger would have up to 2^n terms and be infeasible anyway).

use crate::error::{Error, Result};
use crate::poly::unipoly::UniPoly;
use crate::rat::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// Hard cap on the number of variables (bit-set representation).
pub const MAX_VARS: usize = 62;

/// Multilinear polynomial in `w_1..w_n`, stored sparsely by variable subset.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultilinearPoly {
    n: usize,
    /// Sorted by key; no zero coefficients.
    terms: Vec<(u64, Rat)>,
}

impl MultilinearPoly {
    /// The zero polynomial over `n` variables.
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables supported");
        MultilinearPoly {
            n,
            terms: Vec::new(),
        }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        let mut p = MultilinearPoly::zero(n);
        if !c.is_zero() {
            p.terms.push((0, c));
        }
        p
    }

    /// The variable `w_i` (1-based, `1 <= i <= n`).
    pub fn variable(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "variable index out of range");
        let mut p = MultilinearPoly::zero(n);
        p.terms.push((1u64 << (i - 1), Rat::one()));
        p
    }

    /// Number of ambient variables.
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial indexed by `subset` (bit `i-1` = `w_i`).
    pub fn coeff(&self, subset: u64) -> Rat {
        match self.terms.binary_search_by_key(&subset, |t| t.0) {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Iterates terms as `(subset, coefficient)` in increasing subset order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Union of the variables appearing in any term.
    pub fn support_mask(&self) -> u64 {
        self.terms.iter().fold(0, |acc, (k, _)| acc | k)
    }

    fn from_sorted(n: usize, terms: Vec<(u64, Rat)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0), "unsorted terms");
        MultilinearPoly { n, terms }
    }

    /// Adds `c * w^subset` in place.
    pub fn add_term(&mut self, subset: u64, c: Rat) {
        debug_assert!(subset < (1u64 << self.n), "subset outside {{1..n}}");
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&subset, |t| t.0) {
            Ok(idx) => {
                self.terms[idx].1 += c;
                if self.terms[idx].1.is_zero() {
                    self.terms.remove(idx);
                }
            }
            Err(idx) => self.terms.insert(idx, (subset, c)),
        }
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "operand variable counts differ ({} vs {})",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Merges two key-sorted term runs, combining equal keys.
    fn merge(n: usize, a: Vec<(u64, Rat)>, b: Vec<(u64, Rat)>) -> Self {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut ia = a.into_iter().peekable();
        let mut ib = b.into_iter().peekable();
        loop {
            match (ia.peek(), ib.peek()) {
                (Some(&(ka, _)), Some(&(kb, _))) => {
                    if ka < kb {
                        out.push(ia.next().unwrap());
                    } else if kb < ka {
                        out.push(ib.next().unwrap());
                    } else {
                        let (k, ca) = ia.next().unwrap();
                        let (_, cb) = ib.next().unwrap();
                        let c = ca + cb;
                        if !c.is_zero() {
                            out.push((k, c));
                        }
                    }
                }
                (Some(_), None) => {
                    out.extend(ia);
                    break;
                }
                (None, _) => {
                    out.extend(ib);
                    break;
                }
            }
        }
        MultilinearPoly::from_sorted(n, out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        Ok(Self::merge(self.n, self.terms.clone(), other.terms.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let negated = other.terms.iter().map(|(k, c)| (*k, -c)).collect();
        Ok(Self::merge(self.n, self.terms.clone(), negated))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MultilinearPoly::zero(self.n);
        }
        MultilinearPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by the affine factor `a*w_i + b`.
    ///
    /// Fails if the operand already mentions `w_i`: the product would leave
    /// the multilinear space. Setting a common bit preserves key order, so
    /// both partial products are sorted runs and the result is one merge.
    pub fn mul_affine(&self, i: usize, a: &Rat, b: &Rat) -> Result<Self> {
        if i < 1 || i > self.n {
            return Err(Error::domain(format!(
                "variable w_{i} out of range 1..={}",
                self.n
            )));
        }
        let bit = 1u64 << (i - 1);
        if self.support_mask() & bit != 0 {
            return Err(Error::domain(format!(
                "multilinearity violated: operand already contains w_{i}"
            )));
        }
        let without: Vec<(u64, Rat)> = if b.is_zero() {
            Vec::new()
        } else if b.is_one() {
            self.terms.clone()
        } else {
            self.terms.iter().map(|(k, c)| (*k, c * b)).collect()
        };
        let with: Vec<(u64, Rat)> = if a.is_zero() {
            Vec::new()
        } else if a.is_one() {
            self.terms.iter().map(|(k, c)| (k | bit, c.clone())).collect()
        } else {
            self.terms.iter().map(|(k, c)| (k | bit, c * a)).collect()
        };
        Ok(Self::merge(self.n, without, with))
    }

    /// Exact multiplication, defined only when no variable occurs on both
    /// sides of any term pair (otherwise a square `w_i^2` would appear).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mask_a = self.support_mask();
        let mask_b = other.support_mask();
        if mask_a & mask_b != 0 {
            // A shared variable only violates multilinearity if it meets
            // itself in some term pair; scan for a witness.
            for (ka, _) in self.terms() {
                for (kb, _) in other.terms() {
                    if ka & kb != 0 {
                        let i = (ka & kb).trailing_zeros() + 1;
                        return Err(Error::domain(format!(
                            "multilinearity violated: both factors contain w_{i}"
                        )));
                    }
                }
            }
        }
        // Disjoint supports. When one support sits entirely above the other,
        // products stream out in sorted order; otherwise aggregate.
        let (hi, lo) = if mask_a < mask_b { (other, self) } else { (self, other) };
        let lo_mask = lo.support_mask();
        if hi
            .support_mask()
            .trailing_zeros()
            .ge(&(64 - lo_mask.leading_zeros()))
            || lo.is_zero()
            || hi.is_zero()
        {
            let mut out = Vec::with_capacity(hi.num_terms() * lo.num_terms());
            for (kh, ch) in hi.terms() {
                for (kl, cl) in lo.terms() {
                    out.push((kh | kl, ch * cl));
                }
            }
            return Ok(Self::from_sorted(self.n, out));
        }
        let mut out = MultilinearPoly::zero(self.n);
        for (ka, ca) in self.terms() {
            for (kb, cb) in other.terms() {
                out.add_term(ka | kb, ca * cb);
            }
        }
        Ok(out)
    }

    /// Exact division by `w_i`; every term must contain `w_i`.
    ///
    /// Clearing a bit common to all keys preserves their order.
    pub fn divide_by_var(&self, i: usize) -> Result<Self> {
        if i < 1 || i > self.n {
            return Err(Error::domain(format!(
                "variable w_{i} out of range 1..={}",
                self.n
            )));
        }
        let bit = 1u64 << (i - 1);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in self.terms() {
            if k & bit == 0 {
                return Err(Error::domain(format!(
                    "division by w_{i}: a term lacks that variable"
                )));
            }
            terms.push((k & !bit, c.clone()));
        }
        Ok(Self::from_sorted(self.n, terms))
    }

    /// Sets `w_i := 1` for every variable outside `keep` (a bit-set).
    pub fn set_ones_outside(&self, keep: u64) -> Self {
        let mut folded: BTreeMap<u64, Rat> = BTreeMap::new();
        for (k, c) in self.terms() {
            let entry = folded.entry(k & keep).or_insert_with(Rat::zero);
            *entry += c;
        }
        MultilinearPoly {
            n: self.n,
            terms: folded.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Full evaluation at the point `values[i-1] = w_i`.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.n, "evaluation point arity mismatch");
        let mut acc = Rat::zero();
        for (k, c) in self.terms() {
            let mut term = c.clone();
            let mut bits = k;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                term *= &values[i];
                bits &= bits - 1;
            }
            acc += term;
        }
        acc
    }

    /// Evaluation with every variable set to 1 (the normalization value for
    /// a probability enumerator).
    pub fn eval_all_ones(&self) -> Rat {
        self.terms.iter().map(|(_, c)| c.clone()).sum()
    }

    /// Diagonal specialization `w_i := w` for all `i`, as a dense polynomial.
    pub fn diagonal(&self) -> UniPoly {
        let mut coeffs = vec![Rat::zero(); self.n + 1];
        for (k, c) in self.terms() {
            coeffs[k.count_ones() as usize] += c;
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if first {
                write!(f, "{c}")?;
            } else if c.is_negative() {
                write!(f, " - {}", c.abs())?;
            } else {
                write!(f, " + {c}")?;
            }
            first = false;
            let mut bits = k;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize + 1;
                write!(f, "*w{i}")?;
                bits &= bits - 1;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearPoly[n={}]({})", self.n, self)
    }
}

/// All elementary variants `e_0..e_k` over `w_1..w_k`, embedded in an ambient
/// variable count `n >= k`: `e_r` is the coefficient of `X^r` in
/// `prod_{j=1}^{k} ((1 - w_j) X + w_j)`.
pub fn elementary_variants(n: usize, k: usize) -> Result<Vec<MultilinearPoly>> {
    if k > n {
        return Err(Error::domain(format!("need k <= n, got k={k}, n={n}")));
    }
    if n > MAX_VARS {
        return Err(Error::domain(format!(
            "n={n} exceeds the {MAX_VARS}-variable cap"
        )));
    }
    // Coefficients in X, built factor by factor.
    let mut coeffs = vec![MultilinearPoly::constant(n, Rat::one())];
    for j in 1..=k {
        let one = Rat::one();
        let minus_one = Rat::new(-1, 1);
        let mut next = Vec::with_capacity(coeffs.len() + 1);
        // X^0 picks up the w_j part of the new factor.
        next.push(coeffs[0].mul_affine(j, &one, &Rat::zero())?);
        for r in 1..=j {
            // (1 - w_j) * coeff_{r-1} + w_j * coeff_r
            let hi = coeffs[r - 1].mul_affine(j, &minus_one, &one)?;
            let lo = if r < coeffs.len() {
                coeffs[r].mul_affine(j, &one, &Rat::zero())?
            } else {
                MultilinearPoly::zero(n)
            };
            next.push(hi.add(&lo)?);
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// A single elementary variant, in symbolic form.
pub fn elementary_variant(n: usize, k: usize, r: usize) -> Result<MultilinearPoly> {
    if r > k {
        return Err(Error::domain(format!("index r={r} out of range 0..={k}")));
    }
    Ok(elementary_variants(n, k)?.swap_remove(r))
}

/// Elementary variants evaluated at scalar arguments.
pub fn elementary_variants_scalar(w: &[Rat]) -> Vec<Rat> {
    let mut coeffs = vec![Rat::one()];
    for wj in w {
        let one_minus = Rat::one() - wj;
        let mut next = Vec::with_capacity(coeffs.len() + 1);
        next.push(&coeffs[0] * wj);
        for r in 1..=coeffs.len() {
            let hi = &coeffs[r - 1] * &one_minus;
            let lo = if r < coeffs.len() {
                &coeffs[r] * wj
            } else {
                Rat::zero()
            };
            next.push(hi + lo);
        }
        coeffs = next;
    }
    coeffs
}
