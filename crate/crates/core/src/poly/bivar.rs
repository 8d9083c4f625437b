//! Sparse bivariate polynomials in `(n, w)` and their quotients.
//!
//! Recurrence coefficients are rational functions of the index `n` and the
//! generating-function variable `w`. `BivarPoly` stores terms sparsely by
//! exponent pair; `BivarRatFun` is a normalized numerator/denominator pair.
//! Monomials are ordered graded-lexicographically with `n` before `w`; the
//! order is fixed so canonical forms are comparable.

use crate::error::{Error, Result};
use crate::poly::unipoly::UniPoly;
use crate::rat::Rat;
use num::bigint::BigInt;
use num::traits::{One, Zero};
use num::Integer;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent pair `(n-power, w-power)` under graded-lex order, `n` first.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Exp(pub u32, pub u32);

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let ta = self.0 + self.1;
        let tb = other.0 + other.1;
        ta.cmp(&tb).then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `(n, w)` over [`Rat`].
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<Exp, Rat>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(Exp(0, 0), c);
        p
    }

    pub fn one() -> Self {
        BivarPoly::constant(Rat::one())
    }

    pub fn var_n() -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(Exp(1, 0), Rat::one());
        p
    }

    pub fn var_w() -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(Exp(0, 1), Rat::one());
        p
    }

    /// `a*n + b*w + c`.
    pub fn affine(a: i64, b: i64, c: i64) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(Exp(1, 0), Rat::from(a));
        p.add_term(Exp(0, 1), Rat::from(b));
        p.add_term(Exp(0, 0), Rat::from(c));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp, &Rat)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Largest monomial under the fixed graded-lex order.
    pub fn leading(&self) -> Option<(Exp, &Rat)> {
        self.terms.iter().next_back().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: Exp) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree_n(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn degree_w(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        BivarPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BivarPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                out.add_term(Exp(ea.0 + eb.0, ea.1 + eb.1), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Full evaluation at rational `(n, w)`.
    pub fn eval(&self, n: &Rat, w: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in self.terms() {
            acc += c * &n.pow(e.0) * &w.pow(e.1);
        }
        acc
    }

    /// Partial evaluation `n := n0`, leaving a dense polynomial in `w`.
    pub fn eval_n(&self, n0: &Rat) -> UniPoly {
        let mut coeffs = vec![Rat::zero(); self.degree_w() as usize + 1];
        for (e, c) in self.terms() {
            coeffs[e.1 as usize] += c * &n0.pow(e.0);
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending monomial order reads most naturally.
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mag = c.abs();
            let has_vars = e.0 > 0 || e.1 > 0;
            if !mag.is_one() || !has_vars {
                write!(f, "{mag}")?;
                if has_vars {
                    write!(f, "*")?;
                }
            }
            match e.0 {
                0 => {}
                1 => write!(f, "n")?,
                p => write!(f, "n^{p}")?,
            }
            if e.0 > 0 && e.1 > 0 {
                write!(f, "*")?;
            }
            match e.1 {
                0 => {}
                1 => write!(f, "w")?,
                p => write!(f, "w^{p}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({})", self)
    }
}

/// Quotient of two bivariate polynomials, kept in canonical form:
/// the pair is integer with overall content 1, the denominator's leading
/// coefficient (graded-lex) is positive, and the denominator is nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivarRatFun {
    num: BivarPoly,
    den: BivarPoly,
}

impl BivarRatFun {
    pub fn new(num: BivarPoly, den: BivarPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        let mut f = BivarRatFun { num, den };
        f.normalize();
        Ok(f)
    }

    pub fn from_poly(p: BivarPoly) -> Self {
        let mut f = BivarRatFun {
            num: p,
            den: BivarPoly::one(),
        };
        f.normalize();
        f
    }

    pub fn zero() -> Self {
        BivarRatFun::from_poly(BivarPoly::zero())
    }

    pub fn one() -> Self {
        BivarRatFun::from_poly(BivarPoly::one())
    }

    pub fn num(&self) -> &BivarPoly {
        &self.num
    }

    pub fn den(&self) -> &BivarPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Removes rational content from the pair and fixes the denominator sign.
    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = BivarPoly::one();
            return;
        }
        // Common scale: lcm of denominators over gcd of numerators of every
        // coefficient in both polynomials, so that the pair becomes integer
        // with overall content 1.
        let mut denom_lcm = BigInt::one();
        let mut numer_gcd = BigInt::zero();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            denom_lcm = denom_lcm.lcm(c.denom());
            numer_gcd = numer_gcd.gcd(c.numer());
        }
        let scale = Rat::from_ratio(denom_lcm, numer_gcd);
        self.num = self.num.scale(&scale);
        self.den = self.den.scale(&scale);
        if self
            .den
            .leading()
            .map_or(false, |(_, c)| c.is_negative())
        {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
    }

    pub fn neg(&self) -> Self {
        BivarRatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        BivarRatFun::new(num, den).expect("nonzero denominators multiply to nonzero")
    }

    /// Equality as rational functions (cross multiplication), independent of
    /// common polynomial factors the canonical form cannot cancel.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Numerator and denominator at `n := n0`, as dense polynomials in `w`.
    pub fn eval_n(&self, n0: &Rat) -> (UniPoly, UniPoly) {
        (self.num.eval_n(n0), self.den.eval_n(n0))
    }

    /// Full evaluation; fails where the denominator vanishes.
    pub fn eval(&self, n: &Rat, w: &Rat) -> Result<Rat> {
        let d = self.den.eval(n, w);
        if d.is_zero() {
            return Err(Error::domain(format!(
                "denominator vanishes at (n, w) = ({n}, {w})"
            )));
        }
        Ok(self.num.eval(n, w) / d)
    }
}

impl fmt::Display for BivarRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == BivarPoly::one() {
            if self.num.terms().count() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
