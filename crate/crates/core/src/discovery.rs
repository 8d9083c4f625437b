//! Discovery engine: ansatz fitting and linear-recurrence guessing.
//!
//! Two kinds of structure are recovered from exact data. A harmonic ansatz
//! posits that a sequence is a polynomial in `n, Hn[1], .., Hn[R]` over a
//! power of `n` and solves the exact interpolation system for the unknown
//! coefficients; this is how the built-in moment formulas can be refound
//! from generating-function data alone. A recurrence guess posits
//! `sum_j c_j(n, w) f_{n+j}(w) = 0` with rational-function coefficients of
//! bounded degree and extracts the coefficients from the kernel of an exact
//! linear system, matching powers of `w` symbolically rather than sampling
//! `w` at points.
//!
//! Guessing is not proving: every candidate must additionally survive
//! validation on held-out data (five points for an ansatz, ten index values
//! for a recurrence) before it is reported, and `NoFit` is the honest
//! outcome for a wrong ansatz, not an error in the engine.

use crate::enumerators::pgf;
use crate::error::{Error, Result};
use crate::linalg::{self, LinSolve};
use crate::moments::{harmonic_prefix, HarmonicExpr};
use crate::poly::{BivarPoly, BivarRatFun, Exp, UniPoly};
use crate::rat::Rat;
use std::collections::HashMap;

/// Finite monomial basis for a harmonic-ansatz fit.
///
/// The basis consists of all monomials `n^a * prod_r Hn[r]^{b_r}` with
/// `a + sum b_r <= max_total_deg`, optionally sharpened by a cap on `a`
/// and/or on the weight `sum_r r * b_r`; the fitted expression is the basis
/// combination divided by `n^denom_pow`. The basis order is fixed
/// (graded-lex) so fits are reproducible.
#[derive(Clone, Debug)]
pub struct AnsatzSpec {
    pub r_max: usize,
    pub max_total_deg: u32,
    pub denom_pow: u32,
    /// Optional cap on the exponent of `n` in basis monomials.
    pub max_n_deg: Option<u32>,
    /// Optional cap on the harmonic weight `sum_r r * b_r`.
    pub max_weight: Option<u32>,
}

impl AnsatzSpec {
    pub fn new(r_max: usize, max_total_deg: u32, denom_pow: u32) -> Self {
        AnsatzSpec {
            r_max,
            max_total_deg,
            denom_pow,
            max_n_deg: None,
            max_weight: None,
        }
    }

    pub fn with_n_deg_cap(mut self, cap: u32) -> Self {
        self.max_n_deg = Some(cap);
        self
    }

    pub fn with_weight_cap(mut self, cap: u32) -> Self {
        self.max_weight = Some(cap);
        self
    }

    /// The monomial basis in its fixed order.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.r_max + 1];
        self.extend_basis(&mut exps, 0, 0, 0, &mut out);
        // graded-lex: total degree first, then the exponent vector itself
        out.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
        out
    }

    pub fn basis_size(&self) -> usize {
        self.basis().len()
    }

    fn extend_basis(
        &self,
        exps: &mut Vec<u32>,
        var: usize,
        used_deg: u32,
        used_weight: u32,
        out: &mut Vec<Vec<u32>>,
    ) {
        if var == exps.len() {
            out.push(exps.clone());
            return;
        }
        let deg_room = self.max_total_deg - used_deg;
        let max_here = if var == 0 {
            self.max_n_deg.map_or(deg_room, |cap| cap.min(deg_room))
        } else {
            match self.max_weight {
                Some(cap) => deg_room.min((cap - used_weight) / var as u32),
                None => deg_room,
            }
        };
        for e in 0..=max_here {
            exps[var] = e;
            let w = used_weight + if var == 0 { 0 } else { e * var as u32 };
            self.extend_basis(exps, var + 1, used_deg + e, w, out);
        }
        exps[var] = 0;
    }
}

/// A fitted harmonic expression. `unique` is false when the interpolation
/// system had a positive-dimensional solution space and the reported
/// expression is the deterministic representative with free coefficients
/// pinned to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittedExpr {
    pub expr: HarmonicExpr,
    pub unique: bool,
}

/// Number of data points held out of the solve to validate an ansatz fit.
const ANSATZ_HOLDOUT: usize = 5;

/// Number of index values held out to validate a guessed recurrence.
const RECURRENCE_HOLDOUT: usize = 10;

/// Fits `spec`'s ansatz to exact `(n, value)` data.
///
/// The last five points are withheld from the linear solve and must be
/// reproduced exactly by the fitted expression; `NoFit` signals an ansatz
/// that cannot represent the data (inconsistent system or failed
/// validation).
pub fn fit_harmonic_ansatz(data: &[(u64, Rat)], spec: &AnsatzSpec) -> Result<FittedExpr> {
    let basis = spec.basis();
    let dim = basis.len();
    if data.len() < dim + ANSATZ_HOLDOUT {
        return Err(Error::domain(format!(
            "need at least {} data points for a basis of dimension {dim} \
             (plus {ANSATZ_HOLDOUT} held out), got {}",
            dim + ANSATZ_HOLDOUT,
            data.len()
        )));
    }
    let (train, holdout) = data.split_at(data.len() - ANSATZ_HOLDOUT);
    let mut rows = Vec::with_capacity(train.len());
    let mut rhs = Vec::with_capacity(train.len());
    for &(n, ref y) in train {
        let harmonics = harmonic_prefix(n, spec.r_max as u32);
        let n_rat = Rat::from(n);
        let row: Vec<Rat> = basis
            .iter()
            .map(|exps| {
                let mut v = n_rat.pow(exps[0]);
                for (r, &e) in exps[1..].iter().enumerate() {
                    if e > 0 {
                        v *= &harmonics[r].pow(e);
                    }
                }
                v
            })
            .collect();
        rows.push(row);
        rhs.push(y * &n_rat.pow(spec.denom_pow));
    }
    let (coeffs, unique) = match linalg::solve(&rows, &rhs) {
        LinSolve::Unique(c) => (c, true),
        LinSolve::Affine { particular, .. } => (particular, false),
        LinSolve::Inconsistent => {
            return Err(Error::no_fit(format!(
                "no expression over a dimension-{dim} basis (R={}, degree <= {}, /n^{}) \
                 interpolates the data",
                spec.r_max, spec.max_total_deg, spec.denom_pow
            )))
        }
    };
    let expr = HarmonicExpr::from_terms(
        spec.r_max,
        spec.denom_pow,
        basis.into_iter().zip(coeffs),
    );
    for &(n, ref y) in holdout {
        if &expr.eval_exact(n) != y {
            return Err(Error::no_fit(format!(
                "candidate fails held-out validation at n={n} \
                 (basis dimension {dim}); the ansatz is too small or wrong"
            )));
        }
    }
    Ok(FittedExpr { expr, unique })
}

/// Exact central-moment data `(n, m_r(n))` (mean for `r = 1`) computed from
/// the generating function, independent of the built-in closed forms.
pub fn moment_data(r: usize, n_range: std::ops::RangeInclusive<u64>) -> Result<Vec<(u64, Rat)>> {
    let mut out = Vec::new();
    for n in n_range {
        let m = crate::moments::moments_from_pgf(&pgf(n as usize, 1)?, r.max(2))?;
        let value = if r == 1 {
            m.mean.clone()
        } else {
            m.central_moment(r).clone()
        };
        out.push((n, value));
    }
    Ok(out)
}

/// Order-`L` linear recurrence `sum_{j=0}^{L} c_j(n, w) f_{n+j}(w) = 0` for
/// the generating functions with `k` absent-minded passengers, normalized
/// monic (`c_L = 1`). The trailing coefficient `c_0` is not identically
/// zero, so the stated order is genuine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSpec {
    k: usize,
    coeffs: Vec<BivarRatFun>,
}

impl RecurrenceSpec {
    pub fn new(k: usize, coeffs: Vec<BivarRatFun>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::domain("a recurrence needs order at least 1"));
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::domain("recurrences are normalized monic (c_L = 1)"));
        }
        if coeffs[0].is_zero() {
            return Err(Error::domain(
                "c_0 vanishes identically: the true order is lower",
            ));
        }
        Ok(RecurrenceSpec { k, coeffs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `c_j` for `0 <= j <= order`.
    pub fn coeff(&self, j: usize) -> &BivarRatFun {
        &self.coeffs[j]
    }

    /// Equality as rational functions after monic normalization.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.k == other.k
            && self.order() == other.order()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.equivalent(b))
    }
}

/// Transcribed recurrences for `k = 1, 2, 3` (orders 2, 3, 4).
///
/// There is no built-in table entry beyond `k = 3`; higher `k` is the
/// business of [`guess_recurrence`], with [`verify_recurrence`] as the
/// acceptance oracle.
pub fn builtin_recurrence(k: usize) -> Result<RecurrenceSpec> {
    // shorthands for linear and general quadratic bivariate polynomials
    let lin = BivarPoly::affine;
    let quad = |nn: i64, nw: i64, ww: i64, n: i64, w: i64, c: i64| {
        let mut p = BivarPoly::zero();
        p.add_term(Exp(2, 0), Rat::from(nn));
        p.add_term(Exp(1, 1), Rat::from(nw));
        p.add_term(Exp(0, 2), Rat::from(ww));
        p.add_term(Exp(1, 0), Rat::from(n));
        p.add_term(Exp(0, 1), Rat::from(w));
        p.add_term(Exp(0, 0), Rat::from(c));
        p
    };
    let coeffs = match k {
        1 => vec![
            // n(n+w) / ((n+2)(n+1))
            BivarRatFun::new(
                BivarPoly::var_n().mul(&lin(1, 1, 0)),
                lin(1, 0, 2).mul(&lin(1, 0, 1)),
            )?,
            // -(2n+w+1) / (n+2)
            BivarRatFun::new(lin(2, 1, 1).neg(), lin(1, 0, 2))?,
            BivarRatFun::one(),
        ],
        2 => vec![
            // -(n-1)(n+2w-1)(n+w-1) / ((n+3)(n+2)(n+1))
            BivarRatFun::new(
                lin(1, 0, -1).mul(&lin(1, 2, -1)).mul(&lin(1, 1, -1)).neg(),
                lin(1, 0, 3).mul(&lin(1, 0, 2)).mul(&lin(1, 0, 1)),
            )?,
            // (3n^2+6nw+2w^2-3n-3w+1) / ((n+3)(n+2))
            BivarRatFun::new(quad(3, 6, 2, -3, -3, 1), lin(1, 0, 3).mul(&lin(1, 0, 2)))?,
            // -3(n+w) / (n+3)
            BivarRatFun::new(lin(1, 1, 0).scale(&Rat::from(-3i64)), lin(1, 0, 3))?,
            BivarRatFun::one(),
        ],
        3 => vec![
            // (n-2)(n+2w-2)(n+3w-2)(n+w-2) / ((n+4)(n+3)(n+2)(n+1))
            BivarRatFun::new(
                lin(1, 0, -2)
                    .mul(&lin(1, 2, -2))
                    .mul(&lin(1, 3, -2))
                    .mul(&lin(1, 1, -2)),
                lin(1, 0, 4)
                    .mul(&lin(1, 0, 3))
                    .mul(&lin(1, 0, 2))
                    .mul(&lin(1, 0, 1)),
            )?,
            // -(2n+3w-3)(2n^2+6nw+2w^2-6n-9w+5) / ((n+4)(n+3)(n+2))
            BivarRatFun::new(
                lin(2, 3, -3).mul(&quad(2, 6, 2, -6, -9, 5)).neg(),
                lin(1, 0, 4).mul(&lin(1, 0, 3)).mul(&lin(1, 0, 2)),
            )?,
            // (6n^2+18nw+11w^2-12n-18w+7) / ((n+4)(n+3))
            BivarRatFun::new(quad(6, 18, 11, -12, -18, 7), lin(1, 0, 4).mul(&lin(1, 0, 3)))?,
            // -2(2n+3w-1) / (n+4)
            BivarRatFun::new(lin(2, 3, -1).scale(&Rat::from(-2i64)), lin(1, 0, 4))?,
            BivarRatFun::one(),
        ],
        _ => {
            return Err(Error::domain(format!(
                "no built-in recurrence for k={k}; use recurrence guessing"
            )))
        }
    };
    RecurrenceSpec::new(k, coeffs)
}

/// Location of the first failed identity in a recurrence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceFailure {
    pub n: usize,
    pub w_power: usize,
    pub residual: Rat,
}

/// Result of verifying a recurrence over a range of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceCheck {
    pub checked: usize,
    pub failure: Option<RecurrenceFailure>,
}

impl RecurrenceCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `sum_j c_j(n, w) f_{n+j}(w) = 0` as an exact polynomial identity
/// in `w` for every `n` in the range, after clearing denominators. Stops at
/// and reports the first failing `(n, w-power)`.
///
/// Fails with a domain error if some coefficient denominator vanishes
/// identically at an `n` in the range.
pub fn verify_recurrence(
    spec: &RecurrenceSpec,
    n_range: std::ops::RangeInclusive<usize>,
) -> Result<RecurrenceCheck> {
    let order = spec.order();
    let mut cache: HashMap<usize, UniPoly> = HashMap::new();
    let mut checked = 0;
    for n in n_range {
        if n < spec.k() {
            return Err(Error::domain(format!(
                "generating functions start at n = k (k={}, asked n={n})",
                spec.k()
            )));
        }
        let n_rat = Rat::from(n as u64);
        let mut nums = Vec::with_capacity(order + 1);
        let mut dens = Vec::with_capacity(order + 1);
        for j in 0..=order {
            let (num, den) = spec.coeff(j).eval_n(&n_rat);
            if den.is_zero() {
                return Err(Error::domain(format!(
                    "coefficient c_{j} has a vanishing denominator at n={n}"
                )));
            }
            nums.push(num);
            dens.push(den);
        }
        let mut combined = UniPoly::zero();
        for j in 0..=order {
            let m = n + j;
            let f = match cache.get(&m) {
                Some(f) => f.clone(),
                None => {
                    let f = pgf(m, spec.k())?;
                    cache.insert(m, f.clone());
                    f
                }
            };
            let mut term = &nums[j] * &f;
            for (i, den) in dens.iter().enumerate() {
                if i != j {
                    term = &term * den;
                }
            }
            combined = &combined + &term;
        }
        checked += 1;
        if !combined.is_zero() {
            let w_power = combined
                .coeffs()
                .iter()
                .position(|c| !c.is_zero())
                .expect("nonzero polynomial has a nonzero coefficient");
            return Ok(RecurrenceCheck {
                checked,
                failure: Some(RecurrenceFailure {
                    n,
                    w_power,
                    residual: combined.coeff(w_power),
                }),
            });
        }
    }
    Ok(RecurrenceCheck {
        checked,
        failure: None,
    })
}

/// Guesses an order-`order` recurrence for the `k`-passenger generating
/// functions, with coefficients `c_j = p_j(n, w) / q(n)` of bidegree at most
/// `(deg_n, deg_w)` (and `q` of degree at most `deg_n`), normalized monic.
///
/// The unknown coefficients satisfy a homogeneous linear system obtained by
/// matching coefficients of powers of `w` across sampled indices `n`; the
/// sample is grown until the system is overdetermined by at least ten
/// equations. Kernel vectors are then validated on ten held-out indices via
/// [`verify_recurrence`]; `NoFit` means the degree bounds cannot carry a
/// genuine recurrence, and the caller should raise them.
pub fn guess_recurrence(k: usize, order: usize, deg_n: u32, deg_w: u32) -> Result<RecurrenceSpec> {
    if k < 1 {
        return Err(Error::domain("need k >= 1"));
    }
    if order < 1 {
        return Err(Error::domain("need order >= 1"));
    }
    let per_p = ((deg_n + 1) * (deg_w + 1)) as usize;
    let q_cols = (deg_n + 1) as usize;
    let unknowns = order * per_p + q_cols;

    // Sample n = k, k+1, .. until the equation count comfortably exceeds the
    // unknown count; each n contributes one equation per power of w. Two
    // extra samples on top saturate the rank in edge cases.
    let mut samples = Vec::new();
    let mut equations = 0usize;
    let mut n = k;
    while equations < unknowns + RECURRENCE_HOLDOUT || samples.len() < order + 4 {
        let w_degree = (n + order).max(deg_w as usize + n + order - 1);
        equations += w_degree + 1;
        samples.push(n);
        n += 1;
    }

    let mut cache: HashMap<usize, UniPoly> = HashMap::new();
    let mut pgf_at = |m: usize| -> Result<UniPoly> {
        if let Some(f) = cache.get(&m) {
            return Ok(f.clone());
        }
        let f = pgf(m, k)?;
        cache.insert(m, f.clone());
        Ok(f)
    };

    let mut rows = Vec::with_capacity(equations);
    for &n0 in &samples {
        let n_rat = Rat::from(n0 as u64);
        let n_pows: Vec<Rat> = (0..=deg_n).map(|d| n_rat.pow(d)).collect();
        let fs: Vec<UniPoly> = (0..=order)
            .map(|j| pgf_at(n0 + j))
            .collect::<Result<_>>()?;
        let w_degree = (n0 + order).max(deg_w as usize + n0 + order - 1);
        for c in 0..=w_degree {
            let mut row = vec![Rat::zero(); unknowns];
            for (j, f) in fs.iter().enumerate().take(order) {
                for dw in 0..=(deg_w as usize).min(c) {
                    let fc = f.coeff(c - dw);
                    if fc.is_zero() {
                        continue;
                    }
                    for dn in 0..=deg_n as usize {
                        row[j * per_p + dn * (deg_w as usize + 1) + dw] = &n_pows[dn] * &fc;
                    }
                }
            }
            let lead = fs[order].coeff(c);
            if !lead.is_zero() {
                for dn in 0..=deg_n as usize {
                    row[order * per_p + dn] = &n_pows[dn] * &lead;
                }
            }
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }

    let kernel = linalg::kernel(&rows);
    if kernel.is_empty() {
        return Err(Error::no_fit(format!(
            "no order-{order} recurrence with bidegree ({deg_n}, {deg_w}) coefficients \
             fits k={k}; raise the order or the degree bounds"
        )));
    }

    let holdout_start = samples.last().unwrap() + 1;
    let holdout = holdout_start..=(holdout_start + RECURRENCE_HOLDOUT - 1);
    for vector in &kernel {
        let Some(candidate) = assemble_recurrence(k, order, deg_n, deg_w, vector) else {
            continue;
        };
        if verify_recurrence(&candidate, holdout.clone())?.passed() {
            return Ok(candidate);
        }
    }
    Err(Error::no_fit(format!(
        "kernel candidates for k={k}, order {order} fail held-out validation; \
         the degree bounds ({deg_n}, {deg_w}) are too tight"
    )))
}

/// Reconstructs a monic [`RecurrenceSpec`] from one kernel vector, or `None`
/// when the vector degenerates (`q = 0` or `c_0 = 0`).
fn assemble_recurrence(
    k: usize,
    order: usize,
    deg_n: u32,
    deg_w: u32,
    vector: &[Rat],
) -> Option<RecurrenceSpec> {
    let per_p = ((deg_n + 1) * (deg_w + 1)) as usize;
    let mut q = BivarPoly::zero();
    for dn in 0..=deg_n {
        q.add_term(
            Exp(dn, 0),
            vector[order * per_p + dn as usize].clone(),
        );
    }
    if q.is_zero() {
        return None;
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    for j in 0..order {
        let mut p = BivarPoly::zero();
        for dn in 0..=deg_n {
            for dw in 0..=deg_w {
                p.add_term(
                    Exp(dn, dw),
                    vector[j * per_p + (dn * (deg_w + 1) + dw) as usize].clone(),
                );
            }
        }
        coeffs.push(BivarRatFun::new(p, q.clone()).expect("q is nonzero"));
    }
    coeffs.push(BivarRatFun::one());
    RecurrenceSpec::new(k, coeffs).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{harmonic, moment_from_formula};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn basis_generation_and_order() {
        let spec = AnsatzSpec::new(2, 2, 1);
        let basis = spec.basis();
        // 1, n, H1, H2, n^2, nH1, nH2, H1^2, H1H2, H2^2
        assert_eq!(basis.len(), 10);
        assert_eq!(basis[0], vec![0, 0, 0]);
        assert!(basis.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            (a.iter().sum::<u32>(), a) <= (b.iter().sum::<u32>(), b)
        }));
        // caps shrink the basis
        let capped = AnsatzSpec::new(2, 2, 1).with_n_deg_cap(1).with_weight_cap(2);
        // drops n^2 (n-cap), H1H2 (weight 3) and H2^2 (weight 4)
        assert_eq!(capped.basis_size(), 7);
    }

    #[test]
    fn fit_recovers_a_basis_element() {
        let data: Vec<(u64, Rat)> = (2..=20).map(|n| (n, harmonic(n, 1))).collect();
        let spec = AnsatzSpec::new(1, 1, 0);
        let fit = fit_harmonic_ansatz(&data, &spec).unwrap();
        assert_eq!(fit.expr, HarmonicExpr::parse("Hn[1]").unwrap());
    }

    #[test]
    fn fit_recovers_variance_formula() {
        let data = moment_data(2, 2..=30).unwrap();
        let spec = AnsatzSpec::new(2, 2, 1);
        let fit = fit_harmonic_ansatz(&data, &spec).unwrap();
        let expect = HarmonicExpr::parse("(n*Hn[1]-n*Hn[2]+2*Hn[1])/n").unwrap();
        assert_eq!(fit.expr, expect);
        assert!(fit.unique);
    }

    #[test]
    fn fit_rejects_data_outside_the_ansatz_space() {
        // primes are not a harmonic polynomial
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67];
        let data: Vec<(u64, Rat)> = primes
            .iter()
            .enumerate()
            .map(|(i, &p)| (i as u64 + 2, Rat::from(p)))
            .collect();
        let spec = AnsatzSpec::new(1, 1, 0);
        match fit_harmonic_ansatz(&data, &spec) {
            Err(Error::NoFit(_)) => {}
            other => panic!("expected NoFit, got {other:?}"),
        }
    }

    #[test]
    fn fit_requires_enough_points() {
        let data = vec![(2u64, Rat::one())];
        let spec = AnsatzSpec::new(1, 1, 0);
        assert!(matches!(
            fit_harmonic_ansatz(&data, &spec),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn builtin_recurrences_verify() {
        for k in 1..=3 {
            let spec = builtin_recurrence(k).unwrap();
            assert_eq!(spec.order(), k + 1);
            let report = verify_recurrence(&spec, k.max(1)..=25).unwrap();
            assert!(report.passed(), "k={k}: {:?}", report.failure);
        }
        assert!(builtin_recurrence(4).is_err());
    }

    #[test]
    fn perturbed_recurrence_fails_everywhere() {
        // adding 1/(n+2) to c_1 breaks the identity at every n
        let spec = builtin_recurrence(1).unwrap();
        let bump = BivarRatFun::new(BivarPoly::one(), BivarPoly::affine(1, 0, 2)).unwrap();
        let coeffs = vec![
            spec.coeff(0).clone(),
            spec.coeff(1).add(&bump),
            BivarRatFun::one(),
        ];
        let broken = RecurrenceSpec::new(1, coeffs).unwrap();
        for n in 2..=6 {
            let report = verify_recurrence(&broken, n..=n).unwrap();
            assert!(!report.passed(), "n={n} unexpectedly passed");
        }
    }

    #[test]
    fn verify_reports_failure_location() {
        let spec = builtin_recurrence(1).unwrap();
        let bump = BivarRatFun::new(BivarPoly::one(), BivarPoly::affine(1, 0, 2)).unwrap();
        let coeffs = vec![spec.coeff(0).clone(), spec.coeff(1).add(&bump), BivarRatFun::one()];
        let broken = RecurrenceSpec::new(1, coeffs).unwrap();
        let report = verify_recurrence(&broken, 2..=10).unwrap();
        let failure = report.failure.expect("must fail");
        assert_eq!(failure.n, 2);
        assert!(!failure.residual.is_zero());
    }

    #[test]
    fn guess_matches_builtin_for_k1() {
        let guessed = guess_recurrence(1, 2, 2, 1).unwrap();
        let builtin = builtin_recurrence(1).unwrap();
        assert!(guessed.equivalent(&builtin));
    }

    #[test]
    fn guess_order_one_has_no_solution() {
        match guess_recurrence(1, 1, 2, 1) {
            Err(Error::NoFit(_)) => {}
            other => panic!("expected NoFit, got {other:?}"),
        }
    }

    #[test]
    fn monic_normalization_enforced() {
        let spec = builtin_recurrence(1).unwrap();
        assert!(spec.coeff(2).is_one());
        // non-monic construction is rejected
        let bad = vec![BivarRatFun::one(), spec.coeff(0).clone()];
        assert!(RecurrenceSpec::new(1, bad).is_err());
        // identically-zero c_0 is rejected
        let degenerate = vec![BivarRatFun::zero(), BivarRatFun::one()];
        assert!(RecurrenceSpec::new(1, degenerate).is_err());
    }

    #[test]
    fn rediscovers_third_moment_formula() {
        let data = moment_data(3, 2..=40).unwrap();
        let spec = AnsatzSpec::new(3, 2, 1);
        let fit = fit_harmonic_ansatz(&data, &spec).unwrap();
        // equality as functions over a wide range
        for n in (2..=120).step_by(7) {
            assert_eq!(
                fit.expr.eval_exact(n),
                moment_from_formula(n, 3).unwrap(),
                "n={n}"
            );
        }
    }
}
