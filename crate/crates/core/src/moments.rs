//! Exact moments of the wrong-seated count and their harmonic closed forms.
//!
//! With one absent-minded passenger, every central moment of the wrong-count
//! random variable has a closed form that is polynomial in `n` and in the
//! partial sums `Hn[r] := sum_{i=1}^{n-1} 1/i^r` (note the upper limit
//! `n - 1`, which keeps the formulas small), divided by a power of `n`.
//! [`HarmonicExpr`] represents such expressions canonically, parses and
//! prints them in a plain `computereze` syntax like
//! `(n*Hn[1]-n*Hn[2]+2*Hn[1])/n`, and evaluates them exactly or in floating
//! point. The built-in formulas for the mean and the central moments up to
//! order six are stored verbatim as such strings; the equality suite against
//! [`moments_from_pgf`] makes any transcription slip self-revealing.

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::rat::{binomial, stirling2, Rat};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

/// Exact generalized harmonic number `sum_{i=1}^{n-1} 1/i^r`.
///
/// The empty sum at `n = 1` is zero.
pub fn harmonic(n: u64, r: u32) -> Rat {
    assert!(n >= 1 && r >= 1, "harmonic(n, r) needs n >= 1 and r >= 1");
    let mut acc = Rat::zero();
    for i in 1..n {
        acc += Rat::from(i).pow(r).recip();
    }
    acc
}

/// All of `harmonic(n, 1..=r_max)` in one pass.
pub fn harmonic_prefix(n: u64, r_max: u32) -> Vec<Rat> {
    let mut acc = vec![Rat::zero(); r_max as usize];
    for i in 1..n {
        let base = Rat::from(i);
        let mut power = base.clone();
        for slot in acc.iter_mut() {
            *slot += power.recip();
            power *= &base;
        }
    }
    acc
}

/// Floating-point `sum_{i=1}^{n-1} 1/i^r`, summed smallest-first.
///
/// Direct summation in doubles: the accumulated relative error is below
/// `(n-1) * eps`, i.e. ~1e-10 at `n = 1e6`, far inside every tolerance used
/// on the floating surfaces.
pub fn harmonic_f64(n: u64, r: u32) -> f64 {
    let mut acc = 0.0f64;
    for i in (1..n).rev() {
        acc += (i as f64).powi(-(r as i32));
    }
    acc
}

/// Polynomial in `n, Hn[1], .., Hn[R]` divided by a power of `n`, stored
/// canonically: no zero coefficients and the denominator power minimal (the
/// numerator is not divisible by `n` while the power is positive).
///
/// Exponent keys are vectors `[n, Hn[1], .., Hn[R]]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HarmonicExpr {
    r_max: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
    denom_pow: u32,
}

impl HarmonicExpr {
    pub fn new(r_max: usize, denom_pow: u32) -> Self {
        HarmonicExpr {
            r_max,
            terms: BTreeMap::new(),
            denom_pow,
        }
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn denom_pow(&self) -> u32 {
        self.denom_pow
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c * n^exps[0] * prod_r Hn[r]^exps[r]` to the numerator.
    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.r_max + 1, "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Builds from `(exponents, coefficient)` pairs and canonicalizes.
    pub fn from_terms(
        r_max: usize,
        denom_pow: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Self {
        let mut e = HarmonicExpr::new(r_max, denom_pow);
        for (exps, c) in terms {
            e.add_term(exps, c);
        }
        e.reduce_denominator();
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Cancels `n` between numerator and denominator while possible.
    fn reduce_denominator(&mut self) {
        while self.denom_pow > 0
            && !self.terms.is_empty()
            && self.terms.keys().all(|e| e[0] >= 1)
        {
            self.denom_pow -= 1;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(mut e, c)| {
                    e[0] -= 1;
                    (e, c)
                })
                .collect();
        }
    }

    /// Exact evaluation with precomputed `harmonics[r-1] = Hn[r]`.
    pub fn eval_exact_with(&self, n: u64, harmonics: &[Rat]) -> Rat {
        assert!(harmonics.len() >= self.r_max, "missing harmonic values");
        let n_rat = Rat::from(n);
        let mut acc = Rat::zero();
        for (exps, c) in self.terms() {
            let mut term = c * &n_rat.pow(exps[0]);
            for (r, &e) in exps[1..].iter().enumerate() {
                if e > 0 {
                    term *= &harmonics[r].pow(e);
                }
            }
            acc += term;
        }
        acc / n_rat.pow(self.denom_pow)
    }

    /// Exact evaluation at integer `n >= 1`.
    pub fn eval_exact(&self, n: u64) -> Rat {
        self.eval_exact_with(n, &harmonic_prefix(n, self.r_max as u32))
    }

    /// Floating evaluation with directly summed harmonic values.
    pub fn eval_f64(&self, n: u64) -> f64 {
        let harmonics: Vec<f64> = (1..=self.r_max as u32)
            .map(|r| harmonic_f64(n, r))
            .collect();
        let nf = n as f64;
        let mut acc = 0.0;
        for (exps, c) in self.terms() {
            let mut term = c.to_f64() * nf.powi(exps[0] as i32);
            for (r, &e) in exps[1..].iter().enumerate() {
                if e > 0 {
                    term *= harmonics[r].powi(e as i32);
                }
            }
            acc += term;
        }
        acc / nf.powi(self.denom_pow as i32)
    }

    /// Parses the `computereze` syntax: sums of products of `n`, `Hn[r]`,
    /// integer or `p/q` constants and `^` powers, optionally all over
    /// `n` or `n^e`.
    pub fn parse(input: &str) -> Result<Self> {
        Parser::new(input)?.parse_top()
    }
}

impl fmt::Display for HarmonicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending graded-lex over the exponent vectors.
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|e| {
            (
                std::cmp::Reverse(e.iter().sum::<u32>()),
                std::cmp::Reverse((*e).clone()),
            )
        });
        let parenthesize = self.denom_pow > 0 && self.terms.len() > 1;
        if parenthesize {
            write!(f, "(")?;
        }
        for (idx, exps) in keys.iter().enumerate() {
            let c = &self.terms[*exps];
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let monomial_empty = exps.iter().all(|&e| e == 0);
            let mut need_star = false;
            if !mag.is_one() || monomial_empty {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
                need_star = true;
            }
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if need_star {
                    write!(f, "*")?;
                }
                need_star = true;
                if v == 0 {
                    write!(f, "n")?;
                } else {
                    write!(f, "Hn[{v}]")?;
                }
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        if parenthesize {
            write!(f, ")")?;
        }
        match self.denom_pow {
            0 => Ok(()),
            1 => write!(f, "/n"),
            e => write!(f, "/n^{e}"),
        }
    }
}

// ---- computereze parser ----

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    r_max: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self> {
        // Pre-scan for the largest harmonic order so exponent vectors have a
        // fixed arity from the start.
        let mut r_max = 0usize;
        for (i, _) in input.match_indices("Hn[") {
            let rest = &input[i + 3..];
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            let r: usize = digits
                .parse()
                .map_err(|_| Error::domain(format!("bad harmonic index near byte {i}")))?;
            r_max = r_max.max(r);
        }
        Ok(Parser {
            bytes: input.as_bytes(),
            pos: 0,
            r_max,
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.bump() {
            Some(got) if got == b => Ok(()),
            got => Err(Error::domain(format!(
                "expected '{}' at byte {}, found {:?}",
                b as char, self.pos, got.map(|g| g as char)
            ))),
        }
    }

    fn parse_uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::domain(format!("expected a number at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::domain(format!("bad number: {e}")))
    }

    fn parse_top(&mut self) -> Result<HarmonicExpr> {
        let numerator = self.parse_expr()?;
        let denom_pow = if self.peek() == Some(b'/') {
            self.bump();
            self.expect(b'n')?;
            if self.peek() == Some(b'^') {
                self.bump();
                self.parse_uint()? as u32
            } else {
                1
            }
        } else {
            0
        };
        if let Some(b) = self.peek() {
            return Err(Error::domain(format!(
                "trailing input at byte {}: '{}'",
                self.pos, b as char
            )));
        }
        Ok(HarmonicExpr::from_terms(
            self.r_max,
            denom_pow,
            numerator.terms,
        ))
    }

    fn parse_expr(&mut self) -> Result<HarmonicExpr> {
        let mut acc = HarmonicExpr::new(self.r_max, 0);
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.bump();
                true
            }
            Some(b'+') => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let term = self.parse_term()?;
            for (exps, c) in term.terms {
                acc.add_term(exps, if negate { -c } else { c });
            }
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    negate = false;
                }
                Some(b'-') => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<HarmonicExpr> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(b'*') {
            self.bump();
            let rhs = self.parse_factor()?;
            acc = mul_exprs(&acc, &rhs);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<HarmonicExpr> {
        let atom = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.parse_uint()? as u32;
            let mut acc = constant_expr(self.r_max, Rat::one());
            for _ in 0..e {
                acc = mul_exprs(&acc, &atom);
            }
            return Ok(acc);
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<HarmonicExpr> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'n') => {
                self.bump();
                let mut exps = vec![0u32; self.r_max + 1];
                exps[0] = 1;
                let mut e = HarmonicExpr::new(self.r_max, 0);
                e.add_term(exps, Rat::one());
                Ok(e)
            }
            Some(b'H') => {
                // Hn[r]
                self.bump();
                self.expect(b'n')?;
                self.expect(b'[')?;
                let r = self.parse_uint()? as usize;
                self.expect(b']')?;
                if r == 0 || r > self.r_max {
                    return Err(Error::domain(format!("harmonic index {r} out of range")));
                }
                let mut exps = vec![0u32; self.r_max + 1];
                exps[r] = 1;
                let mut e = HarmonicExpr::new(self.r_max, 0);
                e.add_term(exps, Rat::one());
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() => {
                let num = self.parse_uint()?;
                // A '/' directly followed by a digit continues a rational
                // constant; '/n' belongs to the top-level denominator.
                let mut value = Rat::from(num);
                if self.peek() == Some(b'/') {
                    let save = self.pos;
                    self.bump();
                    match self.peek() {
                        Some(d) if d.is_ascii_digit() => {
                            let den = self.parse_uint()?;
                            if den == 0 {
                                return Err(Error::domain("zero denominator in constant"));
                            }
                            value = value / Rat::from(den);
                        }
                        _ => self.pos = save,
                    }
                }
                Ok(constant_expr(self.r_max, value))
            }
            other => Err(Error::domain(format!(
                "unexpected input at byte {}: {:?}",
                self.pos,
                other.map(|b| b as char)
            ))),
        }
    }
}

fn constant_expr(r_max: usize, c: Rat) -> HarmonicExpr {
    let mut e = HarmonicExpr::new(r_max, 0);
    e.add_term(vec![0; r_max + 1], c);
    e
}

fn mul_exprs(a: &HarmonicExpr, b: &HarmonicExpr) -> HarmonicExpr {
    debug_assert_eq!(a.r_max, b.r_max);
    debug_assert_eq!(a.denom_pow + b.denom_pow, 0);
    let mut out = HarmonicExpr::new(a.r_max, 0);
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            out.add_term(exps, ca * cb);
        }
    }
    out
}

// ---- moments from the generating function ----

/// Mean and central moments `m_2..m_R`, all exact. `m_1` about the mean is
/// zero by construction and `m_2 >= 0`; both are checked in tests rather
/// than stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentVector {
    pub mean: Rat,
    /// `central[r - 2]` is the central moment of order `r`.
    pub central: Vec<Rat>,
}

impl MomentVector {
    /// Central moment `m_r` for `2 <= r <= order`.
    pub fn central_moment(&self, r: usize) -> &Rat {
        &self.central[r - 2]
    }

    pub fn order(&self) -> usize {
        self.central.len() + 1
    }
}

/// Exact mean and central moments up to order `r_max` of the distribution
/// generated by `f`, via factorial moments (derivatives of `f` at 1).
///
/// Fails unless `f(1) = 1`.
pub fn moments_from_pgf(f: &UniPoly, r_max: usize) -> Result<MomentVector> {
    if f.eval(&Rat::one()) != Rat::one() {
        return Err(Error::domain(
            "not a probability generating function: f(1) != 1",
        ));
    }
    // Factorial moments E[X(X-1)..(X-j+1)] = f^(j)(1).
    let mut factorial_moments = Vec::with_capacity(r_max + 1);
    let mut d = f.clone();
    factorial_moments.push(Rat::one());
    for _ in 1..=r_max {
        d = d.derivative();
        factorial_moments.push(d.eval(&Rat::one()));
    }
    // Raw moments via Stirling numbers of the second kind.
    let raw: Vec<Rat> = (0..=r_max)
        .map(|r| {
            (0..=r)
                .map(|j| {
                    Rat::from_bigint(stirling2(r as u64, j as u64)) * &factorial_moments[j]
                })
                .sum()
        })
        .collect();
    let mean = raw.get(1).cloned().unwrap_or_else(Rat::zero);
    // Central moments by the binomial transform.
    let central = (2..=r_max)
        .map(|r| {
            (0..=r)
                .map(|i| {
                    Rat::from_bigint(binomial(r as u64, i as u64))
                        * &raw[i]
                        * &(-&mean).pow((r - i) as u32)
                })
                .sum()
        })
        .collect();
    Ok(MomentVector { mean, central })
}

/// Closed-form expectation of the wrong-seated count for `1 <= k < n`:
/// `k * (1 + sum_{i=k+1}^{n-1} 1/i)`.
pub fn expected_wrong_count(n: usize, k: usize) -> Result<Rat> {
    if k < 1 || k >= n {
        return Err(Error::domain(format!(
            "the expectation formula needs 1 <= k < n (got n={n}, k={k}); \
             use the generating-function route otherwise"
        )));
    }
    let mut sum = Rat::one();
    for i in (k + 1)..n {
        sum += Rat::new(1, i as i64);
    }
    Ok(Rat::from(k as u64) * sum)
}

const MOMENT_FORMULAS: [&str; 6] = [
    // mean
    "Hn[1]",
    // variance
    "(n*Hn[1]-n*Hn[2]+2*Hn[1])/n",
    // third central moment
    "(n*Hn[1]-3*n*Hn[2]+2*n*Hn[3]-3*Hn[1]^2+6*Hn[1]-3*Hn[2])/n",
    // fourth
    "(3*n*Hn[1]^2-6*n*Hn[1]*Hn[2]+3*n*Hn[2]^2+4*Hn[1]^3+n*Hn[1]-7*n*Hn[2]+12*n*Hn[3]\
     -6*n*Hn[4]-6*Hn[1]^2+14*Hn[1]-18*Hn[2]+8*Hn[3])/n",
    // fifth
    "(-5*Hn[1]^4+10*n*Hn[1]^2-40*n*Hn[1]*Hn[2]+20*n*Hn[1]*Hn[3]\
     +30*n*Hn[2]^2-20*n*Hn[2]*Hn[3]+10*Hn[1]^3+n*Hn[1]-15*n*Hn[2]+50*n*Hn[3]-60*n*Hn[4]\
     +24*n*Hn[5]+5*Hn[1]^2-30*Hn[1]*Hn[2]+15*Hn[2]^2+30*Hn[1]-75*Hn[2]+80*Hn[3]-30*Hn[4])/n",
    // sixth
    "(6*Hn[1]^5+15*n*Hn[1]^3-45*n*Hn[1]^2*Hn[2]+45*n*Hn[1]*Hn[2]^2-15*n*Hn[2]^3-15*Hn[1]^4\
     +25*n*Hn[1]^2-180*n*Hn[1]*Hn[2]+220*n*Hn[1]*Hn[3]-90*n*Hn[1]*Hn[4]+195*n*Hn[2]^2\
     -300*n*Hn[2]*Hn[3]+90*n*Hn[2]*Hn[4]+40*n*Hn[3]^2+20*Hn[1]^3+n*Hn[1]-31*n*Hn[2]\
     +180*n*Hn[3]-390*n*Hn[4]+360*n*Hn[5]-120*n*Hn[6]+90*Hn[1]^2-330*Hn[1]*Hn[2]\
     +120*Hn[1]*Hn[3]+225*Hn[2]^2-120*Hn[2]*Hn[3]+62*Hn[1]-270*Hn[2]+520*Hn[3]-450*Hn[4]\
     +144*Hn[5])/n",
];

fn parsed_formulas() -> &'static Vec<HarmonicExpr> {
    static CACHE: OnceLock<Vec<HarmonicExpr>> = OnceLock::new();
    CACHE.get_or_init(|| {
        MOMENT_FORMULAS
            .iter()
            .map(|s| HarmonicExpr::parse(s).expect("built-in formula must parse"))
            .collect()
    })
}

/// Built-in harmonic closed form of the mean (`r = 1`) or the central moment
/// `m_r` (`2 <= r <= 6`) for one absent-minded passenger.
pub fn builtin_moment_formula(r: usize) -> Result<&'static HarmonicExpr> {
    if !(1..=6).contains(&r) {
        return Err(Error::domain(format!(
            "no built-in closed form for moment order {r}; supported orders are 1..=6 \
             (higher orders can be fitted by the discovery tooling)"
        )));
    }
    Ok(&parsed_formulas()[r - 1])
}

/// Evaluates the built-in closed form exactly at `n >= 2`.
pub fn moment_from_formula(n: u64, r: usize) -> Result<Rat> {
    if n < 2 {
        return Err(Error::domain("moment formulas are stated for n >= 2"));
    }
    Ok(builtin_moment_formula(r)?.eval_exact(n))
}

/// Cutoff below which standardized moments are computed from exact rational
/// moments before converting to floating point.
const EXACT_STANDARDIZED_CUTOFF: u64 = 128;

/// Standardized central moments `m_r / m_2^{r/2}` for `r = 3..=r_max`
/// (`r_max <= 6`), as floating-point numbers.
///
/// For small `n` the exact closed forms are evaluated and only the final
/// ratio is floating; for large `n` the closed forms are evaluated with
/// directly summed double-precision harmonic values (see [`harmonic_f64`]
/// for the error envelope).
pub fn standardized_moments_f64(n: u64, r_max: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::domain("need n >= 2"));
    }
    if !(3..=6).contains(&r_max) {
        return Err(Error::domain(
            "standardized moments cover orders 3..=6 (the closed-form range)",
        ));
    }
    let moments: Vec<f64> = if n <= EXACT_STANDARDIZED_CUTOFF {
        let harmonics = harmonic_prefix(n, 6);
        (2..=r_max)
            .map(|r| {
                parsed_formulas()[r - 1]
                    .eval_exact_with(n, &harmonics)
                    .to_f64()
            })
            .collect()
    } else {
        (2..=r_max)
            .map(|r| parsed_formulas()[r - 1].eval_f64(n))
            .collect()
    };
    let variance = moments[0];
    Ok((3..=r_max)
        .map(|r| moments[r - 2] / variance.powf(r as f64 / 2.0))
        .collect())
}
