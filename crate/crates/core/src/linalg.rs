//! Exact linear-system solving by fraction-free Gaussian elimination.
//!
//! Rows are scaled to integers once, then eliminated Bareiss-style: each
//! update is `(pivot * a[i][c] - a[i][col] * a[p][c]) / previous_pivot`,
//! where the division is exact by Sylvester's identity. Intermediate entries
//! stay minor-sized and no per-step gcd is needed, which is what makes the
//! discovery module's interpolation systems tractable. There is no numerical
//! rank ambiguity anywhere: inconsistency and nullity are provable facts
//! about the input.

use crate::rat::Rat;
use num::bigint::BigInt;
use num::traits::{One, Zero};
use num::Integer;

/// Outcome of an exact solve of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinSolve {
    /// Exactly one solution.
    Unique(Vec<Rat>),
    /// Solution space of positive dimension; `particular` fixes every free
    /// variable to zero (free variables are the non-pivot columns in the
    /// fixed column order, so the support is the deterministic minimum).
    Affine { particular: Vec<Rat>, nullity: usize },
    /// No solution interpolates the data.
    Inconsistent,
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    /// Pivot column of each of the first `pivots.len()` rows.
    pivots: Vec<usize>,
}

/// Scales a rational row to coprime integers.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for c in row {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|c| c.numer() * (&denom_lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for v in &out {
        content = content.gcd(v);
    }
    if !content.is_zero() && !content.is_one() {
        for v in &mut out {
            *v = &*v / &content;
        }
    }
    out
}

/// Fraction-free forward elimination. Pivots are chosen among the first
/// `pivot_cols` columns; any extra trailing columns (an augmented right-hand
/// side) are updated alongside but never pivoted on.
fn forward(mut rows: Vec<Vec<BigInt>>, pivot_cols: usize) -> Echelon {
    let nrows = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev_pivot = BigInt::one();
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == nrows {
            break;
        }
        // Smallest nonzero entry (by bit length) keeps growth down.
        let pivot_row = (rank..nrows)
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| (rows[r][col].bits(), r));
        let Some(pivot_row) = pivot_row else { continue };
        rows.swap(rank, pivot_row);
        let (pivot_rows, rest) = rows.split_at_mut(rank + 1);
        let prow = &pivot_rows[rank];
        let pivot = prow[col].clone();
        for row in rest.iter_mut() {
            // Every remaining row gets the minor update, including rows with
            // a zero factor; skipping them would break the exact-division
            // invariant of later steps.
            let factor = std::mem::replace(&mut row[col], BigInt::zero());
            for c in (col + 1)..width {
                let updated = if factor.is_zero() {
                    &pivot * &row[c]
                } else {
                    &pivot * &row[c] - &factor * &prow[c]
                };
                let (q, r) = updated.div_rem(&prev_pivot);
                debug_assert!(r.is_zero(), "fraction-free division must be exact");
                row[c] = q;
            }
        }
        prev_pivot = pivot;
        pivots.push(col);
        rank += 1;
    }
    Echelon { rows, pivots }
}

/// Solves `A x = b` exactly. `a` is row-major; all rows must share `b`'s length.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> LinSolve {
    assert_eq!(a.len(), b.len(), "row/rhs count mismatch");
    let ncols = a.first().map_or(0, Vec::len);
    let rows: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full: Vec<Rat> = row.to_vec();
            full.push(rhs.clone());
            integer_row(&full)
        })
        .collect();
    // Eliminate over coefficient columns only; the rhs column tags along.
    let ech = forward(rows, ncols);
    let rank = ech.pivots.len();
    for row in &ech.rows[rank..] {
        if !row[ncols].is_zero() {
            return LinSolve::Inconsistent;
        }
    }
    let solution = back_substitute(&ech, ncols, Some(ncols));
    if rank == ncols {
        LinSolve::Unique(solution)
    } else {
        LinSolve::Affine {
            particular: solution,
            nullity: ncols - rank,
        }
    }
}

/// Basis of the null space of `A`, one vector per free column, in column
/// order. Each vector has a 1 in its free coordinate.
pub fn kernel(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let ncols = a.first().map_or(0, Vec::len);
    let rows: Vec<Vec<BigInt>> = a.iter().map(|r| integer_row(r)).collect();
    let ech = forward(rows, ncols);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; ncols];
        for &c in &ech.pivots {
            s[c] = true;
        }
        s
    };
    (0..ncols)
        .filter(|&c| !pivot_set[c])
        .map(|free| {
            let mut v = vec![Rat::zero(); ncols];
            v[free] = Rat::one();
            for (ri, &pc) in ech.pivots.iter().enumerate().rev() {
                let row = &ech.rows[ri];
                let mut acc = Rat::zero();
                for c in (pc + 1)..ncols {
                    if !row[c].is_zero() && !v[c].is_zero() {
                        acc += Rat::from_bigint(row[c].clone()) * &v[c];
                    }
                }
                v[pc] = -acc / Rat::from_bigint(row[pc].clone());
            }
            v
        })
        .collect()
}

/// Back-substitution with free variables pinned to zero. `rhs_col` points at
/// the augmented column when solving (or `None` for a homogeneous system).
fn back_substitute(ech: &Echelon, ncols: usize, rhs_col: Option<usize>) -> Vec<Rat> {
    let mut x = vec![Rat::zero(); ncols];
    for (ri, &pc) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[ri];
        let mut acc = match rhs_col {
            Some(rc) => Rat::from_bigint(row[rc].clone()),
            None => Rat::zero(),
        };
        for c in (pc + 1)..ncols {
            if !row[c].is_zero() && !x[c].is_zero() {
                acc -= Rat::from_bigint(row[c].clone()) * &x[c];
            }
        }
        x[pc] = acc / Rat::from_bigint(row[pc].clone());
    }
    x
}
