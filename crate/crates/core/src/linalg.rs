//! Exact linear algebra over `ℚ` and `ℤ` on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;

/// Row-reduces `m` in place and returns the pivot columns.
pub fn row_reduce(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = Rational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                for j in 0..cols {
                    let v = &m[r][j] * &f;
                    m[k][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Coefficients `c` with `Σ c_i · gens[i] = target`, if the target lies in the span.
pub fn express_in_span(gens: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = target.len();
    let k = gens.len();
    // columns are generators, last column the target
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = gens.iter().map(|g| g[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut coef = vec![Rational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        coef[c] = m[r][k].clone();
    }
    Some(coef)
}

/// An integer vector `z` with `a·z = b`, or `None` if there is none.
///
/// Column operations bring `a` to lower echelon form `a·u = h`; then `h·y = b`
/// is solved by forward substitution and `z = u·y`.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize, f: &BigInt| {
        // column j -= f · column i
        for row in h.iter_mut() {
            let v = &row[i] * f;
            row[j] -= v;
        }
        for row in u.iter_mut() {
            let v = &row[i] * f;
            row[j] -= v;
        }
    };
    let swap_cols = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in h.iter_mut() {
            row.swap(i, j);
        }
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut pivot_rows = Vec::new();
    let mut c = 0;
    for r in 0..rows {
        if c == cols {
            break;
        }
        loop {
            let nz: Vec<usize> = (c..cols).filter(|&j| !h[r][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&j| h[r][j].abs()).unwrap();
            swap_cols(&mut h, &mut u, c, best);
            let mut done = true;
            for j in c + 1..cols {
                if !h[r][j].is_zero() {
                    let f = h[r][j].div_floor(&h[r][c]);
                    col_op(&mut h, &mut u, c, j, &f);
                    if !h[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !h[r][c].is_zero() {
            pivot_rows.push((r, c));
            c += 1;
        }
    }
    let mut y = vec![BigInt::zero(); cols];
    let mut pi = 0;
    for r in 0..rows {
        let mut rest = b[r].clone();
        for (j, yj) in y.iter().enumerate() {
            rest -= &h[r][j] * yj;
        }
        if pi < pivot_rows.len() && pivot_rows[pi].0 == r {
            let pc = pivot_rows[pi].1;
            let (q, rem) = rest.div_rem(&h[r][pc]);
            if !rem.is_zero() {
                return None;
            }
            y[pc] = q;
            pi += 1;
        } else if !rest.is_zero() {
            return None;
        }
    }
    Some((0..cols).map(|i| (0..cols).map(|j| &u[i][j] * &y[j]).sum()).collect())
}

/// Clears denominators row by row.
pub fn integer_rows(a: &[Vec<Rational>], b: &[Rational]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut ai = Vec::with_capacity(a.len());
    let mut bi = Vec::with_capacity(b.len());
    for (row, rhs) in a.iter().zip(b) {
        let l = row.iter().chain(std::iter::once(rhs)).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = Rational::from_integer(l);
        ai.push(row.iter().map(|x| (x * &scale).to_integer()).collect());
        bi.push((rhs * &scale).to_integer());
    }
    (ai, bi)
}
