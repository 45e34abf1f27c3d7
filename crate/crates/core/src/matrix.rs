//! Exact dense matrices over Z and Q.

use alloc::vec;
use alloc::vec::Vec;
use core::mem;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<BigRational>>;

pub fn imat_from_i64(rows: &[Vec<i64>]) -> IMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn zeros(r: usize, c: usize) -> IMat {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &IMat, b: &IMat) -> IMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .filter(|(x, _)| !x.is_zero())
                        .fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn qmul(a: &QMat, b: &QMat) -> QMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .filter(|(x, _)| !x.is_zero())
                        .fold(BigRational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn to_q(a: &IMat) -> QMat {
    a.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// `v^T G w` for integer vectors.
pub fn bilinear(g: &IMat, v: &[BigInt], w: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let mut row = BigInt::zero();
        for (j, wj) in w.iter().enumerate() {
            if !wj.is_zero() {
                row += &g[i][j] * wj;
            }
        }
        acc += vi * row;
    }
    acc
}

/// `v^T G w` for rational vectors against an integer Gram matrix.
pub fn qbilinear(g: &IMat, v: &[BigRational], w: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let mut row = BigRational::zero();
        for (j, wj) in w.iter().enumerate() {
            if !wj.is_zero() {
                row += wj * &g[i][j];
            }
        }
        acc += vi * row;
    }
    acc
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(a: &IMat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse over Q, `None` when singular.
pub fn qinverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m: QMat = a.clone();
    let mut inv: QMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        inv.swap(p, c);
        let piv = m[c][c].clone();
        for j in 0..n {
            m[c][j] = &m[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

pub fn inverse(a: &IMat) -> Option<QMat> {
    qinverse(&to_q(a))
}

/// Diagonal of a congruent diagonalisation `P^T A P` of a symmetric rational matrix.
/// Zero diagonals are handled by the substitution `e_i <- e_i + e_j`.
pub fn congruent_diagonal(a: &QMat) -> Vec<BigRational> {
    let n = a.len();
    let mut m = a.clone();
    let mut out = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let piv = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !m[i][j].is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    None => {
                        out.extend(active.iter().map(|_| BigRational::zero()));
                        break;
                    }
                    Some((i, j)) => {
                        // row/col i += row/col j; new diagonal is 2 a_ij != 0
                        for k in 0..n {
                            let t = m[j][k].clone();
                            m[i][k] += t;
                        }
                        for k in 0..n {
                            let t = m[k][j].clone();
                            m[k][i] += t;
                        }
                        i
                    }
                }
            }
        };
        let d = m[piv][piv].clone();
        for &r in &active {
            if r == piv || m[r][piv].is_zero() {
                continue;
            }
            let f = &m[r][piv] / &d;
            for &c in &active {
                let t = &f * &m[piv][c];
                m[r][c] -= t;
            }
            for &c in &active {
                let t = &f * &m[c][piv];
                m[c][r] -= t;
            }
        }
        out.push(d);
        active.retain(|&x| x != piv);
    }
    out
}

/// Smith normal form `U A V = D` with unimodular `U`, `V`.
pub struct Smith {
    pub u: IMat,
    pub v: IMat,
    /// Diagonal entries, nonnegative, each dividing the next; length min(rows, cols).
    pub diag: Vec<BigInt>,
}

pub fn smith(a: &IMat) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let r = rows.min(cols);
    for t in 0..r {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = match best {
                None => break,
                Some(x) => x,
            };
            m.swap(t, bi);
            u.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                row_axpy(&mut m, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                col_axpy(&mut m, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::from(-1);
                    row_axpy(&mut m, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -mem::take(x);
            }
            for x in u[t].iter_mut() {
                *x = -mem::take(x);
            }
        }
    }
    let diag = (0..r).map(|i| m[i][i].clone()).collect();
    Smith { u, v, diag }
}

/// row_i -= q * row_t
fn row_axpy(m: &mut IMat, i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = m[t].clone();
    for (x, s) in m[i].iter_mut().zip(src.iter()) {
        *x -= q * s;
    }
}

/// col_j -= q * col_t
fn col_axpy(m: &mut IMat, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[t].clone();
        row[j] -= q * s;
    }
}

/// Row-style Hermite normal form of the row span: nonzero rows only, upper
/// echelon with positive pivots and reduced entries above each pivot.
pub fn hnf_rows(a: &IMat) -> IMat {
    let mut m: IMat = a.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out_row = 0;
    for c in 0..cols {
        if out_row >= m.len() {
            break;
        }
        loop {
            let piv = (out_row..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&x, &y| m[x][c].abs().cmp(&m[y][c].abs()));
            let p = match piv {
                None => break,
                Some(p) => p,
            };
            m.swap(out_row, p);
            let mut done = true;
            for i in out_row + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[out_row][c]);
                row_axpy(&mut m, i, out_row, &q);
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if out_row < m.len() && !m[out_row][c].is_zero() {
            if m[out_row][c].is_negative() {
                for x in m[out_row].iter_mut() {
                    *x = -mem::take(x);
                }
            }
            for i in 0..out_row {
                let q = m[i][c].div_floor(&m[out_row][c]);
                row_axpy(&mut m, i, out_row, &q);
            }
            out_row += 1;
        }
    }
    m.truncate(out_row);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Characteristic polynomial `det(xI - A)`, little-endian, via Faddeev–LeVerrier.
pub fn char_poly(a: &IMat) -> Vec<BigInt> {
    let n = a.len();
    let aq = to_q(a);
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: QMat = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
        let mut next = qmul(&aq, &mk);
        for i in 0..n {
            next[i][i] += &coeffs[n - k + 1];
        }
        let am = qmul(&aq, &next);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        mk = next;
    }
    coeffs.into_iter().map(|c| c.to_integer()).collect()
}

/// Solve `x B = b` for a square invertible integer `B` over Q.
pub fn solve_left(b_mat: &IMat, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let inv = inverse(b_mat)?;
    let n = rhs.len();
    Some(
        (0..n)
            .map(|j| {
                (0..n).fold(BigRational::zero(), |acc, i| acc + &rhs[i] * &inv[i][j])
            })
            .collect(),
    )
}

pub fn is_symmetric(a: &IMat) -> bool {
    let n = a.len();
    a.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
}

/// Block diagonal sum.
pub fn direct_sum(a: &IMat, b: &IMat) -> IMat {
    let n = a.len() + b.len();
    let mut out = zeros(n, n);
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[i][j] = x.clone();
        }
    }
    let o = a.len();
    for (i, row) in b.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[o + i][o + j] = x.clone();
        }
    }
    out
}
