//! Exact linear algebra over `Z`, `Q` and `F_p` used by the number field
//! layer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::inv_mod_p;

/// Dense integer matrix stored as rows.
pub type IMat = Vec<Vec<BigInt>>;

/// Hermite normal form of the lattice spanned by `gens` in `Z^n`.
///
/// The result is upper triangular (pivot columns strictly increasing), with
/// positive pivots and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped. When `modulus` is given, the lattice
/// is taken to contain `modulus * Z^n`, which keeps entries bounded.
pub fn hnf(gens: &[Vec<BigInt>], n: usize, modulus: Option<&BigInt>) -> IMat {
    let mut work: IMat = gens.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if let Some(d) = modulus {
        for j in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[j] = d.clone();
            work.push(r);
        }
    }
    let mut basis: IMat = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..n {
        if let Some(d) = modulus {
            for r in work.iter_mut() {
                let is_unit_row = r[col..].iter().filter(|x| !x.is_zero()).count() == 1 && r[col..].iter().any(|x| x == d);
                if is_unit_row {
                    continue;
                }
                for x in r[col..].iter_mut() {
                    *x = x.mod_floor(d);
                }
            }
            work.retain(|r| r.iter().any(|x| !x.is_zero()));
        }
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(work.len());
        for r in work.drain(..) {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let e = p[col].extended_gcd(&r[col]);
                    let (pa, rb) = (&p[col] / &e.gcd, &r[col] / &e.gcd);
                    let np: Vec<BigInt> = p.iter().zip(&r).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let nr: Vec<BigInt> = p.iter().zip(&r).map(|(x, y)| &pa * y - &rb * x).collect();
                    if nr.iter().any(|x| !x.is_zero()) {
                        rest.push(nr);
                    }
                    pivot = Some(np);
                }
            }
        }
        work = rest;
        if let Some(mut p) = pivot {
            if p[col].is_negative() {
                for x in p.iter_mut() {
                    *x = -x.clone();
                }
            }
            basis.push(p);
            pivots.push(col);
        }
    }
    for i in 0..basis.len() {
        let c = pivots[i];
        for k in 0..i {
            let q = basis[k][c].div_floor(&basis[i][c]);
            if !q.is_zero() {
                let row = basis[i].clone();
                for (x, y) in basis[k].iter_mut().zip(&row) {
                    *x -= &q * y;
                }
            }
        }
    }
    basis
}

/// Determinant of a square integer matrix (Bareiss).
pub fn det(m: &IMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Smith form `U A V = D` of an integer matrix, with `U^-1` tracked.
#[derive(Clone, Debug)]
pub struct IntSnf {
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
    /// Diagonal of `D` (length `min(rows, cols)`), nonnegative, in
    /// divisibility order.
    pub diag: Vec<BigInt>,
}

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn row_axpy(m: &mut IMat, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(&s) {
        *x += c * y;
    }
}

fn col_axpy(m: &mut IMat, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for r in m.iter_mut() {
        let y = r[src].clone();
        r[dst] += c * y;
    }
}

/// Smith normal form over `Z`.
pub fn int_snf(a: &IMat, cols: usize) -> IntSnf {
    let m = a.len();
    let mut w = a.clone();
    let mut u = identity(m);
    let mut u_inv = identity(m);
    let mut v = identity(cols);
    let mut diag = Vec::new();
    for k in 0..m.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..m {
                for j in k..cols {
                    if !w[i][j].is_zero() && best.is_none_or(|(bi, bj)| w[i][j].abs() < w[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.extend(std::iter::repeat_n(BigInt::zero(), m.min(cols) - k));
                return IntSnf { u, u_inv, v, diag };
            };
            w.swap(k, pi);
            u.swap(k, pi);
            for r in u_inv.iter_mut() {
                r.swap(k, pi);
            }
            for r in w.iter_mut() {
                r.swap(k, pj);
            }
            for r in v.iter_mut() {
                r.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..m {
                if w[i][k].is_zero() {
                    continue;
                }
                let q = w[i][k].div_floor(&w[k][k]);
                row_axpy(&mut w, i, k, &-q.clone());
                row_axpy(&mut u, i, k, &-q.clone());
                col_axpy(&mut u_inv, k, i, &q);
                if !w[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if w[k][j].is_zero() {
                    continue;
                }
                let q = w[k][j].div_floor(&w[k][k]);
                col_axpy(&mut w, j, k, &-q.clone());
                col_axpy(&mut v, j, k, &-q);
                if !w[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let p = w[k][k].clone();
            let bad = (k + 1..m).find(|&i| (k + 1..cols).any(|j| !(&w[i][j] % &p).is_zero()));
            if let Some(i) = bad {
                row_axpy(&mut w, k, i, &BigInt::one());
                row_axpy(&mut u, k, i, &BigInt::one());
                col_axpy(&mut u_inv, i, k, &-BigInt::one());
                continue;
            }
            if p.is_negative() {
                for x in w[k].iter_mut() {
                    *x = -x.clone();
                }
                for x in u[k].iter_mut() {
                    *x = -x.clone();
                }
                for r in u_inv.iter_mut() {
                    r[k] = -r[k].clone();
                }
            }
            diag.push(w[k][k].clone());
            break;
        }
    }
    IntSnf { u, u_inv, v, diag }
}

/// Matrix-vector product over `Z`.
pub fn mat_vec(m: &IMat, x: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Dense matrix over `F_p`, stored as rows.
pub type FpMat = Vec<Vec<u64>>;

fn reduce_rows(m: &mut FpMat, p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(s) = (r..rows).find(|&i| !m[i][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(r, s);
        let inv = inv_mod_p(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = ((*x as u128 * inv as u128) % p as u128) as u64;
        }
        let pr = m[r].clone();
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x = ((*x as u128 + (p - f) as u128 * *y as u128) % p as u128) as u64;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Rank over `F_p`.
pub fn fp_rank(m: &FpMat, p: u64) -> usize {
    let mut a = m.clone();
    reduce_rows(&mut a, p).len()
}

/// Basis of the right kernel `{x : M x = 0}` over `F_p`, for a matrix with
/// `cols` columns.
pub fn fp_kernel(m: &FpMat, cols: usize, p: u64) -> FpMat {
    let mut a = m.clone();
    let pivots = reduce_rows(&mut a, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; cols];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - a[r][f] % p) % p;
            }
            x
        })
        .collect()
}

/// Reduced row echelon basis of the row space over `F_p`.
pub fn fp_row_basis(m: &FpMat, p: u64) -> FpMat {
    let mut a = m.clone();
    let k = reduce_rows(&mut a, p).len();
    a.truncate(k);
    a
}

/// Solves `x M = b` for a row vector `x`, where `M` has independent rows.
pub fn fp_solve_left(m: &FpMat, b: &[u64], p: u64) -> Option<Vec<u64>> {
    let rows = m.len();
    let cols = b.len();
    // Transpose: M^T x^T = b^T.
    let mut aug: FpMat = (0..cols)
        .map(|c| {
            let mut r: Vec<u64> = (0..rows).map(|i| m[i][c] % p).collect();
            r.push(b[c] % p);
            r
        })
        .collect();
    let pivots = reduce_rows(&mut aug, p);
    if pivots.contains(&rows) {
        return None;
    }
    let mut x = vec![0u64; rows];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][rows];
    }
    Some(x)
}

/// Dense rational matrix stored as rows.
pub type QMat = Vec<Vec<BigRational>>;

/// Inverse of a square rational matrix.
pub fn q_inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut a: QMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let s = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, s);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pr = a[c].clone();
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of a square rational matrix.
pub fn q_det(m: &QMat) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(s) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if s != c {
            a.swap(c, s);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let pr = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_basic() {
        let h = hnf(&im(&[&[2, 4], &[3, 5]]), 2, None);
        assert_eq!(h, im(&[&[1, 1], &[0, 2]]));
        let h2 = hnf(&im(&[&[4, 2]]), 2, Some(&BigInt::from(6)));
        assert_eq!(det(&h2), BigInt::from(12));
        let h3 = hnf(&im(&[&[4, 2], &[0, 6], &[6, 0]]), 2, None);
        assert_eq!(h2, h3);
    }

    #[test]
    fn determinant_and_snf() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(det(&a), BigInt::from(-144));
        let s = int_snf(&a, 3);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let ua: IMat = s.u.iter().map(|r| (0..3).map(|j| (0..3).map(|k| &r[k] * &a[k][j]).sum()).collect()).collect();
        let d: IMat = ua.iter().map(|r| (0..3).map(|j| (0..3).map(|k| &r[k] * &s.v[k][j]).sum()).collect()).collect();
        assert_eq!(d, im(&[&[2, 0, 0], &[0, 6, 0], &[0, 0, 12]]));
        let uu: IMat = s.u.iter().map(|r| (0..3).map(|j| (0..3).map(|k| &r[k] * &s.u_inv[k][j]).sum()).collect()).collect();
        assert_eq!(uu, identity(3));
    }

    #[test]
    fn fp_kernel_basic() {
        let m = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let k = fp_kernel(&m, 3, 2);
        assert_eq!(k, vec![vec![1, 1, 1]]);
        assert_eq!(fp_rank(&m, 2), 2);
        assert_eq!(fp_solve_left(&m, &[1, 0, 1], 2), Some(vec![1, 1]));
        assert_eq!(fp_solve_left(&m, &[1, 0, 0], 2), None);
    }
}
