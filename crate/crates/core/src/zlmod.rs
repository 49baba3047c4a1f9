//! Linear algebra over `Z/l^N`: Smith normal form, presentations of finitely
//! generated `Z_l`-modules and linear solving.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{ell_pow, mod_inverse, reduce_signed, val_biguint, PadicScalar};

/// Dense matrix with entries in `Z/l^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZlMatrix {
    ell: u64,
    prec: u32,
    modulus: BigUint,
    rows: usize,
    cols: usize,
    data: Vec<BigUint>,
}

impl ZlMatrix {
    pub fn zeros(ell: u64, prec: u32, rows: usize, cols: usize) -> Self {
        ZlMatrix {
            ell,
            prec,
            modulus: ell_pow(ell, prec),
            rows,
            cols,
            data: vec![BigUint::zero(); rows * cols],
        }
    }

    pub fn identity(ell: u64, prec: u32, n: usize) -> Self {
        let mut m = Self::zeros(ell, prec, n, n);
        for i in 0..n {
            m.data[i * n + i] = BigUint::one();
        }
        m
    }

    /// Builds a matrix from signed integer entries, reducing them.
    pub fn from_fn(ell: u64, prec: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(ell, prec, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = reduce_signed(&f(i, j), &m.modulus);
                m.data[i * cols + j] = v;
            }
        }
        m
    }

    /// Builds a matrix from columns of residues.
    pub fn from_columns(ell: u64, prec: u32, rows: usize, columns: &[Vec<BigUint>]) -> Self {
        let mut m = Self::zeros(ell, prec, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for i in 0..rows {
                m.data[i * m.cols + j] = &c[i] % &m.modulus;
            }
        }
        m
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigUint) {
        let v = v % &self.modulus;
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigUint> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigUint> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rows with the given indices, in order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let mut m = Self::zeros(self.ell, self.prec, keep.len(), self.cols);
        for (a, &i) in keep.iter().enumerate() {
            for j in 0..self.cols {
                m.data[a * self.cols + j] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.ell, self.prec, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i * m.cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                m.data[i * m.cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!((self.ell, self.prec), (other.ell, other.prec), "ring mismatch");
        let mut m = Self::zeros(self.ell, self.prec, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigUint::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += a * other.get(k, j);
                    }
                }
                m.data[i * other.cols + j] = acc % &self.modulus;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigUint::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * &v[k];
                }
                acc % &self.modulus
            })
            .collect()
    }

    /// Reinterprets the entries at a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        assert!(prec <= self.prec);
        let mut m = Self::zeros(self.ell, prec, self.rows, self.cols);
        for (d, s) in m.data.iter_mut().zip(&self.data) {
            *d = s % &m.modulus;
        }
        m
    }

    /// Determinant as an element of `Z_l` known modulo `l^N`.
    pub fn det(&self) -> PadicScalar {
        assert_eq!(self.rows, self.cols, "square matrix");
        det_mod(self.ell, self.prec, self.rows, self.data.clone())
    }

    fn val(&self, x: &BigUint) -> u32 {
        if x.is_zero() {
            self.prec
        } else {
            val_biguint(self.ell, x)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigUint) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let v = (&self.data[dst * self.cols + j] + c * s) % &self.modulus;
            self.data[dst * self.cols + j] = v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigUint) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let v = (&self.data[i * self.cols + dst] + c * s) % &self.modulus;
            self.data[i * self.cols + dst] = v;
        }
    }

    fn scale_row(&mut self, r: usize, c: &BigUint) {
        for j in 0..self.cols {
            let v = (&self.data[r * self.cols + j] * c) % &self.modulus;
            self.data[r * self.cols + j] = v;
        }
    }

    fn scale_col(&mut self, k: usize, c: &BigUint) {
        for i in 0..self.rows {
            let v = (&self.data[i * self.cols + k] * c) % &self.modulus;
            self.data[i * self.cols + k] = v;
        }
    }

    fn negate(&self, c: &BigUint) -> BigUint {
        (&self.modulus - (c % &self.modulus)) % &self.modulus
    }
}

impl Serialize for ZlMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        let mut st = s.serialize_struct("ZlMatrix", 5)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("precision", &self.prec)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

fn det_mod(ell: u64, prec: u32, n: usize, mut a: Vec<BigUint>) -> PadicScalar {
    let modulus = ell_pow(ell, prec);
    let val = |x: &BigUint| if x.is_zero() { prec } else { val_biguint(ell, x) };
    let mut sign_neg = false;
    let mut acc_val: u64 = 0;
    let mut acc_unit = BigUint::one();
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                let v = val(&a[i * n + j]);
                if v < prec && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            return PadicScalar::zero(ell, prec as i64);
        };
        if pi != k {
            for j in 0..n {
                a.swap(pi * n + j, k * n + j);
            }
            sign_neg = !sign_neg;
        }
        if pj != k {
            for i in 0..n {
                a.swap(i * n + pj, i * n + k);
            }
            sign_neg = !sign_neg;
        }
        let piv = a[k * n + k].clone();
        let w = &piv / ell_pow(ell, v);
        let winv = mod_inverse(&w, &modulus).expect("unit");
        acc_val += v as u64;
        acc_unit = (acc_unit * &w) % &modulus;
        for i in k + 1..n {
            let e = a[i * n + k].clone();
            if e.is_zero() {
                continue;
            }
            let q = (&e / ell_pow(ell, v) * &winv) % &modulus;
            let nq = (&modulus - q) % &modulus;
            for j in k..n {
                let t = (&a[i * n + j] + &nq * &a[k * n + j]) % &modulus;
                a[i * n + j] = t;
            }
        }
        if acc_val >= prec as u64 {
            return PadicScalar::zero(ell, prec as i64);
        }
    }
    if sign_neg {
        acc_unit = (&modulus - acc_unit) % &modulus;
    }
    let value = acc_unit * ell_pow(ell, acc_val as u32);
    PadicScalar::from_residue(ell, &value, prec)
}

/// Smith form `U * A * V = D` of a matrix over `Z/l^N`, read as a
/// presentation of the cokernel `Z_l^rows / A * Z_l^cols`.
#[derive(Clone, Debug)]
pub struct ModuleDecomposition {
    ell: u64,
    prec: u32,
    rows: usize,
    /// Exponents of the diagonal entries `l^a_i`; `None` when the entry is
    /// zero at precision. Length `min(rows, cols)`.
    diag: Vec<Option<u32>>,
    u: ZlMatrix,
    u_inv: ZlMatrix,
    v: ZlMatrix,
    v_inv: ZlMatrix,
}

/// Result of [`ModuleDecomposition::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Solution(Vec<BigUint>),
    /// Component `index` of `U b` has valuation `found`, while divisibility
    /// by `l^needed` was required.
    Obstructed { index: usize, found: u32, needed: u32 },
}

impl ModuleDecomposition {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Exponents of the diagonal of `D`.
    pub fn diagonal(&self) -> &[Option<u32>] {
        &self.diag
    }

    pub fn u(&self) -> &ZlMatrix {
        &self.u
    }

    pub fn u_inv(&self) -> &ZlMatrix {
        &self.u_inv
    }

    pub fn v(&self) -> &ZlMatrix {
        &self.v
    }

    pub fn v_inv(&self) -> &ZlMatrix {
        &self.v_inv
    }

    /// The diagonal matrix `D`.
    pub fn d(&self) -> ZlMatrix {
        let mut d = ZlMatrix::zeros(self.ell, self.prec, self.rows, self.v.rows());
        for (i, a) in self.diag.iter().enumerate() {
            if let Some(a) = a {
                d.set(i, i, ell_pow(self.ell, *a));
            }
        }
        d
    }

    /// Number of cokernel summands indistinguishable from `Z_l` at
    /// precision ("free at precision").
    pub fn free_rank(&self) -> usize {
        self.diag.iter().filter(|a| a.is_none()).count() + self.rows.saturating_sub(self.diag.len())
    }

    /// Cokernel torsion exponents `a_i` with `0 < a_i < N`, ascending.
    pub fn torsion_exponents(&self) -> Vec<u32> {
        self.diag.iter().filter_map(|a| *a).filter(|&a| a > 0).collect()
    }

    /// Cokernel torsion invariants `l^a_i`, ascending.
    pub fn torsion(&self) -> Vec<BigUint> {
        self.torsion_exponents().iter().map(|&a| ell_pow(self.ell, a)).collect()
    }

    /// Row indices of `D` carrying nontrivial torsion.
    pub fn torsion_indices(&self) -> Vec<usize> {
        self.diag.iter().enumerate().filter(|(_, a)| matches!(a, Some(x) if *x > 0)).map(|(i, _)| i).collect()
    }

    /// Row indices of `D` carrying free-at-precision summands.
    pub fn free_indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.diag.iter().enumerate().filter(|(_, a)| a.is_none()).map(|(i, _)| i).collect();
        out.extend(self.diag.len()..self.rows);
        out
    }

    /// Generator of the cokernel summand at row `i` of `D`: column `i` of
    /// `U^-1`.
    pub fn generator(&self, i: usize) -> Vec<BigUint> {
        self.u_inv.column(i)
    }

    /// Coordinates `U w` of a vector of the ambient module.
    pub fn coordinates(&self, w: &[BigUint]) -> Vec<BigUint> {
        self.u.mul_vec(w)
    }

    /// Solves `A x = b` through the transformed right-hand side `U b`.
    pub fn solve(&self, b: &[BigUint]) -> Solve {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let c = self.u.mul_vec(b);
        let n = self.v.rows();
        let mut y = vec![BigUint::zero(); n];
        for (i, ci) in c.iter().enumerate() {
            let found = if ci.is_zero() { self.prec } else { val_biguint(self.ell, ci) };
            let needed = match self.diag.get(i) {
                Some(Some(a)) => *a,
                _ => self.prec,
            };
            if found < needed {
                return Solve::Obstructed { index: i, found, needed };
            }
            if let Some(Some(a)) = self.diag.get(i) {
                y[i] = ci / ell_pow(self.ell, *a);
            }
        }
        Solve::Solution(self.v.mul_vec(&y))
    }
}

/// Smith normal form, pivoting on minimal valuation and then on the
/// smallest (row-major) index.
pub fn smith_normal_form(a: &ZlMatrix) -> ModuleDecomposition {
    let (ell, prec) = (a.ell, a.prec);
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut u = ZlMatrix::identity(ell, prec, m);
    let mut u_inv = ZlMatrix::identity(ell, prec, m);
    let mut v = ZlMatrix::identity(ell, prec, n);
    let mut v_inv = ZlMatrix::identity(ell, prec, n);
    let mut diag = Vec::with_capacity(m.min(n));
    for k in 0..m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                let x = w.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let vx = w.val(x);
                if best.is_none_or(|b| vx < b.0) {
                    best = Some((vx, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else {
            diag.extend(std::iter::repeat_n(None, m.min(n) - k));
            break;
        };
        w.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        w.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);
        let lv = ell_pow(ell, val);
        let unit = w.get(k, k) / &lv;
        let unit_inv = mod_inverse(&unit, &w.modulus).expect("unit");
        w.scale_row(k, &unit_inv);
        u.scale_row(k, &unit_inv);
        u_inv.scale_col(k, &unit);
        for i in k + 1..m {
            let e = w.get(i, k);
            if e.is_zero() {
                continue;
            }
            let q = e / &lv;
            let nq = w.negate(&q);
            w.add_row(i, k, &nq);
            u.add_row(i, k, &nq);
            u_inv.add_col(k, i, &q);
        }
        for j in k + 1..n {
            let e = w.get(k, j);
            if e.is_zero() {
                continue;
            }
            let q = e / &lv;
            let nq = w.negate(&q);
            w.add_col(j, k, &nq);
            v.add_col(j, k, &nq);
            v_inv.add_row(k, j, &q);
        }
        diag.push(Some(val));
    }
    ModuleDecomposition { ell, prec, rows: m, diag, u, u_inv, v, v_inv }
}

/// Solves `A x = b` modulo `l^N`, or returns `None` when the transformed
/// right-hand side is not divisible by the diagonal.
pub fn solve_linear(a: &ZlMatrix, b: &[BigUint]) -> Option<Vec<BigUint>> {
    match smith_normal_form(a).solve(b) {
        Solve::Solution(x) => Some(x),
        Solve::Obstructed { .. } => None,
    }
}

/// Invariants of the cokernel `Z_l^g / A * Z_l^cols` of a relation matrix
/// with `g` rows (one per generator).
pub fn quotient_presentation(g: usize, relations: &ZlMatrix) -> Result<ModuleDecomposition> {
    if relations.rows() != g {
        return Err(Error::Invalid(format!(
            "relation matrix has {} rows for {} generators",
            relations.rows(),
            g
        )));
    }
    Ok(smith_normal_form(relations))
}

impl Serialize for ModuleDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let torsion: Vec<String> = self.torsion().iter().map(|x| x.to_string()).collect();
        let mut st = s.serialize_struct("ModuleDecomposition", 5)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("precision", &self.prec)?;
        st.serialize_field("free_at_precision", &self.free_rank())?;
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("torsion_exponents", &self.torsion_exponents())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ell: u64, prec: u32, rows: &[&[i64]]) -> ZlMatrix {
        ZlMatrix::from_fn(ell, prec, rows.len(), rows[0].len(), |i, j| BigInt::from(rows[i][j]))
    }

    fn check_contract(a: &ZlMatrix, dec: &ModuleDecomposition) {
        assert_eq!(dec.u().mul(a).mul(dec.v()), dec.d());
        let m = a.rows();
        assert_eq!(dec.u().mul(dec.u_inv()), ZlMatrix::identity(a.ell(), a.prec(), m));
        assert_eq!(dec.v().mul(dec.v_inv()), ZlMatrix::identity(a.ell(), a.prec(), a.cols()));
    }

    #[test]
    fn small_examples() {
        let a = mat(3, 5, &[&[3, 0], &[0, 1]]);
        let d = smith_normal_form(&a);
        assert_eq!(d.diagonal(), &[Some(0), Some(1)]);
        check_contract(&a, &d);

        let z = ZlMatrix::zeros(3, 5, 2, 3);
        let d = smith_normal_form(&z);
        assert_eq!(d.free_rank(), 2);
        assert!(d.torsion().is_empty());
    }

    #[test]
    fn three_by_three_minors() {
        // d1 = gcd(3, 6, 9, 12) = 3, d1 d2 = 3^v(36 - 54) = 3^v(-18) = 9.
        let a = mat(3, 5, &[&[3, 6], &[9, 12]]);
        let d = smith_normal_form(&a);
        assert_eq!(d.diagonal(), &[Some(1), Some(1)]);
        check_contract(&a, &d);
        assert_eq!(smith_normal_form(&d.d()).diagonal(), d.diagonal());
    }

    #[test]
    fn solving() {
        let a = ZlMatrix::identity(5, 4, 3);
        let b: Vec<BigUint> = [7u32, 0, 600].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(solve_linear(&a, &b).unwrap(), b);
        let a = mat(3, 3, &[&[3]]);
        assert!(solve_linear(&a, &[BigUint::one()]).is_none());
    }

    #[test]
    fn presentations() {
        let empty = ZlMatrix::zeros(3, 8, 1, 0);
        assert_eq!(quotient_presentation(1, &empty).unwrap().free_rank(), 1);
        let r = mat(3, 8, &[&[3], &[0]]);
        let d = quotient_presentation(2, &r).unwrap();
        assert_eq!(d.free_rank(), 1);
        assert_eq!(d.torsion(), vec![BigUint::from(3u32)]);
        assert!(quotient_presentation(3, &r).is_err());
    }

    #[test]
    fn determinant() {
        let a = mat(3, 10, &[&[3, 1], &[1, 3]]);
        assert_eq!(a.det().residue(10).unwrap(), BigUint::from(8u32));
        let a = mat(3, 10, &[&[3, 6], &[9, 12]]);
        assert!(a.det().eq_at_prec(&PadicScalar::from_i64(3, -18, 10)));
    }
}
