use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;
use crate::error::{Error, Result};

/// Dense matrix over the rationals. Serialized as an array of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<QMatrix, D::Error> {
        let rows = Vec::<Vec<Rat>>::deserialize(d)?;
        QMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<QMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::SizeMismatch(row.len(), c));
            }
            data.extend(row);
        }
        Ok(QMatrix { rows: r, cols: c, data })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn from_columns(cols: &[Vec<Rat>], nrows: usize) -> QMatrix {
        let mut m = QMatrix::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::SizeMismatch(v.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(self.cols, other.rows));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + &(a * b);
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::SizeMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Rows scaled to integers, with the product of the scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut total = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let l = self
                    .row(i)
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                total *= &l;
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect()
            })
            .collect();
        (rows, total)
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss_echelon(&mut a, self.cols).0
    }

    /// Exact determinant by Bareiss elimination.
    pub fn determinant(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        if self.rows == 0 {
            return Ok(Rat::one());
        }
        let (mut a, scale) = self.integer_rows();
        let (rank, sign) = bareiss_echelon(&mut a, self.cols);
        if rank < self.rows {
            return Ok(Rat::zero());
        }
        let det = a[self.rows - 1][self.cols - 1].clone() * BigInt::from(sign);
        Ok(Rat::from_bigint(det) / Rat::from_bigint(scale))
    }

    /// Determinant modulo a prime `p` (< 2^63). Fails if `p` divides a denominator.
    pub fn det_mod_p(&self, p: u64) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a: Vec<Vec<u64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for x in self.row(i) {
                row.push(rat_mod_p(x, p)?);
            }
            a.push(row);
        }
        Ok(det_mod_p_raw(a, p))
    }

    /// Reduced row echelon form with leftmost pivots; returns the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if !m.get(r, j).is_zero() {
                        let x = m.get(i, j) - &(&f * m.get(r, j));
                        m.set(i, j, x);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Exact basis of the right null space, one vector per free column,
    /// taken from the reduced echelon form (leftmost pivots).
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Option<QMatrix>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(Some(inv))
    }
}

/// Fraction-free elimination in place; returns (rank, permutation sign).
/// For a full-rank square input the last diagonal entry is the determinant.
fn bareiss_echelon(a: &mut [Vec<BigInt>], cols: usize) -> (usize, i32) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let x = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = x / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, sign)
}

pub(crate) fn rat_mod_p(x: &Rat, p: u64) -> Result<u64> {
    let pm = BigInt::from(p);
    let num = x.numer().mod_floor(&pm);
    let den = x.denom().mod_floor(&pm);
    if den.is_zero() {
        return Err(Error::BadPrime(p));
    }
    let num: u64 = num.try_into().expect("residue fits");
    let den: u64 = den.try_into().expect("residue fits");
    Ok(mul_mod(num, inv_mod(den, p), p))
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn det_mod_p_raw(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[c][c], p);
        let inv = inv_mod(a[c][c], p);
        for i in c + 1..n {
            if a[i][c] == 0 {
                continue;
            }
            let f = mul_mod(a[i][c], inv, p);
            for j in c..n {
                let sub = mul_mod(f, a[c][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
    }
    det
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact coefficients expressing `target` in the span of `vectors`, or
/// `None` if it is not in the span. With dependent inputs the free
/// coefficients are set to zero.
pub fn coordinates_in_span(vectors: &[Vec<Rat>], target: &[Rat]) -> Result<Option<Vec<Rat>>> {
    let dim = target.len();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::SizeMismatch(v.len(), dim));
        }
    }
    let k = vectors.len();
    let mut aug = QMatrix::zeros(dim, k + 1);
    for (j, v) in vectors.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            aug.set(i, j, x.clone());
        }
    }
    for (i, x) in target.iter().enumerate() {
        aug.set(i, k, x.clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (row, &p) in pivots.iter().enumerate() {
        coeffs[p] = r.get(row, k).clone();
    }
    Ok(Some(coeffs))
}

impl QMatrix {
    /// Sign-aware integer check used by tests and reports.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn max_abs(&self) -> Rat {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> QMatrix {
        QMatrix::from_int_rows(rows)
    }

    #[test]
    fn identity_and_zero_kernels() {
        assert!(QMatrix::identity(4).kernel_basis().is_empty());
        assert_eq!(QMatrix::zeros(3, 5).kernel_basis().len(), 5);
        assert_eq!(QMatrix::identity(7).rank(), 7);
        assert_eq!(QMatrix::identity(5).determinant().unwrap(), Rat::one());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = q(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(m.rank() + k.len(), 4);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn determinant_with_fractions_and_swaps() {
        let mut m = q(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant().unwrap(), Rat::from_int(-1));
        m.set(0, 0, Rat::new(1, 2));
        m.set(1, 1, Rat::new(2, 3));
        // 1/2*2/3 - 1 = -2/3
        assert_eq!(m.determinant().unwrap(), Rat::new(-2, 3));
        assert!(QMatrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn modular_determinant_agrees() {
        let m = q(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]);
        let d = m.determinant().unwrap();
        assert_eq!(d, Rat::from_int(-90));
        let p = 1_000_000_007;
        assert_eq!(m.det_mod_p(p).unwrap(), p - 90);
    }

    #[test]
    fn span_coordinates() {
        let vs = vec![
            vec![Rat::one(), Rat::zero(), Rat::zero()],
            vec![Rat::zero(), Rat::one(), Rat::one()],
        ];
        let c = coordinates_in_span(&vs, &vs[0]).unwrap().unwrap();
        assert_eq!(c, vec![Rat::one(), Rat::zero()]);
        let miss = vec![Rat::zero(), Rat::one(), Rat::zero()];
        assert!(coordinates_in_span(&vs, &miss).unwrap().is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = q(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), QMatrix::identity(2));
        assert!(q(&[vec![1, 1], vec![1, 1]]).inverse().unwrap().is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(4_611_686_018_427_387_847));
        assert!(!is_prime_u64(4_611_686_018_427_387_849));
        assert!(is_prime_u64(2_305_843_009_213_693_951));
    }
}
