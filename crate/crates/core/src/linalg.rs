//! Small dense integer matrices: exact determinants, rational inverses and
//! Smith normal form.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("integer overflow")]
    Overflow,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = IntMatrix::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    fn square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Fraction-free (Bareiss) elimination; every intermediate is a minor of
    /// the input, so no rationals are needed.
    pub fn det(&self) -> Result<i64, LinalgError> {
        let n = self.square()?;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> =
            self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j]
                        .checked_mul(a[k][k])
                        .zip(a[i][k].checked_mul(a[k][j]))
                        .and_then(|(x, y)| x.checked_sub(y))
                        .ok_or(LinalgError::Overflow)?;
                    a[i][j] = v / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| LinalgError::Overflow)
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| int(x)).collect(),
        }
    }

    /// Exact inverse over the rationals by Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<RatMatrix, LinalgError> {
        let n = self.square()?;
        let mut a = self.to_rational();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(LinalgError::SingularMatrix)?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let (x, y) = (&a[(col, j)] * &f, &inv[(col, j)] * &f);
                    a[(r, j)] -= x;
                    inv[(r, j)] -= y;
                }
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rational::one();
        }
        RatMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Rational::zero(), |acc, j| acc + &self[(i, j)] * int(v[j])))
            .collect()
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut data = vec![Rational::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                data[i * rhs.cols + j] =
                    (0..self.cols).fold(Rational::zero(), |acc, k| acc + &self[(i, k)] * &rhs[(k, j)]);
            }
        }
        RatMatrix { rows: self.rows, cols: rhs.cols, data }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            self.data.swap(i * self.cols + j, k * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

pub fn det_exact(m: &IntMatrix) -> Result<i64, LinalgError> {
    m.det()
}

pub fn invert_exact(m: &IntMatrix) -> Result<RatMatrix, LinalgError> {
    m.invert()
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, its entries
/// nonnegative and each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().take_while(|&&x| x != 0).count()
    }
}

/// Smith normal form by Bezout row and column steps.
///
/// Elimination runs on big integers; `Overflow` means some entry of `U` or
/// `V` does not fit in an `i64`.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition, LinalgError> {
    let w = Snf::run(m, true);
    Ok(SmithDecomposition { u: narrow(&w.u)?, v: narrow(&w.v)?, d: narrow(&w.d)? })
}

/// Invariant factors only, without the transforming matrices. Never
/// overflows for matrices whose minors fit in an `i64`.
pub fn invariant_factors(m: &IntMatrix) -> Result<Vec<i64>, LinalgError> {
    let w = Snf::run(m, false);
    (0..m.rows.min(m.cols)).map(|i| i64::try_from(&w.d[i][i]).map_err(|_| LinalgError::Overflow)).collect()
}

struct Snf {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Snf {
    fn run(m: &IntMatrix, track: bool) -> Snf {
        let (rows, cols) = (m.rows, m.cols);
        let mut w = Snf {
            d: m.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
            u: if track { big_identity(rows) } else { Vec::new() },
            v: if track { big_identity(cols) } else { Vec::new() },
        };
        for t in 0..rows.min(cols) {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !w.d[i][j].is_zero())
                .min_by_key(|&(i, j)| w.d[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            w.d.swap(t, pi);
            if track {
                w.u.swap(t, pi);
            }
            for row in w.d.iter_mut().chain(w.v.iter_mut()) {
                row.swap(t, pj);
            }
            loop {
                loop {
                    for i in t + 1..rows {
                        w.clear_row_entry(t, i);
                    }
                    for j in t + 1..cols {
                        w.clear_col_entry(t, j);
                    }
                    if (t + 1..rows).all(|i| w.d[i][t].is_zero()) {
                        break;
                    }
                }
                // The pivot must divide the rest of the block; otherwise fold
                // an offending row into row t and clear again.
                let p = w.d[t][t].clone();
                match (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&w.d[i][j] % &p).is_zero())) {
                    Some(i) => w.add_row(t, i),
                    None => break,
                }
            }
            if w.d[t][t].is_negative() {
                for x in w.d[t].iter_mut().chain(w.u.get_mut(t).into_iter().flatten()) {
                    *x = -&*x;
                }
            }
        }
        w
    }

    /// Zeroes `d[i][t]` with a unimodular step on rows `t` and `i`.
    fn clear_row_entry(&mut self, t: usize, i: usize) {
        if self.d[i][t].is_zero() {
            return;
        }
        let step = Bezout::new(&self.d[t][t], &self.d[i][t]);
        for m in [&mut self.d, &mut self.u] {
            if m.is_empty() {
                continue;
            }
            for j in 0..m[t].len() {
                let (x, y) = step.apply(&m[t][j], &m[i][j]);
                m[t][j] = x;
                m[i][j] = y;
            }
        }
    }

    /// Zeroes `d[t][j]` with a unimodular step on columns `t` and `j`.
    fn clear_col_entry(&mut self, t: usize, j: usize) {
        if self.d[t][j].is_zero() {
            return;
        }
        let step = Bezout::new(&self.d[t][t], &self.d[t][j]);
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            let (x, y) = step.apply(&row[t], &row[j]);
            row[t] = x;
            row[j] = y;
        }
    }

    /// row t += row i
    fn add_row(&mut self, t: usize, i: usize) {
        for m in [&mut self.d, &mut self.u] {
            if m.is_empty() {
                continue;
            }
            let src = m[i].clone();
            for (x, y) in m[t].iter_mut().zip(src) {
                *x += y;
            }
        }
    }
}

/// The unimodular map `(s, r) -> (x s + y r, a r - b s)` sending the pair
/// it was built from to `(gcd, 0)`.
struct Bezout {
    x: BigInt,
    y: BigInt,
    a: BigInt,
    b: BigInt,
}

impl Bezout {
    fn new(a: &BigInt, b: &BigInt) -> Bezout {
        if (b % a).is_zero() {
            return Bezout { x: BigInt::one(), y: BigInt::zero(), a: BigInt::one(), b: b / a };
        }
        let e = a.extended_gcd(b);
        Bezout { x: e.x, y: e.y, a: a / &e.gcd, b: b / &e.gcd }
    }

    fn apply(&self, s: &BigInt, r: &BigInt) -> (BigInt, BigInt) {
        (&self.x * s + &self.y * r, &self.a * r - &self.b * s)
    }
}

fn big_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(i == j)).collect()).collect()
}

fn narrow(m: &[Vec<BigInt>]) -> Result<IntMatrix, LinalgError> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).map_err(|_| LinalgError::Overflow)).collect())
        .collect::<Result<Vec<Vec<i64>>, _>>()?;
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(0, 0));
    }
    IntMatrix::from_rows(&rows)
}

/// Order of a homology class in `Z^n / M Z^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(r) => write!(f, "{r}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

/// Least `r >= 1` with `r * class` in the column span of `m` over the
/// integers.
pub fn homological_order(m: &IntMatrix, class: &[i64]) -> Result<Order, LinalgError> {
    if class.len() != m.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "class has length {} but matrix has {} rows",
            class.len(),
            m.rows
        )));
    }
    // <c> is the kernel of coker M -> coker [M | c]; compare torsion sizes.
    let mut extended = m.to_rows();
    for (row, &c) in extended.iter_mut().zip(class) {
        row.push(c);
    }
    let before = invariant_factors(m)?;
    let after = invariant_factors(&IntMatrix::from_rows(&extended).unwrap_or_else(|_| IntMatrix::zeros(0, 1)))?;
    let rank = |f: &[i64]| f.iter().filter(|&&x| x != 0).count();
    if rank(&after) > rank(&before) {
        return Ok(Order::Infinite);
    }
    let torsion = |f: &[i64]| f.iter().filter(|&&x| x != 0).fold(BigInt::one(), |acc, &x| acc * x);
    let r = torsion(&before) / torsion(&after);
    let r = u64::try_from(&r).map_err(|_| LinalgError::Overflow)?;
    Ok(Order::Finite(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[-14]]).det().unwrap(), -14);
        assert_eq!(m(&[&[0, -15], &[-15, -14]]).det().unwrap(), -225);
        assert_eq!(IntMatrix::zeros(2, 2).det().unwrap(), 0);
        assert_eq!(IntMatrix::zeros(0, 0).det().unwrap(), 1);
        assert_eq!(m(&[&[0, 1, 1], &[1, 0, -1], &[1, -1, 0]]).det().unwrap(), -2);
        assert_eq!(m(&[&[0, 2], &[3, 0]]).det().unwrap(), -6);
        assert!(matches!(m(&[&[1, 2]]).det(), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn inverses() {
        let inv = m(&[&[-14]]).invert().unwrap();
        assert_eq!(inv[(0, 0)], ratio(-1, 14));
        assert_eq!(IntMatrix::zeros(2, 2).invert(), Err(LinalgError::SingularMatrix));
        let a = m(&[&[0, -15], &[-15, -14]]);
        let inv = a.invert().unwrap();
        assert_eq!(a.to_rational().mul(&inv), RatMatrix::identity(2));
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&IntMatrix::identity(2)).unwrap();
        assert_eq!(s.d, IntMatrix::identity(2));

        let a = m(&[&[-14]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d, m(&[&[14]]));
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
        assert!(s.u == m(&[&[-1]]) || s.v == m(&[&[-1]]));

        let a = m(&[&[0, -15], &[-15, -14]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.invariant_factors(), vec![1, 225]);
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
        assert_eq!(s.u.det().unwrap().abs(), 1);
        assert_eq!(s.v.det().unwrap().abs(), 1);
    }

    #[test]
    fn smith_rectangular_and_zero() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
        assert_eq!(s.invariant_factors(), vec![2, 6]);
        let z = smith_normal_form(&IntMatrix::zeros(2, 3)).unwrap();
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn orders() {
        assert_eq!(homological_order(&m(&[&[-14]]), &[-15]).unwrap(), Order::Finite(14));
        assert_eq!(homological_order(&IntMatrix::identity(3), &[4, -2, 9]).unwrap(), Order::Finite(1));
        assert_eq!(homological_order(&m(&[&[0]]), &[1]).unwrap(), Order::Infinite);
        assert_eq!(homological_order(&m(&[&[0]]), &[0]).unwrap(), Order::Finite(1));
        assert_eq!(homological_order(&m(&[&[6]]), &[4]).unwrap(), Order::Finite(3));
        assert_eq!(homological_order(&IntMatrix::zeros(0, 0), &[]).unwrap(), Order::Finite(1));
        assert!(homological_order(&m(&[&[1]]), &[1, 2]).is_err());
    }
}
