//! Small dense matrices over a [`Scalar`] field.

use std::collections::BTreeMap;

use crate::qscalar::{QError, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_square(n: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), n * n);
        Mat {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(k)).collect(),
        }
    }

    pub fn sub_scalar(&self, k: &S) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i).sub(k);
            m.set(i, i, v);
        }
        m
    }

    pub fn trace(&self) -> S {
        (0..self.rows).fold(S::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `Some(c)` if the matrix is `c · I`.
    pub fn scalar_value(&self) -> Option<S> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { &c } else { &S::zero() };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r * n + c].is_zero()) else {
                return S::zero();
            };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let pv = m[c * n + c].clone();
            det = det.mul(&pv);
            let inv = pv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                let f = m[r * n + c].mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m[r * n + j].sub(&f.mul(&m[c * n + j]));
                    m[r * n + j] = v;
                }
            }
        }
        det
    }

    /// Rank by exact row reduction.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for i in r + 1..m.rows {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            r += 1;
            if r == m.rows {
                break;
            }
        }
        r
    }
}

/// Solves the square system `a x = b`; errors if `a` is singular.
pub fn solve_square<S: Scalar>(a: &Mat<S>, b: &[S]) -> Result<Vec<S>, QError> {
    let n = a.rows;
    let mut m: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut row: Vec<S> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !m[r][c].is_zero())
            .ok_or(QError::DivisionByZero)?;
        m.swap(c, p);
        let inv = m[c][c].inv()?;
        for x in m[c].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=n {
                    let v = m[r][j].sub(&f.mul(&m[c][j]));
                    m[r][j] = v;
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Sparse linear row `Σ coef[v] x_v + constant = 0`.
#[derive(Clone, Debug)]
pub struct SparseRow<S> {
    pub coefs: BTreeMap<usize, S>,
    pub constant: S,
}

/// Row-reduces the rows and returns the variables whose value is fixed by
/// them. Errors on an inconsistent row (0 = c ≠ 0).
pub fn determined_values<S: Scalar>(rows: Vec<SparseRow<S>>) -> Result<BTreeMap<usize, S>, usize> {
    let mut rows: Vec<SparseRow<S>> = rows.into_iter().filter(|r| !r.coefs.is_empty() || !r.constant.is_zero()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut done = vec![false; rows.len()];
    loop {
        let Some(ri) = (0..rows.len()).find(|&i| !done[i] && !rows[i].coefs.is_empty()) else {
            break;
        };
        done[ri] = true;
        let (&pv, pc) = rows[ri].coefs.iter().next().unwrap();
        let inv = pc.inv().expect("stored coefficients are nonzero");
        let prow = {
            let r = &mut rows[ri];
            for c in r.coefs.values_mut() {
                *c = c.mul(&inv);
            }
            r.constant = r.constant.mul(&inv);
            r.clone()
        };
        for (i, row) in rows.iter_mut().enumerate() {
            if i == ri {
                continue;
            }
            let Some(f) = row.coefs.get(&pv).cloned() else {
                continue;
            };
            for (v, c) in &prow.coefs {
                let cur = row.coefs.get(v).cloned().unwrap_or_else(S::zero);
                let nv = cur.sub(&f.mul(c));
                if nv.is_zero() {
                    row.coefs.remove(v);
                } else {
                    row.coefs.insert(*v, nv);
                }
            }
            row.constant = row.constant.sub(&f.mul(&prow.constant));
        }
        pivots.push((ri, pv));
    }
    if let Some(i) = rows.iter().position(|r| r.coefs.is_empty() && !r.constant.is_zero()) {
        return Err(i);
    }
    let mut out = BTreeMap::new();
    for (ri, v) in pivots {
        let r = &rows[ri];
        if r.coefs.len() == 1 {
            out.insert(v, r.constant.neg());
        }
    }
    Ok(out)
}

/// Outcome of reducing a sparse system modulo a prime.
#[derive(Debug, PartialEq, Eq)]
pub enum ModularScreen {
    /// Indices of a maximal independent set of rows, and whether the rows
    /// fix the value of at least one variable.
    Independent { rows: Vec<usize>, determines: bool },
    /// Some coefficient has no residue, or the reduction found 0 = c ≠ 0;
    /// the exact computation has to decide.
    Inconclusive,
}

/// Row-reduces the system modulo a large prime. Rows independent there are
/// independent exactly, so the exact solve can be restricted to them.
pub fn modular_screen<S: Scalar>(rows: &[SparseRow<S>]) -> ModularScreen {
    use crate::qscalar::modp;
    let mut basis: BTreeMap<usize, (BTreeMap<usize, u64>, u64)> = BTreeMap::new();
    let mut picked = Vec::new();
    for (ri, r) in rows.iter().enumerate() {
        let mut row = BTreeMap::new();
        for (v, c) in &r.coefs {
            let Some(x) = c.residue() else {
                return ModularScreen::Inconclusive;
            };
            if x != 0 {
                row.insert(*v, x);
            }
        }
        let Some(mut k) = r.constant.residue() else {
            return ModularScreen::Inconclusive;
        };
        let mut cursor = 0;
        loop {
            let Some((&v, &c)) = row.range(cursor..).next() else {
                if k != 0 {
                    return ModularScreen::Inconclusive;
                }
                break;
            };
            match basis.get(&v) {
                Some((brow, bk)) => {
                    for (u, bc) in brow {
                        let cur = row.get(u).copied().unwrap_or(0);
                        let nv = modp::sub(cur, modp::mul(c, *bc));
                        if nv == 0 {
                            row.remove(u);
                        } else {
                            row.insert(*u, nv);
                        }
                    }
                    k = modp::sub(k, modp::mul(c, *bk));
                    cursor = v + 1;
                }
                None => {
                    let inv = modp::inv(c).expect("nonzero residue");
                    for x in row.values_mut() {
                        *x = modp::mul(*x, inv);
                    }
                    basis.insert(v, (row, modp::mul(k, inv)));
                    picked.push(ri);
                    break;
                }
            }
        }
    }
    // Back-substitute to reduced echelon form and look for singletons.
    let pivots: Vec<usize> = basis.keys().rev().copied().collect();
    for &v in &pivots {
        let (prow, pk) = basis[&v].clone();
        for (_, (row, k)) in basis.range_mut(..v) {
            let Some(&c) = row.get(&v) else { continue };
            for (u, pc) in &prow {
                let cur = row.get(u).copied().unwrap_or(0);
                let nv = modp::sub(cur, modp::mul(c, *pc));
                if nv == 0 {
                    row.remove(u);
                } else {
                    row.insert(*u, nv);
                }
            }
            *k = modp::sub(*k, modp::mul(c, pk));
        }
    }
    let determines = basis.values().any(|(row, _)| row.len() == 1);
    ModularScreen::Independent {
        rows: picked,
        determines,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn det_and_rank() {
        let m = Mat::from_square(3, vec![r(2), r(0), r(1), r(1), r(3), r(2), r(1), r(1), r(1)]);
        // cofactor expansion along the first row
        assert_eq!(m.det(), r(2 * (3 - 2) + (1 - 3)));
        assert_eq!(m.rank(), 2);
        let m = Mat::from_square(3, vec![r(2), r(0), r(1), r(1), r(3), r(2), r(1), r(1), r(4)]);
        assert_eq!(m.det(), r(2 * (12 - 2) + (1 - 3)));
        assert_eq!(m.rank(), 3);
        let s = Mat::from_square(2, vec![r(1), r(2), r(2), r(4)]);
        assert_eq!(s.det(), r(0));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn square_solve() {
        let a = Mat::from_square(2, vec![r(1), r(1), r(1), r(-1)]);
        assert_eq!(solve_square(&a, &[r(3), r(1)]).unwrap(), vec![r(2), r(1)]);
    }

    #[test]
    fn determined_subset() {
        // x0 + x1 = 3, x2 = 5, x1 + x3 = 1
        let row = |c: &[(usize, i64)], k: i64| SparseRow {
            coefs: c.iter().map(|&(v, x)| (v, r(x))).collect(),
            constant: r(k),
        };
        let out = determined_values(vec![row(&[(0, 1), (1, 1)], -3), row(&[(2, 1)], -5), row(&[(1, 1), (3, 1)], -1)]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[&2], r(5));
        assert!(determined_values(vec![row(&[(0, 1)], -1), row(&[(0, 1)], -2)]).is_err());
    }

    #[test]
    fn screen_picks_independent_rows() {
        let row = |c: &[(usize, i64)], k: i64| SparseRow {
            coefs: c.iter().map(|&(v, x)| (v, r(x))).collect(),
            constant: r(k),
        };
        let rows = vec![
            row(&[(0, 1), (1, 1)], -3),
            row(&[(0, 2), (1, 2)], -6),
            row(&[(0, 1), (1, -1)], -1),
        ];
        assert_eq!(
            modular_screen(&rows),
            ModularScreen::Independent {
                rows: vec![0, 2],
                determines: true
            }
        );
        let loose = vec![row(&[(0, 1), (1, 1)], -3), row(&[(2, 1), (3, 1)], 0)];
        assert_eq!(
            modular_screen(&loose),
            ModularScreen::Independent {
                rows: vec![0, 1],
                determines: false
            }
        );
        assert_eq!(
            modular_screen(&[row(&[(0, 1)], -1), row(&[(0, 1)], -2)]),
            ModularScreen::Inconclusive
        );
    }
}
