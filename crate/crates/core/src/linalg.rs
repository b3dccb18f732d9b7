//! Dense exact linear algebra over the coefficient field.

use std::fmt;

use crate::scalar::{Coeff, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    coeff: Coeff,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(coeff: Coeff, rows: usize, cols: usize) -> Self {
        Mat {
            coeff,
            rows,
            cols,
            data: vec![coeff.zero(); rows * cols],
        }
    }

    pub fn identity(coeff: Coeff, n: usize) -> Self {
        let mut m = Self::zeros(coeff, n, n);
        for i in 0..n {
            m.set(i, i, coeff.one());
        }
        m
    }

    pub fn from_rows(coeff: Coeff, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Mat {
            coeff,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_i64(coeff: Coeff, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            coeff,
            rows.iter()
                .map(|r| r.iter().map(|&v| coeff.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let i = r * self.cols + c;
        self.data[i] = &self.data[i] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.coeff, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            coeff: self.coeff,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            coeff: self.coeff,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        Mat {
            coeff: self.coeff,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Row echelon form in place; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.get(row, col).inv().expect("field coefficients");
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = self.get(r, c) - &(&f * self.get(row, c));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.clone().echelon().len()
    }

    /// A basis of the null space, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.coeff.zero(); self.cols];
                v[f] = self.coeff.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.coeff, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.coeff.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.coeff.zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Betti numbers of a finite complex of vector spaces. `dims[i]` is the
/// dimension at position `i` and `diffs[i]` maps position `i + 1` to `i`
/// (a `dims[i] × dims[i+1]` matrix).
pub fn betti(dims: &[usize], diffs: &[Mat]) -> Vec<usize> {
    assert_eq!(diffs.len() + 1, dims.len().max(1));
    let ranks: Vec<usize> = diffs.iter().map(Mat::rank).collect();
    (0..dims.len())
        .map(|i| {
            let out = if i > 0 { ranks[i - 1] } else { 0 };
            let inc = ranks.get(i).copied().unwrap_or(0);
            dims[i] - out - inc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: Coeff = Coeff::Prime(101);

    #[test]
    fn rank_and_kernel() {
        let m = Mat::from_i64(C, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Mat::from_i64(C, &[&[1, 1], &[1, 1]]);
        let b = vec![C.from_i64(2), C.from_i64(2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert!(m.solve(&[C.from_i64(1), C.from_i64(2)]).is_none());
    }

    #[test]
    fn betti_of_exact_sequence() {
        // K → K² → K, exact.
        let d1 = Mat::from_i64(C, &[&[1, -1]]);
        let d0 = Mat::from_i64(C, &[&[1], &[1]]);
        assert!(d1.mul(&d0).is_zero());
        assert_eq!(betti(&[1, 2, 1], &[d1, d0]), vec![0, 0, 0]);
        assert_eq!(betti(&[3], &[]), vec![3]);
    }

    #[test]
    fn rationals() {
        let q = Coeff::Rational;
        let m = Mat::from_i64(q, &[&[2, 1], &[1, 3]]);
        let x = m.solve(&[q.one(), q.zero()]).unwrap();
        assert_eq!(x[0], q.from_ratio(3, 5).unwrap());
    }
}
