//! Matrices with entries in a graded ring instance.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{GradedElement, Ring};

#[derive(Clone)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<GradedElement>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![GradedElement::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::diagonal(ring, n, &GradedElement::one(ring))
    }

    pub fn diagonal(ring: &Ring, n: usize, e: &GradedElement) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<GradedElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let entries: Vec<GradedElement> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), r * c, "ragged rows");
        Matrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Parse rows of expressions, e.g. `&[&["1 - x", "y^2"]]`.
    pub fn parse(ring: &Ring, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| GradedElement::parse(ring, s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Ok(Self::from_rows(ring, rows))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GradedElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GradedElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GradedElement)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, e)| (i / self.cols.max(1), i % self.cols.max(1), e))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GradedElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.entries().all(|(r, c, e)| {
                if r == c {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
    }

    fn check_shape(&self, other: &Matrix, what: &str) -> Result<()> {
        if !self.ring.same(other.ring()) {
            return Err(Error::InstanceMismatch(self.ring.name(), other.ring.name()));
        }
        let ok = match what {
            "mul" => self.cols == other.rows,
            _ => self.rows == other.rows && self.cols == other.cols,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{what}: {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_shape(other, "mul")?;
        let mut out = Matrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_shape(other, "add").unwrap_or_else(|e| panic!("{e}"));
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, e: &GradedElement) -> Matrix {
        self.map(|x| e.mul(x))
    }

    pub fn map(&self, f: impl FnMut(&GradedElement) -> GradedElement) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Transport to another instance sharing the presentation, e.g. a reindexed one.
    pub fn transport(&self, ring: &Ring) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.transport(ring)).collect(),
        }
    }

    /// Largest amplitude of an entry; the empty matrix has amplitude 0.
    pub fn amplitude(&self) -> i64 {
        self.entries.iter().map(GradedElement::amplitude).max().unwrap_or(0)
    }

    pub fn apply(&self, v: &[GradedElement]) -> Vec<GradedElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = GradedElement::zero(&self.ring);
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Assemble a block matrix; `row_sizes`/`col_sizes` fix the shape of
    /// empty (`None`) blocks.
    pub fn blocks(
        ring: &Ring,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[Vec<Option<Matrix>>],
    ) -> Matrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = &blocks[bi][bj] {
                    assert_eq!((b.rows, b.cols), (rs, cs), "block ({bi},{bj}) has wrong shape");
                    for r in 0..rs {
                        for c in 0..cs {
                            out.set(r0 + r, c0 + c, b.get(r, c).clone());
                        }
                    }
                }
                c0 += cs;
            }
            r0 += rs;
        }
        out
    }

    pub fn sub_block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, &GradedElement)> {
        self.entries().find(|(_, _, e)| !e.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_laurent;
    use crate::scalar::Coeff;

    #[test]
    fn amplitude_of_matrix() {
        let l = make_laurent(Coeff::Prime(101)).unwrap();
        let m = Matrix::parse(&l, &[&["1 - x", "y^2"]]).unwrap();
        assert_eq!(m.amplitude(), 2);
        assert_eq!(Matrix::zeros(&l, 0, 0).amplitude(), 0);
    }

    #[test]
    fn block_assembly() {
        let l = make_laurent(Coeff::Prime(101)).unwrap();
        let id = Matrix::identity(&l, 1);
        let b = Matrix::blocks(&l, &[1, 1], &[1, 1], &[vec![Some(id.clone()), None], vec![None, Some(id)]]);
        assert!(b.is_identity());
        assert!(b.mul(&b).is_identity());
    }
}
