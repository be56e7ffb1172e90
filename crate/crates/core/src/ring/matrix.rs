//! Dense matrices over a ring tower.

use std::fmt;

use super::{RingElement, RingError, Tower};

/// Row-major dense matrix of [`RingElement`]s sharing one tower.
#[derive(Clone, PartialEq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl RingMatrix {
    pub fn zeros(tower: &Tower, rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            data: vec![tower.zero(); rows * cols],
        }
    }

    pub fn identity(tower: &Tower, n: usize) -> Self {
        let mut m = Self::zeros(tower, n, n);
        for i in 0..n {
            m.data[i * n + i] = tower.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RingElement>>) -> Result<Self, RingError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) || r == 0 || c == 0 {
            return Err(RingError::Shape("ragged or empty rows".into()));
        }
        Ok(RingMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Single-column matrix.
    pub fn column(v: Vec<RingElement>) -> Self {
        RingMatrix {
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tower(&self) -> &Tower {
        self.data[0].tower()
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.data
    }

    pub fn column_vec(&self, c: usize) -> Vec<RingElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Self {
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        RingMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().map(RingElement::conj)
    }

    pub fn try_mul(&self, other: &RingMatrix) -> Result<RingMatrix, RingError> {
        if self.cols != other.rows {
            return Err(RingError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let t = self.tower().clone();
        let mut out = RingMatrix::zeros(&t, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * other.cols + c;
                        out.data[idx] += &a.try_mul(b)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &RingMatrix) -> RingMatrix {
        self.try_mul(other).expect("matrix product shape mismatch")
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix, RingError> {
        self.zip(other, |a, b| a.try_add(b))
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<RingMatrix, RingError> {
        self.zip(other, |a, b| a.try_sub(b))
    }

    fn zip(
        &self,
        other: &RingMatrix,
        f: impl Fn(&RingElement, &RingElement) -> Result<RingElement, RingError>,
    ) -> Result<RingMatrix, RingError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(RingError::Shape(
                "elementwise operands differ in shape".into(),
            ));
        }
        Ok(RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn scale(&self, s: &RingElement) -> RingMatrix {
        self.map(|x| x * s)
    }

    /// Kronecker product, `self` on the more significant index.
    pub fn kron(&self, other: &RingMatrix) -> RingMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let t = self.tower().clone();
        let mut out = RingMatrix::zeros(&t, rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if !b.is_zero() {
                            out.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Exact check of `U^dagger U = I`.
    pub fn is_unitary(&self) -> bool {
        self.rows == self.cols && self.adjoint().mul(self).is_identity()
    }

    pub fn trace(&self) -> RingElement {
        let mut acc = self.tower().zero();
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    /// Re-expresses every entry in a bigger tower.
    pub fn lift(&self, target: &Tower) -> Result<RingMatrix, RingError> {
        Ok(RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| x.lift(target))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}
