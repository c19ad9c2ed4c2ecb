use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qstate::{Amplitude, QuantumState};

/// A square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Amplitude>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Amplitude::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Amplitude::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Amplitude>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::domain("matrix rows must form a square grid"));
        }
        Ok(Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Amplitude) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Matrix { dim, data }
    }

    /// The outer product `|a⟩⟨b|`.
    pub fn outer(a: &QuantumState, b: &QuantumState) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::domain("outer product of states with different dimensions"));
        }
        let (x, y) = (a.amplitudes(), b.amplitudes());
        Ok(Self::from_fn(a.dim(), |r, c| x[r] * y[c].conj()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Amplitude {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Amplitude) {
        self.data[r * self.dim + c] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_dim(other.dim)?;
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Amplitude::ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_dim(other.dim)?;
        Ok(Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect(),
        })
    }

    pub fn scale(&self, k: Amplitude) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| *a * k).collect(),
        }
    }

    pub fn apply(&self, v: &[Amplitude]) -> Result<Vec<Amplitude>> {
        self.check_dim(v.len())?;
        let n = self.dim;
        Ok((0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Amplitude::ZERO, |acc, (a, b)| acc + *a * *b)
            })
            .collect())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_distance(&self, other: &Matrix) -> Result<f64> {
        self.check_dim(other.dim)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|a| a.is_finite())
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim {
            return Err(Error::domain(format!("dimension mismatch: {} vs {}", self.dim, d)));
        }
        Ok(())
    }
}
