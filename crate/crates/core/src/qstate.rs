//! Pure quantum states of an `n`-qubit register.
//!
//! A state is a function from `0,..2^n` to the complex numbers whose squared
//! magnitudes sum to one. States are compared componentwise: two states that
//! differ by a global phase are different values.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported register.
pub const MAX_QUBITS: usize = 12;

/// Tolerance on `Σ |ψ x|² = 1` for every constructed state.
pub const NORM_TOL: f64 = 1e-9;

/// A double-precision complex number.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude { re: 0.0, im: 0.0 };
    pub const ONE: Amplitude = Amplitude { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Amplitude { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Amplitude { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Amplitude::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn scale(self, k: f64) -> Self {
        Amplitude::new(self.re * k, self.im * k)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for Amplitude {
    type Output = Amplitude;
    fn add(self, o: Amplitude) -> Amplitude {
        Amplitude::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for Amplitude {
    fn add_assign(&mut self, o: Amplitude) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for Amplitude {
    type Output = Amplitude;
    fn sub(self, o: Amplitude) -> Amplitude {
        Amplitude::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Amplitude {
    type Output = Amplitude;
    fn mul(self, o: Amplitude) -> Amplitude {
        Amplitude::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        Amplitude::new(-self.re, -self.im)
    }
}

impl fmt::Display for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im < 0.0 {
            write!(f, "({}-{}i)", self.re, -self.im)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::capacity(format!(
            "register of {n} qubits (supported: 1..={MAX_QUBITS})"
        )));
    }
    Ok(())
}

/// Squared Euclidean norm of a raw amplitude vector.
pub fn norm_sqr(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// A unit-norm amplitude vector of length `2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

impl QuantumState {
    /// Builds a state from raw amplitudes. The vector is never renormalized:
    /// a norm off by more than [`NORM_TOL`] is rejected.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::domain(format!(
                "amplitude vector of length {len} is not 2^n with n >= 1"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(Error::validation("non-finite amplitude"));
        }
        let norm = norm_sqr(&amps);
        if libm::fabs(norm - 1.0) > NORM_TOL {
            return Err(Error::validation(format!(
                "state norm² is {norm}, expected 1 within {NORM_TOL}"
            )));
        }
        Ok(QuantumState { n_qubits: n, amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Amplitude::real(v)).collect())
    }

    /// Skips validation; callers guarantee the norm invariant.
    pub(crate) fn from_parts(n_qubits: usize, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        QuantumState { n_qubits, amps }
    }

    /// The computational basis ket `|x⟩` of an `n`-qubit register.
    pub fn basis(x: usize, n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if x >= dim {
            return Err(Error::domain(format!("basis index {x} outside 0,..{dim}")));
        }
        let mut amps = vec![Amplitude::ZERO; dim];
        amps[x] = Amplitude::ONE;
        Ok(QuantumState { n_qubits: n, amps })
    }

    /// `|0⟩^{⊗n}`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(0, n)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, x: usize) -> Amplitude {
        self.amps[x]
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `Σ_x |ψ x|²` restricted to one index: the probability of outcome `x`
    /// in a computational-basis measurement.
    pub fn probability(&self, x: usize) -> f64 {
        self.amps[x].norm_sqr()
    }

    /// `⟨self|other⟩ = Σ_x (self x)* × (other x)`.
    pub fn inner(&self, other: &QuantumState) -> Result<Amplitude> {
        self.same_dim(other)?;
        Ok(inner_raw(&self.amps, &other.amps))
    }

    /// Tensor product `self ⊗ other`; `self` supplies the high-order index bits.
    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        let n = self.n_qubits + other.n_qubits;
        check_qubits(n)?;
        let low = other.dim();
        let amps = (0..1usize << n)
            .map(|i| self.amps[i / low] * other.amps[i % low])
            .collect();
        Ok(QuantumState { n_qubits: n, amps })
    }

    /// Componentwise distance `max_x |ψ x − φ x|`.
    pub fn max_distance(&self, other: &QuantumState) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max))
    }

    /// True iff every amplitude differs by at most `tol`.
    pub fn approx_eq(&self, other: &QuantumState, tol: f64) -> Result<bool> {
        if !(tol > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        Ok(self.max_distance(other)? <= tol)
    }

    /// Global scalar multiple. `|k| = 1` keeps the state normalized.
    pub fn phase(&self, k: Amplitude) -> Result<QuantumState> {
        Self::from_amplitudes(self.amps.iter().map(|&a| a * k).collect())
    }

    fn same_dim(&self, other: &QuantumState) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::domain(format!(
                "dimension mismatch: {} vs {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(())
    }
}

pub(crate) fn inner_raw(a: &[Amplitude], b: &[Amplitude]) -> Amplitude {
    a.iter().zip(b).fold(Amplitude::ZERO, |acc, (x, y)| acc + x.conj() * *y)
}

/// `state_approx_eq` as a free function.
pub fn state_approx_eq(a: &QuantumState, b: &QuantumState, tol: f64) -> Result<bool> {
    a.approx_eq(b, tol)
}
