//! Linear operators on an `n`-qubit register.
//!
//! The structured forms (Hadamard layer, phase oracle, inversion about the
//! mean) are applied functionally in `O(2^n)` or `O(n·2^n)` time and are
//! unitary by construction. Dense matrices are validated for unitarity when
//! built through [`Operator::dense`]; [`Operator::to_dense`] materializes any
//! operator for cross-checking.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::qstate::{check_qubits, Amplitude, QuantumState};

/// Default tolerance of [`Operator::is_unitary`].
pub const UNITARY_TOL: f64 = 1e-9;

/// Largest register for which the `O(8^n)` dense unitarity check runs.
pub const MAX_DENSE_CHECK_QUBITS: usize = 8;

/// Largest register that [`Operator::to_dense`] materializes.
pub const MAX_DENSE_QUBITS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorForm {
    Identity,
    Dense(Matrix),
    HadamardAll,
    /// Truth table of `f`; the operator multiplies amplitude `x` by `(-1)^{f x}`.
    PhaseOracle(Vec<bool>),
    InversionAboutMean,
    /// Outermost operator first: `[U, V]` applies `V`, then `U`.
    Composed(Vec<Operator>),
    /// `U ⊗ V` with `U` on the high-order qubits.
    TensorProd(Box<Operator>, Box<Operator>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    n_qubits: usize,
    form: OperatorForm,
}

impl Operator {
    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Operator {
            n_qubits: n,
            form: OperatorForm::Identity,
        })
    }

    /// `H^{⊗n}`: `|x⟩ ↦ Σ_y (-1)^{x·y} |y⟩ / √(2^n)`.
    pub fn hadamard_all(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Operator {
            n_qubits: n,
            form: OperatorForm::HadamardAll,
        })
    }

    /// `U_f` for a truth table of length `2^n`.
    pub fn phase_oracle(table: Vec<bool>) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::domain(format!(
                "oracle table length {len} is not a power of two >= 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        Ok(Operator {
            n_qubits: n,
            form: OperatorForm::PhaseOracle(table),
        })
    }

    /// `U_f` from a table of bits; entries other than 0 and 1 are rejected.
    pub fn phase_oracle_bits(bits: &[u8]) -> Result<Self> {
        let table = bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::domain(format!("oracle entry {other} is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::phase_oracle(table)
    }

    /// `M ψ = λx · 2·(Σ_i ψ i / N) − ψ x`.
    pub fn inversion_about_mean(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Operator {
            n_qubits: n,
            form: OperatorForm::InversionAboutMean,
        })
    }

    /// A dense operator, rejected unless it passes [`Operator::is_unitary`].
    pub fn dense(m: Matrix) -> Result<Self> {
        let op = Self::dense_unchecked(m)?;
        if !op.is_unitary(UNITARY_TOL)? {
            return Err(Error::validation("dense operator is not unitary"));
        }
        Ok(op)
    }

    /// A dense operator with no unitarity check. Only for testing and for
    /// measurement operators, which need not be unitary.
    pub fn dense_unchecked(m: Matrix) -> Result<Self> {
        let dim = m.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::domain(format!("matrix dimension {dim} is not 2^n")));
        }
        let n = dim.trailing_zeros() as usize;
        check_qubits(n)?;
        if !m.is_finite() {
            return Err(Error::validation("non-finite matrix entry"));
        }
        Ok(Operator {
            n_qubits: n,
            form: OperatorForm::Dense(m),
        })
    }

    /// `U ∘ V`: apply `V` first.
    pub fn compose(u: &Operator, v: &Operator) -> Result<Self> {
        if u.n_qubits != v.n_qubits {
            return Err(Error::domain(format!(
                "cannot compose operators on {} and {} qubits",
                u.n_qubits, v.n_qubits
            )));
        }
        let mut parts = Vec::new();
        for op in [u, v] {
            match &op.form {
                OperatorForm::Composed(inner) => parts.extend(inner.iter().cloned()),
                _ => parts.push(op.clone()),
            }
        }
        Ok(Operator {
            n_qubits: u.n_qubits,
            form: OperatorForm::Composed(parts),
        })
    }

    /// `U ⊗ V`, defined by `(U ⊗ V)(ψ ⊗ φ) = (U ψ) ⊗ (V φ)`.
    pub fn tensor(u: &Operator, v: &Operator) -> Result<Self> {
        let n = u.n_qubits + v.n_qubits;
        check_qubits(n)?;
        Ok(Operator {
            n_qubits: n,
            form: OperatorForm::TensorProd(Box::new(u.clone()), Box::new(v.clone())),
        })
    }

    pub fn adjoint(&self) -> Operator {
        let form = match &self.form {
            OperatorForm::Dense(m) => OperatorForm::Dense(m.adjoint()),
            OperatorForm::Composed(parts) => {
                OperatorForm::Composed(parts.iter().rev().map(Operator::adjoint).collect())
            }
            OperatorForm::TensorProd(u, v) => OperatorForm::TensorProd(Box::new(u.adjoint()), Box::new(v.adjoint())),
            // Real symmetric forms are self-adjoint.
            f @ (OperatorForm::Identity
            | OperatorForm::HadamardAll
            | OperatorForm::PhaseOracle(_)
            | OperatorForm::InversionAboutMean) => f.clone(),
        };
        Operator {
            n_qubits: self.n_qubits,
            form,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn form(&self) -> &OperatorForm {
        &self.form
    }

    /// `ψ := U ψ`.
    pub fn apply(&self, psi: &QuantumState) -> Result<QuantumState> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::domain(format!(
                "operator on {} qubits applied to a {}-qubit state",
                self.n_qubits,
                psi.n_qubits()
            )));
        }
        let out = self.apply_vector(psi.amplitudes())?;
        Ok(QuantumState::from_parts(self.n_qubits, out))
    }

    /// Applies the linear map to an arbitrary (not necessarily unit) vector.
    pub fn apply_vector(&self, v: &[Amplitude]) -> Result<Vec<Amplitude>> {
        if v.len() != self.dim() {
            return Err(Error::domain(format!(
                "vector of length {} for an operator of dimension {}",
                v.len(),
                self.dim()
            )));
        }
        let mut out = v.to_vec();
        self.apply_in_place(&mut out);
        Ok(out)
    }

    fn apply_in_place(&self, v: &mut [Amplitude]) {
        match &self.form {
            OperatorForm::Identity => {}
            OperatorForm::Dense(m) => {
                let r = m.apply(v).expect("dimension checked by caller");
                v.copy_from_slice(&r);
            }
            OperatorForm::HadamardAll => walsh_hadamard(v),
            OperatorForm::PhaseOracle(f) => {
                for (a, &bit) in v.iter_mut().zip(f) {
                    if bit {
                        *a = -*a;
                    }
                }
            }
            OperatorForm::InversionAboutMean => {
                let n = v.len() as f64;
                let sum = v.iter().fold(Amplitude::ZERO, |acc, a| acc + *a);
                let twice_mean = sum.scale(2.0 / n);
                for a in v.iter_mut() {
                    *a = twice_mean - *a;
                }
            }
            OperatorForm::Composed(parts) => {
                for op in parts.iter().rev() {
                    op.apply_in_place(v);
                }
            }
            OperatorForm::TensorProd(u, w) => {
                let low = w.dim();
                let high = u.dim();
                for block in v.chunks_mut(low) {
                    w.apply_in_place(block);
                }
                let mut column = vec![Amplitude::ZERO; high];
                for lo in 0..low {
                    for hi in 0..high {
                        column[hi] = v[hi * low + lo];
                    }
                    u.apply_in_place(&mut column);
                    for hi in 0..high {
                        v[hi * low + lo] = column[hi];
                    }
                }
            }
        }
    }

    /// Dense `2^n × 2^n` matrix of this operator (column `x` is `U |x⟩`).
    pub fn to_dense(&self) -> Result<Matrix> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::capacity(format!(
                "dense materialization of {} qubits (limit {MAX_DENSE_QUBITS})",
                self.n_qubits
            )));
        }
        if let OperatorForm::Dense(m) = &self.form {
            return Ok(m.clone());
        }
        let dim = self.dim();
        let mut m = Matrix::zeros(dim);
        let mut col = vec![Amplitude::ZERO; dim];
        for x in 0..dim {
            col.iter_mut().for_each(|a| *a = Amplitude::ZERO);
            col[x] = Amplitude::ONE;
            self.apply_in_place(&mut col);
            for (r, a) in col.iter().enumerate() {
                m.set(r, x, *a);
            }
        }
        Ok(m)
    }

    /// `U†U = I` entrywise within `tol`, checked densely.
    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        if self.n_qubits > MAX_DENSE_CHECK_QUBITS {
            return Err(Error::capacity(format!(
                "dense unitarity check on {} qubits (limit {MAX_DENSE_CHECK_QUBITS})",
                self.n_qubits
            )));
        }
        let u = self.to_dense()?;
        let prod = u.adjoint().mul(&u)?;
        Ok(prod.max_distance(&Matrix::identity(self.dim()))? <= tol)
    }
}

/// Unnormalized fast Walsh-Hadamard transform followed by the `1/√N` scale.
fn walsh_hadamard(v: &mut [Amplitude]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let k = 1.0 / libm::sqrt(n as f64);
    for a in v.iter_mut() {
        *a = a.scale(k);
    }
}

/// Parity of the bitwise AND of `x` and `y`: the exponent in `(-1)^{x·y}`.
pub fn bit_dot(x: usize, y: usize) -> u32 {
    (x & y).count_ones() & 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn ket(x: usize, n: usize) -> QuantumState {
        QuantumState::basis(x, n).unwrap()
    }

    fn close(a: &[Amplitude], b: &[f64], tol: f64) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| (x.re - y).abs() <= tol && x.im.abs() <= tol)
    }

    #[test]
    fn identity_behaviour() {
        let i1 = Operator::identity(1).unwrap();
        assert_eq!(i1.apply(&ket(0, 1)).unwrap(), ket(0, 1));
        assert_eq!(Operator::identity(2).unwrap().to_dense().unwrap(), Matrix::identity(4));
        assert!(Operator::identity(3).unwrap().is_unitary(UNITARY_TOL).unwrap());
        assert!(Operator::identity(13).unwrap_err().is_capacity());
    }

    #[test]
    fn hadamard_examples() {
        let h1 = Operator::hadamard_all(1).unwrap();
        let s = h1.apply(&ket(0, 1)).unwrap();
        assert!(close(s.amplitudes(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2], 1e-15));
        let s = h1.apply(&ket(1, 1)).unwrap();
        assert!(close(s.amplitudes(), &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], 1e-15));
        let s = Operator::hadamard_all(2).unwrap().apply(&ket(0, 2)).unwrap();
        assert!(close(s.amplitudes(), &[0.5; 4], 1e-15));
        for n in 1..=4 {
            let h = Operator::hadamard_all(n).unwrap();
            for x in 0..1 << n {
                let back = h.apply(&h.apply(&ket(x, n)).unwrap()).unwrap();
                assert!(back.approx_eq(&ket(x, n), 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn hadamard_matches_sign_formula() {
        for n in 1..=4 {
            let m = Operator::hadamard_all(n).unwrap().to_dense().unwrap();
            let scale = 1.0 / libm::sqrt((1 << n) as f64);
            for r in 0..1 << n {
                for c in 0..1 << n {
                    let sign = if bit_dot(r, c) == 1 { -1.0 } else { 1.0 };
                    assert!((m.get(r, c).re - sign * scale).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let psi = Operator::hadamard_all(2).unwrap().apply(&ket(0, 2)).unwrap();
        let zero = Operator::phase_oracle(vec![false; 4]).unwrap();
        assert_eq!(zero.apply(&psi).unwrap(), psi);
        let one = Operator::phase_oracle(vec![true; 4]).unwrap();
        let neg = one.apply(&psi).unwrap();
        assert!(neg
            .approx_eq(&psi.phase(Amplitude::real(-1.0)).unwrap(), 0.0 + 1e-15)
            .unwrap());
        let point = Operator::phase_oracle(vec![false, false, true, false]).unwrap();
        let flipped = point.apply(&psi).unwrap();
        assert!(close(flipped.amplitudes(), &[0.5, 0.5, -0.5, 0.5], 1e-15));
        for x in 0..4 {
            let out = point.apply(&ket(x, 2)).unwrap();
            let s = if x == 2 { -1.0 } else { 1.0 };
            assert!(out
                .approx_eq(&ket(x, 2).phase(Amplitude::real(s)).unwrap(), 1e-15)
                .unwrap());
        }
        assert!(matches!(Operator::phase_oracle(vec![true; 3]), Err(Error::Domain(_))));
        assert!(matches!(Operator::phase_oracle_bits(&[0, 2]), Err(Error::Domain(_))));
        assert!(point.is_unitary(UNITARY_TOL).unwrap());
    }

    #[test]
    fn inversion_about_mean_examples() {
        let m = Operator::inversion_about_mean(2).unwrap();
        let uniform = Operator::hadamard_all(2).unwrap().apply(&ket(0, 2)).unwrap();
        assert!(m.apply(&uniform).unwrap().approx_eq(&uniform, 1e-15).unwrap());
        let out = m.apply(&ket(0, 2)).unwrap();
        assert!(close(out.amplitudes(), &[-0.5, 0.5, 0.5, 0.5], 1e-15));
        for n in 1..=4 {
            assert!(Operator::inversion_about_mean(n).unwrap().is_unitary(1e-10).unwrap());
        }
    }

    #[test]
    fn adjoint_and_compose() {
        for n in 1..=3 {
            let h = Operator::hadamard_all(n).unwrap();
            let d = h.to_dense().unwrap();
            assert!(d.adjoint().max_distance(&d).unwrap() < 1e-12);
            assert!(h.adjoint().to_dense().unwrap().max_distance(&d).unwrap() < 1e-12);
        }
        let h = Operator::hadamard_all(1).unwrap();
        let hh = Operator::compose(&h, &h).unwrap();
        assert!(hh.to_dense().unwrap().max_distance(&Matrix::identity(2)).unwrap() < 1e-12);
        let hi = Operator::compose(&h, &Operator::identity(1).unwrap()).unwrap();
        assert!(hi.to_dense().unwrap().max_distance(&h.to_dense().unwrap()).unwrap() < 1e-15);
        assert!(matches!(
            Operator::compose(&h, &Operator::identity(2).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn grover_step_on_four_states() {
        // (M ∘ U_f) on the uniform state, N = 4, x₁ = 2; expected vector by
        // brute-force matrix products.
        let n = 2;
        let uf = Operator::phase_oracle(vec![false, false, true, false]).unwrap();
        let m = Operator::inversion_about_mean(n).unwrap();
        let step = Operator::compose(&m, &uf).unwrap();
        let uniform = Operator::hadamard_all(n).unwrap().apply(&ket(0, n)).unwrap();

        let dense = m.to_dense().unwrap().mul(&uf.to_dense().unwrap()).unwrap();
        let expect = dense.apply(uniform.amplitudes()).unwrap();
        let got = step.apply(&uniform).unwrap();
        for (a, b) in got.amplitudes().iter().zip(&expect) {
            assert!((*a - *b).abs() < 1e-12);
        }
        assert!(close(got.amplitudes(), &[0.0, 0.0, 1.0, 0.0], 1e-12));
    }

    #[test]
    fn tensor_operators() {
        let i1 = Operator::identity(1).unwrap();
        let ii = Operator::tensor(&i1, &i1).unwrap();
        assert!(ii.to_dense().unwrap().max_distance(&Matrix::identity(4)).unwrap() < 1e-15);
        let h = Operator::hadamard_all(1).unwrap();
        let hi = Operator::tensor(&h, &i1).unwrap();
        let out = hi.apply(&ket(0, 2)).unwrap();
        assert!(close(
            out.amplitudes(),
            &[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0],
            1e-15
        ));
        let hh = Operator::tensor(&h, &h).unwrap();
        let h2 = Operator::hadamard_all(2).unwrap();
        assert!(hh.to_dense().unwrap().max_distance(&h2.to_dense().unwrap()).unwrap() < 1e-12);
        let big = Operator::identity(7).unwrap();
        assert!(Operator::tensor(&big, &Operator::identity(6).unwrap())
            .unwrap_err()
            .is_capacity());
    }

    #[test]
    fn unitarity_check() {
        assert!(Operator::hadamard_all(2).unwrap().is_unitary(UNITARY_TOL).unwrap());
        let mut m = Matrix::identity(2);
        m.set(1, 1, Amplitude::ZERO);
        let bad = Operator::dense_unchecked(m.clone()).unwrap();
        assert!(!bad.is_unitary(UNITARY_TOL).unwrap());
        assert!(matches!(Operator::dense(m), Err(Error::Validation(_))));
        assert!(Operator::identity(9)
            .unwrap()
            .is_unitary(UNITARY_TOL)
            .unwrap_err()
            .is_capacity());
    }
}
