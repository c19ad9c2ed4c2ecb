//! Measurement of a pure state.
//!
//! Four forms, from most to least general: a collection of measurement
//! operators satisfying the completeness equation, a projective measurement
//! given by an observable, measurement in an orthonormal basis, and
//! measurement in the computational basis. Each yields a finite distribution
//! over `(outcome, post-measurement state)` pairs.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::qstate::{check_qubits, inner_raw, norm_sqr, Amplitude, QuantumState};
use crate::PROB_EPS;

/// Tolerance for completeness, projector and orthonormality checks.
pub const MEASURE_TOL: f64 = 1e-9;

/// Measurement operators `M_0, …, M_{2^n − 1}` with `Σ_m M_m† M_m = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementCollection {
    n_qubits: usize,
    operators: Vec<Matrix>,
}

impl MeasurementCollection {
    /// Validates completeness. Fewer than `2^n` operators are padded with
    /// zero operators so outcomes range over exactly `0,..2^n`.
    pub fn new(mut operators: Vec<Matrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::validation("empty measurement collection"))?;
        let dim = first.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::domain(format!("operator dimension {dim} is not 2^n")));
        }
        let n = dim.trailing_zeros() as usize;
        check_qubits(n)?;
        if operators.iter().any(|m| m.dim() != dim) {
            return Err(Error::domain("measurement operators of different dimensions"));
        }
        if operators.len() > dim {
            return Err(Error::domain(format!(
                "{} measurement operators for {dim} outcomes",
                operators.len()
            )));
        }
        operators.resize(dim, Matrix::zeros(dim));
        let mut sum = Matrix::zeros(dim);
        for m in &operators {
            sum = sum.add(&m.adjoint().mul(m)?)?;
        }
        let err = sum.max_distance(&Matrix::identity(dim))?;
        if err > MEASURE_TOL {
            return Err(Error::validation(format!("completeness equation violated by {err:e}")));
        }
        Ok(MeasurementCollection { n_qubits: n, operators })
    }

    /// `{|m⟩⟨m|}`.
    pub fn computational(n: usize) -> Result<Self> {
        Self::new(computational_projectors(n)?)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }
}

/// A Hermitian observable given by its spectral decomposition `Σ_m λ_m P_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    n_qubits: usize,
    eigenpairs: Vec<(f64, Matrix)>,
}

impl Observable {
    /// Requires idempotent Hermitian projectors that are mutually orthogonal
    /// and sum to the identity.
    pub fn new(eigenpairs: Vec<(f64, Matrix)>) -> Result<Self> {
        let dim = eigenpairs
            .first()
            .map(|(_, p)| p.dim())
            .ok_or_else(|| Error::validation("observable with no eigenpairs"))?;
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::domain(format!("projector dimension {dim} is not 2^n")));
        }
        let n = dim.trailing_zeros() as usize;
        check_qubits(n)?;
        let mut sum = Matrix::zeros(dim);
        for (i, (_, p)) in eigenpairs.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::domain("projectors of different dimensions"));
            }
            if p.adjoint().max_distance(p)? > MEASURE_TOL {
                return Err(Error::validation(format!("projector {i} is not Hermitian")));
            }
            if p.mul(p)?.max_distance(p)? > MEASURE_TOL {
                return Err(Error::validation(format!("projector {i} is not idempotent")));
            }
            for (j, (_, q)) in eigenpairs.iter().enumerate().skip(i + 1) {
                if p.mul(q)?.max_distance(&Matrix::zeros(dim))? > MEASURE_TOL {
                    return Err(Error::validation(format!("projectors {i} and {j} are not orthogonal")));
                }
            }
            sum = sum.add(p)?;
        }
        if sum.max_distance(&Matrix::identity(dim))? > MEASURE_TOL {
            return Err(Error::validation("projectors do not sum to the identity"));
        }
        Ok(Observable {
            n_qubits: n,
            eigenpairs,
        })
    }

    /// Projectors `|m⟩⟨m|` with eigenvalue `m`.
    pub fn computational(n: usize) -> Result<Self> {
        let ps = computational_projectors(n)?;
        Self::new(ps.into_iter().enumerate().map(|(m, p)| (m as f64, p)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn eigenpairs(&self) -> &[(f64, Matrix)] {
        &self.eigenpairs
    }

    /// The operator `Σ_m λ_m P_m`.
    pub fn matrix(&self) -> Matrix {
        let dim = 1 << self.n_qubits;
        self.eigenpairs.iter().fold(Matrix::zeros(dim), |acc, (l, p)| {
            acc.add(&p.scale(Amplitude::real(*l))).expect("same dimension")
        })
    }
}

/// An orthonormal basis `b_0, …, b_{2^n − 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    states: Vec<QuantumState>,
}

impl Basis {
    /// Requires `2^n` states with `⟨b_i|b_j⟩ = (i = j)` within [`MEASURE_TOL`].
    pub fn new(states: Vec<QuantumState>) -> Result<Self> {
        let n = states
            .first()
            .map(QuantumState::n_qubits)
            .ok_or_else(|| Error::validation("empty basis"))?;
        if states.len() != 1 << n {
            return Err(Error::validation(format!(
                "{} states cannot form a basis of a {n}-qubit system",
                states.len()
            )));
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate().skip(i) {
                let ip = a.inner(b)?;
                let want = if i == j { 1.0 } else { 0.0 };
                if (ip - Amplitude::real(want)).abs() > MEASURE_TOL {
                    return Err(Error::validation(format!(
                        "basis states {i} and {j} are not orthonormal"
                    )));
                }
            }
        }
        Ok(Basis { states })
    }

    pub fn computational(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Self::new((0..1 << n).map(|x| QuantumState::basis(x, n)).collect::<Result<_>>()?)
    }

    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    pub fn n_qubits(&self) -> usize {
        self.states[0].n_qubits()
    }
}

fn computational_projectors(n: usize) -> Result<Vec<Matrix>> {
    check_qubits(n)?;
    let dim = 1usize << n;
    Ok((0..dim)
        .map(|m| {
            let mut p = Matrix::zeros(dim);
            p.set(m, m, Amplitude::ONE);
            p
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub outcome: usize,
    pub post_state: QuantumState,
    pub probability: f64,
}

/// Outcomes with probability at most [`PROB_EPS`] are left out.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasurementOutcomeDist {
    pub entries: Vec<MeasurementOutcome>,
}

impl MeasurementOutcomeDist {
    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn probability_of(&self, outcome: usize) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.outcome == outcome)
            .map(|e| e.probability)
            .sum()
    }

    /// Largest difference in outcome probability or post-state amplitude
    /// between two outcome distributions.
    pub fn distance(&self, other: &MeasurementOutcomeDist) -> f64 {
        let mut d: f64 = 0.0;
        for e in &self.entries {
            match other.entries.iter().find(|o| o.outcome == e.outcome) {
                Some(o) => {
                    d = d.max((e.probability - o.probability).abs());
                    d = d.max(e.post_state.max_distance(&o.post_state).unwrap_or(f64::INFINITY));
                }
                None => d = d.max(e.probability),
            }
        }
        for o in &other.entries {
            if !self.entries.iter().any(|e| e.outcome == o.outcome) {
                d = d.max(o.probability);
            }
        }
        d
    }

    /// As [`distance`](Self::distance), but post states count as equal when
    /// they differ only by a global phase: the distance between post states
    /// is `1 − |⟨a|b⟩|`.
    pub fn distance_modulo_phase(&self, other: &MeasurementOutcomeDist) -> f64 {
        let mut d: f64 = 0.0;
        for e in &self.entries {
            match other.entries.iter().find(|o| o.outcome == e.outcome) {
                Some(o) => {
                    d = d.max((e.probability - o.probability).abs());
                    let overlap = e.post_state.inner(&o.post_state).map_or(0.0, |a| a.abs());
                    d = d.max((1.0 - overlap).abs());
                }
                None => d = d.max(e.probability),
            }
        }
        for o in &other.entries {
            if !self.entries.iter().any(|e| e.outcome == o.outcome) {
                d = d.max(o.probability);
            }
        }
        d
    }

    fn push_scaled(&mut self, outcome: usize, n: usize, v: Vec<Amplitude>, p: f64) {
        if p <= PROB_EPS {
            return;
        }
        let k = 1.0 / libm::sqrt(p);
        let amps = v.into_iter().map(|a| a.scale(k)).collect();
        self.entries.push(MeasurementOutcome {
            outcome,
            post_state: QuantumState::from_parts(n, amps),
            probability: p,
        });
    }
}

fn check_dims(expected: usize, psi: &QuantumState) -> Result<()> {
    if psi.n_qubits() != expected {
        return Err(Error::domain(format!(
            "{expected}-qubit measurement of a {}-qubit state",
            psi.n_qubits()
        )));
    }
    Ok(())
}

/// Outcome `m` with probability `⟨ψ|M_m† M_m ψ⟩` and state `M_m ψ / √p`.
pub fn measure_general(m: &MeasurementCollection, psi: &QuantumState) -> Result<MeasurementOutcomeDist> {
    check_dims(m.n_qubits, psi)?;
    let mut dist = MeasurementOutcomeDist::default();
    for (r, op) in m.operators.iter().enumerate() {
        let v = op.apply(psi.amplitudes())?;
        // ⟨ψ|M†Mψ⟩ = ‖Mψ‖²
        let p = norm_sqr(&v);
        dist.push_scaled(r, m.n_qubits, v, p);
    }
    Ok(dist)
}

/// Outcome `m` with probability `⟨ψ|P_m ψ⟩` and state `P_m ψ / √p`.
pub fn measure_observable(o: &Observable, psi: &QuantumState) -> Result<MeasurementOutcomeDist> {
    check_dims(o.n_qubits, psi)?;
    let mut dist = MeasurementOutcomeDist::default();
    for (r, (_, proj)) in o.eigenpairs.iter().enumerate() {
        let v = proj.apply(psi.amplitudes())?;
        let p = inner_raw(psi.amplitudes(), &v).re;
        dist.push_scaled(r, o.n_qubits, v, p);
    }
    Ok(dist)
}

/// Outcome `r` with probability `|⟨b_r|ψ⟩|²` and state `b_r`.
pub fn measure_in_basis(b: &Basis, psi: &QuantumState) -> Result<MeasurementOutcomeDist> {
    check_dims(b.n_qubits(), psi)?;
    let mut dist = MeasurementOutcomeDist::default();
    for (r, br) in b.states.iter().enumerate() {
        let p = br.inner(psi)?.norm_sqr();
        if p > PROB_EPS {
            dist.entries.push(MeasurementOutcome {
                outcome: r,
                post_state: br.clone(),
                probability: p,
            });
        }
    }
    Ok(dist)
}

/// Outcome `r` with probability `|ψ r|²` and state `|r⟩`.
pub fn measure_computational(psi: &QuantumState) -> MeasurementOutcomeDist {
    let n = psi.n_qubits();
    let entries = (0..psi.dim())
        .filter_map(|r| {
            let p = psi.probability(r);
            (p > PROB_EPS).then(|| MeasurementOutcome {
                outcome: r,
                post_state: QuantumState::basis(r, n).expect("index in range"),
                probability: p,
            })
        })
        .collect();
    MeasurementOutcomeDist { entries }
}
