use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::qops::Operator;
use crate::qstate::QuantumState;
use crate::semantics::{
    eval_state, superposition, Distribution, Expr, Program, ProgramState, Scalar, Schema, Stmt, Time, VarDecl,
};

/// Distance allowed between the two sides of each identity.
pub const MIXED_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct MixedCheck {
    pub name: String,
    pub cases: usize,
    pub distance: f64,
    pub pass: bool,
    /// On failure, the two sides of the first failing case.
    pub details: Option<(Distribution, Distribution)>,
}

#[derive(Clone, Debug)]
pub struct MixedReport {
    pub checks: Vec<MixedCheck>,
}

impl MixedReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn schema(n: usize) -> Result<Schema> {
    Schema::new(vec![VarDecl::range("r", 0, 1 << n)?])?.with_register("psi", n)
}

fn start_with(n: usize, q: &QuantumState) -> Result<ProgramState> {
    Ok(schema(n)?.initial_state(&[])?.with_quantum(q.clone()))
}

/// The mixture `Σ pᵢ·(ψ' = qᵢ)` as a distribution over `ψ` alone.
fn mixture(n: usize, parts: &[(f64, QuantumState)]) -> Result<Distribution> {
    let s = schema(n)?;
    let items = parts
        .iter()
        .map(|(p, q)| {
            (
                ProgramState {
                    classical: vec![Scalar::Int(0)],
                    quantum: Some(q.clone()),
                    time: Some(Time::Finite(0)),
                },
                *p,
            )
        })
        .collect();
    Distribution::from_weighted(&s, items)?.marginal(&["psi"])
}

fn check(name: &str, cases: usize, pairs: Vec<(Distribution, Distribution)>) -> Result<MixedCheck> {
    let mut worst: f64 = 0.0;
    let mut details = None;
    for (a, b) in pairs {
        let d = a.distance(&b)?;
        if d > MIXED_TOL && details.is_none() {
            details = Some((a, b));
        }
        worst = worst.max(d);
    }
    Ok(MixedCheck {
        name: name.to_string(),
        cases,
        distance: worst,
        pass: worst <= MIXED_TOL,
        details,
    })
}

/// Machine-checks three identities about mixed states:
/// (a) measuring `(|0⟩+|1⟩)/√2` leaves `(ψ' = |0⟩)/2 + (ψ' = |1⟩)/2`;
/// (b) `ψ := |0⟩; ψ := Hψ; measure ψ r; if r = 0 then ψ := Hψ else ok`
///     leaves `(ψ' = |0⟩/√2 + |1⟩/√2)/2 + (ψ' = |1⟩)/2`;
/// (c) `measure ψ r; measure ψ r` equals `measure ψ r` on each given state.
pub fn mixed_state_demos(states: &[QuantumState]) -> Result<MixedReport> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let ket0 = QuantumState::basis(0, 1)?;
    let ket1 = QuantumState::basis(1, 1)?;
    let plus = superposition(1, &[(0, h), (1, h)])?;

    let measure = |n: usize| Program::simple(schema(n)?, Stmt::measure("r"));

    let p = measure(1)?;
    let got = eval_state(&p, &start_with(1, &plus)?, 0)?.dist.marginal(&["psi"])?;
    let want = mixture(1, &[(0.5, ket0.clone()), (0.5, ket1.clone())])?;
    let a = check("measurement marginal", 1, vec![(got, want)])?;

    let hadamard = Operator::hadamard_all(1)?;
    let toy = Program::simple(
        schema(1)?,
        Stmt::seq_all([
            Stmt::QInit(1),
            Stmt::QApply(hadamard.clone()),
            Stmt::measure("r"),
            Stmt::if_(Expr::eq(Expr::var("r"), Expr::Int(0)), Stmt::QApply(hadamard), Stmt::Ok),
        ]),
    )?;
    let got = eval_state(&toy, &schema(1)?.initial_state(&[])?, 0)?
        .dist
        .marginal(&["psi"])?;
    let want = mixture(1, &[(0.5, plus), (0.5, ket1)])?;
    let b = check("toy program", 1, vec![(got, want)])?;

    let mut pairs = Vec::with_capacity(states.len());
    for q in states {
        let n = q.n_qubits();
        let once = measure(n)?;
        let twice = Program::simple(schema(n)?, Stmt::seq(Stmt::measure("r"), Stmt::measure("r")))?;
        let s = start_with(n, q)?;
        pairs.push((eval_state(&twice, &s, 0)?.dist, eval_state(&once, &s, 0)?.dist));
    }
    let c = check(
        &format!("measure twice = measure once ({} states)", states.len()),
        states.len(),
        pairs,
    )?;
    Ok(MixedReport { checks: vec![a, b, c] })
}
