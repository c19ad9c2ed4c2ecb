use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::oracle::{OracleClass, OracleFunction};
use super::report::AlgorithmReport;
use crate::error::{Error, Result};
use crate::qops::Operator;
use crate::semantics::{eval_state, Distribution, Expr, Program, Scalar, Schema, Stmt, Time, VarDecl};

fn check_promise(f: &OracleFunction) -> Result<()> {
    match f.class() {
        OracleClass::Constant | OracleClass::Balanced => Ok(()),
        _ => Err(Error::domain(format!("oracle {f} is neither constant nor balanced"))),
    }
}

/// `ψ := |0⟩; ψ := Hψ; ψ := U_f ψ; ψ := Hψ; measure ψ r; b := (r = 0)`, with
/// one tick charged for the oracle call.
pub fn deutsch_jozsa_program(f: &OracleFunction) -> Result<Program> {
    let n = f.n();
    let schema = Schema::new(vec![VarDecl::range("r", 0, 1 << n)?, VarDecl::boolean("b")])?.with_register("psi", n)?;
    let h = Operator::hadamard_all(n)?;
    let main = Stmt::seq_all([
        Stmt::QInit(n),
        Stmt::QApply(h.clone()),
        Stmt::Tick,
        Stmt::QApply(Operator::phase_oracle(f.table().to_vec())?),
        Stmt::QApply(h),
        Stmt::measure("r"),
        Stmt::assign("b", Expr::eq(Expr::var("r"), Expr::Int(0))),
    ]);
    Program::simple(schema, main)
}

#[derive(Clone, Debug)]
pub struct DjQuantum {
    pub dist: Distribution,
    /// Probability that `b' = (f is constant)`.
    pub p_correct: f64,
    /// Oracle calls, read off the final time (the same on every outcome).
    pub oracle_calls: u64,
}

pub fn deutsch_jozsa_quantum(f: &OracleFunction) -> Result<DjQuantum> {
    check_promise(f)?;
    let p = deutsch_jozsa_program(f)?;
    let start = p.schema().initial_state(&[])?;
    let dist = eval_state(&p, &start, 0)?.dist;
    let b = p.schema().index_of("b").expect("declared");
    let want = Scalar::Bool(f.is_constant());
    let p_correct = dist.probability(|s| s.classical[b] == want);
    let mut calls = None;
    for (s, _) in dist.iter() {
        let t = match s.time {
            Some(Time::Finite(t)) => t,
            _ => return Err(Error::eval("oracle program did not terminate")),
        };
        if calls.is_some_and(|c| c != t) {
            return Err(Error::eval("oracle calls differ between outcomes"));
        }
        calls = Some(t);
    }
    Ok(DjQuantum {
        dist,
        p_correct,
        oracle_calls: calls.unwrap_or(0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DjClassical {
    pub constant: bool,
    pub oracle_calls: u64,
}

/// Queries `f i` for every `i` in `0,..2^{n−1}+1` and answers whether all
/// agree with `f 0`.
pub fn deutsch_jozsa_classical(f: &OracleFunction) -> Result<DjClassical> {
    check_promise(f)?;
    let queries = (1usize << (f.n() - 1)) + 1;
    let mut calls = 0;
    let mut constant = true;
    let f0 = f.eval(0);
    for i in 0..queries {
        calls += 1;
        constant &= f.eval(i) == f0;
    }
    Ok(DjClassical {
        constant,
        oracle_calls: calls,
    })
}

/// For `n = 1`, every deterministic one-query decision procedure (query
/// `f i`, answer `g (f i)`) is wrong on some promise function.
pub fn classical_one_query_fails() -> Result<bool> {
    let mut fs = OracleFunction::all_constant(1)?;
    fs.extend(OracleFunction::all_balanced(1)?);
    // g is one of the four maps 0,1 → bool, encoded by its outputs.
    let answers: [[bool; 2]; 4] = [[false, false], [false, true], [true, false], [true, true]];
    Ok((0..2).all(|i| {
        answers
            .iter()
            .all(|g| fs.iter().any(|f| g[f.eval(i) as usize] != f.is_constant()))
    }))
}

/// Runs both solvers on every constant and balanced function on `n` bits.
pub fn deutsch_jozsa_report(n: usize) -> Result<(AlgorithmReport, AlgorithmReport)> {
    let mut fs: Vec<OracleFunction> = OracleFunction::all_constant(n)?;
    fs.extend(OracleFunction::all_balanced(n)?);
    let mut q_err: f64 = 0.0;
    let mut q_pass = true;
    let mut c_pass = true;
    let bound = (1u64 << (n - 1)) + 1;
    for f in &fs {
        let q = deutsch_jozsa_quantum(f)?;
        q_err = q_err.max(1.0 - q.p_correct);
        q_pass &= q.p_correct >= 1.0 - 1e-9 && q.oracle_calls == 1;
        let c = deutsch_jozsa_classical(f)?;
        c_pass &= c.constant == f.is_constant() && c.oracle_calls == bound;
    }
    Ok((
        AlgorithmReport {
            algorithm: "deutsch-jozsa-quantum".to_string(),
            n,
            cases_checked: fs.len(),
            max_abs_error: q_err.max(0.0),
            oracle_calls: 1,
            pass: q_pass,
        },
        AlgorithmReport {
            algorithm: "deutsch-jozsa-classical".to_string(),
            n,
            cases_checked: fs.len(),
            max_abs_error: if c_pass { 0.0 } else { 1.0 },
            oracle_calls: bound,
            pass: c_pass,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let f = OracleFunction::from_bits("00").unwrap();
        let q = deutsch_jozsa_quantum(&f).unwrap();
        assert!((q.p_correct - 1.0).abs() < 1e-12);
        assert_eq!(q.oracle_calls, 1);
        let f = OracleFunction::from_bits("0110").unwrap();
        assert!((deutsch_jozsa_quantum(&f).unwrap().p_correct - 1.0).abs() < 1e-12);
        let f = OracleFunction::from_bits("11").unwrap();
        assert_eq!(
            deutsch_jozsa_classical(&f).unwrap(),
            DjClassical {
                constant: true,
                oracle_calls: 2
            }
        );
        let f = OracleFunction::from_bits("0001").unwrap();
        assert!(deutsch_jozsa_quantum(&f).is_err());
        assert!(deutsch_jozsa_classical(&f).is_err());
    }

    #[test]
    fn one_query_is_not_enough() {
        assert!(classical_one_query_fails().unwrap());
    }
}
