use alloc::format;
use alloc::string::ToString;
use alloc::vec;

use super::oracle::{OracleClass, OracleFunction};
use super::report::AlgorithmReport;
use crate::error::{Error, Result};
use crate::qops::Operator;
use crate::qstate::MAX_QUBITS;
use crate::semantics::{
    eval_state, BinOp, CmpOp, Distribution, Expr, Func, Program, Scalar, Schema, Stmt, Time, Value, VarDecl,
};

/// Closed-form behaviour of Grover search with one solution among `N = 2^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverAnalysis {
    pub n: usize,
    pub big_n: u64,
    /// `arcsin √(1/N)`.
    pub theta: f64,
}

impl GroverAnalysis {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 62 {
            return Err(Error::domain(format!("Grover analysis on {n} bits")));
        }
        let big_n = 1u64 << n;
        Ok(GroverAnalysis {
            n,
            big_n,
            theta: libm::asin(libm::sqrt(1.0 / big_n as f64)),
        })
    }

    /// `sin²((2k+1)·θ)`.
    pub fn p_success(&self, k: u64) -> f64 {
        let s = libm::sin((2 * k + 1) as f64 * self.theta);
        s * s
    }

    /// Probability of each single non-solution outcome after `k` iterations.
    pub fn p_other(&self, k: u64) -> f64 {
        (1.0 - self.p_success(k)) / (self.big_n - 1) as f64
    }

    /// The real-valued optimum `π/(4θ) − 1/2`.
    pub fn real_optimum(&self) -> f64 {
        core::f64::consts::PI / (4.0 * self.theta) - 0.5
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverOptimum {
    pub k_opt: u64,
    pub p_opt: f64,
    /// `⌈π·√N / 4⌉`.
    pub k_approx: u64,
    pub p_approx: f64,
}

/// The better of the two integers around `π/(4θ) − 1/2` (ties go to the
/// smaller), and the approximation `⌈π·√N / 4⌉` with its success probability.
pub fn grover_optimal_iterations(big_n: u64) -> Result<GroverOptimum> {
    if big_n < 2 || !big_n.is_power_of_two() {
        return Err(Error::domain(format!("N = {big_n} is not a power of two >= 2")));
    }
    let a = GroverAnalysis::new(big_n.trailing_zeros() as usize)?;
    let x = a.real_optimum();
    let lo = libm::floor(x).max(0.0) as u64;
    let hi = libm::ceil(x).max(0.0) as u64;
    let (p_lo, p_hi) = (a.p_success(lo), a.p_success(hi));
    let (k_opt, p_opt) = if p_hi > p_lo + 1e-15 { (hi, p_hi) } else { (lo, p_lo) };
    let k_approx = libm::ceil(core::f64::consts::PI * libm::sqrt(big_n as f64) / 4.0) as u64;
    Ok(GroverOptimum {
        k_opt,
        p_opt,
        k_approx,
        p_approx: a.p_success(k_approx),
    })
}

/// `i := 0; ψ := |0⟩; ψ := Hψ; R; measure ψ r` where
/// `R ⇐ if i = k then ok else (i := i+1; t := t+1; ψ := U_f ψ; ψ := Mψ; R)`.
pub fn grover_program(f: &OracleFunction, k: u64) -> Result<Program> {
    let n = f.n();
    let k_i = i64::try_from(k).map_err(|_| Error::domain("iteration count too large"))?;
    let schema = Schema::new(vec![
        VarDecl::range("r", 0, 1 << n)?,
        VarDecl::range("i", 0, k_i.saturating_add(1))?,
    ])?
    .with_register("psi", n)?;
    let i = || Expr::var("i");
    let body = Stmt::if_(
        Expr::eq(i(), Expr::var("k")),
        Stmt::Ok,
        Stmt::seq_all([
            Stmt::assign("i", Expr::add(i(), Expr::Int(1))),
            Stmt::Tick,
            Stmt::QApply(Operator::phase_oracle(f.table().to_vec())?),
            Stmt::QApply(Operator::inversion_about_mean(n)?),
            Stmt::call("R"),
        ]),
    );
    let main = Stmt::seq_all([
        Stmt::assign("i", Expr::Int(0)),
        Stmt::QInit(n),
        Stmt::QApply(Operator::hadamard_all(n)?),
        Stmt::call("R"),
        Stmt::measure("r"),
    ]);
    Program::new(
        schema,
        vec![("k".into(), Value::Int(k_i))],
        vec![("R".into(), body)],
        main,
    )
}

/// The distribution over `S`: `sin²((2(t'−t)+1)·θ)·(r' = x1) +
/// (1 − sin²(…))·(r' ≠ x1)/(N − 1)`.
pub fn grover_spec(n: usize, x1: usize) -> Result<Expr> {
    if n == 0 || n > MAX_QUBITS || x1 >= 1 << n {
        return Err(Error::domain(format!("no solution {x1} on {n} bits")));
    }
    let big_n = 1i64 << n;
    let theta = Expr::Call(
        Func::Arcsin,
        vec![Expr::Call(
            Func::Sqrt,
            vec![Expr::bin(BinOp::Div, Expr::Int(1), Expr::Int(big_n))],
        )],
    );
    let dt = Expr::sub(Expr::primed("t"), Expr::var("t"));
    let angle = Expr::mul(Expr::add(Expr::mul(Expr::Int(2), dt), Expr::Int(1)), theta);
    let s2 = Expr::bin(BinOp::Pow, Expr::Call(Func::Sin, vec![angle]), Expr::Int(2));
    let hit = Expr::eq(Expr::primed("r"), Expr::Int(x1 as i64));
    let miss = Expr::cmp(CmpOp::Ne, Expr::primed("r"), Expr::Int(x1 as i64));
    Ok(Expr::add(
        Expr::mul(s2.clone(), hit),
        Expr::mul(
            Expr::sub(Expr::Int(1), s2),
            Expr::bin(BinOp::Div, miss, Expr::Int(big_n - 1)),
        ),
    ))
}

/// Runs the search for the solution of the point function `f` with `k`
/// iterations. Returns the distribution of `(r', t')`.
pub fn grover_run(f: &OracleFunction, k: u64) -> Result<Distribution> {
    if f.class() != OracleClass::Point {
        return Err(Error::domain(format!("oracle {f} does not have exactly one solution")));
    }
    let p = grover_program(f, k)?;
    let start = p.schema().initial_state(&[])?;
    let r = eval_state(&p, &start, k + 1)?;
    r.dist.marginal(&["r", "t"])
}

/// Simulates every solution position for `k` iterations on `n` bits and
/// compares against the closed form.
pub fn grover_report(n: usize, k: u64) -> Result<AlgorithmReport> {
    let a = GroverAnalysis::new(n)?;
    if n > MAX_QUBITS {
        return Err(Error::capacity(format!("{n} qubits (limit {MAX_QUBITS})")));
    }
    let mut err: f64 = 0.0;
    let mut time_ok = true;
    for x1 in 0..1usize << n {
        let d = grover_run(&OracleFunction::point(n, x1)?, k)?;
        time_ok &= d.iter().all(|(s, _)| s.time == Some(Time::Finite(k)));
        let sim = d.values_of("r")?;
        for r in 0..1i64 << n {
            let p = sim.iter().find(|(v, _)| *v == Scalar::Int(r)).map_or(0.0, |(_, p)| *p);
            let want = if r == x1 as i64 { a.p_success(k) } else { a.p_other(k) };
            err = err.max((p - want).abs());
        }
    }
    Ok(AlgorithmReport {
        algorithm: "grover".to_string(),
        n,
        cases_checked: 1 << n,
        max_abs_error: err,
        oracle_calls: k,
        pass: time_ok && err <= 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_items_one_iteration() {
        let a = GroverAnalysis::new(2).unwrap();
        assert!((a.theta - core::f64::consts::PI / 6.0).abs() < 1e-15);
        assert!((a.p_success(1) - 1.0).abs() < 1e-15);
        let d = grover_run(&OracleFunction::point(2, 3).unwrap(), 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.entries()[0].0.classical, vec![Scalar::Int(3)]);
        assert_eq!(d.entries()[0].0.time, Some(Time::Finite(1)));
    }

    #[test]
    fn optimum() {
        let o = grover_optimal_iterations(4).unwrap();
        assert_eq!((o.k_opt, o.k_approx), (1, 2));
        assert!((o.p_opt - 1.0).abs() < 1e-15);
        let o = grover_optimal_iterations(2).unwrap();
        assert_eq!(o.k_opt, 0);
        assert!((o.p_opt - 0.5).abs() < 1e-15);
        assert!(grover_optimal_iterations(12).is_err());
        assert_eq!(grover_optimal_iterations(1024).unwrap().k_approx, 26);
    }

    #[test]
    fn rejects_non_point_oracles() {
        let f = OracleFunction::from_bits("0110").unwrap();
        assert!(grover_run(&f, 1).is_err());
    }
}
