use alloc::format;
use alloc::string::ToString;
use alloc::vec;

use super::report::AlgorithmReport;
use crate::error::{Error, Result};
use crate::semantics::{
    binomial, eval_state, BinOp, CmpOp, EvalResult, Expr, Func, Program, Scalar, Schema, Stmt, Time, VarDecl,
};

/// `P ⇐ if x = 0 then ok else (x := x − rand 2; t := t+1; P)` with `x`
/// declared on `0,..hi`.
pub fn walk_program(hi: i64) -> Result<Program> {
    let x = || Expr::var("x");
    let body = Stmt::if_(
        Expr::eq(x(), Expr::Int(0)),
        Stmt::Ok,
        Stmt::seq_all([
            Stmt::assign("x", Expr::sub(x(), Expr::rand(Expr::Int(2)))),
            Stmt::Tick,
            Stmt::call("P"),
        ]),
    );
    Program::new(
        Schema::new(vec![VarDecl::range("x", 0, hi)?])?,
        vec![],
        vec![("P".into(), body)],
        Stmt::call("P"),
    )
}

/// `(0 = x' = x = t'−t) + (0 = x' < x ≤ t'−t) × binom(t'−t−1, x−1) / 2^(t'−t)`.
pub fn walk_spec() -> Expr {
    let x = || Expr::var("x");
    let xp = || Expr::primed("x");
    let dt = || Expr::sub(Expr::primed("t"), Expr::var("t"));
    let stopped = Expr::Cmp(
        alloc::boxed::Box::new(Expr::Int(0)),
        vec![(CmpOp::Eq, xp()), (CmpOp::Eq, x()), (CmpOp::Eq, dt())],
    );
    let walked = Expr::Cmp(
        alloc::boxed::Box::new(Expr::Int(0)),
        vec![(CmpOp::Eq, xp()), (CmpOp::Lt, x()), (CmpOp::Le, dt())],
    );
    let weight = Expr::bin(
        BinOp::Div,
        Expr::Call(
            Func::Binom,
            vec![Expr::sub(dt(), Expr::Int(1)), Expr::sub(x(), Expr::Int(1))],
        ),
        Expr::bin(BinOp::Pow, Expr::Int(2), dt()),
    );
    Expr::add(stopped, Expr::mul(walked, weight))
}

/// Probability that the walk from `x0` stops after exactly `k` steps.
pub fn negative_binomial_pmf(x0: u64, k: u64) -> f64 {
    if x0 == 0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k < x0 {
        return 0.0;
    }
    binomial(k as i64 - 1, x0 as i64 - 1) * libm::pow(2.0, -(k as f64))
}

/// Evaluates the walk from `x0`. `fuel` must be at least `4·x0 + 64`, which
/// leaves at most `2^-64` of the mass unfinished.
pub fn probabilistic_walk(x0: u64, fuel: u64) -> Result<EvalResult> {
    if fuel < 4 * x0 + 64 {
        return Err(Error::domain(format!(
            "fuel {fuel} is below 4·x0 + 64 = {}",
            4 * x0 + 64
        )));
    }
    let x0_i = i64::try_from(x0).map_err(|_| Error::domain("start too large"))?;
    let p = walk_program(x0_i.saturating_add(1))?;
    let start = p.schema().initial_state(&[("x", Scalar::Int(x0_i))])?;
    eval_state(&p, &start, fuel)
}

/// Compares the walk from `x0` with the negative binomial for `k ≤ k_max`
/// and its mean with `2·x0`.
pub fn walk_report(x0: u64, fuel: u64, k_max: u64) -> Result<(AlgorithmReport, f64)> {
    let r = probabilistic_walk(x0, fuel)?;
    let mut err: f64 = 0.0;
    for k in 0..=k_max {
        let p = r.dist.probability(|s| s.time == Some(Time::Finite(k)));
        err = err.max((p - negative_binomial_pmf(x0, k)).abs());
    }
    let mean = r.dist.expectation(|s| match s.time {
        Some(Time::Finite(t)) => t as f64,
        _ => f64::INFINITY,
    });
    let mean_ok = (mean - 2.0 * x0 as f64).abs() <= 1e-6;
    Ok((
        AlgorithmReport {
            algorithm: "walk".to_string(),
            n: x0 as usize,
            cases_checked: k_max as usize + 1,
            max_abs_error: err,
            oracle_calls: 0,
            pass: err <= 1e-9 && mean_ok,
        },
        mean,
    ))
}
