//! Exact evaluation: the pushforward of a prestate distribution through a
//! program, with `rand`, probabilistic choice and measurement enumerated as
//! weighted branches.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::dist::{Distribution, Support};
use super::expr::{Env, NoRand, Odometer};
use super::program::{Measurement, Node, NodeId, Program};
use super::state::{ProgramState, Scalar, Time};
use crate::error::{Error, Result};
use crate::qmeasure::{measure_computational, measure_general, measure_in_basis, measure_observable};
use crate::qstate::QuantumState;

/// Default bound on recursive unfoldings.
pub const DEFAULT_FUEL: u64 = 10_000;

/// Nonterminating mass above this is reported.
pub const REPORT_EPS: f64 = 1e-9;

/// Branches lighter than this are discarded during evaluation (and counted).
pub const PRUNE_EPS: f64 = 1e-30;

/// A probability or spec total may exceed `[0, 1]` by this much.
const PROB_SLACK: f64 = 1e-9;

/// Outcome of [`eval`].
#[derive(Clone, Debug)]
pub struct EvalResult {
    /// Final distribution. Mass still running when fuel ran out appears with
    /// time `∞`.
    pub dist: Distribution,
    /// Mass assigned time `∞` because fuel ran out.
    pub nonterminating_mass: f64,
    /// Mass of final entries at or below `PROB_EPS`, left out of `dist`.
    pub dropped_mass: f64,
    /// Mass of branches below [`PRUNE_EPS`], discarded mid-evaluation.
    pub pruned_mass: f64,
    /// Number of unfolding rounds performed.
    pub rounds: u64,
}

impl EvalResult {
    pub fn nonterminating(&self) -> bool {
        self.nonterminating_mass > REPORT_EPS
    }

    /// Mass missing from `dist` for numerical reasons.
    pub fn lost_mass(&self) -> f64 {
        self.dropped_mass + self.pruned_mass
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Config {
    pub cont: Vec<NodeId>,
    pub state: ProgramState,
}

pub(crate) enum Step {
    Done(ProgramState),
    Continue(Config),
    Unfold(Config),
    Branch(Vec<(f64, Config)>),
}

type LiveKey = (Vec<NodeId>, Vec<Scalar>, Option<Time>);

/// Runs `program` on every state of `initial`.
pub fn eval(program: &Program, initial: &Distribution, fuel: u64) -> Result<EvalResult> {
    if initial.schema() != program.schema() {
        return Err(Error::domain("initial distribution does not match the program"));
    }
    let mut live: Support<LiveKey> = Support::default();
    for (s, p) in initial.iter() {
        live.insert(
            (vec![program.main_node], s.classical.clone(), s.time),
            s.quantum.clone(),
            p,
        );
    }
    run(program, live, fuel)
}

/// Runs `program` from a single prestate.
pub fn eval_state(program: &Program, s: &ProgramState, fuel: u64) -> Result<EvalResult> {
    let d = Distribution::point(program.schema(), s.clone())?;
    eval(program, &d, fuel)
}

fn run(program: &Program, mut live: Support<LiveKey>, fuel: u64) -> Result<EvalResult> {
    let mut done: Support<(Vec<Scalar>, Option<Time>)> = Support::default();
    let mut pruned = 0.0;
    let mut nonterminating = 0.0;
    let mut rounds = 0;
    loop {
        let mut next: Support<LiveKey> = Support::default();
        let mut work: Vec<(f64, Config)> = Vec::new();
        for ((cont, classical, time), quantum, p) in live.into_entries() {
            work.push((
                p,
                Config {
                    cont,
                    state: ProgramState {
                        classical,
                        quantum,
                        time,
                    },
                },
            ));
            while let Some((w, cfg)) = work.pop() {
                if w < PRUNE_EPS {
                    pruned += w;
                    continue;
                }
                match step(program, cfg)? {
                    Step::Done(s) => done.insert((s.classical, s.time), s.quantum, w),
                    Step::Continue(c) => work.push((w, c)),
                    Step::Unfold(c) => next.insert((c.cont, c.state.classical, c.state.time), c.state.quantum, w),
                    Step::Branch(bs) => {
                        work.extend(bs.into_iter().map(|(pw, c)| (w * pw, c)));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        if rounds >= fuel {
            nonterminating = next.total();
            for ((_, classical, time), quantum, p) in next.into_entries() {
                let time = time.map(|_| Time::Infinite);
                done.insert((classical, time), quantum, p);
            }
            break;
        }
        rounds += 1;
        live = next;
    }
    let (dist, dropped) = Distribution::from_support_tracked(program.schema(), done);
    Ok(EvalResult {
        dist,
        nonterminating_mass: nonterminating,
        dropped_mass: dropped,
        pruned_mass: pruned,
        rounds,
    })
}

fn weight_in_range(p: f64, what: &str) -> Result<f64> {
    if !(p.is_finite() && (-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p)) {
        return Err(Error::domain(format!("{what} {p} is not a probability")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// One small step of the machine.
pub(crate) fn step(program: &Program, mut cfg: Config) -> Result<Step> {
    let id = match cfg.cont.pop() {
        Some(id) => id,
        None => return Ok(Step::Done(cfg.state)),
    };
    let env_eval = |e: &super::expr::RExpr, s: &ProgramState| e.eval(&Env { pre: s, post: None }, &mut NoRand);
    match &program.nodes[id as usize] {
        Node::Ok => Ok(Step::Continue(cfg)),
        Node::Tick => {
            cfg.state.time = cfg.state.time.map(Time::tick);
            Ok(Step::Continue(cfg))
        }
        Node::Seq(a, b) => {
            cfg.cont.push(*b);
            cfg.cont.push(*a);
            Ok(Step::Continue(cfg))
        }
        Node::If(c, a, b) => {
            let branch = if env_eval(c, &cfg.state)?.truth()? { a } else { b };
            cfg.cont.push(*branch);
            Ok(Step::Continue(cfg))
        }
        Node::IfProb(p, a, b) => {
            let p = weight_in_range(env_eval(p, &cfg.state)?.as_f64(), "branch probability")?;
            let mut out = Vec::with_capacity(2);
            if p > 0.0 {
                let mut c = cfg.clone();
                c.cont.push(*a);
                out.push((p, c));
            }
            if p < 1.0 {
                cfg.cont.push(*b);
                out.push((1.0 - p, cfg));
            }
            Ok(Step::Branch(out))
        }
        Node::Call(d) => {
            cfg.cont.push(program.def_bodies[*d]);
            Ok(Step::Unfold(cfg))
        }
        Node::Assign(i, e) => {
            let decl = &program.schema().vars()[*i];
            let mut od = Odometer::default();
            let mut out = Vec::new();
            loop {
                od.start();
                let v = e.eval(
                    &Env {
                        pre: &cfg.state,
                        post: None,
                    },
                    &mut od,
                )?;
                let mut c = cfg.clone();
                c.state.classical[*i] = v.to_scalar(&decl.domain, &decl.name)?;
                out.push((od.weight(), c));
                if !od.advance() {
                    break;
                }
            }
            if out.len() == 1 {
                Ok(Step::Continue(out.pop().expect("one branch").1))
            } else {
                Ok(Step::Branch(out))
            }
        }
        Node::QInit(n) => {
            cfg.state.quantum = Some(QuantumState::zero(*n)?);
            Ok(Step::Continue(cfg))
        }
        Node::QApply(op) => {
            let q = cfg
                .state
                .quantum
                .as_ref()
                .ok_or_else(|| Error::eval("operator applied to an uninitialized register"))?;
            cfg.state.quantum = Some(op.apply(q)?);
            Ok(Step::Continue(cfg))
        }
        Node::QMeasure(m, i) => {
            let q = cfg
                .state
                .quantum
                .as_ref()
                .ok_or_else(|| Error::eval("measurement of an uninitialized register"))?;
            let outcomes = match m {
                Measurement::Computational => measure_computational(q),
                Measurement::Basis(b) => measure_in_basis(b, q)?,
                Measurement::Observable(o) => measure_observable(o, q)?,
                Measurement::General(g) => measure_general(g, q)?,
            };
            let total = outcomes.total_probability();
            let out = outcomes
                .entries
                .into_iter()
                .map(|o| {
                    let mut c = cfg.clone();
                    c.state.classical[*i] = Scalar::Int(o.outcome as i64);
                    c.state.quantum = Some(o.post_state);
                    (o.probability / total, c)
                })
                .collect();
            Ok(Step::Branch(out))
        }
        Node::Spec(e, primed) => {
            let schema = program.schema();
            let mut out = Vec::new();
            let mut total = 0.0;
            let mut post = cfg.state.clone();
            spec_successors(schema, primed, 0, &mut post, &mut |post| {
                let w = e
                    .eval(
                        &Env {
                            pre: &cfg.state,
                            post: Some(post),
                        },
                        &mut NoRand,
                    )?
                    .as_f64();
                let w = weight_in_range(w, "specification value")?;
                total += w;
                if w > 0.0 {
                    let mut c = cfg.clone();
                    c.state = post.clone();
                    out.push((w, c));
                }
                Ok(())
            })?;
            if (total - 1.0).abs() > PROB_SLACK {
                return Err(Error::eval(format!(
                    "specification sums to {total} at {}, not 1",
                    schema.format_state(&cfg.state)
                )));
            }
            Ok(Step::Branch(out))
        }
    }
}

fn spec_successors(
    schema: &super::state::Schema,
    primed: &[usize],
    k: usize,
    post: &mut ProgramState,
    f: &mut dyn FnMut(&ProgramState) -> Result<()>,
) -> Result<()> {
    if k == primed.len() {
        return f(post);
    }
    let i = primed[k];
    for v in schema.vars()[i].domain.values() {
        post.classical[i] = v;
        spec_successors(schema, primed, k + 1, post, f)?;
    }
    Ok(())
}

/// Runs one execution, resolving every branch with `choose`, which is given
/// the branch weights and returns an index. Stops with time `∞` after `fuel`
/// unfoldings.
pub fn sample(
    program: &Program,
    start: &ProgramState,
    fuel: u64,
    choose: &mut dyn FnMut(&[f64]) -> usize,
) -> Result<ProgramState> {
    let mut cfg = Config {
        cont: vec![program.main_node],
        state: start.clone(),
    };
    let mut unfoldings = 0;
    loop {
        match step(program, cfg)? {
            Step::Done(s) => return Ok(s),
            Step::Continue(c) => cfg = c,
            Step::Unfold(c) => {
                if unfoldings >= fuel {
                    let mut s = c.state;
                    s.time = s.time.map(|_| Time::Infinite);
                    return Ok(s);
                }
                unfoldings += 1;
                cfg = c;
            }
            Step::Branch(mut bs) => {
                let weights: Vec<f64> = bs.iter().map(|(w, _)| *w).collect();
                let k = choose(&weights);
                if k >= bs.len() {
                    return Err(Error::domain("branch choice out of range"));
                }
                cfg = bs.swap_remove(k).1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::Operator;
    use crate::semantics::expr::{BinOp, Expr};
    use crate::semantics::program::Stmt;
    use crate::semantics::state::{Schema, VarDecl};

    fn countdown(timed: bool) -> Program {
        let x = || Expr::var("x");
        let mut step = vec![Stmt::assign("x", Expr::sub(x(), Expr::Int(1)))];
        if timed {
            step.push(Stmt::Tick);
        }
        step.push(Stmt::call("P"));
        let body = Stmt::if_(Expr::eq(x(), Expr::Int(0)), Stmt::Ok, Stmt::seq_all(step));
        Program::new(
            Schema::new(vec![VarDecl::range("x", -4, 9).unwrap()]).unwrap(),
            vec![],
            vec![("P".into(), body)],
            Stmt::call("P"),
        )
        .unwrap()
    }

    fn at(p: &Program, x: i64) -> ProgramState {
        p.schema().initial_state(&[("x", Scalar::Int(x))]).unwrap()
    }

    #[test]
    fn ok_and_assignment() {
        let s = Schema::new(vec![VarDecl::range("x", 0, 8).unwrap()]).unwrap();
        let p = Program::simple(s.clone(), Stmt::Ok).unwrap();
        let r = eval_state(&p, &at(&p, 3), 10).unwrap();
        assert_eq!(r.dist.len(), 1);
        assert_eq!(r.dist.entries()[0].0, at(&p, 3));
        let p = Program::simple(s, Stmt::assign("x", Expr::sub(Expr::var("x"), Expr::Int(1)))).unwrap();
        let r = eval_state(&p, &at(&p, 3), 10).unwrap();
        assert_eq!(r.dist.entries()[0].0.classical, vec![Scalar::Int(2)]);
    }

    #[test]
    fn countdown_terminates_or_diverges() {
        let p = countdown(true);
        let r = eval_state(&p, &at(&p, 5), 100).unwrap();
        assert_eq!(r.dist.entries()[0].0.classical, vec![Scalar::Int(0)]);
        assert_eq!(r.dist.entries()[0].0.time, Some(Time::Finite(5)));
        assert!(!r.nonterminating());
        let r = eval_state(&p, &at(&p, -2), 50).unwrap();
        assert!(r.nonterminating());
        assert_eq!(r.dist.entries()[0].0.time, Some(Time::Infinite));
        assert!((r.dist.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rand_branches_exactly() {
        let s = Schema::new(vec![VarDecl::range("x", 0, 8).unwrap()]).unwrap();
        let p = Program::simple(
            s,
            Stmt::assign("x", Expr::bin(BinOp::Add, Expr::var("x"), Expr::rand(Expr::Int(4)))),
        )
        .unwrap();
        let r = eval_state(&p, &at(&p, 1), 1).unwrap();
        assert_eq!(r.dist.len(), 4);
        assert!(r.dist.iter().all(|(_, w)| (w - 0.25).abs() < 1e-15));
    }

    #[test]
    fn prob_if_validates() {
        let s = Schema::new(vec![VarDecl::range("x", 0, 2).unwrap()]).unwrap();
        let p = Program::simple(s.clone(), Stmt::if_prob(Expr::Real(1.5), Stmt::Ok, Stmt::Ok)).unwrap();
        assert!(eval_state(&p, &at(&p, 0), 1).is_err());
        let p = Program::simple(
            s,
            Stmt::if_prob(
                Expr::Real(0.5),
                Stmt::assign("x", Expr::Int(0)),
                Stmt::assign("x", Expr::Int(1)),
            ),
        )
        .unwrap();
        let r = eval_state(&p, &at(&p, 0), 1).unwrap();
        assert_eq!(
            r.dist.values_of("x").unwrap(),
            vec![(Scalar::Int(0), 0.5), (Scalar::Int(1), 0.5)]
        );
    }

    #[test]
    fn toy_mixed_program() {
        let s = Schema::new(vec![VarDecl::range("r", 0, 2).unwrap()])
            .unwrap()
            .with_register("psi", 1)
            .unwrap();
        let h = Operator::hadamard_all(1).unwrap();
        let p = Program::simple(
            s,
            Stmt::seq_all([
                Stmt::QInit(1),
                Stmt::QApply(h.clone()),
                Stmt::measure("r"),
                Stmt::if_(Expr::eq(Expr::var("r"), Expr::Int(0)), Stmt::QApply(h), Stmt::Ok),
            ]),
        )
        .unwrap();
        let r = eval_state(&p, &at_r(&p), 1).unwrap();
        let m = r.dist.marginal(&["psi"]).unwrap();
        assert_eq!(m.len(), 2);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        for (st, w) in m.iter() {
            assert!((w - 0.5).abs() < 1e-12);
            let q = st.quantum.as_ref().unwrap();
            let plus = QuantumState::from_real(&[s, s]).unwrap();
            let one = QuantumState::basis(1, 1).unwrap();
            assert!(q.approx_eq(&plus, 1e-12).unwrap() || q.approx_eq(&one, 1e-12).unwrap());
        }
    }

    fn at_r(p: &Program) -> ProgramState {
        p.schema().initial_state(&[]).unwrap()
    }

    #[test]
    fn sampler_follows_choices() {
        let p = countdown(true);
        let s = sample(&p, &at(&p, 3), 100, &mut |_| 0).unwrap();
        assert_eq!(s.time, Some(Time::Finite(3)));
        let s = sample(&p, &at(&p, -1), 20, &mut |_| 0).unwrap();
        assert_eq!(s.time, Some(Time::Infinite));
    }
}
