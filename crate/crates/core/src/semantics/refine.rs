//! Refinement `S ⇐ P`, checked exhaustively over the declared prestate
//! window.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::eval::{eval_state, DEFAULT_FUEL};
use super::expr::{Env, Expr, NoRand, RExpr};
use super::program::Program;
use super::state::{Domain, ProgramState, Scalar, Schema, Time, TIME_NAME};
use crate::error::{Error, Result};

/// Pointwise tolerance for probabilistic specifications.
pub const REFINE_TOL: f64 = 1e-9;

/// Counterexamples kept in a report.
pub const MAX_COUNTEREXAMPLES: usize = 20;

/// A specification to check a program against.
#[derive(Clone, Debug)]
pub enum Spec {
    /// Every reachable poststate must satisfy the predicate.
    Bool(Expr),
    /// The program's distribution of the mentioned primed variables (and
    /// `t'`) must equal the expression's value pointwise.
    Dist(Expr),
}

impl Spec {
    pub fn expr(&self) -> &Expr {
        match self {
            Spec::Bool(e) | Spec::Dist(e) => e,
        }
    }

    /// Whether the specification mentions `t` or `t'`.
    pub fn mentions_time(&self) -> bool {
        let mut found = false;
        self.expr().visit_vars(&mut |n, _| found |= n == TIME_NAME);
        found
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub fuel: u64,
    pub tol: f64,
    pub max_counterexamples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            fuel: DEFAULT_FUEL,
            tol: REFINE_TOL,
            max_counterexamples: MAX_COUNTEREXAMPLES,
        }
    }
}

/// A prestate and poststate at which the specification and the program
/// disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub prestate: String,
    pub poststate: String,
    /// What the specification says: 0 or 1 for boolean specifications.
    pub spec_value: f64,
    /// The program's probability of the poststate.
    pub program_value: f64,
}

/// Result of checking one prestate.
#[derive(Clone, Debug)]
pub struct PrestateVerdict {
    pub counterexamples: Vec<Counterexample>,
    pub max_abs_error: f64,
    pub nonterminating_mass: f64,
}

#[derive(Clone, Debug)]
pub struct RefinementReport {
    pub holds: bool,
    pub prestates_checked: usize,
    /// The declared window the check quantified over, e.g. `x: -4,..9`.
    pub window: String,
    pub counterexamples: Vec<Counterexample>,
    pub max_abs_error: f64,
    /// Prestates from which some mass did not terminate within fuel.
    pub nonterminating_prestates: usize,
    pub notes: Vec<String>,
}

/// Checks one program against one specification, one prestate at a time, so
/// that callers can distribute prestates across threads.
pub struct RefinementChecker<'a> {
    program: &'a Program,
    spec: RExpr,
    is_dist: bool,
    /// Primed variables the specification mentions, sorted by index.
    primed: Vec<usize>,
    primed_time: bool,
    opts: CheckOptions,
}

impl<'a> RefinementChecker<'a> {
    pub fn new(program: &'a Program, spec: &Spec, opts: CheckOptions) -> Result<Self> {
        if !(opts.tol > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        program.schema().state_space_size()?;
        let spec_r = program.resolve(spec.expr())?;
        if spec.expr().contains_rand() {
            return Err(Error::validation("`rand` in a specification"));
        }
        let schema = program.schema();
        let mut primed = Vec::new();
        let mut primed_time = false;
        spec.expr().visit_vars(&mut |n, is_primed| {
            if is_primed {
                if n == TIME_NAME {
                    primed_time = true;
                } else if let Some(i) = schema.index_of(n) {
                    if !primed.contains(&i) {
                        primed.push(i);
                    }
                }
            }
        });
        primed.sort_unstable();
        Ok(RefinementChecker {
            program,
            spec: spec_r,
            is_dist: matches!(spec, Spec::Dist(_)),
            primed,
            primed_time,
            opts,
        })
    }

    pub fn prestates(&self) -> Result<Vec<ProgramState>> {
        self.program.schema().prestates()
    }

    pub fn check_prestate(&self, pre: &ProgramState) -> Result<PrestateVerdict> {
        let r = eval_state(self.program, pre, self.opts.fuel)?;
        let schema = self.program.schema();
        let mut verdict = PrestateVerdict {
            counterexamples: Vec::new(),
            max_abs_error: 0.0,
            nonterminating_mass: r.nonterminating_mass,
        };
        if !self.is_dist {
            for (post, p) in r.dist.iter() {
                let ok = self.value(pre, post)?.truth()?;
                if !ok {
                    verdict.max_abs_error = verdict.max_abs_error.max(p);
                    self.push(&mut verdict, schema, pre, schema.format_state(post), 0.0, p);
                }
            }
            return Ok(verdict);
        }

        // Distribution of the mentioned components, keyed by their values.
        let mut points: Vec<(Vec<Scalar>, Option<Time>, f64)> = Vec::new();
        for (post, p) in r.dist.iter() {
            let key: Vec<Scalar> = self.primed.iter().map(|&i| post.classical[i]).collect();
            let time = if self.primed_time { post.time } else { None };
            match points.iter_mut().find(|(k, t, _)| *k == key && *t == time) {
                Some(e) => e.2 += p,
                None => points.push((key, time, p)),
            }
        }
        let times: BTreeSet<Option<Time>> = points.iter().map(|(_, t, _)| *t).collect();
        let mut candidates: BTreeSet<(Vec<Scalar>, Option<Time>)> = BTreeSet::new();
        let domains: Vec<Domain> = self.primed.iter().map(|&i| schema.vars()[i].domain).collect();
        let mut combo = Vec::with_capacity(domains.len());
        for_each_combo(&domains, &mut combo, &mut |c| {
            for t in &times {
                candidates.insert((c.to_vec(), *t));
            }
        });
        for (k, t, _) in &points {
            candidates.insert((k.clone(), *t));
        }

        let mut spec_mass = 0.0;
        let mut post = pre.clone();
        post.quantum = None;
        for (key, time) in &candidates {
            for (&i, v) in self.primed.iter().zip(key) {
                post.classical[i] = *v;
            }
            if self.primed_time {
                post.time = *time;
            }
            let s = self.value(pre, &post)?.as_f64();
            let p = points
                .iter()
                .find(|(k, t, _)| k == key && t == time)
                .map_or(0.0, |e| e.2);
            spec_mass += s;
            let err = (s - p).abs();
            verdict.max_abs_error = verdict.max_abs_error.max(err);
            if !(err <= self.opts.tol) {
                let shown = self.format_point(key, *time);
                self.push(&mut verdict, schema, pre, shown, s, p);
            }
        }
        // Mass the specification places outside every point examined.
        let missing = 1.0 - spec_mass;
        if missing > self.opts.tol + r.lost_mass() {
            verdict.max_abs_error = verdict.max_abs_error.max(missing);
            self.push(
                &mut verdict,
                schema,
                pre,
                "(states the program never reaches)".to_string(),
                missing,
                0.0,
            );
        }
        Ok(verdict)
    }

    fn value(&self, pre: &ProgramState, post: &ProgramState) -> Result<super::expr::Value> {
        self.spec.eval(&Env { pre, post: Some(post) }, &mut NoRand)
    }

    fn format_point(&self, key: &[Scalar], time: Option<Time>) -> String {
        let schema = self.program.schema();
        let mut parts: Vec<String> = self
            .primed
            .iter()
            .zip(key)
            .map(|(&i, v)| format!("{}'={}", schema.vars()[i].name, v))
            .collect();
        if let Some(t) = time {
            parts.push(format!("t'={t}"));
        }
        parts.join(" ")
    }

    fn push(
        &self,
        verdict: &mut PrestateVerdict,
        schema: &Schema,
        pre: &ProgramState,
        post: String,
        spec_value: f64,
        program_value: f64,
    ) {
        if verdict.counterexamples.len() < self.opts.max_counterexamples {
            verdict.counterexamples.push(Counterexample {
                prestate: schema.format_state(pre),
                poststate: post,
                spec_value,
                program_value,
            });
        }
    }

    /// Combines per-prestate verdicts, given in prestate order.
    pub fn report(&self, verdicts: Vec<PrestateVerdict>) -> RefinementReport {
        let schema = self.program.schema();
        let prestates_checked = verdicts.len();
        let mut counterexamples = Vec::new();
        let mut max_abs_error: f64 = 0.0;
        let mut holds = true;
        let mut nonterminating = 0;
        for v in verdicts {
            holds &= v.counterexamples.is_empty();
            max_abs_error = max_abs_error.max(v.max_abs_error);
            if v.nonterminating_mass > super::eval::REPORT_EPS {
                nonterminating += 1;
            }
            for c in v.counterexamples {
                if counterexamples.len() < self.opts.max_counterexamples {
                    counterexamples.push(c);
                }
            }
        }
        let window = schema
            .vars()
            .iter()
            .map(|v| match v.domain {
                Domain::Bool => format!("{}: bool", v.name),
                Domain::Range { lo, hi } => format!("{}: {lo},..{hi}", v.name),
            })
            .collect::<Vec<_>>()
            .join(", ");
        let mut notes = Vec::new();
        notes.push(format!("checked for prestates in {window} at t = 0"));
        if let Some((name, _)) = schema.register() {
            notes.push(format!(
                "register `{name}` starts unset: quantum states range over those the program reaches"
            ));
        }
        if nonterminating > 0 {
            notes.push(format!(
                "{nonterminating} prestate(s) did not terminate within {} unfoldings; that mass has t' = inf",
                self.opts.fuel
            ));
        }
        RefinementReport {
            holds,
            prestates_checked,
            window,
            counterexamples,
            max_abs_error,
            nonterminating_prestates: nonterminating,
            notes,
        }
    }

    /// Checks every prestate in order.
    pub fn run(&self) -> Result<RefinementReport> {
        let verdicts = self
            .prestates()?
            .iter()
            .map(|s| self.check_prestate(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.report(verdicts))
    }
}

fn for_each_combo(domains: &[Domain], combo: &mut Vec<Scalar>, f: &mut dyn FnMut(&[Scalar])) {
    if combo.len() == domains.len() {
        f(combo);
        return;
    }
    for v in domains[combo.len()].values() {
        combo.push(v);
        for_each_combo(domains, combo, f);
        combo.pop();
    }
}

/// `S ⇐ P` over every prestate of the declared window.
pub fn check_refinement(program: &Program, spec: &Spec, opts: CheckOptions) -> Result<RefinementReport> {
    RefinementChecker::new(program, spec, opts)?.run()
}

/// As [`check_refinement`], after checking that every recursive call is
/// charged a tick.
pub fn check_timed_refinement(program: &Program, spec: &Spec, opts: CheckOptions) -> Result<RefinementReport> {
    program.calls_are_timed()?;
    check_refinement(program, spec, opts)
}
