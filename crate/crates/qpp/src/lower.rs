//! Checks a parsed file and translates it into a core [`Program`].

use std::collections::HashMap;

use qpp_core::qops::Operator;
use qpp_core::semantics::{Domain, Expr, Program, ProgramState, Scalar, Schema, Spec, Stmt, Value, VarDecl, TIME_NAME};

use crate::ast::{Gate, Item, Pos, SStmt, SourceProgram, SpecDecl};
use crate::diag::Diagnostic;
use crate::parser::parse;

/// A checked program, its specification and the declared initial values.
#[derive(Clone, Debug)]
pub struct Lowered {
    pub program: Program,
    pub spec: Option<LoweredSpec>,
    pub inits: Vec<(String, Scalar)>,
}

#[derive(Clone, Debug)]
pub struct LoweredSpec {
    pub spec: Spec,
    pub timed: bool,
}

impl Lowered {
    /// The declared initial state at `t = 0`, with `overrides` applied on top.
    pub fn initial_state(&self, overrides: &[(String, Scalar)]) -> qpp_core::Result<ProgramState> {
        let mut vals: Vec<(&str, Scalar)> = self.inits.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        for (n, v) in overrides {
            vals.retain(|(m, _)| m != n);
            vals.push((n.as_str(), *v));
        }
        self.program.schema().initial_state(&vals)
    }
}

/// Parses and lowers a source text.
pub fn load(src: &str) -> Result<(SourceProgram, Lowered), Diagnostic> {
    let ast = parse(src)?;
    let low = lower(&ast)?;
    Ok((ast, low))
}

struct Ctx<'a> {
    register: Option<(String, usize)>,
    oracles: HashMap<&'a str, (Vec<bool>, usize)>,
    defs: Vec<&'a str>,
    vars: Vec<(&'a str, Domain)>,
}

pub fn lower(ast: &SourceProgram) -> Result<Lowered, Diagnostic> {
    let mut seen: HashMap<&str, Pos> = HashMap::new();
    let mut ctx = Ctx {
        register: None,
        oracles: HashMap::new(),
        defs: Vec::new(),
        vars: Vec::new(),
    };
    let mut decls = Vec::new();
    let mut consts = Vec::new();
    let mut inits = Vec::new();
    let mut main: Option<(Pos, &SStmt)> = None;
    let mut spec: Option<(Pos, &SpecDecl)> = None;

    for item in &ast.items {
        let pos = item.pos;
        let name = match &item.node {
            Item::Var { name, .. }
            | Item::QReg { name, .. }
            | Item::Oracle { name, .. }
            | Item::Const { name, .. }
            | Item::Def { name, .. } => Some(name.as_str()),
            Item::Main(_) | Item::Spec(_) => None,
        };
        if let Some(name) = name {
            if name == TIME_NAME {
                return Err(Diagnostic::semantic(
                    pos,
                    "`t` is the time variable",
                    "a different name",
                ));
            }
            if let Some(first) = seen.insert(name, pos) {
                return Err(Diagnostic::semantic(
                    pos,
                    format!("duplicate declaration of `{name}` (first declared at {first})"),
                    "a fresh name",
                ));
            }
        }
        match &item.node {
            Item::Var { name, domain, init } => {
                let decl = match domain {
                    Domain::Bool => VarDecl::boolean(name.as_str()),
                    Domain::Range { lo, hi } => VarDecl::range(name.as_str(), *lo, *hi)
                        .map_err(|e| Diagnostic::from_core(pos, &e, "a smaller range"))?,
                };
                if let Some(e) = init {
                    let v = match (domain, literal(e)) {
                        (Domain::Bool, Some(Value::Bool(b))) => Some(Scalar::Bool(b)),
                        (Domain::Range { .. }, Some(Value::Int(i))) => Some(Scalar::Int(i)),
                        _ => None,
                    };
                    let v = v.filter(|v| domain.contains(*v)).ok_or_else(|| {
                        Diagnostic::semantic(
                            pos,
                            format!("bad initial value for `{name}`"),
                            "a literal in the declared range",
                        )
                    })?;
                    inits.push((name.clone(), v));
                }
                decls.push(decl);
                ctx.vars.push((name, *domain));
            }
            Item::QReg { name, n } => {
                if ctx.register.is_some() {
                    return Err(Diagnostic::semantic(
                        pos,
                        "only one quantum register per program is supported",
                        "a single `qreg` declaration",
                    ));
                }
                ctx.register = Some((name.clone(), *n));
            }
            Item::Oracle { name, bits } => {
                let len = bits.len();
                if len < 2 || !len.is_power_of_two() {
                    return Err(Diagnostic::semantic(
                        pos,
                        format!("oracle `{name}` has {len} entries"),
                        "a table of 2^n bits, n >= 1",
                    ));
                }
                let table = bits.chars().map(|c| c == '1').collect();
                ctx.oracles.insert(name, (table, len.trailing_zeros() as usize));
            }
            Item::Const { name, value } => {
                let v = literal(value).ok_or_else(|| {
                    Diagnostic::semantic(
                        pos,
                        format!("`{name}` is not a literal"),
                        "a number, `true`, `false` or `inf`",
                    )
                })?;
                consts.push((name.clone(), v));
            }
            Item::Def { name, .. } => ctx.defs.push(name),
            Item::Main(s) => {
                if main.is_some() {
                    return Err(Diagnostic::semantic(pos, "second `main`", "a single `main`"));
                }
                main = Some((pos, s));
            }
            Item::Spec(s) => {
                if spec.is_some() {
                    return Err(Diagnostic::semantic(pos, "second `spec`", "a single `spec`"));
                }
                spec = Some((pos, s));
            }
        }
    }

    let end = ast.items.last().map_or(Pos { line: 1, col: 1 }, |i| i.pos);
    let (main_pos, main) = main.ok_or_else(|| Diagnostic::semantic(end, "no `main` statement", "`main`"))?;

    let mut schema = Schema::new(decls).map_err(|e| Diagnostic::from_core(end, &e, "valid declarations"))?;
    if let Some((name, n)) = &ctx.register {
        schema = schema
            .with_register(name.as_str(), *n)
            .map_err(|e| Diagnostic::from_core(end, &e, "a smaller register"))?;
    }

    let mut defs = Vec::new();
    for item in &ast.items {
        if let Item::Def { name, body } = &item.node {
            defs.push((name.clone(), ctx.stmt(body, item.pos)?));
        }
    }
    let main_stmt = ctx.stmt(main, main_pos)?;
    let program = Program::new(schema, consts, defs, main_stmt)
        .map_err(|e| Diagnostic::from_core(main_pos, &e, "a well-formed program"))?;

    let spec = match spec {
        None => None,
        Some((pos, s)) => {
            let sp = if s.dist {
                Spec::Dist(s.expr.clone())
            } else {
                Spec::Bool(s.expr.clone())
            };
            // Resolve names now, so that errors point at the declaration.
            // A state space too large to check is reported by `refine` itself.
            match qpp_core::semantics::RefinementChecker::new(&program, &sp, Default::default()) {
                Err(e) if !e.is_capacity() => {
                    return Err(Diagnostic::from_core(pos, &e, "a specification over declared names"))
                }
                _ => {}
            }
            Some(LoweredSpec {
                spec: sp,
                timed: s.timed,
            })
        }
    };
    Ok(Lowered { program, spec, inits })
}

/// The value of a literal, possibly negated.
fn literal(e: &Expr) -> Option<Value> {
    Some(match e {
        Expr::Int(i) => Value::Int(*i),
        Expr::Real(r) => Value::Real(*r),
        Expr::Bool(b) => Value::Bool(*b),
        Expr::Inf => Value::Inf,
        Expr::Neg(a) => match literal(a)? {
            Value::Int(i) => Value::Int(i.checked_neg()?),
            Value::Real(r) => Value::Real(-r),
            _ => return None,
        },
        _ => return None,
    })
}

impl Ctx<'_> {
    fn register(&self, reg: &str, pos: Pos) -> Result<usize, Diagnostic> {
        match &self.register {
            Some((name, n)) if name == reg => Ok(*n),
            Some((name, _)) => Err(Diagnostic::semantic(
                pos,
                format!("`{reg}` is not the register"),
                &format!("`{name}`"),
            )),
            None => Err(Diagnostic::semantic(
                pos,
                format!("`{reg}` is not declared"),
                "a `qreg` declaration",
            )),
        }
    }

    fn stmt(&self, s: &SStmt, pos: Pos) -> Result<Stmt, Diagnostic> {
        let bx = |x: &SStmt| self.stmt(x, pos);
        Ok(match s {
            SStmt::Ok => Stmt::Ok,
            SStmt::Tick => Stmt::Tick,
            SStmt::Assign(x, e) if x == TIME_NAME => {
                let tick = Expr::add(Expr::var(TIME_NAME), Expr::Int(1));
                if *e != tick {
                    return Err(Diagnostic::semantic(
                        pos,
                        "time only advances by `t := t + 1`",
                        "`t := t + 1` or `tick`",
                    ));
                }
                Stmt::Tick
            }
            SStmt::Assign(x, e) => {
                if self.register.as_ref().is_some_and(|(r, _)| r == x) {
                    return Err(Diagnostic::semantic(
                        pos,
                        format!("`{x}` is the register"),
                        "`zero(n)` or `apply(gate, register)`",
                    ));
                }
                if !self.vars.iter().any(|(v, _)| v == x) {
                    return Err(Diagnostic::semantic(
                        pos,
                        format!("assignment to undeclared `{x}`"),
                        "a declared variable",
                    ));
                }
                Stmt::Assign(x.clone(), e.clone())
            }
            SStmt::Seq(a, b) => Stmt::seq(bx(a)?, bx(b)?),
            SStmt::If(c, a, b) => Stmt::if_(c.clone(), bx(a)?, bx(b)?),
            SStmt::IfProb(c, a, b) => Stmt::if_prob(c.clone(), bx(a)?, bx(b)?),
            SStmt::Zero { reg, n } => {
                self.register(reg, pos)?;
                Stmt::QInit(*n)
            }
            SStmt::Apply { reg, gate } => {
                let n = self.register(reg, pos)?;
                let op = match gate {
                    Gate::H => Operator::hadamard_all(n),
                    Gate::InvMean => Operator::inversion_about_mean(n),
                    Gate::Oracle(f) => {
                        let (table, m) = self.oracles.get(f.as_str()).ok_or_else(|| {
                            Diagnostic::semantic(pos, format!("unknown oracle `{f}`"), "a declared oracle")
                        })?;
                        if *m != n {
                            return Err(Diagnostic::semantic(
                                pos,
                                format!("oracle `{f}` is on {m} bits but `{reg}` has {n} qubits"),
                                &format!("an oracle of {} bits", 1usize << n),
                            ));
                        }
                        Operator::phase_oracle(table.clone())
                    }
                };
                Stmt::QApply(op.map_err(|e| Diagnostic::from_core(pos, &e, "a smaller register"))?)
            }
            SStmt::Measure { reg, var } => {
                self.register(reg, pos)?;
                Stmt::measure(var)
            }
            SStmt::Call(p) => {
                if !self.defs.contains(&p.as_str()) {
                    return Err(Diagnostic::semantic(
                        pos,
                        format!("call of undefined `{p}`"),
                        "a `def` name",
                    ));
                }
                Stmt::call(p)
            }
            SStmt::Spec(e) => Stmt::Spec(e.clone()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn countdown() {
        let (_, l) = load("var x : -4,..9 = 3\ndef P = if x = 0 then ok else (x := x - 1; tick; call P)\nmain call P\nspec timed x >= 0 /\\ t' = t + x \\/ x < 0 /\\ t' = inf").unwrap();
        assert!(l.spec.as_ref().unwrap().timed);
        let s = l.initial_state(&[]).unwrap();
        assert_eq!(s.classical, vec![Scalar::Int(3)]);
        let s = l.initial_state(&[("x".into(), Scalar::Int(-2))]).unwrap();
        assert_eq!(s.classical, vec![Scalar::Int(-2)]);
    }

    #[test]
    fn semantic_errors() {
        let cases = [
            ("var x : 0,..2\nvar x : bool\nmain ok", 2, "duplicate"),
            ("qreg a : 1\nqreg b : 1\nmain ok", 2, "one quantum register"),
            ("var x : 0,..2\nmain call P", 2, "undefined"),
            (
                "qreg psi : 2\noracle f = 01\nmain psi := apply(oracle f, psi)",
                3,
                "1 bits",
            ),
            ("var x : 0,..2\nmain y := 1", 2, "undeclared"),
            ("var x : 0,..2 = 5\nmain ok", 1, "initial"),
            ("var x : 0,..2\nmain ok\nspec y' = 0", 3, "undeclared"),
            ("var x : 0,..2", 1, "main"),
        ];
        for (src, line, msg) in cases {
            let d = load(src).unwrap_err();
            assert_eq!(d.pos.line, line, "{src}");
            assert!(d.to_string().contains(msg), "{src}: {d}");
            assert!(!d.expected.is_empty());
        }
    }
}
