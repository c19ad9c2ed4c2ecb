use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::expr::{resolve, Expr, RExpr, Value};
use super::state::{Schema, TIME_NAME};
use crate::error::{Error, Result};
use crate::qmeasure::{Basis, MeasurementCollection, Observable};
use crate::qops::Operator;

/// Which measurement a `measure` statement performs.
#[derive(Clone, Debug)]
pub enum Measurement {
    Computational,
    Basis(Basis),
    Observable(Observable),
    General(MeasurementCollection),
}

impl Measurement {
    fn n_qubits(&self) -> Option<usize> {
        match self {
            Measurement::Computational => None,
            Measurement::Basis(b) => Some(b.n_qubits()),
            Measurement::Observable(o) => Some(o.n_qubits()),
            Measurement::General(m) => Some(m.n_qubits()),
        }
    }
}

/// Program and specification syntax.
#[derive(Clone, Debug)]
pub enum Stmt {
    /// `ok`: the state is unchanged.
    Ok,
    /// `x := e`. `e` may contain `rand n`, which branches uniformly.
    Assign(String, Expr),
    Seq(Box<Stmt>, Box<Stmt>),
    If(Expr, Box<Stmt>, Box<Stmt>),
    /// `if p then R else S` with `p` a probability.
    IfProb(Expr, Box<Stmt>, Box<Stmt>),
    /// `ψ := |0⟩^{⊗n}`.
    QInit(usize),
    /// `ψ := U ψ`.
    QApply(Operator),
    /// `measure ψ r`.
    QMeasure(Measurement, String),
    /// `t := t + 1`.
    Tick,
    /// A use of a named definition; each unfolding consumes one unit of fuel.
    Call(String),
    /// A specification used as a statement: a boolean or probability
    /// expression over prestate and primed poststate variables. Primed
    /// variables range over their declared domains; variables it does not
    /// mention keep their values.
    Spec(Expr),
}

impl Stmt {
    pub fn assign(x: &str, e: Expr) -> Stmt {
        Stmt::Assign(x.into(), e)
    }

    pub fn rand_assign(x: &str, n: i64) -> Stmt {
        Stmt::Assign(x.into(), Expr::rand(Expr::Int(n)))
    }

    pub fn seq(a: Stmt, b: Stmt) -> Stmt {
        Stmt::Seq(Box::new(a), Box::new(b))
    }

    /// Right-nested sequence of all statements; `ok` when empty.
    pub fn seq_all(items: impl IntoIterator<Item = Stmt>) -> Stmt {
        let mut v: Vec<Stmt> = items.into_iter().collect();
        let mut acc = match v.pop() {
            Some(s) => s,
            None => return Stmt::Ok,
        };
        while let Some(s) = v.pop() {
            acc = Stmt::seq(s, acc);
        }
        acc
    }

    pub fn if_(c: Expr, a: Stmt, b: Stmt) -> Stmt {
        Stmt::If(c, Box::new(a), Box::new(b))
    }

    pub fn if_prob(p: Expr, a: Stmt, b: Stmt) -> Stmt {
        Stmt::IfProb(p, Box::new(a), Box::new(b))
    }

    pub fn call(name: &str) -> Stmt {
        Stmt::Call(name.into())
    }

    pub fn measure(r: &str) -> Stmt {
        Stmt::QMeasure(Measurement::Computational, r.into())
    }
}

pub(crate) type NodeId = u32;

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Ok,
    Assign(usize, RExpr),
    Seq(NodeId, NodeId),
    If(RExpr, NodeId, NodeId),
    IfProb(RExpr, NodeId, NodeId),
    QInit(usize),
    QApply(Operator),
    QMeasure(Measurement, usize),
    Tick,
    Call(usize),
    Spec(RExpr, Vec<usize>),
}

/// A validated program: declarations, named constants, recursive
/// definitions and a main statement.
#[derive(Clone, Debug)]
pub struct Program {
    schema: Schema,
    consts: Vec<(String, Value)>,
    defs: Vec<(String, Stmt)>,
    main: Stmt,
    pub(crate) nodes: Vec<Node>,
    pub(crate) def_bodies: Vec<NodeId>,
    pub(crate) main_node: NodeId,
}

impl Program {
    pub fn new(schema: Schema, consts: Vec<(String, Value)>, defs: Vec<(String, Stmt)>, main: Stmt) -> Result<Self> {
        for (i, (name, _)) in consts.iter().enumerate() {
            if consts[..i].iter().any(|(n, _)| n == name) || schema.index_of(name).is_some() || name == TIME_NAME {
                return Err(Error::validation(format!("duplicate declaration of `{name}`")));
            }
        }
        for (i, (name, _)) in defs.iter().enumerate() {
            if defs[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::validation(format!("duplicate definition `{name}`")));
            }
        }
        let mut p = Program {
            schema,
            consts,
            defs,
            main,
            nodes: Vec::new(),
            def_bodies: Vec::new(),
            main_node: 0,
        };
        let mut c = Compiler {
            schema: &p.schema,
            consts: &p.consts,
            defs: &p.defs,
            nodes: Vec::new(),
        };
        let mut bodies = Vec::with_capacity(p.defs.len());
        for (_, body) in p.defs.iter() {
            bodies.push(c.compile(body)?);
        }
        let main_node = c.compile(&p.main)?;
        p.nodes = c.nodes;
        p.def_bodies = bodies;
        p.main_node = main_node;
        Ok(p)
    }

    /// A program with no constants or definitions.
    pub fn simple(schema: Schema, main: Stmt) -> Result<Self> {
        Self::new(schema, Vec::new(), Vec::new(), main)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn consts(&self) -> &[(String, Value)] {
        &self.consts
    }

    pub fn defs(&self) -> &[(String, Stmt)] {
        &self.defs
    }

    pub fn main(&self) -> &Stmt {
        &self.main
    }

    /// Resolves an expression against this program's names.
    pub(crate) fn resolve(&self, e: &Expr) -> Result<RExpr> {
        resolve(e, &self.schema, &self.consts)
    }

    /// Checks that every `call` inside a definition is preceded by a `tick`
    /// on every path since the start of the body or the previous call. The
    /// entry call from `main` is free.
    pub fn calls_are_timed(&self) -> Result<()> {
        for (name, body) in &self.defs {
            ticked(body, false).map_err(|e| match e {
                Error::Validation(m) => Error::validation(format!("in `{name}`: {m}")),
                other => other,
            })?;
        }
        Ok(())
    }
}

/// Returns whether a tick is guaranteed since the last call, after `s`.
fn ticked(s: &Stmt, before: bool) -> Result<bool> {
    Ok(match s {
        Stmt::Tick => true,
        Stmt::Call(name) => {
            if !before {
                return Err(Error::validation(format!("call of `{name}` is not preceded by a tick")));
            }
            false
        }
        Stmt::Seq(a, b) => ticked(b, ticked(a, before)?)?,
        Stmt::If(_, a, b) | Stmt::IfProb(_, a, b) => {
            let ta = ticked(a, before)?;
            let tb = ticked(b, before)?;
            ta && tb
        }
        Stmt::Ok | Stmt::Assign(..) | Stmt::QInit(_) | Stmt::QApply(_) | Stmt::QMeasure(..) | Stmt::Spec(_) => before,
    })
}

struct Compiler<'a> {
    schema: &'a Schema,
    consts: &'a [(String, Value)],
    defs: &'a [(String, Stmt)],
    nodes: Vec<Node>,
}

impl Compiler<'_> {
    fn push(&mut self, n: Node) -> NodeId {
        self.nodes.push(n);
        (self.nodes.len() - 1) as NodeId
    }

    fn expr(&self, e: &Expr, allow_rand: bool, allow_primed: bool) -> Result<RExpr> {
        if !allow_rand && e.contains_rand() {
            return Err(Error::validation(
                "`rand` is only allowed on the right of an assignment",
            ));
        }
        let mut bad = None;
        e.visit_vars(&mut |name, primed| {
            if primed && (!allow_primed || name == TIME_NAME) && bad.is_none() {
                bad = Some(format!("`{name}'` is not allowed here"));
            }
        });
        if let Some(m) = bad {
            return Err(Error::validation(m));
        }
        resolve(e, self.schema, self.consts)
    }

    fn register(&self, what: &str) -> Result<usize> {
        self.schema
            .register()
            .map(|(_, n)| n)
            .ok_or_else(|| Error::validation(format!("{what} needs a quantum register")))
    }

    fn compile(&mut self, s: &Stmt) -> Result<NodeId> {
        let node = match s {
            Stmt::Ok => Node::Ok,
            Stmt::Tick => Node::Tick,
            Stmt::Assign(x, e) => {
                let i = self.schema.require(x)?;
                Node::Assign(i, self.expr(e, true, false)?)
            }
            Stmt::Seq(a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                Node::Seq(a, b)
            }
            Stmt::If(c, a, b) => {
                let c = self.expr(c, false, false)?;
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                Node::If(c, a, b)
            }
            Stmt::IfProb(p, a, b) => {
                let p = self.expr(p, false, false)?;
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                Node::IfProb(p, a, b)
            }
            Stmt::QInit(n) => {
                let size = self.register("initialization")?;
                if *n != size {
                    return Err(Error::validation(format!(
                        "zero({n}) does not fit a {size}-qubit register"
                    )));
                }
                Node::QInit(*n)
            }
            Stmt::QApply(op) => {
                let size = self.register("an operator")?;
                if op.n_qubits() != size {
                    return Err(Error::validation(format!(
                        "{}-qubit operator on a {size}-qubit register",
                        op.n_qubits()
                    )));
                }
                Node::QApply(op.clone())
            }
            Stmt::QMeasure(m, r) => {
                let size = self.register("measurement")?;
                if m.n_qubits().is_some_and(|n| n != size) {
                    return Err(Error::validation("measurement does not fit the register"));
                }
                let i = self.schema.require(r)?;
                if self.schema.vars()[i].domain.is_bool() {
                    return Err(Error::validation(format!(
                        "measurement result `{r}` must be an integer variable"
                    )));
                }
                Node::QMeasure(m.clone(), i)
            }
            Stmt::Call(name) => {
                let d = self
                    .defs
                    .iter()
                    .position(|(n, _)| n == name)
                    .ok_or_else(|| Error::validation(format!("undefined `{name}`")))?;
                Node::Call(d)
            }
            Stmt::Spec(e) => {
                let r = self.expr(e, false, true)?;
                let mut primed: Vec<usize> = Vec::new();
                let mut err = None;
                e.visit_vars(&mut |name, is_primed| {
                    if is_primed {
                        match self.schema.index_of(name) {
                            Some(i) if !primed.contains(&i) => primed.push(i),
                            Some(_) => {}
                            None => err = Some(name.into()),
                        }
                    }
                });
                if let Some(name) = err {
                    let name: String = name;
                    return Err(Error::validation(format!("undeclared variable `{name}'`")));
                }
                primed.sort_unstable();
                Node::Spec(r, primed)
            }
        };
        Ok(self.push(node))
    }
}
