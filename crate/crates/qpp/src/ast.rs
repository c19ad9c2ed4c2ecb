//! Syntax tree of `.qpp` source files.

use qpp_core::semantics::{Domain, Expr};

/// A 1-based line and column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A node with the position it was parsed at. Positions do not take part in
/// equality, so a reprinted and reparsed tree compares equal to the original.
#[derive(Clone, Debug)]
pub struct Spanned<T> {
    pub pos: Pos,
    pub node: T,
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T> Spanned<T> {
    pub fn new(node: T) -> Self {
        Spanned {
            pos: Pos::default(),
            node,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// `H`: a Hadamard on every qubit.
    H,
    /// `oracle f`: the phase oracle of a declared truth table.
    Oracle(String),
    /// `invmean`: inversion about the mean.
    InvMean,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SStmt {
    Ok,
    Assign(String, Expr),
    Seq(Box<SStmt>, Box<SStmt>),
    If(Expr, Box<SStmt>, Box<SStmt>),
    IfProb(Expr, Box<SStmt>, Box<SStmt>),
    /// `psi := zero(n)`.
    Zero {
        reg: String,
        n: usize,
    },
    /// `psi := apply(G, psi)`.
    Apply {
        reg: String,
        gate: Gate,
    },
    /// `measure psi r`.
    Measure {
        reg: String,
        var: String,
    },
    Tick,
    Call(String),
    /// `[ e ]`: a specification used as a statement.
    Spec(Expr),
}

impl SStmt {
    pub fn seq(a: SStmt, b: SStmt) -> SStmt {
        SStmt::Seq(Box::new(a), Box::new(b))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecDecl {
    /// Require every recursive call to be charged a tick.
    pub timed: bool,
    /// A distribution rather than a boolean specification.
    pub dist: bool,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    /// `var x : lo,..hi` or `var b : bool`, with an optional `= init`.
    Var {
        name: String,
        domain: Domain,
        init: Option<Expr>,
    },
    /// `qreg psi : n`.
    QReg {
        name: String,
        n: usize,
    },
    /// `oracle f = 0110`.
    Oracle {
        name: String,
        bits: String,
    },
    /// `const k = e` with a literal `e`.
    Const {
        name: String,
        value: Expr,
    },
    /// `def P = body`.
    Def {
        name: String,
        body: SStmt,
    },
    /// `main body`.
    Main(SStmt),
    Spec(SpecDecl),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SourceProgram {
    pub items: Vec<Spanned<Item>>,
}

impl SourceProgram {
    pub fn main(&self) -> Option<&SStmt> {
        self.items.iter().find_map(|i| match &i.node {
            Item::Main(s) => Some(s),
            _ => None,
        })
    }

    pub fn spec(&self) -> Option<&SpecDecl> {
        self.items.iter().find_map(|i| match &i.node {
            Item::Spec(s) => Some(s),
            _ => None,
        })
    }
}
