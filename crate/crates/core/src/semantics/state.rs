use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::qstate::{check_qubits, QuantumState};

/// Largest number of values in one declared variable domain.
pub const MAX_DOMAIN_SIZE: u64 = 1 << 16;

/// Largest product of declared domain sizes an exhaustive check will enumerate.
pub const MAX_STATE_SPACE: u64 = 1 << 20;

/// Name of the time variable in expressions (`t`, primed `t'`).
pub const TIME_NAME: &str = "t";

/// Recursive time: a natural number or `∞`. `∞` compares above every
/// natural and absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Time {
    Finite(u64),
    Infinite,
}

impl Time {
    pub fn tick(self) -> Time {
        match self {
            Time::Finite(t) => t.checked_add(1).map_or(Time::Infinite, Time::Finite),
            Time::Infinite => Time::Infinite,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, k: u64) -> Time {
        match self {
            Time::Finite(t) => t.checked_add(k).map_or(Time::Infinite, Time::Finite),
            Time::Infinite => Time::Infinite,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Time::Finite(t) => Some(t),
            Time::Infinite => None,
        }
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::Finite(t) => write!(f, "{t}"),
            Time::Infinite => f.write_str("inf"),
        }
    }
}

/// The value of a classical program variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Bool(bool),
    Int(i64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Int(i) => write!(f, "{i}"),
        }
    }
}

/// Declared domain of a classical variable. `Range { lo, hi }` is `lo,..hi`:
/// from `lo` inclusive to `hi` exclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Bool,
    Range { lo: i64, hi: i64 },
}

impl Domain {
    pub fn size(&self) -> u64 {
        match self {
            Domain::Bool => 2,
            Domain::Range { lo, hi } => (*hi as i128 - *lo as i128) as u64,
        }
    }

    pub fn contains(&self, v: Scalar) -> bool {
        match (self, v) {
            (Domain::Bool, Scalar::Bool(_)) => true,
            (Domain::Range { lo, hi }, Scalar::Int(i)) => *lo <= i && i < *hi,
            _ => false,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = Scalar> + '_ {
        let (bools, ints) = match *self {
            Domain::Bool => (Some([Scalar::Bool(false), Scalar::Bool(true)]), None),
            Domain::Range { lo, hi } => (None, Some((lo..hi).map(Scalar::Int))),
        };
        bools.into_iter().flatten().chain(ints.into_iter().flatten())
    }

    /// The value a variable holds when no initial value is given.
    pub fn default_value(&self) -> Scalar {
        match self {
            Domain::Bool => Scalar::Bool(false),
            Domain::Range { lo, .. } => Scalar::Int(*lo),
        }
    }

    pub(crate) fn is_bool(&self) -> bool {
        matches!(self, Domain::Bool)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub domain: Domain,
}

impl VarDecl {
    pub fn range(name: impl Into<String>, lo: i64, hi: i64) -> Result<Self> {
        let name = name.into();
        if hi <= lo {
            return Err(Error::domain(format!("empty range {lo},..{hi} for `{name}`")));
        }
        let d = Domain::Range { lo, hi };
        if d.size() > MAX_DOMAIN_SIZE {
            return Err(Error::capacity(format!(
                "domain of `{name}` has {} values (limit {MAX_DOMAIN_SIZE})",
                d.size()
            )));
        }
        Ok(VarDecl { name, domain: d })
    }

    pub fn boolean(name: impl Into<String>) -> Self {
        VarDecl {
            name: name.into(),
            domain: Domain::Bool,
        }
    }
}

/// The shape of a program state: classical variables in declaration order,
/// an optional quantum register, and whether the state carries time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    vars: Vec<VarDecl>,
    register: Option<(String, usize)>,
    timed: bool,
}

impl Schema {
    pub fn new(vars: Vec<VarDecl>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if v.name == TIME_NAME {
                return Err(Error::validation("`t` is reserved for time"));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::validation(format!("duplicate variable `{}`", v.name)));
            }
        }
        Ok(Schema {
            vars,
            register: None,
            timed: true,
        })
    }

    pub fn with_register(mut self, name: impl Into<String>, n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let name = name.into();
        if name == TIME_NAME || self.index_of(&name).is_some() {
            return Err(Error::validation(format!("register name `{name}` is already in use")));
        }
        self.register = Some((name, n_qubits));
        Ok(self)
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn register(&self) -> Option<(&str, usize)> {
        self.register.as_ref().map(|(n, q)| (n.as_str(), *q))
    }

    pub fn is_timed(&self) -> bool {
        self.timed
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::validation(format!("undeclared variable `{name}`")))
    }

    /// Number of prestates in the declared window, checked against
    /// [`MAX_STATE_SPACE`].
    pub fn state_space_size(&self) -> Result<u64> {
        let mut total: u64 = 1;
        for v in &self.vars {
            total = total.saturating_mul(v.domain.size());
            if total > MAX_STATE_SPACE {
                return Err(Error::capacity(format!(
                    "declared state space exceeds {MAX_STATE_SPACE} prestates"
                )));
            }
        }
        Ok(total)
    }

    /// A state at time 0 with an unset register. Missing values take the
    /// domain default; every value must lie in its declared domain.
    pub fn initial_state(&self, values: &[(&str, Scalar)]) -> Result<ProgramState> {
        let mut classical: Vec<Scalar> = self.vars.iter().map(|v| v.domain.default_value()).collect();
        for (name, val) in values {
            let i = self.require(name)?;
            if !self.vars[i].domain.contains(*val) {
                return Err(Error::domain(format!("{val} is outside the domain of `{name}`")));
            }
            classical[i] = *val;
        }
        Ok(ProgramState {
            classical,
            quantum: None,
            time: self.timed.then_some(Time::Finite(0)),
        })
    }

    /// Every prestate of the declared window, in lexicographic order.
    pub fn prestates(&self) -> Result<Vec<ProgramState>> {
        self.state_space_size()?;
        let mut out = Vec::new();
        let mut current: Vec<Scalar> = Vec::with_capacity(self.vars.len());
        self.enumerate(0, &mut current, &mut out);
        Ok(out)
    }

    fn enumerate(&self, i: usize, current: &mut Vec<Scalar>, out: &mut Vec<ProgramState>) {
        if i == self.vars.len() {
            out.push(ProgramState {
                classical: current.clone(),
                quantum: None,
                time: self.timed.then_some(Time::Finite(0)),
            });
            return;
        }
        for v in self.vars[i].domain.values() {
            current.push(v);
            self.enumerate(i + 1, current, out);
            current.pop();
        }
    }

    /// Reduced schema keeping the named components. `t` keeps time and the
    /// register's name keeps the quantum state.
    pub(crate) fn project(&self, keep: &[&str]) -> Result<(Schema, Vec<usize>, bool, bool)> {
        let mut keep_time = false;
        let mut keep_q = false;
        for k in keep {
            if *k == TIME_NAME {
                keep_time = true;
            } else if self.register.as_ref().is_some_and(|(r, _)| r == k) {
                keep_q = true;
            } else {
                self.require(k)?;
            }
        }
        let idx: Vec<usize> = (0..self.vars.len())
            .filter(|&i| keep.contains(&self.vars[i].name.as_str()))
            .collect();
        let schema = Schema {
            vars: idx.iter().map(|&i| self.vars[i].clone()).collect(),
            register: if keep_q { self.register.clone() } else { None },
            timed: keep_time && self.timed,
        };
        Ok((schema, idx, keep_time, keep_q))
    }

    pub fn format_state(&self, s: &ProgramState) -> String {
        let mut parts: Vec<String> = self
            .vars
            .iter()
            .zip(&s.classical)
            .map(|(d, v)| format!("{}={}", d.name, v))
            .collect();
        if let (Some((name, _)), Some(q)) = (&self.register, &s.quantum) {
            parts.push(format!("{name}={}", format_ket_sum(q)));
        }
        if let Some(t) = s.time {
            parts.push(format!("t={t}"));
        }
        parts.join(" ")
    }
}

/// `a|x⟩ + b|y⟩ + …` over the nonzero amplitudes, shortest float formatting.
pub fn format_ket_sum(q: &QuantumState) -> String {
    let n = q.n_qubits();
    let terms: Vec<String> = q
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(x, a)| format!("{a}|{x:0n$b}>"))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// A valuation of the classical variables, plus an optional quantum register
/// and time. `None` for the register means it is unset (or summed out); `None`
/// for time means time was summed out.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgramState {
    pub classical: Vec<Scalar>,
    pub quantum: Option<QuantumState>,
    pub time: Option<Time>,
}

impl ProgramState {
    pub fn with_quantum(mut self, q: QuantumState) -> Self {
        self.quantum = Some(q);
        self
    }

    pub fn get(&self, schema: &Schema, name: &str) -> Option<Scalar> {
        schema.index_of(name).map(|i| self.classical[i])
    }
}
