//! Boolean and arithmetic expressions over unprimed (prestate) and primed
//! (poststate) variables.
//!
//! Booleans double as the numbers 1 and 0 wherever a number is expected, so a
//! boolean specification is also a (degenerate) probabilistic one.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::state::{Domain, ProgramState, Scalar, Schema, Time, TIME_NAME};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    /// Real division.
    Div,
    /// Floor division on integers.
    IntDiv,
    Mod,
    Pow,
    And,
    Or,
    Implies,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Binom,
    Sqrt,
    Sin,
    Cos,
    Arcsin,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Binom => "binom",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Arcsin => "arcsin",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "binom" => Func::Binom,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "arcsin" => Func::Arcsin,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Binom => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Real(f64),
    Bool(bool),
    Inf,
    /// An unprimed variable, a named constant, or `t`.
    Var(String),
    /// A primed variable or `t'`.
    Primed(String),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// `a op1 b op2 c …`, read as `a op1 b ∧ b op2 c ∧ …`.
    Cmp(Box<Expr>, Vec<(CmpOp, Expr)>),
    Call(Func, Vec<Expr>),
    /// `rand(n)`: uniform on `0,..n`. Only meaningful on the right of `:=`.
    Rand(Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.into())
    }

    pub fn primed(name: &str) -> Expr {
        Expr::Primed(name.into())
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn cmp(op: CmpOp, a: Expr, b: Expr) -> Expr {
        Expr::Cmp(Box::new(a), alloc::vec![(op, b)])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        Self::bin(BinOp::Add, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Self::bin(BinOp::Sub, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Self::bin(BinOp::Mul, a, b)
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Self::cmp(CmpOp::Eq, a, b)
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Self::bin(BinOp::And, a, b)
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Self::bin(BinOp::Or, a, b)
    }

    pub fn implies(a: Expr, b: Expr) -> Expr {
        Self::bin(BinOp::Implies, a, b)
    }

    pub fn rand(n: Expr) -> Expr {
        Expr::Rand(Box::new(n))
    }

    /// Replaces every unprimed occurrence of `name` by `e`.
    pub fn substitute(&self, name: &str, e: &Expr) -> Expr {
        let s = |x: &Expr| Box::new(x.substitute(name, e));
        match self {
            Expr::Var(v) if v == name => e.clone(),
            Expr::Int(_) | Expr::Real(_) | Expr::Bool(_) | Expr::Inf | Expr::Var(_) | Expr::Primed(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Not(a) => Expr::Not(s(a)),
            Expr::Bin(op, a, b) => Expr::Bin(*op, s(a), s(b)),
            Expr::Cmp(a, rest) => Expr::Cmp(s(a), rest.iter().map(|(op, x)| (*op, x.substitute(name, e))).collect()),
            Expr::Call(f, args) => Expr::Call(*f, args.iter().map(|x| x.substitute(name, e)).collect()),
            Expr::Rand(a) => Expr::Rand(s(a)),
        }
    }

    /// Calls `f(name, primed)` for every variable occurrence.
    pub fn visit_vars(&self, f: &mut impl FnMut(&str, bool)) {
        match self {
            Expr::Var(v) => f(v, false),
            Expr::Primed(v) => f(v, true),
            Expr::Int(_) | Expr::Real(_) | Expr::Bool(_) | Expr::Inf => {}
            Expr::Neg(a) | Expr::Not(a) | Expr::Rand(a) => a.visit_vars(f),
            Expr::Bin(_, a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Expr::Cmp(a, rest) => {
                a.visit_vars(f);
                rest.iter().for_each(|(_, x)| x.visit_vars(f));
            }
            Expr::Call(_, args) => args.iter().for_each(|x| x.visit_vars(f)),
        }
    }

    pub fn contains_rand(&self) -> bool {
        match self {
            Expr::Rand(_) => true,
            Expr::Int(_) | Expr::Real(_) | Expr::Bool(_) | Expr::Inf | Expr::Var(_) | Expr::Primed(_) => false,
            Expr::Neg(a) | Expr::Not(a) => a.contains_rand(),
            Expr::Bin(_, a, b) => a.contains_rand() || b.contains_rand(),
            Expr::Cmp(a, rest) => a.contains_rand() || rest.iter().any(|(_, x)| x.contains_rand()),
            Expr::Call(_, args) => args.iter().any(Expr::contains_rand),
        }
    }
}

/// The result of evaluating an expression.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Inf,
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Bool(b) => b as u8 as f64,
            Value::Int(i) => i as f64,
            Value::Real(r) => r,
            Value::Inf => f64::INFINITY,
        }
    }

    pub fn truth(self) -> Result<bool> {
        match self {
            Value::Bool(b) => Ok(b),
            Value::Int(0) => Ok(false),
            Value::Int(1) => Ok(true),
            other => Err(Error::eval(format!("{other:?} is not a boolean"))),
        }
    }

    fn is_zero(self) -> bool {
        match self {
            Value::Bool(b) => !b,
            Value::Int(i) => i == 0,
            Value::Real(r) => r == 0.0,
            Value::Inf => false,
        }
    }

    fn int(self) -> Option<i64> {
        match self {
            Value::Bool(b) => Some(b as i64),
            Value::Int(i) => Some(i),
            _ => None,
        }
    }

    pub(crate) fn from_scalar(s: Scalar) -> Value {
        match s {
            Scalar::Bool(b) => Value::Bool(b),
            Scalar::Int(i) => Value::Int(i),
        }
    }

    pub(crate) fn from_time(t: Time) -> Value {
        match t {
            Time::Finite(t) => i64::try_from(t).map_or(Value::Inf, Value::Int),
            Time::Infinite => Value::Inf,
        }
    }

    /// Converts to the stored form of a variable with domain `d`.
    pub(crate) fn to_scalar(self, d: &Domain, name: &str) -> Result<Scalar> {
        match (d, self) {
            (Domain::Bool, Value::Bool(b)) => Ok(Scalar::Bool(b)),
            (Domain::Range { .. }, Value::Int(i)) => Ok(Scalar::Int(i)),
            (Domain::Range { .. }, Value::Real(r))
                if r.is_finite() && libm::trunc(r) == r && libm::fabs(r) < 9.0e15 =>
            {
                Ok(Scalar::Int(r as i64))
            }
            _ => Err(Error::eval(format!("cannot store {self:?} in `{name}`"))),
        }
    }
}

/// Where a name refers in a resolved expression.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum RExpr {
    Lit(Value),
    Pre(usize),
    Post(usize),
    PreTime,
    PostTime,
    Neg(Box<RExpr>),
    Not(Box<RExpr>),
    Bin(BinOp, Box<RExpr>, Box<RExpr>),
    Cmp(Box<RExpr>, Vec<(CmpOp, RExpr)>),
    Call(Func, Vec<RExpr>),
    Rand(Box<RExpr>),
}

/// Resolves names against a schema and a table of constants.
pub(crate) fn resolve(e: &Expr, schema: &Schema, consts: &[(String, Value)]) -> Result<RExpr> {
    let r = |x: &Expr| resolve(x, schema, consts).map(Box::new);
    Ok(match e {
        Expr::Int(i) => RExpr::Lit(Value::Int(*i)),
        Expr::Real(x) => RExpr::Lit(Value::Real(*x)),
        Expr::Bool(b) => RExpr::Lit(Value::Bool(*b)),
        Expr::Inf => RExpr::Lit(Value::Inf),
        Expr::Var(v) if v == TIME_NAME => RExpr::PreTime,
        Expr::Primed(v) if v == TIME_NAME => RExpr::PostTime,
        Expr::Var(v) => match schema.index_of(v) {
            Some(i) => RExpr::Pre(i),
            None => match consts.iter().find(|(n, _)| n == v) {
                Some((_, val)) => RExpr::Lit(*val),
                None => return Err(Error::validation(format!("undeclared name `{v}`"))),
            },
        },
        Expr::Primed(v) => RExpr::Post(
            schema
                .index_of(v)
                .ok_or_else(|| Error::validation(format!("undeclared variable `{v}'`")))?,
        ),
        Expr::Neg(a) => RExpr::Neg(r(a)?),
        Expr::Not(a) => RExpr::Not(r(a)?),
        Expr::Bin(op, a, b) => RExpr::Bin(*op, r(a)?, r(b)?),
        Expr::Cmp(a, rest) => RExpr::Cmp(
            r(a)?,
            rest.iter()
                .map(|(op, x)| Ok((*op, resolve(x, schema, consts)?)))
                .collect::<Result<_>>()?,
        ),
        Expr::Call(f, args) => {
            if args.len() != f.arity() {
                return Err(Error::validation(format!(
                    "`{}` takes {} argument(s)",
                    f.name(),
                    f.arity()
                )));
            }
            RExpr::Call(
                *f,
                args.iter().map(|x| resolve(x, schema, consts)).collect::<Result<_>>()?,
            )
        }
        Expr::Rand(a) => RExpr::Rand(r(a)?),
    })
}

/// Chooses among `rand(n)` outcomes during evaluation.
pub(crate) trait Chooser {
    fn choose(&mut self, n: i64) -> Result<i64>;
}

/// Rejects `rand`, for contexts that must be deterministic.
pub(crate) struct NoRand;

impl Chooser for NoRand {
    fn choose(&mut self, _: i64) -> Result<i64> {
        Err(Error::eval("`rand` is only allowed on the right of an assignment"))
    }
}

/// Odometer over all `rand` outcomes of one expression. Each evaluation
/// replays a prefix of earlier choices; [`Odometer::advance`] moves to the
/// next combination.
#[derive(Default)]
pub(crate) struct Odometer {
    digits: Vec<(i64, i64)>,
    pos: usize,
}

impl Odometer {
    pub(crate) fn start(&mut self) {
        self.pos = 0;
    }

    /// Weight of the combination just evaluated.
    pub(crate) fn weight(&self) -> f64 {
        self.digits[..self.pos].iter().fold(1.0, |w, &(_, n)| w / n as f64)
    }

    pub(crate) fn advance(&mut self) -> bool {
        self.digits.truncate(self.pos);
        while let Some((d, n)) = self.digits.pop() {
            if d + 1 < n {
                self.digits.push((d + 1, n));
                return true;
            }
        }
        false
    }
}

impl Chooser for Odometer {
    fn choose(&mut self, n: i64) -> Result<i64> {
        if n < 1 {
            return Err(Error::eval(format!("rand({n}) needs a positive argument")));
        }
        let d = if self.pos < self.digits.len() {
            self.digits[self.pos].0
        } else {
            self.digits.push((0, n));
            0
        };
        self.pos += 1;
        Ok(d)
    }
}

pub(crate) struct Env<'a> {
    pub pre: &'a ProgramState,
    pub post: Option<&'a ProgramState>,
}

impl RExpr {
    pub(crate) fn eval(&self, env: &Env<'_>, ch: &mut dyn Chooser) -> Result<Value> {
        match self {
            RExpr::Lit(v) => Ok(*v),
            RExpr::Pre(i) => Ok(Value::from_scalar(env.pre.classical[*i])),
            RExpr::Post(i) => Ok(Value::from_scalar(post(env)?.classical[*i])),
            RExpr::PreTime => time_value(env.pre.time),
            RExpr::PostTime => time_value(post(env)?.time),
            RExpr::Neg(a) => match a.eval(env, ch)? {
                Value::Int(i) => i
                    .checked_neg()
                    .map(Value::Int)
                    .ok_or_else(|| Error::eval("integer overflow")),
                Value::Real(r) => Ok(Value::Real(-r)),
                v => Err(Error::eval(format!("cannot negate {v:?}"))),
            },
            RExpr::Not(a) => Ok(Value::Bool(!a.eval(env, ch)?.truth()?)),
            RExpr::Bin(op, a, b) => {
                let x = a.eval(env, ch)?;
                match op {
                    BinOp::And if !x.truth()? => return Ok(Value::Bool(false)),
                    BinOp::Or if x.truth()? => return Ok(Value::Bool(true)),
                    BinOp::Implies if !x.truth()? => return Ok(Value::Bool(true)),
                    BinOp::And | BinOp::Or | BinOp::Implies => return Ok(Value::Bool(b.eval(env, ch)?.truth()?)),
                    // 0 × e = 0 without evaluating e.
                    BinOp::Mul if x.is_zero() => {
                        return Ok(match x {
                            Value::Real(_) => Value::Real(0.0),
                            _ => Value::Int(0),
                        })
                    }
                    _ => {}
                }
                arith(*op, x, b.eval(env, ch)?)
            }
            RExpr::Cmp(a, rest) => {
                let mut left = a.eval(env, ch)?;
                let mut all = true;
                for (op, e) in rest {
                    let right = e.eval(env, ch)?;
                    if all && !compare(*op, left, right)? {
                        all = false;
                    }
                    left = right;
                }
                Ok(Value::Bool(all))
            }
            RExpr::Call(f, args) => {
                let vals = args.iter().map(|a| a.eval(env, ch)).collect::<Result<Vec<_>>>()?;
                call(*f, &vals)
            }
            RExpr::Rand(n) => {
                let n = n
                    .eval(env, ch)?
                    .int()
                    .ok_or_else(|| Error::eval("rand needs an integer argument"))?;
                Ok(Value::Int(ch.choose(n)?))
            }
        }
    }
}

fn post<'a>(env: &Env<'a>) -> Result<&'a ProgramState> {
    env.post
        .ok_or_else(|| Error::eval("primed variable used outside a specification"))
}

fn time_value(t: Option<Time>) -> Result<Value> {
    t.map(Value::from_time)
        .ok_or_else(|| Error::eval("time is not part of this state"))
}

fn overflow() -> Error {
    Error::eval("integer overflow")
}

fn arith(op: BinOp, x: Value, y: Value) -> Result<Value> {
    use Value::*;
    if let (Some(a), Some(b)) = (x.int(), y.int()) {
        return match op {
            BinOp::Add => a.checked_add(b).map(Int).ok_or_else(overflow),
            BinOp::Sub => a.checked_sub(b).map(Int).ok_or_else(overflow),
            BinOp::Mul => a.checked_mul(b).map(Int).ok_or_else(overflow),
            BinOp::Div => {
                if b == 0 {
                    Err(Error::eval("division by zero"))
                } else {
                    Ok(Real(a as f64 / b as f64))
                }
            }
            BinOp::IntDiv | BinOp::Mod if b == 0 => Err(Error::eval("division by zero")),
            BinOp::IntDiv => Ok(Int(libm::floor(a as f64 / b as f64) as i64)),
            BinOp::Mod => Ok(Int(a - b * libm::floor(a as f64 / b as f64) as i64)),
            BinOp::Pow => {
                if b >= 0 {
                    match u32::try_from(b).ok().and_then(|e| a.checked_pow(e)) {
                        Some(v) => Ok(Int(v)),
                        None => Ok(Real(libm::pow(a as f64, b as f64))),
                    }
                } else {
                    Ok(Real(libm::pow(a as f64, b as f64)))
                }
            }
            BinOp::And | BinOp::Or | BinOp::Implies => unreachable!(),
        };
    }
    match (op, x, y) {
        (BinOp::Add, Inf, v) | (BinOp::Add, v, Inf) if v != Inf || x == y => Ok(Inf),
        (BinOp::Sub, Inf, v) if v != Inf => Ok(Inf),
        (BinOp::Mul, Inf, v) | (BinOp::Mul, v, Inf) if v.as_f64() > 0.0 => Ok(Inf),
        (BinOp::Div, v, Inf) if v != Inf => Ok(Real(0.0)),
        (BinOp::Pow, v, Inf) if v.as_f64() > 1.0 => Ok(Inf),
        (_, Inf, _) | (_, _, Inf) => Err(Error::eval(format!("{op:?} of {x:?} and {y:?}"))),
        (BinOp::IntDiv | BinOp::Mod, _, _) => Err(Error::eval("integer division of a non-integer")),
        _ => {
            let (a, b) = (x.as_f64(), y.as_f64());
            let r = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(Error::eval("division by zero"));
                    }
                    a / b
                }
                BinOp::Pow => libm::pow(a, b),
                _ => unreachable!(),
            };
            Ok(Real(r))
        }
    }
}

fn compare(op: CmpOp, x: Value, y: Value) -> Result<bool> {
    if let (Value::Bool(a), Value::Bool(b)) = (x, y) {
        return match op {
            CmpOp::Eq => Ok(a == b),
            CmpOp::Ne => Ok(a != b),
            _ => Err(Error::eval("ordering comparison of booleans")),
        };
    }
    let ord = match (x, y) {
        (Value::Inf, Value::Inf) => core::cmp::Ordering::Equal,
        (Value::Inf, _) => core::cmp::Ordering::Greater,
        (_, Value::Inf) => core::cmp::Ordering::Less,
        _ => match (x.int(), y.int()) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => x
                .as_f64()
                .partial_cmp(&y.as_f64())
                .ok_or_else(|| Error::eval("comparison with NaN"))?,
        },
    };
    use core::cmp::Ordering::*;
    Ok(match op {
        CmpOp::Eq => ord == Equal,
        CmpOp::Ne => ord != Equal,
        CmpOp::Lt => ord == Less,
        CmpOp::Le => ord != Greater,
        CmpOp::Gt => ord == Greater,
        CmpOp::Ge => ord != Less,
    })
}

/// `C(n, k)` as a float; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}

fn call(f: Func, args: &[Value]) -> Result<Value> {
    let real = |v: Value| -> Result<f64> {
        match v {
            Value::Inf => Err(Error::eval(format!("{}(inf)", f.name()))),
            v => Ok(v.as_f64()),
        }
    };
    Ok(match f {
        Func::Binom => {
            let (n, k) = (args[0].int(), args[1].int());
            match (n, k) {
                (Some(n), Some(k)) => Value::Real(binomial(n, k)),
                _ => return Err(Error::eval("binom needs integer arguments")),
            }
        }
        Func::Abs => match args[0] {
            Value::Int(i) => Value::Int(i.checked_abs().ok_or_else(overflow)?),
            Value::Inf => Value::Inf,
            v => Value::Real(libm::fabs(v.as_f64())),
        },
        Func::Sqrt => {
            let x = real(args[0])?;
            if x < 0.0 {
                return Err(Error::eval("sqrt of a negative number"));
            }
            Value::Real(libm::sqrt(x))
        }
        Func::Sin => Value::Real(libm::sin(real(args[0])?)),
        Func::Cos => Value::Real(libm::cos(real(args[0])?)),
        Func::Arcsin => {
            let x = real(args[0])?;
            if !(-1.0..=1.0).contains(&x) {
                return Err(Error::eval("arcsin outside [-1, 1]"));
            }
            Value::Real(libm::asin(x))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::state::VarDecl;
    use alloc::vec;

    fn schema() -> Schema {
        Schema::new(vec![VarDecl::range("x", -5, 10).unwrap(), VarDecl::boolean("b")]).unwrap()
    }

    fn eval_with(e: &Expr, pre: &ProgramState, post: Option<&ProgramState>) -> Result<Value> {
        let s = schema();
        let consts = vec![("N".into(), Value::Int(4))];
        resolve(e, &s, &consts)?.eval(&Env { pre, post }, &mut NoRand)
    }

    fn state(x: i64, b: bool, t: Time) -> ProgramState {
        ProgramState {
            classical: vec![Scalar::Int(x), Scalar::Bool(b)],
            quantum: None,
            time: Some(t),
        }
    }

    #[test]
    fn arithmetic_and_logic() {
        let s = state(3, true, Time::Finite(0));
        let e = Expr::sub(Expr::var("x"), Expr::Int(1));
        assert_eq!(eval_with(&e, &s, None).unwrap(), Value::Int(2));
        let e = Expr::bin(BinOp::Div, Expr::Int(1), Expr::var("N"));
        assert_eq!(eval_with(&e, &s, None).unwrap(), Value::Real(0.25));
        let e = Expr::bin(BinOp::Mod, Expr::Int(-7), Expr::Int(3));
        assert_eq!(eval_with(&e, &s, None).unwrap(), Value::Int(2));
        let e = Expr::bin(BinOp::IntDiv, Expr::Int(-7), Expr::Int(2));
        assert_eq!(eval_with(&e, &s, None).unwrap(), Value::Int(-4));
        let e = Expr::implies(Expr::Bool(false), Expr::var("undeclared_is_not_checked_here"));
        assert!(eval_with(&e, &s, None).is_err(), "resolution rejects undeclared names");
        let e = Expr::bin(BinOp::Pow, Expr::Int(2), Expr::Int(-2));
        assert_eq!(eval_with(&e, &s, None).unwrap(), Value::Real(0.25));
        let e = Expr::mul(Expr::var("b"), Expr::Int(7));
        assert_eq!(eval_with(&e, &s, None).unwrap(), Value::Int(7));
    }

    #[test]
    fn chained_comparisons_and_infinity() {
        let pre = state(0, false, Time::Finite(0));
        let post = state(0, false, Time::Finite(0));
        // 0 = x' = x = t' - t
        let e = Expr::Cmp(
            Box::new(Expr::Int(0)),
            vec![
                (CmpOp::Eq, Expr::primed("x")),
                (CmpOp::Eq, Expr::var("x")),
                (CmpOp::Eq, Expr::sub(Expr::primed("t"), Expr::var("t"))),
            ],
        );
        assert_eq!(eval_with(&e, &pre, Some(&post)).unwrap(), Value::Bool(true));
        let post_inf = state(0, false, Time::Infinite);
        assert_eq!(eval_with(&e, &pre, Some(&post_inf)).unwrap(), Value::Bool(false));
        let e = Expr::cmp(CmpOp::Eq, Expr::primed("t"), Expr::Inf);
        assert_eq!(eval_with(&e, &pre, Some(&post_inf)).unwrap(), Value::Bool(true));
        let e = Expr::cmp(CmpOp::Ge, Expr::primed("t"), Expr::add(Expr::var("t"), Expr::Int(50)));
        assert_eq!(eval_with(&e, &pre, Some(&post_inf)).unwrap(), Value::Bool(true));
        // false × (something undefined at ∞) = 0
        let e = Expr::mul(
            Expr::Bool(false),
            Expr::Call(Func::Binom, vec![Expr::primed("t"), Expr::Int(1)]),
        );
        assert_eq!(eval_with(&e, &pre, Some(&post_inf)).unwrap(), Value::Int(0));
    }

    #[test]
    fn functions() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, -1), 0.0);
        assert_eq!(binomial(3, 4), 0.0);
        let s = state(0, false, Time::Finite(0));
        let e = Expr::Call(Func::Arcsin, vec![Expr::Int(2)]);
        assert!(eval_with(&e, &s, None).is_err());
    }

    #[test]
    fn odometer_enumerates_all_choices() {
        let s = schema();
        let e = resolve(
            &Expr::add(
                Expr::rand(Expr::Int(2)),
                Expr::mul(Expr::Int(10), Expr::rand(Expr::Int(3))),
            ),
            &s,
            &[],
        )
        .unwrap();
        let pre = state(0, false, Time::Finite(0));
        let mut od = Odometer::default();
        let mut seen = vec![];
        loop {
            od.start();
            let v = e.eval(&Env { pre: &pre, post: None }, &mut od).unwrap();
            seen.push((v, od.weight()));
            if !od.advance() {
                break;
            }
        }
        assert_eq!(seen.len(), 6);
        let total: f64 = seen.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-15);
        let mut vals: Vec<i64> = seen
            .iter()
            .map(|(v, _)| match v {
                Value::Int(i) => *i,
                _ => panic!(),
            })
            .collect();
        vals.sort();
        assert_eq!(vals, vec![0, 1, 10, 11, 20, 21]);
    }

    #[test]
    fn substitution() {
        let e = Expr::eq(Expr::primed("x"), Expr::mul(Expr::var("x"), Expr::Int(2)));
        let s = e.substitute("x", &Expr::add(Expr::var("x"), Expr::Int(1)));
        assert_eq!(
            s,
            Expr::eq(
                Expr::primed("x"),
                Expr::mul(Expr::add(Expr::var("x"), Expr::Int(1)), Expr::Int(2))
            )
        );
    }
}
