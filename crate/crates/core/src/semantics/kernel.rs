//! Programs and specifications as distribution transformers, with the
//! generalized sequential composition and probabilistic choice between them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::dist::Distribution;
use super::eval::eval;
use super::expr::{Expr, Value};
use super::program::{Program, Stmt};
use super::state::Schema;
use crate::error::{Error, Result};

/// A map from prestate distributions to poststate distributions.
pub trait Kernel {
    fn schema(&self) -> &Schema;
    fn apply(&self, d: &Distribution) -> Result<Distribution>;
}

impl<K: Kernel + ?Sized> Kernel for &K {
    fn schema(&self) -> &Schema {
        (**self).schema()
    }

    fn apply(&self, d: &Distribution) -> Result<Distribution> {
        (**self).apply(d)
    }
}

/// A program evaluated with a fixed fuel budget.
#[derive(Clone, Debug)]
pub struct ProgramKernel {
    program: Program,
    fuel: u64,
}

impl ProgramKernel {
    pub fn new(program: Program, fuel: u64) -> Self {
        ProgramKernel { program, fuel }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }
}

impl Kernel for ProgramKernel {
    fn schema(&self) -> &Schema {
        self.program.schema()
    }

    fn apply(&self, d: &Distribution) -> Result<Distribution> {
        Ok(eval(&self.program, d, self.fuel)?.dist)
    }
}

/// A probabilistic specification over unprimed and primed variables. Its
/// value at each prestate must be a distribution over the primed variables it
/// mentions; the others are unchanged.
#[derive(Clone, Debug)]
pub struct SpecKernel(ProgramKernel);

impl SpecKernel {
    pub fn new(schema: Schema, consts: Vec<(String, Value)>, spec: Expr) -> Result<Self> {
        let p = Program::new(schema, consts, Vec::new(), Stmt::Spec(spec))?;
        Ok(SpecKernel(ProgramKernel::new(p, 0)))
    }
}

impl Kernel for SpecKernel {
    fn schema(&self) -> &Schema {
        self.0.schema()
    }

    fn apply(&self, d: &Distribution) -> Result<Distribution> {
        self.0.apply(d)
    }
}

/// `R; S`: the poststate of `R` is the prestate of `S`, summed over all
/// intermediate states.
#[derive(Clone, Debug)]
pub struct SeqKernel<R, S> {
    r: R,
    s: S,
}

pub fn seq_compose<R: Kernel, S: Kernel>(r: R, s: S) -> Result<SeqKernel<R, S>> {
    same_schema(r.schema(), s.schema())?;
    Ok(SeqKernel { r, s })
}

impl<R: Kernel, S: Kernel> Kernel for SeqKernel<R, S> {
    fn schema(&self) -> &Schema {
        self.r.schema()
    }

    fn apply(&self, d: &Distribution) -> Result<Distribution> {
        self.s.apply(&self.r.apply(d)?)
    }
}

/// `if p then R else S`, i.e. `p × R + (1 − p) × S`.
#[derive(Clone, Debug)]
pub struct ProbIfKernel<R, S> {
    p: f64,
    r: R,
    s: S,
}

pub fn prob_if<R: Kernel, S: Kernel>(p: f64, r: R, s: S) -> Result<ProbIfKernel<R, S>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("{p} is not a probability")));
    }
    same_schema(r.schema(), s.schema())?;
    Ok(ProbIfKernel { p, r, s })
}

impl<R: Kernel, S: Kernel> Kernel for ProbIfKernel<R, S> {
    fn schema(&self) -> &Schema {
        self.r.schema()
    }

    fn apply(&self, d: &Distribution) -> Result<Distribution> {
        if self.p == 1.0 {
            return self.r.apply(d);
        }
        if self.p == 0.0 {
            return self.s.apply(d);
        }
        let a = self.r.apply(d)?;
        let b = self.s.apply(d)?;
        Distribution::mix(&[(self.p, &a), (1.0 - self.p, &b)])
    }
}

fn same_schema(a: &Schema, b: &Schema) -> Result<()> {
    if a != b {
        return Err(Error::domain("kernels over different state spaces"));
    }
    Ok(())
}
