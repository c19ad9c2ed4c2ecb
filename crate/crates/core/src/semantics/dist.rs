use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use super::state::{ProgramState, Scalar, Schema, Time};
use crate::error::{Error, Result};
use crate::qstate::{Amplitude, QuantumState};
use crate::PROB_EPS;

/// Quantum states within this componentwise distance share a support entry.
pub const MERGE_TOL: f64 = 1e-10;

/// Grid used to order quantum states deterministically.
const KEY_GRID: f64 = 1e-10;

/// Weighted quantum states stored under one classical key. States that agree
/// within [`MERGE_TOL`] are merged into their probability-weighted average.
#[derive(Clone, Debug)]
pub(crate) struct Support<K: Ord> {
    map: BTreeMap<K, Vec<(Option<QuantumState>, f64)>>,
}

impl<K: Ord> Default for Support<K> {
    fn default() -> Self {
        Support { map: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Support<K> {
    pub(crate) fn insert(&mut self, key: K, q: Option<QuantumState>, p: f64) {
        let bucket = self.map.entry(key).or_default();
        for (r, w) in bucket.iter_mut() {
            match (r.as_mut(), q.as_ref()) {
                (None, None) => {
                    *w += p;
                    return;
                }
                (Some(a), Some(b)) if close(a, b) => {
                    let total = *w + p;
                    if total > 0.0 {
                        *a = weighted_average(a, *w / total, b, p / total);
                    }
                    *w = total;
                    return;
                }
                _ => {}
            }
        }
        bucket.push((q, p));
    }

    pub(crate) fn into_entries(self) -> impl Iterator<Item = (K, Option<QuantumState>, f64)> {
        self.map
            .into_iter()
            .flat_map(|(k, v)| v.into_iter().map(move |(q, p)| (k.clone(), q, p)))
    }

    pub(crate) fn total(&self) -> f64 {
        self.map.values().flatten().map(|(_, p)| p).sum()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn close(a: &QuantumState, b: &QuantumState) -> bool {
    a.n_qubits() == b.n_qubits()
        && a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .all(|(x, y)| (*x - *y).abs() <= MERGE_TOL)
}

fn weighted_average(a: &QuantumState, wa: f64, b: &QuantumState, wb: f64) -> QuantumState {
    let amps = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.scale(wa) + y.scale(wb))
        .collect();
    QuantumState::from_parts(a.n_qubits(), amps)
}

/// Ordering key of a quantum state: amplitudes rounded to a fixed grid.
pub(crate) fn quantum_key(q: &Option<QuantumState>) -> Vec<(i64, i64)> {
    match q {
        None => Vec::new(),
        Some(q) => q
            .amplitudes()
            .iter()
            .map(|a| (round_grid(a.re), round_grid(a.im)))
            .collect(),
    }
}

fn round_grid(x: f64) -> i64 {
    libm::round(x / KEY_GRID) as i64
}

/// A finite-support probability distribution over program states of one
/// schema. Entries are kept in a canonical order: classical values, then
/// time, then the rounded quantum amplitudes.
#[derive(Clone, Debug)]
pub struct Distribution {
    schema: Schema,
    entries: Vec<(ProgramState, f64)>,
}

type ClassicalKey = (Vec<Scalar>, Option<Time>);

impl Distribution {
    /// The point distribution at `s`.
    pub fn point(schema: &Schema, s: ProgramState) -> Result<Self> {
        check_shape(schema, &s)?;
        Ok(Distribution {
            schema: schema.clone(),
            entries: alloc::vec![(s, 1.0)],
        })
    }

    /// Builds a distribution from weighted states, merging duplicates and
    /// dropping entries at or below `PROB_EPS`. The weights must sum to 1
    /// within `1e-9`.
    pub fn from_weighted(schema: &Schema, items: Vec<(ProgramState, f64)>) -> Result<Self> {
        let mut sup: Support<ClassicalKey> = Support::default();
        for (s, p) in items {
            check_shape(schema, &s)?;
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::domain(format!("invalid probability {p}")));
            }
            sup.insert((s.classical, s.time), s.quantum, p);
        }
        let d = Self::from_support(schema, sup);
        let total = d.total_mass();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(d)
    }

    /// Canonicalizes a support without checking total mass. Returns the
    /// distribution and the mass dropped below `PROB_EPS`.
    pub(crate) fn from_support_tracked(schema: &Schema, sup: Support<ClassicalKey>) -> (Self, f64) {
        let mut dropped = 0.0;
        let mut entries: Vec<(ProgramState, f64)> = Vec::new();
        for ((classical, time), quantum, p) in sup.into_entries() {
            if p <= PROB_EPS {
                dropped += p;
                continue;
            }
            entries.push((
                ProgramState {
                    classical,
                    quantum,
                    time,
                },
                p,
            ));
        }
        entries.sort_by(|a, b| state_order(&a.0, &b.0));
        (
            Distribution {
                schema: schema.clone(),
                entries,
            },
            dropped,
        )
    }

    pub(crate) fn from_support(schema: &Schema, sup: Support<ClassicalKey>) -> Self {
        Self::from_support_tracked(schema, sup).0
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ProgramState, f64)> {
        self.entries.iter().map(|(s, p)| (s, *p))
    }

    pub fn entries(&self) -> &[(ProgramState, f64)] {
        &self.entries
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, (_, p)| acc + p)
    }

    /// One JSON object per entry and line, in canonical order:
    /// `{"classical": {"x": 0, "b": true}, "quantum": [[re, im], ...] or null,
    /// "time": 3 or "inf" or null, "p": 0.5}`. Doubles keep full precision.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (s, p) in &self.entries {
            out.push_str("{\"classical\": {");
            for (i, (v, x)) in self.schema.vars().iter().zip(&s.classical).enumerate() {
                let sep = if i > 0 { ", " } else { "" };
                let _ = write!(out, "{sep}\"{}\": {x}", v.name);
            }
            out.push_str("}, \"quantum\": ");
            match &s.quantum {
                None => out.push_str("null"),
                Some(q) => {
                    out.push('[');
                    for (i, a) in q.amplitudes().iter().enumerate() {
                        let sep = if i > 0 { ", " } else { "" };
                        let _ = write!(out, "{sep}[{:?}, {:?}]", a.re, a.im);
                    }
                    out.push(']');
                }
            }
            let _ = match s.time {
                None => write!(out, ", \"time\": null"),
                Some(Time::Finite(t)) => write!(out, ", \"time\": {t}"),
                Some(Time::Infinite) => write!(out, ", \"time\": \"inf\""),
            };
            let _ = writeln!(out, ", \"p\": {p:?}}}");
        }
        out
    }

    /// Probability of the states satisfying `pred`.
    pub fn probability(&self, pred: impl Fn(&ProgramState) -> bool) -> f64 {
        self.entries
            .iter()
            .filter(|(s, _)| pred(s))
            .fold(0.0, |acc, (_, p)| acc + p)
    }

    /// `Σ f(s) · p(s)` over the support.
    pub fn expectation(&self, f: impl Fn(&ProgramState) -> f64) -> f64 {
        self.entries.iter().map(|(s, p)| f(s) * p).sum()
    }

    /// Sums out every component not named in `keep`. `t` keeps time and the
    /// register's name keeps the quantum state.
    pub fn marginal(&self, keep: &[&str]) -> Result<Distribution> {
        let (schema, idx, keep_time, keep_q) = self.schema.project(keep)?;
        let mut sup: Support<ClassicalKey> = Support::default();
        for (s, p) in &self.entries {
            let classical = idx.iter().map(|&i| s.classical[i]).collect();
            let time = if keep_time { s.time } else { None };
            let quantum = if keep_q { s.quantum.clone() } else { None };
            sup.insert((classical, time), quantum, *p);
        }
        Ok(Self::from_support(&schema, sup))
    }

    /// Probability-weighted mixture `Σ wᵢ · dᵢ` of distributions over one schema.
    pub fn mix(parts: &[(f64, &Distribution)]) -> Result<Distribution> {
        let schema = match parts.first() {
            Some((_, d)) => d.schema.clone(),
            None => return Err(Error::domain("empty mixture")),
        };
        let mut items = Vec::new();
        for (w, d) in parts {
            if d.schema != schema {
                return Err(Error::domain("mixture of distributions over different schemas"));
            }
            if !(0.0..=1.0).contains(w) {
                return Err(Error::domain(format!("mixture weight {w} outside [0, 1]")));
            }
            items.extend(d.entries.iter().map(|(s, p)| (s.clone(), p * w)));
        }
        Self::from_weighted(&schema, items)
    }

    /// Largest pointwise probability difference. Quantum states are matched
    /// within [`MERGE_TOL`].
    pub fn distance(&self, other: &Distribution) -> Result<f64> {
        if self.schema != other.schema {
            return Err(Error::domain("distance between distributions over different schemas"));
        }
        let mut sup: Support<ClassicalKey> = Support::default();
        for (s, p) in &self.entries {
            sup.insert((s.classical.clone(), s.time), s.quantum.clone(), *p);
        }
        let mut neg: Support<ClassicalKey> = Support::default();
        for (s, p) in &other.entries {
            neg.insert((s.classical.clone(), s.time), s.quantum.clone(), *p);
        }
        let mut worst: f64 = 0.0;
        let mut claimed: Vec<bool>;
        for (key, bucket) in &sup.map {
            let others = neg.map.get(key).map(Vec::as_slice).unwrap_or(&[]);
            claimed = alloc::vec![false; others.len()];
            for (q, p) in bucket {
                let mut matched = 0.0;
                for (j, (r, w)) in others.iter().enumerate() {
                    if !claimed[j] && same_quantum(q, r) {
                        claimed[j] = true;
                        matched = *w;
                        break;
                    }
                }
                worst = worst.max((p - matched).abs());
            }
        }
        for (key, bucket) in &neg.map {
            let mine = sup.map.get(key).map(Vec::as_slice).unwrap_or(&[]);
            for (r, w) in bucket {
                if !mine.iter().any(|(q, _)| same_quantum(q, r)) {
                    worst = worst.max(*w);
                }
            }
        }
        Ok(worst)
    }

    /// Distribution of one classical variable as `(value, probability)` pairs.
    pub fn values_of(&self, name: &str) -> Result<Vec<(Scalar, f64)>> {
        let i = self.schema.require(name)?;
        let mut map: BTreeMap<Scalar, f64> = BTreeMap::new();
        for (s, p) in &self.entries {
            *map.entry(s.classical[i]).or_default() += p;
        }
        Ok(map.into_iter().collect())
    }
}

fn same_quantum(a: &Option<QuantumState>, b: &Option<QuantumState>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => close(a, b),
        _ => false,
    }
}

pub(crate) fn state_order(a: &ProgramState, b: &ProgramState) -> Ordering {
    a.classical
        .cmp(&b.classical)
        .then(a.time.cmp(&b.time))
        .then_with(|| quantum_key(&a.quantum).cmp(&quantum_key(&b.quantum)))
}

pub(crate) fn check_shape(schema: &Schema, s: &ProgramState) -> Result<()> {
    if s.classical.len() != schema.vars().len() {
        return Err(Error::domain("state does not match the schema"));
    }
    for (d, v) in schema.vars().iter().zip(&s.classical) {
        if d.domain.is_bool() != matches!(v, Scalar::Bool(_)) {
            return Err(Error::domain(format!("wrong type for `{}`", d.name)));
        }
    }
    if let Some(q) = &s.quantum {
        match schema.register() {
            Some((_, n)) if n == q.n_qubits() => {}
            _ => return Err(Error::domain("quantum state does not match the register")),
        }
    }
    Ok(())
}

/// Amplitude helper for tests and demos: `|x⟩·c` summed.
pub fn superposition(n: usize, terms: &[(usize, f64)]) -> Result<QuantumState> {
    let mut amps = alloc::vec![Amplitude::ZERO; 1 << n];
    for &(x, c) in terms {
        if x >= amps.len() {
            return Err(Error::domain(format!("ket |{x}> outside {n} qubits")));
        }
        amps[x] += Amplitude::real(c);
    }
    QuantumState::from_amplitudes(amps)
}
