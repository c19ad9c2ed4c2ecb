//! Table and JSON renderings of distributions and reports.

use serde::Serialize;
use serde_json::Value;

use qpp_core::algorithms::AlgorithmReport;
use qpp_core::semantics::{Counterexample, Distribution, EvalResult, RefinementReport, Time};
use qpp_core::{Amplitude, QuantumState};

/// `p` with 10 significant digits: fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn sig10(p: f64) -> String {
    if p == 0.0 {
        return "0".into();
    }
    if !p.is_finite() {
        return format!("{p}");
    }
    let sci = format!("{p:.9e}");
    let exp: i32 = sci.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..10).contains(&exp) {
        format!("{:.*}", (9 - exp).max(0) as usize, p)
    } else {
        sci
    }
}

fn amplitude(a: Amplitude) -> String {
    const TINY: f64 = 1e-15;
    match (a.re.abs() > TINY, a.im.abs() > TINY) {
        (_, false) => sig10(a.re),
        (false, true) => format!("{}i", sig10(a.im)),
        (true, true) => {
            let sign = if a.im < 0.0 { '-' } else { '+' };
            format!("({}{sign}{}i)", sig10(a.re), sig10(a.im.abs()))
        }
    }
}

/// `a|x⟩ + b|y⟩ + …` over the amplitudes that are not rounding noise.
pub fn ket(q: &QuantumState) -> String {
    let n = q.n_qubits();
    let terms: Vec<String> = q
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 1e-24)
        .map(|(x, a)| format!("{}|{x:0n$b}>", amplitude(*a)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&width).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            s.push_str(&" ".repeat(w - c.chars().count()));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(headers);
    for r in rows {
        line(r);
    }
    out
}

fn time_text(t: Option<Time>) -> String {
    t.map_or("-".into(), |t| t.to_string())
}

pub fn dist_table(d: &Distribution) -> String {
    let schema = d.schema();
    let mut headers: Vec<String> = schema.vars().iter().map(|v| format!("{}'", v.name)).collect();
    let show_q = d.iter().any(|(s, _)| s.quantum.is_some());
    if show_q {
        headers.push(format!("{}'", schema.register().map_or("psi", |r| r.0)));
    }
    let show_t = d.iter().any(|(s, _)| s.time.is_some());
    if show_t {
        headers.push("t'".into());
    }
    headers.push("p".into());
    let rows: Vec<Vec<String>> = d
        .iter()
        .map(|(s, p)| {
            let mut row: Vec<String> = s.classical.iter().map(|v| v.to_string()).collect();
            if show_q {
                row.push(s.quantum.as_ref().map_or("-".into(), ket));
            }
            if show_t {
                row.push(time_text(s.time));
            }
            row.push(sig10(p));
            row
        })
        .collect();
    table(&headers, &rows)
}

/// Mass that is not part of the distribution, one line per kind.
pub fn mass_footer(r: &EvalResult) -> String {
    let mut out = String::new();
    for (name, m) in [
        ("nonterminating mass (t' = inf)", r.nonterminating_mass),
        ("mass dropped below 1e-12", r.dropped_mass),
        ("mass pruned below 1e-30", r.pruned_mass),
    ] {
        if m > 0.0 {
            out.push_str(&format!("{name}: {}\n", sig10(m)));
        }
    }
    out
}

/// The summary record of an algorithm run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportJson {
    pub algorithm: String,
    pub n: usize,
    pub cases_checked: usize,
    pub max_abs_error: f64,
    pub oracle_calls: u64,
    pub pass: bool,
}

impl From<&AlgorithmReport> for ReportJson {
    fn from(r: &AlgorithmReport) -> Self {
        ReportJson {
            algorithm: r.algorithm.clone(),
            n: r.n,
            cases_checked: r.cases_checked,
            max_abs_error: r.max_abs_error,
            oracle_calls: r.oracle_calls,
            pass: r.pass,
        }
    }
}

pub fn reports_table(reports: &[AlgorithmReport]) -> String {
    let headers: Vec<String> = ["algorithm", "n", "cases", "max_abs_error", "oracle_calls", "pass"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.algorithm.clone(),
                r.n.to_string(),
                r.cases_checked.to_string(),
                format!("{:.3e}", r.max_abs_error),
                r.oracle_calls.to_string(),
                r.pass.to_string(),
            ]
        })
        .collect();
    table(&headers, &rows)
}

#[derive(Serialize)]
struct CounterexampleJson<'a> {
    prestate: &'a str,
    poststate: &'a str,
    spec_value: f64,
    program_value: f64,
}

impl<'a> From<&'a Counterexample> for CounterexampleJson<'a> {
    fn from(c: &'a Counterexample) -> Self {
        CounterexampleJson {
            prestate: &c.prestate,
            poststate: &c.poststate,
            spec_value: c.spec_value,
            program_value: c.program_value,
        }
    }
}

pub fn refinement_json(r: &RefinementReport) -> Value {
    let ces: Vec<CounterexampleJson> = r.counterexamples.iter().map(Into::into).collect();
    serde_json::json!({
        "holds": r.holds,
        "prestates_checked": r.prestates_checked,
        "window": r.window,
        "max_abs_error": r.max_abs_error,
        "nonterminating_prestates": r.nonterminating_prestates,
        "counterexamples": ces,
        "notes": r.notes,
    })
}

pub fn counterexample_line(c: &Counterexample) -> String {
    format!(
        "counterexample: from {} to {}: specification {} but program {}",
        c.prestate,
        c.poststate,
        sig10(c.spec_value),
        sig10(c.program_value)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig10(1.0), "1.000000000");
        assert_eq!(sig10(0.5), "0.5000000000");
        assert_eq!(sig10(0.9613428), "0.9613428000");
        assert_eq!(sig10(0.99999999999), "1.000000000");
        assert_eq!(sig10(123.0), "123.0000000");
        assert_eq!(sig10(1e-7), "1.000000000e-7");
        assert_eq!(sig10(0.0), "0");
        assert_eq!(sig10(-0.0), "0");
    }

    #[test]
    fn aligned_table() {
        let t = table(
            &["a".into(), "long".into()],
            &[vec!["xyz".into(), "1".into()], vec!["q".into(), "22".into()]],
        );
        assert_eq!(t, "a    long\nxyz  1\nq    22\n");
    }

    #[test]
    fn kets() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let q = QuantumState::from_amplitudes(vec![Amplitude::real(h), Amplitude::new(0.0, -h)]).unwrap();
        assert_eq!(ket(&q), "0.7071067812|0> + -0.7071067812i|1>");
    }
}
