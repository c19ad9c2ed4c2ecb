mod common;

use common::{random_state, rng};
use qpp_core::algorithms::{
    classical_one_query_fails, deutsch_jozsa_classical, deutsch_jozsa_quantum, grover_optimal_iterations, grover_run,
    mixed_state_demos, probabilistic_walk, GroverAnalysis, OracleFunction,
};
use qpp_core::semantics::{Scalar, Time};
use rand::Rng;

/// Every balanced table on `n` bits, by brute force over all tables.
fn balanced_tables(n: usize) -> Vec<Vec<bool>> {
    let size = 1usize << n;
    (0u32..1 << size)
        .filter(|m| m.count_ones() as usize == size / 2)
        .map(|m| (0..size).map(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn deutsch_jozsa_exhaustive() {
    for (n, balanced) in [(1, 2), (2, 6), (3, 70)] {
        let tables = balanced_tables(n);
        assert_eq!(tables.len(), balanced);
        assert_eq!(binom(1 << n, 1 << (n - 1)) as usize, balanced);
        let mut fs: Vec<OracleFunction> = tables.into_iter().map(|t| OracleFunction::new(t).unwrap()).collect();
        fs.push(OracleFunction::constant(n, false).unwrap());
        fs.push(OracleFunction::constant(n, true).unwrap());
        for f in &fs {
            // ⟨0|H U_f H|0⟩ = Σ(−1)^{f x} / N.
            let amp = f.table().iter().map(|&b| if b { -1.0 } else { 1.0 }).sum::<f64>() / (1 << n) as f64;
            let q = deutsch_jozsa_quantum(f).unwrap();
            let r = q.dist.schema().index_of("r").unwrap();
            let p0 = q.dist.probability(|s| s.classical[r] == Scalar::Int(0));
            assert!((p0 - amp * amp).abs() <= 1e-12);
            assert!(q.p_correct >= 1.0 - 1e-9);
            assert_eq!(q.oracle_calls, 1);
            let c = deutsch_jozsa_classical(f).unwrap();
            assert_eq!(c.constant, f.is_constant());
            assert_eq!(c.oracle_calls, (1 << (n - 1)) + 1);
        }
    }
    assert!(classical_one_query_fails().unwrap());
}

#[test]
fn deutsch_jozsa_rejects_broken_promise() {
    for bits in ["0001", "0111", "00000001"] {
        let f = OracleFunction::from_bits(bits).unwrap();
        assert!(deutsch_jozsa_quantum(&f).is_err());
        assert!(deutsch_jozsa_classical(&f).is_err());
    }
}

/// Plain real-vector Grover iteration.
fn grover_reference(n: usize, x1: usize, k: u64) -> Vec<f64> {
    let big_n = 1usize << n;
    let mut a = vec![1.0 / (big_n as f64).sqrt(); big_n];
    for _ in 0..k {
        a[x1] = -a[x1];
        let mean = a.iter().sum::<f64>() / big_n as f64;
        for v in &mut a {
            *v = 2.0 * mean - *v;
        }
    }
    a.iter().map(|v| v * v).collect()
}

#[test]
fn grover_matches_reference_and_closed_form() {
    let mut r = rng(31);
    for n in 2..=6 {
        let big_n = 1usize << n;
        let a = GroverAnalysis::new(n).unwrap();
        let opt = grover_optimal_iterations(big_n as u64).unwrap();
        for _ in 0..3 {
            let x1 = r.gen_range(0..big_n);
            for k in 0..=2 * opt.k_opt {
                let d = grover_run(&OracleFunction::point(n, x1).unwrap(), k).unwrap();
                assert!(d.iter().all(|(s, _)| s.time == Some(Time::Finite(k))));
                let sim = d.values_of("r").unwrap();
                let reference = grover_reference(n, x1, k);
                let closed = (((2 * k + 1) as f64) * (1.0 / big_n as f64).sqrt().asin())
                    .sin()
                    .powi(2);
                assert!((a.p_success(k) - closed).abs() <= 1e-12);
                for (v, p) in &sim {
                    let Scalar::Int(x) = v else { panic!("r is an integer") };
                    assert!((p - reference[*x as usize]).abs() <= 1e-9, "n={n} k={k}");
                }
                let hit = sim
                    .iter()
                    .find(|(v, _)| *v == Scalar::Int(x1 as i64))
                    .map_or(0.0, |e| e.1);
                assert!((hit - closed).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn grover_worked_values() {
    let d = grover_run(&OracleFunction::point(2, 3).unwrap(), 1).unwrap();
    assert!((d.probability(|s| s.classical[0] == Scalar::Int(3)) - 1.0).abs() <= 1e-9);
    let d = grover_run(&OracleFunction::point(4, 5).unwrap(), 3).unwrap();
    let p = d.probability(|s| s.classical[0] == Scalar::Int(5));
    assert!((p - (7.0 * 0.25f64.asin()).sin().powi(2)).abs() <= 1e-9);
    assert!((p - 0.9613).abs() < 5e-5);
    // One bit with one solution is balanced, so searches start at two bits.
    assert!(grover_run(&OracleFunction::point(1, 0).unwrap(), 0).is_err());
    for n in 2..=5 {
        let d = grover_run(&OracleFunction::point(n, 0).unwrap(), 0).unwrap();
        let p = d.probability(|s| s.classical[0] == Scalar::Int(0));
        assert!((p - 1.0 / (1 << n) as f64).abs() <= 1e-12);
    }
    assert!(grover_run(&OracleFunction::from_bits("0110").unwrap(), 1).is_err());
}

#[test]
fn grover_optimum_by_enumeration() {
    for n in 1..=10 {
        let big_n = 1u64 << n;
        let theta = (1.0 / big_n as f64).sqrt().asin();
        let p = |k: u64| (((2 * k + 1) as f64) * theta).sin().powi(2);
        let o = grover_optimal_iterations(big_n).unwrap();
        // The best k over the first quarter period, ties to the smaller.
        let best =
            (0..=(std::f64::consts::PI / (2.0 * theta)) as u64 + 1)
                .fold(0, |b, k| if p(k) > p(b) + 1e-15 { k } else { b });
        assert_eq!(o.k_opt, best, "N={big_n}");
        assert!((o.p_opt - p(best)).abs() <= 1e-12);
        assert_eq!(
            o.k_approx,
            (std::f64::consts::PI * (big_n as f64).sqrt() / 4.0).ceil() as u64
        );
        if n >= 4 {
            assert!(1.0 - o.p_opt <= 2.0 / big_n as f64, "N={big_n}");
        }
    }
    let o = grover_optimal_iterations(4).unwrap();
    assert_eq!((o.k_opt, (o.p_opt * 1e9).round() / 1e9), (1, 1.0));
    assert_eq!(grover_optimal_iterations(2).unwrap().k_opt, 0);
    assert_eq!(grover_optimal_iterations(1024).unwrap().k_approx, 26);
    assert!(grover_optimal_iterations(12).is_err());
}

/// Distribution of stopping times by dynamic programming over `x`.
fn walk_reference(x0: usize, k_max: usize) -> Vec<f64> {
    let mut alive = vec![0.0; x0 + 1];
    alive[x0] = 1.0;
    let mut stop = vec![0.0; k_max + 1];
    stop[0] = alive[0];
    alive[0] = 0.0;
    for slot in stop.iter_mut().skip(1) {
        let mut next = vec![0.0; x0 + 1];
        for x in 1..=x0 {
            next[x] += alive[x] / 2.0;
            next[x - 1] += alive[x] / 2.0;
        }
        *slot = next[0];
        next[0] = 0.0;
        alive = next;
    }
    stop
}

#[test]
fn walk_matches_negative_binomial() {
    for x0 in 0..=6u64 {
        let r = probabilistic_walk(x0, 4 * x0 + 64 + 80).unwrap();
        let reference = walk_reference(x0 as usize, 80);
        for (k, want) in reference.iter().enumerate() {
            let got = r.dist.probability(|s| s.time == Some(Time::Finite(k as u64)));
            assert!((got - want).abs() <= 1e-9, "x0={x0} k={k}");
            if x0 > 0 && k as u64 >= x0 {
                assert!((want - binom(k as u64 - 1, x0 - 1) / 2f64.powi(k as i32)).abs() <= 1e-12);
            }
        }
        assert!(r.dist.iter().all(|(s, _)| s.classical[0] == Scalar::Int(0)));
        let mean = r.dist.expectation(|s| match s.time {
            Some(Time::Finite(t)) => t as f64,
            _ => f64::INFINITY,
        });
        assert!((mean - 2.0 * x0 as f64).abs() <= 1e-6, "x0={x0} mean={mean}");
    }
}

#[test]
fn mixed_state_identities() {
    let mut r = rng(37);
    let states: Vec<_> = (0..100)
        .map(|_| {
            let n = r.gen_range(1..=3);
            random_state(&mut r, n)
        })
        .collect();
    let report = mixed_state_demos(&states).unwrap();
    for c in &report.checks {
        assert!(c.pass && c.distance <= 1e-12, "{}: {}", c.name, c.distance);
    }
    assert_eq!(report.checks[2].cases, 100);
}
