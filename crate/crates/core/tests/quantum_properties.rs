mod common;

use common::{max_diff, random_state, random_table, random_unitary, random_vector, rng};
use qpp_core::qmeasure::{
    measure_computational, measure_general, measure_in_basis, measure_observable, Basis, MeasurementCollection,
    Observable,
};
use qpp_core::qops::Operator;
use qpp_core::{Amplitude, Matrix, QuantumState};

fn exported_operators(n: usize, seed: u64) -> Vec<(String, Operator)> {
    let mut r = rng(seed);
    let mut ops = vec![
        ("identity".to_string(), Operator::identity(n).unwrap()),
        ("hadamard".to_string(), Operator::hadamard_all(n).unwrap()),
        (
            "oracle".to_string(),
            Operator::phase_oracle(random_table(&mut r, n)).unwrap(),
        ),
        ("invmean".to_string(), Operator::inversion_about_mean(n).unwrap()),
    ];
    let h = Operator::hadamard_all(n).unwrap();
    let m = Operator::inversion_about_mean(n).unwrap();
    ops.push(("composed".to_string(), Operator::compose(&m, &h).unwrap()));
    if n >= 2 {
        let a = Operator::hadamard_all(1).unwrap();
        let b = Operator::inversion_about_mean(n - 1).unwrap();
        ops.push(("tensor".to_string(), Operator::tensor(&a, &b).unwrap()));
    }
    if n <= 4 {
        ops.push(("dense".to_string(), random_unitary(&mut r, n)));
    }
    ops
}

#[test]
fn operators_preserve_norm() {
    for n in 1..=5 {
        let mut r = rng(100 + n as u64);
        for (name, op) in exported_operators(n, n as u64) {
            for _ in 0..100 {
                let psi = random_state(&mut r, n);
                let out = op.apply(&psi).unwrap();
                assert!((out.norm_sqr() - 1.0).abs() <= 1e-9, "{name} on {n} qubits");
            }
        }
    }
}

#[test]
fn operators_are_linear() {
    let mut r = rng(7);
    for n in 1..=4 {
        for (name, op) in exported_operators(n, 50 + n as u64) {
            for _ in 0..20 {
                let (u, v) = (random_vector(&mut r, 1 << n), random_vector(&mut r, 1 << n));
                let (a, b) = (Amplitude::new(0.3, -1.2), Amplitude::new(-0.7, 0.4));
                let mix: Vec<Amplitude> = u.iter().zip(&v).map(|(x, y)| a * *x + b * *y).collect();
                let lhs = op.apply_vector(&mix).unwrap();
                let (fu, fv) = (op.apply_vector(&u).unwrap(), op.apply_vector(&v).unwrap());
                let rhs: Vec<Amplitude> = fu.iter().zip(&fv).map(|(x, y)| a * *x + b * *y).collect();
                assert!(max_diff(&lhs, &rhs) <= 1e-9, "{name}");
            }
        }
    }
}

#[test]
fn structured_forms_match_dense() {
    let mut r = rng(11);
    for n in 1..=4 {
        let dim = 1usize << n;
        let norm = 1.0 / (dim as f64).sqrt();
        // Entry (y, x) of H^{⊗n} is (−1)^{x·y}/√N.
        let h = Matrix::from_fn(dim, |y, x| {
            Amplitude::real(if qpp_core::qops::bit_dot(x, y) == 1 {
                -norm
            } else {
                norm
            })
        });
        let table = random_table(&mut r, n);
        let f = Matrix::from_fn(dim, |y, x| {
            if x != y {
                Amplitude::ZERO
            } else if table[x] {
                Amplitude::real(-1.0)
            } else {
                Amplitude::ONE
            }
        });
        // 2/N everywhere, minus 1 on the diagonal.
        let m = Matrix::from_fn(dim, |y, x| {
            Amplitude::real(2.0 / dim as f64 - if x == y { 1.0 } else { 0.0 })
        });
        let cases = [
            (Operator::hadamard_all(n).unwrap(), h),
            (Operator::phase_oracle(table).unwrap(), f),
            (Operator::inversion_about_mean(n).unwrap(), m),
        ];
        for (op, dense) in cases {
            assert!(op.to_dense().unwrap().max_distance(&dense).unwrap() <= 1e-10);
            let d = Operator::dense(dense).unwrap();
            for _ in 0..10 {
                let psi = random_state(&mut r, n);
                let a = op.apply(&psi).unwrap();
                let b = d.apply(&psi).unwrap();
                assert!(a.max_distance(&b).unwrap() <= 1e-10);
            }
            assert!(op.is_unitary(1e-10).unwrap());
        }
    }
}

#[test]
fn adjoint_moves_across_inner_product() {
    let mut r = rng(13);
    for n in 1..=3 {
        for (name, op) in exported_operators(n, 70 + n as u64) {
            let adj = op.adjoint();
            for _ in 0..20 {
                let (psi, phi) = (random_state(&mut r, n), random_state(&mut r, n));
                let lhs = psi.inner(&op.apply(&phi).unwrap()).unwrap();
                let rhs = adj.apply(&psi).unwrap().inner(&phi).unwrap();
                assert!((lhs - rhs).abs() <= 1e-9, "{name}");
            }
            let back = adj.adjoint();
            let (a, b) = (back.to_dense().unwrap(), op.to_dense().unwrap());
            assert!(a.max_distance(&b).unwrap() <= 1e-12);
        }
    }
}

#[test]
fn tensor_op_acts_factorwise() {
    let mut r = rng(17);
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let u = random_unitary(&mut r, m);
        let v = random_unitary(&mut r, n);
        let uv = Operator::tensor(&u, &v).unwrap();
        for _ in 0..10 {
            let (psi, phi) = (random_state(&mut r, m), random_state(&mut r, n));
            let lhs = uv.apply(&psi.tensor(&phi).unwrap()).unwrap();
            let rhs = u.apply(&psi).unwrap().tensor(&v.apply(&phi).unwrap()).unwrap();
            assert!(lhs.max_distance(&rhs).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn grover_iteration_is_a_rotation() {
    for n in 1..=6usize {
        let big_n = 1usize << n;
        let theta = (1.0 / big_n as f64).sqrt().asin();
        for x1 in [0, big_n / 2, big_n - 1] {
            let mut table = vec![false; big_n];
            table[x1] = true;
            let step = Operator::compose(
                &Operator::inversion_about_mean(n).unwrap(),
                &Operator::phase_oracle(table).unwrap(),
            )
            .unwrap();
            let mut psi = Operator::hadamard_all(n)
                .unwrap()
                .apply(&QuantumState::zero(n).unwrap())
                .unwrap();
            for j in 0..=20 {
                let angle = (2 * j + 1) as f64 * theta;
                let hit = psi.amplitude(x1);
                assert!((hit - Amplitude::real(angle.sin())).abs() <= 1e-9, "n={n} j={j}");
                if big_n > 1 {
                    let other = Amplitude::real(angle.cos() / ((big_n - 1) as f64).sqrt());
                    for x in (0..big_n).filter(|&x| x != x1) {
                        assert!((psi.amplitude(x) - other).abs() <= 1e-9);
                    }
                }
                psi = step.apply(&psi).unwrap();
            }
        }
    }
}

#[test]
fn measurement_specialization_chain() {
    let mut r = rng(19);
    for n in 1..=3 {
        let dim = 1usize << n;
        let projectors: Vec<Matrix> = (0..dim)
            .map(|m| {
                let mut p = Matrix::zeros(dim);
                p.set(m, m, Amplitude::ONE);
                p
            })
            .collect();
        let general = MeasurementCollection::new(projectors.clone()).unwrap();
        let observable =
            Observable::new(projectors.into_iter().enumerate().map(|(i, p)| (i as f64, p)).collect()).unwrap();
        let basis = Basis::computational(n).unwrap();
        for _ in 0..100 {
            let psi = random_state(&mut r, n);
            let a = measure_general(&general, &psi).unwrap();
            let b = measure_observable(&observable, &psi).unwrap();
            let c = measure_in_basis(&basis, &psi).unwrap();
            let d = measure_computational(&psi);
            // Projective forms leave P_m ψ / √p, which is |m⟩ up to a phase.
            assert!(a.distance(&b) <= 1e-10);
            assert!(b.distance_modulo_phase(&c) <= 1e-10);
            assert!(c.distance(&d) <= 1e-10);
            for dist in [&a, &b, &c, &d] {
                assert!((dist.total_probability() - 1.0).abs() <= 1e-9);
                for e in &dist.entries {
                    assert!((e.post_state.norm_sqr() - 1.0).abs() <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn state_algebra() {
    let mut r = rng(23);
    for _ in 0..50 {
        let (a, b, c) = (
            random_state(&mut r, 1),
            random_state(&mut r, 2),
            random_state(&mut r, 1),
        );
        let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        assert!(left.approx_eq(&right, 1e-12).unwrap());
        let (p, q) = (random_state(&mut r, 3), random_state(&mut r, 3));
        let pq = p.inner(&q).unwrap();
        assert!((pq - q.inner(&p).unwrap().conj()).abs() <= 1e-12);
        assert!(pq.abs() <= 1.0 + 1e-9);
    }
}

#[test]
fn general_measurement_with_fewer_operators_is_padded() {
    // {|0⟩⟨0| ⊗ I, |1⟩⟨1| ⊗ I} on two qubits: measures the high qubit.
    let p0 = Matrix::from_fn(4, |r, c| {
        if r == c && r < 2 {
            Amplitude::ONE
        } else {
            Amplitude::ZERO
        }
    });
    let p1 = Matrix::from_fn(4, |r, c| {
        if r == c && r >= 2 {
            Amplitude::ONE
        } else {
            Amplitude::ZERO
        }
    });
    let m = MeasurementCollection::new(vec![p0, p1]).unwrap();
    assert_eq!(m.operators().len(), 4);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = QuantumState::from_real(&[h, 0.0, 0.0, h]).unwrap();
    let d = measure_general(&m, &bell).unwrap();
    assert!((d.probability_of(0) - 0.5).abs() < 1e-12);
    assert!((d.probability_of(1) - 0.5).abs() < 1e-12);
    assert!(d.entries[1]
        .post_state
        .approx_eq(&QuantumState::basis(3, 2).unwrap(), 1e-12)
        .unwrap());
}
