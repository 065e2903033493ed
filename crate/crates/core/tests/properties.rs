mod common;

use common::{compile, max_diff, to_mat};
use fanout_core::circuits::{Circuit, StepKind};
use fanout_core::equiv::equiv_up_to_global_phase;
use fanout_core::gates::StandardGate;
use fanout_core::hamiltonians::{build_hn, build_kn, CouplingMatrix, DenseHamiltonian};
use fanout_core::operator::{compose, max_abs_diff};
use fanout_core::report::{to_json_lines, ReportRecord};
use fanout_core::verify::{run_suite, SizeCaps};
use fanout_core::{Complex64, DenseOperator, DiagonalOperator, Operator, StateVector};
use proptest::prelude::*;

fn step_strategy(n: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    let gates = StandardGate::ALL.len();
    (0..gates + 2, Just(()).prop_perturb(move |_, mut rng| {
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, rng.random_range(0..=i));
        }
        qubits
    }))
}

fn build_circuit(n: usize, specs: &[(usize, Vec<usize>)]) -> Circuit {
    let mut c = Circuit::new(n);
    for (pick, order) in specs {
        match StandardGate::ALL.get(*pick) {
            Some(&g) => c.gate(g, &order[..g.arity()]).unwrap(),
            None if *pick == StandardGate::ALL.len() => c.push(StepKind::Un, &order[..2]).unwrap(),
            None => c.push(StepKind::UnDagger, order).unwrap(),
        };
    }
    c
}

fn random_state(n: usize, raw: &[(f64, f64)]) -> StateVector {
    let amps = raw.iter().take(1 << n).map(|&(a, b)| Complex64::new(a, b)).collect();
    StateVector::from_amplitudes(n, amps).unwrap().normalized().unwrap()
}

fn hermitian(n: usize, raw: &[(f64, f64)]) -> DenseHamiltonian {
    let dim = 1 << n;
    let a = |r: usize, c: usize| {
        let (x, y) = raw[(r * dim + c) % raw.len()];
        Complex64::new(x, y)
    };
    DenseHamiltonian::new(DenseOperator::from_fn(n, |r, c| a(r, c) + a(c, r).conj()).unwrap())
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gatewise_application_matches_compiled(
        specs in prop::collection::vec(step_strategy(3), 10),
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
    ) {
        prop_assume!(raw.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3));
        let c = build_circuit(3, &specs);
        let u = c.compile().unwrap();
        prop_assert!(max_diff(&to_mat(&u.clone().into()), &compile(&c)) < 1e-12);
        prop_assert!(u.unitarity_deviation() < 1e-12);
        let psi = random_state(3, &raw);
        let mut stepped = psi.clone();
        c.apply(&mut stepped).unwrap();
        for r in 0..8 {
            let direct: Complex64 = (0..8).map(|k| u.get(r, k) * psi.amplitude(k)).sum();
            prop_assert!((direct - stepped.amplitude(r)).norm() < 1e-12);
        }
        prop_assert!((stepped.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_dagger_inverts(specs in prop::collection::vec(step_strategy(3), 1..12)) {
        let c = build_circuit(3, &specs);
        let round = c.compile().unwrap().matmul(&c.dagger().compile().unwrap()).unwrap();
        prop_assert!(max_abs_diff(&round.into(), &DenseOperator::identity(3).unwrap().into()).unwrap() < 1e-10);
    }

    #[test]
    fn circuit_text_round_trips(specs in prop::collection::vec(step_strategy(3), 0..12)) {
        let c = build_circuit(3, &specs);
        let back: Circuit = c.to_text().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn dense_evolution_group_laws(
        n in 1usize..=4,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16..64),
        s in -3.0f64..3.0,
        t in -3.0f64..3.0,
    ) {
        let h = hermitian(n, &raw);
        let id: Operator = DenseOperator::identity(n).unwrap().into();
        let ut: Operator = h.evolve(t).unwrap().into();
        let back = compose(&ut, &h.evolve(-t).unwrap().into()).unwrap();
        prop_assert!(max_abs_diff(&back, &id).unwrap() < 1e-9);
        let sum = compose(&h.evolve(s).unwrap().into(), &ut).unwrap();
        prop_assert!(max_abs_diff(&sum, &h.evolve(s + t).unwrap().into()).unwrap() < 1e-9);
        prop_assert!(ut.unitarity_deviation() < 1e-9);
    }

    #[test]
    fn equivalence_is_phase_blind(
        specs in prop::collection::vec(step_strategy(3), 1..8),
        theta in -3.1f64..3.1,
        kick in 0.01f64..0.3,
    ) {
        let u: Operator = build_circuit(3, &specs).compile().unwrap().into();
        let rotated: Operator = match &u {
            Operator::Dense(m) => m.scale(phase(theta)).into(),
            Operator::Diagonal(_) => unreachable!(),
        };
        let r = equiv_up_to_global_phase(&u, &u, 1e-10).unwrap();
        prop_assert!(r.equivalent && (r.phase - 1.0).norm() < 1e-12);
        let fwd = equiv_up_to_global_phase(&rotated, &u, 1e-10).unwrap();
        let rev = equiv_up_to_global_phase(&u, &rotated, 1e-10).unwrap();
        prop_assert!(fwd.equivalent && rev.equivalent);
        prop_assert!((fwd.phase - phase(theta)).norm() < 1e-10);
        prop_assert!((fwd.phase * rev.phase - 1.0).norm() < 1e-10);
        // A relative phase on one basis state breaks equivalence.
        let bump: Operator = DiagonalOperator::from_fn(3, |x| if x == 5 { phase(kick) } else { Complex64::new(1.0, 0.0) })
            .unwrap()
            .into();
        let bumped = compose(&u, &bump).unwrap();
        prop_assert!(!equiv_up_to_global_phase(&bumped, &u, 1e-10).unwrap().equivalent);
    }

    #[test]
    fn energies_depend_on_weight_only(n in 2usize..=10, x in any::<u64>(), a in 0usize..10, b in 0usize..10) {
        let (a, b) = (a % n, b % n);
        let x = (x as usize) & ((1 << n) - 1);
        let swapped = if (x >> a & 1) != (x >> b & 1) { x ^ (1 << a) ^ (1 << b) } else { x };
        let hn = build_hn(n).unwrap();
        let kn = build_kn(&CouplingMatrix::uniform(n, 1.0)).unwrap();
        prop_assert_eq!(hn.energy(x), hn.energy(swapped));
        prop_assert_eq!(kn.energy(x), kn.energy(swapped));
        let complement = !x & ((1 << n) - 1);
        prop_assert_eq!(hn.energy(x), hn.energy(complement));
    }
}

#[test]
fn suite_is_deterministic() {
    let caps = SizeCaps::limited_to(6);
    let a = run_suite(None, &caps);
    let b = run_suite(None, &caps);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((&x.check_id, &x.params, x.status), (&y.check_id, &y.params, y.status));
        assert!((x.max_deviation - y.max_deviation).abs() < 1e-13);
    }
    let json = |r: &[fanout_core::CheckResult]| to_json_lines(&r.iter().map(ReportRecord::from).collect::<Vec<_>>());
    assert_eq!(json(&a), json(&b));
}
