use qudit_teleport::analysis::{success_probability_exact, success_probability_qubit};
use qudit_teleport::bases::{qubit_choice_basis, qudit_nme_basis, QubitChoice};
use qudit_teleport::protocol::{
    derive_correction_table, outcome_distribution, run_monte_carlo, run_trials, InputSpec,
};
use qudit_teleport::states::{ResourceState, UnknownQudit};
use qudit_teleport::tensor::C64;

#[test]
fn sampled_outcomes_follow_born_rule() {
    let d = 3;
    let resource = ResourceState::from_lambdas(&[0.5, 0.3, 0.2]).unwrap();
    let basis = qudit_nme_basis(&resource, &[0, 1, 2]).unwrap();
    let table = derive_correction_table(&resource, &basis, 4, 11).unwrap();
    let input = UnknownQudit::random(d, 99);
    let probs: Vec<f64> = outcome_distribution(&input, &resource, &basis)
        .unwrap()
        .iter()
        .map(|r| r.probability)
        .collect();
    let trials = 20_000;
    let runs = run_trials(
        &InputSpec::Fixed(input),
        &resource,
        &basis,
        &table,
        trials,
        5,
    )
    .unwrap();
    let mut counts = vec![0usize; d * d];
    for t in &runs {
        counts[t.outcome] += 1;
    }
    for (k, &p) in probs.iter().enumerate() {
        let freq = counts[k] as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt().max(1e-9);
        assert!(
            (freq - p).abs() <= 4.0 * sigma,
            "outcome {k}: {freq} vs {p}"
        );
    }
}

#[test]
fn qubit_monte_carlo_matches_four_ninths() {
    let n = C64::new(0.5f64.sqrt(), 0.0);
    let resource = ResourceState::qubit(n).unwrap();
    let exact = success_probability_qubit(n).unwrap();
    assert!((exact - 4.0 / 9.0).abs() < 1e-12);
    for choice in QubitChoice::ALL {
        let basis = qubit_choice_basis(n, choice).unwrap();
        let table = derive_correction_table(&resource, &basis, 4, 3).unwrap();
        assert_eq!(table.correctable_count(), 2);
        let s = run_monte_carlo(&InputSpec::Random, &resource, &basis, &table, 20_000, 17).unwrap();
        let sigma = (exact * (1.0 - exact) / 20_000.0).sqrt();
        assert!(
            (s.empirical_p - exact).abs() <= 3.0 * sigma,
            "{choice:?}: {}",
            s.empirical_p
        );
        assert_eq!(s.mean_fidelity_on_success, Some(1.0));
    }
}

#[test]
fn runs_are_reproducible_and_seed_sensitive() {
    let resource = ResourceState::random(4, 8).unwrap();
    let basis = qudit_nme_basis(&resource, &[0; 4]).unwrap();
    let table = derive_correction_table(&resource, &basis, 4, 1).unwrap();
    let a = run_trials(&InputSpec::Random, &resource, &basis, &table, 200, 42).unwrap();
    let b = run_trials(&InputSpec::Random, &resource, &basis, &table, 200, 42).unwrap();
    let c = run_trials(&InputSpec::Random, &resource, &basis, &table, 200, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn heralded_success_is_exact_on_every_designated_outcome() {
    for d in 2..=5 {
        let resource = ResourceState::random(d, d as u64).unwrap();
        let basis = qudit_nme_basis(&resource, &vec![1; d]).unwrap();
        let table = derive_correction_table(&resource, &basis, 4, 0).unwrap();
        let runs = run_trials(&InputSpec::Random, &resource, &basis, &table, 500, 9).unwrap();
        for t in runs.iter().filter(|t| t.designated) {
            assert!(t.success && t.fidelity >= 1.0 - 1e-10);
        }
        let p = runs.iter().filter(|t| t.success).count() as f64 / 500.0;
        let exact = success_probability_exact(&resource).unwrap();
        assert!((p - exact).abs() <= 4.0 * (exact * (1.0 - exact) / 500.0).sqrt() + 1e-12);
    }
}
