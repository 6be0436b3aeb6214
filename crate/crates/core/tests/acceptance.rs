//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use qudit_teleport::analysis::{
    repetitions, success_probability_exact, success_probability_qubit, sweep, SweepFamily,
};
use qudit_teleport::bases::{
    bell_basis, qubit_choice_basis, qudit_nme_basis, MeasurementBasis, QubitChoice,
};
use qudit_teleport::protocol::{
    derive_correction_table, designated_probability, outcome_distribution, run_monte_carlo,
    Correction, CorrectionTable, InputSpec,
};
use qudit_teleport::states::{generalized_pauli, ResourceState, UnknownQudit};
use qudit_teleport::tensor::C64;
use qudit_teleport::verify::{run_verify, VerifyConfig};
use qudit_teleport::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIDELITY_FLOOR: f64 = 1.0 - 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

/// Minimum post-correction fidelity over designated outcomes and probes.
fn designated_min_fidelity(
    resource: &ResourceState,
    basis: &MeasurementBasis,
    table: &CorrectionTable,
    probes: &[UnknownQudit],
) -> Result<f64> {
    let d = basis.d();
    let mut min = f64::INFINITY;
    for probe in probes {
        for rec in outcome_distribution(probe, resource, basis)?
            .iter()
            .filter(|r| r.designated)
        {
            let f = match table.get(rec.index) {
                Some(Correction::Pauli(label)) => {
                    let bob = generalized_pauli(label, d).apply(&rec.bob_conditional)?;
                    probe.amplitudes().inner(&bob)?.norm_sqr()
                }
                _ => 0.0,
            };
            min = min.min(f);
        }
    }
    Ok(min)
}

fn probes(d: usize, seed: u64) -> Vec<UnknownQudit> {
    let mut v = vec![
        UnknownQudit::basis(d, 0),
        UnknownQudit::basis(d, d - 1),
        UnknownQudit::uniform(d),
    ];
    v.extend((0..5).map(|i| UnknownQudit::random(d, seed.wrapping_add(i))));
    v
}

fn random_spectrum(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

fn random_n(rng: &mut ChaCha8Rng) -> C64 {
    let r: f64 = rng.random_range(0.05..1.5);
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, theta)
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let (mut min_fid, mut max_prob_err) = (f64::INFINITY, 0.0f64);
    let mut all_succeed = true;
    for d in 2..=7 {
        let resource = ResourceState::maximal(d)?;
        let basis = bell_basis(d)?;
        let table = derive_correction_table(&resource, &basis, 4, 1)?;
        for i in 0..50 {
            let input = UnknownQudit::random(d, 1000 * d as u64 + i);
            for rec in outcome_distribution(&input, &resource, &basis)? {
                max_prob_err = max_prob_err.max((rec.probability - 1.0 / (d * d) as f64).abs());
                let fid = match table.get(rec.index) {
                    Some(Correction::Pauli(label)) => {
                        let bob = generalized_pauli(label, d).apply(&rec.bob_conditional)?;
                        input.amplitudes().inner(&bob)?.norm_sqr()
                    }
                    _ => 0.0,
                };
                min_fid = min_fid.min(fid);
            }
        }
        let mc = run_monte_carlo(
            &InputSpec::Random,
            &resource,
            &basis,
            &table,
            10_000,
            d as u64,
        )?;
        all_succeed &= mc.success_count == mc.trials;
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        min_fid >= FIDELITY_FLOOR && max_prob_err <= 1e-10 && all_succeed && secs < 30.0,
        format!(
            "min fidelity {min_fid:.15}, max |p - 1/d²| {max_prob_err:.2e}, all MC trials succeeded: {all_succeed}, {secs:.2}s"
        ),
    )
}

fn criterion_2(min_fid: &mut f64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut max_err = 0.0f64;
    for d in 2..=6 {
        for i in 0..50 {
            let resource = ResourceState::from_lambdas(&random_spectrum(d, &mut rng))?;
            let l_choice: Vec<usize> = (0..d).map(|_| rng.random_range(0..d)).collect();
            let basis = qudit_nme_basis(&resource, &l_choice)?;
            let input = UnknownQudit::random(d, rng.random());
            let enumerated =
                designated_probability(&outcome_distribution(&input, &resource, &basis)?);
            let closed: f64 = d as f64 / resource.lambdas().iter().map(|l| 1.0 / l).sum::<f64>();
            max_err = max_err.max((enumerated - closed).abs());
            if i % 10 == 0 {
                let table = derive_correction_table(&resource, &basis, 4, i)?;
                *min_fid = min_fid.min(designated_min_fidelity(
                    &resource,
                    &basis,
                    &table,
                    &probes(d, i),
                )?);
            }
        }
    }
    let specific = success_probability_exact(&ResourceState::from_lambdas(&[0.5, 0.25, 0.25])?)?;
    let specific_err = (specific - 0.3).abs();
    outcome(
        max_err <= 1e-10 && specific_err <= 1e-12,
        format!("max |enumerated - closed form| {max_err:.2e}, d=3 value {specific} (error {specific_err:.2e})"),
    )
}

fn criterion_3(min_fid: &mut f64) -> Result<Outcome> {
    let half = C64::new(0.5f64.sqrt(), 0.0);
    let p_half = success_probability_qubit(half)?;
    let value_err = (p_half - 4.0 / 9.0).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut reduction_err = 0.0f64;
    for _ in 0..100 {
        let n = random_n(&mut rng);
        let general = success_probability_exact(&ResourceState::qubit(n)?)?;
        reduction_err = reduction_err.max((general - success_probability_qubit(n)?).abs());
    }

    let resource = ResourceState::qubit(half)?;
    let basis = qubit_choice_basis(half, QubitChoice::DirectConj)?;
    let table = derive_correction_table(&resource, &basis, 4, 3)?;
    *min_fid = min_fid.min(designated_min_fidelity(
        &resource,
        &basis,
        &table,
        &probes(2, 3),
    )?);
    let trials = 100_000;
    let mc = run_monte_carlo(&InputSpec::Random, &resource, &basis, &table, trials, 2024)?;
    let sigma = (p_half * (1.0 - p_half) / trials as f64).sqrt();
    let z = (mc.empirical_p - p_half).abs() / sigma;
    outcome(
        value_err <= 1e-12 && reduction_err <= 1e-12 && z <= 3.0,
        format!(
            "P(|n|²=1/2) = {p_half:.15}, max d=2 reduction error {reduction_err:.2e}, MC {} over {trials} trials (σ {sigma:.5}, {z:.2}σ)",
            mc.empirical_p
        ),
    )
}

fn criterion_4(min_fid: &mut f64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    let mut checked = 0;
    for d in 2..=5 {
        for i in 0..5 {
            let mut lambdas = random_spectrum(d, &mut rng);
            lambdas[0] += 0.1;
            let resource = ResourceState::from_lambdas(&lambdas)?;
            let basis = qudit_nme_basis(&resource, &vec![i % d; d])?;
            let table = derive_correction_table(&resource, &basis, 4, i as u64)?;
            let ok = table.correctable_count();
            let fail = table
                .entries()
                .iter()
                .filter(|c| **c == Correction::Fail)
                .count();
            if ok != d || fail != d * d - d {
                bad.push(format!("d={d}: {ok} correctable, {fail} fail"));
            }
            *min_fid = min_fid.min(designated_min_fidelity(
                &resource,
                &basis,
                &table,
                &probes(d, 40 + i as u64),
            )?);
            checked += 1;
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} tables, each with d correctable and d²-d fail")
        } else {
            bad.join("; ")
        },
    )
}

fn criterion_5(min_fid: f64) -> Result<Outcome> {
    outcome(
        min_fid >= FIDELITY_FLOOR,
        format!("min post-correction fidelity over designated outcomes and probes {min_fid:.15}"),
    )
}

fn criterion_6() -> Result<Outcome> {
    let cfg = VerifyConfig {
        d_min: 2,
        d_max: 6,
        ..VerifyConfig::default()
    };
    let groups = [
        ("trace-orthogonality", 1e-12),
        ("basis-orthonormality", 1e-10),
        ("qubit-basis-orthonormality", 1e-10),
        ("bell-expansion", 1e-12),
        ("pauli-action", 1e-12),
        ("class-gram-uniform", 1e-10),
        ("class-gram-nonuniform", 0.0),
    ];
    let results = run_verify(&cfg)?;
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, tol) in groups {
        match results.iter().find(|r| r.group == name) {
            Some(r) => {
                let ok = r.passed && r.max_error <= tol;
                passed &= ok;
                parts.push(format!("{name} {:.1e}", r.max_error));
            }
            None => {
                passed = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    outcome(passed, parts.join(", "))
}

fn criterion_7() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut qubit_err = 0.0f64;
    for _ in 0..100 {
        let resource = ResourceState::qubit(random_n(&mut rng))?;
        let basis = qudit_nme_basis(&resource, &[0, 0])?;
        for v in basis.vectors().iter().filter(|v| v.designated) {
            qubit_err = qubit_err.max((v.entropy(2)? - resource.entropy()).abs());
        }
    }

    let resource = ResourceState::from_lambdas(&[0.5, 0.25, 0.25])?;
    let basis = qudit_nme_basis(&resource, &[0, 0, 0])?;
    let resource_bits = resource.entropy();
    let designated_bits = basis
        .vectors()
        .iter()
        .find(|v| v.designated)
        .map(|v| v.entropy(3))
        .transpose()?
        .unwrap_or(f64::NAN);
    let expected = -(0.2f64 * 0.2f64.log2() + 0.8 * 0.4f64.log2());
    let qudit_ok = (resource_bits - 1.5).abs() <= 1e-12
        && (designated_bits - expected).abs() <= 1e-10
        && (designated_bits - resource_bits).abs() > 1e-3;

    let mut rp_err = 0.0f64;
    for d in 2..=6 {
        for i in 0..20 {
            let r = ResourceState::random(d, 70 + i)?;
            rp_err = rp_err.max((repetitions(&r)? * success_probability_exact(&r)? - 1.0).abs());
        }
    }
    let rows = sweep(SweepFamily::QubitN, 2, 50, 0, 7)?;
    let decreasing = rows
        .windows(2)
        .all(|w| w[1].repetitions_r < w[0].repetitions_r);

    outcome(
        qubit_err <= 1e-10 && qudit_ok && rp_err <= 1e-12 && decreasing,
        format!(
            "d=2 entropy gap {qubit_err:.2e}; d=3 resource {resource_bits} vs designated {designated_bits:.12} bits; max |R·P - 1| {rp_err:.2e}; R decreasing: {decreasing}"
        ),
    )
}

fn criterion_8() -> Result<Outcome> {
    let bin = env!("CARGO_BIN_EXE_qudit-teleport");
    let capture = |args: &[&str]| -> Result<(Option<i32>, Vec<u8>)> {
        let o = Command::new(bin).args(args).output()?;
        Ok((o.status.code(), o.stdout))
    };
    let verify = ["verify"];
    let sweep = [
        "sweep",
        "--family",
        "dirichlet-random",
        "--d",
        "3",
        "--points",
        "10",
        "--trials",
        "2000",
        "--seed",
        "8",
    ];
    let (c1, v1) = capture(&verify)?;
    let (c2, v2) = capture(&verify)?;
    let (c3, s1) = capture(&sweep)?;
    let (c4, s2) = capture(&sweep)?;
    let codes_ok = [c1, c2, c3, c4].iter().all(|c| *c == Some(0));
    let same = v1 == v2 && s1 == s2 && !v1.is_empty() && !s1.is_empty();
    outcome(
        codes_ok && same,
        format!(
            "verify {} bytes identical: {}, sweep {} bytes identical: {}",
            v1.len(),
            v1 == v2,
            s1.len(),
            s1 == s2
        ),
    )
}

fn main() {
    let mut min_fid = f64::INFINITY;
    let results = [
        ("1 standard protocol", criterion_1()),
        ("2 success probability", criterion_2(&mut min_fid)),
        ("3 qubit reduction", criterion_3(&mut min_fid)),
        ("4 d-of-d² structure", criterion_4(&mut min_fid)),
        ("5 unit fidelity on success", criterion_5(min_fid)),
        ("6 algebraic identities", criterion_6()),
        ("7 entanglement accounting", criterion_7()),
        ("8 determinism", criterion_8()),
    ];
    let mut failures = 0;
    for (name, r) in results {
        let (passed, detail) = match r {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "[{}] criterion {name}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {}/8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
