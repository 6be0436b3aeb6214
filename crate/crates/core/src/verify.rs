//! Invariant suite run by the `verify` command.
//!
//! Each group reports the largest deviation it observed against a tolerance.
//! Threshold groups (where a quantity must stay *above* a floor) report the
//! shortfall below that floor, so zero means satisfied.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::analysis::{
    designated_spectrum, entanglement_comparison, per_outcome_probability, repetitions,
    success_probability_exact, success_probability_qubit,
};
use crate::bases::{
    bell_basis, bell_expand, designated_class_gram, qubit_choice_basis, qubit_nme_basis,
    qudit_nme_basis, BasisKind, MeasurementBasis, QubitChoice,
};
use crate::error::{Error, Result};
use crate::protocol::{
    derive_correction_table, derive_seed, designated_probability, outcome_distribution, Correction,
};
use crate::states::{generalized_pauli, PauliLabel, ResourceState, UnknownQudit};
use crate::tensor::{root_of_unity, ComplexMat, ComplexVec, C64, EQ_TOL};

pub const MAX_VERIFY_D: usize = 12;
/// Minimum off-diagonal magnitude expected from a non-uniform spectrum.
pub const OBSTRUCTION_FLOOR: f64 = 1e-3;
/// Minimum entropy gap expected between resource and measurement vectors at d ≥ 3.
pub const MISMATCH_FLOOR: f64 = 1e-3;

const RANDOM_RESOURCES: u64 = 50;
const RANDOM_INPUTS: u64 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub d_min: usize,
    pub d_max: usize,
    /// Replaces every group's default tolerance when set.
    pub tolerance: Option<f64>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            d_min: 2,
            d_max: 6,
            tolerance: None,
            seed: 20_240_601,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub group: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

struct Checks<'a> {
    cfg: &'a VerifyConfig,
    out: Vec<CheckResult>,
}

impl Checks<'_> {
    fn record(&mut self, group: &'static str, max_error: f64, default_tol: f64) {
        let tolerance = self.cfg.tolerance.unwrap_or(default_tol);
        self.out.push(CheckResult {
            group,
            max_error,
            tolerance,
            passed: max_error.is_finite() && max_error <= tolerance,
        });
    }
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Runs every invariant group over `cfg.d_min..=cfg.d_max`.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    if cfg.d_min < 2 || cfg.d_max < cfg.d_min || cfg.d_max > MAX_VERIFY_D {
        return Err(Error::Config(format!(
            "dimension range {}..{} must lie within 2..{MAX_VERIFY_D}",
            cfg.d_min, cfg.d_max
        )));
    }
    let dims: Vec<usize> = (cfg.d_min..=cfg.d_max).collect();
    let mut checks = Checks {
        cfg,
        out: Vec::new(),
    };

    checks.record("bell-expansion", bell_expansion_error(&dims)?, 1e-12);
    checks.record(
        "trace-orthogonality",
        trace_orthogonality_error(&dims),
        1e-12,
    );
    checks.record(
        "basis-orthonormality",
        basis_orthonormality_error(&dims, cfg.seed)?,
        EQ_TOL,
    );
    checks.record("pauli-action", pauli_action_error(&dims, cfg.seed)?, 1e-12);

    let protocol = protocol_errors(&dims, cfg.seed)?;
    checks.record("conditional-state", protocol.conditional, 1e-9);
    checks.record("success-probability", protocol.probability, EQ_TOL);
    checks.record("unit-fidelity", protocol.fidelity, EQ_TOL);
    checks.record("heralded-count", protocol.count, 0.0);

    let (uniform, nonuniform, closed_form) = obstruction_errors(&dims, cfg.seed)?;
    checks.record("class-gram-closed-form", closed_form, 1e-12);
    checks.record("class-gram-uniform", uniform, EQ_TOL);
    checks.record("class-gram-nonuniform", nonuniform, 0.0);

    let (mismatch, reps) = entanglement_and_repetitions(&dims, cfg.seed)?;
    if dims.iter().any(|&d| d >= 3) {
        checks.record("entanglement-mismatch-qudit", mismatch, 0.0);
    }
    checks.record("repetitions", reps, 1e-12);

    if dims.contains(&2) {
        let q = qubit_errors(cfg.seed)?;
        checks.record("qubit-basis-orthonormality", q.orthonormality, 1e-12);
        checks.record("qubit-probability", q.probability, 1e-12);
        checks.record("qubit-entanglement-match", q.entanglement, EQ_TOL);
        checks.record("qubit-correction-patterns", q.patterns, 0.0);
    }
    Ok(checks.out)
}

/// Human-readable report, one line per group plus a summary line.
pub fn format_report(cfg: &VerifyConfig, results: &[CheckResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verify d={}..{} seed={}", cfg.d_min, cfg.d_max, cfg.seed);
    for r in results {
        let _ = writeln!(
            s,
            "[{}] {:<30} max_error={:.3e} tolerance={:.1e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.group,
            r.max_error,
            r.tolerance
        );
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "summary: {passed}/{} groups passed", results.len());
    s
}

fn bell_expansion_error(dims: &[usize]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &d in dims {
        let basis = bell_basis(d)?;
        for i in 0..d {
            for j in 0..d {
                let coeffs = bell_expand(i, j, d)?;
                let mut recon = ComplexVec::zeros(d * d);
                for (c, v) in coeffs.iter().zip(basis.vectors()) {
                    for k in 0..d * d {
                        recon[k] += c * v.ket[k];
                    }
                }
                worst = worst.max(recon.distance(&ComplexVec::basis(d * d, i * d + j))?);
            }
        }
    }
    Ok(worst)
}

fn trace_orthogonality_error(dims: &[usize]) -> f64 {
    max_of(dims.iter().map(|&d| {
        let ops: Vec<(PauliLabel, ComplexMat)> = PauliLabel::all(d)
            .map(|l| (l, generalized_pauli(l, d)))
            .collect();
        max_of(
            ops.par_iter()
                .map(|(la, a)| {
                    max_of(ops.iter().map(|(lb, b)| {
                        let tr = a.adjoint().matmul(b).expect("square").trace();
                        let expected = if la == lb { d as f64 } else { 0.0 };
                        (tr - C64::new(expected, 0.0)).norm()
                    }))
                })
                .collect::<Vec<_>>()
                .into_iter(),
        )
    }))
}

fn sample_bases(d: usize, seed: u64) -> Result<Vec<MeasurementBasis>> {
    let mut out = vec![bell_basis(d)?];
    for i in 0..10 {
        let r = ResourceState::random(d, derive_seed(seed, 1000 * d as u64 + i))?;
        let l_choice: Vec<usize> = (0..d).map(|m| (m * (i as usize + 1)) % d).collect();
        out.push(qudit_nme_basis(&r, &l_choice)?);
    }
    out.push(qudit_nme_basis(&ResourceState::maximal(d)?, &vec![0; d])?);
    Ok(out)
}

fn basis_orthonormality_error(dims: &[usize], seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for &d in dims {
        for b in sample_bases(d, seed)? {
            worst = worst.max(b.gram_error()).max(b.resolution_error());
            if b.vectors().iter().any(|v| !v.within_class(d)) {
                return Ok(f64::INFINITY);
            }
        }
    }
    Ok(worst)
}

fn pauli_action_error(dims: &[usize], seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for &d in dims {
        for s in 0..10 {
            let psi = UnknownQudit::random(d, derive_seed(seed ^ 0x19, (d * 100 + s) as u64));
            let a = psi.amplitudes();
            for label in PauliLabel::all(d) {
                let out = generalized_pauli(label, d).adjoint().apply(a)?;
                for l in 0..d {
                    let expected = a[l] * root_of_unity(-((label.n * l) as i64), d);
                    worst = worst.max((out[(l + label.m) % d] - expected).norm());
                }
            }
        }
    }
    Ok(worst)
}

struct ProtocolErrors {
    conditional: f64,
    probability: f64,
    fidelity: f64,
    count: f64,
}

fn protocol_errors(dims: &[usize], seed: u64) -> Result<ProtocolErrors> {
    let mut worst = ProtocolErrors {
        conditional: 0.0,
        probability: 0.0,
        fidelity: 0.0,
        count: 0.0,
    };
    for &d in dims {
        let per_resource: Vec<ProtocolErrors> = (0..RANDOM_RESOURCES)
            .into_par_iter()
            .map(|i| {
                let rseed = derive_seed(seed ^ 0x23, (d as u64) << 32 | i);
                let r = ResourceState::random(d, rseed)?;
                let l_choice: Vec<usize> = (0..d).map(|m| (m + i as usize) % d).collect();
                let basis = qudit_nme_basis(&r, &l_choice)?;
                let table = derive_correction_table(&r, &basis, 4, rseed)?;
                let exact = success_probability_exact(&r)?;
                let per = per_outcome_probability(&r)?;
                let mut e = ProtocolErrors {
                    conditional: 0.0,
                    probability: 0.0,
                    fidelity: 0.0,
                    count: (table.correctable_count() as f64 - d as f64).abs(),
                };
                for s in 0..RANDOM_INPUTS {
                    let psi = UnknownQudit::random(d, derive_seed(rseed, s));
                    let dist = outcome_distribution(&psi, &r, &basis)?;
                    e.probability = e
                        .probability
                        .max((designated_probability(&dist) - exact).abs());
                    for rec in dist.iter().filter(|rec| rec.designated) {
                        e.probability = e.probability.max((rec.probability - per).abs());
                        let label = PauliLabel::new(l_choice[rec.class_m], rec.class_m, d)?;
                        let closed = generalized_pauli(label, d)
                            .adjoint()
                            .apply(psi.amplitudes())?;
                        e.conditional = e
                            .conditional
                            .max(rec.bob_conditional.distance_up_to_phase(&closed)?);
                        let fid = match table.get(rec.index) {
                            Some(Correction::Pauli(l)) => psi
                                .amplitudes()
                                .inner(&generalized_pauli(l, d).apply(&rec.bob_conditional)?)?
                                .norm_sqr(),
                            _ => 0.0,
                        };
                        e.fidelity = e.fidelity.max(1.0 - fid);
                    }
                }
                Ok(e)
            })
            .collect::<Result<Vec<_>>>()?;
        for e in per_resource {
            worst.conditional = worst.conditional.max(e.conditional);
            worst.probability = worst.probability.max(e.probability);
            worst.fidelity = worst.fidelity.max(e.fidelity);
            worst.count = worst.count.max(e.count);
        }
    }
    Ok(worst)
}

fn obstruction_errors(dims: &[usize], seed: u64) -> Result<(f64, f64, f64)> {
    let (mut uniform, mut nonuniform, mut closed) = (0.0f64, 0.0f64, 0.0f64);
    for &d in dims {
        let mut resources = vec![(ResourceState::maximal(d)?, true)];
        let mut two_level = vec![0.4 / (d - 1) as f64; d];
        two_level[0] = 0.6;
        resources.push((ResourceState::from_lambdas(&two_level)?, false));
        for i in 0..10 {
            resources.push((
                ResourceState::random(d, derive_seed(seed ^ 0x22, (d * 50 + i) as u64))?,
                false,
            ));
        }
        for (r, is_uniform) in &resources {
            let inv: Vec<f64> = r.coeffs().iter().map(|c| 1.0 / c.norm_sqr()).collect();
            let n2 = 1.0 / inv.iter().sum::<f64>();
            for m in 0..d {
                let g = designated_class_gram(r, m)?;
                let mut max_off = 0.0f64;
                for l in 0..d {
                    for k in 0..d {
                        let formula: C64 = (0..d)
                            .map(|n| {
                                root_of_unity(-(((l + d - k) % d * n) as i64), d)
                                    * inv[(n + m) % d]
                                    * n2
                            })
                            .sum();
                        closed = closed.max((g[(l, k)] - formula).norm());
                        if l != k {
                            max_off = max_off.max(g[(l, k)].norm());
                        }
                    }
                }
                if *is_uniform {
                    uniform = uniform.max(max_off);
                } else {
                    nonuniform = nonuniform.max((OBSTRUCTION_FLOOR - max_off).max(0.0));
                }
            }
        }
    }
    Ok((uniform, nonuniform, closed))
}

fn entanglement_and_repetitions(dims: &[usize], seed: u64) -> Result<(f64, f64)> {
    let mut mismatch = 0.0f64;
    let mut reps = 0.0f64;
    for &d in dims {
        if d >= 3 {
            let mut lambdas = vec![0.5 / (d - 1) as f64; d];
            lambdas[0] = 0.5;
            let cmp =
                entanglement_comparison(&ResourceState::from_lambdas(&lambdas)?, &vec![0; d])?;
            for b in &cmp.designated_bits {
                mismatch = mismatch.max((MISMATCH_FLOOR - (b - cmp.resource_bits).abs()).max(0.0));
            }
        }
        for i in 0..RANDOM_RESOURCES {
            let r = ResourceState::random(d, derive_seed(seed ^ 0x7E, (d as u64) << 32 | i))?;
            reps = reps.max((repetitions(&r)? * success_probability_exact(&r)? - 1.0).abs());
            // designated spectrum agrees with the Schmidt decomposition of the vectors
            let basis = qudit_nme_basis(&r, &vec![0; d])?;
            for v in basis.vectors().iter().filter(|v| v.designated) {
                let expected =
                    crate::states::entanglement_entropy(&designated_spectrum(&r, v.class_m)?)?;
                reps = reps.max((v.entropy(d)? - expected).abs());
            }
        }
    }
    Ok((mismatch, reps))
}

struct QubitErrors {
    orthonormality: f64,
    probability: f64,
    entanglement: f64,
    patterns: f64,
}

fn qubit_errors(seed: u64) -> Result<QubitErrors> {
    let mut q = QubitErrors {
        orthonormality: 0.0,
        probability: 0.0,
        entanglement: 0.0,
        patterns: 0.0,
    };
    let fail = |cond: bool| {
        if !cond {
            1.0
        } else {
            0.0
        }
    };
    for i in 0..100u64 {
        let mut rng_vals = UnknownQudit::random(4, derive_seed(seed ^ 0x9B, i))
            .amplitudes()
            .clone()
            .into_inner()
            .into_iter()
            .map(|c| c * 3.0);
        let l = rng_vals.next().expect("4 draws");
        let p = rng_vals.next().expect("4 draws");
        let n = rng_vals.next().expect("4 draws");
        q.orthonormality = q.orthonormality.max(qubit_nme_basis(l, p).gram_error());

        let r = ResourceState::qubit(n)?;
        let closed = success_probability_qubit(n)?;
        q.probability = q
            .probability
            .max((closed - success_probability_exact(&r)?).abs());
        let cmp = entanglement_comparison(&r, &[1, 0])?;
        for b in &cmp.designated_bits {
            q.entanglement = q.entanglement.max((b - cmp.resource_bits).abs());
        }

        if i < 10 {
            let psi = UnknownQudit::random(2, derive_seed(seed ^ 0x9C, i));
            for choice in QubitChoice::ALL {
                let basis = qubit_choice_basis(n, choice)?;
                let dist = outcome_distribution(&psi, &r, &basis)?;
                q.probability = q
                    .probability
                    .max((designated_probability(&dist) - closed).abs());
                let table = derive_correction_table(&r, &basis, 4, derive_seed(seed, i))?;
                let heralded: Vec<usize> = table
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| matches!(c, Correction::Pauli(_)))
                    .map(|(i, _)| i)
                    .collect();
                q.patterns = q
                    .patterns
                    .max(fail(heralded == choice.heralding_outcomes()));
            }
            // phase flip on class 0, bit flip on class 1
            let basis = qudit_nme_basis(&r, &[1, 0])?;
            debug_assert_eq!(basis.kind(), BasisKind::QuditNme);
            let table = derive_correction_table(&r, &basis, 4, derive_seed(seed, 100 + i))?;
            let z = Correction::Pauli(PauliLabel { n: 1, m: 0 });
            let x = Correction::Pauli(PauliLabel { n: 0, m: 1 });
            q.patterns = q
                .patterns
                .max(fail(table.get(0) == Some(z) && table.get(2) == Some(x)));
        }
    }
    Ok(q)
}
