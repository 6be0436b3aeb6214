//! End-to-end teleportation: exact outcome enumeration, correction search,
//! Born-rule sampling and fidelity scoring.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bases::{BasisKind, MeasurementBasis};
use crate::error::{Error, Result};
use crate::states::{generalized_pauli, PauliLabel, ResourceState, UnknownQudit};
use crate::tensor::{
    project_each, ComplexMat, ComplexVec, Kron, RegisterShape, DEGENERACY_TOL, EQ_TOL, INPUT_TOL,
};

/// Name of the generator behind every seeded draw.
pub const RNG_NAME: &str = "chacha8";

/// Fidelity a probe must reach for a correction to be accepted.
pub const PROBE_FIDELITY_TOL: f64 = 1e-9;

/// Result of projecting the sender's two qudits onto one basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    /// Position in the measurement basis.
    pub index: usize,
    pub class_m: usize,
    pub slot: usize,
    pub probability: f64,
    /// Receiver's conditional state, zero when the outcome is impossible.
    pub bob_conditional: ComplexVec,
    pub designated: bool,
}

/// Born-rule distribution of the joint measurement on sites (a, 1) of
/// `|ψ⟩_a |Φ⟩_12`.
pub fn outcome_distribution(
    input: &UnknownQudit,
    resource: &ResourceState,
    basis: &MeasurementBasis,
) -> Result<Vec<OutcomeRecord>> {
    let d = input.d();
    for found in [resource.d(), basis.d()] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    let joint = input.amplitudes().kron(&resource.ket());
    let shape = RegisterShape::uniform(d, 3)?;
    let projections = project_each(&joint, &basis.kets(), &[0, 1], &shape)?;
    Ok(basis
        .vectors()
        .iter()
        .zip(projections)
        .enumerate()
        .map(
            |(index, (v, (probability, bob_conditional)))| OutcomeRecord {
                index,
                class_m: v.class_m,
                slot: v.slot,
                probability,
                bob_conditional,
                designated: v.designated,
            },
        )
        .collect())
}

/// Total probability of the designated outcomes.
pub fn designated_probability(records: &[OutcomeRecord]) -> f64 {
    records
        .iter()
        .filter(|r| r.designated)
        .map(|r| r.probability)
        .sum()
}

/// `|⟨ψ|φ⟩|²` for normalized states of equal dimension.
pub fn fidelity(psi: &ComplexVec, phi: &ComplexVec) -> Result<f64> {
    psi.check_normalized(INPUT_TOL)?;
    phi.check_normalized(INPUT_TOL)?;
    Ok(overlap(psi, phi)?.min(1.0))
}

fn overlap(psi: &ComplexVec, phi: &ComplexVec) -> Result<f64> {
    Ok(psi.inner(phi)?.norm_sqr())
}

/// Correction the receiver applies for one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correction {
    Pauli(PauliLabel),
    Fail,
}

impl Correction {
    pub fn label(self) -> Option<PauliLabel> {
        match self {
            Correction::Pauli(l) => Some(l),
            Correction::Fail => None,
        }
    }
}

/// Outcome index → correction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionTable {
    d: usize,
    entries: Vec<Correction>,
}

impl CorrectionTable {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[Correction] {
        &self.entries
    }

    pub fn get(&self, outcome: usize) -> Option<Correction> {
        self.entries.get(outcome).copied()
    }

    pub fn correctable_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|c| matches!(c, Correction::Pauli(_)))
            .count()
    }
}

/// Finds, for every outcome, the unique clock-shift operator that maps the
/// receiver's conditional state back onto the input for every probe.
///
/// Probes are `|0⟩`, the uniform superposition, and `probe_count − 2`
/// Haar-random states. A degenerate probe set is retried once with fresh
/// random probes.
pub fn derive_correction_table(
    resource: &ResourceState,
    basis: &MeasurementBasis,
    probe_count: usize,
    seed: u64,
) -> Result<CorrectionTable> {
    if probe_count < 3 {
        return Err(Error::Config(format!(
            "probe_count must be at least 3, got {probe_count}"
        )));
    }
    match search_corrections(resource, basis, probe_count, seed) {
        Err(Error::DegenerateProbes { .. }) => {
            search_corrections(resource, basis, probe_count, derive_seed(seed, u64::MAX))
        }
        other => other,
    }
}

fn search_corrections(
    resource: &ResourceState,
    basis: &MeasurementBasis,
    probe_count: usize,
    seed: u64,
) -> Result<CorrectionTable> {
    let d = basis.d();
    let mut probes = vec![UnknownQudit::basis(d, 0), UnknownQudit::uniform(d)];
    probes
        .extend((0..probe_count - 2).map(|i| UnknownQudit::random(d, derive_seed(seed, i as u64))));
    let dists = probes
        .iter()
        .map(|p| outcome_distribution(p, resource, basis))
        .collect::<Result<Vec<_>>>()?;
    let paulis: Vec<(PauliLabel, ComplexMat)> = PauliLabel::all(d)
        .map(|l| (l, generalized_pauli(l, d)))
        .collect();

    let entries = (0..basis.len())
        .into_par_iter()
        .map(|idx| {
            let mut accepted: Option<PauliLabel> = None;
            for (label, u) in &paulis {
                if corrects(u, idx, &probes, &dists)? {
                    if let Some(first) = accepted {
                        return Err(Error::DegenerateProbes {
                            outcome: idx,
                            first: first.to_string(),
                            second: label.to_string(),
                        });
                    }
                    accepted = Some(*label);
                }
            }
            let entry = accepted.map_or(Correction::Fail, Correction::Pauli);
            if basis.vectors()[idx].designated && entry == Correction::Fail {
                return Err(Error::Invariant(format!(
                    "designated outcome {idx} admits no clock-shift correction"
                )));
            }
            Ok(entry)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrectionTable { d, entries })
}

fn corrects(
    u: &ComplexMat,
    idx: usize,
    probes: &[UnknownQudit],
    dists: &[Vec<OutcomeRecord>],
) -> Result<bool> {
    let mut informative = 0;
    for (probe, dist) in probes.iter().zip(dists) {
        let rec = &dist[idx];
        if rec.probability <= DEGENERACY_TOL {
            continue;
        }
        informative += 1;
        let corrected = u.apply(&rec.bob_conditional)?;
        if overlap(probe.amplitudes(), &corrected)? < 1.0 - PROBE_FIDELITY_TOL {
            return Ok(false);
        }
    }
    Ok(informative > 0)
}

/// Outcome index sent to the receiver, `⌈2 log₂ d⌉` bits wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalMessage {
    pub bits: u64,
    pub width: u32,
}

impl ClassicalMessage {
    pub fn encode(outcome: usize, d: usize) -> Result<Self> {
        if outcome >= d * d {
            return Err(Error::InvalidLabel(format!(
                "outcome {outcome} does not fit d^2 = {}",
                d * d
            )));
        }
        Ok(ClassicalMessage {
            bits: outcome as u64,
            width: message_width(d),
        })
    }

    pub fn decode(self) -> usize {
        self.bits as usize
    }
}

/// Bits needed to name one of `d²` outcomes.
pub fn message_width(d: usize) -> u32 {
    let max = (d * d - 1) as u64;
    u64::BITS - max.leading_zeros()
}

/// A single protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub input: UnknownQudit,
    pub lambdas: Vec<f64>,
    pub basis_kind: BasisKind,
    pub outcome: usize,
    pub class_m: usize,
    pub slot: usize,
    pub message: ClassicalMessage,
    pub designated: bool,
    pub correction: Option<PauliLabel>,
    pub bob_final: ComplexVec,
    pub fidelity: f64,
    pub success: bool,
    pub seed: u64,
    pub rng: &'static str,
}

/// Samples one measurement outcome and runs the receiver's side.
pub fn teleport(
    input: &UnknownQudit,
    resource: &ResourceState,
    basis: &MeasurementBasis,
    table: &CorrectionTable,
    seed: u64,
) -> Result<Transcript> {
    let dist = outcome_distribution(input, resource, basis)?;
    teleport_with(input, resource, basis, table, &dist, seed)
}

fn teleport_with(
    input: &UnknownQudit,
    resource: &ResourceState,
    basis: &MeasurementBasis,
    table: &CorrectionTable,
    dist: &[OutcomeRecord],
    seed: u64,
) -> Result<Transcript> {
    let d = basis.d();
    if table.d() != d || table.entries().len() != dist.len() {
        return Err(Error::DimensionMismatch {
            expected: dist.len(),
            found: table.entries().len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = WeightedIndex::new(dist.iter().map(|r| r.probability))
        .map_err(|e| Error::Invariant(format!("outcome distribution: {e}")))?;
    let rec = &dist[weights.sample(&mut rng)];

    let correction = table.get(rec.index).and_then(Correction::label);
    let bob_final = match correction {
        Some(label) => generalized_pauli(label, d).apply(&rec.bob_conditional)?,
        None => rec.bob_conditional.clone(),
    };
    let fidelity = overlap(input.amplitudes(), &bob_final)?.min(1.0);
    let success = rec.designated && correction.is_some() && fidelity >= 1.0 - EQ_TOL;
    Ok(Transcript {
        input: input.clone(),
        lambdas: resource.lambdas().to_vec(),
        basis_kind: basis.kind(),
        outcome: rec.index,
        class_m: rec.class_m,
        slot: rec.slot,
        message: ClassicalMessage::encode(rec.index, d)?,
        designated: rec.designated,
        correction,
        bob_final,
        fidelity,
        success,
        seed,
        rng: RNG_NAME,
    })
}

/// Source of the state teleported in each trial.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Fixed(UnknownQudit),
    /// Fresh Haar-random state per trial, seeded from the trial seed.
    Random,
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent seed for counter `i` under `master`.
pub fn derive_seed(master: u64, i: u64) -> u64 {
    splitmix64(master ^ splitmix64(i))
}

/// Runs `trials` independent teleportations; output order is by trial index
/// regardless of how the work is scheduled.
pub fn run_trials(
    input: &InputSpec,
    resource: &ResourceState,
    basis: &MeasurementBasis,
    table: &CorrectionTable,
    trials: usize,
    seed: u64,
) -> Result<Vec<Transcript>> {
    let d = basis.d();
    let fixed = match input {
        InputSpec::Fixed(q) => Some((q, outcome_distribution(q, resource, basis)?)),
        InputSpec::Random => None,
    };
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i);
            match &fixed {
                Some((q, dist)) => teleport_with(q, resource, basis, table, dist, trial_seed),
                None => {
                    let q = UnknownQudit::random(d, derive_seed(trial_seed, 0x5EED));
                    teleport(&q, resource, basis, table, trial_seed)
                }
            }
        })
        .collect()
}

/// Aggregate statistics of a batch of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub success_count: usize,
    pub empirical_p: f64,
    /// `√(p̂(1 − p̂)/trials)`
    pub stderr: f64,
    /// Mean fidelity over designated outcomes; `None` if none occurred.
    pub mean_fidelity_on_success: Option<f64>,
}

impl MonteCarloSummary {
    pub fn from_transcripts(transcripts: &[Transcript]) -> Self {
        let trials = transcripts.len();
        let success_count = transcripts.iter().filter(|t| t.success).count();
        let (fid_sum, designated) = transcripts
            .iter()
            .filter(|t| t.designated)
            .fold((0.0, 0usize), |(s, n), t| (s + t.fidelity, n + 1));
        let empirical_p = if trials == 0 {
            0.0
        } else {
            success_count as f64 / trials as f64
        };
        let stderr = if trials == 0 {
            0.0
        } else {
            (empirical_p * (1.0 - empirical_p) / trials as f64).sqrt()
        };
        MonteCarloSummary {
            trials,
            success_count,
            empirical_p,
            stderr,
            mean_fidelity_on_success: (designated > 0).then(|| fid_sum / designated as f64),
        }
    }
}

/// Monte Carlo estimate of the heralded success probability.
pub fn run_monte_carlo(
    input: &InputSpec,
    resource: &ResourceState,
    basis: &MeasurementBasis,
    table: &CorrectionTable,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let transcripts = run_trials(input, resource, basis, table, trials, seed)?;
    Ok(MonteCarloSummary::from_transcripts(&transcripts))
}
