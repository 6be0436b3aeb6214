//! Closed-form success probabilities, repetition counts, entanglement
//! bookkeeping and parameter sweeps.

use std::io::Write;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::bases::qudit_nme_basis;
use crate::error::{Error, Result};
use crate::numfmt::fmt_num;
use crate::protocol::{derive_correction_table, derive_seed, run_monte_carlo, InputSpec};
use crate::states::{ResourceState, FULL_RANK_TOL};
use crate::tensor::{C64, EQ_TOL};

/// Heralded success probability `d / Σ_k 1/λ_k`.
pub fn success_probability_exact(resource: &ResourceState) -> Result<f64> {
    resource.require_full_rank()?;
    let inv_sum: f64 = resource.lambdas().iter().map(|l| 1.0 / l).sum();
    Ok(resource.d() as f64 / inv_sum)
}

/// Qubit resource `N(|00⟩ + n|11⟩)`: `2|n|² / (1 + |n|²)²`.
pub fn success_probability_qubit(n: C64) -> Result<f64> {
    let n2 = n.norm_sqr();
    if n2 <= 0.0 || !n2.is_finite() {
        return Err(Error::RankDeficient { min_lambda: 0.0 });
    }
    Ok(2.0 * n2 / ((1.0 + n2) * (1.0 + n2)))
}

/// Probability of each single heralding outcome, `(D N)²`, from the raw
/// coefficients.
pub fn per_outcome_probability(resource: &ResourceState) -> Result<f64> {
    resource.require_full_rank()?;
    let norm_sqr: f64 = resource.norm().powi(2);
    let inv: f64 = resource.coeffs().iter().map(|c| 1.0 / c.norm_sqr()).sum();
    Ok(norm_sqr / inv)
}

/// Expected number of attempts per success, `1 / P_succ`.
pub fn repetitions(resource: &ResourceState) -> Result<f64> {
    Ok(1.0 / success_probability_exact(resource)?)
}

/// Schmidt spectrum of the class-`m` heralding vector, `N²/|d_{j⊕m}|²`.
pub fn designated_spectrum(resource: &ResourceState, m: usize) -> Result<Vec<f64>> {
    resource.require_full_rank()?;
    let d = resource.d();
    let inv: Vec<f64> = resource
        .coeffs()
        .iter()
        .map(|c| 1.0 / c.norm_sqr())
        .collect();
    let total: f64 = inv.iter().sum();
    Ok((0..d).map(|j| inv[(j + m) % d] / total).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementComparison {
    pub resource_bits: f64,
    /// Entropy of each designated vector, by class.
    pub designated_bits: Vec<f64>,
    /// True when every designated entropy equals the resource's within 1e-10.
    pub matches: bool,
}

/// Compares the resource entropy with that of the designated measurement
/// vectors, measured by Schmidt decomposition of the vectors themselves.
pub fn entanglement_comparison(
    resource: &ResourceState,
    l_choice: &[usize],
) -> Result<EntanglementComparison> {
    let basis = qudit_nme_basis(resource, l_choice)?;
    let resource_bits = resource.entropy();
    let designated_bits = basis
        .vectors()
        .iter()
        .filter(|v| v.designated)
        .map(|v| v.entropy(resource.d()))
        .collect::<Result<Vec<_>>>()?;
    let matches = designated_bits
        .iter()
        .all(|b| (b - resource_bits).abs() <= EQ_TOL);
    Ok(EntanglementComparison {
        resource_bits,
        designated_bits,
        matches,
    })
}

/// Resource families for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// `N(|00⟩ + n|11⟩)` with `|n|` log-spaced on `[0.05, 1]`.
    QubitN,
    /// Spectra drawn uniformly from the simplex.
    DirichletRandom,
    /// `(1 − (d−1)ε, ε, …, ε)` with `ε` on `(0, 1/d]`.
    TwoLevelQudit,
}

impl FromStr for SweepFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubit-n" => Ok(SweepFamily::QubitN),
            "dirichlet-random" => Ok(SweepFamily::DirichletRandom),
            "two-level-qudit" => Ok(SweepFamily::TwoLevelQudit),
            other => Err(Error::Config(format!("unknown sweep family {other:?}"))),
        }
    }
}

pub const QUBIT_N_MIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub lambda_spec: String,
    pub lambdas: Vec<f64>,
    pub entropy_bits: f64,
    pub p_succ_exact: f64,
    pub p_succ_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub repetitions_r: f64,
    pub basis_entropy_bits: f64,
}

fn lambda_spec(lambdas: &[f64]) -> String {
    lambdas
        .iter()
        .map(|&l| fmt_num(l))
        .collect::<Vec<_>>()
        .join(";")
}

fn grid_point(
    family: SweepFamily,
    d: usize,
    points: usize,
    i: usize,
    seed: u64,
) -> Result<(ResourceState, String)> {
    match family {
        SweepFamily::QubitN => {
            let n = if points == 1 {
                1.0
            } else {
                QUBIT_N_MIN * (1.0 / QUBIT_N_MIN).powf(i as f64 / (points - 1) as f64)
            };
            // pin the endpoint exactly
            let n = if i + 1 == points { 1.0 } else { n };
            Ok((
                ResourceState::qubit(C64::new(n, 0.0))?,
                format!("n={}", fmt_num(n)),
            ))
        }
        SweepFamily::TwoLevelQudit => {
            let eps = (i + 1) as f64 / (points * d) as f64;
            let mut lambdas = vec![eps; d];
            lambdas[0] = 1.0 - (d - 1) as f64 * eps;
            let r = ResourceState::from_lambdas(&lambdas)?;
            let spec = lambda_spec(r.lambdas());
            Ok((r, spec))
        }
        SweepFamily::DirichletRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
            loop {
                let draws: Vec<f64> = (0..d).map(|_| Exp1.sample(&mut rng)).collect();
                let total: f64 = draws.iter().sum();
                if draws.iter().all(|x| x / total > FULL_RANK_TOL) {
                    let r = ResourceState::from_lambdas(&draws)?;
                    let spec = lambda_spec(r.lambdas());
                    return Ok((r, spec));
                }
            }
        }
    }
}

/// Exact and (when `trials > 0`) Monte Carlo success probabilities along a
/// resource family. Rows are ordered by grid index.
pub fn sweep(
    family: SweepFamily,
    d: usize,
    points: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if points == 0 {
        return Err(Error::Config("points must be at least 1".into()));
    }
    if d < 2 {
        return Err(Error::Config(format!("d must be at least 2, got {d}")));
    }
    if family == SweepFamily::QubitN && d != 2 {
        return Err(Error::Config(format!(
            "qubit-n sweep requires d = 2, got {d}"
        )));
    }
    (0..points)
        .into_par_iter()
        .map(|i| {
            let (resource, spec) = grid_point(family, d, points, i, seed)?;
            let p_succ_exact = success_probability_exact(&resource)?;
            let basis = qudit_nme_basis(&resource, &vec![0; d])?;
            let basis_entropy_bits = basis.vectors()[0].entropy(d)?;
            let (p_succ_mc, mc_stderr) = if trials > 0 {
                let row_seed = derive_seed(seed ^ 0xC0FF_EE00, i as u64);
                let table = derive_correction_table(&resource, &basis, 4, row_seed)?;
                let mc = run_monte_carlo(
                    &InputSpec::Random,
                    &resource,
                    &basis,
                    &table,
                    trials,
                    derive_seed(row_seed, 1),
                )?;
                (Some(mc.empirical_p), Some(mc.stderr))
            } else {
                (None, None)
            };
            Ok(SweepRow {
                d,
                lambda_spec: spec,
                lambdas: resource.lambdas().to_vec(),
                entropy_bits: resource.entropy(),
                p_succ_exact,
                p_succ_mc,
                mc_stderr,
                repetitions_r: 1.0 / p_succ_exact,
                basis_entropy_bits,
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: [&str; 8] = [
    "d",
    "lambda_spec",
    "entropy_bits",
    "p_succ_exact",
    "p_succ_mc",
    "mc_stderr",
    "repetitions_R",
    "basis_entropy_bits",
];

/// Writes sweep rows as CSV with the fixed header; absent Monte Carlo
/// columns are left empty.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(SWEEP_CSV_HEADER).map_err(io)?;
    for r in rows {
        let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
        w.write_record([
            r.d.to_string(),
            r.lambda_spec.clone(),
            fmt_num(r.entropy_bits),
            fmt_num(r.p_succ_exact),
            opt(r.p_succ_mc),
            opt(r.mc_stderr),
            fmt_num(r.repetitions_r),
            fmt_num(r.basis_entropy_bits),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
