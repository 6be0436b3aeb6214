//! Input states, shared resources, clock-shift corrections and entropy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{root_of_unity, ComplexMat, ComplexVec, C64, EQ_TOL, INPUT_TOL, ONE};

/// Resources with a Schmidt weight at or below this are treated as rank deficient.
pub const FULL_RANK_TOL: f64 = 1e-12;

/// A single qudit in an (unknown to the sender) pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct UnknownQudit {
    amplitudes: ComplexVec,
}

impl UnknownQudit {
    /// Accepts amplitudes normalized within the input tolerance and
    /// renormalizes them exactly.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidShape(format!(
                "a qudit needs dimension >= 2, got {}",
                amplitudes.len()
            )));
        }
        let v = ComplexVec::new(amplitudes);
        v.check_normalized(INPUT_TOL)?;
        let amplitudes = v.normalized().expect("norm checked above");
        Ok(UnknownQudit { amplitudes })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn from_unnormalized(amplitudes: Vec<C64>) -> Result<Self> {
        let v = ComplexVec::new(amplitudes);
        let v = v
            .normalized()
            .ok_or_else(|| Error::InvalidShape("all amplitudes are zero".into()))?;
        Self::new(v.into_inner())
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(d: usize, k: usize) -> Self {
        UnknownQudit {
            amplitudes: ComplexVec::basis(d, k),
        }
    }

    /// Uniform superposition `Σ_k |k⟩ / √d`.
    pub fn uniform(d: usize) -> Self {
        let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        UnknownQudit {
            amplitudes: ComplexVec::new(vec![a; d]),
        }
    }

    /// Haar-random state from a seeded generator.
    pub fn random(d: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(d, &mut rng)
    }

    pub fn random_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        loop {
            let v: ComplexVec = (0..d)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(re, im)
                })
                .collect::<Vec<_>>()
                .into();
            if let Some(amplitudes) = v.normalized() {
                return UnknownQudit { amplitudes };
            }
        }
    }

    pub fn d(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitudes(&self) -> &ComplexVec {
        &self.amplitudes
    }
}

/// Haar-random unknown state for dimension `d`, deterministic in `seed`.
pub fn random_unknown_state(d: usize, seed: u64) -> UnknownQudit {
    UnknownQudit::random(d, seed)
}

/// A shared two-qudit resource `D Σ_j d_j |j⟩|j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceState {
    coeffs: Vec<C64>,
    norm: f64,
    lambdas: Vec<f64>,
}

impl ResourceState {
    /// Builds the resource from (possibly complex, unnormalized) Schmidt-form
    /// coefficients `d_j`.
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidResource(format!(
                "dimension must be >= 2, got {}",
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidResource("non-finite coefficient".into()));
        }
        let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if total <= 0.0 {
            return Err(Error::InvalidResource("all coefficients are zero".into()));
        }
        let norm = 1.0 / total.sqrt();
        let lambdas = coeffs.iter().map(|c| c.norm_sqr() / total).collect();
        Ok(ResourceState {
            coeffs,
            norm,
            lambdas,
        })
    }

    /// Real Schmidt weights; they are rescaled to sum to one. Coefficients are
    /// `d_j = √λ_j`, so `D = 1`.
    pub fn from_lambdas(lambdas: &[f64]) -> Result<Self> {
        if lambdas.iter().any(|&l| !l.is_finite() || l < 0.0) {
            return Err(Error::InvalidSpectrum(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = lambdas.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidSpectrum("weights sum to zero".into()));
        }
        Self::new(
            lambdas
                .iter()
                .map(|&l| C64::new((l / total).sqrt(), 0.0))
                .collect(),
        )
    }

    /// Maximally entangled resource.
    pub fn maximal(d: usize) -> Result<Self> {
        Self::new(vec![ONE; d])
    }

    /// Full-rank resource with a flat-Dirichlet spectrum, random coefficient
    /// phases and an arbitrary overall scale, deterministic in `seed`.
    pub fn random(d: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let w: Vec<f64> = (0..d).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = w.iter().sum();
            if w.iter().any(|x| x / total <= FULL_RANK_TOL) {
                continue;
            }
            let scale = 0.5 + rng.random::<f64>();
            let coeffs = w
                .iter()
                .map(|x| {
                    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                    C64::from_polar(scale * (x / total).sqrt(), theta)
                })
                .collect();
            return Self::new(coeffs);
        }
    }

    /// Qubit resource `N(|00⟩ + n|11⟩)`.
    pub fn qubit(n: C64) -> Result<Self> {
        Self::new(vec![ONE, n])
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    /// The unnormalized coefficients `d_j`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// The normalization `D = 1/√(Σ|d_j|²)`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn min_lambda(&self) -> f64 {
        self.lambdas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_full_rank(&self) -> bool {
        self.min_lambda() > FULL_RANK_TOL
    }

    pub fn require_full_rank(&self) -> Result<()> {
        if self.is_full_rank() {
            Ok(())
        } else {
            Err(Error::RankDeficient {
                min_lambda: self.min_lambda(),
            })
        }
    }

    /// True when every Schmidt weight equals `1/d` within `tol`.
    pub fn is_maximal(&self, tol: f64) -> bool {
        let u = 1.0 / self.d() as f64;
        self.lambdas.iter().all(|l| (l - u).abs() <= tol)
    }

    /// The normalized two-qudit ket, sites ordered (1, 2).
    pub fn ket(&self) -> ComplexVec {
        let d = self.d();
        let mut v = ComplexVec::zeros(d * d);
        for (j, c) in self.coeffs.iter().enumerate() {
            v[j * d + j] = c * self.norm;
        }
        v
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.lambdas)
    }
}

/// Builds a resource from Schmidt-form coefficients.
pub fn make_resource(d: usize, coeffs: &[C64]) -> Result<ResourceState> {
    if coeffs.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: coeffs.len(),
        });
    }
    ResourceState::new(coeffs.to_vec())
}

/// Label `(n, m)` of the clock-shift operator `U_nm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PauliLabel {
    /// phase index
    pub n: usize,
    /// shift index
    pub m: usize,
}

impl PauliLabel {
    pub fn new(n: usize, m: usize, d: usize) -> Result<Self> {
        if n >= d || m >= d {
            return Err(Error::InvalidLabel(format!(
                "U_({n},{m}) out of range for d = {d}"
            )));
        }
        Ok(PauliLabel { n, m })
    }

    /// All `d²` labels, `n`-major.
    pub fn all(d: usize) -> impl Iterator<Item = PauliLabel> {
        (0..d).flat_map(move |n| (0..d).map(move |m| PauliLabel { n, m }))
    }
}

impl std::fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "U({},{})", self.n, self.m)
    }
}

/// `U_nm = Σ_k e^{2πi nk/d} |k⟩⟨k⊕m|`.
pub fn generalized_pauli(label: PauliLabel, d: usize) -> ComplexMat {
    debug_assert!(label.n < d && label.m < d);
    let mut u = ComplexMat::zeros(d, d);
    for k in 0..d {
        u[(k, (k + label.m) % d)] = root_of_unity((label.n * k) as i64, d);
    }
    u
}

/// Von Neumann entropy in bits of a Schmidt spectrum, `0 log 0 = 0`.
pub fn entanglement_entropy(lambdas: &[f64]) -> Result<f64> {
    if lambdas.is_empty() {
        return Err(Error::InvalidSpectrum("empty spectrum".into()));
    }
    if let Some(bad) = lambdas.iter().find(|&&l| !l.is_finite() || l < -INPUT_TOL) {
        return Err(Error::InvalidSpectrum(format!("negative weight {bad}")));
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > INPUT_TOL {
        return Err(Error::InvalidSpectrum(format!("weights sum to {total}")));
    }
    Ok(entropy_bits(lambdas))
}

fn entropy_bits(lambdas: &[f64]) -> f64 {
    let h: f64 = lambdas
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    h.max(0.0)
}

/// Checks whether a matrix is unitary within `EQ_TOL`.
pub fn is_unitary(u: &ComplexMat) -> bool {
    u.is_square()
        && u.adjoint()
            .matmul(u)
            .map(|p| p.max_abs_diff(&ComplexMat::identity(u.rows())) <= EQ_TOL)
            .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ZERO;

    #[test]
    fn maximal_qubit_resource() {
        let r = make_resource(2, &[ONE, ONE]).unwrap();
        assert!((r.lambdas()[0] - 0.5).abs() < 1e-15);
        assert!(r.is_maximal(1e-12));
        assert!((r.entropy() - 1.0).abs() < 1e-12);
        assert!(r.ket().is_normalized());
    }

    #[test]
    fn qubit_resource_spectrum() {
        // |n|^2 = 1/2 gives weights 1/(3/2), (1/2)/(3/2)
        let r = ResourceState::qubit(C64::new(0.5, 0.5)).unwrap();
        assert!((r.lambdas()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.lambdas()[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.norm() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn product_resource_is_not_full_rank() {
        let r = make_resource(3, &[ONE, ZERO, ZERO]).unwrap();
        assert_eq!(r.lambdas(), &[1.0, 0.0, 0.0]);
        assert!(!r.is_full_rank());
        assert!(matches!(
            r.require_full_rank(),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn resource_rejects_zero_and_bad_lengths() {
        assert!(make_resource(2, &[ZERO, ZERO]).is_err());
        assert!(make_resource(3, &[ONE, ONE]).is_err());
        assert!(ResourceState::from_lambdas(&[0.5, -0.1]).is_err());
    }

    #[test]
    fn random_resource_is_full_rank_and_seeded() {
        for seed in 0..20 {
            let r = ResourceState::random(4, seed).unwrap();
            assert!(r.is_full_rank());
            assert!((r.lambdas().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(r.ket().is_normalized());
            assert_eq!(r, ResourceState::random(4, seed).unwrap());
        }
    }

    #[test]
    fn from_lambdas_normalizes() {
        let r = ResourceState::from_lambdas(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.lambdas().len(), 3);
        assert!((r.lambdas()[0] - 0.5).abs() < 1e-15);
        assert!((r.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_state_is_deterministic_and_normalized() {
        let a = random_unknown_state(4, 99);
        let b = random_unknown_state(4, 99);
        assert_eq!(a, b);
        assert!((a.amplitudes().norm_sqr() - 1.0).abs() < 1e-10);
        assert_ne!(a, random_unknown_state(4, 100));
    }

    #[test]
    fn haar_first_moment() {
        // E|a_0|^2 = 1/d for Haar states
        let mean: f64 = (0..10_000u64)
            .map(|s| random_unknown_state(2, s).amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn unknown_qudit_validation() {
        assert!(UnknownQudit::new(vec![ONE, ONE]).is_err());
        assert!(UnknownQudit::new(vec![ONE]).is_err());
        let q = UnknownQudit::from_unnormalized(vec![ONE, ONE]).unwrap();
        assert!(q.amplitudes().is_normalized());
    }

    #[test]
    fn identity_label() {
        for d in 2..6 {
            assert_eq!(
                generalized_pauli(PauliLabel::new(0, 0, d).unwrap(), d),
                ComplexMat::identity(d)
            );
        }
        assert!(PauliLabel::new(2, 0, 2).is_err());
    }

    #[test]
    fn qubit_patterns() {
        let x = generalized_pauli(PauliLabel { n: 0, m: 1 }, 2);
        let z = generalized_pauli(PauliLabel { n: 1, m: 0 }, 2);
        let sigma_x = ComplexMat::from_row_major(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let sigma_z = ComplexMat::from_row_major(2, 2, vec![ONE, ZERO, ZERO, -ONE]).unwrap();
        assert!(x.max_abs_diff(&sigma_x) < 1e-15);
        assert!(z.max_abs_diff(&sigma_z) < 1e-15);
    }

    #[test]
    fn clock_phase_on_qutrit() {
        // U_10 is diagonal with entries exp(2πik/3), built here from the definition
        let u = generalized_pauli(PauliLabel { n: 1, m: 0 }, 3);
        for k in 0..3 {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let expected = C64::new(angle.cos(), angle.sin());
            assert!((u[(k, k)] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn unitarity() {
        for d in 2..=8 {
            for label in PauliLabel::all(d) {
                assert!(is_unitary(&generalized_pauli(label, d)), "{label} d={d}");
            }
        }
    }

    #[test]
    fn entropy_examples() {
        assert!((entanglement_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(entanglement_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let h = entanglement_entropy(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((h - 0.918_295_834_054_489_6).abs() < 1e-12, "{h}");
        assert!(entanglement_entropy(&[0.7, 0.7]).is_err());
        assert!(entanglement_entropy(&[1.2, -0.2]).is_err());
        assert!(entanglement_entropy(&[]).is_err());
    }
}
