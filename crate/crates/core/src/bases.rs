//! Two-qudit measurement bases: the generalized Bell basis, the four-vector
//! qubit family with tunable entanglement, and the qudit basis built around
//! the vectors that herald successful teleportation.
//!
//! Every basis here has block form: vector `v` lives in one class subspace
//! `span{|j⟩|j⊕m⟩ : j}`, recorded as `class_m`. Vectors are ordered by class,
//! and within a class by `slot`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::ResourceState;
use crate::tensor::{
    gram_schmidt, orthonormality_error, root_of_unity, schmidt_decompose, ComplexMat, ComplexVec,
    RegisterShape, C64, EQ_TOL, ONE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Bell,
    QubitNme,
    QuditNme,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Bell => "bell",
            BasisKind::QubitNme => "qubit-nme",
            BasisKind::QuditNme => "qudit-nme",
        }
    }
}

impl std::fmt::Display for BasisKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One element of a two-qudit measurement basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisVector {
    pub ket: ComplexVec,
    pub class_m: usize,
    /// Position within the class.
    pub slot: usize,
    pub phase_l: Option<usize>,
    /// Whether this outcome heralds success.
    pub designated: bool,
    /// Normalization constant of the defining coefficients, when known.
    pub norm_const: Option<f64>,
}

impl BasisVector {
    /// Schmidt entropy (bits) of the vector across the two qudits.
    pub fn entropy(&self, d: usize) -> Result<f64> {
        let shape = RegisterShape::uniform(d, 2)?;
        let sd = schmidt_decompose(&self.ket, &shape)?;
        crate::states::entanglement_entropy(&sd.lambdas)
    }

    /// True when all amplitude lies on `|j⟩|j⊕class_m⟩`.
    pub fn within_class(&self, d: usize) -> bool {
        (0..d * d).all(|idx| {
            let (a, b) = (idx / d, idx % d);
            b == (a + self.class_m) % d || self.ket[idx].norm() <= EQ_TOL
        })
    }
}

/// An ordered orthonormal basis of `d²` two-qudit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    d: usize,
    kind: BasisKind,
    vectors: Vec<BasisVector>,
}

impl MeasurementBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn vectors(&self) -> &[BasisVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn designated_count(&self) -> usize {
        self.vectors.iter().filter(|v| v.designated).count()
    }

    pub fn kets(&self) -> Vec<ComplexVec> {
        self.vectors.iter().map(|v| v.ket.clone()).collect()
    }

    /// Max entry of `|G − I|`.
    pub fn gram_error(&self) -> f64 {
        orthonormality_error(&self.kets()).unwrap_or(f64::INFINITY)
    }

    /// Max entry of `|Σ_v |v⟩⟨v| − I|`.
    pub fn resolution_error(&self) -> f64 {
        let dim = self.d * self.d;
        let mut sum = ComplexMat::zeros(dim, dim);
        for v in &self.vectors {
            sum = sum
                .add(&ComplexMat::outer(&v.ket, &v.ket))
                .expect("basis kets share a dimension");
        }
        sum.max_abs_diff(&ComplexMat::identity(dim))
    }

    /// Generalized Bell label `(ℓ, p)` of outcome `index`, for Bell bases.
    pub fn bell_label(&self, index: usize) -> Option<(usize, usize)> {
        (self.kind == BasisKind::Bell).then_some((index / self.d, index % self.d))
    }
}

/// `|Ψ_ℓp⟩ = (1/√d) Σ_k e^{2πiℓk/d} |k⊕p⟩|k⟩`, ordered `(ℓ, p)` row-major.
pub fn bell_basis(d: usize) -> Result<MeasurementBasis> {
    check_dim(d)?;
    let amp = 1.0 / (d as f64).sqrt();
    let mut vectors = Vec::with_capacity(d * d);
    for l in 0..d {
        for p in 0..d {
            let mut ket = ComplexVec::zeros(d * d);
            for k in 0..d {
                ket[((k + p) % d) * d + k] = root_of_unity((l * k) as i64, d) * amp;
            }
            vectors.push(BasisVector {
                ket,
                class_m: (d - p) % d,
                slot: l,
                phase_l: Some(l),
                designated: true,
                norm_const: Some(amp),
            });
        }
    }
    Ok(MeasurementBasis {
        d,
        kind: BasisKind::Bell,
        vectors,
    })
}

/// Coefficients `c_ℓp = ⟨Ψ_ℓp|ij⟩` expanding `|ij⟩` in the Bell basis,
/// indexed like [`bell_basis`].
///
/// Only `p = i ⊖ j` is populated, with `c_ℓp = e^{−2πiℓj/d}/√d`.
pub fn bell_expand(i: usize, j: usize, d: usize) -> Result<Vec<C64>> {
    check_dim(d)?;
    if i >= d || j >= d {
        return Err(Error::InvalidLabel(format!(
            "|{i}{j}> out of range for d = {d}"
        )));
    }
    let p = (i + d - j) % d;
    let amp = 1.0 / (d as f64).sqrt();
    let mut coeffs = vec![C64::new(0.0, 0.0); d * d];
    for l in 0..d {
        coeffs[l * d + p] = root_of_unity(-((l * j) as i64), d) * amp;
    }
    Ok(coeffs)
}

/// The qubit family `φ±_ℓ`, `ψ±_p`:
///
/// ```text
/// φ⁺ = L(|00⟩ + ℓ|11⟩)    φ⁻ = L(ℓ*|00⟩ − |11⟩)
/// ψ⁺ = P(|01⟩ + p|10⟩)    ψ⁻ = P(p*|01⟩ − |10⟩)
/// ```
///
/// No outcome is marked designated; see [`qubit_choice_basis`].
pub fn qubit_nme_basis(l: C64, p: C64) -> MeasurementBasis {
    let ln = 1.0 / (1.0 + l.norm_sqr()).sqrt();
    let pn = 1.0 / (1.0 + p.norm_sqr()).sqrt();
    let make = |amps: [C64; 4], norm: f64, class_m: usize, slot: usize| BasisVector {
        ket: ComplexVec::new(amps.iter().map(|a| a * norm).collect()),
        class_m,
        slot,
        phase_l: None,
        designated: false,
        norm_const: Some(norm),
    };
    let z = C64::new(0.0, 0.0);
    let vectors = vec![
        make([ONE, z, z, l], ln, 0, 0),
        make([l.conj(), z, z, -ONE], ln, 0, 1),
        make([z, ONE, p, z], pn, 1, 0),
        make([z, p.conj(), -ONE, z], pn, 1, 1),
    ];
    MeasurementBasis {
        d: 2,
        kind: BasisKind::QubitNme,
        vectors,
    }
}

/// The four parameter matchings between the qubit basis `(ℓ, p)` and the
/// resource `N(|00⟩ + n|11⟩)` under which two of the four outcomes herald
/// perfect teleportation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitChoice {
    /// `ℓ = n`, `p = n*`; heralds on `φ⁻` and `ψ⁺`.
    DirectConj,
    /// `ℓ = n`, `p = 1/n`; heralds on `φ⁻` and `ψ⁻`.
    DirectInverse,
    /// `ℓ = 1/n*`, `p = 1/n`; heralds on `φ⁺` and `ψ⁻`.
    InverseInverse,
    /// `ℓ = 1/n*`, `p = n*`; heralds on `φ⁺` and `ψ⁺`.
    InverseConj,
}

impl QubitChoice {
    pub const ALL: [QubitChoice; 4] = [
        QubitChoice::DirectConj,
        QubitChoice::DirectInverse,
        QubitChoice::InverseInverse,
        QubitChoice::InverseConj,
    ];

    /// `(ℓ, p)` for resource parameter `n`.
    pub fn parameters(self, n: C64) -> (C64, C64) {
        let inv = |z: C64| ONE / z;
        match self {
            QubitChoice::DirectConj => (n, n.conj()),
            QubitChoice::DirectInverse => (n, inv(n)),
            QubitChoice::InverseInverse => (inv(n.conj()), inv(n)),
            QubitChoice::InverseConj => (inv(n.conj()), n.conj()),
        }
    }

    /// Indices (into the `φ⁺, φ⁻, ψ⁺, ψ⁻` ordering) of the heralding outcomes.
    pub fn heralding_outcomes(self) -> [usize; 2] {
        match self {
            QubitChoice::DirectConj => [1, 2],
            QubitChoice::DirectInverse => [1, 3],
            QubitChoice::InverseInverse => [0, 3],
            QubitChoice::InverseConj => [0, 2],
        }
    }
}

/// The qubit basis matched to resource parameter `n`, with the two
/// heralding outcomes marked designated.
pub fn qubit_choice_basis(n: C64, choice: QubitChoice) -> Result<MeasurementBasis> {
    if n.norm() <= 1e-300 || !n.re.is_finite() || !n.im.is_finite() {
        return Err(Error::RankDeficient {
            min_lambda: n.norm_sqr() / (1.0 + n.norm_sqr()),
        });
    }
    let (l, p) = choice.parameters(n);
    let mut basis = qubit_nme_basis(l, p);
    for idx in choice.heralding_outcomes() {
        basis.vectors[idx].designated = true;
    }
    Ok(basis)
}

/// Normalization shared by every heralding vector, `1/√(Σ_p 1/|d_p|²)`.
fn heralding_norm(resource: &ResourceState) -> f64 {
    let s: f64 = resource.coeffs().iter().map(|c| 1.0 / c.norm_sqr()).sum();
    1.0 / s.sqrt()
}

/// The heralding vector of class `m` with phase label `l`:
/// `N Σ_j (e^{2πi l j/d} / d*_{j⊕m}) |j⟩|j⊕m⟩`.
fn heralding_vector(resource: &ResourceState, m: usize, l: usize, norm: f64) -> BasisVector {
    let d = resource.d();
    let mut ket = ComplexVec::zeros(d * d);
    for j in 0..d {
        let jm = (j + m) % d;
        ket[j * d + jm] = root_of_unity((l * j) as i64, d) / resource.coeffs()[jm].conj() * norm;
    }
    BasisVector {
        ket,
        class_m: m,
        slot: 0,
        phase_l: Some(l),
        designated: true,
        norm_const: Some(norm),
    }
}

/// One heralding vector per class `m`, with phase label `l_choice[m]`.
pub fn qudit_nme_designated(
    resource: &ResourceState,
    l_choice: &[usize],
) -> Result<Vec<BasisVector>> {
    let d = resource.d();
    resource.require_full_rank()?;
    if l_choice.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: l_choice.len(),
        });
    }
    if let Some(&bad) = l_choice.iter().find(|&&l| l >= d) {
        return Err(Error::InvalidLabel(format!(
            "phase label {bad} out of range for d = {d}"
        )));
    }
    let norm = heralding_norm(resource);
    Ok(l_choice
        .iter()
        .enumerate()
        .map(|(m, &l)| heralding_vector(resource, m, l, norm))
        .collect())
}

/// Completes one designated vector per class into a full orthonormal basis.
///
/// Within each class the designated vector comes first, followed by
/// Gram-Schmidt over `|j⟩|j⊕m⟩` in ascending `j`.
pub fn complete_nme_basis(designated: &[BasisVector], d: usize) -> Result<MeasurementBasis> {
    check_dim(d)?;
    if designated.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: designated.len(),
        });
    }
    let mut vectors = Vec::with_capacity(d * d);
    for m in 0..d {
        let head = designated
            .iter()
            .find(|v| v.class_m == m)
            .ok_or_else(|| Error::InvalidLabel(format!("no designated vector for class {m}")))?;
        if head.ket.dim() != d * d || !head.within_class(d) {
            return Err(Error::InvalidLabel(format!(
                "designated vector for class {m} leaves its class subspace"
            )));
        }
        let mut seeds = vec![head.ket.clone()];
        seeds.extend((0..d).map(|j| ComplexVec::basis(d * d, j * d + (j + m) % d)));
        let span = gram_schmidt(&seeds, 1)?;
        if span.len() != d {
            return Err(Error::Invariant(format!(
                "class {m} completed to {} vectors instead of {d}",
                span.len()
            )));
        }
        vectors.push(BasisVector {
            slot: 0,
            designated: true,
            ..head.clone()
        });
        for (slot, ket) in span.into_iter().enumerate().skip(1) {
            vectors.push(BasisVector {
                ket,
                class_m: m,
                slot,
                phase_l: None,
                designated: false,
                norm_const: None,
            });
        }
    }
    Ok(MeasurementBasis {
        d,
        kind: BasisKind::QuditNme,
        vectors,
    })
}

/// Full heralding basis for `resource`, one designated vector per class.
pub fn qudit_nme_basis(resource: &ResourceState, l_choice: &[usize]) -> Result<MeasurementBasis> {
    let designated = qudit_nme_designated(resource, l_choice)?;
    complete_nme_basis(&designated, resource.d())
}

/// Gram matrix of all `d` heralding vectors (every phase label) in class `m`.
///
/// Its off-diagonal entries vanish only for a uniform spectrum, which is why a
/// single orthonormal basis holds at most one of them per class.
pub fn designated_class_gram(resource: &ResourceState, m: usize) -> Result<ComplexMat> {
    resource.require_full_rank()?;
    let d = resource.d();
    if m >= d {
        return Err(Error::InvalidLabel(format!(
            "class {m} out of range for d = {d}"
        )));
    }
    let norm = heralding_norm(resource);
    let kets: Vec<ComplexVec> = (0..d)
        .map(|l| heralding_vector(resource, m, l, norm).ket)
        .collect();
    crate::tensor::gram_matrix(&kets)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidShape(format!(
            "dimension must be >= 2, got {d}"
        )));
    }
    Ok(())
}
