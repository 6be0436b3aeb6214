//! Dense complex vectors and matrices plus mixed-radix register bookkeeping.
//!
//! Multi-qudit registers use a big-endian layout: the leftmost site is the
//! most significant digit of the flat index. Operators are applied site-wise,
//! so nothing larger than the operator itself is ever materialized.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Equality tolerance for derived quantities.
pub const EQ_TOL: f64 = 1e-10;
/// Tolerance applied when validating caller-supplied inputs.
pub const INPUT_TOL: f64 = 1e-8;
/// Below this, a probability or norm is treated as zero.
pub const DEGENERACY_TOL: f64 = 1e-14;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// `exp(2πi k / d)`, reduced modulo `d` before evaluating the angle.
pub fn root_of_unity(k: i64, d: usize) -> C64 {
    let d = d as i64;
    let r = k.rem_euclid(d);
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / d as f64)
}

/// Kronecker product; the left factor is the most significant.
pub trait Kron {
    fn kron(&self, other: &Self) -> Self;
}

pub fn kron<T: Kron>(a: &T, b: &T) -> T {
    a.kron(b)
}

/// A dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec {
    entries: Vec<C64>,
}

impl ComplexVec {
    pub fn new(entries: Vec<C64>) -> Self {
        ComplexVec { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVec {
            entries: vec![ZERO; dim],
        }
    }

    /// Computational basis vector `|k⟩` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = ONE;
        v
    }

    pub fn from_reals(values: &[f64]) -> Self {
        ComplexVec {
            entries: values.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.entries.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EQ_TOL
    }

    /// Errors unless the squared norm is within `tol` of one.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(())
    }

    /// Returns the vector scaled to unit norm, or `None` for a (numerically) zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n <= DEGENERACY_TOL {
            return None;
        }
        Some(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexVec {
            entries: self.entries.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexVec {
            entries: self.entries.iter().map(|c| c.conj()).collect(),
        }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Distance after aligning the global phase of `other` to `self`.
    pub fn distance_up_to_phase(&self, other: &Self) -> Result<f64> {
        let overlap = other.inner(self)?;
        let phase = if overlap.norm() > DEGENERACY_TOL {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.distance(&other.scale(phase))
    }

    /// Largest entry-wise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Kron for ComplexVec {
    fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            entries.extend(other.entries.iter().map(|b| a * b));
        }
        ComplexVec { entries }
    }
}

impl Index<usize> for ComplexVec {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl IndexMut<usize> for ComplexVec {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.entries[i]
    }
}

impl From<Vec<C64>> for ComplexVec {
    fn from(entries: Vec<C64>) -> Self {
        ComplexVec { entries }
    }
}

/// `⟨u|v⟩`.
pub fn inner(u: &ComplexVec, v: &ComplexVec) -> Result<C64> {
    u.inner(v)
}

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMat {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMat {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ComplexMat {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(ComplexMat {
            rows,
            cols,
            entries,
        })
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &ComplexVec, v: &ComplexVec) -> Self {
        Self::from_fn(u.dim(), v.dim(), |r, c| u[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.entries[r * other.cols + c] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVec) -> Result<ComplexVec> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.entries[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect::<Vec<_>>()
            .into())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.entries.len(),
                found: other.entries.len(),
            });
        }
        Ok(ComplexMat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest entry-wise `|self − other|`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> ComplexVec {
        (0..self.rows)
            .map(|r| self[(r, c)])
            .collect::<Vec<_>>()
            .into()
    }
}

impl Kron for ComplexMat {
    fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }
}

impl Index<(usize, usize)> for ComplexMat {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.entries[r * self.cols + c]
    }
}

/// Gram matrix `G[i][j] = ⟨v_i|v_j⟩`.
pub fn gram_matrix(vectors: &[ComplexVec]) -> Result<ComplexMat> {
    let n = vectors.len();
    let mut g = ComplexMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = vectors[i].inner(&vectors[j])?;
        }
    }
    Ok(g)
}

/// Largest entry of `|G − I|` for the Gram matrix of `vectors`.
pub fn orthonormality_error(vectors: &[ComplexVec]) -> Result<f64> {
    let g = gram_matrix(vectors)?;
    Ok(g.max_abs_diff(&ComplexMat::identity(vectors.len())))
}

/// Local dimensions of a multi-qudit register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterShape {
    sites: Vec<usize>,
}

impl RegisterShape {
    pub fn new(sites: Vec<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidShape("register has no sites".into()));
        }
        if let Some(&bad) = sites.iter().find(|&&s| s < 2) {
            return Err(Error::InvalidShape(format!(
                "local dimension {bad} is below 2"
            )));
        }
        Ok(RegisterShape { sites })
    }

    /// `count` sites of dimension `d`.
    pub fn uniform(d: usize, count: usize) -> Result<Self> {
        Self::new(vec![d; count])
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn dim(&self) -> usize {
        self.sites.iter().product()
    }

    /// Place value of each site.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.sites.len()];
        for i in (0..self.sites.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.sites[i + 1];
        }
        strides
    }

    pub fn flat_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.sites.len() {
            return Err(Error::DimensionMismatch {
                expected: self.sites.len(),
                found: digits.len(),
            });
        }
        let mut idx = 0;
        for (&k, &d) in digits.iter().zip(&self.sites) {
            if k >= d {
                return Err(Error::InvalidShape(format!(
                    "digit {k} out of range 0..{d}"
                )));
            }
            idx = idx * d + k;
        }
        Ok(idx)
    }

    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut digits = vec![0; self.sites.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.sites).rev() {
            *slot = flat % d;
            flat /= d;
        }
        digits
    }

    /// Validates targets and returns, for every sub-index over the targets
    /// (big-endian in the order given), its offset into the flat register, and
    /// the ascending list of flat indices whose target digits are all zero.
    fn split(&self, targets: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.sites.len() {
                return Err(Error::InvalidShape(format!(
                    "target site {t} out of range for {} sites",
                    self.sites.len()
                )));
            }
            if targets[..i].contains(&t) {
                return Err(Error::InvalidShape(format!("target site {t} repeated")));
            }
        }
        let strides = self.strides();
        let target_shape: Vec<usize> = targets.iter().map(|&t| self.sites[t]).collect();
        let target_dim: usize = target_shape.iter().product();

        let mut offsets = Vec::with_capacity(target_dim);
        for sub in 0..target_dim {
            let mut rem = sub;
            let mut off = 0;
            for (k, &t) in targets.iter().enumerate().rev() {
                off += (rem % target_shape[k]) * strides[t];
                rem /= target_shape[k];
            }
            offsets.push(off);
        }

        let bases = (0..self.dim())
            .filter(|&idx| {
                targets
                    .iter()
                    .all(|&t| (idx / strides[t]).is_multiple_of(self.sites[t]))
            })
            .collect();
        Ok((offsets, bases))
    }
}

/// Applies `op` to the `targets` sites of `state`, identity elsewhere.
///
/// The operator's index layout follows `targets` in the order given.
pub fn apply_to_subsystems(
    op: &ComplexMat,
    targets: &[usize],
    state: &ComplexVec,
    shape: &RegisterShape,
) -> Result<ComplexVec> {
    if state.dim() != shape.dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.dim(),
            found: state.dim(),
        });
    }
    let (offsets, bases) = shape.split(targets)?;
    if !op.is_square() || op.rows() != offsets.len() {
        return Err(Error::InvalidShape(format!(
            "operator is {}x{} but targets span dimension {}",
            op.rows(),
            op.cols(),
            offsets.len()
        )));
    }
    let mut out = ComplexVec::zeros(state.dim());
    let mut local = vec![ZERO; offsets.len()];
    for base in bases {
        for (slot, &off) in local.iter_mut().zip(&offsets) {
            *slot = state[base + off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            out[base + off] = (0..offsets.len()).map(|c| op[(r, c)] * local[c]).sum();
        }
    }
    Ok(out)
}

/// Projects `targets` of `state` onto `basis_vec`.
///
/// Returns the Born probability and the conditional state of the remaining
/// sites (in their register order), renormalized; the residual is the zero
/// vector when the probability is below [`DEGENERACY_TOL`]. When every site is
/// targeted the residual is a one-dimensional scalar remainder.
pub fn project(
    state: &ComplexVec,
    basis_vec: &ComplexVec,
    targets: &[usize],
    shape: &RegisterShape,
) -> Result<(f64, ComplexVec)> {
    let (prob, residual) = project_unnormalized(state, basis_vec, targets, shape)?;
    if prob <= DEGENERACY_TOL {
        return Ok((prob, ComplexVec::zeros(residual.dim())));
    }
    Ok((prob, residual.scale(C64::new(1.0 / prob.sqrt(), 0.0))))
}

/// As [`project`], but returns the raw partial inner product.
pub fn project_unnormalized(
    state: &ComplexVec,
    basis_vec: &ComplexVec,
    targets: &[usize],
    shape: &RegisterShape,
) -> Result<(f64, ComplexVec)> {
    let mut out =
        project_each_unnormalized(state, std::slice::from_ref(basis_vec), targets, shape)?;
    Ok(out.remove(0))
}

/// Projects `targets` of `state` onto each of `basis_vecs` in turn, with the
/// same conventions as [`project`].
pub fn project_each(
    state: &ComplexVec,
    basis_vecs: &[ComplexVec],
    targets: &[usize],
    shape: &RegisterShape,
) -> Result<Vec<(f64, ComplexVec)>> {
    Ok(
        project_each_unnormalized(state, basis_vecs, targets, shape)?
            .into_iter()
            .map(|(prob, residual)| {
                if prob <= DEGENERACY_TOL {
                    (prob, ComplexVec::zeros(residual.dim()))
                } else {
                    (prob, residual.scale(C64::new(1.0 / prob.sqrt(), 0.0)))
                }
            })
            .collect(),
    )
}

fn project_each_unnormalized(
    state: &ComplexVec,
    basis_vecs: &[ComplexVec],
    targets: &[usize],
    shape: &RegisterShape,
) -> Result<Vec<(f64, ComplexVec)>> {
    if state.dim() != shape.dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.dim(),
            found: state.dim(),
        });
    }
    state.check_normalized(INPUT_TOL)?;
    let (offsets, bases) = shape.split(targets)?;
    basis_vecs
        .iter()
        .map(|basis_vec| {
            if basis_vec.dim() != offsets.len() {
                return Err(Error::DimensionMismatch {
                    expected: offsets.len(),
                    found: basis_vec.dim(),
                });
            }
            basis_vec.check_normalized(INPUT_TOL)?;
            let residual: ComplexVec = bases
                .iter()
                .map(|&base| {
                    offsets
                        .iter()
                        .zip(basis_vec.iter())
                        .map(|(&off, b)| b.conj() * state[base + off])
                        .sum::<C64>()
                })
                .collect::<Vec<_>>()
                .into();
            Ok((residual.norm_sqr(), residual))
        })
        .collect()
}

/// Orthonormalizes `seed_vectors` in input order.
///
/// The first `keep_first` vectors must already be orthonormal; they are
/// returned unchanged. Later vectors whose norm after projection falls below
/// [`EQ_TOL`] are dropped.
pub fn gram_schmidt(seed_vectors: &[ComplexVec], keep_first: usize) -> Result<Vec<ComplexVec>> {
    if keep_first > seed_vectors.len() {
        return Err(Error::InvalidShape(format!(
            "keep_first {keep_first} exceeds {} inputs",
            seed_vectors.len()
        )));
    }
    if let Some(first) = seed_vectors.first() {
        if let Some(v) = seed_vectors.iter().find(|v| v.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: v.dim(),
            });
        }
    }
    let head = &seed_vectors[..keep_first];
    let deviation = orthonormality_error(head)?;
    if deviation > EQ_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }

    let mut out: Vec<ComplexVec> = head.to_vec();
    for v in &seed_vectors[keep_first..] {
        let mut w = v.clone();
        // Two passes of modified Gram-Schmidt keep the result orthogonal to
        // working precision.
        for _ in 0..2 {
            for u in &out {
                let c = u.inner(&w)?;
                for (wi, ui) in w.entries.iter_mut().zip(u.iter()) {
                    *wi -= c * ui;
                }
            }
        }
        let n = w.norm();
        if n < EQ_TOL {
            continue;
        }
        out.push(w.scale(C64::new(1.0 / n, 0.0)));
    }
    Ok(out)
}

/// Schmidt decomposition of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct Schmidt {
    /// Schmidt weights, descending; they sum to one.
    pub lambdas: Vec<f64>,
    /// Left-site vectors. Zero for vanishing weights.
    pub left: Vec<ComplexVec>,
    /// Right-site vectors. Zero for vanishing weights.
    pub right: Vec<ComplexVec>,
}

impl Schmidt {
    /// `Σ √λ_j |L_j⟩|R_j⟩`.
    pub fn reconstruct(&self) -> ComplexVec {
        let dim = self.left.first().map_or(0, ComplexVec::dim)
            * self.right.first().map_or(0, ComplexVec::dim);
        let mut out = ComplexVec::zeros(dim);
        for ((&l, u), v) in self.lambdas.iter().zip(&self.left).zip(&self.right) {
            let term = u.kron(v);
            let s = l.sqrt();
            for (o, t) in out.entries.iter_mut().zip(term.iter()) {
                *o += t * s;
            }
        }
        out
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Schmidt decomposition via one-sided (Hestenes) Jacobi SVD of the
/// coefficient matrix `A[i][k] = ⟨ik|ψ⟩`.
///
/// Ties among the weights keep the original column order.
pub fn schmidt_decompose(state: &ComplexVec, shape: &RegisterShape) -> Result<Schmidt> {
    if shape.num_sites() != 2 {
        return Err(Error::InvalidShape(format!(
            "Schmidt decomposition needs 2 sites, got {}",
            shape.num_sites()
        )));
    }
    if state.dim() != shape.dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.dim(),
            found: state.dim(),
        });
    }
    state.check_normalized(INPUT_TOL)?;
    let (rows, cols) = (shape.sites()[0], shape.sites()[1]);

    let mut a: Vec<Vec<C64>> = (0..cols)
        .map(|k| (0..rows).map(|i| state[i * cols + k]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|k| (0..cols).map(|i| if i == k { ONE } else { ZERO }).collect())
        .collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = a[p].iter().map(|c| c.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|c| c.norm_sqr()).sum();
                let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g < 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = a
        .iter()
        .enumerate()
        .map(|(k, col)| (k, col.iter().map(|c| c.norm_sqr()).sum::<f64>()))
        .collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));
    order.truncate(rows.min(cols));

    let mut lambdas = Vec::with_capacity(order.len());
    let mut left = Vec::with_capacity(order.len());
    let mut right = Vec::with_capacity(order.len());
    for (k, weight) in order {
        let sigma = weight.sqrt();
        if sigma <= DEGENERACY_TOL {
            lambdas.push(0.0);
            left.push(ComplexVec::zeros(rows));
            right.push(ComplexVec::zeros(cols));
        } else {
            lambdas.push(weight);
            left.push(a[k].iter().map(|c| c / sigma).collect::<Vec<_>>().into());
            right.push(v[k].iter().map(|c| c.conj()).collect::<Vec<_>>().into());
        }
    }
    Ok(Schmidt {
        lambdas,
        left,
        right,
    })
}

/// Rotates columns `p`, `q` after rephasing `q` by `phase`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let x = *xp;
        let y = *xq * phase;
        *xp = x * c - y * s;
        *xq = x * s + y * c;
    }
}
