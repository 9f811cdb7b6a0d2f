//! Dense complex linear algebra over small labeled composite Hilbert spaces.
//!
//! Subsystems are identified by opaque string labels; the factor order of a
//! [`HilbertSpace`] is the canonical ordering for entry layout (factor 0 is
//! the most significant index, matching the Kronecker product convention).
//! All values are immutable after construction and safe to share across
//! threads.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::Tolerances;
use crate::{CMatrix, CVector};

/// An ordered list of labeled subsystem factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    factors: Vec<(String, usize)>,
}

impl HilbertSpace {
    /// Builds a space from `(label, dimension)` pairs.
    ///
    /// Labels must be unique and dimensions positive.
    pub fn new<I, S>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let factors: Vec<(String, usize)> =
            factors.into_iter().map(|(l, d)| (l.into(), d)).collect();
        if factors.is_empty() {
            return Err(Error::EmptyInput("space needs at least one factor".into()));
        }
        for (i, (label, dim)) in factors.iter().enumerate() {
            if *dim == 0 {
                return Err(Error::InvalidParameter(format!(
                    "factor {label:?} has dimension 0"
                )));
            }
            if factors[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::LabelCollision(label.clone()));
            }
        }
        Ok(Self { factors })
    }

    /// Single-factor space.
    pub fn single(label: impl Into<String>, dim: usize) -> Self {
        Self::new([(label.into(), dim)]).expect("single factor is always valid")
    }

    /// Total dimension (product of factor dimensions).
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| d).product()
    }

    /// Factor list in canonical order.
    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    /// Labels in canonical order.
    pub fn labels(&self) -> Vec<&str> {
        self.factors.iter().map(|(l, _)| l.as_str()).collect()
    }

    /// Position of a label in the factor list.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Dimension of one labeled factor.
    pub fn factor_dim(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.position(label)?].1)
    }

    /// Concatenates two spaces; labels must be disjoint.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        for (l, _) in &other.factors {
            if self.factors.iter().any(|(sl, _)| sl == l) {
                return Err(Error::LabelCollision(l.clone()));
            }
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::new(factors)
    }

    /// Flat index of a multi-index given per-factor indices.
    pub fn flat_index(&self, indices: &[usize]) -> usize {
        assert_eq!(indices.len(), self.factors.len());
        let mut flat = 0;
        for ((_, d), &i) in self.factors.iter().zip(indices) {
            assert!(i < *d);
            flat = flat * d + i;
        }
        flat
    }

    /// Per-factor indices of a flat index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (k, (_, d)) in self.factors.iter().enumerate().rev() {
            out[k] = flat % d;
            flat /= d;
        }
        out
    }
}

fn all_finite_mat(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn all_finite_vec(v: &CVector) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max entrywise deviation from Hermiticity, max |A - A^H|.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Full Hermitian eigendecomposition; returns `(eigenvalues, eigenvectors)`
/// with columns of the matrix as eigenvectors, sorted ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.nrows();
    let mut vecs = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// A dense operator on a labeled composite space.
#[derive(Debug, Clone)]
pub struct Operator {
    space: HilbertSpace,
    mat: CMatrix,
}

impl Operator {
    /// Wraps a matrix after checking squareness, dimension and finiteness.
    pub fn new(space: HilbertSpace, mat: CMatrix) -> Result<Self> {
        let d = space.dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, space dimension is {d}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !all_finite_mat(&mat) {
            return Err(Error::NonFinite);
        }
        Ok(Self { space, mat })
    }

    /// Identity on a space.
    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self { mat: CMatrix::identity(d, d), space }
    }

    /// Zero operator on a space.
    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self { mat: CMatrix::zeros(d, d), space }
    }

    /// Embeds a single-factor matrix into the composite space as
    /// I ⊗ … ⊗ M ⊗ … ⊗ I at the position of `label`.
    pub fn embed(space: &HilbertSpace, label: &str, local: &CMatrix) -> Result<Self> {
        let pos = space.position(label)?;
        let d_local = space.factors()[pos].1;
        if local.nrows() != d_local || local.ncols() != d_local {
            return Err(Error::DimensionMismatch(format!(
                "local matrix is {}x{}, factor {label:?} has dimension {d_local}",
                local.nrows(),
                local.ncols()
            )));
        }
        let mut acc = CMatrix::identity(1, 1);
        for (k, (_, d)) in space.factors().iter().enumerate() {
            if k == pos {
                acc = acc.kronecker(local);
            } else {
                acc = acc.kronecker(&CMatrix::identity(*d, *d));
            }
        }
        Self::new(space.clone(), acc)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), mat: self.mat.adjoint() }
    }

    /// Checks the Hermitian-flag invariant: max|A − A^H| ≤ 1e−12 · max|A|.
    pub fn is_hermitian(&self) -> bool {
        let scale = max_abs(&self.mat).max(1e-300);
        hermiticity_deviation(&self.mat) <= 1e-12 * scale
    }

    /// Validates the Hermitian flag, returning the operator on success.
    pub fn hermitian_checked(self) -> Result<Self> {
        if self.is_hermitian() {
            Ok(self)
        } else {
            Err(Error::NotHermitian { deviation: hermiticity_deviation(&self.mat) })
        }
    }

    /// Applies the operator to a state vector.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.space != psi.space {
            return Err(Error::DimensionMismatch("operator/state space mismatch".into()));
        }
        StateVector::new_unnormalized(self.space.clone(), &self.mat * &psi.vec)
    }

    /// Operator product; spaces must match.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("operator space mismatch".into()));
        }
        Self::new(self.space.clone(), &self.mat * &other.mat)
    }

    /// Linear combination helper: self + c * other.
    pub fn add_scaled(&self, c: C64, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("operator space mismatch".into()));
        }
        Self::new(self.space.clone(), &self.mat + &other.mat * c)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { space: self.space.clone(), mat: &self.mat * c }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// JSON-friendly view, row-major.
    pub fn to_json(&self) -> ArrayJson {
        ArrayJson::from_matrix(&self.space, &self.mat)
    }

    /// Rebuilds an operator from its JSON view.
    pub fn from_json(json: &ArrayJson) -> Result<Self> {
        let (space, mat) = json.to_matrix()?;
        Self::new(space, mat)
    }
}

/// A normalized pure state on a labeled composite space.
#[derive(Debug, Clone)]
pub struct StateVector {
    space: HilbertSpace,
    vec: CVector,
}

impl StateVector {
    /// Wraps an amplitude vector, requiring norm within tolerance of 1.
    pub fn new(space: HilbertSpace, vec: CVector) -> Result<Self> {
        Self::new_with(space, vec, &Tolerances::default())
    }

    pub fn new_with(space: HilbertSpace, vec: CVector, tol: &Tolerances) -> Result<Self> {
        let state = Self::new_unnormalized(space, vec)?;
        let norm = state.vec.norm();
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::BadNorm { deviation: (norm - 1.0).abs() });
        }
        Ok(state)
    }

    /// Wraps amplitudes without the unit-norm check (finiteness and
    /// dimension are still enforced). Used by intermediate computations.
    pub fn new_unnormalized(space: HilbertSpace, vec: CVector) -> Result<Self> {
        if vec.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs space dimension {}",
                vec.len(),
                space.dim()
            )));
        }
        if !all_finite_vec(&vec) {
            return Err(Error::NonFinite);
        }
        Ok(Self { space, vec })
    }

    /// Normalizes and wraps.
    pub fn normalized(space: HilbertSpace, vec: CVector) -> Result<Self> {
        let n = vec.norm();
        if n == 0.0 {
            return Err(Error::InvalidParameter("cannot normalize the zero vector".into()));
        }
        Self::new_unnormalized(space, vec / C64::new(n, 0.0))
    }

    /// Computational basis state |i₀ i₁ …⟩ given per-factor indices.
    pub fn basis(space: HilbertSpace, indices: &[usize]) -> Self {
        let flat = space.flat_index(indices);
        let mut vec = CVector::zeros(space.dim());
        vec[flat] = C64::new(1.0, 0.0);
        Self { space, vec }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("state space mismatch".into()));
        }
        Ok(self.vec.dotc(&other.vec))
    }

    /// Outer product |self⟩⟨self| as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        let mat = &self.vec * self.vec.adjoint();
        DensityMatrix { space: self.space.clone(), mat }
    }

    pub fn to_json(&self) -> ArrayJson {
        ArrayJson {
            labels: self.space.factors().iter().map(|(l, _)| l.clone()).collect(),
            dims: self.space.factors().iter().map(|(_, d)| *d).collect(),
            re: self.vec.iter().map(|z| z.re).collect(),
            im: self.vec.iter().map(|z| z.im).collect(),
        }
    }
}

/// A density matrix on a labeled composite space.
///
/// Validated to be Hermitian, unit-trace, and positive semidefinite within
/// tolerance at construction.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    space: HilbertSpace,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(space: HilbertSpace, mat: CMatrix) -> Result<Self> {
        Self::new_with(space, mat, &Tolerances::default())
    }

    pub fn new_with(space: HilbertSpace, mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        let d = space.dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, space dimension is {d}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !all_finite_mat(&mat) {
            return Err(Error::NonFinite);
        }
        let herm_dev = hermiticity_deviation(&mat);
        if herm_dev > tol.hermitian.max(1e-10) {
            return Err(Error::NotHermitian { deviation: herm_dev });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::BadTrace { deviation: (tr - C64::new(1.0, 0.0)).norm() });
        }
        // Symmetrize before the eigenvalue check so roundoff in the input
        // does not leak into the spectrum.
        let herm = (&mat + mat.adjoint()) * C64::new(0.5, 0.0);
        let min_eig = hermitian_eigenvalues(&herm)[0];
        if min_eig < tol.psd {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(Self { space, mat: herm })
    }

    /// Pure-state density matrix.
    pub fn from_pure(psi: &StateVector) -> Self {
        psi.projector()
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.dim();
        let mat = CMatrix::identity(d, d) / C64::new(d as f64, 0.0);
        Self { space, mat }
    }

    /// Wraps a matrix without validation checks. For intermediate states
    /// whose validity is established by construction (channel outputs,
    /// conditioned states); prefer [`DensityMatrix::new`] elsewhere.
    pub fn from_matrix_unchecked(space: HilbertSpace, mat: CMatrix) -> Self {
        Self { space, mat }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Eigenvalues of the (Hermitized) matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        hermitian_eigenvalues(&herm)
    }

    /// Convex mixture λ·self + (1−λ)·other.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("density space mismatch".into()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!("mixing weight {lambda} not in [0,1]")));
        }
        let mat = &self.mat * C64::new(lambda, 0.0) + &other.mat * C64::new(1.0 - lambda, 0.0);
        Ok(Self { space: self.space.clone(), mat })
    }

    pub fn to_json(&self) -> ArrayJson {
        ArrayJson::from_matrix(&self.space, &self.mat)
    }

    pub fn from_json(json: &ArrayJson) -> Result<Self> {
        let (space, mat) = json.to_matrix()?;
        Self::new(space, mat)
    }
}

/// Row-major JSON wire format shared by operators and density matrices:
/// `{labels, dims, re[], im[]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArrayJson {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ArrayJson {
    fn from_matrix(space: &HilbertSpace, mat: &CMatrix) -> Self {
        let d = space.dim();
        let mut re = Vec::with_capacity(d * d);
        let mut im = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                re.push(mat[(i, j)].re);
                im.push(mat[(i, j)].im);
            }
        }
        Self {
            labels: space.factors().iter().map(|(l, _)| l.clone()).collect(),
            dims: space.factors().iter().map(|(_, d)| *d).collect(),
            re,
            im,
        }
    }

    fn to_matrix(&self) -> Result<(HilbertSpace, CMatrix)> {
        if self.labels.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("labels/dims length mismatch".into()));
        }
        let space =
            HilbertSpace::new(self.labels.iter().cloned().zip(self.dims.iter().copied()))?;
        let d = space.dim();
        if self.re.len() != d * d || self.im.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "entry arrays have length {}, expected {}",
                self.re.len(),
                d * d
            )));
        }
        let mut mat = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let k = i * d + j;
                mat[(i, j)] = C64::new(self.re[k], self.im[k]);
            }
        }
        Ok((space, mat))
    }
}

/// Kronecker product of two operators on disjoint-label spaces.
pub fn tensor_op(a: &Operator, b: &Operator) -> Result<Operator> {
    let space = a.space.tensor(&b.space)?;
    Operator::new(space, a.mat.kronecker(&b.mat))
}

/// Kronecker product of two states on disjoint-label spaces.
pub fn tensor_state(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let space = a.space.tensor(&b.space)?;
    StateVector::new_unnormalized(space, a.vec.kronecker(&b.vec))
}

/// Kronecker product of two density matrices on disjoint-label spaces.
pub fn tensor_density(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let space = a.space.tensor(&b.space)?;
    Ok(DensityMatrix::from_matrix_unchecked(space, a.mat.kronecker(&b.mat)))
}

/// Partial trace keeping the listed labels (in their original order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyInput("must keep at least one subsystem".into()));
    }
    let space = rho.space();
    for label in keep {
        space.position(label)?;
    }
    let n = space.factors().len();
    let keep_mask: Vec<bool> = space
        .factors()
        .iter()
        .map(|(l, _)| keep.contains(&l.as_str()))
        .collect();

    let kept_factors: Vec<(String, usize)> = space
        .factors()
        .iter()
        .filter(|(l, _)| keep.contains(&l.as_str()))
        .cloned()
        .collect();
    let out_space = HilbertSpace::new(kept_factors)?;
    let d_out = out_space.dim();
    let traced_dims: Vec<usize> = space
        .factors()
        .iter()
        .zip(&keep_mask)
        .filter(|(_, &k)| !k)
        .map(|((_, d), _)| *d)
        .collect();
    let d_traced: usize = traced_dims.iter().product();

    let mut out = CMatrix::zeros(d_out, d_out);
    let mut row_full = vec![0usize; n];
    let mut col_full = vec![0usize; n];
    for i_out in 0..d_out {
        let i_multi = out_space.multi_index(i_out);
        for j_out in 0..d_out {
            let j_multi = out_space.multi_index(j_out);
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..d_traced {
                // Decode the traced multi-index.
                let mut t_rem = t;
                let mut t_multi = vec![0usize; traced_dims.len()];
                for (k, d) in traced_dims.iter().enumerate().rev() {
                    t_multi[k] = t_rem % d;
                    t_rem /= d;
                }
                let mut ik = 0;
                let mut tk = 0;
                for (pos, &is_kept) in keep_mask.iter().enumerate() {
                    if is_kept {
                        row_full[pos] = i_multi[ik];
                        col_full[pos] = j_multi[ik];
                        ik += 1;
                    } else {
                        row_full[pos] = t_multi[tk];
                        col_full[pos] = t_multi[tk];
                        tk += 1;
                    }
                }
                acc += rho.matrix()[(space.flat_index(&row_full), space.flat_index(&col_full))];
            }
            out[(i_out, j_out)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out_space, out))
}

/// Expectation value tr(Aρ).
pub fn expectation(a: &Operator, rho: &DensityMatrix) -> Result<C64> {
    if a.space() != rho.space() {
        return Err(Error::DimensionMismatch("operator/density space mismatch".into()));
    }
    Ok((a.matrix() * rho.matrix()).trace())
}

/// Overlap ⟨ψ|ρ|ψ⟩ of a pure state with a density matrix.
///
/// The result is clamped to \\[0,1\\] only when within 1e−8 of the boundary;
/// larger excursions indicate an invalid input and are reported as errors.
pub fn fidelity_pure(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.space() != rho.space() {
        return Err(Error::DimensionMismatch("state/density space mismatch".into()));
    }
    let v = psi.amplitudes();
    let f = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
    const SLACK: f64 = 1e-8;
    if f < -SLACK {
        return Err(Error::NotPositive { min_eig: f });
    }
    if f > 1.0 + SLACK {
        return Err(Error::BadTrace { deviation: f - 1.0 });
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Local 2×2 Pauli matrices and friends.
pub mod matrices {
    use super::{C64, CMatrix};

    pub fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(1.0, 0.0),
            C64::new(1.0, 0.0), C64::new(0.0, 0.0),
        ])
    }

    pub fn pauli_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(0.0, -1.0),
            C64::new(0.0, 1.0), C64::new(0.0, 0.0),
        ])
    }

    pub fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0), C64::new(0.0, 0.0),
            C64::new(0.0, 0.0), C64::new(-1.0, 0.0),
        ])
    }

    /// Fock-space annihilation operator on `n_levels` levels (0..n_levels-1).
    pub fn annihilation(n_levels: usize) -> CMatrix {
        let mut a = CMatrix::zeros(n_levels, n_levels);
        for n in 1..n_levels {
            a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        a
    }

    /// |i⟩⟨j| on a `dim`-dimensional factor.
    pub fn ketbra(dim: usize, i: usize, j: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn qubit(label: &str) -> HilbertSpace {
        HilbertSpace::single(label, 2)
    }

    #[test]
    fn tensor_identities() {
        let i2 = Operator::identity(qubit("a"));
        let i3 = Operator::identity(HilbertSpace::single("b", 3));
        let i6 = tensor_op(&i2, &i3).unwrap();
        assert_eq!(i6.space().dim(), 6);
        assert!((i6.matrix() - CMatrix::identity(6, 6)).norm() < 1e-15);
    }

    #[test]
    fn tensor_label_collision_rejected() {
        let a = Operator::identity(qubit("a"));
        let also_a = Operator::identity(qubit("a"));
        assert!(matches!(tensor_op(&a, &also_a), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn sigma_z_tensor_identity_spectrum() {
        let sz = Operator::new(qubit("a"), matrices::pauli_z()).unwrap();
        let i2 = Operator::identity(qubit("b"));
        let prod = tensor_op(&sz, &i2).unwrap();
        let mut eigs = hermitian_eigenvalues(prod.matrix());
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(eigs[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[2], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sigma_x_tensor_sigma_x_flips_00() {
        // Oracle: direct 4x4 multiplication.
        let sx_a = Operator::new(qubit("a"), matrices::pauli_x()).unwrap();
        let sx_b = Operator::new(qubit("b"), matrices::pauli_x()).unwrap();
        let op = tensor_op(&sx_a, &sx_b).unwrap();
        let zero_zero = StateVector::basis(op.space().clone(), &[0, 0]);
        let out = op.apply(&zero_zero).unwrap();
        let one_one = StateVector::basis(op.space().clone(), &[1, 1]);
        assert_abs_diff_eq!(out.inner(&one_one).unwrap().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_bell_state() {
        let space = qubit("A").tensor(&qubit("B")).unwrap();
        let mut v = CVector::zeros(4);
        v[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[3] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = StateVector::new(space, v).unwrap();
        let rho = bell.projector();
        let reduced = partial_trace(&rho, &["A"]).unwrap();
        assert_eq!(reduced.space().dim(), 2);
        let expect = CMatrix::identity(2, 2) * c(0.5, 0.0);
        assert!((reduced.matrix() - expect).norm() < 1e-12);
        assert_abs_diff_eq!(reduced.trace().re, rho.trace().re, epsilon = 1e-10);
    }

    #[test]
    fn partial_trace_product_state() {
        let rho_a = DensityMatrix::new(
            qubit("A"),
            CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]),
        )
        .unwrap();
        let rho_b = DensityMatrix::maximally_mixed(HilbertSpace::single("B", 3));
        let joint = tensor_density(&rho_a, &rho_b).unwrap();
        let reduced = partial_trace(&joint, &["A"]).unwrap();
        assert!((reduced.matrix() - rho_a.matrix()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_unknown_label_rejected() {
        let rho = DensityMatrix::maximally_mixed(qubit("A").tensor(&qubit("B")).unwrap());
        assert!(matches!(partial_trace(&rho, &["C"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn expectation_number_on_fock_one() {
        let space = HilbertSpace::single("cavity", 4);
        let a = matrices::annihilation(4);
        let n_op = Operator::new(space.clone(), a.adjoint() * &a).unwrap();
        let one = StateVector::basis(space, &[1]);
        let val = expectation(&n_op, &one.projector()).unwrap();
        assert_abs_diff_eq!(val.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(val.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_sigma_z_on_plus() {
        let space = qubit("a");
        let sz = Operator::new(space.clone(), matrices::pauli_z()).unwrap();
        let mut v = CVector::zeros(2);
        v[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[1] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let plus = StateVector::new(space, v).unwrap();
        let val = expectation(&sz, &plus.projector()).unwrap();
        assert_abs_diff_eq!(val.re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_number_on_thermal() {
        // Oracle: geometric-series summation for a thermal state with
        // mean occupation 0.5 truncated far above.
        let levels = 60;
        let space = HilbertSpace::single("cavity", levels);
        let nbar: f64 = 0.5;
        let q = nbar / (1.0 + nbar);
        let mut diag = CMatrix::zeros(levels, levels);
        let mut norm = 0.0;
        for n in 0..levels {
            let p = q.powi(n as i32) / (1.0 + nbar);
            diag[(n, n)] = c(p, 0.0);
            norm += p;
        }
        diag /= c(norm, 0.0); // renormalize the truncation tail
        let rho = DensityMatrix::new(space.clone(), diag).unwrap();
        let a = matrices::annihilation(levels);
        let n_op = Operator::new(space, a.adjoint() * &a).unwrap();
        let val = expectation(&n_op, &rho).unwrap();
        assert_abs_diff_eq!(val.re, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn fidelity_pure_cases() {
        let space = qubit("A").tensor(&qubit("B")).unwrap();
        let mut v = CVector::zeros(4);
        v[1] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[2] = c(-std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi_minus = StateVector::new(space.clone(), v).unwrap();

        // Self-fidelity 1.
        let f = fidelity_pure(&psi_minus, &psi_minus.projector()).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);

        // Maximally mixed gives 1/4.
        let mixed = DensityMatrix::maximally_mixed(space);
        assert_abs_diff_eq!(fidelity_pure(&psi_minus, &mixed).unwrap(), 0.25, epsilon = 1e-12);

        // Linear combination: p = 0.2 gives 0.8*1 + 0.2*0.25 = 0.85.
        let mixed_in = psi_minus.projector().mix(&mixed, 0.8).unwrap();
        assert_abs_diff_eq!(fidelity_pure(&psi_minus, &mixed_in).unwrap(), 0.85, epsilon = 1e-12);
    }

    #[test]
    fn density_matrix_validation() {
        let space = qubit("a");
        // Non-hermitian rejected.
        let bad = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(space.clone(), bad).is_err());
        // Negative eigenvalue rejected.
        let neg = CMatrix::from_row_slice(2, 2, &[c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.2, 0.0)]);
        assert!(matches!(DensityMatrix::new(space.clone(), neg), Err(Error::NotPositive { .. })));
        // Wrong trace rejected.
        let tr = CMatrix::from_row_slice(2, 2, &[c(0.9, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.3, 0.0)]);
        assert!(matches!(DensityMatrix::new(space, tr), Err(Error::BadTrace { .. })));
    }

    #[test]
    fn json_round_trip() {
        let space = qubit("a").tensor(&HilbertSpace::single("cavity", 3)).unwrap();
        let a = Operator::embed(&space, "cavity", &matrices::annihilation(3)).unwrap();
        let json = a.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: ArrayJson = serde_json::from_str(&text).unwrap();
        let back = Operator::from_json(&parsed).unwrap();
        assert_eq!(back.space(), a.space());
        assert!((back.matrix() - a.matrix()).norm() < 1e-15);
    }

    #[test]
    fn embed_acts_on_correct_factor() {
        let space = qubit("atom").tensor(&HilbertSpace::single("cavity", 3)).unwrap();
        let a = Operator::embed(&space, "cavity", &matrices::annihilation(3)).unwrap();
        // a |atom=1, n=2> = sqrt(2) |atom=1, n=1>
        let in_state = StateVector::basis(space.clone(), &[1, 2]);
        let out = a.apply(&in_state).unwrap();
        let expect = StateVector::basis(space, &[1, 1]);
        let amp = expect.inner(&out).unwrap();
        assert_abs_diff_eq!(amp.re, 2f64.sqrt(), epsilon = 1e-12);
    }
}
