//! Dense complex vectors and matrices for small dimensions.
//!
//! Inner products are conjugate-linear in the first argument. Composite
//! systems use control-major ordering: `(u ⊗ v)[i * v.dim() + k] = u[i] v[k]`.

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tol;

fn check_finite(amps: &[C64]) -> Result<()> {
    match amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Complex amplitude vector. Holds both normalized states and the
/// unnormalized post-selected branches of the game.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Empty("state vector"));
        }
        check_finite(&amps)?;
        Ok(Self { amps })
    }

    /// Builds from real amplitudes.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Builds and rescales to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        Self::new(amps)?.normalize()
    }

    /// Builds and checks that the input is already a unit vector.
    pub fn unit(amps: Vec<C64>) -> Result<Self> {
        let v = Self::new(amps)?;
        if !v.is_normalized() {
            return Err(Error::NotNormalized(v.norm()));
        }
        Ok(v)
    }

    /// Computational basis vector `|k⟩` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { what: "basis", index: k, size: dim });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { amps: vec![C64::new(0.0, 0.0); dim.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::NORMALIZED
    }

    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { amps: self.amps.iter().map(|z| z * s).collect() }
    }

    /// Entrywise `self + s * other`.
    pub fn axpy(&self, s: C64, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            amps: self.amps.iter().zip(&other.amps).map(|(x, y)| x + s * y).collect(),
        })
    }

    /// Max entrywise distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for StateVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.amps[i]
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Square matrix, row-major, checked unitary on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl UnitaryMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("unitary"));
        }
        same_dim(dim * dim, entries.len())?;
        check_finite(&entries)?;
        let u = Self { dim, entries };
        let dev = u.unitarity_deviation();
        if dev > tol::CONSTRUCTOR {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[StateVector]) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::Empty("unitary"));
        }
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (j, col) in columns.iter().enumerate() {
            same_dim(dim, col.dim())?;
            for (i, z) in col.amps().iter().enumerate() {
                entries[i * dim + j] = *z;
            }
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> StateVector {
        StateVector {
            amps: (0..self.dim).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.get(j, i).conj());
            }
        }
        Self { dim: d, entries }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        same_dim(self.dim, v.dim())?;
        let amps = (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v.amps())
                    .map(|(m, x)| m * x)
                    .sum()
            })
            .collect();
        Ok(StateVector { amps })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let d = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                for j in 0..d {
                    entries[i * d + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// `max |(U†U - I)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..d {
                    s += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Matrix of pairwise inner products `G[a][b] = ⟨v_a|v_b⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    size: usize,
    entries: Vec<C64>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.entries[a * self.size + b]
    }

    /// Largest `|G[a][b]|` with `a != b`; zero for a 1x1 matrix.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.size {
            for b in 0..self.size {
                if a != b {
                    worst = worst.max(self.get(a, b).norm());
                }
            }
        }
        worst
    }

    /// `max |G - I|` entrywise.
    pub fn identity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.size {
            for b in 0..self.size {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((self.get(a, b) - target).norm());
            }
        }
        worst
    }

    /// `max |G[a][b] - conj(G[b][a])|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.size {
            for b in 0..self.size {
                worst = worst.max((self.get(a, b) - self.get(b, a).conj()).norm());
            }
        }
        worst
    }
}

/// `Σ_k conj(u_k) v_k`.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Result<C64> {
    same_dim(u.dim(), v.dim())?;
    Ok(u.amps.iter().zip(&v.amps).map(|(x, y)| x.conj() * y).sum())
}

pub fn tensor(u: &StateVector, v: &StateVector) -> StateVector {
    let mut amps = Vec::with_capacity(u.dim() * v.dim());
    for x in u.amps() {
        for y in v.amps() {
            amps.push(x * y);
        }
    }
    StateVector { amps }
}

pub fn apply(u: &UnitaryMatrix, v: &StateVector) -> Result<StateVector> {
    u.apply(v)
}

pub fn dagger(u: &UnitaryMatrix) -> UnitaryMatrix {
    u.dagger()
}

pub fn gram(vectors: &[StateVector]) -> Result<GramMatrix> {
    let size = vectors.len();
    if size == 0 {
        return Err(Error::Empty("gram"));
    }
    let dim = vectors[0].dim();
    for v in vectors {
        same_dim(dim, v.dim())?;
    }
    let mut entries = vec![C64::new(0.0, 0.0); size * size];
    for a in 0..size {
        for b in a..size {
            let g = inner_product(&vectors[a], &vectors[b])?;
            entries[a * size + b] = g;
            entries[b * size + a] = g.conj();
        }
        // diagonal is real by construction
        entries[a * size + a] = C64::new(vectors[a].norm_sqr(), 0.0);
    }
    Ok(GramMatrix { size, entries })
}

/// Modified Gram–Schmidt. Vectors whose residual norm falls below `tol` are
/// dropped, so the output may be shorter than the input.
pub fn orthonormalize(vectors: &[StateVector], tol: f64) -> Result<Vec<StateVector>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let dim = first.dim();
    let mut out: Vec<StateVector> = Vec::new();
    for v in vectors {
        same_dim(dim, v.dim())?;
        let mut w = v.clone();
        // two passes keep the output orthogonal to ~1e-15 even for
        // nearly dependent inputs
        for _ in 0..2 {
            for q in &out {
                let c = inner_product(q, &w)?;
                w = w.axpy(-c, q)?;
            }
        }
        let n = w.norm();
        if n >= tol && n > 0.0 {
            out.push(w.scale(C64::new(1.0 / n, 0.0)));
        }
        if out.len() == dim {
            break;
        }
    }
    Ok(out)
}

/// Extends an orthonormal family to a full basis of `dim` using the
/// computational basis vectors as candidates.
pub fn complete_basis(partial: &[StateVector], dim: usize) -> Result<Vec<StateVector>> {
    let mut candidates = partial.to_vec();
    for k in 0..dim {
        candidates.push(StateVector::basis(dim, k)?);
    }
    let full = orthonormalize(&candidates, 1e-6)?;
    if full.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: full.len() });
    }
    Ok(full)
}

/// Outer-product sum `Σ_a u_a u_a†` as a dense matrix.
pub fn outer_sum(vectors: &[StateVector]) -> Result<DMatrix<C64>> {
    let dim = vectors.first().ok_or(Error::Empty("outer sum"))?.dim();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for v in vectors {
        same_dim(dim, v.dim())?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    Ok(m)
}

/// Eigendecomposition of a Hermitian matrix. Eigenvectors are the columns of
/// the returned matrix.
pub fn hermitian_eigen(m: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = m.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `M^{-1/2}` on the support of a positive semidefinite Hermitian matrix;
/// eigenvalues below `floor` are treated as zero.
pub fn inverse_sqrt_psd(m: DMatrix<C64>, floor: f64) -> DMatrix<C64> {
    let n = m.nrows();
    let (vals, vecs) = hermitian_eigen(m);
    let mut out = DMatrix::<C64>::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= floor {
            continue;
        }
        let s = 1.0 / lam.sqrt();
        let col = vecs.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * s;
            }
        }
    }
    out
}
