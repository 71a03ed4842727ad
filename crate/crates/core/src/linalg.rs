//! Dense complex linear algebra sized for few-qubit problems.
//!
//! Everything here works on [`ComplexMatrix`], a square row-major matrix of
//! `Complex64`. Tensor-factor layouts are always passed explicitly as a list
//! of subsystem dimensions; the first factor is the most significant index.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Elementwise Hermiticity tolerance, relative to the largest entry magnitude.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square.
    pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() || dim == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a non-empty square matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_entries(
            rows.iter()
                .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// The outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal lengths");
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on unequal dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.max_abs().max(1.0)
    }

    /// `(M + M†)/2`, used to scrub round-off before eigendecomposition.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `⟨v| M |v⟩`.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        self.mul_vec(v)
            .iter()
            .zip(v)
            .map(|(mv, vi)| vi.conj() * mv)
            .sum()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Unitary similarity `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V†` for a real scalar function of the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .filter(|&k| fl[k] != 0.0)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops below `1e-13`
/// (scaled by the matrix norm when that exceeds one).
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    let scale = m.max_abs().max(1.0);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let tol = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) < tol;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_norm(&a) < tol;
    }
    if !converged {
        return Err(Error::EigenNoConvergence {
            sweeps,
            residual: off_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `a[p][q]` with the unitary `G = diag(1, e^{-iφ}) R(θ)` on the
/// (p, q) plane, where `a[p][q] = |a[p][q]| e^{iφ}`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let n = a.dim();
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = [[c, s], [-s·conj(phase), c·conj(phase)]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    // A <- A G
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * g_pp + arq * g_qp;
        a[(r, q)] = arp * g_pq + arq * g_qq;
    }
    // A <- G† A
    for col in 0..n {
        let apc = a[(p, col)];
        let aqc = a[(q, col)];
        a[(p, col)] = g_pp.conj() * apc + g_qp.conj() * aqc;
        a[(q, col)] = g_pq.conj() * apc + g_qq.conj() * aqc;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * g_pp + vrq * g_qp;
        v[(r, q)] = vrp * g_pq + vrq * g_qq;
    }
}

/// Base-2 logarithm restricted to the support, together with the support projector.
#[derive(Clone, Debug)]
pub struct SupportLog {
    pub log: ComplexMatrix,
    pub support_projector: ComplexMatrix,
}

/// `Σ_{λ>τ} log₂(λ) vv†` and `Σ_{λ>τ} vv†` for a positive semidefinite matrix.
pub fn matrix_log2_on_support(m: &ComplexMatrix) -> Result<SupportLog> {
    let eig = hermitian_eig(m)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -SUPPORT_TOL {
        return Err(Error::NotPositiveSemidefinite(min));
    }
    Ok(SupportLog {
        log: eig.map_spectrum(|l| if l > SUPPORT_TOL { l.log2() } else { 0.0 }),
        support_projector: eig.map_spectrum(|l| if l > SUPPORT_TOL { 1.0 } else { 0.0 }),
    })
}

/// `exp(iH)` for Hermitian `H`.
pub fn expm_i_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let n = h.dim();
    let v = &eig.eigenvectors;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, l))
        .collect();
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).sum()
    }))
}

/// Trace norm `Σ|λᵢ|` of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Kronecker product; `(A⊗B)[i·dB+k, j·dB+l] = A[i,j]·B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let db = b.dim();
    ComplexMatrix::from_fn(a.dim() * db, |r, c| {
        a[(r / db, c / db)] * b[(r % db, c % db)]
    })
}

pub fn kron_vec(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    u.iter().flat_map(|&x| v.iter().map(move |&y| x * y)).collect()
}

fn check_layout(total: usize, dims: &[usize]) -> Result<()> {
    let prod: usize = dims.iter().product();
    if prod != total || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} (product {prod}) do not match dimension {total}"
        )));
    }
    Ok(())
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Mixed-radix digits of `index`, most significant factor first.
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Index map for a factor permutation: new factor `k` is old factor `perm[k]`.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut old = vec![0; dims.len()];
    let mut new = vec![0; dims.len()];
    (0..total)
        .map(|idx| {
            digits(idx, dims, &mut old);
            for (k, &p) in perm.iter().enumerate() {
                new[k] = old[p];
            }
            compose(&new, &new_dims)
        })
        .collect()
}

/// Reorders tensor factors so that factor `k` of the result is factor
/// `perm[k]` of the input. The result's layout is `perm.map(|p| dims[p])`.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix> {
    check_layout(m.dim(), dims)?;
    check_permutation(perm, dims.len())?;
    let map = permutation_map(dims, perm);
    let mut out = ComplexMatrix::zeros(m.dim());
    for (i, &ni) in map.iter().enumerate() {
        for (j, &nj) in map.iter().enumerate() {
            out[(ni, nj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Same relabeling as [`permute_subsystems`], applied to a ket.
pub fn permute_ket(v: &[Complex64], dims: &[usize], perm: &[usize]) -> Result<Vec<Complex64>> {
    check_layout(v.len(), dims)?;
    check_permutation(perm, dims.len())?;
    let map = permutation_map(dims, perm);
    let mut out = vec![ZERO; v.len()];
    for (i, &ni) in map.iter().enumerate() {
        out[ni] = v[i];
    }
    Ok(out)
}

/// Traces out the factors listed in `discard`; kept factors stay in order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], discard: &[usize]) -> Result<ComplexMatrix> {
    check_layout(m.dim(), dims)?;
    if let Some(&bad) = discard.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "cannot discard factor {bad} of {} factors",
            dims.len()
        )));
    }
    let keep: Vec<usize> = (0..dims.len()).filter(|k| !discard.contains(k)).collect();
    let gone: Vec<usize> = (0..dims.len()).filter(|k| discard.contains(k)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let gone_dims: Vec<usize> = gone.iter().map(|&k| dims[k]).collect();
    let keep_total: usize = keep_dims.iter().product();
    let gone_total: usize = gone_dims.iter().product();

    let mut full = vec![0; dims.len()];
    let mut kd = vec![0; keep.len()];
    let mut gd = vec![0; gone.len()];
    let mut index = |k_idx: usize, g_idx: usize| -> usize {
        digits(k_idx, &keep_dims, &mut kd);
        digits(g_idx, &gone_dims, &mut gd);
        for (slot, &f) in keep.iter().enumerate() {
            full[f] = kd[slot];
        }
        for (slot, &f) in gone.iter().enumerate() {
            full[f] = gd[slot];
        }
        compose(&full, dims)
    };

    let rows: Vec<Vec<usize>> = (0..keep_total)
        .map(|k| (0..gone_total).map(|g| index(k, g)).collect())
        .collect();
    Ok(ComplexMatrix::from_fn(keep_total, |i, j| {
        rows[i].iter().zip(&rows[j]).map(|(&r, &c)| m[(r, c)]).sum()
    }))
}

/// Reduced density matrix of a pure ket, keeping the listed factors in order.
/// Equivalent to tracing `|v⟩⟨v|` but never forms the full projector.
pub fn ket_marginal(v: &[Complex64], dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_layout(v.len(), dims)?;
    let mut perm: Vec<usize> = keep.to_vec();
    perm.extend((0..dims.len()).filter(|k| !keep.contains(k)));
    check_permutation(&perm, dims.len())?;
    let w = permute_ket(v, dims, &perm)?;
    let keep_total: usize = keep.iter().map(|&k| dims[k]).product();
    let rest = v.len() / keep_total;
    Ok(ComplexMatrix::from_fn(keep_total, |i, j| {
        (0..rest)
            .map(|r| w[i * rest + r] * w[j * rest + r].conj())
            .sum()
    }))
}
