//! States, kets and the entropic quantities built on them.

use num_complex::Complex64;

use crate::linalg::{
    self, hermitian_eig, ket_marginal, matrix_log2_on_support, ComplexMatrix, SUPPORT_TOL, ZERO,
};
use crate::{Error, Result};

const TRACE_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;
const NEG_EIG_TOL: f64 = 1e-10;
/// Schmidt coefficients above this count towards the Schmidt rank.
pub const SCHMIDT_RANK_TOL: f64 = 1e-10;
/// `tr((I − P_σ)ρ)` above this means `ρ` leaks out of the support of `σ`.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

fn check_labels(dims: &[usize], labels: &[String], total: usize) -> Result<()> {
    if dims.len() != labels.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} dims but {} labels",
            dims.len(),
            labels.len()
        )));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::BadLabel(l.clone()));
        }
    }
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} do not multiply to {total}"
        )));
    }
    Ok(())
}

fn owned(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

fn positions(all: &[String], wanted: &[&str]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(wanted.len());
    for w in wanted {
        let p = all
            .iter()
            .position(|l| l == w)
            .ok_or_else(|| Error::BadLabel(w.to_string()))?;
        if out.contains(&p) {
            return Err(Error::BadLabel(w.to_string()));
        }
        out.push(p);
    }
    Ok(out)
}

/// A normalized pure state on labeled tensor factors.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl Ket {
    /// Requires unit norm within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>, dims: &[usize], labels: &[&str]) -> Result<Self> {
        let labels = owned(labels);
        check_labels(dims, &labels, amplitudes.len())?;
        let norm = norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("ket norm {norm} is not 1")));
        }
        Ok(Self {
            amplitudes,
            dims: dims.to_vec(),
            labels,
        })
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>, dims: &[usize], labels: &[&str]) -> Result<Self> {
        let n = norm(&amplitudes);
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect(), dims, labels)
    }

    /// Single-qubit `a|0⟩ + b|1⟩` with real amplitudes, normalized.
    pub fn qubit(a: f64, b: f64, label: &str) -> Result<Self> {
        Self::normalized(
            vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)],
            &[2],
            &[label],
        )
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `self ⊗ other`, labels concatenated.
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_labels(&dims, &labels, self.amplitudes.len() * other.amplitudes.len())?;
        Ok(Ket {
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
            dims,
            labels,
        })
    }

    /// Reorders factors to follow `order`, which must name every label once.
    pub fn reorder(&self, order: &[&str]) -> Result<Ket> {
        let perm = positions(&self.labels, order)?;
        if perm.len() != self.labels.len() {
            return Err(Error::BadLabel(format!("{order:?}")));
        }
        Ok(Ket {
            amplitudes: linalg::permute_ket(&self.amplitudes, &self.dims, &perm)?,
            dims: perm.iter().map(|&p| self.dims[p]).collect(),
            labels: owned(order),
        })
    }

    /// Reduced density matrix on the listed factors, in the listed order.
    pub fn marginal(&self, keep: &[&str]) -> Result<LabeledState> {
        let idx = positions(&self.labels, keep)?;
        let m = ket_marginal(&self.amplitudes, &self.dims, &idx)?;
        Ok(LabeledState {
            matrix: m,
            dims: idx.iter().map(|&p| self.dims[p]).collect(),
            labels: owned(keep),
        })
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A density matrix with labeled tensor factors.
#[derive(Clone, Debug)]
pub struct LabeledState {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl LabeledState {
    /// Validates trace one, Hermiticity and positivity.
    pub fn new(matrix: ComplexMatrix, dims: &[usize], labels: &[&str]) -> Result<Self> {
        let labels = owned(labels);
        check_labels(dims, &labels, matrix.dim())?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        if let Some(&min) = eig.eigenvalues.first() {
            if min < -NEG_EIG_TOL {
                return Err(Error::NotPositiveSemidefinite(min));
            }
        }
        Ok(Self {
            matrix,
            dims: dims.to_vec(),
            labels,
        })
    }

    /// Skips validation; for matrices that are states by construction.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: Vec<usize>, labels: Vec<String>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.dim());
        Self {
            matrix,
            dims,
            labels,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Traces out the named factors.
    pub fn trace_out(&self, discard: &[&str]) -> Result<LabeledState> {
        let idx = positions(&self.labels, discard)?;
        let matrix = linalg::partial_trace(&self.matrix, &self.dims, &idx)?;
        let (dims, labels) = self
            .dims
            .iter()
            .zip(&self.labels)
            .enumerate()
            .filter(|(k, _)| !idx.contains(k))
            .map(|(_, (&d, l))| (d, l.clone()))
            .unzip();
        Ok(Self::from_parts(matrix, dims, labels))
    }

    /// Keeps the named factors, in the given order.
    pub fn reduce_to(&self, keep: &[&str]) -> Result<LabeledState> {
        let keep_idx = positions(&self.labels, keep)?;
        let discard: Vec<&str> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(k, _)| !keep_idx.contains(k))
            .map(|(_, l)| l.as_str())
            .collect();
        let reduced = self.trace_out(&discard)?;
        reduced.reorder(keep)
    }

    /// Reorders factors to follow `order`, which must name every label once.
    pub fn reorder(&self, order: &[&str]) -> Result<LabeledState> {
        let perm = positions(&self.labels, order)?;
        if perm.len() != self.labels.len() {
            return Err(Error::BadLabel(format!("{order:?}")));
        }
        Ok(Self::from_parts(
            linalg::permute_subsystems(&self.matrix, &self.dims, &perm)?,
            perm.iter().map(|&p| self.dims[p]).collect(),
            owned(order),
        ))
    }

    /// Exchanges the contents of two factors of equal dimension, keeping the labels in place.
    pub fn swap_factors(&self, x: &str, y: &str) -> Result<LabeledState> {
        let idx = positions(&self.labels, &[x, y])?;
        if self.dims[idx[0]] != self.dims[idx[1]] {
            return Err(Error::DimensionMismatch(format!(
                "cannot swap {x} (dim {}) with {y} (dim {})",
                self.dims[idx[0]], self.dims[idx[1]]
            )));
        }
        let mut perm: Vec<usize> = (0..self.dims.len()).collect();
        perm.swap(idx[0], idx[1]);
        Ok(Self::from_parts(
            linalg::permute_subsystems(&self.matrix, &self.dims, &perm)?,
            self.dims.clone(),
            self.labels.clone(),
        ))
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Schmidt coefficients of `a|00⟩ + b|11⟩` with `b ≥ a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchmidtPair {
    a: f64,
    b: f64,
}

impl SchmidtPair {
    /// Accepts `a ∈ [0, 1/√2]`; `a = 0` is the product limit `|11⟩`.
    pub fn new(a: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_1_SQRT_2 + 1e-12).contains(&a) {
            return Err(Error::SchmidtOutOfRange(a));
        }
        Ok(Self::unordered(a))
    }

    /// Drops the `b ≥ a` convention, admitting any `a ∈ [0, 1]`.
    pub fn any_order(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::SchmidtOutOfRange(a));
        }
        Ok(Self::unordered(a))
    }

    fn unordered(a: f64) -> Self {
        let a = a.min(1.0);
        Self {
            a,
            b: (1.0 - a * a).max(0.0).sqrt(),
        }
    }

    pub fn maximally_entangled() -> Self {
        Self::unordered(std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Entropy of entanglement `H(a²)` in bits.
    pub fn entanglement(&self) -> f64 {
        entropy_of_probs(&[self.a * self.a, self.b * self.b])
    }
}

/// Schmidt form of a bipartite ket. Only coefficients above
/// [`SCHMIDT_RANK_TOL`] are kept, so `coefficients.len()` is the Schmidt rank.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<Complex64>>,
    pub right_basis: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }
}

/// `a|00⟩ + b|11⟩` on factors `A`, `B`.
pub fn schmidt_ket(pair: SchmidtPair) -> Ket {
    let amps = vec![
        Complex64::new(pair.a(), 0.0),
        ZERO,
        ZERO,
        Complex64::new(pair.b(), 0.0),
    ];
    Ket::new(amps, &[2, 2], &["A", "B"]).expect("a² + b² = 1 by construction")
}

/// `|k⟩⟨k|`.
pub fn dm_from_ket(k: &Ket) -> Result<LabeledState> {
    let n = norm(k.amplitudes());
    if n < 1e-300 {
        return Err(Error::ZeroNorm);
    }
    let v: Vec<Complex64> = k.amplitudes().iter().map(|z| z / n).collect();
    Ok(LabeledState::from_parts(
        ComplexMatrix::outer(&v, &v),
        k.dims.clone(),
        k.labels.clone(),
    ))
}

/// Schmidt decomposition across `left : rest`.
///
/// The left basis diagonalizes the left marginal; each coefficient is the
/// norm of the ket contracted with its left vector, which stays accurate
/// down to round-off even for vanishing coefficients.
pub fn schmidt_decompose(k: &Ket, left: &[&str]) -> Result<SchmidtDecomposition> {
    let left_idx = positions(k.labels(), left)?;
    if left_idx.is_empty() || left_idx.len() == k.labels.len() {
        return Err(Error::BadLabel(format!("{left:?} is not a proper bipartition")));
    }
    let right: Vec<&str> = k
        .labels
        .iter()
        .enumerate()
        .filter(|(i, _)| !left_idx.contains(i))
        .map(|(_, l)| l.as_str())
        .collect();
    let mut order: Vec<&str> = left.to_vec();
    order.extend(&right);
    let ordered = k.reorder(&order)?;
    let dl: usize = left_idx.iter().map(|&i| k.dims[i]).product();
    let dr = k.amplitudes.len() / dl;
    let amps = ordered.amplitudes();

    let rho_left = ket_marginal(amps, &[dl, dr], &[0])?;
    let eig = hermitian_eig(&rho_left)?;

    let mut terms: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..dl)
        .rev()
        .map(|col| {
            let l = eig.eigenvector(col);
            let w: Vec<Complex64> = (0..dr)
                .map(|r| (0..dl).map(|i| l[i].conj() * amps[i * dr + r]).sum())
                .collect();
            let s = norm(&w);
            (s, l, w)
        })
        .filter(|(s, _, _)| *s > SCHMIDT_RANK_TOL)
        .collect();
    terms.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut out = SchmidtDecomposition {
        coefficients: Vec::with_capacity(terms.len()),
        left_basis: Vec::with_capacity(terms.len()),
        right_basis: Vec::with_capacity(terms.len()),
    };
    for (s, l, w) in terms {
        out.coefficients.push(s);
        out.left_basis.push(l);
        out.right_basis.push(w.into_iter().map(|z| z / s).collect());
    }
    Ok(out)
}

/// `−Σ pᵢ log₂ pᵢ` over `pᵢ > τ`.
pub fn entropy_of_probs(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > SUPPORT_TOL)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

pub(crate) fn entropy_of_matrix(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(m)?;
    let s = entropy_of_probs(&eig.eigenvalues);
    Ok(s.clamp(0.0, (m.dim() as f64).log2()))
}

/// `S(ρ) = −tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &LabeledState) -> Result<f64> {
    entropy_of_matrix(rho.matrix())
}

/// `S(ρ|σ) = tr ρ log₂ ρ − tr ρ log₂ σ`, or `+∞` when the support of `ρ`
/// is not contained in that of `σ`.
pub fn relative_entropy(rho: &LabeledState, sigma: &LabeledState) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dims {:?} and {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    relative_entropy_matrices(rho.matrix(), sigma.matrix())
}

pub(crate) fn relative_entropy_matrices(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    let sl = matrix_log2_on_support(sigma)?;
    let leak = rho.trace().re - (&sl.support_projector * rho).trace().re;
    if leak > SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }
    let cross = (rho * &sl.log).trace().re;
    let s_rho = entropy_of_matrix(rho)?;
    Ok((-s_rho - cross).max(0.0))
}

/// `S(|ψ⟩⟨ψ| | σ) = −⟨ψ|log₂ σ|ψ⟩` for a unit vector `ψ`.
pub(crate) fn relative_entropy_pure(psi: &[Complex64], sigma: &ComplexMatrix) -> Result<f64> {
    let sl = matrix_log2_on_support(sigma)?;
    Ok(pure_against_log(psi, &sl))
}

pub(crate) fn pure_against_log(psi: &[Complex64], sl: &linalg::SupportLog) -> f64 {
    let inside = sl.support_projector.expectation(psi).re;
    if 1.0 - inside > SUPPORT_LEAK_TOL {
        return f64::INFINITY;
    }
    (-sl.log.expectation(psi).re).max(0.0)
}

/// Von Neumann entropy of either marginal of a bipartite pure state.
pub fn entropy_of_entanglement(k: &Ket, left: &[&str]) -> Result<f64> {
    let sd = schmidt_decompose(k, left)?;
    let p: Vec<f64> = sd.coefficients.iter().map(|s| s * s).collect();
    Ok(entropy_of_probs(&p))
}

/// Relative entropy of entanglement of a pure bipartite state, which equals
/// its entropy of entanglement. Mixed inputs are rejected.
pub fn rel_ent_entanglement_pure(rho: &LabeledState, left: &[&str]) -> Result<f64> {
    let eig = hermitian_eig(rho.matrix())?;
    let top = *eig.eigenvalues.last().expect("non-empty state");
    if (top - 1.0).abs() > 1e-9 {
        return Err(Error::NotPure(rho.purity()));
    }
    let labels: Vec<&str> = rho.labels().iter().map(String::as_str).collect();
    let ket = Ket::normalized(eig.eigenvector(rho.matrix().dim() - 1), rho.dims(), &labels)?;
    entropy_of_entanglement(&ket, left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, ONE};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    // Scalar binary entropy, independent of any matrix code.
    fn h2(p: f64) -> f64 {
        -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> Ket {
        Ket::new(vec![c(FRAC_1_SQRT_2), ZERO, ZERO, c(FRAC_1_SQRT_2)], &[2, 2], &["A", "B"]).unwrap()
    }

    fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let h = ComplexMatrix::from_fn(n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        linalg::expm_i_hermitian(&(&h + &h.adjoint())).unwrap()
    }

    fn random_state(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let p = &g * &g.adjoint();
        let t = p.trace();
        p.scale(ONE / t)
    }

    fn qubit_state(m: ComplexMatrix) -> LabeledState {
        LabeledState::new(m, &[2], &["A"]).unwrap()
    }

    #[test]
    fn schmidt_ket_symmetric_point() {
        let k = schmidt_ket(SchmidtPair::new(FRAC_1_SQRT_2).unwrap());
        assert!(k.amplitudes().iter().zip(bell().amplitudes()).all(|(x, y)| (x - y).norm() < 1e-15));
    }

    #[test]
    fn schmidt_ket_is_pure() {
        let rho = dm_from_ket(&schmidt_ket(SchmidtPair::new(0.4).unwrap())).unwrap();
        let eig = hermitian_eig(rho.matrix()).unwrap();
        let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-10).count();
        assert_eq!(rank, 1);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn schmidt_ket_marginal() {
        let k = schmidt_ket(SchmidtPair::new(0.6).unwrap());
        let r = dm_from_ket(&k).unwrap().trace_out(&["B"]).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::diag(&[0.36, 0.64])) < 1e-15);
    }

    #[test]
    fn schmidt_pair_range() {
        assert!(SchmidtPair::new(-0.1).is_err());
        assert!(SchmidtPair::new(0.8).is_err());
        assert!(SchmidtPair::new(0.0).is_ok());
        assert!(SchmidtPair::any_order(1.0).is_ok());
        let p = SchmidtPair::new(0.6).unwrap();
        assert!((p.a().powi(2) + p.b().powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dm_examples() {
        let zero = Ket::qubit(1.0, 0.0, "A").unwrap();
        assert_eq!(*dm_from_ket(&zero).unwrap().matrix(), ComplexMatrix::diag(&[1.0, 0.0]));
        let b = dm_from_ket(&bell()).unwrap();
        assert!((b.matrix().trace().re - 1.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let amps: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let k = Ket::normalized(amps, &[2, 2, 2], &["A", "B", "C"]).unwrap();
        let rho = dm_from_ket(&k).unwrap();
        assert!((rho.matrix() * rho.matrix()).max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn zero_ket_rejected() {
        assert!(matches!(
            Ket::normalized(vec![ZERO, ZERO], &[2], &["A"]),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn labeled_state_validation() {
        assert!(LabeledState::new(ComplexMatrix::diag(&[0.5, 0.6]), &[2], &["A"]).is_err());
        assert!(LabeledState::new(ComplexMatrix::diag(&[1.5, -0.5]), &[2], &["A"]).is_err());
        assert!(LabeledState::new(ComplexMatrix::identity(4).scale(c(0.25)), &[2, 2], &["A", "A"]).is_err());
        assert!(LabeledState::new(ComplexMatrix::identity(4).scale(c(0.25)), &[2, 3], &["A", "B"]).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let sd = schmidt_decompose(&bell(), &["A"]).unwrap();
        assert_eq!(sd.rank(), 2);
        assert!(sd.coefficients.iter().all(|s| (s - FRAC_1_SQRT_2).abs() < 1e-12));

        let prod = Ket::qubit(0.6, 0.8, "A").unwrap().tensor(&Ket::qubit(1.0, 2.0, "B").unwrap()).unwrap();
        let sd = schmidt_decompose(&prod, &["A"]).unwrap();
        assert_eq!(sd.rank(), 1);
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-12);

        // ψ⊗ψ with a = 0.6: coefficients are the pairwise products of (0.8, 0.6).
        let psi = schmidt_ket(SchmidtPair::new(0.6).unwrap());
        let psi2 = Ket::new(psi.amplitudes().to_vec(), &[2, 2], &["A'", "B'"]).unwrap();
        let two = psi.tensor(&psi2).unwrap();
        let sd = schmidt_decompose(&two, &["A", "A'"]).unwrap();
        let oracle = [0.8 * 0.8, 0.8 * 0.6, 0.6 * 0.8, 0.6 * 0.6];
        assert_eq!(sd.rank(), 4);
        for (s, o) in sd.coefficients.iter().zip(oracle) {
            assert!((s - o).abs() < 1e-12, "{s} vs {o}");
        }
    }

    #[test]
    fn schmidt_bases_reassemble_ket() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let amps: Vec<Complex64> = (0..6)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let k = Ket::normalized(amps, &[2, 3], &["A", "B"]).unwrap();
        let sd = schmidt_decompose(&k, &["A"]).unwrap();
        let mut rebuilt = [ZERO; 6];
        for ((s, l), r) in sd.coefficients.iter().zip(&sd.left_basis).zip(&sd.right_basis) {
            for (slot, z) in rebuilt.iter_mut().zip(linalg::kron_vec(l, r)) {
                *slot += z * *s;
            }
        }
        for (x, y) in rebuilt.iter().zip(k.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
        let total: f64 = sd.coefficients.iter().map(|s| s * s).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bad_cut_rejected() {
        assert!(schmidt_decompose(&bell(), &["A", "B"]).is_err());
        assert!(schmidt_decompose(&bell(), &["C"]).is_err());
    }

    #[test]
    fn entropy_examples() {
        let pure = dm_from_ket(&bell()).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
        let mixed = qubit_state(ComplexMatrix::diag(&[0.5, 0.5]));
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);
        let s = von_neumann_entropy(&qubit_state(ComplexMatrix::diag(&[0.36, 0.64]))).unwrap();
        assert!((s - h2(0.36)).abs() < 1e-12);
        assert!((s - 0.942683).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = qubit_state(random_state(2, &mut rng));
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-10);

        let zero = qubit_state(ComplexMatrix::diag(&[1.0, 0.0]));
        let one = qubit_state(ComplexMatrix::diag(&[0.0, 1.0]));
        let half = qubit_state(ComplexMatrix::diag(&[0.5, 0.5]));
        assert!((relative_entropy(&zero, &half).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);

        let two = LabeledState::new(ComplexMatrix::identity(4).scale(c(0.25)), &[2, 2], &["A", "B"]).unwrap();
        assert!(matches!(relative_entropy(&zero, &two), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn relative_entropy_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let rho = qubit_state(random_state(2, &mut rng));
            let sigma = qubit_state(random_state(2, &mut rng));
            let d = relative_entropy(&rho, &sigma).unwrap();
            assert!(d >= -1e-10);
            if rho.matrix().max_abs_diff(sigma.matrix()) > 1e-3 {
                assert!(d > 1e-9);
            }
        }
    }

    #[test]
    fn entanglement_examples() {
        assert!((entropy_of_entanglement(&bell(), &["A"]).unwrap() - 1.0).abs() < 1e-12);
        let prod = Ket::qubit(0.6, 0.8, "A").unwrap().tensor(&Ket::qubit(0.0, 1.0, "B").unwrap()).unwrap();
        assert!(entropy_of_entanglement(&prod, &["A"]).unwrap().abs() < 1e-12);
        let k = schmidt_ket(SchmidtPair::new(0.6).unwrap());
        assert!((entropy_of_entanglement(&k, &["A"]).unwrap() - h2(0.36)).abs() < 1e-12);
        assert!((entropy_of_entanglement(&k, &["B"]).unwrap() - h2(0.36)).abs() < 1e-12);
    }

    #[test]
    fn rel_ent_pure_examples() {
        let b = dm_from_ket(&bell()).unwrap();
        assert!((rel_ent_entanglement_pure(&b, &["A"]).unwrap() - 1.0).abs() < 1e-10);
        let k = dm_from_ket(&schmidt_ket(SchmidtPair::new(0.3).unwrap())).unwrap();
        let e = rel_ent_entanglement_pure(&k, &["A"]).unwrap();
        assert!((e - h2(0.09)).abs() < 1e-10);
        assert!((e - 0.436470).abs() < 1e-6);
        let p = dm_from_ket(&schmidt_ket(SchmidtPair::new(0.0).unwrap())).unwrap();
        assert!(rel_ent_entanglement_pure(&p, &["A"]).unwrap().abs() < 1e-12);

        let mixed = LabeledState::new(ComplexMatrix::identity(4).scale(c(0.25)), &[2, 2], &["A", "B"]).unwrap();
        assert!(matches!(rel_ent_entanglement_pure(&mixed, &["A"]), Err(Error::NotPure(_))));
    }

    #[test]
    fn entropy_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rho = random_state(4, &mut rng);
        let s0 = entropy_of_matrix(&rho).unwrap();
        for _ in 0..100 {
            let u = random_unitary(4, &mut rng);
            let s = entropy_of_matrix(&rho.conjugate_by(&u)).unwrap();
            assert!((s - s0).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_invariant_under_local_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let k = schmidt_ket(SchmidtPair::new(0.45).unwrap());
        let base = schmidt_decompose(&k, &["A"]).unwrap().coefficients;
        for _ in 0..50 {
            let u = kron(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng));
            let rotated = Ket::new(u.mul_vec(k.amplitudes()), &[2, 2], &["A", "B"]).unwrap();
            let got = schmidt_decompose(&rotated, &["A"]).unwrap().coefficients;
            for (x, y) in got.iter().zip(&base) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn entanglement_additive_over_copies() {
        for a in [0.1, 0.3, 0.6, FRAC_1_SQRT_2] {
            let psi = schmidt_ket(SchmidtPair::new(a).unwrap());
            let primed = Ket::new(psi.amplitudes().to_vec(), &[2, 2], &["A'", "B'"]).unwrap();
            let two = psi.tensor(&primed).unwrap();
            let e2 = entropy_of_entanglement(&two, &["A", "A'"]).unwrap();
            let e1 = entropy_of_entanglement(&psi, &["A"]).unwrap();
            assert!((e2 - 2.0 * e1).abs() < 1e-9);
        }
    }

    #[test]
    fn swap_and_reduce_by_label() {
        let k = Ket::qubit(1.0, 0.0, "A").unwrap().tensor(&Ket::qubit(0.0, 1.0, "B").unwrap()).unwrap();
        let rho = dm_from_ket(&k).unwrap();
        let swapped = rho.swap_factors("A", "B").unwrap();
        let a = swapped.reduce_to(&["A"]).unwrap();
        assert!(a.matrix().max_abs_diff(&ComplexMatrix::diag(&[0.0, 1.0])) < 1e-15);
        let ba = rho.reduce_to(&["B", "A"]).unwrap();
        assert_eq!(ba.labels(), ["B", "A"]);
        assert!(ba.matrix().max_abs_diff(&ComplexMatrix::diag(&[0.0, 0.0, 1.0, 0.0])) < 1e-15);
    }
}
