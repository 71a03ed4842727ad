//! Deleting one of two shared copies of a pure state.
//!
//! Three constructions live here: the local deleter that swaps `A` with `A'`
//! and the bound it gives; the global deleter that rotates the second copy
//! onto a product basis; and the Schmidt-rank count showing that no local
//! unitary can turn `ψ⊗ψ` into `ψ⊗|00⟩`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{hermitian_eig, kron, matrix_log2_on_support, ComplexMatrix, SupportLog, ONE, ZERO};
use crate::qstate::{
    dm_from_ket, pure_against_log, relative_entropy_pure, schmidt_decompose, schmidt_ket, Ket,
    LabeledState, SchmidtPair,
};
use crate::{Error, Result};

const PRODUCT_RESTARTS: usize = 20;
const PRODUCT_SEED: u64 = 0x0de1_e7e5;
const DESCENT_TOL: f64 = 1e-9;
const DESCENT_MAX_ITERS: usize = 500;
/// Penalty weights on leaving the support, applied in turn when the target is rank deficient.
const SUPPORT_PENALTIES: [f64; 3] = [1e3, 1e6, 1e9];

/// Result of one deleting machine on `ψ⊗ψ`.
#[derive(Clone, Debug)]
pub struct DeleteOutcome {
    pub out_ab: LabeledState,
    pub out_apbp: LabeledState,
    /// `S(ψ | out_AB)`.
    pub term_keep: f64,
    /// Minimum of `S(|xy⟩⟨xy| | out_A'B')` over product kets.
    pub term_separable: f64,
    pub separable_argmin: Ket,
    /// `(term_keep + term_separable) / 2`.
    pub objective: f64,
}

impl DeleteOutcome {
    pub(crate) fn evaluate(psi: &Ket, out_ab: LabeledState, out_apbp: LabeledState) -> Result<Self> {
        let term_keep = relative_entropy_pure(psi.amplitudes(), out_ab.matrix())?;
        let min = min_over_product_pure(&out_apbp)?;
        Ok(Self {
            out_ab,
            out_apbp,
            term_keep,
            term_separable: min.value,
            separable_argmin: min.argmin,
            objective: 0.5 * (term_keep + min.value),
        })
    }
}

/// `ψ⊗ψ` on `A, B, A', B'`.
pub fn two_copies(pair: SchmidtPair) -> Ket {
    let psi = schmidt_ket(pair);
    let primed = Ket::new(psi.amplitudes().to_vec(), &[2, 2], &["A'", "B'"]).expect("unit ket");
    psi.tensor(&primed).expect("distinct labels")
}

/// Full four-qubit state after Alice swaps `A` with `A'`.
pub fn swap_deleter_output(pair: SchmidtPair) -> Result<LabeledState> {
    dm_from_ket(&two_copies(pair))?.swap_factors("A", "A'")
}

/// The swap deleter. Both output pairs equal `diag(a²,b²) ⊗ diag(a²,b²)`.
pub fn local_delete_swap(pair: SchmidtPair) -> Result<DeleteOutcome> {
    let full = swap_deleter_output(pair)?;
    let out_ab = full.reduce_to(&["A", "B"])?;
    let out_apbp = full.reduce_to(&["A'", "B'"])?;
    DeleteOutcome::evaluate(&schmidt_ket(pair), out_ab, out_apbp)
}

/// `E(ψ) − 2 log₂ b`, the swap deleter's objective in closed form.
pub fn delete_bound(pair: SchmidtPair) -> f64 {
    pair.entanglement() - 2.0 * pair.b().log2()
}

/// Minimum of `S(|xy⟩⟨xy| | ρ)` over product kets.
#[derive(Clone, Debug)]
pub struct ProductMinimum {
    pub value: f64,
    pub argmin: Ket,
}

/// Minimizes `S(|x⟩⟨x|⊗|y⟩⟨y| | ρ) = −⟨xy|log₂ρ|xy⟩` over product kets of a
/// two-qubit state.
///
/// Starts from the four computational product kets and 20 random points on
/// the two Bloch spheres, then alternates exact minimization over `x` with
/// `y` fixed and vice versa. Each half-step is a 2×2 eigenproblem, so the
/// objective never increases. Rank-deficient `ρ` get an increasing penalty
/// on weight outside the support; a result still leaking more than `1e-10`
/// reports `+∞`.
pub fn min_over_product_pure(rho: &LabeledState) -> Result<ProductMinimum> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "product minimization needs two qubits, got {:?}",
            rho.dims()
        )));
    }
    let sl = matrix_log2_on_support(rho.matrix())?;
    let (value, x, y) = min_product_against_log(&sl);
    let labels: Vec<&str> = rho.labels().iter().map(String::as_str).collect();
    let argmin = Ket::normalized(crate::linalg::kron_vec(&x, &y), &[2, 2], &labels)?;
    Ok(ProductMinimum { value, argmin })
}

type Qubit = [Complex64; 2];

pub(crate) fn min_product_against_log(sl: &SupportLog) -> (f64, Qubit, Qubit) {
    let rank = sl.support_projector.trace().re.round() as usize;
    let neg_log = sl.log.scale(-ONE);
    let stages: Vec<ComplexMatrix> = if rank == 4 {
        vec![neg_log]
    } else {
        let outside = &ComplexMatrix::identity(4) - &sl.support_projector;
        SUPPORT_PENALTIES
            .iter()
            .map(|&w| &neg_log + &outside.scale(Complex64::new(w, 0.0)))
            .collect()
    };

    let mut starts: Vec<(Qubit, Qubit)> = Vec::with_capacity(4 + PRODUCT_RESTARTS);
    let basis = [[ONE, ZERO], [ZERO, ONE]];
    for x in basis {
        for y in basis {
            starts.push((x, y));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PRODUCT_SEED);
    for _ in 0..PRODUCT_RESTARTS {
        starts.push((random_bloch(&mut rng), random_bloch(&mut rng)));
    }

    let mut best: Option<(f64, Qubit, Qubit)> = None;
    for (mut x, mut y) in starts {
        for m in &stages {
            (x, y) = alternate(m, x, y);
        }
        let xy = crate::linalg::kron_vec(&x, &y);
        let value = pure_against_log(&xy, sl);
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, x, y));
        }
    }
    let (value, x, y) = best.expect("at least one start");
    (value, canonical_phase(x), canonical_phase(y))
}

fn random_bloch(rng: &mut impl Rng) -> Qubit {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Rotates the global phase so the larger amplitude is real and positive.
fn canonical_phase(v: Qubit) -> Qubit {
    let lead = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    let ph = lead.conj() / lead.norm();
    [v[0] * ph, v[1] * ph]
}

/// `⟨xy|M|xy⟩` reduced to a 2×2 form in the free factor.
fn reduce_form(m: &ComplexMatrix, fixed: &Qubit, fixed_is_left: bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, k| {
        let mut s = ZERO;
        for j in 0..2 {
            for l in 0..2 {
                let (r, c) = if fixed_is_left {
                    (2 * j + i, 2 * l + k)
                } else {
                    (2 * i + j, 2 * k + l)
                };
                s += fixed[j].conj() * m[(r, c)] * fixed[l];
            }
        }
        s
    })
}

fn lowest_eigvec(m: &ComplexMatrix) -> (f64, Qubit) {
    let eig = hermitian_eig(&m.hermitian_part()).expect("2x2 Hermitian");
    let v = eig.eigenvector(0);
    (eig.eigenvalues[0], [v[0], v[1]])
}

fn alternate(m: &ComplexMatrix, mut x: Qubit, mut y: Qubit) -> (Qubit, Qubit) {
    let mut last = f64::INFINITY;
    for _ in 0..DESCENT_MAX_ITERS {
        let (_, nx) = lowest_eigvec(&reduce_form(m, &y, false));
        x = nx;
        let (val, ny) = lowest_eigvec(&reduce_form(m, &x, true));
        y = ny;
        if (last - val).abs() <= DESCENT_TOL * val.abs().max(1.0) {
            break;
        }
        last = val;
    }
    (x, y)
}

/// Rotates the eigenbasis of `ρ_A'B'` onto the computational product basis:
/// `W = Σᵢ |iᵢ⟩⟨ψᵢ|`, eigenvalues taken in descending order and assigned to
/// basis vectors in row-major order.
pub fn global_delete_unitary(rho_apbp: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(rho_apbp)?;
    let n = rho_apbp.dim();
    // column n-1-i holds the i-th largest eigenvalue
    Ok(ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(j, n - 1 - i)].conj()))
}

/// Global deleting of the second copy: `ρ_AB ⊗ ρ_A'B'` goes to
/// `ρ_AB ⊗ Σᵢ pᵢ|iᵢ⟩⟨iᵢ|`, with the `pᵢ` the spectrum of `ρ_A'B'`.
pub fn global_delete(rho_ab: &LabeledState, rho_apbp: &LabeledState) -> Result<LabeledState> {
    let w = global_delete_unitary(rho_apbp.matrix())?;
    let full_u = kron(&ComplexMatrix::identity(rho_ab.matrix().dim()), &w);
    let joint = kron(rho_ab.matrix(), rho_apbp.matrix()).conjugate_by(&full_u);
    let mut dims = rho_ab.dims().to_vec();
    dims.extend(rho_apbp.dims());
    let labels: Vec<&str> = rho_ab
        .labels()
        .iter()
        .chain(rho_apbp.labels())
        .map(String::as_str)
        .collect();
    LabeledState::new(joint.hermitian_part(), &dims, &labels)
}

/// Schmidt ranks across `AA' : BB'` of `ψ⊗ψ` and of `ψ⊗|0⟩⊗|0⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchmidtRankCheck {
    pub rank_input: usize,
    pub rank_target: usize,
    /// Local unitaries preserve the Schmidt rank, so deleting is possible only when the ranks agree.
    pub deletable: bool,
}

pub fn schmidt_rank_nogo_check(pair: SchmidtPair) -> Result<SchmidtRankCheck> {
    let psi = schmidt_ket(pair);
    let input = two_copies(pair);
    let blank = Ket::qubit(1.0, 0.0, "A'")?.tensor(&Ket::qubit(1.0, 0.0, "B'")?)?;
    let target = psi.tensor(&blank)?;
    let rank_input = schmidt_decompose(&input, &["A", "A'"])?.rank();
    let rank_target = schmidt_decompose(&target, &["A", "A'"])?.rank();
    Ok(SchmidtRankCheck {
        rank_input,
        rank_target,
        deletable: rank_input == rank_target,
    })
}
