//! Derivative-free searches over local unitaries.
//!
//! The analytic bounds come from one fixed machine each: the swap for
//! deleting and the universal cloner for cloning. Here both parties' unitaries
//! are parameterized as `exp(iH)` and searched with Nelder–Mead. The analytic
//! machine is always one of the starting points, so a search never reports
//! anything worse than its analytic bound.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cloning::{clone_bound, universal_clone_isometry};
use crate::deleting::{delete_bound, min_product_against_log, DeleteOutcome};
use crate::linalg::{
    self, expm_i_hermitian, hermitian_eig, ket_marginal, matrix_log2_on_support, ComplexMatrix, ZERO,
};
use crate::qstate::{pure_against_log, schmidt_ket, LabeledState, SchmidtPair};
use crate::{Error, Result};

/// Weight of the trace-norm asymmetry penalty in the cloning objective.
pub const SYMMETRY_PENALTY: f64 = 10.0;
/// Stand-in for `+∞` inside the simplex arithmetic.
pub const INFINITE_SENTINEL: f64 = 1e6;
/// Slack allowed between a search result and its analytic reference.
pub const REFERENCE_SLACK: f64 = 1e-6;

const MAX_EVALS: usize = 2000;
const SIMPLEX_DIAMETER_TOL: f64 = 1e-8;
const INITIAL_STEP: f64 = 0.1;
const PERTURBATION: f64 = 0.2;

/// Real parameters of a Hermitian generator `H`, with `U = exp(iH)`.
///
/// For an `n×n` unitary there are `n²` parameters: the `n` diagonal entries
/// of `H` followed by the real and imaginary parts of each upper-triangular
/// entry in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryParams {
    thetas: Vec<f64>,
}

impl UnitaryParams {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        let n = (thetas.len() as f64).sqrt().round() as usize;
        if n == 0 || n * n != thetas.len() {
            return Err(Error::InvalidParams(format!(
                "length {} is not a positive square",
                thetas.len()
            )));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParams("non-finite entry".into()));
        }
        Ok(Self { thetas })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            thetas: vec![0.0; n * n],
        }
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn dim(&self) -> usize {
        (self.thetas.len() as f64).sqrt().round() as usize
    }

    pub fn generator(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut h = ComplexMatrix::zeros(n);
        for k in 0..n {
            h[(k, k)] = Complex64::new(self.thetas[k], 0.0);
        }
        let mut slot = n;
        for i in 0..n {
            for j in i + 1..n {
                let z = Complex64::new(self.thetas[slot], self.thetas[slot + 1]);
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
                slot += 2;
            }
        }
        h
    }

    /// Inverse of [`UnitaryParams::generator`].
    pub fn from_generator(h: &ComplexMatrix) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::NotHermitian(h.hermitian_defect()));
        }
        let n = h.dim();
        let mut thetas = Vec::with_capacity(n * n);
        thetas.extend((0..n).map(|k| h[(k, k)].re));
        for i in 0..n {
            for j in i + 1..n {
                thetas.push(h[(i, j)].re);
                thetas.push(h[(i, j)].im);
            }
        }
        Self::new(thetas)
    }

    /// Parameters whose unitary reproduces `u` to within `1e-10`.
    ///
    /// `u` is diagonalized through the commuting Hermitian pair
    /// `(U + U†)/2` and `(U − U†)/2i`; a few mixing weights are tried in case
    /// one of them merges distinct eigenvalues of `u`.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        let n = u.dim();
        let ud = u.adjoint();
        let re = (u + &ud).scale(Complex64::new(0.5, 0.0));
        let im = (u - &ud).scale(Complex64::new(0.0, -0.5));
        let mut worst = f64::INFINITY;
        for weight in [0.618_033_988_749_895, 1.324_717_957_244_746, 0.267_949_192_431_123] {
            let mixed = &re + &im.scale(Complex64::new(weight, 0.0));
            let eig = hermitian_eig(&mixed.hermitian_part())?;
            let angles: Vec<f64> = (0..n)
                .map(|k| u.expectation(&eig.eigenvector(k)).arg())
                .collect();
            let h = ComplexMatrix::from_fn(n, |i, j| {
                (0..n)
                    .map(|k| eig.eigenvectors[(i, k)] * eig.eigenvectors[(j, k)].conj() * angles[k])
                    .sum()
            })
            .hermitian_part();
            let p = Self::from_generator(&h)?;
            let err = param_to_unitary(&p)?.max_abs_diff(u);
            if err < 1e-10 {
                return Ok(p);
            }
            worst = worst.min(err);
        }
        Err(Error::InvalidParams(format!(
            "no Hermitian logarithm found (best reconstruction error {worst:e})"
        )))
    }
}

/// `exp(iH)` for the generator encoded by `p`.
pub fn param_to_unitary(p: &UnitaryParams) -> Result<ComplexMatrix> {
    expm_i_hermitian(&p.generator())
}

/// Swap of two qubits: `|xy⟩ ↦ |yx⟩`.
pub fn swap_unitary() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| {
        let (x, y) = (j / 2, j % 2);
        if i == 2 * y + x {
            Complex64::new(1.0, 0.0)
        } else {
            ZERO
        }
    })
}

/// For an involution `U = I − 2P`, the generator `H = πP` gives `exp(iH) = U` exactly.
fn involution_params(u: &ComplexMatrix) -> Result<UnitaryParams> {
    let n = u.dim();
    let p = (&ComplexMatrix::identity(n) - u).scale(Complex64::new(std::f64::consts::PI / 2.0, 0.0));
    UnitaryParams::from_generator(&p)
}

pub fn swap_params() -> UnitaryParams {
    involution_params(&swap_unitary()).expect("swap is Hermitian")
}

/// The universal cloner completed to a unitary on `A, A', Ae`.
pub fn cloner_params() -> Result<UnitaryParams> {
    UnitaryParams::from_unitary(&universal_clone_isometry().complete_to_unitary())
}

/// Copies the Schmidt basis: `|x, y, z⟩ ↦ |x, x⊕y, z⟩` on `A, A', Ae`.
pub fn basis_copier_params() -> UnitaryParams {
    let u = ComplexMatrix::from_fn(8, |i, j| {
        let (x, y, z) = (j >> 2, (j >> 1) & 1, j & 1);
        if i == (x << 2) | ((x ^ y) << 1) | z {
            Complex64::new(1.0, 0.0)
        } else {
            ZERO
        }
    });
    involution_params(&u).expect("CNOT is Hermitian")
}

fn check_dim(p: &UnitaryParams, n: usize) -> Result<()> {
    if p.dim() != n || p.thetas.len() != n * n {
        return Err(Error::InvalidParams(format!(
            "expected {} parameters for a {n}x{n} unitary, got {}",
            n * n,
            p.thetas.len()
        )));
    }
    Ok(())
}

/// `U_AA' ⊗ U_BB'` applied to `ψ⊗ψ`; returns the output ket on `A, A', B, B'`.
fn delete_output_ket(pair: SchmidtPair, u_alice: &ComplexMatrix, u_bob: &ComplexMatrix) -> Vec<Complex64> {
    let psi = schmidt_ket(pair);
    let amps = psi.amplitudes();
    // ψ⊗ψ with factor order A, A', B, B': amplitude ψ[x,y]·ψ[x',y'] at (x, x', y, y')
    let mut input = vec![ZERO; 16];
    for x in 0..2 {
        for xp in 0..2 {
            for y in 0..2 {
                for yp in 0..2 {
                    input[8 * x + 4 * xp + 2 * y + yp] = amps[2 * x + y] * amps[2 * xp + yp];
                }
            }
        }
    }
    linalg::kron(u_alice, u_bob).mul_vec(&input)
}

/// Half the sum of `S(ψ | out_AB)` and the product-state minimum of
/// `S(· | out_A'B')` after `U_AA' ⊗ U_BB'` acts on `ψ⊗ψ`; `+∞` when a
/// support condition fails.
pub fn delete_objective(pair: SchmidtPair, u_alice: &UnitaryParams, u_bob: &UnitaryParams) -> Result<f64> {
    check_dim(u_alice, 4)?;
    check_dim(u_bob, 4)?;
    let out = delete_output_ket(pair, &param_to_unitary(u_alice)?, &param_to_unitary(u_bob)?);
    let out_ab = ket_marginal(&out, &[2, 2, 2, 2], &[0, 2])?;
    let out_apbp = ket_marginal(&out, &[2, 2, 2, 2], &[1, 3])?;
    let keep = pure_against_log(schmidt_ket(pair).amplitudes(), &matrix_log2_on_support(&out_ab)?);
    if keep.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let (sep, _, _) = min_product_against_log(&matrix_log2_on_support(&out_apbp)?);
    Ok(0.5 * (keep + sep))
}

/// Same evaluation as [`delete_objective`], returning every intermediate.
pub fn delete_outcome(pair: SchmidtPair, u_alice: &UnitaryParams, u_bob: &UnitaryParams) -> Result<DeleteOutcome> {
    check_dim(u_alice, 4)?;
    check_dim(u_bob, 4)?;
    let out = delete_output_ket(pair, &param_to_unitary(u_alice)?, &param_to_unitary(u_bob)?);
    let ab = ket_marginal(&out, &[2, 2, 2, 2], &[0, 2])?;
    let apbp = ket_marginal(&out, &[2, 2, 2, 2], &[1, 3])?;
    DeleteOutcome::evaluate(
        &schmidt_ket(pair),
        LabeledState::new(ab, &[2, 2], &["A", "B"])?,
        LabeledState::new(apbp, &[2, 2], &["A'", "B'"])?,
    )
}

/// Terms of the cloning objective for one pair of local unitaries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloneEvaluation {
    /// `S(ψ | copy1)`.
    pub fidelity_term: f64,
    /// `‖copy1 − copy2‖₁`.
    pub asymmetry: f64,
    /// `fidelity_term + λ·asymmetry`.
    pub objective: f64,
}

/// Copies on `A, B` and `A', B'` after `U_AA'Ae ⊗ U_BB'Be` acts on
/// `ψ ⊗ |0⟩_A' ⊗ |0⟩_Ae ⊗ |0⟩_B' ⊗ |0⟩_Be`.
pub fn clone_copies(
    pair: SchmidtPair,
    u_alice: &ComplexMatrix,
    u_bob: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let amps = schmidt_ket(pair).amplitudes().to_vec();
    // Only the input columns |x00⟩ (index 4x) are reached.
    let mut out = vec![ZERO; 64];
    for x in 0..2 {
        for y in 0..2 {
            let c = amps[2 * x + y];
            if c == ZERO {
                continue;
            }
            for i in 0..8 {
                let ca = c * u_alice[(i, 4 * x)];
                for j in 0..8 {
                    out[8 * i + j] += ca * u_bob[(j, 4 * y)];
                }
            }
        }
    }
    let copy1 = ket_marginal(&out, &[2; 6], &[0, 3])?;
    let copy2 = ket_marginal(&out, &[2; 6], &[1, 4])?;
    Ok((copy1, copy2))
}

pub fn clone_evaluation(pair: SchmidtPair, u_alice: &UnitaryParams, u_bob: &UnitaryParams) -> Result<CloneEvaluation> {
    check_dim(u_alice, 8)?;
    check_dim(u_bob, 8)?;
    let (copy1, copy2) = clone_copies(pair, &param_to_unitary(u_alice)?, &param_to_unitary(u_bob)?)?;
    let fidelity_term = pure_against_log(schmidt_ket(pair).amplitudes(), &matrix_log2_on_support(&copy1)?);
    let asymmetry = linalg::trace_norm_hermitian(&(&copy1 - &copy2).hermitian_part())?;
    Ok(CloneEvaluation {
        fidelity_term,
        asymmetry,
        objective: fidelity_term + SYMMETRY_PENALTY * asymmetry,
    })
}

/// `S(ψ | copy1) + λ‖copy1 − copy2‖₁` with `λ = 10`.
pub fn clone_objective(pair: SchmidtPair, u_alice: &UnitaryParams, u_bob: &UnitaryParams) -> Result<f64> {
    Ok(clone_evaluation(pair, u_alice, u_bob)?.objective)
}

/// Outcome of a restarted search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub best_objective: f64,
    pub best_params: (UnitaryParams, UnitaryParams),
    pub restarts_used: usize,
    pub best_restart: usize,
    pub seed: u64,
    pub reference_bound: f64,
    pub evaluations: usize,
}

impl SearchReport {
    pub fn within_reference(&self) -> bool {
        self.best_objective <= self.reference_bound + REFERENCE_SLACK
    }
}

struct NelderMeadResult {
    x: Vec<f64>,
    value: f64,
    evals: usize,
}

/// Nelder–Mead with standard coefficients, stopped after `max_evals`
/// evaluations or once every vertex lies within `SIMPLEX_DIAMETER_TOL` of the best.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_evals: usize) -> NelderMeadResult {
    let n = x0.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_finite() {
            v.min(INFINITE_SENTINEL)
        } else {
            INFINITE_SENTINEL
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(best).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < SIMPLEX_DIAMETER_TOL || evals.get() >= max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, w)| c + t * (c - w)).collect()
        };

        let worst = simplex[n].0.clone();
        let f_worst = simplex[n].1;
        let f_second = simplex[n - 1].1;
        let f_best = simplex[0].1;

        let xr = along(alpha, &worst);
        let fr = eval(&xr);
        if fr < f_best {
            let xe = along(gamma, &worst);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let xc: Vec<f64> = centroid.iter().zip(&xr).map(|(c, r)| c + rho * (r - c)).collect();
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho, &worst);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fr.min(f_worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink towards the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + sigma * (v - b))
                .collect();
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult { x, value, evals: evals.get() }
}

/// Runs `restarts` Nelder–Mead searches over concatenated parameter vectors.
///
/// Restart 0 starts from the best analytic seed; odd restarts perturb that
/// seed uniformly by up to `0.2` per coordinate; even restarts draw every
/// coordinate uniformly from `[−π, π]`. Restart `r` uses the RNG seeded with
/// `seed + r`, and ties between restarts go to the lower index.
fn restarted_search(
    objective: &(dyn Fn(&[f64]) -> f64 + Sync),
    seeds: &[Vec<f64>],
    restarts: usize,
    seed: u64,
) -> (Vec<f64>, f64, usize, usize) {
    let start = seeds
        .iter()
        .map(|s| (s, objective(s)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(s, _)| s.clone())
        .expect("at least one analytic seed");

    let runs: Vec<(usize, NelderMeadResult)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let x0: Vec<f64> = if r == 0 {
                start.clone()
            } else if r % 2 == 1 {
                start
                    .iter()
                    .map(|v| v + rng.gen_range(-PERTURBATION..=PERTURBATION))
                    .collect()
            } else {
                start
                    .iter()
                    .map(|_| rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI))
                    .collect()
            };
            (r, nelder_mead(objective, &x0, INITIAL_STEP, MAX_EVALS))
        })
        .collect();

    let evals = runs.iter().map(|(_, r)| r.evals).sum();
    let (best_r, best) = runs
        .into_iter()
        .reduce(|a, b| if b.1.value < a.1.value { b } else { a })
        .expect("at least one restart");
    (best.x, best.value, best_r, evals)
}

fn split(x: &[f64], n: usize) -> (UnitaryParams, UnitaryParams) {
    let (a, b) = x.split_at(n * n);
    (
        UnitaryParams { thetas: a.to_vec() },
        UnitaryParams { thetas: b.to_vec() },
    )
}

fn guarded(v: Result<f64>) -> f64 {
    v.unwrap_or(f64::INFINITY)
}

/// Searches `U_AA' ⊗ U_BB'` for a lower deleting objective, starting from the swap on Alice's side.
pub fn optimize_delete(pair: SchmidtPair, restarts: usize, seed: u64) -> Result<SearchReport> {
    let mut swap_seed = swap_params().thetas;
    swap_seed.extend(UnitaryParams::zeros(4).thetas);
    let objective = move |x: &[f64]| -> f64 {
        let (ua, ub) = split(x, 4);
        guarded(delete_objective(pair, &ua, &ub))
    };
    let (x, value, best_restart, evaluations) = restarted_search(&objective, &[swap_seed], restarts, seed);
    Ok(SearchReport {
        best_objective: value,
        best_params: split(&x, 4),
        restarts_used: restarts.max(1),
        best_restart,
        seed,
        reference_bound: delete_bound(pair),
        evaluations,
    })
}

/// Searches local unitaries on `A, A', Ae` and `B, B', Be` for a lower
/// penalized cloning objective. Seeds are the completed universal cloner on
/// both sides and the Schmidt-basis copier on both sides.
pub fn optimize_clone(pair: SchmidtPair, restarts: usize, seed: u64) -> Result<SearchReport> {
    let cloner = cloner_params()?.thetas;
    let copier = basis_copier_params().thetas;
    let seeds = [
        [cloner.clone(), cloner].concat(),
        [copier.clone(), copier].concat(),
    ];
    let objective = move |x: &[f64]| -> f64 {
        let (ua, ub) = split(x, 8);
        guarded(clone_objective(pair, &ua, &ub))
    };
    let (x, value, best_restart, evaluations) = restarted_search(&objective, &seeds, restarts, seed);
    Ok(SearchReport {
        best_objective: value,
        best_params: split(&x, 8),
        restarts_used: restarts.max(1),
        best_restart,
        seed,
        reference_bound: clone_bound(pair),
        evaluations,
    })
}
