//! Local cloning of `a|00⟩ + b|11⟩` with the universal symmetric 1→2 qubit
//! cloner run independently by both parties.
//!
//! Each party feeds its qubit, a blank `|0⟩` and an environment `|0⟩` into
//! the cloner, Alice swaps her original slot with the blank, and the
//! environments are discarded. The two-qubit copy that results is known in
//! closed form, and its relative-entropy distance from the input bounds the
//! entanglement of cloning from above.

use num_complex::Complex64;

use crate::linalg::{ket_marginal, ComplexMatrix, ZERO};
use crate::qstate::{
    dm_from_ket, rel_ent_entanglement_pure, relative_entropy_pure, schmidt_ket, Ket, LabeledState,
    SchmidtPair,
};
use crate::{Error, Result};

/// Factor labels of the six-qubit pipeline state, in tensor order.
pub const PIPELINE_LABELS: [&str; 6] = ["A", "A'", "Ae", "B", "B'", "Be"];

const CROSSOVER_BRACKET: (f64, f64) = (0.3, 0.55);
const CROSSOVER_WIDTH: f64 = 1e-7;

/// Isometry from one qubit into `clone1 ⊗ clone2 ⊗ environment`.
///
/// Stored as its two columns, the images of `|0⟩` and `|1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct CloneIsometry {
    columns: [Vec<Complex64>; 2],
}

impl CloneIsometry {
    /// Checks that the columns are orthonormal 8-vectors within `1e-12`.
    pub fn from_columns(col0: Vec<Complex64>, col1: Vec<Complex64>) -> Result<Self> {
        if col0.len() != 8 || col1.len() != 8 {
            return Err(Error::DimensionMismatch("cloner columns must have length 8".into()));
        }
        let iso = Self {
            columns: [col0, col1],
        };
        let defect = iso.gram().max_abs_diff(&ComplexMatrix::identity(2));
        if defect > 1e-12 {
            return Err(Error::InvalidState(format!(
                "cloner columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(iso)
    }

    pub fn columns(&self) -> &[Vec<Complex64>; 2] {
        &self.columns
    }

    /// `V†V`.
    pub fn gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| {
            self.columns[i]
                .iter()
                .zip(&self.columns[j])
                .map(|(x, y)| x.conj() * y)
                .sum()
        })
    }

    pub fn apply(&self, input: [Complex64; 2]) -> Vec<Complex64> {
        (0..8)
            .map(|r| input[0] * self.columns[0][r] + input[1] * self.columns[1][r])
            .collect()
    }

    /// Single-clone marginals of `V|φ⟩`.
    pub fn clone_marginals(&self, input: [Complex64; 2]) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let out = self.apply(input);
        Ok((
            ket_marginal(&out, &[2, 2, 2], &[0])?,
            ket_marginal(&out, &[2, 2, 2], &[1])?,
        ))
    }

    /// Conjugates the machine by a qubit unitary: `(U⊗U⊗I) V U†`.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != 2 {
            return Err(Error::DimensionMismatch("cloner rotation must be 2x2".into()));
        }
        let uu = crate::linalg::kron(&crate::linalg::kron(u, u), &ComplexMatrix::identity(2));
        let ud = u.adjoint();
        let image = |k: usize| -> Vec<Complex64> {
            uu.mul_vec(&self.apply([ud[(0, k)], ud[(1, k)]]))
        };
        Self::from_columns(image(0), image(1))
    }

    /// Extends the isometry to a unitary on the three qubits, with input
    /// `|x⟩|0⟩|0⟩` (row index `4x`) mapped to column `x`. The remaining
    /// columns come from Gram–Schmidt over the canonical basis.
    pub fn complete_to_unitary(&self) -> ComplexMatrix {
        let mut cols: Vec<Option<Vec<Complex64>>> = vec![None; 8];
        cols[0] = Some(self.columns[0].clone());
        cols[4] = Some(self.columns[1].clone());
        let mut basis: Vec<Vec<Complex64>> = self.columns.to_vec();
        let mut canonical = 0;
        for slot in cols.iter_mut().filter(|c| c.is_none()) {
            loop {
                let mut v = vec![ZERO; 8];
                v[canonical] = Complex64::new(1.0, 0.0);
                canonical += 1;
                // Two passes of modified Gram–Schmidt.
                for _ in 0..2 {
                    for q in &basis {
                        let overlap: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                        for (vi, qi) in v.iter_mut().zip(q) {
                            *vi -= overlap * qi;
                        }
                    }
                }
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if n > 1e-6 {
                    let v: Vec<Complex64> = v.into_iter().map(|z| z / n).collect();
                    basis.push(v.clone());
                    *slot = Some(v);
                    break;
                }
            }
        }
        let cols: Vec<Vec<Complex64>> = cols.into_iter().map(|c| c.expect("filled")).collect();
        ComplexMatrix::from_fn(8, |i, j| cols[j][i])
    }
}

/// The universal symmetric cloner with environment states `|e⟩ = |0⟩`,
/// `|e⊥⟩ = |1⟩`:
///
/// ```text
/// |0⟩ ↦ √(2/3)|00⟩|e⟩  + √(1/6)(|01⟩+|10⟩)|e⊥⟩
/// |1⟩ ↦ √(2/3)|11⟩|e⊥⟩ + √(1/6)(|01⟩+|10⟩)|e⟩
/// ```
pub fn universal_clone_isometry() -> CloneIsometry {
    let big = Complex64::new((2.0f64 / 3.0).sqrt(), 0.0);
    let small = Complex64::new((1.0f64 / 6.0).sqrt(), 0.0);
    let mut col0 = vec![ZERO; 8];
    let mut col1 = vec![ZERO; 8];
    // index = 4·clone1 + 2·clone2 + env
    col0[0b000] = big;
    col0[0b011] = small;
    col0[0b101] = small;
    col1[0b111] = big;
    col1[0b010] = small;
    col1[0b100] = small;
    CloneIsometry::from_columns(col0, col1).expect("universal cloner is an isometry")
}

/// Output of the local cloning pipeline.
#[derive(Clone, Debug)]
pub struct ClonePipelineOutput {
    /// Full state on `A, A', Ae, B, B', Be` after cloning and the swap.
    pub eta: LabeledState,
    /// Copy on `A, B`.
    pub copy1: LabeledState,
    /// Copy on `A', B'`.
    pub copy2: LabeledState,
}

/// Runs the local cloning pipeline on the two-qubit ket `psi` (factors `A`, `B`)
/// with the given machines for Alice and Bob.
pub fn clone_pipeline(
    psi: &Ket,
    alice: &CloneIsometry,
    bob: &CloneIsometry,
) -> Result<ClonePipelineOutput> {
    let psi = psi.reorder(&["A", "B"])?;
    if psi.dims() != [2, 2] {
        return Err(Error::DimensionMismatch("pipeline input must be two qubits".into()));
    }
    let amps = psi.amplitudes();
    let mut out = vec![ZERO; 64];
    for x in 0..2 {
        for y in 0..2 {
            let c = amps[2 * x + y];
            if c == ZERO {
                continue;
            }
            let ca = &alice.columns[x];
            let cb = &bob.columns[y];
            for (i, &va) in ca.iter().enumerate() {
                for (j, &vb) in cb.iter().enumerate() {
                    out[8 * i + j] += c * va * vb;
                }
            }
        }
    }
    let ket = Ket::normalized(out, &[2; 6], &PIPELINE_LABELS)?;
    let eta = dm_from_ket(&ket)?.swap_factors("A", "A'")?;
    let copy1 = eta.reduce_to(&["A", "B"])?;
    let copy2 = eta.reduce_to(&["A'", "B'"])?;
    Ok(ClonePipelineOutput { eta, copy1, copy2 })
}

/// The pipeline for `a|00⟩ + b|11⟩` with the universal cloner on both sides.
pub fn local_clone_pipeline(pair: SchmidtPair) -> Result<ClonePipelineOutput> {
    let cloner = universal_clone_isometry();
    clone_pipeline(&schmidt_ket(pair), &cloner, &cloner)
}

/// Closed form of the pipeline's two-qubit copy:
/// diagonal `((24a²+1)/36, 5/36, 5/36, (24b²+1)/36)` with coherence `4ab/9`
/// between `|00⟩` and `|11⟩`.
pub fn rho_clone_closed_form(pair: SchmidtPair) -> LabeledState {
    let (a, b) = (pair.a(), pair.b());
    let mut m = ComplexMatrix::diag(&[
        (24.0 * a * a + 1.0) / 36.0,
        5.0 / 36.0,
        5.0 / 36.0,
        (24.0 * b * b + 1.0) / 36.0,
    ]);
    let coh = Complex64::new(4.0 * a * b / 9.0, 0.0);
    m[(0, 3)] = coh;
    m[(3, 0)] = coh;
    LabeledState::from_parts(m, vec![2, 2], vec!["A".into(), "B".into()])
}

/// `S(|ψ⟩⟨ψ| | ρ^clone) = −⟨ψ|log₂ ρ^clone|ψ⟩`.
pub fn clone_bound(pair: SchmidtPair) -> f64 {
    let psi = schmidt_ket(pair);
    relative_entropy_pure(psi.amplitudes(), rho_clone_closed_form(pair).matrix())
        .expect("closed-form copy is a valid state")
}

/// Relative entropy of entanglement of `a|00⟩ + b|11⟩`.
pub fn rel_ent_of_pair(pair: SchmidtPair) -> f64 {
    let rho = dm_from_ket(&schmidt_ket(pair)).expect("unit ket");
    rel_ent_entanglement_pure(&rho, &["A"]).expect("pure by construction")
}

/// Both upper bounds on the entanglement of cloning and their minimum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloneBoundRecord {
    pub a: f64,
    pub e_r: f64,
    pub s_clone: f64,
    pub combined: f64,
}

impl CloneBoundRecord {
    /// True when the relative-entropy-of-entanglement branch is the smaller one.
    pub fn e_r_branch(&self) -> bool {
        self.e_r <= self.s_clone
    }
}

pub fn clone_bound_combined(pair: SchmidtPair) -> CloneBoundRecord {
    let e_r = rel_ent_of_pair(pair);
    let s_clone = clone_bound(pair);
    CloneBoundRecord {
        a: pair.a(),
        e_r,
        s_clone,
        combined: e_r.min(s_clone),
    }
}

/// `E_R(ψ_a) − S(ψ_a | ρ^clone)`; negative below the crossover.
pub fn crossover_gap(a: f64) -> Result<f64> {
    let pair = SchmidtPair::new(a)?;
    Ok(rel_ent_of_pair(pair) - clone_bound(pair))
}

/// Value of `a` at which the two cloning bounds coincide, by bisection on
/// `[0.3, 0.55]` down to an interval narrower than `1e-7`.
pub fn crossover() -> Result<f64> {
    let (mut lo, mut hi) = CROSSOVER_BRACKET;
    let f_lo = crossover_gap(lo)?;
    let f_hi = crossover_gap(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket {
            what: "E_R − S_clone",
            lo,
            hi,
        });
    }
    while hi - lo >= CROSSOVER_WIDTH {
        let mid = 0.5 * (lo + hi);
        if crossover_gap(mid)?.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
