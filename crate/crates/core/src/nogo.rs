//! Numerical witnesses for two impossibility arguments.
//!
//! Measuring and forgetting is not a closed operation: once the measurement
//! is dilated to an isometry, the environment ends up holding exactly the
//! post-measurement state of the system. And perfect local cloning of an
//! entangled pure state would double its distillable entanglement, which
//! local operations cannot do.

use num_complex::Complex64;

use crate::deleting::two_copies;
use crate::linalg::{partial_trace, ComplexMatrix, ZERO};
use crate::qstate::{entropy_of_entanglement, schmidt_ket, Ket, LabeledState, SchmidtPair};
use crate::{Error, Result};

const COMPLETENESS_TOL: f64 = 1e-12;

/// Kraus operators `Aᵢ` of a channel on a `d`-dimensional system.
#[derive(Clone, Debug)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// Requires a non-empty list of equally sized operators. Completeness is
    /// checked where it matters, by [`stinespring_isometry`].
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let d = operators
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty Kraus set".into()))?
            .dim();
        if operators.iter().any(|a| a.dim() != d) {
            return Err(Error::DimensionMismatch("Kraus operators differ in size".into()));
        }
        Ok(Self { operators })
    }

    /// Projective measurement in the orthonormal basis given by the columns of `basis`.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let ops = (0..basis.dim())
            .map(|k| {
                let v = basis.column(k);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Self::new(ops)
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn system_dim(&self) -> usize {
        self.operators[0].dim()
    }

    /// `‖Σ Aᵢ†Aᵢ − I‖` (max elementwise).
    pub fn completeness_defect(&self) -> f64 {
        let d = self.system_dim();
        let sum = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(d), |acc, a| &acc + &(&a.adjoint() * a));
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// `Σ Aᵢ ρ Aᵢ†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, a| &acc + &rho.conjugate_by(a))
    }
}

/// A `(d·m)×d` isometry with the environment as the trailing factor.
#[derive(Clone, Debug)]
pub struct Isometry {
    system_dim: usize,
    env_dim: usize,
    /// Row-major, `(d·m)` rows by `d` columns.
    data: Vec<Complex64>,
}

impl Isometry {
    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.system_dim + col]
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.system_dim;
        (0..d * self.env_dim)
            .map(|r| (0..d).map(|c| self.data[r * d + c] * v[c]).sum())
            .collect()
    }

    /// `V†V`.
    pub fn gram(&self) -> ComplexMatrix {
        let d = self.system_dim;
        let rows = d * self.env_dim;
        ComplexMatrix::from_fn(d, |i, j| {
            (0..rows)
                .map(|r| self.data[r * d + i].conj() * self.data[r * d + j])
                .sum()
        })
    }

    /// `V ρ V†` on system ⊗ environment.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = self.system_dim;
        let rows = d * self.env_dim;
        let v = |r: usize, c: usize| self.data[r * d + c];
        let mut vr = vec![ZERO; rows * d];
        for r in 0..rows {
            for c in 0..d {
                vr[r * d + c] = (0..d).map(|k| v(r, k) * rho[(k, c)]).sum();
            }
        }
        ComplexMatrix::from_fn(rows, |i, j| (0..d).map(|c| vr[i * d + c] * v(j, c).conj()).sum())
    }

    /// The channel obtained by discarding the environment.
    pub fn channel(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        partial_trace(&self.conjugate(rho), &[self.system_dim, self.env_dim], &[1])
    }
}

/// `V|φ⟩ = Σᵢ (Aᵢ|φ⟩) ⊗ |i⟩_e`.
pub fn stinespring_isometry(k: &KrausSet) -> Result<Isometry> {
    let defect = k.completeness_defect();
    if defect > COMPLETENESS_TOL {
        return Err(Error::IncompleteKraus(defect));
    }
    let d = k.system_dim();
    let m = k.operators.len();
    let mut data = vec![ZERO; d * m * d];
    for (i, a) in k.operators.iter().enumerate() {
        for s in 0..d {
            for c in 0..d {
                data[(s * m + i) * d + c] = a[(s, c)];
            }
        }
    }
    Ok(Isometry {
        system_dim: d,
        env_dim: m,
        data,
    })
}

/// System and environment after a dilated projective measurement.
#[derive(Clone, Debug)]
pub struct MeasureForgetOutcome {
    /// System state, expressed in the measurement basis.
    pub system_out: LabeledState,
    pub env_out: LabeledState,
}

impl MeasureForgetOutcome {
    /// Largest elementwise difference between the two outputs.
    pub fn residual(&self) -> f64 {
        self.system_out.matrix().max_abs_diff(self.env_out.matrix())
    }
}

/// Measures a qubit in the computational basis and dilates the measurement.
pub fn measure_forget_channel(alpha: &Ket) -> Result<MeasureForgetOutcome> {
    measure_forget_in_basis(alpha, &ComplexMatrix::identity(2))
}

/// Measures in the basis given by the columns of `basis`. The system output
/// is conjugated back into that basis so that it can be compared with the
/// environment register directly.
pub fn measure_forget_in_basis(alpha: &Ket, basis: &ComplexMatrix) -> Result<MeasureForgetOutcome> {
    if alpha.dims() != [2] || basis.dim() != 2 {
        return Err(Error::DimensionMismatch("measure-and-forget acts on one qubit".into()));
    }
    let v = stinespring_isometry(&KrausSet::projective(basis)?)?;
    let out = v.apply(alpha.amplitudes());
    let joint = ComplexMatrix::outer(&out, &out);
    let system = partial_trace(&joint, &[2, 2], &[1])?;
    let env = partial_trace(&joint, &[2, 2], &[0])?;
    let system = system.conjugate_by(&basis.adjoint());
    Ok(MeasureForgetOutcome {
        system_out: LabeledState::new(system, &[2], &["S"])?,
        env_out: LabeledState::new(env, &[2], &["E"])?,
    })
}

/// Distillable-entanglement bookkeeping for perfect local cloning.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistillCertificate {
    /// Entanglement across `AA' : BB'` of `ψ ⊗ blank`.
    pub ed_input: f64,
    /// Entanglement across `AA' : BB'` of `ψ ⊗ ψ`, which a perfect cloner would produce.
    pub ed_required: f64,
    /// Local operations would have to increase the distillable entanglement.
    pub contradiction: bool,
}

pub fn no_local_cloning_certificate(pair: SchmidtPair) -> Result<DistillCertificate> {
    let psi = schmidt_ket(pair);
    let blank = Ket::qubit(1.0, 0.0, "A'")?.tensor(&Ket::qubit(1.0, 0.0, "B'")?)?;
    let ed_input = entropy_of_entanglement(&psi.tensor(&blank)?, &["A", "A'"])?;
    let ed_required = entropy_of_entanglement(&two_copies(pair), &["A", "A'"])?;
    Ok(DistillCertificate {
        ed_input,
        ed_required,
        contradiction: ed_required - ed_input > 1e-12,
    })
}
