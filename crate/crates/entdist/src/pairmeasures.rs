//! Two-qubit density matrices in Pauli-coefficient form and the
//! entanglement measures evaluated on them.

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, Subsystem};

/// Default absolute tolerance on the minimum eigenvalue below which a state
/// is rejected as unphysical. Constructions from exact states produce noise
/// at the -1e-15 scale, well inside this.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Eigenvalues of a partial transpose closer to zero than this are treated
/// as zero when summing the negative part; they are solver noise, not
/// entanglement.
const EIG_NOISE: f64 = 1e-12;

const COEFF_BOUND: f64 = 1.0 + 1e-12;
const STATE_TOL: f64 = 1e-10;

/// Bloch vectors and correlation tensor of a two-qubit state:
/// `g_a[k] = <sigma_k (x) 1>`, `g_b[l] = <1 (x) sigma_l>`,
/// `h[k][l] = <sigma_k (x) sigma_l>` with axes 0 = x, 1 = y, 2 = z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoefficients {
    pub g_a: [f64; 3],
    pub g_b: [f64; 3],
    pub h: [[f64; 3]; 3],
}

impl PauliCoefficients {
    pub fn new(g_a: [f64; 3], g_b: [f64; 3], h: [[f64; 3]; 3]) -> Result<Self> {
        let mut worst = 0.0f64;
        for v in g_a.iter().chain(g_b.iter()).chain(h.iter().flatten()) {
            worst = worst.max(v.abs());
        }
        if worst > COEFF_BOUND {
            return Err(Error::InvalidArgument(format!(
                "Pauli coefficient magnitude {worst} exceeds 1"
            )));
        }
        Ok(Self { g_a, g_b, h })
    }

    pub fn zero() -> Self {
        Self {
            g_a: [0.0; 3],
            g_b: [0.0; 3],
            h: [[0.0; 3]; 3],
        }
    }
}

/// A 4x4 density matrix. Hermiticity and unit trace are checked on
/// construction; positivity is a separate, explicit check.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMatrix,
}

/// Result of a positivity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub physical: bool,
    pub min_eigenvalue: f64,
}

impl TwoQubitState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: matrix.dim(),
            });
        }
        let dev = matrix.max_hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        Ok(Self { matrix })
    }

    /// Builds `1/4 [1(x)1 + sum g_a_k sigma_k(x)1 + sum g_b_l 1(x)sigma_l +
    /// sum h_kl sigma_k(x)sigma_l]`. Always Hermitian with unit trace; the
    /// result need not be positive.
    pub fn from_pauli(coeffs: &PauliCoefficients) -> Self {
        let id = matcore::identity2();
        let mut m = id.kron(&id);
        for k in 0..3 {
            if coeffs.g_a[k] != 0.0 {
                m = m.add(&matcore::sigma(k).kron(&id).scale(coeffs.g_a[k]));
            }
            if coeffs.g_b[k] != 0.0 {
                m = m.add(&id.kron(&matcore::sigma(k)).scale(coeffs.g_b[k]));
            }
        }
        for k in 0..3 {
            for l in 0..3 {
                if coeffs.h[k][l] != 0.0 {
                    m = m.add(&matcore::sigma(k).kron(&matcore::sigma(l)).scale(coeffs.h[k][l]));
                }
            }
        }
        Self { matrix: m.scale(0.25) }
    }

    /// Reads the Pauli coefficients back off the state; exact inverse of
    /// [`TwoQubitState::from_pauli`] up to rounding.
    pub fn to_pauli(&self) -> PauliCoefficients {
        let id = matcore::identity2();
        let mut g_a = [0.0; 3];
        let mut g_b = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        for k in 0..3 {
            g_a[k] = self.matrix.trace_product(&matcore::sigma(k).kron(&id)).re;
            g_b[k] = self.matrix.trace_product(&id.kron(&matcore::sigma(k))).re;
            for (l, h_kl) in h[k].iter_mut().enumerate() {
                *h_kl = self
                    .matrix
                    .trace_product(&matcore::sigma(k).kron(&matcore::sigma(l)))
                    .re;
            }
        }
        PauliCoefficients { g_a, g_b, h }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Positivity check: physical iff the minimum eigenvalue is >= -tol.
    pub fn physicality(&self, tol: f64) -> Result<Physicality> {
        let min = self.matrix.min_eigenvalue()?;
        Ok(Physicality {
            physical: min >= -tol,
            min_eigenvalue: min,
        })
    }

    fn require_physical(&self) -> Result<()> {
        let check = self.physicality(PHYSICAL_TOL)?;
        if !check.physical {
            return Err(Error::Unphysical {
                min_eigenvalue: check.min_eigenvalue,
            });
        }
        Ok(())
    }

    /// Negativity: modulus of the sum of negative eigenvalues of the partial
    /// transpose. Lies in [0, 1/2] for physical states.
    pub fn negativity(&self) -> Result<f64> {
        self.require_physical()?;
        let pt = self.matrix.partial_transpose([2, 2], Subsystem::Second)?;
        let neg: f64 = pt
            .hermitian_eigenvalues()?
            .iter()
            .filter(|&&v| v < -EIG_NOISE)
            .sum();
        Ok(-neg)
    }

    /// Concurrence via the spin-flipped spectrum:
    /// `max(0, l1 - l2 - l3 - l4)` where the `l_i` are the square roots of
    /// the eigenvalues of `rho (sy(x)sy) rho* (sy(x)sy)`, descending.
    ///
    /// With `rho = L L^dagger`, those square roots are the singular values
    /// of the complex symmetric matrix `L^T (sy(x)sy) L`. Computing them as
    /// singular values keeps near-zero values at solver precision; taking
    /// square roots of near-zero eigenvalues would inflate the noise by
    /// orders of magnitude.
    pub fn concurrence(&self) -> Result<f64> {
        self.require_physical()?;
        let (vals, vecs) = self.matrix.hermitian_eigen()?;
        let mut factor = ComplexMatrix::zeros(4);
        for (k, &a) in vals.iter().enumerate() {
            // Directions at or below solver noise are true zeros of the
            // trace-one input; dropping them removes spurious columns.
            if a <= 1e-13 {
                continue;
            }
            let root = a.sqrt();
            for i in 0..4 {
                factor.set(i, k, vecs.get(i, k) * root);
            }
        }
        let yy = matcore::sigma_y().kron(&matcore::sigma_y());
        let w = factor.transpose().matmul(&yy).matmul(&factor);
        let lambdas = w.singular_values();
        Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
    }

    /// Conjugation by a product of local unitaries.
    pub fn rotated(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        let u = u_a.kron(u_b);
        Self::new(u.matmul(&self.matrix).matmul(&u.adjoint()))
    }
}

/// Selects which entanglement monotone to evaluate. Both are convex, which
/// is what makes the collective value a lower bound on the pair average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Negativity,
    Concurrence,
}

impl Measure {
    pub fn apply(&self, state: &TwoQubitState) -> Result<f64> {
        match self {
            Measure::Negativity => state.negativity(),
            Measure::Concurrence => state.concurrence(),
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Measure::Negativity => write!(f, "negativity"),
            Measure::Concurrence => write!(f, "concurrence"),
        }
    }
}

/// Uniform mixture helper used in a few places: `sum w_i rho_i` as a raw
/// matrix, wrapped back into a state.
pub fn mix(components: &[(f64, &TwoQubitState)]) -> Result<TwoQubitState> {
    let mut m = ComplexMatrix::zeros(4);
    for (w, s) in components {
        m = m.add(&s.matrix.scale(*w));
    }
    TwoQubitState::new(m)
}
