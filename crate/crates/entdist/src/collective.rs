//! The collective pipeline: sample-level spin observables, their
//! normalization, the virtual two-qubit state they define, and the closed
//! forms that decide when the collective value is not just a lower bound
//! but equals the pair average.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix};
use crate::pairmeasures::{Measure, PauliCoefficients, TwoQubitState, PHYSICAL_TOL};
use crate::states::State;

/// Tolerance used when classifying the structure of pair data (constant
/// values, locked signs, vanishing entries).
pub const STRUCTURE_TOL: f64 = 1e-10;

/// A per-pair eigenvalue above this is a genuine equality blocker rather
/// than rounding noise.
const PAIR_EIGENVALUE_TOL: f64 = 1e-12;

const EIG_NOISE: f64 = 1e-12;

/// Per-site Bloch vectors and the full grid of per-pair correlation
/// tensors of a partition: the microscopic quantities that collective
/// measurements cannot resolve.
///
/// `h` is indexed by `a * n_b + b` where `a`, `b` are positions within the
/// respective sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PairData {
    n_a: usize,
    n_b: usize,
    g_a: Vec<[f64; 3]>,
    g_b: Vec<[f64; 3]>,
    h: Vec<[[f64; 3]; 3]>,
}

impl PairData {
    /// Validates shape and, pair by pair, that the implied 4x4 matrix is a
    /// density matrix. The offending pair is named on rejection.
    pub fn new(g_a: Vec<[f64; 3]>, g_b: Vec<[f64; 3]>, h: Vec<[[f64; 3]; 3]>) -> Result<Self> {
        let (n_a, n_b) = (g_a.len(), g_b.len());
        if n_a == 0 || n_b == 0 {
            return Err(Error::InvalidArgument(
                "both samples must contain at least one site".into(),
            ));
        }
        if h.len() != n_a * n_b {
            return Err(Error::DimensionMismatch {
                expected: n_a * n_b,
                got: h.len(),
            });
        }
        let pd = Self {
            n_a,
            n_b,
            g_a,
            g_b,
            h,
        };
        for a in 0..n_a {
            for b in 0..n_b {
                let state = pd.pair_state(a, b)?;
                let check = state.physicality(PHYSICAL_TOL)?;
                if !check.physical {
                    return Err(Error::UnphysicalPair {
                        a,
                        b,
                        min_eigenvalue: check.min_eigenvalue,
                    });
                }
            }
        }
        Ok(pd)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn g_a(&self) -> &[[f64; 3]] {
        &self.g_a
    }

    pub fn g_b(&self) -> &[[f64; 3]] {
        &self.g_b
    }

    pub fn h_at(&self, a: usize, b: usize) -> &[[f64; 3]; 3] {
        &self.h[a * self.n_b + b]
    }

    /// The two-qubit state of one pair, rebuilt from its coefficients.
    pub fn pair_state(&self, a: usize, b: usize) -> Result<TwoQubitState> {
        let coeffs = PauliCoefficients::new(self.g_a[a], self.g_b[b], *self.h_at(a, b))?;
        Ok(TwoQubitState::from_pauli(&coeffs))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_a).flat_map(move |a| (0..self.n_b).map(move |b| (a, b)))
    }

    pub fn read_json<R: std::io::Read>(reader: R) -> Result<Self> {
        let file: PairDataFile = serde_json::from_reader(reader)?;
        file.into_pair_data()
    }

    pub fn write_json<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let file = PairDataFile::from_pair_data(self);
        serde_json::to_writer_pretty(writer, &file)?;
        Ok(())
    }

    pub fn load_json(path: &std::path::Path) -> Result<Self> {
        Self::read_json(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn save_json(&self, path: &std::path::Path) -> Result<()> {
        self.write_json(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

#[derive(Serialize, Deserialize)]
struct PairDataFile {
    n_a: usize,
    n_b: usize,
    g_a: Vec<[f64; 3]>,
    g_b: Vec<[f64; 3]>,
    h: Vec<PairTensorEntry>,
}

#[derive(Serialize, Deserialize)]
struct PairTensorEntry {
    a: usize,
    b: usize,
    m: [[f64; 3]; 3],
}

impl PairDataFile {
    fn from_pair_data(pd: &PairData) -> Self {
        Self {
            n_a: pd.n_a,
            n_b: pd.n_b,
            g_a: pd.g_a.clone(),
            g_b: pd.g_b.clone(),
            h: pd
                .pairs()
                .map(|(a, b)| PairTensorEntry {
                    a,
                    b,
                    m: *pd.h_at(a, b),
                })
                .collect(),
        }
    }

    fn into_pair_data(self) -> Result<PairData> {
        if self.g_a.len() != self.n_a || self.g_b.len() != self.n_b {
            return Err(Error::InvalidArgument(format!(
                "declared sizes ({}, {}) do not match Bloch vector counts ({}, {})",
                self.n_a,
                self.n_b,
                self.g_a.len(),
                self.g_b.len()
            )));
        }
        let mut h = vec![None; self.n_a * self.n_b];
        for entry in &self.h {
            if entry.a >= self.n_a || entry.b >= self.n_b {
                return Err(Error::InvalidArgument(format!(
                    "pair ({}, {}) out of range for samples of size ({}, {})",
                    entry.a, entry.b, self.n_a, self.n_b
                )));
            }
            let slot = &mut h[entry.a * self.n_b + entry.b];
            if slot.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "pair ({}, {}) listed more than once",
                    entry.a, entry.b
                )));
            }
            *slot = Some(entry.m);
        }
        let h: Vec<_> = h
            .into_iter()
            .enumerate()
            .map(|(i, slot)| {
                slot.ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "missing correlation tensor for pair ({}, {})",
                        i / self.n_b,
                        i % self.n_b
                    ))
                })
            })
            .collect::<Result<_>>()?;
        PairData::new(self.g_a, self.g_b, h)
    }
}

/// The 15 collective numbers of a partition and their normalized forms:
/// total sample spins `S` (units of hbar = 1), the cross-sample correlation
/// tensor `T`, magnetization per particle `s = 2 S / n`, and
/// `t = 4 T / (n_a n_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveMoments {
    spin_a: [f64; 3],
    spin_b: [f64; 3],
    corr: [[f64; 3]; 3],
    n_a: usize,
    n_b: usize,
    s_a: [f64; 3],
    s_b: [f64; 3],
    t: [[f64; 3]; 3],
}

impl CollectiveMoments {
    /// Sums the microscopic data: `S_i = 1/2 sum_site g_i`,
    /// `T_ij = 1/4 sum_pairs h_ij`.
    pub fn from_pair_data(pd: &PairData) -> Self {
        let mut spin_a = [0.0; 3];
        let mut spin_b = [0.0; 3];
        let mut corr = [[0.0; 3]; 3];
        for g in pd.g_a() {
            for i in 0..3 {
                spin_a[i] += 0.5 * g[i];
            }
        }
        for g in pd.g_b() {
            for i in 0..3 {
                spin_b[i] += 0.5 * g[i];
            }
        }
        for (a, b) in pd.pairs() {
            let h = pd.h_at(a, b);
            for i in 0..3 {
                for j in 0..3 {
                    corr[i][j] += 0.25 * h[i][j];
                }
            }
        }
        let (n_a, n_b) = (pd.n_a(), pd.n_b());
        let mut s_a = [0.0; 3];
        let mut s_b = [0.0; 3];
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            s_a[i] = 2.0 * spin_a[i] / n_a as f64;
            s_b[i] = 2.0 * spin_b[i] / n_b as f64;
            for j in 0..3 {
                t[i][j] = 4.0 * corr[i][j] / (n_a * n_b) as f64;
            }
        }
        Self {
            spin_a,
            spin_b,
            corr,
            n_a,
            n_b,
            s_a,
            s_b,
            t,
        }
    }

    /// Builds moments directly from normalized values, for inputs where the
    /// normalized quantities are known in closed form.
    pub fn from_normalized(
        s_a: [f64; 3],
        s_b: [f64; 3],
        t: [[f64; 3]; 3],
        n_a: usize,
        n_b: usize,
    ) -> Result<Self> {
        if n_a == 0 || n_b == 0 {
            return Err(Error::InvalidArgument("sample sizes must be positive".into()));
        }
        for v in s_a.iter().chain(s_b.iter()).chain(t.iter().flatten()) {
            if v.abs() > 1.0 + 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "normalized moment {v} outside [-1, 1]"
                )));
            }
        }
        let mut spin_a = [0.0; 3];
        let mut spin_b = [0.0; 3];
        let mut corr = [[0.0; 3]; 3];
        for i in 0..3 {
            spin_a[i] = 0.5 * n_a as f64 * s_a[i];
            spin_b[i] = 0.5 * n_b as f64 * s_b[i];
            for j in 0..3 {
                corr[i][j] = 0.25 * (n_a * n_b) as f64 * t[i][j];
            }
        }
        Ok(Self {
            spin_a,
            spin_b,
            corr,
            n_a,
            n_b,
            s_a,
            s_b,
            t,
        })
    }

    pub fn spin_a(&self) -> &[f64; 3] {
        &self.spin_a
    }

    pub fn spin_b(&self) -> &[f64; 3] {
        &self.spin_b
    }

    pub fn corr(&self) -> &[[f64; 3]; 3] {
        &self.corr
    }

    pub fn s_a(&self) -> &[f64; 3] {
        &self.s_a
    }

    pub fn s_b(&self) -> &[f64; 3] {
        &self.s_b
    }

    pub fn t(&self) -> &[[f64; 3]; 3] {
        &self.t
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }
}

/// The two-qubit state whose Pauli coefficients are the normalized
/// collective moments. Equals the uniform mixture of all pair states, so it
/// is guaranteed positive for moments that come from a physical state; the
/// positivity is still asserted and a violation reported as an error.
pub fn virtual_state(cm: &CollectiveMoments) -> Result<TwoQubitState> {
    let coeffs = PauliCoefficients::new(*cm.s_a(), *cm.s_b(), *cm.t())?;
    let state = TwoQubitState::from_pauli(&coeffs);
    let check = state.physicality(PHYSICAL_TOL)?;
    if !check.physical {
        return Err(Error::Unphysical {
            min_eigenvalue: check.min_eigenvalue,
        });
    }
    Ok(state)
}

/// The collective entanglement: the chosen measure evaluated on the virtual
/// state. A lower bound on the average entanglement over all pairs.
pub fn collective_entanglement(cm: &CollectiveMoments, measure: Measure) -> Result<f64> {
    measure.apply(&virtual_state(cm)?)
}

/// Relative sign between the x and y cross-correlations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CorrelationSign {
    Plus,
    Minus,
}

impl CorrelationSign {
    pub fn value(&self) -> f64 {
        match self {
            CorrelationSign::Plus => 1.0,
            CorrelationSign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for CorrelationSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CorrelationSign::Plus => write!(f, "+1"),
            CorrelationSign::Minus => write!(f, "-1"),
        }
    }
}

enum XyScan {
    Locked(CorrelationSign),
    AllZero,
    Broken,
}

/// Scans `h_xx = sign * h_yy` across all pairs.
fn xy_sign_scan(pd: &PairData) -> XyScan {
    let mut candidate: Option<CorrelationSign> = None;
    for (a, b) in pd.pairs() {
        let h = pd.h_at(a, b);
        let (xx, yy) = (h[0][0], h[1][1]);
        if xx.abs() <= STRUCTURE_TOL && yy.abs() <= STRUCTURE_TOL {
            continue;
        }
        let fits_plus = (xx - yy).abs() <= STRUCTURE_TOL;
        let fits_minus = (xx + yy).abs() <= STRUCTURE_TOL;
        let this = match (fits_plus, fits_minus) {
            (true, false) => CorrelationSign::Plus,
            (false, true) => CorrelationSign::Minus,
            _ => return XyScan::Broken,
        };
        match candidate {
            None => candidate = Some(this),
            Some(c) if c == this => {}
            Some(_) => return XyScan::Broken,
        }
    }
    match candidate {
        Some(sign) => XyScan::Locked(sign),
        None => XyScan::AllZero,
    }
}

/// True when no pair has a z-correlation of the wrong sign for the given
/// `sign`; z-correlations at zero are compatible with either.
fn zz_sign_consistent(pd: &PairData, sign: CorrelationSign) -> bool {
    pd.pairs().all(|(a, b)| {
        let zz = pd.h_at(a, b)[2][2];
        zz.abs() <= STRUCTURE_TOL || zz.signum() == -sign.value()
    })
}

/// Sign implied by the z-correlations alone, if they share one.
fn zz_tiebreak(pd: &PairData) -> Option<CorrelationSign> {
    let mut seen: Option<f64> = None;
    for (a, b) in pd.pairs() {
        let zz = pd.h_at(a, b)[2][2];
        if zz.abs() <= STRUCTURE_TOL {
            continue;
        }
        match seen {
            None => seen = Some(zz.signum()),
            Some(s) if s == zz.signum() => {}
            Some(_) => return None,
        }
    }
    seen.map(|s| {
        if s > 0.0 {
            CorrelationSign::Minus
        } else {
            CorrelationSign::Plus
        }
    })
}

/// The constant sign relating the x and y cross-correlations, provided the
/// pair data has the locked-sign structure (consistent `h_xx = sign h_yy`
/// and z-correlations of sign `-sign`). When all x/y correlations vanish
/// the sign is inferred from the z-correlations; fully trivial data yields
/// `None`.
pub fn correlation_sign(pd: &PairData) -> Option<CorrelationSign> {
    let sign = match xy_sign_scan(pd) {
        XyScan::Broken => return None,
        XyScan::Locked(sign) => sign,
        XyScan::AllZero => zz_tiebreak(pd)?,
    };
    zz_sign_consistent(pd, sign).then_some(sign)
}

/// Closed form for the single eigenvalue of a pair's partial transpose that
/// can turn negative under the locked-sign structure:
/// `1/4 [1 - sqrt((g_z_a + e g_z_b)^2 + 4 h_xx^2) + e h_zz]`.
pub fn pair_pt_eigenvalue(
    g_z_a: f64,
    g_z_b: f64,
    h_xx: f64,
    h_zz: f64,
    sign: CorrelationSign,
) -> f64 {
    let e = sign.value();
    let c = g_z_a + e * g_z_b;
    0.25 * (1.0 - (c * c + 4.0 * h_xx * h_xx).sqrt() + e * h_zz)
}

/// The same closed form evaluated on the normalized collective moments.
pub fn virtual_pt_eigenvalue(cm: &CollectiveMoments, sign: CorrelationSign) -> f64 {
    pair_pt_eigenvalue(cm.s_a()[2], cm.s_b()[2], cm.t()[0][0], cm.t()[2][2], sign)
}

/// The structural conditions under which the closed forms apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureConditions {
    /// Every site of a sample carries the same z magnetization.
    pub uniform_z_bloch: bool,
    /// `h_xx = sign * h_yy` with one sign across all pairs.
    pub locked_xy_sign: bool,
    /// All z-correlations carry the sign opposite to `sign`.
    pub constant_zz_sign: bool,
    /// x/y magnetizations and off-diagonal correlations vanish.
    pub transverse_terms_vanish: bool,
}

impl StructureConditions {
    pub fn all(&self) -> bool {
        self.uniform_z_bloch
            && self.locked_xy_sign
            && self.constant_zz_sign
            && self.transverse_terms_vanish
    }
}

/// Closed-form eigenvalues for data with a locked correlation sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForms {
    pub sign: CorrelationSign,
    /// Candidate negative eigenvalue of each pair's partial transpose.
    pub pair_values: Vec<(usize, usize, f64)>,
    pub pair_mean: f64,
    /// Same closed form on the normalized moments.
    pub virtual_value: f64,
    /// `virtual_value - pair_mean`; non-negative whenever the structure
    /// holds, zero exactly when `h_xx` is pair-constant.
    pub gap: f64,
    /// Collective entanglement implied by the closed form.
    pub bound: f64,
    /// Average pair entanglement implied by the closed forms.
    pub pair_average: f64,
}

/// Verdict on whether the collective bound is tight for the given data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub conditions: StructureConditions,
    pub closed_forms: Option<ClosedForms>,
    /// True when the structure holds, every pair's candidate eigenvalue is
    /// non-positive and `h_xx` is constant across pairs; then the bound
    /// equals the pair average.
    pub equality_holds: bool,
}

/// Evaluates the structural conditions and closed forms on pair data.
pub fn tightness_check(pd: &PairData) -> TightnessReport {
    let uniform = |g: &[[f64; 3]]| -> bool {
        let z0 = g[0][2];
        g.iter().all(|v| (v[2] - z0).abs() <= STRUCTURE_TOL)
    };
    let uniform_z_bloch = uniform(pd.g_a()) && uniform(pd.g_b());

    let scan = xy_sign_scan(pd);
    let locked_xy_sign = !matches!(scan, XyScan::Broken);
    let sign = correlation_sign(pd);
    let constant_zz_sign = match (&scan, sign) {
        (XyScan::Broken, _) => false,
        (_, Some(s)) => zz_sign_consistent(pd, s),
        // No informative correlations at all; nothing to violate.
        (XyScan::AllZero, None) => pd
            .pairs()
            .all(|(a, b)| pd.h_at(a, b)[2][2].abs() <= STRUCTURE_TOL),
        (XyScan::Locked(_), None) => false,
    };

    let transverse_terms_vanish = pd
        .g_a()
        .iter()
        .chain(pd.g_b())
        .all(|g| g[0].abs() <= STRUCTURE_TOL && g[1].abs() <= STRUCTURE_TOL)
        && pd.pairs().all(|(a, b)| {
            let h = pd.h_at(a, b);
            (0..3).all(|i| (0..3).all(|j| i == j || h[i][j].abs() <= STRUCTURE_TOL))
        });

    let conditions = StructureConditions {
        uniform_z_bloch,
        locked_xy_sign,
        constant_zz_sign,
        transverse_terms_vanish,
    };

    let closed_forms = sign.map(|sign| {
        let cm = CollectiveMoments::from_pair_data(pd);
        let pair_values: Vec<(usize, usize, f64)> = pd
            .pairs()
            .map(|(a, b)| {
                let h = pd.h_at(a, b);
                let value =
                    pair_pt_eigenvalue(pd.g_a()[a][2], pd.g_b()[b][2], h[0][0], h[2][2], sign);
                (a, b, value)
            })
            .collect();
        let count = pair_values.len() as f64;
        let pair_mean = pair_values.iter().map(|(_, _, v)| v).sum::<f64>() / count;
        let virtual_value = virtual_pt_eigenvalue(&cm, sign);
        let pair_average = pair_values
            .iter()
            .map(|(_, _, v)| (-v).max(0.0))
            .sum::<f64>()
            / count;
        ClosedForms {
            sign,
            pair_mean,
            virtual_value,
            gap: virtual_value - pair_mean,
            bound: (-virtual_value).max(0.0),
            pair_average,
            pair_values,
        }
    });

    let equality_holds = conditions.all()
        && closed_forms.as_ref().is_some_and(|cf| {
            let all_nonpositive = cf
                .pair_values
                .iter()
                .all(|(_, _, v)| *v <= PAIR_EIGENVALUE_TOL);
            let xx0 = pd.h_at(0, 0)[0][0];
            let xx_constant = pd
                .pairs()
                .all(|(a, b)| (pd.h_at(a, b)[0][0] - xx0).abs() <= STRUCTURE_TOL);
            all_nonpositive && xx_constant
        });
    if equality_holds {
        let cf = closed_forms.as_ref().unwrap();
        debug_assert!(
            (cf.bound - cf.pair_average).abs() <= 1e-9,
            "tight bound must match the pair average"
        );
    }

    TightnessReport {
        conditions,
        closed_forms,
        equality_holds,
    }
}

/// Virtual state of `M` samples: the 2^M x 2^M density matrix whose Pauli
/// coefficient for each operator string is the average of the corresponding
/// microscopic correlator over all site tuples. The marginal on any two
/// samples reproduces the bipartite virtual state.
pub fn virtual_state_multi(state: &State, samples: &[Vec<usize>]) -> Result<ComplexMatrix> {
    let m = samples.len();
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "number of samples must be between 2 and 4, got {m}"
        )));
    }
    let mut seen = std::collections::HashSet::new();
    for sample in samples {
        if sample.is_empty() {
            return Err(Error::InvalidArgument("empty sample".into()));
        }
        for &site in sample {
            if site >= state.num_qubits() {
                return Err(Error::SiteOutOfRange {
                    site,
                    num_qubits: state.num_qubits(),
                });
            }
            if !seen.insert(site) {
                return Err(Error::InvalidArgument(format!(
                    "site {site} appears in more than one sample"
                )));
            }
        }
    }

    let dim = 1usize << m;
    let mut acc = ComplexMatrix::zeros(dim);
    // Operator strings: digit 0 is identity, 1..=3 select a Pauli axis.
    for string in 0..4usize.pow(m as u32) {
        let digits: Vec<usize> = (0..m).map(|k| (string >> (2 * (m - 1 - k))) & 3).collect();
        let active: Vec<usize> = (0..m).filter(|&k| digits[k] != 0).collect();

        let coeff = if active.is_empty() {
            1.0
        } else {
            // Average the correlator over every tuple of sites drawn from
            // the active samples.
            let axes: Vec<usize> = active.iter().map(|&k| digits[k] - 1).collect();
            let mut total = 0.0;
            let mut count = 0usize;
            let mut cursor = vec![0usize; active.len()];
            loop {
                let sites: Vec<usize> = cursor
                    .iter()
                    .zip(&active)
                    .map(|(&c, &k)| samples[k][c])
                    .collect();
                total += state.pauli_product_expectation(&sites, &axes)?;
                count += 1;
                let mut pos = active.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    cursor[pos] += 1;
                    if cursor[pos] < samples[active[pos]].len() {
                        break;
                    }
                    cursor[pos] = 0;
                }
                if cursor.iter().all(|&c| c == 0) {
                    break;
                }
            }
            total / count as f64
        };
        if coeff == 0.0 {
            continue;
        }

        let mut term = ComplexMatrix::identity(1);
        for &d in &digits {
            let factor = if d == 0 {
                matcore::identity2()
            } else {
                matcore::sigma(d - 1)
            };
            term = term.kron(&factor);
        }
        acc = acc.add(&term.scale(coeff));
    }
    let rho = acc.scale(1.0 / dim as f64);

    let min = rho.min_eigenvalue()?;
    if min < -PHYSICAL_TOL {
        return Err(Error::Unphysical {
            min_eigenvalue: min,
        });
    }
    Ok(rho)
}

/// Negativity of a multi-qubit density matrix across the cut separating
/// `cut` from the remaining qubits.
pub fn cut_negativity(rho: &ComplexMatrix, cut: &[usize]) -> Result<f64> {
    let pt = rho.partial_transpose_qubits(cut)?;
    let neg: f64 = pt
        .hermitian_eigenvalues()?
        .iter()
        .filter(|&&v| v < -EIG_NOISE)
        .sum();
    Ok(-neg)
}
