//! Explicit N-qubit states (amplitude vectors and ensembles of them) and
//! their reduction to per-site Bloch vectors and per-pair correlation
//! tensors.
//!
//! Mixed states are kept as weighted lists of pure states. Every quantity
//! computed downstream is linear in the density matrix, so weighted
//! averaging over components is exact and the full 2^N x 2^N matrix never
//! needs to be built.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::collective::PairData;
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::pairmeasures::TwoQubitState;

/// Hard cap on register size; keeps exhaustive verification desk scale.
pub const MAX_QUBITS: usize = 14;

/// Cap on ensemble size.
pub const MAX_COMPONENTS: usize = 4096;

const NORM_TOL: f64 = 1e-12;

/// Bit mask of a site in a basis index. Bit 0 of the index is the most
/// significant bit and addresses site 0.
#[inline]
fn site_mask(num_qubits: usize, site: usize) -> usize {
    1 << (num_qubits - 1 - site)
}

fn check_site(num_qubits: usize, site: usize) -> Result<()> {
    if site >= num_qubits {
        return Err(Error::SiteOutOfRange { site, num_qubits });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Normalized amplitude vector over `2^num_qubits` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "number of qubits must be between 1 and {MAX_QUBITS}, got {num_qubits}"
            )));
        }
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector has norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
        if index >= amplitudes.len() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        amplitudes[index] = Complex64::ONE;
        Self::new(num_qubits, amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a single-qubit operator to one site, returning a new state.
    /// The operator must be norm-preserving for the result to stay valid.
    pub fn apply_single_qubit(&self, site: usize, op: &ComplexMatrix) -> Result<Self> {
        check_site(self.num_qubits, site)?;
        if op.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: op.dim(),
            });
        }
        let mask = site_mask(self.num_qubits, site);
        let mut out = self.amplitudes.clone();
        for x in 0..out.len() {
            if x & mask == 0 {
                let y = x | mask;
                let (a, b) = (self.amplitudes[x], self.amplitudes[y]);
                out[x] = op.get(0, 0) * a + op.get(0, 1) * b;
                out[y] = op.get(1, 0) * a + op.get(1, 1) * b;
            }
        }
        Self::new(self.num_qubits, out)
    }

    /// 2x2 reduced density matrix of one site.
    fn single_site_matrix(&self, site: usize) -> Result<ComplexMatrix> {
        check_site(self.num_qubits, site)?;
        let mask = site_mask(self.num_qubits, site);
        let mut rho = ComplexMatrix::zeros(2);
        for x in 0..self.amplitudes.len() {
            if x & mask == 0 {
                let y = x | mask;
                let (a, b) = (self.amplitudes[x], self.amplitudes[y]);
                rho.set(0, 0, rho.get(0, 0) + a * a.conj());
                rho.set(1, 1, rho.get(1, 1) + b * b.conj());
                rho.set(0, 1, rho.get(0, 1) + a * b.conj());
            }
        }
        rho.set(1, 0, rho.get(0, 1).conj());
        Ok(rho)
    }

    /// 4x4 reduced density matrix of the ordered site pair
    /// (`site_a`, `site_b`), tracing out everything else.
    fn pair_reduced_matrix(&self, site_a: usize, site_b: usize) -> Result<ComplexMatrix> {
        check_site(self.num_qubits, site_a)?;
        check_site(self.num_qubits, site_b)?;
        if site_a == site_b {
            return Err(Error::InvalidArgument(format!(
                "pair sites must be distinct, got ({site_a}, {site_b})"
            )));
        }
        let n = self.num_qubits;
        let mask_a = site_mask(n, site_a);
        let mask_b = site_mask(n, site_b);
        let rest_dim = self.amplitudes.len() >> 2;

        // Group amplitudes by the (a, b) bit pair; the remaining bits form
        // the environment index.
        let mut grouped = vec![vec![Complex64::ZERO; rest_dim]; 4];
        for (x, amp) in self.amplitudes.iter().enumerate() {
            let ab = (usize::from(x & mask_a != 0) << 1) | usize::from(x & mask_b != 0);
            let mut rest = 0usize;
            for s in 0..n {
                if s != site_a && s != site_b {
                    rest = (rest << 1) | ((x >> (n - 1 - s)) & 1);
                }
            }
            grouped[ab][rest] = *amp;
        }

        let mut rho = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..=i {
                let sum: Complex64 = grouped[i]
                    .iter()
                    .zip(&grouped[j])
                    .map(|(x, y)| x * y.conj())
                    .sum();
                rho.set(i, j, sum);
                if i != j {
                    rho.set(j, i, sum.conj());
                }
            }
        }
        Ok(rho)
    }

    pub fn pair_reduced(&self, site_a: usize, site_b: usize) -> Result<TwoQubitState> {
        TwoQubitState::new(self.pair_reduced_matrix(site_a, site_b)?)
    }

    /// Expectation value of a product of Pauli operators on distinct sites,
    /// `<prod_i sigma_{axes[i]}^(sites[i])>`.
    fn pauli_product_expectation(&self, sites: &[usize], axes: &[usize]) -> Result<f64> {
        assert_eq!(sites.len(), axes.len());
        let mut rotated = self.clone();
        for (&site, &axis) in sites.iter().zip(axes) {
            rotated = rotated.apply_single_qubit(site, &crate::matcore::sigma(axis))?;
        }
        let inner: Complex64 = self
            .amplitudes
            .iter()
            .zip(&rotated.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner.re)
    }
}

/// Mixed state as a weighted list of pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    num_qubits: usize,
    components: Vec<(f64, PureState)>,
}

impl EnsembleState {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("ensemble has no components".into()));
        }
        if components.len() > MAX_COMPONENTS {
            return Err(Error::InvalidArgument(format!(
                "ensemble has {} components, cap is {MAX_COMPONENTS}",
                components.len()
            )));
        }
        let num_qubits = components[0].1.num_qubits();
        let mut total = 0.0;
        for (w, s) in &components {
            if *w <= 0.0 {
                return Err(Error::InvalidArgument(format!("non-positive weight {w}")));
            }
            if s.num_qubits() != num_qubits {
                return Err(Error::DimensionMismatch {
                    expected: num_qubits,
                    got: s.num_qubits(),
                });
            }
            total += w;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "ensemble weights sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            num_qubits,
            components,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }
}

/// A pure or mixed state; every reduction is linear, so mixed states are
/// handled by weighted averaging over components.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Ensemble(EnsembleState),
}

impl From<PureState> for State {
    fn from(s: PureState) -> Self {
        State::Pure(s)
    }
}

impl From<EnsembleState> for State {
    fn from(s: EnsembleState) -> Self {
        State::Ensemble(s)
    }
}

impl State {
    pub fn num_qubits(&self) -> usize {
        match self {
            State::Pure(s) => s.num_qubits(),
            State::Ensemble(s) => s.num_qubits(),
        }
    }

    fn weighted_components(&self) -> Vec<(f64, &PureState)> {
        match self {
            State::Pure(s) => vec![(1.0, s)],
            State::Ensemble(e) => e.components().iter().map(|(w, s)| (*w, s)).collect(),
        }
    }

    /// Reduced two-qubit state of the ordered site pair.
    pub fn pair_reduced(&self, site_a: usize, site_b: usize) -> Result<TwoQubitState> {
        let mut rho = ComplexMatrix::zeros(4);
        for (w, s) in self.weighted_components() {
            rho = rho.add(&s.pair_reduced_matrix(site_a, site_b)?.scale(w));
        }
        TwoQubitState::new(rho)
    }

    /// Bloch vector `(<sx>, <sy>, <sz>)` of one site.
    pub fn bloch_vector(&self, site: usize) -> Result<[f64; 3]> {
        let mut rho = ComplexMatrix::zeros(2);
        for (w, s) in self.weighted_components() {
            rho = rho.add(&s.single_site_matrix(site)?.scale(w));
        }
        let coh = rho.get(0, 1);
        Ok([
            2.0 * coh.re,
            -2.0 * coh.im,
            rho.get(0, 0).re - rho.get(1, 1).re,
        ])
    }

    pub fn pauli_product_expectation(&self, sites: &[usize], axes: &[usize]) -> Result<f64> {
        let mut sum = 0.0;
        for (w, s) in self.weighted_components() {
            sum += w * s.pauli_product_expectation(sites, axes)?;
        }
        Ok(sum)
    }

    /// Applies one single-qubit operator per site (`ops[m]` acts on site
    /// `m`), returning a new state.
    pub fn apply_local_unitaries(&self, ops: &[ComplexMatrix]) -> Result<State> {
        if ops.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                got: ops.len(),
            });
        }
        let rotate = |s: &PureState| -> Result<PureState> {
            let mut out = s.clone();
            for (site, op) in ops.iter().enumerate() {
                out = out.apply_single_qubit(site, op)?;
            }
            Ok(out)
        };
        Ok(match self {
            State::Pure(s) => State::Pure(rotate(s)?),
            State::Ensemble(e) => {
                let mut components = Vec::with_capacity(e.components().len());
                for (w, s) in e.components() {
                    components.push((*w, rotate(s)?));
                }
                State::Ensemble(EnsembleState::new(components)?)
            }
        })
    }

    /// Reads off the microscopic quantities of a partition: per-site Bloch
    /// vectors and the full grid of per-pair correlation tensors.
    pub fn extract_pair_data(&self, partition: &Partition) -> Result<PairData> {
        partition.validate_for(self.num_qubits())?;
        let g_a: Vec<[f64; 3]> = partition
            .a_sites()
            .iter()
            .map(|&s| self.bloch_vector(s))
            .collect::<Result<_>>()?;
        let g_b: Vec<[f64; 3]> = partition
            .b_sites()
            .iter()
            .map(|&s| self.bloch_vector(s))
            .collect::<Result<_>>()?;
        let mut h = Vec::with_capacity(partition.n_a() * partition.n_b());
        for &alpha in partition.a_sites() {
            for &beta in partition.b_sites() {
                h.push(self.pair_reduced(alpha, beta)?.to_pauli().h);
            }
        }
        PairData::new(g_a, g_b, h)
    }
}

/// Two disjoint, non-empty, ordered site lists labelling the samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    a_sites: Vec<usize>,
    b_sites: Vec<usize>,
}

impl Partition {
    pub fn new(a_sites: Vec<usize>, b_sites: Vec<usize>) -> Result<Self> {
        if a_sites.is_empty() || b_sites.is_empty() {
            return Err(Error::InvalidArgument(
                "both partition sides must be non-empty".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for &s in a_sites.iter().chain(b_sites.iter()) {
            if !seen.insert(s) {
                return Err(Error::InvalidArgument(format!(
                    "site {s} appears more than once in the partition"
                )));
            }
        }
        Ok(Self { a_sites, b_sites })
    }

    /// `A = {0, .., n_a - 1}`, `B = {n_a, .., n_a + n_b - 1}`.
    pub fn contiguous(n_a: usize, n_b: usize) -> Result<Self> {
        Self::new((0..n_a).collect(), (n_a..n_a + n_b).collect())
    }

    pub fn validate_for(&self, num_qubits: usize) -> Result<()> {
        for &s in self.a_sites.iter().chain(self.b_sites.iter()) {
            check_site(num_qubits, s)?;
        }
        Ok(())
    }

    pub fn a_sites(&self) -> &[usize] {
        &self.a_sites
    }

    pub fn b_sites(&self) -> &[usize] {
        &self.b_sites
    }

    pub fn n_a(&self) -> usize {
        self.a_sites.len()
    }

    pub fn n_b(&self) -> usize {
        self.b_sites.len()
    }
}

/// Symmetric state with `excitations` of `total` qubits excited: equal
/// amplitude on every basis state of that Hamming weight.
pub fn dicke(total: usize, excitations: usize) -> Result<PureState> {
    if total == 0 || total > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "total qubits must be between 1 and {MAX_QUBITS}, got {total}"
        )));
    }
    if excitations > total {
        return Err(Error::InvalidArgument(format!(
            "excitations {excitations} out of range for {total} qubits"
        )));
    }
    let amp = 1.0 / (binomial(total, excitations) as f64).sqrt();
    let amplitudes = (0..1usize << total)
        .map(|x| {
            if x.count_ones() as usize == excitations {
                Complex64::new(amp, 0.0)
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    PureState::new(total, amplitudes)
}

/// Total-spin-zero combination of two blocks of `pairs` qubits each, with
/// block A on sites `0..pairs` and block B on sites `pairs..2*pairs`:
/// `(n+1)^(-1/2) sum_j (-1)^(n-j) |n; j>_A (x) |n; n-j>_B`.
pub fn generalized_singlet(pairs: usize) -> Result<PureState> {
    if pairs == 0 || 2 * pairs > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "sample size must be between 1 and {}, got {pairs}",
            MAX_QUBITS / 2
        )));
    }
    let n = pairs;
    let block = 1usize << n;
    let scale = 1.0 / ((n + 1) as f64).sqrt();
    let mut amplitudes = vec![Complex64::ZERO; block * block];
    for j in 0..=n {
        let a = dicke(n, j)?;
        let b = dicke(n, n - j)?;
        let sign = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        for (ia, va) in a.amplitudes().iter().enumerate() {
            if va.norm_sqr() == 0.0 {
                continue;
            }
            for (ib, vb) in b.amplitudes().iter().enumerate() {
                if vb.norm_sqr() == 0.0 {
                    continue;
                }
                amplitudes[(ia << n) | ib] += va * vb * sign * scale;
            }
        }
    }
    PureState::new(2 * n, amplitudes)
}

/// Mixture of the generalized singlet (weight `p`) with `pairs` classically
/// anticorrelated site pairs (weight `1 - p`): site `i` of A pairs with site
/// `pairs + i` of B, each pair an even mixture of |01> and |10>, expanded
/// into the 2^pairs product pure states.
pub fn singlet_noise_mixture(pairs: usize, p: f64) -> Result<EnsembleState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "mixing weight must lie in [0, 1], got {p}"
        )));
    }
    if pairs == 0 || 2 * pairs > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "sample size must be between 1 and {}, got {pairs}",
            MAX_QUBITS / 2
        )));
    }
    let n = pairs;
    let mut components = Vec::new();
    if p > 0.0 {
        components.push((p, generalized_singlet(n)?));
    }
    if p < 1.0 {
        let w = (1.0 - p) / (1usize << n) as f64;
        let block_mask = (1usize << n) - 1;
        for choice in 0..1usize << n {
            // A block carries the choice bits, B the complement, so each
            // pair (i, n + i) is anticorrelated in z.
            let index = (choice << n) | (!choice & block_mask);
            components.push((w, PureState::basis_state(2 * n, index)?));
        }
    }
    EnsembleState::new(components)
}

/// Reduced two-qubit state of a site pair; convenience alias for
/// [`State::pair_reduced`].
pub fn pair_reduced_state(state: &State, alpha: usize, beta: usize) -> Result<TwoQubitState> {
    state.pair_reduced(alpha, beta)
}

/// Writes the state-vector text format: a `qubits=<N>` header, then one
/// `<index>,<re>,<im>` line per nonzero amplitude.
pub fn write_statevec<W: Write>(mut w: W, state: &PureState) -> Result<()> {
    writeln!(w, "qubits={}", state.num_qubits())?;
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.norm_sqr() > 0.0 {
            writeln!(w, "{},{},{}", i, a.re, a.im)?;
        }
    }
    Ok(())
}

/// Parses the state-vector text format written by [`write_statevec`].
pub fn read_statevec<R: BufRead>(r: R) -> Result<PureState> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let header = header?;
    let num_qubits: usize = header
        .strip_prefix("qubits=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or(Error::Parse {
            line: 1,
            message: format!("expected `qubits=<N>`, got `{header}`"),
        })?;
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::Parse {
            line: 1,
            message: format!("qubit count {num_qubits} out of range"),
        });
    }

    let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
    let mut seen = vec![false; amplitudes.len()];
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid {what}: `{s}`"),
            })
        };
        let mut parts = text.splitn(3, ',');
        let (i_str, re_str, im_str) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `<index>,<re>,<im>`, got `{text}`"),
                })
            }
        };
        let index: usize = i_str.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid basis index: `{i_str}`"),
        })?;
        if index >= amplitudes.len() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("basis index {index} out of range for {num_qubits} qubits"),
            });
        }
        if seen[index] {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate basis index {index}"),
            });
        }
        seen[index] = true;
        amplitudes[index] = Complex64::new(parse(re_str, "real part")?, parse(im_str, "imaginary part")?);
    }
    PureState::new(num_qubits, amplitudes)
}

pub fn save_statevec(path: &std::path::Path, state: &PureState) -> Result<()> {
    write_statevec(std::io::BufWriter::new(std::fs::File::create(path)?), state)
}

pub fn load_statevec(path: &std::path::Path) -> Result<PureState> {
    read_statevec(std::io::BufReader::new(std::fs::File::open(path)?))
}
