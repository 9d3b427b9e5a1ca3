//! Brute-force reference computations: the average pairwise entanglement
//! obtained by reducing every single pair, and verdicts comparing it with
//! the collective bound.
//!
//! The two pipelines stay structurally independent: this module reduces
//! pairs one by one and never looks at collective moments, while the
//! collective pipeline only ever consumes the summed moments. Agreement
//! between them is therefore evidence, not bookkeeping.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::collective::{tightness_check, CollectiveMoments, PairData};
use crate::error::Result;
use crate::matcore::ComplexMatrix;
use crate::pairmeasures::Measure;
use crate::states::{Partition, State};

/// Slack allowed on the lower-bound and equality comparisons.
pub const BOUND_TOL: f64 = 1e-9;

/// Entanglement of one reduced pair. `a` and `b` are site labels for state
/// inputs and sample positions for raw pair-data inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairEntanglement {
    pub a: usize,
    pub b: usize,
    pub value: f64,
}

/// Side-by-side result of the two pipelines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub measure: Measure,
    /// Collective entanglement, from the moments pipeline.
    pub e_ab: f64,
    /// Average entanglement over all pairs, from brute-force reduction.
    pub e_bar: f64,
    /// `e_bar - e_ab`; non-negative up to rounding for convex measures.
    pub margin: f64,
    pub per_pair: Vec<PairEntanglement>,
}

fn assemble_report(
    measure: Measure,
    e_ab: f64,
    per_pair: Vec<PairEntanglement>,
) -> BoundReport {
    let e_bar = per_pair.iter().map(|p| p.value).sum::<f64>() / per_pair.len() as f64;
    BoundReport {
        measure,
        e_ab,
        e_bar,
        margin: e_bar - e_ab,
        per_pair,
    }
}

/// Reduces every (alpha in A, beta in B) pair of the state, applies the
/// measure, and averages; the collective value is computed alongside for
/// comparison.
pub fn average_pair_entanglement(
    state: &State,
    partition: &Partition,
    measure: Measure,
) -> Result<BoundReport> {
    partition.validate_for(state.num_qubits())?;
    let pairs: Vec<(usize, usize)> = partition
        .a_sites()
        .iter()
        .flat_map(|&a| partition.b_sites().iter().map(move |&b| (a, b)))
        .collect();
    let per_pair: Vec<PairEntanglement> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let value = measure.apply(&state.pair_reduced(a, b)?)?;
            Ok(PairEntanglement { a, b, value })
        })
        .collect::<Result<_>>()?;

    let pd = state.extract_pair_data(partition)?;
    let cm = CollectiveMoments::from_pair_data(&pd);
    let e_ab = crate::collective::collective_entanglement(&cm, measure)?;
    Ok(assemble_report(measure, e_ab, per_pair))
}

/// Same comparison for raw pair data: each pair state is rebuilt from its
/// coefficients instead of being reduced from a global state.
pub fn average_pair_entanglement_from_data(
    pd: &PairData,
    measure: Measure,
) -> Result<BoundReport> {
    let pairs: Vec<(usize, usize)> = pd.pairs().collect();
    let per_pair: Vec<PairEntanglement> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let value = measure.apply(&pd.pair_state(a, b)?)?;
            Ok(PairEntanglement { a, b, value })
        })
        .collect::<Result<_>>()?;
    let cm = CollectiveMoments::from_pair_data(pd);
    let e_ab = crate::collective::collective_entanglement(&cm, measure)?;
    Ok(assemble_report(measure, e_ab, per_pair))
}

/// Machine-readable verdict on the lower-bound and tightness checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub measure: Measure,
    pub e_ab: f64,
    pub e_bar: f64,
    pub margin: f64,
    /// Whether the collective value stayed below the pair average.
    pub prop1: bool,
    /// When the tightness conditions predict equality: whether the margin
    /// vanished as predicted. `null` when no equality is predicted.
    pub prop2_equality: Option<bool>,
    pub pairs: Vec<PairEntanglement>,
    /// A non-zero collective value implies at least one entangled pair;
    /// records that the implication held.
    pub sufficiency: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn build_verdict(report: BoundReport, pd: &PairData, measure: Measure) -> Verdict {
    let mut violations = Vec::new();
    let prop1 = report.margin >= -BOUND_TOL;
    if !prop1 {
        violations.push(format!(
            "lower bound violated: collective value {:.12e} exceeds pair average {:.12e}",
            report.e_ab, report.e_bar
        ));
    }

    // The tightness analysis is specific to the negativity.
    let tightness = tightness_check(pd);
    let prop2_equality = if measure == Measure::Negativity && tightness.equality_holds {
        let confirmed = report.margin.abs() <= BOUND_TOL;
        if !confirmed {
            violations.push(format!(
                "predicted equality violated: |margin| = {:.12e}",
                report.margin.abs()
            ));
        }
        Some(confirmed)
    } else {
        None
    };

    let sufficiency = report.e_ab <= BOUND_TOL
        || report.per_pair.iter().any(|p| p.value > BOUND_TOL);
    if !sufficiency {
        violations.push(format!(
            "sufficiency violated: collective value {:.12e} with no entangled pair",
            report.e_ab
        ));
    }

    Verdict {
        measure,
        e_ab: report.e_ab,
        e_bar: report.e_bar,
        margin: report.margin,
        prop1,
        prop2_equality,
        pairs: report.per_pair,
        sufficiency,
        seed: None,
        violations,
    }
}

/// Runs both pipelines on a state and checks the lower bound, the predicted
/// equality cases and the sufficiency implication. Violations are listed in
/// the verdict rather than raised, so callers can serialize the outcome.
pub fn verify_bounds(state: &State, partition: &Partition, measure: Measure) -> Result<Verdict> {
    let report = average_pair_entanglement(state, partition, measure)?;
    let pd = state.extract_pair_data(partition)?;
    Ok(build_verdict(report, &pd, measure))
}

/// [`verify_bounds`] for raw pair data.
pub fn verify_bounds_from_data(pd: &PairData, measure: Measure) -> Result<Verdict> {
    let report = average_pair_entanglement_from_data(pd, measure)?;
    Ok(build_verdict(report, pd, measure))
}

/// A single-qubit unitary drawn uniformly (Haar) from SU(2), via a uniform
/// point on the unit quaternion sphere.
pub fn random_qubit_unitary<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let u3: f64 = rng.gen();
    let two_pi = 2.0 * std::f64::consts::PI;
    let a = (1.0 - u1).sqrt() * (two_pi * u2).sin();
    let b = (1.0 - u1).sqrt() * (two_pi * u2).cos();
    let c = u1.sqrt() * (two_pi * u3).sin();
    let d = u1.sqrt() * (two_pi * u3).cos();
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::new(a, b),
            Complex64::new(c, d),
            Complex64::new(-c, d),
            Complex64::new(a, -b),
        ],
    )
    .unwrap()
}

/// Applies an independent random single-qubit unitary to every site. Breaks
/// all permutation symmetry while leaving entanglement measures untouched
/// pair by pair in distribution.
pub fn perturb_with_local_unitaries<R: Rng>(state: &State, rng: &mut R) -> Result<State> {
    let ops: Vec<ComplexMatrix> = (0..state.num_qubits())
        .map(|_| random_qubit_unitary(rng))
        .collect();
    state.apply_local_unitaries(&ops)
}

/// Random disjoint partition of a register: shuffled sites split into two
/// non-empty samples (not necessarily covering all sites).
pub fn random_partition<R: Rng>(rng: &mut R, num_qubits: usize) -> Result<Partition> {
    assert!(num_qubits >= 2, "need at least two sites to partition");
    let mut sites: Vec<usize> = (0..num_qubits).collect();
    for i in (1..sites.len()).rev() {
        let j = rng.gen_range(0..=i);
        sites.swap(i, j);
    }
    let n_a = rng.gen_range(1..num_qubits);
    let n_b = rng.gen_range(1..=num_qubits - n_a);
    Partition::new(sites[..n_a].to_vec(), sites[n_a..n_a + n_b].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{dicke, generalized_singlet, singlet_noise_mixture};
    use crate::test_util::{assert_close, seeded_rng};

    #[test]
    fn half_filled_dicke_bound_is_tight() {
        let state = State::from(dicke(4, 2).unwrap());
        let report = average_pair_entanglement(
            &state,
            &Partition::contiguous(2, 2).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        assert_close(report.e_bar, 1.0 / 6.0, 1e-12);
        assert_close(report.e_ab, 1.0 / 6.0, 1e-12);
        assert_close(report.margin, 0.0, 1e-12);
    }

    #[test]
    fn polarized_product_state_has_zero_margin() {
        let state = State::from(dicke(6, 0).unwrap());
        let report = average_pair_entanglement(
            &state,
            &Partition::contiguous(3, 3).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        assert_close(report.e_bar, 0.0, 1e-12);
        assert_close(report.e_ab, 0.0, 1e-12);
    }

    #[test]
    fn noisy_singlet_in_equality_regime() {
        // At p = 0.9 every pair has a non-positive candidate eigenvalue, so
        // the bound is exact: 1/4 (1 + p - n (1 - p)) / n = 2/15 at n = 3.
        let state = State::from(singlet_noise_mixture(3, 0.9).unwrap());
        let report = average_pair_entanglement(
            &state,
            &Partition::contiguous(3, 3).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        assert_close(report.e_ab, 2.0 / 15.0, 1e-12);
        assert_close(report.margin, 0.0, 1e-9);
    }

    #[test]
    fn symmetric_state_pairs_are_uniform() {
        let state = State::from(dicke(5, 2).unwrap());
        let report = average_pair_entanglement(
            &state,
            &Partition::contiguous(2, 2).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        for p in &report.per_pair {
            assert_close(p.value, report.e_ab, 1e-12);
        }
    }

    #[test]
    fn dicke_family_peaks_at_half_filling() {
        let values: Vec<f64> = (0..=6)
            .map(|k| {
                let state = State::from(dicke(6, k).unwrap());
                average_pair_entanglement(
                    &state,
                    &Partition::contiguous(3, 3).unwrap(),
                    Measure::Negativity,
                )
                .unwrap()
                .e_ab
            })
            .collect();
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        assert_close(values[3], max, 1e-12);
        assert_close(values[0], 0.0, 1e-12);
        assert_close(values[6], 0.0, 1e-12);
    }

    #[test]
    fn verdict_for_generalized_singlet() {
        let state = State::from(generalized_singlet(4).unwrap());
        let verdict = verify_bounds(
            &state,
            &Partition::contiguous(4, 4).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        assert!(verdict.prop1);
        assert_eq!(verdict.prop2_equality, Some(true));
        assert!(verdict.sufficiency);
        assert!(verdict.passed());
        assert_close(verdict.e_ab, 0.125, 1e-12);
    }

    #[test]
    fn verdict_for_symmetric_w_sample() {
        let state = State::from(dicke(6, 1).unwrap());
        let verdict = verify_bounds(
            &state,
            &Partition::contiguous(3, 3).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        assert!(verdict.prop1);
        assert_close(verdict.margin, 0.0, 1e-9);
        assert!(verdict.passed());
    }

    #[test]
    fn verdict_for_varying_xx_data_keeps_strict_bound() {
        // Locked-sign data whose x-correlations differ across pairs: every
        // pair is entangled but the collective value collapses to zero, so
        // the bound is strict and no equality is claimed.
        let g = vec![[0.0; 3]; 2];
        let w = 0.8;
        let mut plus = [[0.0; 3]; 3];
        plus[0][0] = w;
        plus[1][1] = w;
        plus[2][2] = -w;
        let mut minus = [[0.0; 3]; 3];
        minus[0][0] = -w;
        minus[1][1] = -w;
        minus[2][2] = -w;
        let pd = PairData::new(g.clone(), g, vec![plus, minus, minus, plus]).unwrap();
        let verdict = verify_bounds_from_data(&pd, Measure::Negativity).unwrap();
        assert!(verdict.prop1);
        assert_eq!(verdict.prop2_equality, None);
        assert!(verdict.margin > 0.3);
        assert!(verdict.passed());
    }

    #[test]
    fn verdict_serializes_expected_keys() {
        let state = State::from(dicke(2, 1).unwrap());
        let verdict = verify_bounds(
            &state,
            &Partition::contiguous(1, 1).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        let json = serde_json::to_value(&verdict).unwrap();
        for key in ["e_ab", "e_bar", "margin", "prop1", "prop2_equality", "pairs"] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(json["prop2_equality"], serde_json::Value::Bool(true));
    }

    #[test]
    fn random_qubit_unitaries_are_unitary() {
        let mut rng = seeded_rng(41);
        for _ in 0..50 {
            let u = random_qubit_unitary(&mut rng);
            let product = u.adjoint().matmul(&u);
            for i in 0..2 {
                for j in 0..2 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert_close((product.get(i, j) - Complex64::new(expected, 0.0)).norm(), 0.0, 1e-12);
                }
            }
        }
    }

    #[test]
    fn random_partitions_are_valid() {
        let mut rng = seeded_rng(42);
        for _ in 0..100 {
            let p = random_partition(&mut rng, 6).unwrap();
            assert!(p.validate_for(6).is_ok());
            assert!(p.n_a() >= 1 && p.n_b() >= 1);
            assert!(p.n_a() + p.n_b() <= 6);
        }
    }

    #[test]
    fn perturbed_states_keep_the_bound() {
        let mut rng = seeded_rng(43);
        for _ in 0..20 {
            let state = State::from(dicke(5, 2).unwrap());
            let rotated = perturb_with_local_unitaries(&state, &mut rng).unwrap();
            let partition = random_partition(&mut rng, 5).unwrap();
            let verdict = verify_bounds(&rotated, &partition, Measure::Negativity).unwrap();
            assert!(verdict.prop1, "bound violated: {:?}", verdict.violations);
        }
    }
}
