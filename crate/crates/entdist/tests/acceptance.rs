//! End-to-end checks of the headline guarantees: closed-form values for the
//! example families, the lower-bound property under random rotations and
//! partitions, the closed-form eigenvalues against the eigensolver, the
//! sweep grid, and the multi-sample construction.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see one
//! PASS line per check.

use entdist::collective::{
    collective_entanglement, correlation_sign, cut_negativity, tightness_check,
    virtual_pt_eigenvalue, virtual_state, virtual_state_multi, CollectiveMoments, PairData,
};
use entdist::matcore::Subsystem;
use entdist::oracle::{
    average_pair_entanglement, perturb_with_local_unitaries, random_partition,
};
use entdist::pairmeasures::Measure;
use entdist::states::{
    dicke, generalized_singlet, singlet_noise_mixture, Partition, State,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;

fn assert_within(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: expected {expected}, got {actual} (tol {tol})"
    );
}

fn moments(state: &State, n_a: usize, n_b: usize) -> CollectiveMoments {
    let pd = state
        .extract_pair_data(&Partition::contiguous(n_a, n_b).unwrap())
        .unwrap();
    CollectiveMoments::from_pair_data(&pd)
}

fn collective_negativity(state: &State, n: usize) -> f64 {
    collective_entanglement(&moments(state, n, n), Measure::Negativity).unwrap()
}

// For half filling, the collective entanglement of a symmetric state depends
// only on the total particle number: 1/2 * 1/(N - 1), whatever the sample
// size.
#[test]
fn dicke_half_filling_value_is_independent_of_sample_size() {
    for total in [2usize, 4, 6, 8, 10] {
        let expected = 0.5 / (total - 1) as f64;
        let state = State::from(dicke(total, total / 2).unwrap());
        for sample in 1..=total / 2 {
            let value = collective_negativity(&state, sample);
            assert_within(
                value,
                expected,
                1e-9,
                &format!("half filling, {total} qubits, samples of {sample}"),
            );
        }
    }
    println!("PASS half-filled symmetric states: value 1/2 * 1/(N-1) for all sample sizes");
}

// Zero or full excitation leaves a product state across any pair.
#[test]
fn dicke_degenerate_fillings_are_unentangled() {
    for total in 2..=10usize {
        let state_low = State::from(dicke(total, 0).unwrap());
        let state_high = State::from(dicke(total, total).unwrap());
        for sample in 1..=total / 2 {
            for state in [&state_low, &state_high] {
                let value = collective_negativity(state, sample);
                assert!(
                    value <= 1e-12,
                    "expected exactly zero at {total} qubits, samples of {sample}, got {value}"
                );
            }
        }
    }
    println!("PASS degenerate fillings: collective entanglement exactly zero");
}

// Generalized singlet: isotropic correlations -(n+2)/(3n), collective
// entanglement 1/(2n), and the brute-force average agrees.
#[test]
fn generalized_singlet_matches_closed_forms() {
    for n in 1..=6usize {
        let state = State::from(generalized_singlet(n).unwrap());
        let cm = moments(&state, n, n);
        let expected_t = -((n + 2) as f64) / (3.0 * n as f64);
        for i in 0..3 {
            assert_within(cm.t()[i][i], expected_t, 1e-10, &format!("t_{i}{i} at n = {n}"));
        }
        let e_ab = collective_entanglement(&cm, Measure::Negativity).unwrap();
        assert_within(e_ab, 0.5 / n as f64, 1e-9, &format!("collective value at n = {n}"));

        let report = average_pair_entanglement(
            &state,
            &Partition::contiguous(n, n).unwrap(),
            Measure::Negativity,
        )
        .unwrap();
        assert!(
            report.margin.abs() <= 1e-9,
            "bound should be tight at n = {n}, margin {}",
            report.margin
        );
    }
    println!("PASS generalized singlet: t_ii = -(n+2)/(3n), value 1/(2n), tight bound");
}

// Noisy singlet grid: correlation values, the closed-form entanglement with
// its critical sample size, the lower bound everywhere, equality exactly
// where the per-pair eigenvalue analysis predicts it.
#[test]
fn noisy_singlet_grid_matches_closed_forms() {
    for n in 1..=5usize {
        for i in 0..=10usize {
            let p = i as f64 / 10.0;
            let state = State::from(singlet_noise_mixture(n, p).unwrap());
            let partition = Partition::contiguous(n, n).unwrap();
            let pd = state.extract_pair_data(&partition).unwrap();
            let cm = CollectiveMoments::from_pair_data(&pd);
            let nf = n as f64;

            let expected_tzz = -p * (nf - 1.0) / (3.0 * nf) - 1.0 / nf;
            assert_within(cm.t()[2][2], expected_tzz, 1e-10, &format!("t_zz at n={n}, p={p}"));

            let expected_e = (0.25 * (1.0 + p - nf * (1.0 - p)) / nf).max(0.0);
            let e_ab = collective_entanglement(&cm, Measure::Negativity).unwrap();
            assert_within(e_ab, expected_e, 1e-9, &format!("value at n={n}, p={p}"));

            // Entanglement survives exactly below the critical sample size.
            let entangled = e_ab > 0.0;
            let below_critical = if p >= 1.0 {
                true
            } else {
                (n as f64) < ((1.0 + p) / (1.0 - p)).ceil()
            };
            assert_eq!(
                entangled, below_critical,
                "critical size mismatch at n={n}, p={p}: e_ab={e_ab}"
            );

            let report =
                average_pair_entanglement(&state, &partition, Measure::Negativity).unwrap();
            assert!(
                report.margin >= -1e-9,
                "lower bound violated at n={n}, p={p}: margin {}",
                report.margin
            );
            let tightness = tightness_check(&pd);
            if tightness.equality_holds {
                assert!(
                    report.margin.abs() <= 1e-9,
                    "predicted equality violated at n={n}, p={p}: margin {}",
                    report.margin
                );
            }
            // With a small singlet admixture in a larger sample, diagonal
            // pairs are entangled while cross pairs are not; averaging the
            // moments first must then lose entanglement: the bound is
            // strict. This is the converse direction of the equality
            // condition. Needs cross pairs to exist at all.
            let cross_pair_eigenvalue_positive = 0.25 * (1.0 - p * (nf + 2.0) / nf) > 1e-9;
            if n >= 2 && p > 1e-9 && cross_pair_eigenvalue_positive {
                assert!(
                    !tightness.equality_holds,
                    "equality should not be predicted at n={n}, p={p}"
                );
                assert!(
                    report.margin > 1e-9,
                    "bound should be strict at n={n}, p={p}: margin {}",
                    report.margin
                );
            }
        }
    }
    println!("PASS noisy singlet grid: t_zz, closed-form value, critical size, bound tight exactly where predicted");
}

// Randomized suite: local rotations and random partitions of the example
// states never break positivity of the virtual state or the lower bound,
// for either measure.
#[test]
fn random_rotations_preserve_positivity_and_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE17D);
    for case in 0..1000usize {
        let base: State = match case % 3 {
            0 => {
                let total = 2 + case % 9; // 2..=10
                let k = rng.gen_range(0..=total);
                State::from(dicke(total, k).unwrap())
            }
            1 => {
                let n = 1 + case % 5; // up to 10 qubits
                State::from(generalized_singlet(n).unwrap())
            }
            _ => {
                let n = 1 + case % 5;
                let p: f64 = rng.gen_range(0.0..=1.0);
                State::from(singlet_noise_mixture(n, p).unwrap())
            }
        };
        let state = perturb_with_local_unitaries(&base, &mut rng).unwrap();
        let partition = random_partition(&mut rng, state.num_qubits()).unwrap();

        let pd = state.extract_pair_data(&partition).unwrap();
        let cm = CollectiveMoments::from_pair_data(&pd);
        let vs = virtual_state(&cm).unwrap();
        let check = vs.physicality(1e-9).unwrap();
        assert!(
            check.physical,
            "virtual state not positive in case {case}: min eigenvalue {}",
            check.min_eigenvalue
        );

        for measure in [Measure::Negativity, Measure::Concurrence] {
            let report = average_pair_entanglement(&state, &partition, measure).unwrap();
            assert!(
                report.margin >= -1e-9,
                "bound violated in case {case} ({measure}): margin {}",
                report.margin
            );
        }
    }
    println!("PASS randomized suite: 1000 rotated states keep positivity and the bound for both measures");
}

// The closed-form eigenvalue must match the eigensolver on the virtual
// state's partial transpose, and averaging x-correlations first can only
// shrink the square root term (equality only for constant h_xx).
#[test]
fn closed_forms_match_eigensolver_and_averaging_inequality() {
    let mut inputs: Vec<PairData> = Vec::new();
    for n in 1..=6usize {
        let state = State::from(generalized_singlet(n).unwrap());
        inputs.push(
            state
                .extract_pair_data(&Partition::contiguous(n, n).unwrap())
                .unwrap(),
        );
    }
    for n in 1..=5usize {
        for i in 0..=10usize {
            let p = i as f64 / 10.0;
            let state = State::from(singlet_noise_mixture(n, p).unwrap());
            inputs.push(
                state
                    .extract_pair_data(&Partition::contiguous(n, n).unwrap())
                    .unwrap(),
            );
        }
    }

    let mut equality_cases = 0usize;
    for pd in &inputs {
        let sign = correlation_sign(pd).expect("locked-sign structure");
        let cm = CollectiveMoments::from_pair_data(pd);
        let nu = virtual_pt_eigenvalue(&cm, sign);
        let pt = virtual_state(&cm)
            .unwrap()
            .matrix()
            .partial_transpose([2, 2], Subsystem::Second)
            .unwrap();
        let min_eig = pt.hermitian_eigenvalues().unwrap()[0];
        assert_within(nu, min_eig, 1e-10, "closed-form eigenvalue vs solver");

        // Averaging inequality on the square-root term.
        let e = sign.value();
        let c = cm.s_a()[2] + e * cm.s_b()[2];
        let lhs = (c * c + 4.0 * cm.t()[0][0] * cm.t()[0][0]).sqrt();
        let mut rhs = 0.0;
        let mut count = 0.0;
        let mut xx_first = None;
        let mut xx_constant = true;
        for (a, b) in pd.pairs() {
            let cp = pd.g_a()[a][2] + e * pd.g_b()[b][2];
            let xx = pd.h_at(a, b)[0][0];
            rhs += (cp * cp + 4.0 * xx * xx).sqrt();
            count += 1.0;
            match xx_first {
                None => xx_first = Some(xx),
                Some(x0) => xx_constant &= (xx - x0).abs() <= 1e-10,
            }
        }
        rhs /= count;
        assert!(
            lhs <= rhs + 1e-9,
            "averaging inequality violated: lhs {lhs}, rhs {rhs}"
        );
        if xx_constant {
            assert_within(lhs, rhs, 1e-9, "equality branch for constant h_xx");
            equality_cases += 1;
        }
    }
    assert_eq!(equality_cases, inputs.len(), "all suite inputs have constant h_xx");

    // Strict branch: locked-sign data whose x-correlations vary pair to
    // pair (Bell mixtures of opposite phase).
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
    let report = tightness_check(&pd);
    let cf = report.closed_forms.expect("locked sign");
    assert!(
        cf.gap > 1e-9,
        "gap should be strictly positive for varying h_xx, got {}",
        cf.gap
    );
    assert!(!report.equality_holds);

    println!("PASS closed forms: eigenvalue matches solver to 1e-10; averaging inequality tight iff h_xx constant");
}

// The sweep CSV: zero region bounded by p = (2s-1)/(2s+1), inverse
// proportionality in s at p = 1, monotone in p.
#[test]
fn sweep_grid_has_the_advertised_shape() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_entdist"))
        .args(["sweep", "--s-max", "25", "--p-steps", "10"])
        .output()
        .expect("run sweep");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for line in text.lines() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() == 3 && fields[0] != "s" {
            rows.push((
                fields[0].parse().unwrap(),
                fields[1].parse().unwrap(),
                fields[2].parse().unwrap(),
            ));
        }
    }
    assert_eq!(rows.len(), 50 * 11, "expected the full grid");

    for &(s, p, e) in &rows {
        let boundary = (2.0 * s - 1.0) / (2.0 * s + 1.0);
        if (p - boundary).abs() > 1e-12 {
            assert_eq!(
                e == 0.0,
                p <= boundary,
                "zero region mismatch at s={s}, p={p}: e={e}"
            );
        }
        if p == 1.0 {
            assert_within(s * e, 0.25, 1e-10, &format!("inverse scaling at s={s}"));
        }
    }
    // Monotone in p at fixed s.
    for window in rows.chunks(11) {
        for pair in window.windows(2) {
            assert!(
                pair[1].2 >= pair[0].2 - 1e-12,
                "not monotone at s={}, p={}",
                pair[1].0,
                pair[1].1
            );
        }
    }
    println!("PASS sweep grid: zero region boundary, 1/(4s) at p=1, monotone in p");
}

// Number of pairs times the per-pair bound: n^2 * 1/(2n) = n/2.
#[test]
fn pair_count_times_bound_scales_linearly() {
    for n in 1..=6usize {
        let state = State::from(generalized_singlet(n).unwrap());
        let value = collective_negativity(&state, n);
        assert_within(
            (n * n) as f64 * value,
            n as f64 / 2.0,
            1e-9,
            &format!("scaling at n = {n}"),
        );
    }
    println!("PASS scaling: pair count times collective value grows as n/2");
}

// Multi-sample construction: marginals reproduce the bipartite virtual
// states, and a product state carries nothing across any cut.
#[test]
fn multi_sample_marginals_and_product_state() {
    // Three single-site samples of the symmetric one-excitation state.
    let w = State::from(dicke(3, 1).unwrap());
    let samples = [vec![0usize], vec![1], vec![2]];
    let rho = virtual_state_multi(&w, &samples).unwrap();
    for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let marginal = rho.partial_trace(&[2, 2, 2], &[p, q]).unwrap();
        let partition = Partition::new(samples[p].clone(), samples[q].clone()).unwrap();
        let pd = w.extract_pair_data(&partition).unwrap();
        let pairwise = virtual_state(&CollectiveMoments::from_pair_data(&pd)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let d = (marginal.get(i, j) - pairwise.matrix().get(i, j)).norm();
                assert!(
                    d <= 1e-10,
                    "marginal ({p}, {q}) entry ({i}, {j}) differs by {d:.3e}"
                );
            }
        }
    }
    let cuts = [vec![0usize], vec![1], vec![2]];
    let w_cut_values: Vec<f64> = cuts
        .iter()
        .map(|cut| cut_negativity(&rho, cut).unwrap())
        .collect();
    for v in &w_cut_values {
        assert_within(*v, w_cut_values[0], 1e-10, "cut symmetry of the symmetric state");
    }

    // A rotated product state: still product, so nothing across any cut.
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11C);
    let product = perturb_with_local_unitaries(&State::from(dicke(3, 0).unwrap()), &mut rng).unwrap();
    let rho = virtual_state_multi(&product, &samples).unwrap();
    for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let marginal = rho.partial_trace(&[2, 2, 2], &[p, q]).unwrap();
        let partition = Partition::new(samples[p].clone(), samples[q].clone()).unwrap();
        let pd = product.extract_pair_data(&partition).unwrap();
        let pairwise = virtual_state(&CollectiveMoments::from_pair_data(&pd)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let d = (marginal.get(i, j) - pairwise.matrix().get(i, j)).norm();
                assert!(d <= 1e-10, "product marginal differs by {d:.3e}");
            }
        }
    }
    for cut in &cuts {
        let v = cut_negativity(&rho, cut).unwrap();
        assert!(v <= 1e-12, "product state shows negativity {v} across {cut:?}");
    }
    println!("PASS multi-sample: marginals match pairwise virtual states; product state separable across every cut");
}
