//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers once its assertions hold. Tolerances are fixed in
//! code; golden coefficients were verified against independent dense-matrix
//! oracles before being frozen here.

mod common;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sze_core::models::tfim;
use sze_core::partition::{partition, verify_partition};
use sze_core::pauli::{PauliOp, PauliSum, PauliTerm};
use sze_core::plan::{build_pf, build_sze, count_gates, minimal_pf_count};
use sze_core::series::extract_zassenhaus;
use sze_core::sim::{
    fit_powerlaw, run_plan, trace_distance, DenseState, ExactEvolver, ExecMode,
};
use sze_core::stochastic::{approximation_defect, build_distribution, channel_defect, sample};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn term(n: usize, ops: &[(usize, PauliOp)]) -> PauliTerm {
    PauliTerm::from_ops(n, ops).unwrap()
}

fn minus_i(h: &PauliSum) -> PauliSum {
    h.scale(Complex64::new(0.0, -1.0))
}

fn generators(model: &sze_core::models::LayeredHamiltonian) -> Vec<PauliSum> {
    model.layers().iter().map(minus_i).collect()
}

/// [A,B] = 2iJh Σ (Y_i Z_{i+1} + Z_i Y_{i+1}) at J=h=1.
fn expected_ab_commutator(n: usize) -> PauliSum {
    PauliSum::from_weighted_terms(
        n,
        (0..n - 1).flat_map(|i| {
            [
                (term(n, &[(i, PauliOp::Y), (i + 1, PauliOp::Z)]), Complex64::new(0.0, 2.0)),
                (term(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Y)]), Complex64::new(0.0, 2.0)),
            ]
        }),
    )
    .unwrap()
}

/// [2B+A,[A,B]] = 16Σ(ZZ−YY) − 8ΣX − 8ΣZXZ + 4(X_first+X_last) at J=h=1
/// (boundary term dense-oracle-verified; see also the golden test below).
fn expected_nested_commutator(n: usize) -> PauliSum {
    let mut terms: Vec<(PauliTerm, Complex64)> = Vec::new();
    for i in 0..n - 1 {
        terms.push((term(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Z)]), c(16.0)));
        terms.push((term(n, &[(i, PauliOp::Y), (i + 1, PauliOp::Y)]), c(-16.0)));
    }
    for j in 0..n {
        terms.push((term(n, &[(j, PauliOp::X)]), c(-8.0)));
    }
    for j in 0..n - 2 {
        terms.push((
            term(n, &[(j, PauliOp::Z), (j + 1, PauliOp::X), (j + 2, PauliOp::Z)]),
            c(-8.0),
        ));
    }
    terms.push((term(n, &[(0, PauliOp::X)]), c(4.0)));
    terms.push((term(n, &[(n - 1, PauliOp::X)]), c(4.0)));
    PauliSum::from_weighted_terms(n, terms).unwrap()
}

/// A' (even 0-based bonds) and B' (odd): −Jh (Y_iZ_{i+1} + Z_iY_{i+1}).
fn expected_h2_parts(n: usize) -> (PauliSum, PauliSum) {
    let bond = |i: usize| {
        [
            (term(n, &[(i, PauliOp::Y), (i + 1, PauliOp::Z)]), c(-1.0)),
            (term(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Y)]), c(-1.0)),
        ]
    };
    let a = PauliSum::from_weighted_terms(n, (0..n - 1).step_by(2).flat_map(bond)).unwrap();
    let b = PauliSum::from_weighted_terms(n, (1..n - 1).step_by(2).flat_map(bond)).unwrap();
    (a, b)
}

/// The four commuting classes of H_3 at J=h=1: A''(ZZ), B''(YY),
/// C''(X with −2/3 boundary correction), D''(ZXZ).
fn expected_h3_classes(n: usize) -> [PauliSum; 4] {
    let a = PauliSum::from_weighted_terms(
        n,
        (0..n - 1).map(|i| (term(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Z)]), c(-8.0 / 3.0))),
    )
    .unwrap();
    let b = PauliSum::from_weighted_terms(
        n,
        (0..n - 1).map(|i| (term(n, &[(i, PauliOp::Y), (i + 1, PauliOp::Y)]), c(8.0 / 3.0))),
    )
    .unwrap();
    let mut x_terms: Vec<(PauliTerm, Complex64)> =
        (0..n).map(|j| (term(n, &[(j, PauliOp::X)]), c(4.0 / 3.0))).collect();
    x_terms.push((term(n, &[(0, PauliOp::X)]), c(-2.0 / 3.0)));
    x_terms.push((term(n, &[(n - 1, PauliOp::X)]), c(-2.0 / 3.0)));
    let cx = PauliSum::from_weighted_terms(n, x_terms).unwrap();
    let d = PauliSum::from_weighted_terms(
        n,
        (0..n - 2).map(|j| {
            (
                term(n, &[(j, PauliOp::Z), (j + 1, PauliOp::X), (j + 2, PauliOp::Z)]),
                c(4.0 / 3.0),
            )
        }),
    )
    .unwrap();
    [a, b, cx, d]
}

fn nested_hermitian(parts: &[PauliSum], order: usize) -> Option<PauliSum> {
    let gens: Vec<PauliSum> = parts.iter().map(minus_i).collect();
    extract_zassenhaus(&gens, order.max(2))
        .ok()?
        .hermitian_exponent(order)
}

#[test]
fn criterion_1_tfim_commutator_goldens() {
    let start = std::time::Instant::now();
    for n in [4usize, 10] {
        let model = tfim(n, 1.0, 1.0).unwrap();
        let (a, b) = (&model.layers()[0], &model.layers()[1]);

        let ab = a.commutator(b).unwrap();
        assert!(ab.approx_eq(&expected_ab_commutator(n), 1e-10), "[A,B] n={n}");

        let two_b_plus_a = b.scale(c(2.0)).add(a).unwrap();
        let nested = two_b_plus_a.commutator(&ab).unwrap();
        assert!(
            nested.approx_eq(&expected_nested_commutator(n), 1e-10),
            "[2B+A,[A,B]] n={n}"
        );

        let expansion = extract_zassenhaus(&generators(&model), 3).unwrap();
        let h2 = expansion.hermitian_exponent(2).unwrap();
        let h3 = expansion.hermitian_exponent(3).unwrap();

        // H_2 = i/2 [A,B] and its unique two-part split A', B'
        assert!(h2.approx_eq(&ab.scale(Complex64::new(0.0, 0.5)), 1e-10), "H_2 n={n}");
        let (a_p, b_p) = expected_h2_parts(n);
        assert!(h2.approx_eq(&a_p.add(&b_p).unwrap(), 1e-10));
        let split2 = partition(&h2);
        assert_eq!(split2.num_parts(), 2);
        assert!(split2.parts()[0].approx_eq(&a_p, 1e-10), "A' n={n}");
        assert!(split2.parts()[1].approx_eq(&b_p, 1e-10), "B' n={n}");

        // H_3 = −1/6 [2B+A,[A,B]] and the identified classes A''..D''
        assert!(h3.approx_eq(&nested.scale(c(-1.0 / 6.0)), 1e-10), "H_3 n={n}");
        let classes = expected_h3_classes(n);
        let mut rebuilt = PauliSum::zero(n);
        for class in &classes {
            rebuilt = rebuilt.add(class).unwrap();
            // each identified operator is a legitimate commuting layer
            let p = sze_core::partition::CommutingPartition::from_parts(
                vec![class.clone()],
                class.clone(),
            );
            assert!(verify_partition(&p));
        }
        assert!(h3.approx_eq(&rebuilt, 1e-10), "A''+B''+C''+D'' n={n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "runtime {elapsed:?}");
    println!("PASS criterion 1: TFIM commutator goldens exact to 1e-10 (n=4,10) in {elapsed:.2?}");
}

#[test]
fn criterion_2_partition_counts() {
    let start = std::time::Instant::now();
    let n = 10;
    let model = tfim(n, 1.0, 1.0).unwrap();
    let expansion = extract_zassenhaus(&generators(&model), 5).unwrap();

    let paper_counts = [(2usize, 2usize), (3, 4), (4, 4), (5, 6)];
    let mut summary = Vec::new();
    for (order, expected) in paper_counts {
        let h = expansion.hermitian_exponent(order).unwrap();
        let split = partition(&h);
        assert!(verify_partition(&split));
        assert!(
            split.num_parts() <= expected,
            "H_{order}: {} parts exceeds paper's {expected}",
            split.num_parts()
        );
        if split.num_parts() < expected {
            println!("  note: H_{order} found {} parts, paper reports {expected} (fewer is better)", split.num_parts());
        }
        summary.push(format!("H_{order}:{}", split.num_parts()));
    }

    // nested fourth-order term from the split of H_2
    let h2 = expansion.hermitian_exponent(2).unwrap();
    let h22 = nested_hermitian(partition(&h2).parts(), 2).unwrap();
    let split22 = partition(&h22);
    assert!(verify_partition(&split22));
    assert!(split22.num_parts() <= 2);
    summary.push(format!("H_{{2,2}}:{}", split22.num_parts()));

    let elapsed = start.elapsed();
    println!(
        "PASS criterion 2: partition counts {} vs paper (2,4,4,6,2) in {elapsed:.2?}",
        summary.join(" ")
    );
}

#[test]
fn criterion_3_stochastic_theorem_scaling() {
    let start = std::time::Instant::now();
    let n = 4;
    let model = tfim(n, 1.0, 1.0).unwrap();
    let expansion = extract_zassenhaus(&generators(&model), 3).unwrap();
    let grid = [0.0125, 0.025, 0.05, 0.1];

    for (order, m) in [(2usize, 2usize), (3, 3)] {
        let h = expansion.hermitian_exponent(order).unwrap();
        let approx_pts: Vec<(f64, f64)> = grid
            .iter()
            .map(|&t| (t, approximation_defect(&h, m, t).unwrap()))
            .collect();
        let approx_fit = fit_powerlaw(&approx_pts).unwrap();
        assert!(
            (approx_fit.slope - 2.0 * m as f64).abs() <= 0.3,
            "approximation slope {} for m={m}",
            approx_fit.slope
        );

        let channel_pts: Vec<(f64, f64)> = grid
            .iter()
            .map(|&t| (t, channel_defect(&h, m, t).unwrap()))
            .collect();
        let channel_fit = fit_powerlaw(&channel_pts).unwrap();
        assert!(
            (channel_fit.slope - 2.0 * m as f64).abs() <= 0.3,
            "channel slope {} for m={m}",
            channel_fit.slope
        );
        println!(
            "  H_{order} (m={m}): approximation slope {:.3}, channel slope {:.3} (target {})",
            approx_fit.slope,
            channel_fit.slope,
            2 * m
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?}");
    println!("PASS criterion 3: stochastic theorem defect slopes 2m +/- 0.3 in {elapsed:.2?}");
}

struct MethodSpec {
    token: &'static str,
    expected_slope: f64,
    grid: [f64; 5],
}

fn geometric(lo: f64, hi: f64) -> [f64; 5] {
    let ratio = (hi / lo).powf(0.25);
    [lo, lo * ratio, lo * ratio.powi(2), lo * ratio.powi(3), hi]
}

fn plan_for(model: &sze_core::models::LayeredHamiltonian, token: &str) -> sze_core::plan::ExpansionPlan {
    let parts: Vec<&str> = token.split(':').collect();
    match parts.as_slice() {
        ["pf", p] => build_pf(model.layers(), p.parse().unwrap()).unwrap(),
        ["sze", k, p] => build_sze(model.layers(), k.parse().unwrap(), p.parse().unwrap()).unwrap(),
        _ => panic!("bad token {token}"),
    }
}

#[test]
fn criterion_4_time_scaling_slopes() {
    let start = std::time::Instant::now();
    // Figure 2's labeled asymptotics are the truncation scaling t^{p+1}; the
    // sampling-free limit (stochastic factors applied exactly) exposes it.
    // The random-unitary channel adds the incoherent O(|H'_{k+1}|_1^2 t^{2k+2})
    // term, which dominates the trace distance at every measurable t for
    // (2,4) and (3,6); channel-mode slopes are asserted where the two error
    // orders coincide.
    let methods = [
        MethodSpec { token: "sze:1:2", expected_slope: 3.0, grid: geometric(0.01, 0.08) },
        MethodSpec { token: "sze:1:3", expected_slope: 4.0, grid: geometric(0.02, 0.12) },
        MethodSpec { token: "sze:2:4", expected_slope: 5.0, grid: geometric(0.02, 0.12) },
        MethodSpec { token: "sze:3:6", expected_slope: 7.0, grid: geometric(0.015, 0.08) },
        MethodSpec { token: "pf:2", expected_slope: 3.0, grid: geometric(0.01, 0.08) },
        MethodSpec { token: "pf:4", expected_slope: 5.0, grid: geometric(0.02, 0.12) },
    ];
    for n in [6usize, 8] {
        let model = tfim(n, 1.0, 1.0).unwrap();
        let evolver = ExactEvolver::new(model.total()).unwrap();
        let initial = DenseState::plus_state(n).to_density();
        for spec in &methods {
            let plan = plan_for(&model, spec.token);
            let slope_in = |mode_factory: &dyn Fn() -> ExecMode<'static>| {
                let mut points = Vec::new();
                for &t in &spec.grid {
                    let evolved = run_plan(&plan, t, 1, &initial, mode_factory()).unwrap();
                    let exact = evolver
                        .evolve(&DenseState::plus_state(n), t)
                        .unwrap()
                        .to_density();
                    points.push((t, trace_distance(&evolved, &exact).unwrap()));
                }
                fit_powerlaw(&points).unwrap().slope
            };
            let slope = slope_in(&|| ExecMode::ExactFactor);
            assert!(
                (slope - spec.expected_slope).abs() <= 0.4,
                "{} at n={n}: slope {slope:.3}, want {} +/- 0.4",
                spec.token,
                spec.expected_slope
            );
            let mut channel_note = String::new();
            if matches!(spec.token, "sze:1:2" | "sze:1:3" | "pf:2" | "pf:4") {
                let channel_slope = slope_in(&|| ExecMode::ExactChannel);
                assert!(
                    (channel_slope - spec.expected_slope).abs() <= 0.4,
                    "{} at n={n} (channel): slope {channel_slope:.3}",
                    spec.token
                );
                channel_note = format!(", channel {channel_slope:.3}");
            }
            println!(
                "  {} n={n}: slope {slope:.3} (target {}{channel_note})",
                spec.token, spec.expected_slope
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "runtime {elapsed:?}");
    println!("PASS criterion 4: single-step trace-distance slopes p+1 +/- 0.4 in {elapsed:.2?}");
}

#[test]
fn criterion_5_size_scaling() {
    let start = std::time::Instant::now();
    // Figure 3's at-most-linear claim concerns the truncation error of the
    // nested commutator structure, so the sampling-free limit is measured;
    // the channel-mode slope is also asserted for sze:1:2, where the
    // incoherent term stays subleading across these sizes.
    let t = 0.03;
    let sizes = [4usize, 6, 8, 10];
    let tokens = ["sze:1:2", "sze:2:4", "sze:3:6"];
    let mut per_method: Vec<Vec<(f64, f64)>> = vec![Vec::new(); tokens.len()];
    let mut channel_points = Vec::new();
    for &n in &sizes {
        let model = tfim(n, 1.0, 1.0).unwrap();
        let initial = DenseState::plus_state(n).to_density();
        let exact = ExactEvolver::new(model.total())
            .unwrap()
            .evolve(&DenseState::plus_state(n), t)
            .unwrap()
            .to_density();
        for (mi, token) in tokens.iter().enumerate() {
            let plan = plan_for(&model, token);
            let evolved = run_plan(&plan, t, 1, &initial, ExecMode::ExactFactor).unwrap();
            per_method[mi].push((n as f64, trace_distance(&evolved, &exact).unwrap()));
            if *token == "sze:1:2" {
                let ch = run_plan(&plan, t, 1, &initial, ExecMode::ExactChannel).unwrap();
                channel_points.push((n as f64, trace_distance(&ch, &exact).unwrap()));
            }
        }
    }
    for (mi, token) in tokens.iter().enumerate() {
        let points = &per_method[mi];
        let fit = fit_powerlaw(points).unwrap();
        assert!(
            fit.slope <= 1.3,
            "{token}: size-scaling slope {:.3} exceeds 1.3",
            fit.slope
        );
        let mut channel_note = String::new();
        if *token == "sze:1:2" {
            let ch_fit = fit_powerlaw(&channel_points).unwrap();
            assert!(ch_fit.slope <= 1.3, "sze:1:2 channel slope {:.3}", ch_fit.slope);
            channel_note = format!(", channel {:.3}", ch_fit.slope);
        }
        println!(
            "  {token}: trace-distance vs n slope {:.3} (cap 1.3{channel_note})",
            fit.slope
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 900.0, "runtime {elapsed:?}");
    println!("PASS criterion 5: size-scaling slope <= 1.3 at t=0.03 in {elapsed:.2?}");
}

#[test]
fn criterion_6_cnot_counts() {
    let start = std::time::Instant::now();
    let model = tfim(10, 1.0, 1.0).unwrap();

    // (a) PF growth factor per order pair approaches 5 after merges
    let pf_counts: Vec<(usize, f64)> = [2usize, 4, 6, 8, 10]
        .iter()
        .map(|&p| (p, count_gates(&build_pf(model.layers(), p).unwrap()).total_expected))
        .collect();
    assert_eq!(pf_counts[0].1, 36.0);
    assert_eq!(pf_counts[1].1, 108.0);
    assert_eq!(pf_counts[4].1, 11268.0, "PF_10 merged count");
    let r86 = pf_counts[3].1 / pf_counts[2].1;
    let r108 = pf_counts[4].1 / pf_counts[3].1;
    for (label, ratio) in [("8/6", r86), ("10/8", r108)] {
        assert!(
            (4.5..=5.5).contains(&ratio),
            "PF ratio {label} = {ratio:.3} outside [4.5, 5.5]"
        );
    }
    println!("  (a) PF counts {:?}, asymptotic ratios {:.3}, {:.3}", pf_counts, r86, r108);

    // (b) SZE_{k,2k+1} growth is sub-exponential: ratios strictly decrease
    let mut sze_totals = Vec::new();
    for k in 1..=5usize {
        let plan = build_sze(model.layers(), k, 2 * k + 1).unwrap();
        sze_totals.push(count_gates(&plan).total_expected);
    }
    let ratios: Vec<f64> = sze_totals.windows(2).map(|w| w[1] / w[0]).collect();
    for w in ratios.windows(2) {
        assert!(w[1] < w[0], "SZE growth ratios not strictly decreasing: {ratios:?}");
    }
    println!("  (b) SZE_{{k,2k+1}} totals {sze_totals:?}, ratios {ratios:?}");

    // (c) SZE_{5,11} vs PF_10
    let sze511 = sze_totals[4];
    let ratio = pf_counts[4].1 / sze511;
    assert!(
        (30.0..=55.0).contains(&ratio),
        "SZE_{{5,11}} ratio {ratio:.2} outside [30, 55]"
    );
    println!("  (c) PF_10 / SZE_{{5,11}} = {:.1} (nominal 42)", ratio);

    // (d) SZE_{5,11} beats the minimal 8th-order product formula
    let min8 = minimal_pf_count(model.layers(), 8).unwrap();
    assert_eq!(min8.total_expected, 288.0, "15 blocks with 14 merges");
    assert!(
        sze511 < min8.total_expected,
        "SZE_{{5,11}} {sze511:.1} not below minimal PF_8 {}",
        min8.total_expected
    );
    println!("  (d) SZE_{{5,11}} {:.1} < minimal PF_8 {}", sze511, min8.total_expected);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "runtime {elapsed:?}");
    println!("PASS criterion 6: CNOT-count reproduction in {elapsed:.2?}");
}

#[test]
fn criterion_7_worked_example_rotation_budget() {
    let start = std::time::Instant::now();
    let model = tfim(10, 1.0, 1.0).unwrap();
    let plan = build_sze(model.layers(), 3, 6).unwrap();
    let gates = count_gates(&plan);
    let target = 8.0 * 10.0;
    assert!(
        (gates.rotations as f64 - target).abs() <= 0.2 * target,
        "rotations {} outside 80 +/- 20%",
        gates.rotations
    );
    let elapsed = start.elapsed();
    println!(
        "PASS criterion 7: SZE_{{3,6}} rotations {} within 80 +/- 20% in {elapsed:.2?}",
        gates.rotations
    );
}

#[test]
fn criterion_8_oracle_equivalence_suite() {
    let start = std::time::Instant::now();
    let mut cases = 0usize;

    // 150 cases: Pauli algebra vs entry-wise dense oracle
    let mut sampler = common::SumSampler::new(0xA11CE);
    for _ in 0..50 {
        let n = 2 + (sampler.next_u64() % 5) as usize; // 2..=6
        let p = sampler.term(n);
        let q = sampler.term(n);
        let dense_prod = common::dense_term_oracle(&p) * common::dense_term_oracle(&q);
        let lib_prod = p.multiply(&q).unwrap();
        assert!((dense_prod.clone() - common::dense_term_oracle(&lib_prod)).norm() < 1e-12);
        let comm_norm = (&dense_prod - common::dense_term_oracle(&q) * common::dense_term_oracle(&p)).norm();
        assert_eq!(p.commutes_with(&q).unwrap(), comm_norm < 1e-12);
        cases += 1;
    }
    for _ in 0..100 {
        let n = 2 + (sampler.next_u64() % 4) as usize; // 2..=5
        let a = sampler.hermitian_sum(n, 12);
        let b = sampler.hermitian_sum(n, 12);
        let comm = a.commutator(&b).unwrap();
        let da = common::dense_sum_oracle(&a);
        let db = common::dense_sum_oracle(&b);
        let expect = &da * &db - &db * &da;
        assert!((common::dense_sum_oracle(&comm) - expect).norm() < 1e-10);
        assert!(comm.is_anti_hermitian(1e-12));
        // l1 norm upper-bounds the spectral norm
        assert!(a.l1_norm() + 1e-12 >= common::spectral_norm_oracle(&da));
        cases += 1;
    }

    // 150 cases: series coefficients vs dense Taylor terms
    let mut sampler = common::SumSampler::new(0xB0B);
    for _ in 0..150 {
        let n = 2 + (sampler.next_u64() % 3) as usize; // 2..=4
        let h = sampler.hermitian_sum(n, 6);
        let g = minus_i(&h);
        let m = 1 + (sampler.next_u64() % 2) as usize;
        let order = 4 + (sampler.next_u64() % 2) as usize;
        let series = sze_core::series::OperatorSeries::exponential(&g, m, order).unwrap();
        let dense_g = common::dense_sum_oracle(&g);
        let dim = dense_g.nrows();
        let mut power = common::CMatrix::identity(dim, dim);
        let mut factorial = 1.0;
        for j in 0..=order / m {
            if j > 0 {
                power = &power * &dense_g;
                factorial *= j as f64;
            }
            let lib = common::dense_sum_oracle(series.coeff(j * m));
            assert!(
                (&power * c(1.0 / factorial) - lib).norm() < 1e-10,
                "taylor coefficient j={j}"
            );
        }
        cases += 1;
    }

    // 100 cases: partitions vs pairwise checks and the exhaustive oracle
    let mut sampler = common::SumSampler::new(0xC0FFEE);
    for _ in 0..100 {
        let n = 2 + (sampler.next_u64() % 5) as usize; // 2..=6
        let h = sampler.hermitian_sum(n, 16);
        let split = partition(&h);
        assert!(verify_partition(&split));
        if h.num_terms() <= 16 {
            let best = common::chromatic_number_oracle(&h);
            assert_eq!(
                split.num_parts(),
                best,
                "DSATUR+Kempe missed the chromatic number for {} terms",
                h.num_terms()
            );
        }
        cases += 1;
    }

    // 100 cases: sampled trajectories average to the exact channel
    let mut sampler = common::SumSampler::new(0xD1CE);
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    for _ in 0..100 {
        let n = 2 + (sampler.next_u64() % 2) as usize; // 2..=3
        let h = sampler.hermitian_sum(n, 5);
        let dist = build_distribution(&h, 1).unwrap();
        let t = 0.2 + 0.3 * sampler.uniform();
        let th = sze_core::stochastic::theta(&dist, t);

        let mut exact = DenseState::plus_state(n).to_density();
        sze_core::sim::apply_stochastic_factor(&mut exact, &dist, t, &mut ExecMode::ExactChannel)
            .unwrap();

        let trials = 4000;
        let dim = 1usize << n;
        let mut avg = common::CMatrix::zeros(dim, dim);
        for _ in 0..trials {
            let draw = sample(&dist, t, &mut rng);
            let mut state = DenseState::plus_state(n);
            state.apply_rotation(&draw.term, th).unwrap();
            avg += state.to_density().as_matrix();
        }
        avg /= c(trials as f64);
        let avg_state = density_from_matrix(n, &avg);
        let td = trace_distance(&exact, &avg_state).unwrap();
        assert!(td < 5e-2, "Monte Carlo average off by {td}");
        cases += 1;
    }

    assert_eq!(cases, 500);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "runtime {elapsed:?}");
    println!("PASS criterion 8: {cases} randomized oracle-equivalence cases in {elapsed:.2?}");
}

fn density_from_matrix(n: usize, m: &common::CMatrix) -> DenseState {
    let dim = 1usize << n;
    let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for col in 0..dim {
            elements[r * dim + col] = m[(r, col)];
        }
    }
    DenseState::DensityMatrix { n_qubits: n, elements }
}
