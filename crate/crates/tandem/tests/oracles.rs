//! Cross-checks of the fast evaluator and solvers against independent
//! oracles: explicit path enumeration, odometer-order exhaustive search, and
//! probability-weighted exact expectations.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tandem::cost::{hw_loss, total_objective};
use tandem::fixtures;
use tandem::optim::{brute_force, BruteConfig, Problem};
use tandem::relax::{mc_hw_loss, relaxed_hw_loss, Beta, SoftMapping};

#[test]
fn evaluator_matches_explicit_path_enumeration_across_the_suite() {
    for (index, problem) in common::suite().iter().enumerate() {
        let (graph, quality) = common::fixed_parts(problem);
        let mappings =
            common::seeded_random_mappings(graph, &problem.platform, 900 + index as u64, 4);
        for mapping in &mappings {
            let got = hw_loss(graph, &problem.platform, mapping, &problem.params).unwrap();
            for pair in &got.pair_latencies {
                let want = common::oracle_pair_latency(
                    graph,
                    &problem.platform,
                    mapping,
                    &pair.modality,
                    &pair.sink,
                );
                match (pair.latency, want) {
                    (Some(a), Some(b)) => common::assert_close(
                        a,
                        b,
                        1e-12,
                        &format!("instance {index} pair {}->{}", pair.modality, pair.sink),
                    ),
                    (None, None) => {}
                    (a, b) => panic!("instance {index}: reachability disagrees: {a:?} vs {b:?}"),
                }
            }
            let want_power = common::oracle_power(graph, &problem.platform, mapping);
            common::assert_close(got.total_power, want_power, 1e-12, "active power");
            let want_hw =
                common::oracle_hw(graph, &problem.platform, mapping, problem.params.gamma2)
                    .unwrap();
            common::assert_close(got.hw_loss, want_hw, 1e-12, "hw loss");

            let total = total_objective(graph, &problem.platform, mapping, quality, &problem.params)
                .unwrap();
            let want_total =
                common::oracle_total(graph, &problem.platform, mapping, quality, &problem.params)
                    .unwrap();
            common::assert_close(total.total, want_total, 1e-12, "total objective");
        }
    }
}

#[test]
fn brute_force_matches_an_independent_exhaustive_search() {
    for (index, problem) in common::suite().iter().enumerate().step_by(5) {
        let got = brute_force(problem, &BruteConfig::default()).unwrap();
        let (want_mapping, want_objective) = common::oracle_brute(problem);
        common::assert_close(
            got.objective,
            want_objective,
            1e-12,
            &format!("instance {index} optimum"),
        );
        assert_eq!(
            got.mapping, want_mapping,
            "instance {index}: tie-break should pick the lexicographically smallest assignment"
        );
    }
}

#[test]
fn one_hot_relaxation_collapses_to_the_discrete_loss() {
    for (index, problem) in common::suite().iter().enumerate().take(20) {
        let (graph, _) = common::fixed_parts(problem);
        for mapping in
            common::seeded_random_mappings(graph, &problem.platform, 70 + index as u64, 2)
        {
            let soft = SoftMapping::one_hot(graph, &problem.platform, &mapping).unwrap();
            let relaxed =
                relaxed_hw_loss(graph, &problem.platform, &soft, &problem.params, Beta::Exact)
                    .unwrap();
            let discrete = hw_loss(graph, &problem.platform, &mapping, &problem.params)
                .unwrap()
                .hw_loss;
            common::assert_close(relaxed, discrete, 1e-12, &format!("instance {index}"));
        }
    }
}

#[test]
fn sampled_hardware_loss_agrees_with_the_exact_expectation() {
    let (graph, platform, quality, params) = fixtures::toy2x2();
    let problem = Problem::fixed(graph, quality, platform, params).unwrap();
    let (graph, _) = common::fixed_parts(&problem);

    let uniform = SoftMapping::uniform(graph, &problem.platform);
    let skewed_rows: Vec<Vec<f64>> = (0..5).map(|_| vec![0.7, 0.3]).collect();
    let skewed = SoftMapping::from_rows(graph, &problem.platform, skewed_rows.clone()).unwrap();

    for (label, soft, rows) in [
        ("uniform", &uniform, vec![vec![0.5, 0.5]; 5]),
        ("skewed", &skewed, skewed_rows),
    ] {
        let exact =
            common::oracle_expected_hw(graph, &problem.platform, &rows, problem.params.gamma2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mean, se) = mc_hw_loss(
            graph,
            &problem.platform,
            soft,
            &problem.params,
            20_000,
            &mut rng,
        )
        .unwrap();
        assert!(
            (mean - exact).abs() <= 4.0 * se,
            "{label}: {mean} vs exact {exact} exceeds 4 standard errors ({se})"
        );
    }
}
