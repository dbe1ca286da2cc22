use pavls::samplers::{central_size, sample, Model, SamplerConfig};

/// Mean ballot size per seed, then the grand mean and its standard error.
fn ballot_size_stats(model: Model, voters: usize, candidates: usize, seeds: u64) -> (f64, f64) {
    let means: Vec<f64> = (0..seeds)
        .map(|seed| {
            let config = SamplerConfig::new(model, voters, candidates, 0xA11CE + seed).unwrap();
            let p = sample(&config).unwrap();
            p.ballots.iter().map(|b| b.approvals.len()).sum::<usize>() as f64 / voters as f64
        })
        .collect();
    let n = means.len() as f64;
    let mean = means.iter().sum::<f64>() / n;
    let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn assert_within(model: Model, voters: usize, candidates: usize, expect: f64) {
    let (mean, se) = ballot_size_stats(model, voters, candidates, 200);
    assert!(
        (mean - expect).abs() <= 3.0 * se,
        "{}: mean {mean:.4} vs {expect:.4} (se {se:.4})",
        model.name()
    );
}

#[test]
fn impartial_culture_mean_ballot_size() {
    let (mean, se) = ballot_size_stats(Model::ImpartialCulture { p: 0.5 }, 100, 20, 1000);
    assert!((mean - 10.0).abs() <= 3.0 * se, "mean {mean} (se {se})");
    for p in [0.1, 0.3, 0.9] {
        assert_within(Model::ImpartialCulture { p }, 100, 20, p * 20.0);
    }
}

#[test]
fn euclidean_interval_mean_ballot_size() {
    // P(|u - v| < r) for independent uniforms on [0, 1] is 2r - r²
    for r in [0.01, 0.05, 0.2] {
        let expect = 20.0 * (2.0 * r - r * r);
        assert_within(Model::Euclidean { dim: 1, radius: r }, 100, 20, expect);
    }
    let (mean, _) = ballot_size_stats(
        Model::Euclidean {
            dim: 1,
            radius: 0.01,
        },
        100,
        20,
        200,
    );
    assert!((mean - 0.4).abs() < 0.05, "{mean}");
}

#[test]
fn resampling_mean_ballot_size() {
    for (p, phi) in [(0.5, 0.0), (0.5, 0.5), (0.2, 0.3), (0.3, 1.0)] {
        let central = central_size(p, 20) as f64;
        let expect = (1.0 - phi) * central + phi * p * 20.0;
        let (mean, se) = ballot_size_stats(Model::Resampling { p, phi }, 100, 20, 200);
        if phi == 0.0 {
            assert_eq!(mean, central);
        } else {
            assert!(
                (mean - expect).abs() <= 3.0 * se,
                "p = {p}, phi = {phi}: {mean} vs {expect}"
            );
        }
    }
}

#[test]
fn resampling_with_phi_one_matches_ic_marginals() {
    let (voters, m, p) = (400, 20, 0.3);
    let mut freq = vec![0usize; m];
    let seeds = 50;
    for seed in 0..seeds {
        let config =
            SamplerConfig::new(Model::Resampling { p, phi: 1.0 }, voters, m, seed).unwrap();
        for b in &sample(&config).unwrap().ballots {
            for &c in &b.approvals {
                freq[c] += 1;
            }
        }
    }
    let trials = (voters as u64 * seeds) as f64;
    let se = (p * (1.0 - p) / trials).sqrt();
    for (c, &f) in freq.iter().enumerate() {
        let rate = f as f64 / trials;
        assert!((rate - p).abs() <= 4.0 * se, "candidate {c}: {rate}");
    }
}
