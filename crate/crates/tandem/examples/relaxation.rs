//! The continuous relaxation itself: soft mappings, the smooth-max surrogate
//! at growing sharpness, its exact one-hot limit, Monte Carlo estimates, and
//! an analytic gradient checked against finite differences.
//!
//! Run with: cargo run --example relaxation

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tandem::cost::hw_loss;
use tandem::fixtures;
use tandem::relax::{
    grad_relaxed_objective, mc_hw_loss, relaxed_hw_loss, relaxed_objective, Beta, SoftMapping,
};

fn main() -> tandem::Result<()> {
    let (graph, platform, quality, params) = fixtures::toy2x2();

    // A uniform soft mapping spreads every component over both devices.
    let uniform = SoftMapping::uniform(&graph, &platform);
    for beta in [0.0, 1.0, 5.0, 50.0] {
        let value = relaxed_hw_loss(&graph, &platform, &uniform, &params, Beta::Finite(beta))?;
        println!("beta {beta:>4}: relaxed hw {value:.4}");
    }
    let exact = relaxed_hw_loss(&graph, &platform, &uniform, &params, Beta::Exact)?;
    println!("beta exact: relaxed hw {exact:.4} (hard max of expected costs)");

    // At a one-hot soft mapping with exact max, the surrogate reproduces the
    // discrete evaluator bit for bit.
    let mapping = graph
        .components
        .iter()
        .map(|c| (c.id.clone(), "d0".to_string()))
        .collect();
    let one_hot = SoftMapping::one_hot(&graph, &platform, &mapping)?;
    let relaxed = relaxed_hw_loss(&graph, &platform, &one_hot, &params, Beta::Exact)?;
    let discrete = hw_loss(&graph, &platform, &mapping, &params)?.hw_loss;
    println!("one-hot surrogate {relaxed} == discrete {discrete}: {}", relaxed == discrete);

    // Monte Carlo agrees with the surrogate up to sampling noise and the
    // smoothing gap.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (estimate, se) = mc_hw_loss(&graph, &platform, &uniform, &params, 2_000, &mut rng)?;
    println!("sampled hw over hard draws: {estimate:.4} +- {se:.4}");

    // Analytic logit gradient versus central finite differences.
    let (value, grad) = grad_relaxed_objective(
        &graph,
        &platform,
        &uniform,
        &quality,
        &params,
        Beta::Finite(5.0),
    )?;
    println!("relaxed objective {value:.4}");
    let h = 1e-5;
    let perturbed = |delta: f64| -> tandem::Result<f64> {
        let mut logits = vec![vec![0.0; uniform.devices().len()]; uniform.components().len()];
        logits[0][0] += delta;
        let soft = SoftMapping::from_logits(&graph, &platform, &logits)?;
        relaxed_objective(&graph, &platform, &soft, &quality, &params, Beta::Finite(5.0))
    };
    let fd = (perturbed(h)? - perturbed(-h)?) / (2.0 * h);
    println!(
        "d/dlogit[0][0]: analytic {:.6}, finite difference {fd:.6}",
        grad[0][0]
    );
    Ok(())
}
