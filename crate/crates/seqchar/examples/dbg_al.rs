use seqchar::harness::{self, ExperimentConfig};
use std::time::Instant;

fn main() {
    // desk-scale benchmark: 16 corners x 100 local samples, M=20, k_max=5
    let cfg = ExperimentConfig::desk_benchmark(1);
    let t0 = Instant::now();
    let out = std::path::Path::new("/tmp/dbg_al_out");
    let summary = harness::run_al(&cfg, out).unwrap();
    println!("al run took {:?}", t0.elapsed());
    for it in &summary.al_iterations {
        println!(
            "{:>8}: n={:4} mean_calls={:6.3} pred_std={:?} rmse={:?}",
            it.phase.label(), it.batch_size, it.mean_calls,
            it.mean_pred_std.map(|v| (v * 1000.0).round() / 1000.0),
            it.rmse_pred_vs_actual.map(|v| (v * 1000.0).round() / 1000.0)
        );
    }
    let initial = summary.al_iterations.first().unwrap().mean_calls;
    let sweep = summary.al_iterations.last().unwrap().mean_calls;
    println!("sweep/initial ratio = {:.3} (need <= 0.6)", sweep / initial);
    let fallbacks = summary.outcomes.iter().filter(|o| o.phase.is_some()).count();
    println!("outcomes: {}", fallbacks);
}
