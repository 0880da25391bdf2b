use seqchar::al::{self, AlInputs};
use seqchar::harness::{build_samples, ExperimentConfig, ModelSource};
use seqchar::search::Method;
use std::time::Instant;

fn main() {
    for method in [Method::Bisection, Method::Beira] {
        let cfg = ExperimentConfig::desk_benchmark(1);
        let set = build_samples(&cfg).unwrap();
        let source = ModelSource::new(&cfg, &set.samples);
        let inputs = AlInputs::new(&set.samples, cfg.topology, cfg.constraint, method);
        let al_cfg = cfg.al.to_al_config(false).clamped_to(set.samples.len());
        let t0 = Instant::now();
        let out = al::run(&inputs, &source, &cfg.search, &al_cfg).unwrap();
        println!("== {method} ({:?})", t0.elapsed());
        for it in &out.iterations {
            println!("  {:>7}: n={:4} mean_calls={:6.3} v={:?} rmse={:?}",
                it.phase.label(), it.batch_size, it.mean_calls,
                it.mean_pred_std.map(|v| (v*100.0).round()/100.0),
                it.rmse_pred_vs_actual.map(|v| (v*100.0).round()/100.0));
        }
        let initial = out.iterations.first().unwrap().mean_calls;
        let sweep = out.iterations.last().unwrap().mean_calls;
        println!("  ratio = {:.3}", sweep / initial);
        let fb = out.records.iter().filter(|r| r.used_fallback).count();
        println!("  fallbacks: {fb}, total calls {}", out.total_calls());
    }
}
