use seqchar::harness::{run_bench, ExperimentConfig};
use std::time::Instant;

fn main() {
    for seed in [1u64, 2, 3] {
        let cfg = ExperimentConfig::desk_benchmark(seed);
        let t0 = Instant::now();
        let out = std::path::PathBuf::from(format!("/tmp/dbg_bench_{seed}"));
        let summary = run_bench(&cfg, &out).unwrap();
        print!("seed {seed} ({:?}): ", t0.elapsed());
        for row in summary.rows.iter().filter(|r| r.corner == "all") {
            print!("{}:{}={:.2} ", row.method.as_str(), row.policy, row.mean_calls);
        }
        println!();
    }
}
