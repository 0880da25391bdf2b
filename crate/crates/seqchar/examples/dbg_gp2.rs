use seqchar::gp;
use seqchar::harness::{build_samples, ExperimentConfig};
use seqchar::oracle::{PvtModelMap, Topology};
use seqchar::effort::Constraint;

fn main() {
    let cfg = ExperimentConfig::desk_benchmark(1);
    let set = build_samples(&cfg).unwrap();
    let map = PvtModelMap::new(Topology::Dff, Constraint::Setup, 1, 168);
    let roots: Vec<f64> = set.samples.iter().map(|s| map.model(s).true_root(1.1)).collect();
    let feats: Vec<Vec<f64>> = set.samples.iter().map(gp::encode_features).collect();
    let train_idx: Vec<usize> = (0..set.samples.len()).step_by(13).collect();
    let tx: Vec<Vec<f64>> = train_idx.iter().map(|i| feats[*i].clone()).collect();
    let ty: Vec<f64> = train_idx.iter().map(|i| roots[*i]).collect();
    let model = gp::fit(&tx, &ty).unwrap();
    let mut errs: Vec<(f64, f64, usize)> = Vec::new();
    for i in 0..set.samples.len() {
        if train_idx.contains(&i) { continue; }
        let p = model.predict_one(&feats[i]).unwrap();
        errs.push(((p.mu - roots[i]).abs(), p.v, i));
    }
    errs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = errs.len();
    for q in [0.5, 0.75, 0.9, 0.95, 0.99] {
        let e = &errs[(q * n as f64) as usize];
        println!("q{:.0}: err={:.3} v={:.3}", q*100.0, e.0, e.1);
    }
    println!("max: err={:.3} v={:.3} sample={} (local0={:.2})", errs[n-1].0, errs[n-1].1, errs[n-1].2, set.samples[errs[n-1].2].local_vars[0]);
    // how many of the worst 20 are sobol row 0 (clamped) samples?
    let worst_local0: Vec<f64> = errs[n-20..].iter().map(|e| set.samples[e.2].local_vars[0]).collect();
    println!("worst-20 lv0: {:?}", worst_local0.iter().map(|v| (v*10.0).round()/10.0).collect::<Vec<_>>());
}
