use seqchar::gp;
use seqchar::harness::{build_samples, ExperimentConfig, table_corners};
use seqchar::oracle::PvtModelMap;
use seqchar::effort::Constraint;
use seqchar::oracle::Topology;

fn main() {
    let cfg = ExperimentConfig::desk_benchmark(1);
    let set = build_samples(&cfg).unwrap();
    let map = PvtModelMap::new(Topology::Dff, Constraint::Setup, 1, 168);
    let roots: Vec<f64> = set.samples.iter().map(|s| map.model(s).true_root(1.1)).collect();
    let feats: Vec<Vec<f64>> = set.samples.iter().map(gp::encode_features).collect();
    println!("root range: {:.2}..{:.2}", roots.iter().cloned().fold(f64::MAX, f64::min), roots.iter().cloned().fold(f64::MIN, f64::max));

    // train on every 13th sample (~123 points), evaluate on the rest
    let train_idx: Vec<usize> = (0..set.samples.len()).step_by(13).collect();
    let tx: Vec<Vec<f64>> = train_idx.iter().map(|i| feats[*i].clone()).collect();
    let ty: Vec<f64> = train_idx.iter().map(|i| roots[*i]).collect();
    let t0 = std::time::Instant::now();
    let model = gp::fit(&tx, &ty).unwrap();
    println!("fit n={} took {:?}", tx.len(), t0.elapsed());
    let h = model.hyperparams();
    println!("sf2={:.4} sn2={:.6}", h.signal_variance, h.noise_variance);
    println!("lengthscales[0..6] (corner p,v,t + lv0..2): {:?}", &h.lengthscales[0..6].iter().map(|l| (l*100.0).round()/100.0).collect::<Vec<_>>());
    println!("lengthscales[100..104]: {:?}", &h.lengthscales[100..104].iter().map(|l| (l*100.0).round()/100.0).collect::<Vec<_>>());

    let mut sq = 0.0; let mut vsum = 0.0; let mut n = 0.0; let mut cover = 0.0;
    for i in 0..set.samples.len() {
        if train_idx.contains(&i) { continue; }
        let p = model.predict_one(&feats[i]).unwrap();
        sq += (p.mu - roots[i]).powi(2); vsum += p.v; n += 1.0;
        if (p.mu - roots[i]).abs() <= p.v { cover += 1.0; }
    }
    println!("holdout rmse={:.3} mean v={:.3} (|err|<=v coverage {:.2})", (sq/n).sqrt(), vsum/n, cover/n);
    let _ = table_corners();
}
