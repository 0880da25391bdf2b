use seqchar::oracle::AnalyticCellModel;
use seqchar::search::{search, Bracket, Classification, Method, Probe, SearchConfig, expand_bracket, SlopeHint};
use rand::{Rng, SeedableRng};

fn main() {
    // named hard cases: (d0, x_c, lambda, alpha, bracket lo, hi)
    let alpha = 0.1 * 3f64.exp();
    let cases: Vec<(&str, AnalyticCellModel, f64, f64)> = vec![
        ("len10 mid-root", AnalyticCellModel::new(10.0, 4.0, 1.0, alpha), 0.0, 10.0),
        ("len10 low-root", AnalyticCellModel::new(10.0, 4.0, 1.0, alpha), 5.0, 15.0),
        ("len7 hi-root", AnalyticCellModel::new(10.0, 3.3, 1.0, alpha), 0.0, 7.0),
        ("len7 lo-root", AnalyticCellModel::new(10.0, 4.5, 1.0, alpha), 7.0, 14.0),
    ];
    for (name, model, lo, hi) in cases {
        let probe = Probe::new(&model, model.threshold_delay(1.1));
        let root = model.true_root(1.1);
        print!("{name:16} root={root:.3}: ");
        for m in [Method::Bisection, Method::RegulaFalsi, Method::Quadratic, Method::Brent, Method::Beira] {
            let (lc, hc) = (probe.classify(lo).unwrap(), probe.classify(hi).unwrap());
            let b = Bracket::new(lo, hi, lc.0, hc.0).unwrap().with_delays(lc.1, hc.1);
            match search(m, &probe, b, &SearchConfig::default()) {
                Ok(r) => {
                    let ok = (r.root - root).abs() <= 0.01;
                    print!("{}={}{} ", m.as_str(), r.oracle_calls, if ok {""} else {"!"});
                }
                Err(e) => print!("{}=ERR({e}) ", m.as_str()),
            }
        }
        println!();
    }

    // randomized suite: models + expansion from effort-style intervals
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut totals = std::collections::BTreeMap::new();
    let n = 400;
    let mut worst_beira = 0u64;
    for _ in 0..n {
        let d0 = rng.gen_range(5.0..20.0);
        let lambda = rng.gen_range(0.4..2.5);
        let a = rng.gen_range(0.5..4.0);
        let root_frac = rng.gen_range(0.5..0.95);
        let x_c = root_frac * d0 - lambda * (a / 0.1f64).ln();
        let model = AnalyticCellModel::new(d0, x_c, lambda, a);
        let root = model.true_root(1.1);
        let probe = Probe::new(&model, model.threshold_delay(1.1));
        let l0 = 0.7 * d0;
        let exp = expand_bracket(&probe, l0, l0, SlopeHint::Decreasing, &SearchConfig::default()).unwrap();
        for m in [Method::Bisection, Method::RegulaFalsi, Method::Quadratic, Method::Brent, Method::Beira] {
            let r = search(m, &probe, exp.bracket.clone(), &SearchConfig::default()).unwrap();
            assert!((r.root - root).abs() <= 0.01, "{m}: {} vs {root}", r.root);
            *totals.entry(m.as_str()).or_insert(0u64) += r.oracle_calls;
            if m == Method::Beira { worst_beira = worst_beira.max(r.oracle_calls); }
        }
    }
    println!("\nrandom suite means over {n} (search calls only):");
    for (m, t) in &totals {
        println!("  {m:14} {:.2}", *t as f64 / n as f64);
    }
    println!("  worst beira: {worst_beira}");
}
