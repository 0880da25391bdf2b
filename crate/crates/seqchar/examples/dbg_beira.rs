use seqchar::oracle::AnalyticCellModel;
use seqchar::search::{search_beira, Bracket, Classification, Probe, SearchConfig};

fn main() {
    let model = AnalyticCellModel::new(10.0, 4.0, 1.0, 0.1 * 3f64.exp());
    let probe = Probe::new(&model, model.threshold_delay(1.1));
    let bracket = Bracket::new(0.0, 10.0, Classification::Failure, Classification::BelowThreshold).unwrap();
    let r = search_beira(&probe, bracket, &SearchConfig::default()).unwrap();
    println!("calls = {}, root = {}", r.oracle_calls, r.root);
    for e in &r.trace {
        println!("  iter {:2} x={:<22} {:<8} delay={:<22?} L={:?}", e.iter, e.test_point, e.classification.as_str(), e.delay, e.interval_length_after);
    }
}
