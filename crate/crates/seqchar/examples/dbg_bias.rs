use seqchar::search::{expected_interval_length, solve_bias};

fn main() {
    for &sigma in &[1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0] {
        for k in 1..20 {
            let x0 = k as f64 * 0.05;
            if x0 == 0.5 { continue; }
            let a = solve_bias(x0, sigma);
            let b = solve_bias(1.0 - x0, sigma);
            if (a + b).abs() > 1e-9 {
                println!("ASYM x0={x0:.20} sigma={sigma}: a={a:.15} b={b:.15} diff={:.3e}", (a+b).abs());
                println!("  1-x0 = {:.20}, 1-(1-x0) = {:.20}", 1.0-x0, 1.0-(1.0-x0));
                println!("  E(a)={:.17} E(-b)={:.17}", expected_interval_length(x0, a, sigma), expected_interval_length(x0, -b, sigma));
            }
        }
    }
    println!("done");
}
