// Discrete infinite divisibility from the signs of log-PGF coefficients.

use support_gaps::series::{did_test, TruncatedSeries, DID_TOLERANCE};

pub fn run_example() -> support_gaps::Result<()> {
    let order = 30;
    let cases: [(&str, Vec<f64>); 3] = [
        ("geometric", (0..=order).map(|n| 0.4 * 0.6f64.powi(n)).collect()),
        (
            "geometric on 3Z",
            (0..=order)
                .map(|n| if n % 3 == 0 { 0.5 * 0.5f64.powi(n / 3) } else { 0.0 })
                .collect(),
        ),
        (
            "Bernoulli",
            [0.5, 0.5]
                .into_iter()
                .chain(std::iter::repeat(0.0))
                .take(order as usize + 1)
                .collect(),
        ),
    ];
    for (name, p) in cases {
        let verdict = did_test(&TruncatedSeries::new(p)?, DID_TOLERANCE);
        println!(
            "{name}: DID = {}, rate = {:?}, violation = {:?}",
            verdict.is_did, verdict.recovered_rate, verdict.violation
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}
