// Gaps of the closure of a jump interval, and how the integer
// discretization approaches it.

use support_gaps::levy_interval::{
    compare_discretization, interval_gaps, parse_rational, semigroup_closure, IntervalGaps, IntervalSet,
};

pub fn run_example() -> support_gaps::Result<()> {
    if let IntervalGaps::Finite(report) = interval_gaps(1.0, 0.3)? {
        for g in &report.gaps {
            println!("gap ({:.2}, {:.2}) length {:.2}", g.lo, g.hi, g.length);
        }
        println!("tail from {}", report.tail_start);
    }
    let closure = semigroup_closure(&IntervalSet::interval(1.0, 1.3)?)?;
    println!("closure gaps: {:?}", closure.as_continuum().map(|s| s.gaps()));
    let (c, delta) = (parse_rational("1")?, parse_rational("0.3")?);
    for d in [10, 20, 40] {
        let check = compare_discretization(c, delta, d)?;
        println!(
            "D = {d}: contained = {}, symmetric difference = {:.3}",
            check.contained, check.symmetric_difference
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}
