// Monte Carlo realizations never leave the predicted support.

use support_gaps::levy_interval::{semigroup_closure, Closure, IntervalSet};
use support_gaps::semigroup::GeneratorSet;
use support_gaps::series::JumpPmf;
use support_gaps::simulator::{empirical_support_check, sample, JumpLaw, SimulationConfig};

pub fn run_example() -> support_gaps::Result<()> {
    let gens = GeneratorSet::new([3, 7])?;
    let law = JumpLaw::Discrete {
        rate: 3.0,
        jumps: JumpPmf::uniform(&gens),
    };
    let config = SimulationConfig::new(law, vec![1.0, 2.0], 10_000, 42)?;
    let report = empirical_support_check(&sample(&config), &Closure::lattice(&gens), 17.0)?;
    for c in &report.coverage {
        println!(
            "lattice t = {}: observed {}/{} predicted values",
            c.time, c.observed, c.predicted
        );
    }
    let law = JumpLaw::Interval {
        rate: 2.0,
        c: 1.0,
        delta: 0.3,
    };
    let config = SimulationConfig::new(law, vec![1.0, 3.0], 10_000, 42)?;
    let closure = semigroup_closure(&IntervalSet::interval(1.0, 1.3)?)?;
    let report = empirical_support_check(&sample(&config), &closure, 5.0)?;
    println!("interval jumps: containment = {}", report.containment);
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}
