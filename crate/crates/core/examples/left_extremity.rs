// Left extremity read off the Laplace transform, with and without a
// gamma component, and for convolution roots.

use support_gaps::extremity::{
    convolution_root, default_schedule, left_extremity_estimate, mass_at_zero, tail_integral_identity, GammaComponent,
    JumpMeasure, LaplaceSpec,
};

pub fn run_example() -> support_gaps::Result<()> {
    let schedule = default_schedule();
    let plain = LaplaceSpec::new(3.0, 2.0, JumpMeasure::Discrete(vec![(1.0, 0.5), (2.5, 0.5)]), None)?;
    let gamma = LaplaceSpec::new(
        0.7,
        1.0,
        JumpMeasure::Interval { c: 1.0, delta: 0.3 },
        Some(GammaComponent { shape: 2.0, rate: 1.5 }),
    )?;
    for spec in [&plain, &gamma] {
        let est = left_extremity_estimate(spec, &schedule)?;
        let root = left_extremity_estimate(&convolution_root(spec, 3)?, &schedule)?;
        println!(
            "drift {}: estimate {:.6}, cube root {:.6}",
            spec.drift, est.estimate, root.estimate
        );
    }
    let pure = LaplaceSpec::new(0.0, 2.0, JumpMeasure::Discrete(vec![(1.0, 1.0)]), None)?;
    println!("F_4(0) = {:.12}", mass_at_zero(&pure, 4)?);
    let identity = tail_integral_identity(&plain, 1.0)?;
    println!("tail identity at theta = 1: {:.3e}", identity.abs_diff);
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}
