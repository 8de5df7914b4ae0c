// Values reachable with exactly n jumps.

use support_gaps::semigroup::{jump_count_values, GeneratorSet};

pub fn run_example() -> support_gaps::Result<()> {
    let gens = GeneratorSet::new([3, 7])?;
    for n in 0..6 {
        let values: Vec<u64> = jump_count_values(&gens, n).into_iter().collect();
        println!("N = {n}: {values:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}
