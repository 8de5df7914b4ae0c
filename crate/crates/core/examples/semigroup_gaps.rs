// Gaps, Frobenius number and conductor of the semigroup generated by a
// set of jump sizes.

use support_gaps::semigroup::{GapReport, GeneratorSet, NumericalSemigroup};

pub fn run_example() -> support_gaps::Result<()> {
    for gens in [vec![3, 7], vec![4, 9], vec![6, 10, 15], vec![4, 6, 10]] {
        let set = GeneratorSet::new(gens)?;
        let (span, sg) = NumericalSemigroup::generated_by(&set);
        let report = GapReport::new(&set, 3);
        println!(
            "<{:?}>: span {span}, gaps {:?}, frobenius {:?}, runs {:?}",
            set.as_slice(),
            sg.gaps(),
            sg.frobenius(),
            report.gap_runs
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}
