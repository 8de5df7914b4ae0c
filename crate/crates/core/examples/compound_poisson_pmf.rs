// Compound Poisson PMF by Panjer recursion, checked against the
// semigroup membership of each value.

use support_gaps::semigroup::GeneratorSet;
use support_gaps::series::{compound_poisson_pmf, pmf_table, CompoundPoissonSpec, JumpPmf};

pub fn run_example() -> support_gaps::Result<()> {
    let jumps = JumpPmf::new([(3, 0.5), (7, 0.5)])?;
    let spec = CompoundPoissonSpec::new(2.0, jumps, 1.0)?;
    let pmf = compound_poisson_pmf(&spec, 20);
    for row in pmf_table(&pmf, &GeneratorSet::new([3, 7])?) {
        println!("{:>2} {:.6e} {}", row.n, row.p_n, row.member_of_semigroup);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> support_gaps::Result<()> {
    run_example()
}
