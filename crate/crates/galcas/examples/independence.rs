//! Certifies algebraic independence of the generators: the Jacobian matrix
//! of the family has full rank at a random rational point, so no polynomial
//! relation can hold among them.
//!
//! Rank at one point is a lower bound for generic rank, which makes a single
//! lucky sample a complete certificate. An unlucky sample can only undercount,
//! and resampling fixes that.

use galcas::galilean::random_rat;
use galcas::invariants::{generator_count, generator_set};
use galcas::polyring::VarTable;
use galcas::ratmat::{rational_rank, RatMat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=5 {
        let table = VarTable::new(n);
        let gens = generator_set(&table);
        let dim = table.dim();
        let point: Vec<_> = (0..dim).map(|_| random_rat(&mut rng)).collect();

        // Row g, column v holds d(gen_g)/d(var_v) at the sampled point.
        let rows: Vec<Vec<_>> = gens
            .iter()
            .map(|gen| {
                (0..dim)
                    .map(|v| {
                        gen.partial(v)
                            .expect("index is in range")
                            .evaluate(&point)
                            .expect("point has full dimension")
                    })
                    .collect()
            })
            .collect();
        let jac = RatMat::from_rows(rows).expect("rows share a length");
        let rank = rational_rank(&jac);
        println!(
            "n = {}: {} generators, Jacobian rank {} at a random point, independent: {}",
            n,
            generator_count(n),
            rank,
            rank == gens.len()
        );
    }
}
