//! Lifts the generators into the universal enveloping algebra by full
//! symmetrization and confirms the results commute with every basis element.
//!
//! Noncommutative arithmetic gets expensive quickly: degree 6 at n = 3 is
//! still comfortable, the next size up is already a lunch break.

use galcas::envelope::Envelope;
use galcas::invariants::{generator_names, generator_set};
use std::time::Instant;

fn main() {
    for n in 1..=3 {
        let env = Envelope::new(n).expect("n is in range");
        let gens = generator_set(env.table());
        let names = generator_names(n);
        println!("n = {}:", n);
        for (q, name) in gens.iter().zip(&names) {
            let start = Instant::now();
            let lifted = env.symmetrize(q).expect("tables match");
            let (central, witness) = env.is_central(&lifted).expect("tables match");
            let secs = start.elapsed().as_secs_f64();
            assert!(witness.is_none(), "commutator witness for {}", name);
            println!(
                "  lambda({}): {} PBW terms, central: {} ({:.2}s)",
                name,
                lifted.num_terms(),
                central,
                secs
            );
        }
    }

    // The symmetrization map is not an algebra morphism, but the defect of
    // lambda(pq) - lambda(p) lambda(q) sits at least two degrees below pq.
    let env = Envelope::new(2).expect("n is in range");
    let gens = generator_set(env.table());
    let ok = env
        .degree_drop_check(&gens[0], &gens[0])
        .expect("tables match");
    println!("\ndegree drop for lambda(Q1^2) - lambda(Q1)^2 at n = 2: {}", ok);
}
