//! Builds the invariant generator set for a range of spatial dimensions and
//! prints each generator, its degree, and its size.
//!
//! The pattern to notice: Q1 and Q2 exist for every n, and a new generator
//! built from larger Pfaffian minors appears each time n grows by two.

use galcas::invariants::{generator_names, generator_set};
use galcas::polyring::VarTable;

fn main() {
    for n in 1..=6 {
        let table = VarTable::new(n);
        let gens = generator_set(&table);
        let names = generator_names(n);
        println!("n = {}: {} generators", n, gens.len());
        for (gen, name) in gens.iter().zip(&names) {
            let degree = gen.degree().expect("generators are nonzero");
            if gen.num_terms() <= 12 {
                println!("  {} (degree {}) = {}", name, degree, gen);
            } else {
                println!("  {} (degree {}), {} terms", name, degree, gen.num_terms());
            }
        }
        println!();
    }
}
