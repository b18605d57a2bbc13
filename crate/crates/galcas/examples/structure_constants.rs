//! Prints the full bracket table of gal(n) in the matrix basis, then shows
//! how the constants change when the basis is rescaled to match the dual
//! coordinates used by the Lie-Poisson bracket.

use galcas::galilean::StructureConstants;
use num_traits::{One, Signed};

fn print_table(sc: &StructureConstants) {
    let labels = sc.labels();
    let mut count = 0;
    for a in 0..sc.dim() {
        for b in 0..sc.dim() {
            let terms = sc.bracket(a, b);
            if terms.is_empty() {
                continue;
            }
            let mut rhs = String::new();
            for (k, (c, coeff)) in terms.iter().enumerate() {
                let mag = coeff.abs();
                let lead = if coeff.is_negative() { "-" } else if k > 0 { "+" } else { "" };
                if k > 0 {
                    rhs.push(' ');
                }
                rhs.push_str(lead);
                if k > 0 {
                    rhs.push(' ');
                }
                if !mag.is_one() {
                    rhs.push_str(&format!("{} ", mag));
                }
                rhs.push_str(&labels[*c].display());
            }
            println!("  [{}, {}] = {}", labels[a].display(), labels[b].display(), rhs);
            count += 1;
        }
    }
    println!("  ({} nonzero ordered pairs)", count);
}

fn main() {
    let n = 2;
    let plain = StructureConstants::new(n).expect("n is in range");
    println!("gal({}) in the matrix basis E, B, P, H:", n);
    print_table(&plain);

    // The Lie-Poisson bracket on polynomials in the dual coordinates uses the
    // same constants rescaled by the pairing weights (the K coordinates pair
    // against 2 E(i,j), so rows and columns touching K pick up factors of 2).
    let dual = StructureConstants::coordinate_dual(n).expect("n is in range");
    println!("\nsame brackets in the coordinate-dual scaling:");
    print_table(&dual);

    // Both tables close on the basis and satisfy Jacobi; the constructors
    // check this and would have returned an error otherwise.
    println!("\nboth tables passed the built-in closure and Jacobi checks");
}
