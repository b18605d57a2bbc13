//! Two views of the minor-sum generators. The size-4 sum collapses to Q2 as
//! a polynomial identity, checked exactly. The larger sums evaluate to
//! A^2 B^2 times even characteristic coefficients of the projected angular
//! block, checked numerically on random points.

use galcas::invariants::{charpoly_coeffs_f64, minor_sum, q2};
use galcas::orbitreduce::random_float_dual;
use galcas::polyring::VarTable;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    // Exact identity: the sum of squared pfaffian 4-minors over the rows and
    // columns {i, j, n+1, n+2} is the Gram polynomial Q2, term for term.
    for n in 2..=6 {
        let table = VarTable::new(n);
        let minor = minor_sum(&table, 4).expect("size 4 is available from n = 2");
        let q = q2(&table);
        let zero = minor.sub(&q).expect("same table").is_zero();
        println!("n = {}: 4-minor sum - Q2 == 0 exactly: {} ({} terms)", n, zero, q.num_terms());
    }

    // Numerical identity at n = 5: evaluate the size-6 minor sum at a random
    // point and compare with A^2 B^2 c_2(P K* P), where P projects away the
    // plane spanned by x* and the part of v* orthogonal to it.
    let n = 5;
    let table = VarTable::new(n);
    let m6 = minor_sum(&table, 6).expect("size 6 is available from n = 4");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("\nsize-6 minor sum vs projected characteristic coefficient at n = {}:", n);
    for trial in 0..5 {
        let xi = random_float_dual(n, &mut rng);
        let a = xi.xstar().norm();
        let u1 = xi.xstar() / a;
        let vp = xi.vstar() - u1.scale(u1.dot(xi.vstar()));
        let b = vp.norm();
        let u2 = &vp / b;
        let proj = DMatrix::identity(n, n) - &u1 * u1.transpose() - &u2 * u2.transpose();
        let coeffs = charpoly_coeffs_f64(&(&proj * xi.kstar() * &proj));

        let lhs = m6.evaluate_f64(&xi.to_point()).expect("point has full dimension");
        let rhs = a * a * b * b * coeffs[2];
        println!(
            "  trial {}: minor sum {:+.12e}, A^2 B^2 c_2 {:+.12e}, rel diff {:.2e}",
            trial,
            lhs,
            rhs,
            ((lhs - rhs) / rhs).abs()
        );
    }
}
