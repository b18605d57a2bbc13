//! Generators of the algebra of coadjoint-invariant polynomials on gal(n)*.
//!
//! The first two generators are the classical ones: Q1 = |x*|^2 and
//! Q2 = |x*|^2 |v*|^2 - (x*.v*)^2. The higher ones come from an augmented
//! skew matrix K' built out of K*, v* and x*: summing the principal minors of
//! K' whose index set contains the two border rows yields an invariant for
//! every even minor size. Each such minor is the determinant of a skew
//! submatrix, so it is computed as the square of a Pfaffian, which keeps the
//! expansion far smaller than cofactor determinants would.

use crate::polyring::{Monomial, MultiPoly, VarTable};
use crate::ratmat::{Rat, RatMat};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Q1 = sum_i X_i^2, the squared length of the translation momentum.
pub fn q1(table: &Arc<VarTable>) -> MultiPoly {
    let n = table.n();
    let mut p = MultiPoly::zero(table);
    for i in 1..=n {
        p.add_term(
            Monomial::from_pairs(vec![(table.x_index(i) as u16, 2)]),
            Rat::one(),
        );
    }
    p
}

/// Q2 = |x*|^2 |v*|^2 - (x*.v*)^2, the Gram determinant of x* and v*.
pub fn q2(table: &Arc<VarTable>) -> MultiPoly {
    let n = table.n();
    let xx = q1(table);
    let mut vv = MultiPoly::zero(table);
    let mut xv = MultiPoly::zero(table);
    for i in 1..=n {
        vv.add_term(
            Monomial::from_pairs(vec![(table.v_index(i) as u16, 2)]),
            Rat::one(),
        );
        xv.add_term(
            Monomial::from_pairs(vec![(table.x_index(i) as u16, 1), (table.v_index(i) as u16, 1)]),
            Rat::one(),
        );
    }
    xx.mul(&vv)
        .and_then(|a| a.sub(&xv.mul(&xv)?))
        .expect("all factors share one table")
}

/// The (n+2) x (n+2) skew matrix of linear forms
///
/// ```text
///        [  K*   v*  x* ]
///  K' =  [ -v*^T  0   0 ]
///        [ -x*^T  0   0 ]
/// ```
///
/// whose distinguished principal minors generate the invariant algebra.
pub struct AugmentedMatrix {
    table: Arc<VarTable>,
    entries: Vec<MultiPoly>,
}

impl AugmentedMatrix {
    pub fn new(table: &Arc<VarTable>) -> Self {
        let n = table.n();
        let size = n + 2;
        let mut entries = vec![MultiPoly::zero(table); size * size];
        let mut set = |i: usize, j: usize, p: MultiPoly| {
            entries[i * size + j] = p.neg();
            entries[j * size + i] = p;
        };
        for i in 0..n {
            for j in i + 1..n {
                set(j, i, MultiPoly::var(table, table.k_index(i + 1, j + 1)));
            }
            set(n, i, MultiPoly::var(table, table.v_index(i + 1)));
            set(n + 1, i, MultiPoly::var(table, table.x_index(i + 1)));
        }
        AugmentedMatrix {
            table: table.clone(),
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.table.n() + 2
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.size() + j]
    }

    /// Pfaffian of the principal submatrix on `rows` (even count, ascending).
    pub fn pfaffian(&self, rows: &[usize]) -> MultiPoly {
        let idx: Vec<u8> = rows.iter().map(|&r| r as u8).collect();
        let mut memo: HashMap<Vec<u8>, MultiPoly> = HashMap::new();
        self.pfaffian_memo(&idx, &mut memo)
    }

    fn pfaffian_memo(&self, rows: &[u8], memo: &mut HashMap<Vec<u8>, MultiPoly>) -> MultiPoly {
        debug_assert!(rows.len().is_multiple_of(2));
        if rows.is_empty() {
            return MultiPoly::constant(&self.table, Rat::one());
        }
        if let Some(hit) = memo.get(rows) {
            return hit.clone();
        }
        let l0 = rows[0] as usize;
        let mut acc = MultiPoly::zero(&self.table);
        for k in 1..rows.len() {
            let e = self.entry(l0, rows[k] as usize);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<u8> = rows[1..]
                .iter()
                .copied()
                .filter(|&r| r != rows[k])
                .collect();
            let sub = self.pfaffian_memo(&rest, memo);
            let term = e.mul(&sub).expect("one table");
            // Expansion along the first row alternates signs with the
            // position of the partner index.
            acc = if k % 2 == 1 {
                acc.add(&term).expect("one table")
            } else {
                acc.sub(&term).expect("one table")
            };
        }
        memo.insert(rows.to_vec(), acc.clone());
        acc
    }
}

/// All k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Square of a polynomial, chunked across threads when it is large. Exact
/// coefficient arithmetic makes the merge order irrelevant, so the result is
/// identical at any thread count.
fn square(p: &MultiPoly) -> MultiPoly {
    let terms: Vec<(&Monomial, &Rat)> = p.terms().collect();
    if terms.len() < 128 {
        return p.mul(p).expect("one table");
    }
    let merged = terms
        .par_chunks(32)
        .map(|chunk| {
            let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
            for (m1, c1) in chunk {
                for (m2, c2) in &terms {
                    let m = m1.mul(m2);
                    let c = (*c1).clone() * (*c2).clone();
                    *map.entry(m).or_insert_with(Rat::zero) += c;
                }
            }
            map
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (m, c) in b {
                *a.entry(m).or_insert_with(Rat::zero) += c;
            }
            a
        });
    MultiPoly::from_terms(p.table(), merged.into_iter().collect())
}

/// Sum of the principal `size x size` minors of the augmented matrix whose
/// index set contains both border rows. `size` must be even and lie in
/// 4..=n+2. Each minor is a Pfaffian squared.
pub fn minor_sum(table: &Arc<VarTable>, size: usize) -> Result<MultiPoly> {
    let n = table.n();
    if !size.is_multiple_of(2) || size < 4 || size > n + 2 {
        return Err(Error::OutOfRange {
            what: "minor size",
            got: size.to_string(),
            allowed: "even values in 4..=n+2",
        });
    }
    let aug = AugmentedMatrix::new(table);
    let spatial = subsets(n, size - 2);
    let dets: Vec<MultiPoly> = spatial
        .par_iter()
        .map(|idx| {
            let mut rows: Vec<usize> = idx.clone();
            rows.push(n);
            rows.push(n + 1);
            square(&aug.pfaffian(&rows))
        })
        .collect();
    let mut acc = MultiPoly::zero(table);
    for d in dets {
        acc = acc.add(&d)?;
    }
    Ok(acc)
}

/// Number of generators returned by `generator_set` for gal(n).
pub fn generator_count(n: usize) -> usize {
    match n {
        0 => 0,
        1 => 1,
        2 | 3 => 2,
        _ => 2 + (n - 2) / 2,
    }
}

/// The generating set Q1, Q2, Q3, ... of the invariant algebra: Q1 and Q2,
/// then one minor sum per even size 6, 8, ..., ending at n+2 (n even) or
/// n+1 (n odd).
pub fn generator_set(table: &Arc<VarTable>) -> Vec<MultiPoly> {
    let n = table.n();
    let mut gens = vec![q1(table)];
    if n >= 2 {
        gens.push(q2(table));
    }
    if n >= 4 {
        let mut size = 6;
        while size <= n + 2 {
            gens.push(minor_sum(table, size).expect("size validated by loop bound"));
            size += 2;
        }
    }
    debug_assert_eq!(gens.len(), generator_count(n));
    gens
}

/// Names Q1, Q2, ... aligned with `generator_set`.
pub fn generator_names(n: usize) -> Vec<String> {
    (1..=generator_count(n)).map(|i| format!("Q{}", i)).collect()
}

/// Coefficients [1, c_1, ..., c_m] of det(lambda I - M) over the rationals,
/// by the Faddeev-LeVerrier recurrence (exact, division only by integers).
pub fn charpoly_coeffs(m: &RatMat) -> Vec<Rat> {
    let d = m.nrows();
    assert_eq!(d, m.ncols(), "characteristic polynomial needs a square matrix");
    let mut coeffs = Vec::with_capacity(d + 1);
    coeffs.push(Rat::one());
    let mut mk = m.clone();
    for k in 1..=d {
        let tr: Rat = (0..d).map(|i| mk[(i, i)].clone()).fold(Rat::zero(), |a, b| a + b);
        let ck = -tr / Rat::from_integer(k.into());
        coeffs.push(ck.clone());
        if k < d {
            let mut shifted = mk.clone();
            for i in 0..d {
                shifted[(i, i)] = shifted[(i, i)].clone() + ck.clone();
            }
            mk = m.mul(&shifted);
        }
    }
    coeffs
}

/// Floating-point version of `charpoly_coeffs`: c_k as signed sums of
/// principal k x k minors. Fine for the small matrices used here.
pub fn charpoly_coeffs_f64(m: &DMatrix<f64>) -> Vec<f64> {
    let d = m.nrows();
    assert_eq!(d, m.ncols(), "characteristic polynomial needs a square matrix");
    let mut coeffs = vec![1.0];
    for k in 1..=d {
        let mut sum = 0.0;
        for idx in subsets(d, k) {
            let sub = DMatrix::from_fn(k, k, |i, j| m[(idx[i], idx[j])]);
            sum += sub.determinant();
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(sign * sum);
    }
    coeffs
}
